"""Cell-level measures and the identity verifiers.

Measures are only ever evaluated on finite unions of cells.  The empirical
hitting distribution is a :class:`CellHistogram` of limit-cell estimates;
the reference measure gives every level-n cell mass (d+1)^-n.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.stats import norm

from .coupling import folded_histogram
from .exact import EXACT_BUDGET, ExactDist, exit_distribution
from .linalg import rank_rational, solve_rational
from .symbolic import GasketConfig, Word, format_word, words
from .symmetry import Permutation, act_word, group_elements, reflection, stabilizer_of_zero
from .walk import DEFAULT_BURN, decode_word, simulate_counts

# two-sided tail of a single 4-sigma test
ALPHA_4SIGMA = 2 * norm.sf(4.0)


@dataclass(frozen=True)
class CellSet:
    level: int
    members: frozenset[Word]

    def __post_init__(self):
        if any(len(w) != self.level for w in self.members):
            raise ValueError(f"all members must have length {self.level}")

    @classmethod
    def of(cls, ws: Iterable[Word], level: int | None = None) -> CellSet:
        ws = frozenset(tuple(w) for w in ws)
        if level is None:
            if not ws:
                raise ValueError("level is required for an empty set")
            level = len(next(iter(ws)))
        return cls(level, ws)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def label(self, cfg: GasketConfig | None = None) -> str:
        return "{" + ",".join(format_word(w, cfg) for w in sorted(self.members)) + "}"


@dataclass
class CellHistogram:
    level: int
    counts: dict[Word, int]
    total: int

    def __post_init__(self):
        if self.total != sum(self.counts.values()):
            raise ValueError("total must equal the sum of counts")

    @classmethod
    def from_array(cls, counts: np.ndarray, level: int, cfg: GasketConfig) -> CellHistogram:
        cmap = {decode_word(c, level, cfg.d + 1): int(v)
                for c, v in enumerate(counts) if v}
        return cls(level, cmap, int(counts.sum()))

    def merge(self, other: CellHistogram) -> CellHistogram:
        if other.level != self.level:
            raise ValueError("cannot merge histograms of different levels")
        out = dict(self.counts)
        for w, c in other.counts.items():
            out[w] = out.get(w, 0) + c
        return CellHistogram(self.level, out, self.total + other.total)

    def fraction(self, w: Word) -> float:
        return self.counts.get(w, 0) / self.total if self.total else 0.0

    def count(self, s: CellSet) -> int:
        """Samples whose level-``s.level`` cell lies in s."""
        if s.level > self.level:
            raise ValueError("cell set is finer than the histogram")
        return sum(c for w, c in self.counts.items() if w[:s.level] in s.members)

    def estimate(self, s: CellSet) -> float:
        return self.count(s) / self.total


def mu_cell_mass(x: Word, cfg: GasketConfig) -> Fraction:
    return Fraction(1, (cfg.d + 1) ** len(x))


def mu_set_mass(s: CellSet, cfg: GasketConfig) -> Fraction:
    return len(s) * Fraction(1, (cfg.d + 1) ** s.level)


def apply_group(s: CellSet, g: Permutation) -> CellSet:
    return CellSet(s.level, frozenset(act_word(g, w) for w in s.members))


def is_invariant(s: CellSet, group: Iterable[Permutation]) -> bool:
    return all(apply_group(s, g) == s for g in group)


def symmetrize(s: CellSet, cfg: GasketConfig) -> CellSet:
    """Smallest set containing s that is invariant under the stabilizer of 0."""
    out = set()
    for g in stabilizer_of_zero(cfg):
        out |= apply_group(s, g).members
    return CellSet(s.level, frozenset(out))


def unfold_selfsimilar(s: CellSet, cfg: GasketConfig,
                       symmetrize_input: bool = False) -> tuple[CellSet, CellSet]:
    """(preimage under the 0-map, union of R_0i images) of a set inside 0X."""
    if s.level < 1 or any(w[0] != 0 for w in s.members):
        raise ValueError("every member must start with symbol 0")
    if not is_invariant(s, stabilizer_of_zero(cfg)):
        if not symmetrize_input:
            raise ValueError(
                f"{s.label(cfg)} is not invariant under the stabilizer of 0; "
                "pass symmetrize_input=True to symmetrize it")
        s = symmetrize(s, cfg)
    pre = CellSet(s.level - 1, frozenset(w[1:] for w in s.members))
    union: set[Word] = set()
    for i in range(cfg.d + 1):
        union |= apply_group(s, reflection(0, i, cfg)).members
    return pre, CellSet(s.level, frozenset(union))


# -- statistics -----------------------------------------------------------

def bonferroni_threshold(m: int) -> float:
    """z-threshold whose family-wise level over m tests equals one 4-sigma test."""
    return float(norm.isf(ALPHA_4SIGMA / (2 * max(m, 1))))


@dataclass
class Comparison:
    lhs: str
    rhs: str
    estimate_lhs: float
    estimate_rhs: float
    se: float
    z: float = 0.0
    p_value: float = 1.0
    threshold: float = 4.0
    passed: bool = True

    def finalize(self, threshold: float) -> Comparison:
        diff = self.estimate_lhs - self.estimate_rhs
        self.threshold = threshold
        if self.se > 0:
            self.z = diff / self.se
            self.p_value = float(2 * norm.sf(abs(self.z)))
            self.passed = abs(self.z) < threshold
        else:
            self.z = 0.0 if diff == 0 else math.inf
            self.p_value = 1.0 if diff == 0 else 0.0
            self.passed = diff == 0
        return self

    def as_json(self) -> dict:
        return {
            "lhs": self.lhs, "rhs": self.rhs,
            "estimate_lhs": self.estimate_lhs, "estimate_rhs": self.estimate_rhs,
            "se": self.se, "pass": self.passed,
            "z": self.z, "p_value": self.p_value, "threshold": self.threshold,
        }


def paired_comparison(h: CellHistogram, a: CellSet, b: CellSet,
                      cfg: GasketConfig | None = None) -> Comparison:
    """nu(a) vs nu(b) from one sample; SE of the mean of 1_a - 1_b."""
    pa = pb = pab = 0
    for w, c in h.counts.items():
        ina = w[:a.level] in a.members
        inb = w[:b.level] in b.members
        pa += c * ina
        pb += c * inb
        pab += c * (ina and inb)
    n = h.total
    ea, eb = pa / n, pb / n
    second = (pa + pb - 2 * pab) / n
    var = max(second - (ea - eb) ** 2, 0.0)
    return Comparison(a.label(cfg), b.label(cfg), ea, eb, math.sqrt(var / n))


def two_sample_comparison(h1: CellHistogram, a: CellSet, h2: CellHistogram, b: CellSet,
                          lhs: str, rhs: str) -> Comparison:
    e1, e2 = h1.estimate(a), h2.estimate(b)
    se = math.sqrt(e1 * (1 - e1) / h1.total + e2 * (1 - e2) / h2.total)
    return Comparison(lhs, rhs, e1, e2, se)


def total_variation(h1: CellHistogram, h2: CellHistogram | ExactDist) -> float:
    if isinstance(h2, ExactDist):
        if h2.level != h1.level:
            raise ValueError("level mismatch")
        other = {w: float(p) for w, p in zip(h2.support, h2.probs)}
    else:
        if h2.level != h1.level:
            raise ValueError("level mismatch")
        other = {w: c / h2.total for w, c in h2.counts.items()}
    keys = set(other) | set(h1.counts)
    return 0.5 * sum(abs(h1.fraction(w) - other.get(w, 0.0)) for w in keys)


def uniform_dist(level: int, cfg: GasketConfig) -> ExactDist:
    support = list(words(level, cfg))
    return ExactDist(support, [mu_cell_mass(w, cfg) for w in support])


# -- reports --------------------------------------------------------------

@dataclass
class Report:
    identity: str
    d: int
    level: int
    comparisons: list[Comparison] = field(default_factory=list)
    exact_checks: list[dict] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (all(c.passed for c in self.comparisons)
                and all(e["pass"] for e in self.exact_checks))

    def finalize(self) -> Report:
        thr = bonferroni_threshold(len(self.comparisons))
        for c in self.comparisons:
            c.finalize(thr)
        return self

    def as_json(self) -> dict:
        return {
            "identity": self.identity, "d": self.d, "level": self.level,
            "pass": self.passed,
            "params": self.params,
            "exact_checks": self.exact_checks,
            "comparisons": [c.as_json() for c in self.comparisons],
        }

    def to_json(self, **extra) -> str:
        doc = dict(extra)
        doc.update(self.as_json())
        return json.dumps(doc, indent=2, sort_keys=False)


def limit_histogram(start: Word, level: int, walks: int, seed: int, cfg: GasketConfig,
                    burn: int = DEFAULT_BURN, workers: int | None = 1,
                    first_stream: int = 0) -> CellHistogram:
    counts = simulate_counts(start, level, burn, walks, seed, cfg, workers, first_stream)
    return CellHistogram.from_array(counts, level, cfg)


def sample_cell_sets(level: int, count: int, seed: int, cfg: GasketConfig,
                     max_size: int = 4) -> list[CellSet]:
    """Distinct deterministic pseudo-random nonempty sets of level-n cells."""
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), 0xCE11]))
    all_words = list(words(level, cfg))
    out: list[CellSet] = []
    for _ in range(50 * count):
        if len(out) >= count:
            break
        size = int(rng.integers(1, min(max_size, len(all_words)) + 1))
        picks = rng.choice(len(all_words), size=size, replace=False)
        s = CellSet(level, frozenset(all_words[i] for i in picks))
        if s not in out:
            out.append(s)
    return out


def sample_invariant_sets(level: int, count: int, seed: int, cfg: GasketConfig,
                          max_orbits: int = 3) -> list[CellSet]:
    """Stabilizer-invariant sets inside 0X: {0^n} first, then random orbit unions."""
    orbits = stabilizer_orbits(level, cfg)
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), 0x5E1F]))
    out = [CellSet(level, frozenset({(0,) * level}))]
    for _ in range(50 * count):
        if len(out) >= count:
            break
        k = int(rng.integers(1, min(max_orbits, len(orbits)) + 1))
        picks = rng.choice(len(orbits), size=k, replace=False)
        s = CellSet(level, frozenset().union(*(orbits[i] for i in picks)))
        if s not in out:
            out.append(s)
    return out


def stabilizer_orbits(level: int, cfg: GasketConfig) -> list[frozenset[Word]]:
    """Orbits of the stabilizer of 0 on level-n words starting with 0."""
    stab = stabilizer_of_zero(cfg)
    seen: set[Word] = set()
    orbits = []
    for tail in words(level - 1, cfg):
        w = (0,) + tail
        if w in seen:
            continue
        orb = frozenset(act_word(g, w) for g in stab)
        seen |= orb
        orbits.append(orb)
    return orbits


def _exact_group_check(level: int, cfg: GasketConfig) -> dict:
    if sum((cfg.d + 1) ** k for k in range(level)) > EXACT_BUDGET:
        return {"check": "exit law g-invariance", "pass": True, "skipped": True}
    dist = exit_distribution((), level, cfg).as_dict()
    ok = all(dist[act_word(g, w)] == p for g in group_elements(cfg) for w, p in dist.items())
    return {"check": f"exit law at level {level} is invariant under all "
                     f"{math.factorial(cfg.d + 1)} symmetries", "pass": ok}


def verify_group_invariance(level: int, walks: int, seed: int, cfg: GasketConfig,
                            n_sets: int = 20, burn: int = DEFAULT_BURN,
                            workers: int | None = 1,
                            sets: list[CellSet] | None = None,
                            histogram: CellHistogram | None = None) -> Report:
    """nu(B) = nu(gB): exact at the exit level, statistically in the limit.

    A precomputed root histogram at this level may be passed as ``histogram``.
    """
    rep = Report("group", cfg.d, level,
                 params={"walks": walks, "seed": seed, "burn": burn, "n_sets": n_sets})
    rep.exact_checks.append(_exact_group_check(level, cfg))
    h = histogram if histogram is not None else limit_histogram(
        (), level, walks, seed, cfg, burn, workers)
    if sets is None:
        sets = sample_cell_sets(level, n_sets, seed, cfg)
    for b in sets:
        for g in group_elements(cfg):
            if g.is_identity():
                continue
            c = paired_comparison(h, b, apply_group(b, g), cfg)
            c.rhs = f"{g.name()}{c.rhs}"
            rep.comparisons.append(c)
    return rep.finalize()


def verify_selfsimilar(level: int, walks: int, seed: int, cfg: GasketConfig,
                       n_sets: int = 8, burn: int = DEFAULT_BURN,
                       workers: int | None = 1, fold_walks: int = 0,
                       sets: list[CellSet] | None = None,
                       histogram: CellHistogram | None = None) -> Report:
    """nu(preimage of B) = nu(union of R_0i B) for stabilizer-invariant B in 0X.

    With ``fold_walks > 0`` the folded walk's limit cell is also compared to
    nu(preimage of B) on independent streams.
    """
    if level < 2:
        raise ValueError("level must be >= 2")
    rep = Report("selfsimilar", cfg.d, level,
                 params={"walks": walks, "seed": seed, "burn": burn, "n_sets": n_sets,
                         "fold_walks": fold_walks})
    h = histogram if histogram is not None else limit_histogram(
        (), level, walks, seed, cfg, burn, workers)
    if sets is None:
        sets = sample_invariant_sets(level, n_sets, seed, cfg)
    fh = None
    if fold_walks:
        fcounts = folded_histogram(level + burn, fold_walks, seed, cfg, first_stream=walks)
        tot = sum(fcounts.values())
        agg: dict[Word, int] = {}
        for w, c in fcounts.items():
            agg[w[:level]] = agg.get(w[:level], 0) + c
        fh = CellHistogram(level, agg, tot)
    for b in sets:
        pre, union = unfold_selfsimilar(b, cfg)
        rep.exact_checks.append({
            "check": f"mu{pre.label(cfg)} == mu(union of R_0i{b.label(cfg)})",
            "pass": mu_set_mass(pre, cfg) == mu_set_mass(union, cfg)})
        rep.exact_checks.append({
            "check": f"(union of R_0i{b.label(cfg)}) restricted to 0X is the set itself",
            "pass": CellSet(level, frozenset(w for w in union.members if w[0] == 0)) == b})
        c = paired_comparison(h, pre, union, cfg)
        c.lhs, c.rhs = f"S0^-1{b.label(cfg)}", f"U_i R_0i{b.label(cfg)}"
        rep.comparisons.append(c)
        if fh is not None:
            rep.comparisons.append(two_sample_comparison(
                fh, b, h, pre, f"folded{b.label(cfg)}", f"S0^-1{b.label(cfg)}"))
    return rep.finalize()


def verify_shift_identity(x: Word, level: int, walks: int, seed: int, cfg: GasketConfig,
                          n_sets: int = 4, burn: int = DEFAULT_BURN,
                          workers: int | None = 1,
                          sets: list[CellSet] | None = None) -> Report:
    """nu_{sigma x}(preimage of B) = nu_x(union of R_0i B), x = 0 sigma(x)."""
    if not x or x[0] != 0:
        raise ValueError(f"start {x!r} must start with symbol 0")
    if level < 2:
        raise ValueError("level must be >= 2")
    rep = Report("shift", cfg.d, level,
                 params={"walks": walks, "seed": seed, "burn": burn, "n_sets": n_sets,
                         "start": format_word(x, cfg)})
    h_shift = limit_histogram(x[1:], level - 1, walks, seed, cfg, burn, workers)
    h_x = limit_histogram(x, level, walks, seed, cfg, burn, workers, first_stream=walks)
    if sets is None:
        sets = sample_invariant_sets(level, n_sets, seed, cfg)
    sx, xs = format_word(x[1:], cfg), format_word(x, cfg)
    for b in sets:
        pre, union = unfold_selfsimilar(b, cfg)
        rep.comparisons.append(two_sample_comparison(
            h_shift, pre, h_x, union,
            f"nu_{sx}(S0^-1{b.label(cfg)})", f"nu_{xs}(U_i R_0i{b.label(cfg)})"))
    return rep.finalize()


# -- exact set algebra and the uniqueness argument -------------------------

def check_unfold_algebra(level: int, cfg: GasketConfig, max_subsets: int = 1 << 15) -> dict:
    """For every stabilizer-invariant B inside 0X at this level (all unions of
    orbits, up to ``max_subsets``): the union of R_0i B is invariant under the
    whole group and meets 0X exactly in B."""
    all_words = list(words(level, cfg))
    index = {w: i for i, w in enumerate(all_words)}
    size = len(all_words)

    def perm_index(g: Permutation) -> np.ndarray:
        return np.array([index[act_word(g, w)] for w in all_words])

    orbits = stabilizer_orbits(level, cfg)
    orb_mat = np.zeros((len(orbits), size), dtype=bool)
    for k, orb in enumerate(orbits):
        for w in orb:
            orb_mat[k, index[w]] = True
    n_orb = len(orbits)
    if 2 ** n_orb <= max_subsets:
        masks = np.array(list(itertools.product([False, True], repeat=n_orb)), dtype=bool)
    else:
        # every single orbit and every pair; unions of these are covered by
        # distributivity of images and intersections over unions
        rows = [np.eye(n_orb, dtype=bool)[i] for i in range(n_orb)]
        rows += [np.eye(n_orb, dtype=bool)[i] | np.eye(n_orb, dtype=bool)[j]
                 for i in range(n_orb) for j in range(i + 1, n_orb)]
        masks = np.array(rows)
    b = (masks.astype(np.int32) @ orb_mat.astype(np.int32)) > 0
    union = np.zeros_like(b)
    for i in range(cfg.d + 1):
        # w in R_0i B  <=>  R_0i w in B
        union |= b[:, perm_index(reflection(0, i, cfg))]
    invariant = all(np.array_equal(union[:, perm_index(g)], union)
                    for g in group_elements(cfg))
    zero_part = np.array([w[0] == 0 for w in all_words])
    restricts = np.array_equal(union & zero_part[None, :], b)
    return {"level": level, "d": cfg.d, "sets": int(len(masks)),
            "exhaustive": bool(2 ** n_orb <= max_subsets),
            "invariant": bool(invariant), "restricts": bool(restricts),
            "pass": bool(invariant and restricts)}


def derive_cell_masses(max_level: int, cfg: GasketConfig) -> dict[int, dict]:
    """Run the uniqueness induction on cell masses.

    At each level m+1 the unknowns are the masses of group orbits of words
    (group invariance makes them constant on orbits).  Each stabilizer orbit
    of a level-m word x gives the equation

        lambda(union over i of R_0i of the orbit of 0x) = lambda(orbit of x),

    with the right side known from level m.  Returns, per level, the number of
    unknowns, the rank of the system and whether its unique solution is
    (d+1)^-(m+1) on every cell.
    """
    group = group_elements(cfg)
    stab = stabilizer_of_zero(cfg)
    known: dict[Word, Fraction] = {(): Fraction(1)}
    out: dict[int, dict] = {}
    for m in range(max_level):
        level_words = list(words(m + 1, cfg))
        orbit_of: dict[Word, int] = {}
        orbit_list: list[frozenset[Word]] = []
        for w in level_words:
            if w in orbit_of:
                continue
            orb = frozenset(act_word(g, w) for g in group)
            for v in orb:
                orbit_of[v] = len(orbit_list)
            orbit_list.append(orb)
        n_var = len(orbit_list)
        rows, rhs = [], []
        seen: set[Word] = set()
        for x in words(m, cfg):
            if m > 0 and x in seen:
                continue
            orb_x = frozenset(act_word(g, x) for g in stab)
            seen |= orb_x
            b = CellSet(m + 1, frozenset((0,) + v for v in orb_x))
            pre, union = unfold_selfsimilar(b, cfg)
            row = [Fraction(0)] * n_var
            for w in union.members:
                row[orbit_of[w]] += 1
            rows.append(row)
            rhs.append(sum(known[v] for v in pre.members))
        rank = rank_rational(rows)
        unique = rank == n_var
        ok = False
        if unique:
            # square up the system by taking an independent subset of rows
            basis: list[int] = []
            for k in range(len(rows)):
                if rank_rational([rows[i] for i in basis + [k]]) > len(basis):
                    basis.append(k)
                if len(basis) == n_var:
                    break
            sol = solve_rational([rows[i] for i in basis], [rhs[i] for i in basis])
            consistent = all(sum(r[j] * sol[j] for j in range(n_var)) == v
                             for r, v in zip(rows, rhs))
            target = Fraction(1, (cfg.d + 1) ** (m + 1))
            ok = consistent and all(v == target for v in sol)
            for w in level_words:
                known[w] = sol[orbit_of[w]]
        out[m + 1] = {"unknowns": n_var, "equations": len(rows), "rank": rank,
                      "unique": unique, "uniform": ok}
        if not unique:
            break
    return out


def histogram_rows(h: CellHistogram, cfg: GasketConfig) -> list[tuple[str, int, float]]:
    """(word, count, fraction) for every cell of the level, lexicographic."""
    return [(format_word(w, cfg), h.counts.get(w, 0), h.fraction(w))
            for w in words(h.level, cfg)]

"""Reflection coupling: from a walk on X to a simple random walk on 0X.

The walk is time-changed to the chain Y_k = Z_{T_k}, where T_{k+1} is the
first time after T_k that Z leaves {Y_k, root} union N(Y_k).  Every time the
parity of Y changes from a to b the running product G picks up the
transposition R_ab on the right, and the folded walk is  Z~_k = G Y_k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .geometry import degree, neighbors
from .linalg import solve_exact
from .rng import CounterStream
from .symbolic import GasketConfig, Word, format_word, neighbor_set, parity
from .symmetry import Permutation, act_word
from .walk import DEFAULT_STEP_CAP, StepCapExceeded, WalkPath, _as_stream, step


class CouplingError(AssertionError):
    """A structural property of the reflection coupling failed."""


def _skip_set(y: Word, cfg: GasketConfig) -> set[Word]:
    return {y, ()} | neighbor_set(y, cfg)


def extract_y_chain(path: Sequence[Word] | WalkPath, cfg: GasketConfig) -> list[tuple[int, Word]]:
    """(T_k, Y_k) for every stopping time realized within the path."""
    steps = path.steps if isinstance(path, WalkPath) else list(path)
    out: list[tuple[int, Word]] = []
    skip: set[Word] | None = None
    for n, z in enumerate(steps):
        if skip is None:
            if z != ():
                out.append((n, z))
                skip = _skip_set(z, cfg)
        elif z not in skip:
            out.append((n, z))
            skip = _skip_set(z, cfg)
    return out


class Folder:
    """Online folding of a Y-chain.  Feed Y_0, Y_1, ... to ``push``."""

    def __init__(self, cfg: GasketConfig, check: bool = True):
        self.cfg = cfg
        self.check = check
        self.g: Permutation | None = None
        self.l = -1
        self.k = -1
        self.y: Word | None = None

    def push(self, y: Word) -> Word:
        size = self.cfg.d + 1
        if self.g is None:
            self.g = Permutation.transposition(0, parity(y), size)
            self.l = 0
        else:
            a, b = parity(self.y), parity(y)
            if a != b:
                if self.check:
                    r = Permutation.transposition(a, b, size)
                    if act_word(r, y) == self.y:
                        raise CouplingError(
                            f"reflected step {self.y!r} -> {y!r} stays in place")
                self.g = self.g @ Permutation.transposition(a, b, size)
                self.l += 1
        self.y = y
        self.k += 1
        zt = act_word(self.g, y)
        if self.check and zt[:1] != (0,):
            raise CouplingError(f"folded vertex {zt!r} is outside 0X")
        return zt


@dataclass
class CouplingRow:
    n: int
    z: Word
    k: int | None = None
    y: Word | None = None
    l: int | None = None
    g: Permutation | None = None
    z_tilde: Word | None = None


@dataclass
class CouplingTrace:
    d: int
    rows: list[CouplingRow] = field(default_factory=list)

    def stops(self) -> list[CouplingRow]:
        return [r for r in self.rows if r.k is not None]

    def y_chain(self) -> list[Word]:
        return [r.y for r in self.stops()]

    def folded(self) -> list[Word]:
        return [r.z_tilde for r in self.stops()]

    def table(self) -> dict[str, list]:
        """Column-per-row layout: one list per quantity, blanks as None."""
        cfg = GasketConfig(self.d)

        def fw(w):
            return None if w is None else format_word(w, cfg)

        return {
            "n": [r.n for r in self.rows],
            "Z_n": [fw(r.z) for r in self.rows],
            "k": [r.k for r in self.rows],
            "Y_k": [fw(r.y) for r in self.rows],
            "L_k": [r.l for r in self.rows],
            "G_L_k": [None if r.g is None else r.g.name() for r in self.rows],
            "Z~_k": [fw(r.z_tilde) for r in self.rows],
        }

    def to_json(self, **extra) -> str:
        doc = dict(extra)
        doc.update({"d": self.d, "table": self.table()})
        return json.dumps(doc, indent=2, ensure_ascii=False)


def fold(path: Sequence[Word] | WalkPath, cfg: GasketConfig, check: bool = True) -> CouplingTrace:
    steps = path.steps if isinstance(path, WalkPath) else list(path)
    stops = dict(extract_y_chain(steps, cfg))
    folder = Folder(cfg, check=check)
    trace = CouplingTrace(cfg.d)
    prev_zt: Word | None = None
    for n, z in enumerate(steps):
        row = CouplingRow(n, z)
        if n in stops:
            zt = folder.push(z)
            if check and prev_zt is not None and not _adjacent_in_0x(prev_zt, zt):
                raise CouplingError(f"folded steps {prev_zt!r} -> {zt!r} are not 0X-adjacent")
            prev_zt = zt
            row.k, row.y, row.l, row.g, row.z_tilde = folder.k, z, folder.l, folder.g, zt
        trace.rows.append(row)
    return trace


def _adjacent_in_0x(a: Word, b: Word) -> bool:
    from .geometry import adjacent_combinatorial
    return a[:1] == b[:1] == (0,) and adjacent_combinatorial(a, b)


def degree_in_0x(x: Word, cfg: GasketConfig) -> int:
    """Degree of 0w in the subgraph induced on words starting with 0."""
    if x[:1] != (0,):
        raise ValueError(f"{x!r} is not in 0X")
    nl = neighbors(x, cfg)
    return sum(1 for y in nl.all() if y[:1] == (0,))


def folded_walk_endpoint(start: Word, level: int, rng, cfg: GasketConfig,
                         step_cap: int = DEFAULT_STEP_CAP) -> Word:
    """First vertex of length ``level`` visited by the folded walk."""
    if level < 1:
        raise ValueError("level must be >= 1")
    stream = _as_stream(rng)
    folder = Folder(cfg, check=False)
    z = start
    skip: set[Word] | None = None
    if z != ():
        zt = folder.push(z)
        skip = _skip_set(z, cfg)
        if len(zt) == level:
            return zt
    for _ in range(step_cap):
        z = step(z, stream, cfg)
        if skip is None:
            if z == ():
                continue
        elif z in skip:
            continue
        zt = folder.push(z)
        skip = _skip_set(z, cfg)
        if len(zt) >= level:
            return zt[:level]
    raise StepCapExceeded(f"folded walk did not reach level {level} in {step_cap} steps")


# -- exact laws -----------------------------------------------------------

@lru_cache(maxsize=None)
def _y_kernel(y: Word, d: int) -> tuple[tuple[Word, Fraction], ...]:
    """Exact law of Y_{k+1} given Y_k = y: exit law of the base walk from the
    skip set {y, root} u N(y), started at y."""
    cfg = GasketConfig(d)
    skip = _skip_set(y, cfg)
    # transient states: the part of the skip set reachable from y inside it
    reach = [y]
    seen = {y}
    while len(seen) < len(skip):
        grown = False
        for s in list(reach):
            for t in neighbors(s, cfg).all():
                if t in skip and t not in seen:
                    seen.add(t)
                    reach.append(t)
                    grown = True
        if not grown:
            break
    index = {s: i for i, s in enumerate(reach)}
    matrix = []
    for s in reach:
        row = {index[s]: degree(s, cfg)}
        for t in neighbors(s, cfg).all():
            if t in index:
                row[index[t]] = row.get(index[t], 0) - 1
        matrix.append(row)
    rhs = [{0: 1} if s == y else {} for s in reach]
    u = [sol.get(0, Fraction(0)) for sol in solve_exact(matrix, rhs)]
    law: dict[Word, Fraction] = {}
    for s in reach:
        for t in neighbors(s, cfg).all():
            if t not in index:
                law[t] = law.get(t, Fraction(0)) + u[index[s]]
    return tuple(sorted(law.items()))


def y_kernel(y: Word, cfg: GasketConfig) -> dict[Word, Fraction]:
    return dict(_y_kernel(y, cfg.d))


def folded_path_law(steps: int, cfg: GasketConfig, start: Word = ()) -> dict[tuple[Word, ...], Fraction]:
    """Exact law of (Z~_0, ..., Z~_steps) by enumerating Y-chain paths.

    Each Y transition is the exact exit law of the base walk from the
    current skip set, so excursions of any length are accounted for.
    """
    if start == ():
        first = [((i,), Fraction(1, cfg.d + 1)) for i in range(cfg.d + 1)]
    else:
        first = [(start, Fraction(1))]
    law: dict[tuple[Word, ...], Fraction] = {}

    def rec(folder: Folder, ys: list[Word], zs: tuple[Word, ...], p: Fraction):
        if len(zs) == steps + 1:
            law[zs] = law.get(zs, Fraction(0)) + p
            return
        for y2, q in _y_kernel(ys[-1], cfg.d):
            f2 = _clone(folder)
            zt = f2.push(y2)
            rec(f2, ys + [y2], zs + (zt,), p * q)

    for y0, p0 in first:
        f = Folder(cfg)
        zt = f.push(y0)
        rec(f, [y0], (zt,), p0)
    return law


def _clone(f: Folder) -> Folder:
    c = Folder(f.cfg, f.check)
    c.g, c.l, c.k, c.y = f.g, f.l, f.k, f.y
    return c


def srw_path_law_0x(steps: int, cfg: GasketConfig) -> dict[tuple[Word, ...], Fraction]:
    """Law of the first ``steps`` moves of the simple random walk on 0X from 0:
    every path z_0 = 0, ..., z_steps has probability prod 1/deg_0(z_k)."""
    law: dict[tuple[Word, ...], Fraction] = {}

    def rec(path: tuple[Word, ...], p: Fraction):
        if len(path) == steps + 1:
            law[path] = p
            return
        x = path[-1]
        nbrs = [y for y in neighbors(x, cfg).all() if y[:1] == (0,)]
        for y in nbrs:
            rec(path + (y,), p / len(nbrs))

    rec(((0,),), Fraction(1))
    return law


def enumerate_base_paths(horizon: int, cfg: GasketConfig,
                         start: Word = ()) -> Iterator[tuple[tuple[Word, ...], int]]:
    """All walk paths with ``horizon`` steps from ``start``, with the
    denominator D of their probability 1/D."""

    def rec(path: tuple[Word, ...], den: int):
        if len(path) == horizon + 1:
            yield path, den
            return
        nbrs = neighbors(path[-1], cfg).all()
        for y in nbrs:
            yield from rec(path + (y,), den * len(nbrs))

    yield from rec((start,), 1)


def censored_folded_law(horizon: int, cfg: GasketConfig,
                        check: bool = True) -> dict[tuple[Word, ...], Fraction]:
    """P(Z~_0..m = z, T_m <= horizon) for every folded prefix realized by some
    base path of length ``horizon`` from the root (structural checks on)."""
    law: dict[tuple[Word, ...], Fraction] = {}
    for path, den in enumerate_base_paths(horizon, cfg):
        zs = tuple(fold(path, cfg, check=check).folded())
        p = Fraction(1, den)
        for m in range(1, len(zs) + 1):
            law[zs[:m]] = law.get(zs[:m], Fraction(0)) + p
    return law


def parse_path(text: str, cfg: GasketConfig) -> list[Word]:
    """Comma-separated words ("-,0,-,1,10"); use ';' as separator when d > 9."""
    from .symbolic import parse_word
    sep = ";" if ";" in text or cfg.d > 9 else ","
    return [parse_word(t, cfg) for t in text.split(sep)]


def random_trace(steps: int, seed: int, cfg: GasketConfig, stream_index: int = 0) -> CouplingTrace:
    stream = CounterStream(seed, stream_index)
    x: Word = ()
    path = [x]
    for _ in range(steps):
        x = step(x, stream, cfg)
        path.append(x)
    return fold(path, cfg)


def folded_histogram(level: int, walks: int, seed: int, cfg: GasketConfig,
                     start: Word = (), first_stream: int = 0) -> dict[Word, int]:
    counts: dict[Word, int] = {}
    for s in range(first_stream, first_stream + walks):
        w = folded_walk_endpoint(start, level, CounterStream(seed, s), cfg)
        counts[w] = counts.get(w, 0) + 1
    return counts

"""Words over {0,...,d}, parity, the parity-changing neighbor sets, and exact
barycentric geometry of cells and dyadic points.

A word is a plain tuple of ints; the empty tuple is the root.  Points of the
simplex are stored as integer barycentric numerators over a power of two, so
that every comparison between cell vertices is an exact integer comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]

ROOT: Word = ()
ROOT_ALIASES = ("-", "ϑ", "")


@dataclass(frozen=True)
class GasketConfig:
    """Dimension of the gasket.  The alphabet is {0, ..., d}."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"dimension d must be an integer >= 1, got {self.d!r}")

    @property
    def alphabet_size(self) -> int:
        return self.d + 1

    @property
    def hausdorff_dim(self) -> float:
        return math.log(self.d + 1) / math.log(2)

    def check_word(self, x: Sequence[int]) -> Word:
        x = tuple(int(s) for s in x)
        for s in x:
            if not 0 <= s <= self.d:
                raise ValueError(f"symbol {s} outside alphabet 0..{self.d}")
        return x


def words(level: int, cfg: GasketConfig) -> Iterator[Word]:
    """All words of the given length in lexicographic order."""
    if level == 0:
        yield ROOT
        return
    for head in words(level - 1, cfg):
        for s in range(cfg.d + 1):
            yield head + (s,)


def words_upto(level: int, cfg: GasketConfig) -> list[Word]:
    """Level-ordered, lexicographic within level, lengths 0..level inclusive."""
    out: list[Word] = []
    for n in range(level + 1):
        out.extend(words(n, cfg))
    return out


def parse_word(text: str, cfg: GasketConfig | None = None) -> Word:
    """Parse "-" / "ϑ" as the root, digit strings, or comma-separated symbols.

    When d > 9 the text is always read as comma-separated, so "10" is the
    one-letter word (10,).
    """
    text = text.strip()
    if text in ROOT_ALIASES:
        return ROOT
    if "," in text or (cfg is not None and cfg.d > 9):
        x = tuple(int(t) for t in text.split(","))
    else:
        if not text.isdigit():
            raise ValueError(f"cannot parse word {text!r}")
        x = tuple(int(c) for c in text)
    return cfg.check_word(x) if cfg is not None else x


def format_word(x: Sequence[int], cfg: GasketConfig | None = None) -> str:
    if len(x) == 0:
        return "-"
    if cfg is not None and cfg.d > 9:
        return ",".join(str(s) for s in x)
    if any(s > 9 for s in x):
        return ",".join(str(s) for s in x)
    return "".join(str(s) for s in x)


def ancestor(x: Word) -> Word:
    if len(x) == 0:
        raise ValueError("the root has no ancestor")
    return x[:-1]


def parity(x: Word) -> int:
    # the root is assigned parity 0 by convention
    return x[0] if x else 0


def corner_run(x: Word) -> int:
    """Length of the maximal constant suffix of x (0 for the root)."""
    if not x:
        return 0
    last = x[-1]
    r = 1
    while r < len(x) and x[-1 - r] == last:
        r += 1
    return r


def is_switch_word(x: Word) -> bool:
    """True iff x = i j^(m-1) with i != j and m >= 2."""
    return len(x) >= 2 and corner_run(x) == len(x) - 1


def neighbor_set(x: Word, cfg: GasketConfig) -> set[Word]:
    """Horizontal neighbors of x across which the parity changes.

    x = i          -> {j : j != i}
    x = i j^(m-1)  -> {j i^(m-1)}
    otherwise      -> empty
    """
    if len(x) == 0:
        raise ValueError("neighbor set is undefined at the root")
    if len(x) == 1:
        return {(j,) for j in range(cfg.d + 1) if j != x[0]}
    if is_switch_word(x):
        i, j = x[0], x[-1]
        return {(j,) + (i,) * (len(x) - 1)}
    return set()


@dataclass(frozen=True)
class BaryPoint:
    """Point of the simplex with barycentric coordinates numerators / 2**level."""

    numerators: tuple[int, ...]
    level: int

    def __post_init__(self):
        if any(a < 0 for a in self.numerators):
            raise ValueError("barycentric numerators must be nonnegative")
        if sum(self.numerators) != 1 << self.level:
            raise ValueError("barycentric numerators must sum to 2**level")

    def canonical(self) -> BaryPoint:
        nums, lev = self.numerators, self.level
        while lev > 0 and all(a % 2 == 0 for a in nums):
            nums = tuple(a // 2 for a in nums)
            lev -= 1
        return BaryPoint(nums, lev)

    def same_point(self, other: BaryPoint) -> bool:
        # cross multiplication avoids canonicalizing either side
        if len(self.numerators) != len(other.numerators):
            return False
        return all(a << other.level == b << self.level
                   for a, b in zip(self.numerators, other.numerators))

    def coords(self) -> tuple[Fraction, ...]:
        den = 1 << self.level
        return tuple(Fraction(a, den) for a in self.numerators)

    def to_unit_interval(self) -> Fraction:
        """For d = 1 with p_0 = 0, p_1 = 1, the position in [0, 1]."""
        if len(self.numerators) != 2:
            raise ValueError("unit-interval coordinates only exist for d = 1")
        return Fraction(self.numerators[1], 1 << self.level)


def vertex(i: int, cfg: GasketConfig) -> BaryPoint:
    nums = [0] * (cfg.d + 1)
    nums[i] = 1
    return BaryPoint(tuple(nums), 0)


def apply_map(i: int, b: BaryPoint) -> BaryPoint:
    """The contraction toward vertex i, b -> (b + e_i) / 2."""
    den = 1 << b.level
    nums = list(b.numerators)
    nums[i] += den
    return BaryPoint(tuple(nums), b.level + 1)


def apply_word(x: Word, b: BaryPoint) -> BaryPoint:
    # F_x = F_{i1} o ... o F_{in}: innermost map acts first
    for s in reversed(x):
        b = apply_map(s, b)
    return b


def dyadic_point(x: Word, cfg: GasketConfig) -> BaryPoint:
    """p_x = F_{x without its last symbol}(p_last), denominator 2**(|x|-1)."""
    if len(x) == 0:
        raise ValueError("the root has no dyadic point")
    return apply_word(x[:-1], vertex(x[-1], cfg))


def cell_vertices(x: Word, cfg: GasketConfig) -> frozenset[BaryPoint]:
    """The d+1 corners F_x(p_i), each at denominator 2**|x|."""
    return _cell_vertices(tuple(x), cfg.d)


@lru_cache(maxsize=1 << 16)
def _cell_vertices(x: Word, d: int) -> frozenset[BaryPoint]:
    cfg = GasketConfig(d)
    return frozenset(apply_word(x, vertex(i, cfg)) for i in range(d + 1))


def barycenter(x: Word, cfg: GasketConfig) -> tuple[Fraction, ...]:
    """Representative point of the cell K_x (mean of its corners)."""
    corners = [v.coords() for v in cell_vertices(x, cfg)]
    n = len(corners)
    return tuple(sum(c[k] for c in corners) / n for k in range(cfg.d + 1))


def strip_zero(x: Word) -> Word:
    """The shift 0y -> y."""
    if not x or x[0] != 0:
        raise ValueError(f"word {x!r} does not start with 0")
    return x[1:]


def prefixed(words_: Iterable[Word], s: int = 0) -> list[Word]:
    return [(s,) + w for w in words_]

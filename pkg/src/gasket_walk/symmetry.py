"""The symmetry group of the gasket as permutations of {0,...,d}.

A symmetry maps vertex p_i to p_g(i); on words it acts letterwise and on
barycentric points it permutes coordinates.  Composition follows
(g o h)(i) = g(h(i)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .symbolic import BaryPoint, GasketConfig, Word


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"{self.images!r} is not a permutation")

    @classmethod
    def identity(cls, size: int) -> Permutation:
        return cls(tuple(range(size)))

    @classmethod
    def transposition(cls, i: int, j: int, size: int) -> Permutation:
        """R_ij; R_ii is the identity."""
        images = list(range(size))
        images[i], images[j] = j, i
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        text = text.strip()
        if "," in text:
            return cls(tuple(int(t) for t in text.split(",")))
        return cls(tuple(int(c) for c in text))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __matmul__(self, other: Permutation) -> Permutation:
        # (self @ other)(i) = self(other(i))
        return Permutation(tuple(self.images[k] for k in other.images))

    def compose(self, other: Permutation) -> Permutation:
        return self @ other

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for i, gi in enumerate(self.images):
            inv[gi] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == gi for i, gi in enumerate(self.images))

    def __str__(self) -> str:
        if self.size > 10:
            return ",".join(map(str, self.images))
        return "".join(map(str, self.images))

    def name(self) -> str:
        """'id', 'R_ij' for transpositions, else the one-line images."""
        moved = [i for i, gi in enumerate(self.images) if i != gi]
        if not moved:
            return "id"
        if len(moved) == 2:
            return f"R_{moved[0]}{moved[1]}"
        return str(self)


def act_word(g: Permutation, x: Word) -> Word:
    return tuple(g.images[s] for s in x)


def act_point(g: Permutation, b: BaryPoint) -> BaryPoint:
    # coordinate i of b is the weight on p_i, which g sends to p_g(i)
    nums = [0] * len(b.numerators)
    for i, a in enumerate(b.numerators):
        nums[g.images[i]] = a
    return BaryPoint(tuple(nums), b.level)


def group_elements(cfg: GasketConfig) -> list[Permutation]:
    """All (d+1)! symmetries, identity first."""
    return [Permutation(p) for p in itertools.permutations(range(cfg.d + 1))]


def stabilizer_of_zero(cfg: GasketConfig) -> list[Permutation]:
    """The d! symmetries fixing symbol 0 (equivalently the cell K_0)."""
    return [g for g in group_elements(cfg) if g.images[0] == 0]


def reflection(i: int, j: int, cfg: GasketConfig) -> Permutation:
    return Permutation.transposition(i, j, cfg.d + 1)


def random_reflection_product(parities: Sequence[int], size: int) -> Permutation:
    """R_{0,a0} o R_{a0,a1} o ... o R_{a(p-1),ap} for parities a0, a1, ..., ap."""
    if len(parities) == 0:
        raise ValueError("need at least one parity")
    for k in range(1, len(parities)):
        if parities[k] == parities[k - 1]:
            raise ValueError(
                f"consecutive parities must differ, got {parities[k]} twice at index {k}")
    g = Permutation.transposition(0, parities[0], size)
    for a, b in zip(parities, parities[1:]):
        g = g @ Permutation.transposition(a, b, size)
    return g

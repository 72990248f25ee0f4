"""Edges of the augmented rooted tree: vertical (parent/child) edges and
horizontal edges between same-level words whose cells touch.

The graph is never materialized.  ``neighbors`` is an O(|x| d) oracle built on
the suffix-exchange rule x = w i j^k <-> y = w j i^k; ``adjacent_geometric``
is the independent check through exact cell corners.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterator, TextIO

from .symbolic import (
    GasketConfig,
    Word,
    cell_vertices,
    corner_run,
    format_word,
    words_upto,
)


@dataclass(frozen=True)
class NeighborList:
    vertex: Word
    parent: Word | None
    children: list[Word] = field(default_factory=list)
    horizontal: list[Word] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return (self.parent is not None) + len(self.children) + len(self.horizontal)

    def all(self) -> list[Word]:
        """Canonical neighbor order: parent, children by symbol, horizontal sorted."""
        head = [self.parent] if self.parent is not None else []
        return head + self.children + self.horizontal


def _vertical(x: Word, y: Word) -> bool:
    return (len(y) == len(x) + 1 and y[:-1] == x) or (
        len(x) == len(y) + 1 and x[:-1] == y)


def _suffix_exchange(x: Word, y: Word) -> bool:
    if len(x) != len(y) or x == y:
        return False
    # first index where the words differ; the common part is the prefix w
    p = next(t for t in range(len(x)) if x[t] != y[t])
    i, j = x[p], y[p]
    k = len(x) - p - 1
    return x[p + 1:] == (j,) * k and y[p + 1:] == (i,) * k


def adjacent_combinatorial(x: Word, y: Word) -> bool:
    """(x, y) in E via the suffix-exchange rule or the parent relation."""
    return _vertical(x, y) or _suffix_exchange(x, y)


def adjacent_geometric(x: Word, y: Word, cfg: GasketConfig) -> bool:
    """(x, y) in E with horizontal edges decided by shared cell corners."""
    if _vertical(x, y):
        return True
    if len(x) != len(y) or x == y:
        return False
    return not cell_vertices(x, cfg).isdisjoint(cell_vertices(y, cfg))


def horizontal_neighbors(x: Word, cfg: GasketConfig) -> list[Word]:
    """Same-level neighbors of x in lexicographic order.

    These are the d siblings (k = 0) plus, when x = w i j^r with r the full
    run length of the last symbol and w i nonempty, the word w j i^r.
    """
    n = len(x)
    if n == 0:
        return []
    head, last = x[:-1], x[-1]
    out = [head + (s,) for s in range(cfg.d + 1) if s != last]
    r = corner_run(x)
    if r < n:
        p = n - r - 1
        i = x[p]
        extra = x[:p] + (last,) + (i,) * r
        # extra differs from every sibling first at position p, where it holds
        # `last` and the siblings hold i
        if last < i:
            out.insert(0, extra)
        else:
            out.append(extra)
    return out


def neighbors(x: Word, cfg: GasketConfig) -> NeighborList:
    parent = x[:-1] if x else None
    children = [x + (s,) for s in range(cfg.d + 1)]
    return NeighborList(x, parent, children, horizontal_neighbors(x, cfg))


def degree(x: Word, cfg: GasketConfig) -> int:
    """deg(x) without building the neighbor list."""
    n = len(x)
    if n == 0:
        return cfg.d + 1
    return 1 + (cfg.d + 1) + cfg.d + (corner_run(x) < n)


def edges_upto(level: int, cfg: GasketConfig) -> Iterator[tuple[Word, Word, str]]:
    """Every edge among words of length <= level, once, as (src, dst, kind)."""
    for x in words_upto(level, cfg):
        if len(x) < level:
            for c in range(cfg.d + 1):
                yield x, x + (c,), "v"
        for y in horizontal_neighbors(x, cfg):
            if x < y:
                yield x, y, "h"


def write_edge_csv(level: int, cfg: GasketConfig, fh: TextIO) -> int:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["src", "dst", "kind"])
    count = 0
    for x, y, kind in edges_upto(level, cfg):
        writer.writerow([format_word(x, cfg), format_word(y, cfg), kind])
        count += 1
    return count

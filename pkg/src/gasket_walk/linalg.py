"""Exact sparse linear solves over the integers/rationals.

Forward elimination is fraction free: eliminating with pivot row r updates
row j as  p * row_j - a * row_r  and then divides out the row content, so
all stored entries stay integers of moderate size.  Only back substitution
produces rationals.  Pivots are chosen by a Markowitz-style rule (sparsest
column, then sparsest row), which keeps fill-in small on the level-structured
systems built by :mod:`gasket_walk.exact`.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

SparseRow = dict[int, int]


class SingularSystemError(ArithmeticError):
    pass


def _content(row: Mapping[int, int]) -> int:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def solve_exact(matrix: Sequence[Mapping[int, int]],
                rhs: Sequence[Mapping[int, int]]) -> list[dict[int, Fraction]]:
    """Solve A X = B exactly.

    ``matrix[i]`` maps column -> integer entry of row i (n x n, nonsingular).
    ``rhs[i]`` maps right-hand-side index k -> integer entry B[i, k].
    Returns X as a list over unknowns of {k: value} (zeros omitted).
    """
    n = len(matrix)
    if len(rhs) != n:
        raise ValueError("matrix and right-hand side have different row counts")
    # augmented rows; right-hand-side column k is stored under key n + k
    rows: list[SparseRow] = []
    for i in range(n):
        row = {c: int(v) for c, v in matrix[i].items() if v}
        for k, v in rhs[i].items():
            if v:
                row[n + k] = int(v)
        rows.append(row)

    col_rows: list[set[int]] = [set() for _ in range(n)]
    for i, row in enumerate(rows):
        for c in row:
            if c < n:
                col_rows[c].add(i)

    heap = [(len(col_rows[c]), c) for c in range(n)]
    heapq.heapify(heap)
    col_done = [False] * n
    row_done = [False] * n
    order: list[tuple[int, int]] = []  # (pivot row, pivot column)

    while heap:
        cnt, c = heapq.heappop(heap)
        if col_done[c]:
            continue
        if cnt != len(col_rows[c]):
            heapq.heappush(heap, (len(col_rows[c]), c))
            continue
        if not col_rows[c]:
            raise SingularSystemError(f"no pivot available in column {c}")
        r = min(col_rows[c], key=lambda i: (len(rows[i]), i))
        prow = rows[r]
        p = prow[c]
        for j in list(col_rows[c]):
            if j == r:
                continue
            row = rows[j]
            a = row[c]
            g = math.gcd(p, a)
            pm, am = p // g, a // g
            new: SparseRow = {}
            for key, v in row.items():
                new[key] = pm * v
            for key, v in prow.items():
                w = new.get(key, 0) - am * v
                if w:
                    new[key] = w
                else:
                    new.pop(key, None)
            new.pop(c, None)
            h = _content(new)
            if h > 1:
                new = {key: v // h for key, v in new.items()}
            for key in row:
                if key < n and key not in new:
                    col_rows[key].discard(j)
            for key in new:
                if key < n and key not in row:
                    col_rows[key].add(j)
            rows[j] = new
        for key in prow:
            if key < n:
                col_rows[key].discard(r)
        col_done[c] = True
        row_done[r] = True
        order.append((r, c))

    x: list[dict[int, Fraction]] = [dict() for _ in range(n)]
    for r, c in reversed(order):
        row = rows[r]
        piv = row[c]
        acc: dict[int, Fraction] = {}
        for key, v in row.items():
            if key >= n:
                acc[key - n] = acc.get(key - n, 0) + v
            elif key != c:
                for k, xv in x[key].items():
                    acc[k] = acc.get(k, 0) - v * xv
        x[c] = {k: Fraction(v) / piv for k, v in acc.items() if v}
    return x


def solve_exact_vector(matrix: Sequence[Mapping[int, int]],
                       b: Sequence[int]) -> list[Fraction]:
    sol = solve_exact(matrix, [{0: v} if v else {} for v in b])
    return [s.get(0, Fraction(0)) for s in sol]


def solve_rational(matrix: Sequence[Sequence[Fraction]],
                   b: Sequence[Fraction]) -> list[Fraction]:
    """Dense rational system, scaled to integers and solved exactly."""
    rows = []
    rhs = []
    for row, bi in zip(matrix, b):
        den = math.lcm(*(Fraction(v).denominator for v in list(row) + [bi]))
        rows.append({c: int(Fraction(v) * den) for c, v in enumerate(row) if v})
        rhs.append(int(Fraction(bi) * den))
    return solve_exact_vector(rows, rhs)


def rank_rational(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a dense rational matrix by exact row reduction."""
    m = [list(map(Fraction, row)) for row in matrix]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        rank += 1
    return rank


def sparse_float(matrix: Sequence[Mapping[int, int]]):
    """CSC float64 copy of a sparse integer matrix."""
    from scipy.sparse import csr_matrix

    n = len(matrix)
    data, ri, ci = [], [], []
    for i, row in enumerate(matrix):
        for c, v in row.items():
            ri.append(i)
            ci.append(c)
            data.append(float(v))
    return csr_matrix((data, (ri, ci)), shape=(n, n)).tocsc()


def solve_float(matrix: Sequence[Mapping[int, int]], b,
                tol: float = 1e-12, max_refine: int = 20) -> tuple[np.ndarray, float]:
    """Sparse float64 solve with iterative refinement; returns (x, residual).

    ``b`` may be a vector or an (n, k) block of right-hand sides.  The
    residual is the max-norm of b - A x relative to the max-norm of b.
    """
    from scipy.sparse.linalg import splu

    a = sparse_float(matrix)
    bb = np.asarray(b, dtype=float)
    lu = splu(a)
    x = lu.solve(bb)
    scale = max(np.abs(bb).max(), 1e-300)
    res = np.abs(bb - a @ x).max() / scale
    for _ in range(max_refine):
        if res <= tol:
            break
        x = x + lu.solve(bb - a @ x)
        res = np.abs(bb - a @ x).max() / scale
    return x, float(res)

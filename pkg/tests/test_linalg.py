from fractions import Fraction

import numpy as np
import pytest

from gasket_walk.linalg import (
    SingularSystemError,
    rank_rational,
    solve_exact,
    solve_float,
    solve_rational,
)


def dense_to_sparse(a):
    return [{c: int(v) for c, v in enumerate(row) if v} for row in a]


def gauss_jordan(a, b):
    """Textbook dense elimination over Fractions (reference oracle)."""
    n = len(a)
    m = [[Fraction(int(v)) for v in row] + [Fraction(int(v)) for v in rb]
         for row, rb in zip(a, b)]
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[p] = m[p], m[c]
        m[c] = [v / m[c][c] for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [u - f * v for u, v in zip(m[i], m[c])]
    return [row[n:] for row in m]


@pytest.mark.parametrize("seed", range(8))
def test_solve_exact_matches_reference(seed):
    rng = np.random.default_rng(seed)
    n = 7
    a = rng.integers(-4, 5, size=(n, n))
    a[rng.random((n, n)) < 0.4] = 0
    a += np.diag(rng.integers(5, 9, size=n))
    b = rng.integers(-3, 4, size=(n, 2))
    x = solve_exact(dense_to_sparse(a), [{k: int(v) for k, v in enumerate(row) if v} for row in b])
    ref = gauss_jordan(a, b)
    for i in range(n):
        for k in range(2):
            assert x[i].get(k, Fraction(0)) == ref[i][k]


def test_needs_pivoting():
    # zero on the diagonal of the first row
    a = [{1: 1}, {0: 1, 1: 1}]
    x = solve_exact(a, [{0: 3}, {0: 5}])
    assert x[0][0] == 2 and x[1][0] == 3


def test_singular_raises():
    with pytest.raises(SingularSystemError):
        solve_exact([{0: 1, 1: 2}, {0: 2, 1: 4}], [{0: 1}, {0: 1}])


def test_solve_rational_and_rank():
    a = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(-1)]]
    b = [Fraction(1), Fraction(0)]
    x = solve_rational(a, b)
    assert a[0][0] * x[0] + a[0][1] * x[1] == 1
    assert a[1][0] * x[0] + a[1][1] * x[1] == 0
    assert rank_rational([[1, 2], [2, 4]]) == 1
    assert rank_rational([[1, 2], [2, 5], [0, 1]]) == 2


def test_solve_float_residual():
    rng = np.random.default_rng(3)
    a = rng.integers(-3, 4, size=(30, 30)) + np.diag(np.full(30, 40))
    b = rng.normal(size=30)
    x, res = solve_float(dense_to_sparse(a), b)
    assert res <= 1e-12
    assert np.allclose(a @ x, b)

from fractions import Fraction

import numpy as np
import pytest

from gasket_walk.exact import (
    exit_distribution,
    first_step_system,
    kernel_table,
    martin_kernel,
    truncated_green,
)
from gasket_walk.geometry import neighbors
from gasket_walk.symbolic import GasketConfig, words, words_upto
from gasket_walk.symmetry import act_word, group_elements

D1, D2 = GasketConfig(1), GasketConfig(2)


def dense_exit_law(start, level, cfg, within=()):
    """Float absorbing-chain oracle: explicit transition matrix, dense solve."""
    inner = [x for x in words_upto(level - 1, cfg) if x[:len(within)] == within
             and len(x) >= len(within)]
    outer = [within + w for w in words(level - len(within), cfg)]
    idx = {x: i for i, x in enumerate(inner)}
    jdx = {x: j for j, x in enumerate(outer)}
    q = np.zeros((len(inner), len(inner)))
    r = np.zeros((len(inner), len(outer)))
    for x in inner:
        nbrs = [y for y in neighbors(x, cfg).all()
                if y[:len(within)] == within and len(y) >= len(within)]
        for y in nbrs:
            if y in idx:
                q[idx[x], idx[y]] += 1 / len(nbrs)
            else:
                r[idx[x], jdx[y]] += 1 / len(nbrs)
    absorb = np.linalg.solve(np.eye(len(inner)) - q, r)
    return dict(zip(outer, absorb[idx[start]]))


def test_root_level_one():
    dist = exit_distribution((), 1, D2)
    assert dist.exact
    assert dist.probs == [Fraction(1, 3)] * 3


def test_uniform_level_three():
    dist = exit_distribution((), 3, D1)
    assert dist.probs == [Fraction(1, 8)] * 8


def test_from_0_is_not_uniform():
    dist = exit_distribution((0,), 2, D1)
    assert dist.probs == [Fraction(7, 20), Fraction(7, 20), Fraction(3, 20), Fraction(3, 20)]


@pytest.mark.parametrize("d,start,level", [(1, (0,), 4), (2, (1,), 3), (2, (0, 2), 4),
                                           (3, (), 3), (1, (1, 0, 1), 5)])
def test_matches_dense_oracle(d, start, level):
    cfg = GasketConfig(d)
    ref = dense_exit_law(start, level, cfg)
    dist = exit_distribution(start, level, cfg)
    assert dist.total() == 1
    for w, p in dist.as_dict().items():
        assert abs(float(p) - ref[w]) < 1e-12


def test_float_mode_agrees():
    a = exit_distribution((0, 1), 5, D2, exact=True)
    b = exit_distribution((0, 1), 5, D2, exact=False)
    assert not b.exact and b.residual <= 1e-12
    assert np.allclose([float(p) for p in a.probs], b.probs, atol=1e-12)


def test_restricted_to_0x_is_isomorphic():
    # the walk on 0X started at 0 is the walk on X started at the root, relabeled
    for cfg in (D1, D2):
        for level in (2, 3):
            sub = exit_distribution((0,), level, cfg, within=(0,))
            full = exit_distribution((), level - 1, cfg)
            assert [w[1:] for w in sub.support] == full.support
            assert sub.probs == full.probs
    ref = dense_exit_law((0, 1), 4, D2, within=(0,))
    sub = exit_distribution((0, 1), 4, D2, within=(0,))
    for w, p in sub.as_dict().items():
        assert abs(float(p) - ref[w]) < 1e-12


def test_equivariance():
    for cfg in (D1, D2, GasketConfig(3)):
        for start in [(0,), (1, 0)]:
            base = exit_distribution(start, 3, cfg).as_dict()
            for g in group_elements(cfg):
                moved = exit_distribution(act_word(g, start), 3, cfg).as_dict()
                assert all(moved[act_word(g, w)] == p for w, p in base.items())


def test_bad_arguments():
    with pytest.raises(ValueError):
        exit_distribution((0, 1), 2, D1)
    with pytest.raises(ValueError):
        exit_distribution((1,), 3, D1, within=(0,))


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_first_step_system(d):
    q = first_step_system(GasketConfig(d))
    assert q == [Fraction(1, d + 1)] * (d + 2)


def test_first_step_solution_is_the_exit_law():
    # q_j is the probability of exiting level 2 inside child j of the root's
    # first choice; summed over the two-level exit law it is 1/(d+1)
    for cfg in (D1, D2):
        law = exit_distribution((), 2, cfg).as_dict()
        for j in range(cfg.d + 1):
            assert sum(p for w, p in law.items() if w[0] == j) == first_step_system(cfg)[1 + j]


def test_green_basic():
    g = truncated_green(2, D1)
    assert g.exact
    # from the root with radius 1 the walk dies at once
    assert truncated_green(1, D1)((), ()) == 1
    assert g((), ()) > 1
    assert g((0,), ()) > 0


def test_green_reversibility_and_monotone():
    prev = None
    for radius in range(1, 5):
        g = truncated_green(radius, D2)
        for x in g.states:
            for y in g.states:
                assert g.degrees[x] * g(x, y) == g.degrees[y] * g(y, x)
                if prev is not None and x in prev.degrees and y in prev.degrees:
                    assert g(x, y) >= prev(x, y)
        prev = g


def test_green_float_matches_exact():
    a = truncated_green(4, D1, exact=True)
    b = truncated_green(4, D1, exact=False)
    assert not b.exact
    for x in a.states:
        for y in a.states:
            assert abs(float(a(x, y)) - b(x, y)) < 1e-12


def test_green_matches_dense_inverse():
    g = truncated_green(3, D2)
    n = len(g.states)
    idx = {x: i for i, x in enumerate(g.states)}
    p = np.zeros((n, n))
    for x in g.states:
        nbrs = neighbors(x, D2).all()
        for y in nbrs:
            if y in idx:
                p[idx[x], idx[y]] += 1 / len(nbrs)
    ref = np.linalg.inv(np.eye(n) - p)
    for x in g.states:
        for y in g.states:
            assert abs(float(g(x, y)) - ref[idx[x], idx[y]]) < 1e-10


def test_martin_kernel():
    g = truncated_green(4, D1)
    for y in g.states:
        assert martin_kernel(4, (), y, D1, green=g) == 1
    rows = kernel_table(g, [(0,), (1,)], [(0, 0)])
    assert rows[0][2] == martin_kernel(4, (0,), (0, 0), D1, green=g)
    # symmetry R_01 maps K(0, 00) to K(1, 11)
    assert martin_kernel(4, (0,), (0, 0), D1, green=g) == martin_kernel(4, (1,), (1, 1), D1, green=g)
    with pytest.raises(ValueError):
        martin_kernel(4, (0, 0, 0, 0), (), D1, green=g)

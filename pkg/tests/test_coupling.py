from fractions import Fraction

import pytest

from gasket_walk.coupling import (
    CouplingError,
    Folder,
    censored_folded_law,
    degree_in_0x,
    enumerate_base_paths,
    extract_y_chain,
    fold,
    folded_histogram,
    folded_path_law,
    folded_walk_endpoint,
    parse_path,
    random_trace,
    srw_path_law_0x,
    y_kernel,
)
from gasket_walk.exact import exit_distribution
from gasket_walk.geometry import degree
from gasket_walk.rng import CounterStream
from gasket_walk.symbolic import GasketConfig, neighbor_set, words_upto

D1, D2 = GasketConfig(1), GasketConfig(2)

FIXTURE = "-,0,-,1,10,100,011,01,00"


def words_of(text, cfg=D1):
    return parse_path(text, cfg)


def test_y_chain_of_fixture():
    chain = extract_y_chain(words_of(FIXTURE), D1)
    assert [t for t, _ in chain] == [1, 4, 5, 7, 8]
    assert [y for _, y in chain] == words_of("0,10,100,01,00")


def test_y_chain_small_paths():
    assert [y for _, y in extract_y_chain(words_of("-,0,00"), D1)] == [(0,), (0, 0)]
    assert [y for _, y in extract_y_chain(words_of("-,0,1,0,00"), D1)] == [(0,), (0, 0)]


def test_fixture_trace():
    trace = fold(words_of(FIXTURE), D1)
    stops = trace.stops()
    assert [r.k for r in stops] == [0, 1, 2, 3, 4]
    assert [r.l for r in stops] == [0, 1, 1, 2, 2]
    assert [r.g.name() for r in stops] == ["id", "R_01", "R_01", "id", "id"]
    assert trace.folded() == words_of("0,01,011,01,00")
    table = trace.table()
    assert table["Z_n"][6] == "011"
    assert table["Y_k"] == [None, "0", None, None, "10", "100", None, "01", "00"]


def test_fold_simple_paths():
    t = fold(words_of("-,0,00,000"), D1)
    assert t.folded() == words_of("0,00,000")
    assert all(r.g.is_identity() for r in t.stops())
    t = fold(words_of("-,1,10,100"), D1)
    assert t.folded() == words_of("0,01,011")
    assert all(r.g.name() == "R_01" for r in t.stops())


def test_folder_rejects_nonsense():
    f = Folder(D1)
    f.push((0,))
    with pytest.raises(CouplingError):
        # a parity change that the reflection maps back onto Y itself
        f.push((1,))


def test_random_traces_satisfy_invariants():
    for d in (1, 2, 3):
        cfg = GasketConfig(d)
        for seed in range(30):
            trace = random_trace(60, seed, cfg)
            ys = trace.y_chain()
            for a, b in zip(ys, ys[1:]):
                assert b not in neighbor_set(a, cfg) and b != a
            for z in trace.folded():
                assert z[0] == 0


def test_degree_in_0x():
    cfg = D2
    for x in words_upto(4, cfg):
        if x[:1] == (0,):
            # 0X is a copy of X: deg_0(0w) = deg(w)
            assert degree_in_0x(x, cfg) == degree(x[1:], cfg)
    with pytest.raises(ValueError):
        degree_in_0x((1,), cfg)


def test_y_kernel_is_a_distribution():
    for cfg in (D1, D2):
        for y in [(0,), (1, 0), (0, 1, 1), (2, 0) if cfg.d == 2 else (1, 1)]:
            k = y_kernel(y, cfg)
            assert sum(k.values()) == 1
            skip = {y, ()} | neighbor_set(y, cfg)
            assert not set(k) & skip


def test_y_kernel_from_level_one():
    # from 0 the skip set is {0, root, 1}; the exit is into a child of 0 or of 1
    k = y_kernel((0,), D1)
    assert set(k) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert k[(0, 0)] == k[(0, 1)] and k[(1, 0)] == k[(1, 1)]
    # half of the first steps from 0 already land in a child of 0
    assert k[(0, 0)] > k[(1, 0)]
    # for d = 1 the skip set is every word of length <= 1
    assert k == exit_distribution((0,), 2, D1).as_dict()


def test_folded_law_matches_srw_on_0x():
    for cfg, steps in [(D1, 5), (D2, 3)]:
        assert folded_path_law(steps, cfg) == srw_path_law_0x(steps, cfg)


def test_censored_law_is_dominated():
    srw = {}
    for m in range(1, 9):
        srw.update(srw_path_law_0x(m - 1, D1))
    law = censored_folded_law(6, D1)
    for prefix, p in law.items():
        assert p <= srw[prefix]


def test_base_path_probabilities_sum_to_one():
    total = sum(Fraction(1, den) for _, den in enumerate_base_paths(5, D2))
    assert total == 1


def test_folded_endpoint_level_one_is_0():
    for s in range(50):
        assert folded_walk_endpoint((), 1, CounterStream(2, s), D1) == (0,)


def test_folded_exit_law_matches_0x():
    walks = 20_000
    counts = folded_histogram(3, walks, 5, D1)
    exact = exit_distribution((0,), 3, D1, within=(0,)).as_dict()
    assert set(counts) <= set(exact)
    for w, p in exact.items():
        p = float(p)
        assert abs(counts.get(w, 0) / walks - p) < 4 * (p * (1 - p) / walks) ** 0.5


def test_parse_path_separators():
    assert parse_path("-;0;00", D1) == [(), (0,), (0, 0)]
    cfg = GasketConfig(10)
    assert parse_path("-;10;10,3", cfg) == [(), (10,), (10, 3)]

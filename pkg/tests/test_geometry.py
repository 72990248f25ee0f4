import io

import pytest

from gasket_walk.geometry import (
    adjacent_combinatorial,
    adjacent_geometric,
    degree,
    edges_upto,
    horizontal_neighbors,
    neighbors,
    write_edge_csv,
)
from gasket_walk.symbolic import GasketConfig, words, words_upto

D1, D2 = GasketConfig(1), GasketConfig(2)


def test_combinatorial_examples():
    assert adjacent_combinatorial((1, 0, 0), (0, 1, 1))
    assert not adjacent_combinatorial((1, 0, 0), (0, 0, 1))
    assert adjacent_combinatorial((0,), ())
    assert not adjacent_combinatorial((0, 1), (0, 1))


def test_geometric_examples():
    assert adjacent_geometric((0, 1), (1, 0), D1)
    assert not adjacent_geometric((0, 0), (1, 1), D1)
    assert not adjacent_geometric((0,), (0,), D1)
    assert adjacent_geometric((1, 0, 0), (0, 1, 1), D1)


def test_root_neighbors():
    nl = neighbors((), D2)
    assert nl.parent is None
    assert nl.children == [(0,), (1,), (2,)]
    assert nl.horizontal == []
    assert nl.degree == 3


def test_neighbors_of_10():
    nl = neighbors((1, 0), D1)
    assert nl.parent == (1,)
    assert nl.children == [(1, 0, 0), (1, 0, 1)]
    assert sorted(nl.horizontal) == [(0, 1), (1, 1)]
    assert nl.degree == 5


def test_degrees(cfg):
    assert degree((), cfg) == cfg.d + 1
    for i in range(cfg.d + 1):
        assert degree((i,), cfg) == 2 * cfg.d + 2
    assert degree((0, 0, 0), D1) == 4
    for x in words_upto(4, cfg):
        assert degree(x, cfg) == neighbors(x, cfg).degree


def test_horizontal_sorted_and_symmetric(cfg):
    for x in words_upto(4, cfg):
        hs = horizontal_neighbors(x, cfg)
        assert hs == sorted(hs)
        assert len(set(hs)) == len(hs)
        for y in hs:
            assert x in horizontal_neighbors(y, cfg)


def test_neighbor_list_matches_adjacency(cfg):
    level = 3
    everything = words_upto(level + 1, cfg)
    for x in words_upto(level, cfg):
        listed = set(neighbors(x, cfg).all())
        brute = {y for y in everything if adjacent_combinatorial(x, y)}
        assert listed == brute


@pytest.mark.parametrize("d", [1, 2, 3])
def test_oracles_agree_exhaustively(d):
    cfg = GasketConfig(d)
    for n in range(1, 6):
        ws = list(words(n, cfg))
        for x in ws:
            for y in ws:
                assert adjacent_combinatorial(x, y) == adjacent_geometric(x, y, cfg), (x, y)


def test_edges_upto_counts():
    # d=1: every level-n word has 1 + [r < n] horizontal neighbors
    edges = list(edges_upto(2, D1))
    vertical = [e for e in edges if e[2] == "v"]
    horizontal = [e for e in edges if e[2] == "h"]
    assert len(vertical) == 2 + 4
    assert {(x, y) for x, y, _ in horizontal} == {
        ((0,), (1,)), ((0, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (1, 1))}


def test_write_edge_csv():
    buf = io.StringIO()
    n = write_edge_csv(2, D1, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "src,dst,kind"
    assert len(lines) == n + 1
    assert "-,0,v" in lines

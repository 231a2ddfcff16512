from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kfactor.graph_core import (
    BLUE,
    RED,
    BicoloredGraph,
    Graph,
    dumps,
    edge,
    edge_set,
    is_k_factor,
    loads,
    read_edge_list,
    risk,
    symmetric_difference,
    write_edge_list,
)

N = 9
edge_st = st.tuples(st.integers(0, N - 1), st.integers(0, N - 1)).filter(lambda p: p[0] != p[1]).map(lambda p: edge(*p))
edges_st = st.frozensets(edge_st, max_size=20)


def test_edge_is_canonical():
    assert edge(3, 1) == (1, 3)
    with pytest.raises(ValueError):
        edge(2, 2)
    with pytest.raises(ValueError):
        edge(-1, 2)


def test_risk_examples():
    h = edge_set([(0, 1), (2, 3)])
    assert risk(h, h) == 0
    assert risk(h, frozenset()) == 1
    assert risk(frozenset({(0, 1)}), frozenset({(2, 3)})) == 2
    assert isinstance(risk(h, frozenset()), Fraction)


def test_risk_rejects_empty_truth():
    with pytest.raises(ValueError):
        risk(frozenset(), frozenset({(0, 1)}))


def test_is_k_factor_examples():
    assert is_k_factor({(0, 1), (2, 3)}, 4, 1)
    assert not is_k_factor({(0, 1), (1, 2), (0, 2)}, 4, 2)
    assert is_k_factor({(0, 1), (1, 2), (2, 3), (0, 3)}, 4, 2)


def test_symmetric_difference_examples():
    a = edge_set([(0, 1), (2, 3)])
    assert symmetric_difference(a, a) == frozenset()
    assert symmetric_difference(a, frozenset()) == a
    assert symmetric_difference(a, edge_set([(0, 1), (1, 2)])) == {(2, 3), (1, 2)}


@given(edges_st.filter(bool), edges_st)
def test_risk_is_exact_difference_ratio(a, b):
    r = risk(a, b)
    assert r * len(a) == len(symmetric_difference(a, b))
    assert len(symmetric_difference(a, b)) == len(a) + len(b) - 2 * len(a & b)
    assert r >= 0
    if len(b) <= len(a):  # e.g. two k-factors
        assert r <= 2


@given(edges_st, edges_st)
def test_bicolored_adjacency_round_trip(red, blue):
    blue = blue - red
    g = BicoloredGraph.from_sets(N, 1, red, blue)
    assert g.edge_sets_from_adjacency() == (red, blue)
    for v in range(N):
        for w, c in g.adjacency(v):
            assert (edge(v, w) in red) == (c == RED)
            assert (edge(v, w) in blue) == (c == BLUE)


def test_bicolored_rejects_overlap_and_duplicates():
    with pytest.raises(ValueError):
        BicoloredGraph.from_sets(3, 1, [(0, 1)], [(1, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def test_csr_lists_each_edge_twice():
    g = Graph(5, [(0, 1), (1, 2), (3, 4), (0, 4)])
    indptr, nbr, eid = g.csr()
    assert indptr[-1] == 2 * g.m
    assert list(g.degrees()) == [2, 2, 1, 1, 2]
    assert sorted(g.neighbors(0).tolist()) == [1, 4]
    for v in range(5):
        for j in range(indptr[v], indptr[v + 1]):
            assert set(g.edges[eid[j]].tolist()) == {v, int(nbr[j])}


@settings(max_examples=50)
@given(edges_st, edges_st)
def test_edge_list_text_round_trip(red, blue):
    g = BicoloredGraph.from_sets(N, 2, red, blue - red)
    text = dumps(g)
    h = loads(text)
    assert dumps(h) == text
    assert (h.n, h.k, h.red_set, h.blue_set) == (g.n, g.k, g.red_set, g.blue_set)


def test_edge_list_file_round_trip(tmp_path):
    g = BicoloredGraph.from_sets(5, 1, [(0, 1), (2, 3)], [(1, 4), (3, 4)])
    p = tmp_path / "g.tsv"
    write_edge_list(g, p)
    assert p.read_text().splitlines()[0] == "5\t1"
    h = read_edge_list(p)
    assert p.read_bytes() == dumps(h).encode()
    assert np.array_equal(h.edges, g.edges) and np.array_equal(h.is_red, g.is_red)


@pytest.mark.parametrize("bad", ["3\t1\n2\t1\tR\n", "3\t1\n0\t1\tX\n", "3\t1\n0\t5\tB\n"])
def test_edge_list_rejects_malformed(bad):
    with pytest.raises(ValueError):
        loads(bad)

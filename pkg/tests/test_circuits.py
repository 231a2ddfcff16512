import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import simple_cycles_undirected
from kfactor.circuits import (
    AlmostAlternatingCycle,
    AlternatingCircuit,
    InstanceTooLarge,
    UnbalancedError,
    alternating_neighborhood,
    check_circuits,
    decompose,
    difference_items,
    enumeration_bound,
    find_almost_alternating_cycle,
    find_alternating_4cycle,
    find_alternating_cycles,
    fold_circuits,
    has_almost_alternating_cycle,
    xor_circuit,
)
from kfactor.graph_core import BLUE, RED, BicoloredGraph, is_k_factor
from kfactor.oracle import complete_graph, enumerate_k_factors
from kfactor.planted import ModelParams, plant

ALT4 = [((0, 1), RED), ((1, 2), BLUE), ((2, 3), RED), ((0, 3), BLUE)]


def test_decompose_examples():
    assert decompose([]) == []
    (c,) = decompose(ALT4)
    assert len(c) == 4 and check_circuits(ALT4, [c])
    shifted = [((u + 4, v + 4), col) for (u, v), col in ALT4]
    cs = decompose(ALT4 + shifted)
    assert [len(c) for c in cs] == [4, 4]
    assert check_circuits(ALT4 + shifted, cs)


def test_decompose_reports_unbalanced_vertex():
    with pytest.raises(UnbalancedError) as info:
        decompose([((0, 1), RED), ((1, 2), BLUE), ((2, 3), RED)])
    assert info.value.vertex in (0, 3)


def test_circuit_type_invariants():
    with pytest.raises(ValueError):
        AlternatingCircuit((0, 1, 2, 3), (RED, RED, BLUE, BLUE))
    with pytest.raises(ValueError):
        AlternatingCircuit((0, 1, 2), (RED, BLUE, RED))
    with pytest.raises(ValueError):
        AlmostAlternatingCycle((0, 1, 2), (RED, RED, RED), 0)


def test_xor_examples():
    h = frozenset({(0, 1), (2, 3)})
    (c,) = decompose(ALT4)
    assert xor_circuit(h, c, 4, 1) == {(1, 2), (0, 3)}
    assert xor_circuit(xor_circuit(h, c, 4, 1), c, 4, 1) == h


def test_xor_rejects_malformed_circuit():
    # alternates as a walk but red/blue roles do not match membership in h
    h = frozenset({(0, 1), (1, 2), (2, 3), (0, 3)})
    c = AlternatingCircuit((0, 1, 2, 3), (RED, BLUE, RED, BLUE))
    with pytest.raises(ValueError):
        xor_circuit(h, c, 4, 2)


def _factor_pairs(n, k, count, seed):
    cat = enumerate_k_factors(complete_graph(n), k)
    rng = random.Random(seed)
    for _ in range(count):
        yield rng.choice(cat.factors), rng.choice(cat.factors)


@pytest.mark.parametrize("n,k", [(8, 1), (10, 1), (7, 2), (8, 2)])
def test_decompose_and_fold_on_factor_pairs(n, k):
    for h, h2 in _factor_pairs(n, k, 200, seed=n * 10 + k):
        diff = difference_items(h, h2)  # red = in h2, blue = in h
        cs = decompose(diff)
        assert check_circuits(diff, cs)
        assert fold_circuits(h, cs, n, k) == h2
        order = list(cs)
        random.Random(1).shuffle(order)
        assert fold_circuits(h, order, n, k) == h2


def test_find_4cycle_examples(alt4):
    assert find_alternating_4cycle(BicoloredGraph.from_sets(4, 1, [(0, 1), (2, 3)], [])) is None
    c = find_alternating_4cycle(alt4)
    assert c is not None and set(c.edges()) == alt4.red_set | alt4.blue_set
    assert find_alternating_4cycle(BicoloredGraph.from_sets(4, 1, [(0, 1), (2, 3)], [(0, 2)])) is None


def _random_bicolored(rng, n, k, lam):
    n += (n * k) % 2
    g, _ = plant(ModelParams(n, k, min(lam, n)), rng)
    return g


def _alternating_brute(g, cyc):
    L = len(cyc)
    cols = [g.color_of(cyc[i], cyc[(i + 1) % L]) for i in range(L)]
    return sum(cols[i] == cols[(i + 1) % L] for i in range(L))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32), st.integers(4, 9), st.integers(1, 2), st.floats(0.5, 6))
def test_4cycle_and_almost_alternating_match_brute_force(seed, n, k, lam):
    g = _random_bicolored(np.random.default_rng(seed), n, k, lam)
    cycles = simple_cycles_undirected(g.n, [tuple(e) for e in g.edges.tolist()])
    repeats = [_alternating_brute(g, c) for c in cycles]
    want_4 = any(len(c) == 4 and r == 0 for c, r in zip(cycles, repeats))
    want_aac = any(r <= 1 for r in repeats)
    c4 = find_alternating_4cycle(g)
    assert (c4 is not None) == want_4
    aac = find_almost_alternating_cycle(g)
    assert (aac is not None) == want_aac
    if aac is not None:
        assert _alternating_brute(g, list(aac.vertices)) <= 1
        for e, col in aac.walk:
            assert g.color_of(*e) == col
    alt = find_alternating_cycles(g, max_length=g.n)
    want_alt = sorted(sorted(c) for c, r in zip(cycles, repeats) if r == 0)
    assert sorted(sorted(c.vertices) for c in alt) == want_alt


def test_almost_alternating_examples(alt4):
    assert not has_almost_alternating_cycle(BicoloredGraph.from_sets(6, 2, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], []))
    assert has_almost_alternating_cycle(alt4)
    # red-red-blue triangle: the only repeated junction is at vertex 1, so it
    # is almost alternating (t blue and t+1 red edges with t=1)
    assert has_almost_alternating_cycle(BicoloredGraph.from_sets(3, 2, [(0, 1), (1, 2)], [(0, 2)]))
    g = BicoloredGraph.from_sets(3, 1, [(0, 1)], [(1, 2), (0, 2)])
    c = find_almost_alternating_cycle(g)
    assert c is not None and c.break_position is not None


def test_almost_alternating_size_cap():
    g = BicoloredGraph.from_sets(201, 1, [(0, 1)], [])
    with pytest.raises(InstanceTooLarge):
        has_almost_alternating_cycle(g)


def test_neighborhood_examples(alt4):
    sub, bnd = alternating_neighborhood(alt4, (0, 1), 0)
    assert sub.red_set == {(0, 1)} and not sub.blue_set and bnd == {0, 1}
    sub, bnd = alternating_neighborhood(alt4, (0, 1), 1)
    assert bnd == {2, 3} and sub.blue_set == {(1, 2), (0, 3)}
    g, h = plant(ModelParams(20, 1, 0.0, seed=2))
    e = tuple(h[0].tolist())
    assert alternating_neighborhood(g, e, 1)[1] == frozenset()
    with pytest.raises(ValueError):
        alternating_neighborhood(alt4, (1, 2), 1)


def test_neighborhood_depths_are_shortest_alternating():
    # path 0-1 red, 1-2 blue, 2-3 red, 3-4 blue, 4-5 red
    g = BicoloredGraph.from_sets(6, 1, [(0, 1), (2, 3), (4, 5)], [(1, 2), (3, 4)])
    for t, want in [(1, {2}), (2, {3}), (3, {4}), (4, {5}), (5, set())]:
        assert alternating_neighborhood(g, (0, 1), t)[1] == want


def test_enumeration_bound_examples():
    assert enumeration_bound(4, 1, 0).exact == 1
    assert enumeration_bound(4, 1, 1).exact == 2
    with pytest.raises(ValueError):
        enumeration_bound(4, 1, 3)


def test_enumeration_bound_chain_and_log_accuracy():
    for n in range(2, 31):
        for k in (1, 2, 3):
            if (n * k) % 2:
                continue
            M = n * k // 2
            for t in range(M + 1):
                b = enumeration_bound(n, k, t)
                exact = math.comb(M, t) * math.prod(range(1, 2 * t, 2))
                assert b.exact == exact
                approx = enumeration_bound(n, k, t, exact=False).log_value
                assert abs(approx - math.log(exact)) <= 1e-12 * max(1.0, math.log(exact))
                assert b.log_value <= t * math.log(k * n) - t * (t - 1) / (k * n) + 1e-9


def test_alternating_cycles_xor_to_factors():
    rng = np.random.default_rng(4)
    for _ in range(30):
        g = _random_bicolored(rng, 14, 2, 3.0)
        for c in find_alternating_cycles(g, max_length=10, limit=50):
            out = xor_circuit(g.red_set, c, g.n, g.k)
            assert is_k_factor(out, g.n, g.k)

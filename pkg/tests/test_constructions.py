import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kfactor.circuits import AlternatingCircuit, ContractViolation, xor_circuit
from kfactor.constructions import (
    AvailabilitySets,
    CapacityError,
    ReservedEdges,
    build_trees,
    closure_ell_for_link,
    construct_cycles,
    default_closure_ell,
    proof_constants,
    reserve_edges,
    three_edge_closure,
    validate_cycle,
)
from kfactor.graph_core import BLUE, RED, BicoloredGraph, array_to_set, edge, edge_keys, is_k_factor
from kfactor.planted import ModelParams, plant, sample_k_regular, trial_rng
from kfactor.pruning import iterative_prune

# frozen from scripts/calibrate.py (master seed 1000, 1000 runs each)
SMOKE_FLOOR = 0.0
DENSE_FLOOR = 0.97
DENSE = dict(n=5_000, k=1, lam=30.0, ell=3, d=4, gamma=0.08)


def _naive_sets(n, red, reserved):
    ends = {v for e in reserved for v in e}
    nbrs = {w for u, v in red for a, w in ((u, v), (v, u)) if a in ends}
    avail = set(range(n)) - ends
    return avail, avail - nbrs


# ---------------------------------------------------------------------------
# reserve_edges


def test_reserve_nothing():
    red = [(0, 1), (2, 3), (4, 5), (6, 7)]
    res, av = reserve_edges(red, 0, n=8)
    assert len(res) == 0
    assert av.available.all() and av.full.all()


def test_reserve_k1_hand_trace():
    red = [(0, 1), (2, 3), (4, 5), (6, 7)]
    res, av = reserve_edges(red, 2, n=8, rng=np.random.default_rng(0))
    assert len(res) == 2 and res.edge_set <= set(red)
    assert av.n_available == 4 and av.n_full == 4
    assert np.array_equal(av.available, av.full)


def test_reserve_designation_and_forbidden():
    g, h = plant(ModelParams(200, 2, 1.0, 0))
    e = tuple(h[0])
    res, av = reserve_edges(g, 20, forbidden=e, rng=np.random.default_rng(1))
    assert np.all(res.tree_facing < res.linking)
    used = res.edges.ravel()
    assert len(set(used.tolist())) == len(used)
    assert not set(e) & set(used.tolist())
    assert res.edge_set <= array_to_set(h)


def test_reserve_capacity_error():
    with pytest.raises(CapacityError):
        reserve_edges([(0, 1), (1, 2), (2, 0)], 2, n=3)
    with pytest.raises(ValueError):
        reserve_edges([(0, 1)], -1, n=2)


def test_reserve_invariant_audit():
    rng = np.random.default_rng(2)
    done = 0
    while done < 1000:
        k = int(rng.integers(1, 4))
        n = int(rng.integers(4, 101))
        if (n * k) % 2 or n <= k:
            continue
        red = sample_k_regular(n, k, rng)
        m = int(rng.integers(0, n // (4 * k) + 1))
        res, av = reserve_edges(red, m, n=n, rng=rng)
        assert len(res) == m
        assert len(av.violations(red)) == 0
        avail, full = _naive_sets(n, red.tolist(), res.edges.tolist())
        assert set(np.flatnonzero(av.available).tolist()) == avail
        assert set(np.flatnonzero(av.full).tolist()) == full
        done += 1


def test_split_and_pad():
    res = ReservedEdges(np.array([[0, 1], [2, 3], [4, 5]]))
    with pytest.raises(ValueError):
        res.split(np.random.default_rng(0))
    padded = res.pad_down()
    assert padded.padded and len(padded) == 2
    halves = padded.split(np.random.default_rng(0))
    assert len(halves.left) == len(halves.right) == 1
    assert sorted(halves.left.tolist() + halves.right.tolist()) == [0, 1]
    assert ReservedEdges(np.array([[0, 1], [2, 3]])).pad_down().padded is False


def test_availability_mutators():
    av = AvailabilitySets(np.ones(4, bool), np.ones(4, bool))
    av.take(1)
    av.drop_full(2)
    av.drop_full(2)
    assert av.n_available == 3 and av.n_full == 2 and av.min_full == 2
    cp = av.copy()
    cp.take(0)
    assert av.available[0]
    bad = AvailabilitySets(np.array([True, False]), np.array([True, False]))
    with pytest.raises(ContractViolation):
        bad.check(np.array([[0, 1]]))


# ---------------------------------------------------------------------------
# trees


def _hand_instance(k=1):
    """Root (0,1); 0 -B- 2 -R- 3 on the left, 1 -B- 4 -R- 5 on the right."""
    return BicoloredGraph.from_sets(6, k, [(0, 1), (2, 3), (4, 5)], [(0, 2), (1, 4)])


def test_single_hand_built_tree():
    g = _hand_instance()
    _, av = reserve_edges(g, 0)
    build = build_trees(g, av, ell=1, K=3)
    assert len(build.trees) == 1 and build.failed
    t = build.trees[0]
    assert t.root_edge == (0, 1)
    assert t.left.order == [0, 2, 3] and t.right.order == [1, 4, 5]
    assert [t.left.tag[v] for v in t.left.order] == [RED, BLUE, RED]
    assert t.left.red_vertices == [0, 3]
    assert t.left.path_to_root(3) == [3, 2, 0]
    assert sorted(t.left.edges()) == [((0, 2), BLUE), ((2, 3), RED)]


def test_lambda_zero_no_trees():
    g, _ = plant(ModelParams(500, 2, 0.0, 1))
    _, av = reserve_edges(g, 10, rng=np.random.default_rng(0))
    build = build_trees(g, av, ell=1, K=20, rng=np.random.default_rng(0))
    assert build.trees == [] and len(build.attempted) == 20
    assert all(t.left.size == 1 for t in build.attempted)


def test_build_trees_arguments():
    g = _hand_instance()
    _, av = reserve_edges(g, 0)
    with pytest.raises(ValueError):
        build_trees(g, av, ell=0, K=1)


def _alternates(side):
    for v in side.order[1:]:
        p = side.parent[v]
        if side.tag[v] == side.tag[p]:
            return False
        if (side.tag[v] == BLUE) != (side.depth[v] % 2 == 1):
            return False
    return True


@pytest.mark.parametrize("k,lam", [(1, 1.5), (3, 0.5)])
def test_tree_invariants_audit(k, lam):
    ell, d, gamma = 8, 1, 0.1
    n = 5_000
    for t in range(200):
        rng = trial_rng(17, k, t)
        g, _ = plant(ModelParams(n, k, lam), rng)
        res = construct_cycles(g, ell, d, gamma, rng, audit=(t < 10))
        b = res.build
        assert b.max_side <= 2 * ell + k
        assert b.min_full >= n - 5 * gamma * n
        for tree in b.trees:
            for side in tree.sides:
                assert side.size >= 2 * ell
                assert len(side.red_vertices) >= ell
        for tree in b.attempted:
            assert all(_alternates(s) for s in tree.sides)
            for s in tree.sides:
                blues = [v for v in s.order if s.tag[v] == BLUE]
                for v in blues:
                    kids = [c for c in s.order if s.parent.get(c) == v]
                    assert len(kids) == k


def test_trees_vertex_disjoint():
    g, _ = plant(ModelParams(3_000, 1, 3.0, 5))
    _, av = reserve_edges(g, 100, rng=np.random.default_rng(0))
    build = build_trees(g, av, ell=4, K=50, rng=np.random.default_rng(0), audit=True)
    seen = []
    for t in build.attempted:
        for s in t.sides:
            seen.extend(s.order)
    assert len(seen) == len(set(seen))


# ---------------------------------------------------------------------------
# five-edge construction


def test_construct_lambda_zero_empty():
    g, _ = plant(ModelParams(2_000, 1, 0.0, 0))
    res = construct_cycles(g, 2, 1, 0.05, np.random.default_rng(0))
    assert res.cycles == [] and res.aux.admitted == []


def test_construct_arguments():
    g, _ = plant(ModelParams(100, 1, 1.0, 0))
    for bad in [dict(ell=0, d=1, gamma=0.1), dict(ell=1, d=0, gamma=0.1), dict(ell=1, d=1, gamma=1.0)]:
        with pytest.raises(ValueError):
            construct_cycles(g, rng=0, **bad)


def test_odd_reservation_padded():
    # n=250, k=1, gamma=0.03 asks for int(15.0) = 15 reserved edges
    g, _ = plant(ModelParams(250, 1, 2.0, 0))
    res = construct_cycles(g, 1, 1, 0.03, np.random.default_rng(0))
    assert res.reserved.padded and len(res.reserved) == 14


def _dense_run(t, seed=23):
    rng = trial_rng(seed, 0, t)
    p = DENSE
    g, h = plant(ModelParams(p["n"], p["k"], p["lam"]), rng)
    res = construct_cycles(g, p["ell"], p["d"], p["gamma"], rng, max_cycles=50)
    return g, h, res


def _check_cycles(g, h, cycles):
    h_set = array_to_set(h)
    for c in cycles:
        assert isinstance(c, AlternatingCircuit) and c.is_simple()
        validate_cycle(g, c)
        assert is_k_factor(xor_circuit(h_set, c, g.n, g.k), g.n, g.k)


def test_dense_cycles_valid_and_collision_free():
    emitted = 0
    for t in range(20):
        g, h, res = _dense_run(t)
        _check_cycles(g, h, res.cycles)
        emitted += len(res.cycles)
        aux, rsv = res.aux, res.reserved
        rows = [r for i in aux.admitted for r, _ in aux.ends_left[i] + aux.ends_right[i]]
        assert len(rows) == len(set(rows))
        left, right = set(rsv.left.tolist()), set(rsv.right.tolist())
        blue = set(edge_keys(g.blue, g.n).tolist())
        lk = rsv.linking
        for i in aux.admitted:
            assert len(aux.ends_left[i]) == len(aux.ends_right[i]) == DENSE["d"]
            assert {r for r, _ in aux.ends_left[i]} <= left
            assert {r for r, _ in aux.ends_right[i]} <= right
        for (j, i), (rr, rl) in aux.arcs.items():
            assert rr in dict(aux.ends_right[j]) and rl in dict(aux.ends_left[i])
            u, v = edge(int(lk[rr]), int(lk[rl]))
            assert u * g.n + v in blue
    assert emitted > 0


def test_dense_success_floor():
    hits = sum(len(_dense_run(t, seed=29)[2].cycles) > 0 for t in range(100))
    assert hits / 100 >= DENSE_FLOOR


def test_max_cycles_budget():
    g, h, _ = _dense_run(0)
    res = construct_cycles(g, DENSE["ell"], DENSE["d"], DENSE["gamma"], trial_rng(23, 0, 0), max_cycles=2)
    assert len(res.cycles) <= 2
    if res.truncated:
        assert len(res.cycles) == 2


def _smoke_rate(runs=100):
    hits = 0
    for t in range(runs):
        rng = trial_rng(31, 0, t)
        g, h = plant(ModelParams(20_000, 1, 1.5), rng)
        res = construct_cycles(g, 8, 3, 0.03, rng, max_cycles=50)
        _check_cycles(g, h, res.cycles)
        hits += len(res.cycles) > 0
    return hits / runs


@pytest.mark.slow
def test_smoke_regression_floor():
    assert _smoke_rate() >= SMOKE_FLOOR


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="at n=20000, k*lam=1.5, d=3 almost no tree gets d blue connections; calibrated rate is 0",
)
def test_smoke_half_of_runs():
    assert _smoke_rate() >= 0.5


# ---------------------------------------------------------------------------
# three-edge closure


def _closure_instance():
    """The hand tree plus reserved candidate (6,7) with 3 -B- 6 and 5 -B- 7."""
    red = [(0, 1), (2, 3), (4, 5), (6, 7)]
    blue = [(0, 2), (1, 4), (3, 6), (5, 7)]
    return BicoloredGraph.from_sets(8, 1, red, blue)


def test_closure_hand_instance():
    g = _closure_instance()
    outcomes = [three_edge_closure(g, (0, 1), ell=1, gamma=0.125, rng=s) for s in range(40)]
    closed = [o for o in outcomes if o.reserved.edge_set == {(6, 7)}]
    assert closed
    for o in closed:
        assert o.status == "closed"
        assert o.cycle.vertices == (3, 2, 0, 1, 4, 5, 7, 6)
        assert o.cycle.colors == (RED, BLUE, RED, BLUE, RED, BLUE, RED, BLUE)
    for o in outcomes:
        if o.reserved.edge_set != {(6, 7)}:
            assert not o.closed and o.status in ("left_died", "right_died")


def test_closure_lambda_zero():
    g, h = plant(ModelParams(1_000, 1, 0.0, 0))
    out = three_edge_closure(g, tuple(h[0]), ell=3, gamma=0.05, rng=0)
    assert out.status == "left_died" and out.cycle is None


def test_closure_rejects_blue_edge():
    g = _closure_instance()
    with pytest.raises(ValueError):
        three_edge_closure(g, (0, 2), ell=1, gamma=0.125)
    with pytest.raises(ValueError):
        three_edge_closure(g, (0, 1), ell=1, gamma=0.0)


def test_closure_success_implies_core():
    closed = 0
    for t in range(60):
        rng = trial_rng(37, 0, t)
        g, h = plant(ModelParams(3_000, 1, 3.0), rng)
        e = tuple(int(x) for x in h[rng.integers(len(h))])
        out = three_edge_closure(g, e, ell=closure_ell_for_link(3_000, 3.0, 0.05), gamma=0.05, rng=rng)
        if out.closed:
            closed += 1
            _check_cycles(g, h, [out.cycle])
            assert e in out.cycle.edges()
            core = set(map(tuple, iterative_prune(g, 1).core_edges.tolist()))
            assert e in core
    assert closed > 0


def test_closure_ell_helpers():
    assert default_closure_ell(100_000) == math.ceil(math.sqrt(100_000 * math.log(100_000)))
    assert closure_ell_for_link(100_000, 2.0, 0.01, 5.0) == math.ceil(math.sqrt(5 * 100_000 / 0.01) / 2)
    with pytest.raises(ValueError):
        closure_ell_for_link(100, 0.0, 0.1)


def test_proof_constants():
    c = proof_constants(1.5, 1)
    assert c.gamma == pytest.approx(0.5 / 15)
    lg = math.log(32 * math.e)
    assert c.ell == math.ceil(2**13 * lg / (1.5**2 * c.gamma**2))
    assert c.d == math.ceil(2**11 * lg / (1.5 * c.gamma))
    assert c.ell > 10**6
    with pytest.raises(ValueError):
        proof_constants(0.5, 2)


@given(st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_validate_cycle_rejects_wrong_colors(seed):
    g = _closure_instance()
    good = AlternatingCircuit((3, 2, 0, 1, 4, 5, 7, 6), (RED, BLUE) * 4)
    validate_cycle(g, good)
    shift = AlternatingCircuit(good.vertices, (BLUE, RED) * 4)
    with pytest.raises(ContractViolation):
        validate_cycle(g, shift)

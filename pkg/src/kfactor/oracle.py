"""Exact ground truth for small instances: every k-factor of G, the uniform
posterior over them, and overlap/distance histograms against H*."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .graph_core import BicoloredGraph, Edge, Graph, edge, is_k_factor

DEFAULT_CAP_MATCHING = 16
DEFAULT_CAP_FACTOR = 12
DEFAULT_BUDGET = 50_000_000


class OracleResourceError(RuntimeError):
    """Instance above the size cap, or search budget exhausted."""


def _size_cap(k: int) -> int:
    return DEFAULT_CAP_MATCHING if k == 1 else DEFAULT_CAP_FACTOR


def _edges_of(g) -> tuple[int, list[Edge]]:
    if isinstance(g, (Graph, BicoloredGraph)):
        return g.n, [tuple(e) for e in g.edges.tolist()]
    n, edges = g
    return n, sorted(edge(u, v) for u, v in edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def iter_k_factors(g, k: int, cap: int | None = None, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[Edge, ...]]:
    """Yield every k-factor of ``g`` as a sorted tuple of edges.

    ``g`` is a Graph/BicoloredGraph or an ``(n, edges)`` pair.  Vertices are
    settled in increasing order: vertex v picks its missing incidences among
    edges to higher vertices that still need degree.
    """
    n, edges = _edges_of(g)
    cap = _size_cap(k) if cap is None else cap
    if n > cap:
        raise OracleResourceError(f"n={n} exceeds the oracle cap {cap} for k={k}")
    if (n * k) % 2:
        return
    higher: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        higher[u].append(v)
    need = [k] * n
    chosen: list[Edge] = []
    nodes = 0

    def feasible(v: int) -> bool:
        # every later vertex touched by v must still reach its degree using
        # edges to vertices after v
        for w in higher[v]:
            if need[w] <= 0:
                continue
            avail = sum(1 for x in higher[w] if need[x] > 0)
            avail += sum(1 for u in lower[w] if u > v and need[u] > 0)
            if avail < need[w]:
                return False
        return True

    lower: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        lower[v].append(u)

    def rec(v: int) -> Iterator[tuple[Edge, ...]]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise OracleResourceError(f"enumeration exceeded {budget} search nodes")
        while v < n and need[v] == 0:
            v += 1
        if v == n:
            yield tuple(chosen)
            return
        cands = [w for w in higher[v] if need[w] > 0]
        r = need[v]
        if len(cands) < r:
            return
        for pick in combinations(cands, r):
            need[v] = 0
            for w in pick:
                need[w] -= 1
                chosen.append((v, w))
            if feasible(v):
                yield from rec(v + 1)
            for w in pick:
                need[w] += 1
                chosen.pop()
            need[v] = r

    yield from rec(0)


@dataclass(frozen=True)
class FactorCatalog:
    n: int
    k: int
    factors: tuple  # of frozenset[Edge], in sorted canonical order

    def __len__(self) -> int:
        return len(self.factors)

    def __contains__(self, h) -> bool:
        return frozenset(h) in self._index

    @cached_property
    def _index(self) -> frozenset:
        return frozenset(self.factors)


def enumerate_k_factors(g, k: int, budget: int = DEFAULT_BUDGET, cap: int | None = None) -> FactorCatalog:
    n, _ = _edges_of(g)
    found = sorted(iter_k_factors(g, k, cap=cap, budget=budget))
    return FactorCatalog(n, k, tuple(frozenset(f) for f in found))


def posterior_sample(catalog: FactorCatalog, rng) -> frozenset:
    """Uniform draw from the k-factors of G, i.e. from the posterior of H*."""
    if not catalog.factors:
        raise ValueError("empty catalog: G contains no k-factor")
    return catalog.factors[int(rng.integers(len(catalog.factors)))]


@dataclass
class OverlapHistogram:
    by_overlap: dict[int, int] = field(default_factory=dict)
    by_distance: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.by_distance.values())

    def normalized_distance(self) -> dict[int, Fraction]:
        tot = self.total
        return {t: Fraction(c, tot) for t, c in sorted(self.by_distance.items())}


def overlap_histogram(catalog: FactorCatalog, h_star: Iterable[Edge]) -> OverlapHistogram:
    """Count factors by ``|H & H*|`` and by half-distance ``|H ^ H*| / 2``."""
    h = frozenset(h_star)
    if not is_k_factor(h, catalog.n, catalog.k):
        raise ValueError(f"h_star is not a {catalog.k}-factor on {catalog.n} vertices")
    by_overlap: Counter = Counter()
    by_distance: Counter = Counter()
    for f in catalog.factors:
        by_overlap[len(f & h)] += 1
        by_distance[len(f ^ h) // 2] += 1
    return OverlapHistogram(dict(sorted(by_overlap.items())), dict(sorted(by_distance.items())))


def _is_connected(m: int, edges: Iterable[Edge]) -> bool:
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = m
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps == 1


def fraction_cycle_2factors(m: int, cap: int = DEFAULT_CAP_FACTOR) -> Fraction:
    """Share of the 2-factors of K_m that are a single Hamiltonian cycle."""
    if m < 3:
        raise ValueError("K_m has 2-factors only for m >= 3")
    total = cycles = 0
    for f in iter_k_factors(complete_graph(m), 2, cap=cap):
        total += 1
        cycles += _is_connected(m, f)
    return Fraction(cycles, total)


def factor_to_array(f: Iterable[Edge]) -> np.ndarray:
    rows = sorted(f)
    return np.asarray(rows, dtype=np.int64).reshape(-1, 2)

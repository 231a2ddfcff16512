"""Iterative pruning and the one-step degree estimator.

Both operate on the uncolored :class:`~kfactor.graph_core.Graph`; colors are
only re-attached to the residual core afterwards, for analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .graph_core import BicoloredGraph, Graph, array_to_set, edge_keys, set_to_array

CORE = 0
PLANTED = 1
UNPLANTED = 2


IDLE, QUEUED, REMOVED = 0, 1, 2


def _state_dtype(bound: int):
    """Narrowest integer type holding degrees up to ``bound``; a small
    per-vertex row keeps the random accesses of the kernel in cache."""
    for t in (np.int8, np.int16, np.int32):
        if bound <= np.iinfo(t).max:
            return t
    return np.int64


@numba.njit(cache=True)
def _prune_kernel(n, indptr, nbr, eid, m, k, order, st):
    # st holds one row per vertex (degree, capacity, flag, padding) so that an
    # update touches a single cache line; flag is IDLE, QUEUED or REMOVED
    for v in range(n):
        st[v, 0] = indptr[v + 1] - indptr[v]
        st[v, 1] = k
        st[v, 2] = IDLE
    status = np.zeros(m, dtype=np.int8)
    # ring buffer; the QUEUED flag keeps each vertex in it at most once
    queue = np.empty(max(n, 1), dtype=np.int32)
    head = 0
    size = 0
    for i in range(n):
        v = order[i]
        if st[v, 0] > 0 and st[v, 0] == st[v, 1]:
            queue[size] = v
            size += 1
            st[v, 2] = QUEUED
    peak = size
    pops = 0
    while size > 0:
        v = queue[head]
        head += 1
        if head == n:
            head = 0
        size -= 1
        st[v, 2] = IDLE
        pops += 1
        if st[v, 1] == 0:
            # all remaining incidences are background edges
            for j in range(indptr[v], indptr[v + 1]):
                e = eid[j]
                if status[e] != CORE:
                    continue
                status[e] = UNPLANTED
                w = nbr[j]
                st[w, 0] -= 1
                if st[w, 2] == IDLE and st[w, 1] > 0 and st[w, 0] == st[w, 1]:
                    t = head + size
                    queue[t - n if t >= n else t] = w
                    size += 1
                    st[w, 2] = QUEUED
        elif st[v, 0] == st[v, 1]:
            for j in range(indptr[v], indptr[v + 1]):
                e = eid[j]
                if status[e] != CORE:
                    continue
                status[e] = PLANTED
                w = nbr[j]
                st[w, 0] -= 1
                st[w, 1] -= 1
                if st[w, 2] != IDLE:
                    continue
                if st[w, 1] == 0 and st[w, 0] == 0:
                    st[w, 2] = REMOVED
                elif st[w, 0] == st[w, 1] or st[w, 1] == 0:
                    t = head + size
                    queue[t - n if t >= n else t] = w
                    size += 1
                    st[w, 2] = QUEUED
            st[v, 1] = 0
        else:
            continue
        st[v, 0] = 0
        st[v, 2] = REMOVED
        if size > peak:
            peak = size
    return status, pops, peak


@dataclass(frozen=True, eq=False)
class PruningOutcome:
    """Edge classification produced by :func:`iterative_prune`.

    ``status[i]`` is ``PLANTED``, ``UNPLANTED`` or ``CORE`` for edge row ``i``
    of the input graph.
    """

    n: int
    k: int
    edges: np.ndarray
    status: np.ndarray
    iterations: int
    peak_queue: int
    colors: np.ndarray | None = None

    @property
    def identified_planted(self) -> frozenset:
        return array_to_set(self.edges[self.status == PLANTED])

    @property
    def removed_unplanted(self) -> frozenset:
        return array_to_set(self.edges[self.status == UNPLANTED])

    @property
    def core_edges(self) -> np.ndarray:
        return self.edges[self.status == CORE]

    @property
    def core_size(self) -> int:
        return int(np.count_nonzero(self.status == CORE))

    @property
    def core_is_empty(self) -> bool:
        return self.core_size == 0

    @property
    def core(self) -> BicoloredGraph:
        if self.colors is None:
            raise ValueError("core colors are only available when pruning a BicoloredGraph")
        mask = self.status == CORE
        return BicoloredGraph(self.n, self.k, self.edges[mask], self.colors[mask])

    def counts(self) -> dict:
        return {
            "planted": int(np.count_nonzero(self.status == PLANTED)),
            "unplanted": int(np.count_nonzero(self.status == UNPLANTED)),
            "core": self.core_size,
            "iterations": self.iterations,
            "peak_queue": self.peak_queue,
        }


def iterative_prune(g: Graph | BicoloredGraph, k: int, order=None) -> PruningOutcome:
    """Run iterative pruning to its fixpoint.

    ``order`` optionally permutes the initial FIFO queue (used to check that
    the residual core does not depend on processing order).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    colors = None
    if isinstance(g, BicoloredGraph):
        colors = g.is_red
        g = g.graph
    indptr, nbr, eid = g.csr()
    if order is None:
        order = np.arange(g.n, dtype=indptr.dtype)
    else:
        order = np.asarray(order, dtype=indptr.dtype)
        if sorted(order.tolist()) != list(range(g.n)):
            raise ValueError("order must be a permutation of the vertices")
    st = np.empty((g.n, 4), dtype=_state_dtype(max(int(k), g.max_degree())))
    status, pops, peak = _prune_kernel(g.n, indptr, nbr, eid, g.m, int(k), order, st)
    return PruningOutcome(g.n, int(k), g.edges, status, int(pops), int(peak), colors)


def degree_estimator(g: Graph | BicoloredGraph, k: int) -> frozenset:
    """Edges with at least one endpoint of degree exactly ``k``."""
    return array_to_set(degree_estimator_edges(g, k))


def degree_estimator_edges(g: Graph | BicoloredGraph, k: int) -> np.ndarray:
    if isinstance(g, BicoloredGraph):
        g = g.graph
    deg = g.degrees()
    e = g.edges
    return e[(deg[e[:, 0]] == k) | (deg[e[:, 1]] == k)]


def core_planted_fraction(outcome: PruningOutcome, h_star) -> Fraction:
    """Fraction of planted edges still present in the core."""
    h = set_to_array(h_star) if not isinstance(h_star, np.ndarray) else h_star
    if len(h) == 0:
        raise ValueError("h_star must be nonempty")
    core = outcome.core_edges
    if len(core) == 0:
        return Fraction(0)
    hits = np.count_nonzero(np.isin(edge_keys(h, outcome.n), edge_keys(core, outcome.n)))
    return Fraction(int(hits), len(h))


def pruning_error(outcome: PruningOutcome, h_star) -> Fraction:
    """Reconstruction error of the identified planted set against ``h_star``."""
    h = set_to_array(h_star) if not isinstance(h_star, np.ndarray) else h_star
    if len(h) == 0:
        raise ValueError("h_star must be nonempty")
    found = outcome.edges[outcome.status == PLANTED]
    return _array_risk(h, found, outcome.n)


def _array_risk(h_star: np.ndarray, h_hat: np.ndarray, n: int) -> Fraction:
    a = edge_keys(h_star, n)
    b = edge_keys(h_hat, n) if len(h_hat) else np.zeros(0, dtype=np.int64)
    common = len(np.intersect1d(a, b, assume_unique=True))
    return Fraction(len(a) + len(b) - 2 * common, len(a))


def array_risk(h_star: np.ndarray, h_hat: np.ndarray, n: int) -> Fraction:
    """Same as :func:`kfactor.graph_core.risk` for edge arrays (no Python sets)."""
    if len(h_star) == 0:
        raise ValueError("h_star must be nonempty")
    return _array_risk(h_star, h_hat, n)

"""Graph representation shared by every other module.

Edges are plain ``(u, v)`` tuples with ``u < v``; an edge set is a
``frozenset`` of them.  Large graphs live in numpy arrays (one row per edge)
with a lazily built CSR adjacency, so that pruning at n ~ 1e6 never touches
Python objects per edge.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

Edge = tuple[int, int]
EdgeSet = frozenset  # frozenset[Edge]

RED = "R"
BLUE = "B"


def edge(u: int, v: int) -> Edge:
    """Canonical edge ``(min, max)``; rejects self-loops and negative ids."""
    u = int(u)
    v = int(v)
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    if u < 0 or v < 0:
        raise ValueError(f"negative vertex id in ({u}, {v})")
    return (u, v) if u < v else (v, u)


def edge_set(pairs: Iterable) -> frozenset:
    """Build an edge set from any iterable of vertex pairs."""
    return frozenset(edge(u, v) for u, v in pairs)


def symmetric_difference(a: frozenset, b: frozenset) -> frozenset:
    return frozenset(a) ^ frozenset(b)


def risk(h_star: frozenset, h_hat: frozenset) -> Fraction:
    """Reconstruction error ``|h_star ^ h_hat| / |h_star|`` as an exact rational."""
    if not h_star:
        raise ValueError("risk is undefined for an empty planted set")
    return Fraction(len(symmetric_difference(h_star, h_hat)), len(h_star))


def degree_counts(edges: Iterable[Edge], n: int) -> list[int]:
    deg = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        deg[u] += 1
        deg[v] += 1
    return deg


def is_k_factor(edges: Iterable[Edge], n: int, k: int) -> bool:
    """True iff every vertex of ``[0, n)`` has degree exactly ``k``."""
    return all(d == k for d in degree_counts(edges, n))


# ---------------------------------------------------------------------------
# array-backed graphs


def _as_edge_array(edges, n: int) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edge array must have shape (m, 2)")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    if np.any(lo == hi):
        raise ValueError("self-loops are not allowed")
    if lo.min() < 0 or hi.max() >= n:
        raise ValueError(f"vertex id out of range for n={n}")
    return np.ascontiguousarray(np.stack([lo, hi], axis=1))


def edge_keys(edges: np.ndarray, n: int) -> np.ndarray:
    """Injective int64 key ``u * n + v`` for canonical edge rows."""
    return edges[:, 0] * np.int64(n) + edges[:, 1]


def keys_to_edges(keys: np.ndarray, n: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    return np.stack([keys // n, keys % n], axis=1)


def array_to_set(edges: np.ndarray) -> frozenset:
    return frozenset(zip(edges[:, 0].tolist(), edges[:, 1].tolist()))


def set_to_array(edges: Iterable[Edge]) -> np.ndarray:
    rows = sorted(edges)
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Graph:
    """Uncolored simple graph on ``[0, n)``.

    This is the view the estimators see: no information about which edges
    were planted.
    """

    n: int
    edges: np.ndarray
    _csr: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        arr = _as_edge_array(self.edges, self.n)
        if len(arr) and len(np.unique(edge_keys(arr, self.n))) != len(arr):
            raise ValueError("duplicate edges")
        arr.setflags(write=False)
        object.__setattr__(self, "edges", arr)

    @property
    def m(self) -> int:
        return len(self.edges)

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbor, edge_id)`` with both directions of every edge."""
        if not self._csr:
            n, e = self.n, self.edges
            m = len(e)
            src = np.concatenate([e[:, 0], e[:, 1]])
            dst = np.concatenate([e[:, 1], e[:, 0]])
            # int32 halves the memory traffic of the pruning kernel
            idx = np.int32 if max(n, 2 * m) < 2**31 else np.int64
            eid = np.concatenate([np.arange(m), np.arange(m)]).astype(idx)
            order = np.argsort(src, kind="stable")
            indptr = np.zeros(n + 1, dtype=idx)
            np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
            self._csr.update(indptr=indptr, nbr=dst[order].astype(idx), eid=eid[order])
        c = self._csr
        return c["indptr"], c["nbr"], c["eid"]

    def degrees(self) -> np.ndarray:
        indptr = self.csr()[0]
        return np.diff(indptr)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def neighbors(self, v: int) -> np.ndarray:
        indptr, nbr, _ = self.csr()
        return nbr[indptr[v] : indptr[v + 1]]

    def edge_set(self) -> frozenset:
        return array_to_set(self.edges)


@dataclass(frozen=True, eq=False)
class BicoloredGraph:
    """Observed graph with planted (red) and background-only (blue) edges.

    ``edges`` keeps file/insertion order; ``is_red`` flags planted rows.
    """

    n: int
    k: int
    edges: np.ndarray
    is_red: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = Graph(self.n, self.edges)
        mask = np.asarray(self.is_red, dtype=bool).copy()
        if mask.shape != (g.m,):
            raise ValueError("is_red must have one flag per edge")
        mask.setflags(write=False)
        object.__setattr__(self, "edges", g.edges)
        object.__setattr__(self, "is_red", mask)
        self._cache["graph"] = g

    @classmethod
    def from_arrays(cls, n: int, k: int, red, blue) -> "BicoloredGraph":
        red = _as_edge_array(red, n)
        blue = _as_edge_array(blue, n)
        edges = np.concatenate([red, blue])
        mask = np.zeros(len(edges), dtype=bool)
        mask[: len(red)] = True
        return cls(n, k, edges, mask)

    @classmethod
    def from_sets(cls, n: int, k: int, red: Iterable, blue: Iterable) -> "BicoloredGraph":
        red_s = edge_set(red)
        blue_s = edge_set(blue)
        if red_s & blue_s:
            raise ValueError("an edge cannot be both red and blue")
        return cls.from_arrays(n, k, set_to_array(red_s), set_to_array(blue_s))

    @property
    def graph(self) -> Graph:
        """The uncolored view handed to estimators."""
        return self._cache["graph"]

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def red(self) -> np.ndarray:
        return self.edges[self.is_red]

    @property
    def blue(self) -> np.ndarray:
        return self.edges[~self.is_red]

    @property
    def red_set(self) -> frozenset:
        if "red_set" not in self._cache:
            self._cache["red_set"] = array_to_set(self.red)
        return self._cache["red_set"]

    @property
    def blue_set(self) -> frozenset:
        if "blue_set" not in self._cache:
            self._cache["blue_set"] = array_to_set(self.blue)
        return self._cache["blue_set"]

    def color_of(self, u: int, v: int) -> str | None:
        e = edge(u, v)
        if e in self.red_set:
            return RED
        if e in self.blue_set:
            return BLUE
        return None

    def colored_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbor, neighbor_is_red)``."""
        if "ccsr" not in self._cache:
            indptr, nbr, eid = self.graph.csr()
            self._cache["ccsr"] = (indptr, nbr, self.is_red[eid])
        return self._cache["ccsr"]

    def adjacency(self, v: int) -> list[tuple[int, str]]:
        indptr, nbr, red = self.colored_csr()
        lo, hi = indptr[v], indptr[v + 1]
        return [(int(w), RED if r else BLUE) for w, r in zip(nbr[lo:hi], red[lo:hi])]

    def red_neighbors(self, v: int) -> np.ndarray:
        indptr, nbr, red = self.colored_csr()
        lo, hi = indptr[v], indptr[v + 1]
        return nbr[lo:hi][red[lo:hi]]

    def blue_neighbors(self, v: int) -> np.ndarray:
        indptr, nbr, red = self.colored_csr()
        lo, hi = indptr[v], indptr[v + 1]
        return nbr[lo:hi][~red[lo:hi]]

    def subgraph(self, mask: np.ndarray) -> "BicoloredGraph":
        """Keep only the edge rows selected by ``mask`` (colors retained)."""
        return BicoloredGraph(self.n, self.k, self.edges[mask], self.is_red[mask])

    def edge_sets_from_adjacency(self) -> tuple[frozenset, frozenset]:
        red, blue = set(), set()
        for v in range(self.n):
            for w, c in self.adjacency(v):
                (red if c == RED else blue).add(edge(v, w))
        return frozenset(red), frozenset(blue)


# ---------------------------------------------------------------------------
# edge-list text format:  header "n<TAB>k", then "u<TAB>v<TAB>R|B" per edge


def dumps(g: BicoloredGraph) -> str:
    buf = io.StringIO()
    buf.write(f"{g.n}\t{g.k}\n")
    for (u, v), r in zip(g.edges.tolist(), g.is_red.tolist()):
        buf.write(f"{u}\t{v}\t{RED if r else BLUE}\n")
    return buf.getvalue()


def loads(text: str) -> BicoloredGraph:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty edge-list file")
    header = lines[0].split("\t")
    if len(header) != 2:
        raise ValueError(f"bad header line: {lines[0]!r}")
    n, k = int(header[0]), int(header[1])
    rows, mask = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 3 or parts[2] not in (RED, BLUE):
            raise ValueError(f"line {lineno}: expected 'u<TAB>v<TAB>R|B', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise ValueError(f"line {lineno}: edge must be written with u < v")
        rows.append((u, v))
        mask.append(parts[2] == RED)
    return BicoloredGraph(n, k, np.asarray(rows, dtype=np.int64).reshape(-1, 2), np.asarray(mask, dtype=bool))


def write_edge_list(g: BicoloredGraph, path: str | os.PathLike) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(g))


def read_edge_list(path: str | os.PathLike) -> BicoloredGraph:
    with open(path, newline="\n") as fh:
        return loads(fh.read())


def iter_edges(g: Graph | BicoloredGraph) -> Iterator[Edge]:
    for u, v in g.edges.tolist():
        yield (u, v)

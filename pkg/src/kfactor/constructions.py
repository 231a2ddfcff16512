"""Constructive alternating cycles: reserved edges, two-sided alternating
trees, the five-edge linking of many small trees, and the three-edge
closure of one large tree around a given planted edge.

These constructions read the colors, i.e. they know H*.  They are analysis
tools, not estimators.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import islice

import networkx as nx
import numpy as np

from .circuits import AlternatingCircuit, ContractViolation
from .graph_core import BLUE, RED, BicoloredGraph, Edge, _as_edge_array, edge, edge_keys, set_to_array
from .planted import make_rng

DEFAULT_MAX_CYCLES = 10_000


class CapacityError(ValueError):
    """Greedy reservation ran out of disjoint red edges before reaching ``m``."""


# ---------------------------------------------------------------------------
# adjacency split by color


@dataclass(frozen=True, eq=False)
class _ColorAdjacency:
    red_ptr: np.ndarray
    red_nbr: np.ndarray
    blue_ptr: np.ndarray
    blue_nbr: np.ndarray

    def red(self, v: int) -> list[int]:
        return self.red_nbr[self.red_ptr[v] : self.red_ptr[v + 1]].tolist()

    def blue(self, v: int) -> list[int]:
        return self.blue_nbr[self.blue_ptr[v] : self.blue_ptr[v + 1]].tolist()


def _csr(n: int, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.argsort(src, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, dst[order]


def _adjacency(g: BicoloredGraph) -> _ColorAdjacency:
    if "color_adj" not in g._cache:
        rp, rn = _csr(g.n, g.red)
        bp, bn = _csr(g.n, g.blue)
        g._cache["color_adj"] = _ColorAdjacency(rp, rn, bp, bn)
    return g._cache["color_adj"]


def _relabeled_order(edges: np.ndarray, n: int, rng) -> np.ndarray:
    """Row order of ``edges`` by canonical order after relabeling vertices.

    With ``rng=None`` the identity labeling is used.
    """
    if len(edges) == 0:
        return np.zeros(0, dtype=np.int64)
    if rng is None:
        return np.argsort(edge_keys(edges, n), kind="stable")
    perm = rng.permutation(n)
    a, b = perm[edges[:, 0]], perm[edges[:, 1]]
    keys = np.minimum(a, b) * n + np.maximum(a, b)
    return np.argsort(keys, kind="stable")


# ---------------------------------------------------------------------------
# Reserving edges


@dataclass(frozen=True, eq=False)
class ReservedEdges:
    """Vertex-disjoint red edges, rows ``(u, v)`` with ``u < v``.

    ``u`` is the tree-facing endpoint and ``v`` the linking endpoint.
    ``left``/``right`` hold row indices of the two halves once split.
    """

    edges: np.ndarray
    left: np.ndarray | None = None
    right: np.ndarray | None = None
    padded: bool = False

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def tree_facing(self) -> np.ndarray:
        return self.edges[:, 0]

    @property
    def linking(self) -> np.ndarray:
        return self.edges[:, 1]

    @property
    def edge_set(self) -> frozenset:
        return frozenset(map(tuple, self.edges.tolist()))

    def split(self, rng) -> "ReservedEdges":
        """Random partition into two equal halves (requires even size)."""
        if len(self) % 2:
            raise ValueError("cannot split an odd number of reserved edges evenly")
        perm = make_rng(rng).permutation(len(self))
        half = len(self) // 2
        return ReservedEdges(self.edges, np.sort(perm[:half]), np.sort(perm[half:]), self.padded)

    def pad_down(self) -> "ReservedEdges":
        """Drop the last edge if the count is odd."""
        if len(self) % 2 == 0:
            return self
        return ReservedEdges(self.edges[:-1], None, None, True)


@dataclass(eq=False)
class AvailabilitySets:
    """Mutable sets A (available) and F (full-branching) as boolean masks."""

    available: np.ndarray
    full: np.ndarray
    min_full: int = field(init=False)

    def __post_init__(self):
        self._n_avail = int(self.available.sum())
        self._n_full = int(self.full.sum())
        self.min_full = self._n_full

    @property
    def n_available(self) -> int:
        return self._n_avail

    @property
    def n_full(self) -> int:
        return self._n_full

    def take(self, v: int) -> None:
        """Remove ``v`` from both A and F."""
        if self.available[v]:
            self.available[v] = False
            self._n_avail -= 1
        self.drop_full(v)

    def drop_full(self, v: int) -> None:
        if self.full[v]:
            self.full[v] = False
            self._n_full -= 1
            if self._n_full < self.min_full:
                self.min_full = self._n_full

    def copy(self) -> "AvailabilitySets":
        return AvailabilitySets(self.available.copy(), self.full.copy())

    def violations(self, red_edges: np.ndarray) -> np.ndarray:
        """Vertices of F with a red neighbor outside A, or outside A themselves."""
        bad = self.full & ~self.available
        u, v = red_edges[:, 0], red_edges[:, 1]
        bad_u = self.full[u] & ~self.available[v]
        bad_v = self.full[v] & ~self.available[u]
        out = np.flatnonzero(bad)
        return np.unique(np.concatenate([out, u[bad_u], v[bad_v]]))

    def check(self, red_edges: np.ndarray) -> None:
        bad = self.violations(red_edges)
        if len(bad):
            raise ContractViolation(f"full-branching invariant broken at vertices {bad[:10].tolist()}")


def reserve_edges(h_star, m: int, *, n: int | None = None, forbidden: Edge | None = None, rng=None):
    """Greedily pick ``m`` vertex-disjoint red edges.

    ``h_star`` is a BicoloredGraph (its red edges are used) or an edge
    array/set.  Among the remaining candidates the lowest edge in canonical
    order after a seed-determined relabeling is picked each time.  With
    ``forbidden=(i, j)`` no reserved edge may touch ``i`` or ``j``.

    Returns ``(ReservedEdges, AvailabilitySets)``.
    """
    if isinstance(h_star, BicoloredGraph):
        n = h_star.n
        red = h_star.red
    else:
        red = h_star if isinstance(h_star, np.ndarray) else set_to_array(h_star)
        red = red.reshape(-1, 2).astype(np.int64)
        if n is None:
            n = int(red.max()) + 1 if len(red) else 0
        red = _as_edge_array(red, n)
    if m < 0:
        raise ValueError("m must be nonnegative")
    rng = None if rng is None else make_rng(rng)

    used = np.zeros(n, dtype=bool)
    if forbidden is not None:
        i, j = edge(*forbidden)
        used[[i, j]] = True
    chosen: list[int] = []
    if m:
        order = _relabeled_order(red, n, rng)
        rows = red.tolist()
        for r in order.tolist():
            if len(chosen) == m:
                break
            u, v = rows[r]
            if used[u] or used[v]:
                continue
            used[u] = used[v] = True
            chosen.append(r)
    if len(chosen) < m:
        raise CapacityError(f"only {len(chosen)} disjoint red edges available, {m} requested")

    res = red[np.asarray(chosen, dtype=np.int64)] if chosen else np.zeros((0, 2), dtype=np.int64)
    v1 = np.zeros(n, dtype=bool)
    v1[res.ravel()] = True
    v2 = np.zeros(n, dtype=bool)
    if len(red):
        v2[red[v1[red[:, 0]], 1]] = True
        v2[red[v1[red[:, 1]], 0]] = True
    return ReservedEdges(res), AvailabilitySets(~v1, ~v1 & ~v2)


# ---------------------------------------------------------------------------
# Two-sided alternating trees


@dataclass(eq=False)
class TreeSide:
    """One side of a two-sided tree.  ``tag[v]`` is the color of the edge
    from ``v`` to its parent; the root carries the red root edge."""

    root: int
    parent: dict = field(default_factory=dict)
    tag: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def __post_init__(self):
        if not self.order:
            self.parent[self.root] = -1
            self.tag[self.root] = RED
            self.depth[self.root] = 0
            self.order.append(self.root)

    def attach(self, v: int, parent: int, color: str) -> None:
        self.parent[v] = parent
        self.tag[v] = color
        self.depth[v] = self.depth[parent] + 1
        self.order.append(v)

    @property
    def size(self) -> int:
        return len(self.order)

    @property
    def red_vertices(self) -> list[int]:
        """Even-layer vertices, root included, in attachment order."""
        return [v for v in self.order if self.tag[v] == RED]

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] != -1:
            path.append(self.parent[path[-1]])
        return path

    def edges(self) -> list[tuple[Edge, str]]:
        return [(edge(v, self.parent[v]), self.tag[v]) for v in self.order[1:]]


@dataclass(eq=False)
class TwoSidedTree:
    root_edge: Edge
    left: TreeSide
    right: TreeSide | None
    kept: bool = False

    @property
    def sides(self) -> list[TreeSide]:
        return [s for s in (self.left, self.right) if s is not None]


@dataclass(eq=False)
class TreeBuild:
    """Output of :func:`build_trees`.  ``failed`` is the FAIL outcome of tree building: no
    red edge with both endpoints available was left."""

    trees: list
    attempted: list
    failed: bool
    min_full: int
    max_side: int


def _grow_side(root: int, adj: _ColorAdjacency, avail: AvailabilitySets, target: int, k: int, audit) -> TreeSide:
    side = TreeSide(root)
    queue = deque([root])
    s = 1
    full = avail.full
    while queue and s < target:
        u = queue.popleft()
        for v in [w for w in adj.blue(u) if full[w]]:
            if s >= target:
                break
            if not full[v]:
                continue
            cv = adj.red(v)
            side.attach(v, u, BLUE)
            for c in cv:
                side.attach(c, v, RED)
            s += k + 1
            queue.extend(cv)
            avail.take(v)
            for c in cv:
                avail.take(c)
            for c in cv:
                for w in adj.red(c):
                    avail.drop_full(w)
            if audit is not None:
                audit(avail)
    return side


def grow_tree(g: BicoloredGraph, avail: AvailabilitySets, root_edge: Edge, ell: int, audit=None) -> TwoSidedTree:
    """Grow one two-sided tree on the red edge ``root_edge`` (mutates ``avail``)."""
    u0, u1 = edge(*root_edge)
    adj = _adjacency(g)
    target = 2 * ell
    for r in (u0, u1):
        avail.take(r)
    for r in (u0, u1):
        for w in adj.red(r):
            avail.drop_full(w)
    if audit is not None:
        audit(avail)
    left = _grow_side(u0, adj, avail, target, g.k, audit)
    tree = TwoSidedTree((u0, u1), left, None)
    if left.size >= target:
        tree.right = _grow_side(u1, adj, avail, target, g.k, audit)
        tree.kept = tree.right.size >= target
    return tree


def build_trees(
    g: BicoloredGraph, avail: AvailabilitySets, ell: int, K: int, rng=None, audit: bool = False
) -> TreeBuild:
    """Grow up to ``K`` two-sided trees, keeping those whose sides
    both reach ``2*ell`` vertices.  Mutates ``avail``."""
    if ell < 1 or K < 0:
        raise ValueError("need ell >= 1 and K >= 0")
    rng = None if rng is None else make_rng(rng)
    red = g.red
    hook = (lambda a: a.check(red)) if audit else None
    order = _relabeled_order(red, g.n, rng).tolist()
    rows = red.tolist()
    pos = 0
    attempted: list[TwoSidedTree] = []
    failed = False
    for _ in range(K):
        while pos < len(order):
            u, v = rows[order[pos]]
            if avail.available[u] and avail.available[v]:
                break
            pos += 1
        else:
            failed = True
            break
        attempted.append(grow_tree(g, avail, (u, v), ell, hook))
    max_side = max((s.size for t in attempted for s in t.sides), default=0)
    kept = [t for t in attempted if t.kept]
    return TreeBuild(kept, attempted, failed, avail.min_full, max_side)


# ---------------------------------------------------------------------------
# cycle validation


def validate_cycle(g: BicoloredGraph, cycle: AlternatingCircuit) -> None:
    """Raise ContractViolation unless ``cycle`` is a simple alternating cycle
    of ``g`` whose red edges are planted and blue edges are background.

    Every vertex of such a cycle meets exactly one red and one blue cycle
    edge, so XOR with H* keeps all degrees at k.
    """
    if not cycle.is_simple():
        raise ContractViolation(f"cycle repeats a vertex: {cycle.vertices}")
    red, blue = _color_keys(g)
    for e, c in cycle.walk:
        key = e[0] * g.n + e[1]
        if key not in (red if c == RED else blue):
            raise ContractViolation(f"edge {e} is not a {c} edge of G")


def _color_keys(g: BicoloredGraph) -> tuple[frozenset, frozenset]:
    if "color_keys" not in g._cache:
        g._cache["color_keys"] = (
            frozenset(edge_keys(g.red, g.n).tolist()),
            frozenset(edge_keys(g.blue, g.n).tolist()),
        )
    return g._cache["color_keys"]


def _close(vertices: list[int], g: BicoloredGraph) -> AlternatingCircuit:
    # colors are read back from G; a wrong color or missing edge surfaces in
    # the AlternatingCircuit constructor or in validate_cycle
    red, blue = _color_keys(g)
    L = len(vertices)
    colors = []
    for i in range(L):
        u, v = edge(vertices[i], vertices[(i + 1) % L])
        key = u * g.n + v
        if key in red:
            colors.append(RED)
        elif key in blue:
            colors.append(BLUE)
        else:
            raise ContractViolation(f"({u}, {v}) is not an edge of G")
    try:
        cyc = AlternatingCircuit(tuple(vertices), tuple(colors))
    except ValueError as exc:
        raise ContractViolation(f"expanded cycle does not alternate: {exc}") from exc
    validate_cycle(g, cyc)
    return cyc


def _through_tree(tree: TwoSidedTree, x: int, y: int) -> list[int]:
    """Vertices from ``x`` in the left side, up across the root edge, and
    down to ``y`` in the right side."""
    return tree.left.path_to_root(x) + tree.right.path_to_root(y)[::-1]


# ---------------------------------------------------------------------------
# Five-edge linking of many trees


@dataclass(eq=False)
class AuxBipartiteGraph:
    """Auxiliary graph on admitted trees.

    ``ends_left[i]`` / ``ends_right[i]`` list ``(reserved_row, red_vertex)``
    for the d edges associated with L_i / R_i.  ``arcs[(j, i)]`` is a witness
    ``(row in E(R_j), row in E(L_i))`` whose linking endpoints share a blue
    edge, i.e. the blue edge ``R_j - L_i`` of the auxiliary graph.
    """

    admitted: list
    ends_left: dict
    ends_right: dict
    arcs: dict

    def digraph(self) -> nx.DiGraph:
        dg = nx.DiGraph()
        dg.add_nodes_from(self.admitted)
        dg.add_edges_from(self.arcs)
        return dg


@dataclass(eq=False)
class CycleConstruction:
    cycles: list
    reserved: ReservedEdges
    build: TreeBuild
    aux: AuxBipartiteGraph
    truncated: bool


def _blue_connected(side: TreeSide, adj: _ColorAdjacency, facing_row: dict, marked: set, d: int) -> list:
    found: list[tuple[int, int]] = []
    seen: set[int] = set()
    for x in side.red_vertices:
        for w in adj.blue(x):
            r = facing_row.get(w)
            if r is None or r in marked or r in seen:
                continue
            seen.add(r)
            found.append((r, x))
            if len(found) == d:
                return found
    return found


def construct_cycles(
    g: BicoloredGraph,
    ell: int,
    d: int,
    gamma: float,
    rng=None,
    max_cycles: int = DEFAULT_MAX_CYCLES,
    max_length: int | None = None,
    audit: bool = False,
) -> CycleConstruction:
    """Five-edge construction of alternating cycles.

    Reserves ``2*gamma*n/k`` red edges (one fewer if odd; see
    ``reserved.padded``), builds ``gamma*n / (2(2 ell + k) k)`` trees, admits
    trees with ``d`` fresh blue connections on each side, and expands up to
    ``max_cycles`` cycles of the auxiliary graph into alternating cycles of G.
    ``max_length`` bounds the number of trees per cycle.
    """
    if ell < 1 or d < 1 or not 0 < gamma < 1:
        raise ValueError("need ell >= 1, d >= 1 and 0 < gamma < 1")
    rng = make_rng(rng)
    n, k = g.n, g.k
    m = int(2 * gamma * n / k)
    reserved, avail = reserve_edges(g, m - (m % 2), rng=rng)
    reserved = ReservedEdges(reserved.edges, padded=bool(m % 2))
    K = int(gamma * n / (2 * (2 * ell + k) * k))
    build = build_trees(g, avail, ell, K, rng=rng, audit=audit)
    reserved = reserved.split(rng)

    adj = _adjacency(g)
    tf, lk = reserved.tree_facing.tolist(), reserved.linking.tolist()
    facing_left = {tf[r]: r for r in reserved.left.tolist()}
    facing_right = {tf[r]: r for r in reserved.right.tolist()}
    marked: set[int] = set()
    admitted: list[int] = []
    ends_left: dict[int, list] = {}
    ends_right: dict[int, list] = {}
    for i, tree in enumerate(build.trees):
        el = _blue_connected(tree.left, adj, facing_left, marked, d)
        if len(el) < d:
            continue
        er = _blue_connected(tree.right, adj, facing_right, marked, d)
        if len(er) < d:
            continue
        admitted.append(i)
        ends_left[i], ends_right[i] = el, er
        marked.update(r for r, _ in el)
        marked.update(r for r, _ in er)

    # linking endpoint of E(R_j) -> (j, row)
    link_right = {lk[r]: (j, r) for j in admitted for r, _ in ends_right[j]}
    arcs: dict[tuple[int, int], tuple[int, int]] = {}
    for i in admitted:
        for r_left, _ in ends_left[i]:
            for w in adj.blue(lk[r_left]):
                hit = link_right.get(w)
                if hit is not None and (hit[0], i) not in arcs:
                    arcs[(hit[0], i)] = (hit[1], r_left)
    aux = AuxBipartiteGraph(admitted, ends_left, ends_right, arcs)

    bound = max_length if max_length is not None else max(len(admitted), 1)
    gen = nx.simple_cycles(aux.digraph(), length_bound=bound)
    found = list(islice(gen, max_cycles + 1))
    truncated = len(found) > max_cycles
    cycles = [_expand(g, build.trees, aux, reserved, c) for c in found[:max_cycles]]
    return CycleConstruction(cycles, reserved, build, aux, truncated)


def _expand(g: BicoloredGraph, trees: list, aux: AuxBipartiteGraph, reserved: ReservedEdges, tree_cycle) -> AlternatingCircuit:
    """Turn a directed cycle ``i1 -> i2 -> ... -> i1`` of admitted trees into
    a cycle of G: each tree is crossed from its left entry vertex to its
    right exit vertex, and consecutive trees are joined by
    ``y -B- tf -R- lk -B- lk' -R- tf' -B- x``."""
    m = len(tree_cycle)
    x_of = {t: None for t in tree_cycle}
    y_of = {t: None for t in tree_cycle}
    links = []
    tf, lk = reserved.tree_facing, reserved.linking
    for a in range(m):
        j, i = tree_cycle[a], tree_cycle[(a + 1) % m]
        r_right, r_left = aux.arcs[(j, i)]
        y_of[j] = dict(aux.ends_right[j])[r_right]
        x_of[i] = dict(aux.ends_left[i])[r_left]
        links.append([int(tf[r_right]), int(lk[r_right]), int(lk[r_left]), int(tf[r_left])])
    verts: list[int] = []
    for a in range(m):
        t = tree_cycle[a]
        verts += _through_tree(trees[t], x_of[t], y_of[t])
        verts += links[a]
    return _close(verts, g)


# ---------------------------------------------------------------------------
# three-edge closure around one planted edge


@dataclass(eq=False)
class ClosureOutcome:
    """``status`` is ``"closed"``, ``"left_died"``, ``"right_died"`` or
    ``"no_link"``; ``cycle`` is set only when closed."""

    status: str
    cycle: AlternatingCircuit | None
    tree: TwoSidedTree
    reserved: ReservedEdges

    @property
    def closed(self) -> bool:
        return self.cycle is not None


def default_closure_ell(n: int) -> int:
    """``sqrt(n log n)``, the asymptotic size parameter."""
    return max(1, math.ceil(math.sqrt(n * math.log(n))))


def closure_ell_for_link(n: int, lam: float, gamma: float, expected_links: float = 5.0) -> int:
    """Smallest size parameter for which the expected number of reserved
    edges linked to both sides is about ``expected_links``.

    Each side holds at least ``ell`` red vertices, so one endpoint is
    blue-connected to a side with probability about ``lam * ell / n`` and a
    given reserved edge links to both sides with probability about
    ``(lam * ell / n)**2``.  Over ``gamma * n`` reserved edges the miss
    probability is then about ``exp(-expected_links)``.
    """
    if lam <= 0 or not 0 < gamma < 1:
        raise ValueError("need lam > 0 and 0 < gamma < 1")
    return max(1, math.ceil(math.sqrt(expected_links * n / gamma) / lam))


def three_edge_closure(g: BicoloredGraph, e: Edge, ell: int | None = None, gamma: float = 0.01, rng=None) -> ClosureOutcome:
    """Close an alternating cycle through the planted edge ``e``.

    Reserves ``gamma*n`` red edges away from ``e``, grows one two-sided tree
    rooted at ``e`` with size parameter ``ell`` (default ``sqrt(n log n)``),
    then looks for a reserved edge ``(a, b)``, ``a < b``, with ``a``
    blue-adjacent to a red vertex of the left side and ``b`` to a red vertex
    of the right side.  The left side is rooted at the smaller endpoint of ``e``.
    """
    e = edge(*e)
    if e[0] * g.n + e[1] not in _color_keys(g)[0]:
        raise ValueError(f"{e} is not a planted edge of G")
    if not 0 < gamma < 1:
        raise ValueError("need 0 < gamma < 1")
    n = g.n
    ell = default_closure_ell(n) if ell is None else int(ell)
    rng = make_rng(rng)
    reserved, avail = reserve_edges(g, int(gamma * n), forbidden=e, rng=rng)
    tree = grow_tree(g, avail, e, ell)
    if not tree.kept:
        status = "left_died" if tree.right is None else "right_died"
        return ClosureOutcome(status, None, tree, reserved)

    in_left = np.zeros(n, dtype=bool)
    in_left[tree.left.red_vertices] = True
    in_right = np.zeros(n, dtype=bool)
    in_right[tree.right.red_vertices] = True
    wit_left = _blue_witness(g, reserved.tree_facing, in_left)
    wit_right = _blue_witness(g, reserved.linking, in_right)
    ok = np.flatnonzero((wit_left >= 0) & (wit_right >= 0))
    if len(ok) == 0:
        return ClosureOutcome("no_link", None, tree, reserved)
    r = int(ok[0])
    a, b = reserved.edges[r].tolist()
    verts = _through_tree(tree, int(wit_left[r]), int(wit_right[r])) + [b, a]
    return ClosureOutcome("closed", _close(verts, g), tree, reserved)


def _blue_witness(g: BicoloredGraph, ends: np.ndarray, target: np.ndarray) -> np.ndarray:
    """For each vertex in ``ends``, some blue neighbor inside ``target`` (or -1)."""
    n = g.n
    blue = g.blue
    wit = np.full(n, -1, dtype=np.int64)
    is_end = np.zeros(n, dtype=bool)
    is_end[ends] = True
    for s, t in ((0, 1), (1, 0)):
        hit = is_end[blue[:, s]] & target[blue[:, t]]
        wit[blue[hit, s]] = blue[hit, t]
    return wit[ends]


# ---------------------------------------------------------------------------
# constants from the existence proof


@dataclass(frozen=True)
class ConstructionParams:
    ell: int
    d: int
    gamma: float


def proof_constants(lam: float, k: int, alpha: float = 1.0) -> ConstructionParams:
    """Size and degree parameters used by the existence proof.

    With ``k*lam = 1 + eps``: ``gamma = eps / (10 (1 + eps))``,
    ``ell = 2^13 log(32e) k^2 alpha / (lam^2 gamma^2)`` and
    ``d = 2^11 log(32e) k alpha / (lam gamma)``, rounded up.  These are far
    too large for simulation; they are exposed for reference only.
    """
    eps = k * lam - 1
    if eps <= 0:
        raise ValueError("the construction needs k * lam > 1")
    gamma = eps / (10 * (1 + eps))
    c = math.log(32 * math.e)
    ell = math.ceil(2**13 * c * k * k * alpha / (lam * lam * gamma * gamma))
    d = math.ceil(2**11 * c * k * alpha / (lam * gamma))
    return ConstructionParams(ell, d, gamma)

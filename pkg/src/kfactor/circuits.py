"""Alternating-circuit algebra on red/blue graphs.

Colors are the strings ``"R"`` and ``"B"``.  A circuit is stored as its
vertex sequence ``v0 .. v(L-1)`` plus the color of each edge
``(v_i, v_(i+1 mod L))``.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph_core import BLUE, RED, BicoloredGraph, Edge, edge, is_k_factor


def other(color: str) -> str:
    return BLUE if color == RED else RED


class UnbalancedError(ValueError):
    def __init__(self, vertex: int, red: int, blue: int):
        super().__init__(f"vertex {vertex} has red-degree {red} but blue-degree {blue}")
        self.vertex = vertex


class ContractViolation(RuntimeError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class AlternatingCircuit:
    vertices: tuple[int, ...]
    colors: tuple[str, ...]

    def __post_init__(self):
        L = len(self.vertices)
        if L != len(self.colors):
            raise ValueError("one color per edge required")
        if L < 4 or L % 2:
            raise ValueError(f"alternating circuits have even length >= 4, got {L}")
        for i in range(L):
            if self.colors[i] == self.colors[(i + 1) % L]:
                raise ValueError(f"colors repeat at position {i}")
            edge(self.vertices[i], self.vertices[(i + 1) % L])

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def walk(self) -> list[tuple[Edge, str]]:
        L = len(self.vertices)
        return [(edge(self.vertices[i], self.vertices[(i + 1) % L]), self.colors[i]) for i in range(L)]

    def edges(self) -> list[Edge]:
        return [e for e, _ in self.walk]

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)


@dataclass(frozen=True)
class AlmostAlternatingCycle:
    vertices: tuple[int, ...]
    colors: tuple[str, ...]
    break_position: int | None  # i with colors[i] == colors[i+1]; None if fully alternating

    def __post_init__(self):
        L = len(self.vertices)
        if L < 3 or L != len(self.colors):
            raise ValueError("a cycle needs at least three edges, one color each")
        if len(set(self.vertices)) != L:
            raise ValueError("cycle must be simple")
        repeats = [i for i in range(L) if self.colors[i] == self.colors[(i + 1) % L]]
        if len(repeats) > 1:
            raise ValueError(f"{len(repeats)} color repetitions; at most one allowed")
        if (repeats[0] if repeats else None) != self.break_position:
            raise ValueError("break_position does not match the color sequence")

    @property
    def walk(self) -> list[tuple[Edge, str]]:
        L = len(self.vertices)
        return [(edge(self.vertices[i], self.vertices[(i + 1) % L]), self.colors[i]) for i in range(L)]


def check_circuits(diff: Sequence[tuple[Edge, str]], circuits: Sequence[AlternatingCircuit]) -> bool:
    """Edge-disjoint alternating circuits whose union is exactly ``diff``."""
    want = sorted((edge(*e), c) for e, c in diff)
    got = sorted(item for cyc in circuits for item in cyc.walk)
    return want == got


def decompose(diff: Iterable[tuple[Edge, str]]) -> list[AlternatingCircuit]:
    """Split a color-balanced edge multiset into alternating circuits.

    Starting from each unused red edge in input order, walk leaving every
    vertex on the color opposite to the one it arrived on; the walk closes
    when it re-enters the start vertex on a blue edge.  Balance guarantees
    the walk never gets stuck.
    """
    items = [(edge(*e), c) for e, c in diff]
    degree = defaultdict(lambda: {RED: 0, BLUE: 0})
    inc: dict[tuple[int, str], list[int]] = defaultdict(list)
    for i, ((u, v), c) in enumerate(items):
        if c not in (RED, BLUE):
            raise ValueError(f"unknown color {c!r}")
        degree[u][c] += 1
        degree[v][c] += 1
        inc[(u, c)].append(i)
        inc[(v, c)].append(i)
    for v in sorted(degree):
        if degree[v][RED] != degree[v][BLUE]:
            raise UnbalancedError(v, degree[v][RED], degree[v][BLUE])
    for lst in inc.values():
        lst.reverse()

    used = [False] * len(items)

    def take(v: int, c: str) -> int:
        stack = inc[(v, c)]
        while stack:
            i = stack.pop()
            if not used[i]:
                return i
        raise ContractViolation(f"walk stuck at vertex {v} needing a {c} edge")

    out = []
    for start, (e0, c0) in enumerate(items):
        if used[start] or c0 != RED:
            continue
        s, cur = e0
        used[start] = True
        verts, cols = [s], [RED]
        last = RED
        while True:
            if cur == s and last == BLUE:
                break
            i = take(cur, other(last))
            used[i] = True
            (a, b), c = items[i]
            verts.append(cur)
            cols.append(c)
            cur = b if a == cur else a
            last = c
        out.append(AlternatingCircuit(tuple(verts), tuple(cols)))
    return out


def difference_items(h: Iterable[Edge], h_star: Iterable[Edge]) -> list[tuple[Edge, str]]:
    """``H ^ H*`` colored red where the edge is planted, blue otherwise."""
    hs, hstar = frozenset(h), frozenset(h_star)
    return [(e, RED) for e in sorted(hstar - hs)] + [(e, BLUE) for e in sorted(hs - hstar)]


def xor_circuit(h: Iterable[Edge], c: AlternatingCircuit, n: int, k: int) -> frozenset:
    """``h ^ edges(c)``, checked to be a k-factor again."""
    hs = frozenset(h)
    walk = c.edges()
    inside = [e in hs for e in walk]
    L = len(walk)
    if any(inside[i] == inside[(i + 1) % L] for i in range(L)):
        raise ValueError("circuit edges do not alternate between h and its complement")
    out = hs.symmetric_difference(walk)
    if not is_k_factor(out, n, k):
        raise ContractViolation("xor with circuit did not produce a k-factor")
    return out


def fold_circuits(h: Iterable[Edge], circuits: Iterable[AlternatingCircuit], n: int, k: int) -> frozenset:
    cur = frozenset(h)
    for c in circuits:
        cur = xor_circuit(cur, c, n, k)
    return cur


# ---------------------------------------------------------------------------
# searches on a BicoloredGraph


def _colored_adjacency(g: BicoloredGraph) -> list[dict[str, list[int]]]:
    adj = [{RED: [], BLUE: []} for _ in range(g.n)]
    for (u, v), r in zip(g.edges.tolist(), g.is_red.tolist()):
        c = RED if r else BLUE
        adj[u][c].append(v)
        adj[v][c].append(u)
    for a in adj:
        a[RED].sort()
        a[BLUE].sort()
    return adj


def find_alternating_4cycle(g: BicoloredGraph) -> AlternatingCircuit | None:
    """Some red-blue-red-blue 4-cycle of ``g``, or None."""
    adj = _colored_adjacency(g)
    blue = g.blue_set
    for a, b in g.red.tolist():
        for x, y in ((a, b), (b, a)):
            for c in adj[y][BLUE]:
                if c == x:
                    continue
                for d in adj[c][RED]:
                    if d in (x, y):
                        continue
                    if edge(d, x) in blue:
                        return AlternatingCircuit((x, y, c, d), (RED, BLUE, RED, BLUE))
    return None


def _two_core(adj: list[dict[str, list[int]]]) -> list[bool]:
    n = len(adj)
    deg = [len(a[RED]) + len(a[BLUE]) for a in adj]
    alive = [True] * n
    q = deque(v for v in range(n) if deg[v] < 2)
    while q:
        v = q.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for c in (RED, BLUE):
            for w in adj[v][c]:
                if alive[w]:
                    deg[w] -= 1
                    if deg[w] < 2:
                        q.append(w)
    return alive


def _walk_in_bicolored_core(adj: list[dict[str, list[int]]]) -> AlmostAlternatingCycle | None:
    """Linear-time witness when some subgraph has a red and a blue edge at
    every vertex.

    Peel vertices missing either color.  If anything survives, a walk that
    alternates colors inside the survivors never gets stuck, and its first
    revisited vertex closes a cycle whose only possible color repetition sits
    at that vertex.  The pruning core always has this property.
    """
    n = len(adj)
    cnt = [[len(a[RED]), len(a[BLUE])] for a in adj]
    alive = [True] * n
    q = deque(v for v in range(n) if 0 in cnt[v])
    while q:
        v = q.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for ci, c in enumerate((RED, BLUE)):
            for w in adj[v][c]:
                if alive[w]:
                    cnt[w][ci] -= 1
                    if cnt[w][ci] == 0:
                        q.append(w)
    start = next((v for v in range(n) if alive[v]), None)
    if start is None:
        return None
    walk, cols, pos = [start], [], {start: 0}
    c = RED
    while True:
        v = walk[-1]
        w = next(x for x in adj[v][c] if alive[x])
        cols.append(c)
        if w in pos:
            i = pos[w]
            verts, colors = tuple(walk[i:]), tuple(cols[i:])
            L = len(colors)
            rep = [j for j in range(L) if colors[j] == colors[(j + 1) % L]]
            return AlmostAlternatingCycle(verts, colors, rep[0] if rep else None)
        pos[w] = len(walk)
        walk.append(w)
        c = other(c)


def find_almost_alternating_cycle(
    g: BicoloredGraph, max_n: int = 200, budget: int = 5_000_000
) -> AlmostAlternatingCycle | None:
    """Exhaustive search for a simple cycle with at most one color repetition.

    The cycle is rooted at its repetition vertex ``a``: an alternating simple
    path ``a, x, ..., b`` is closed by an edge ``(b, a)`` whose color differs
    from the path's last edge.  Only the 2-core is searched.
    """
    if g.n > max_n:
        raise InstanceTooLarge(f"n={g.n} exceeds the cap {max_n} for almost-alternating search")
    adj = _colored_adjacency(g)
    quick = _walk_in_bicolored_core(adj)
    if quick is not None:
        return quick
    alive = _two_core(adj)
    steps = 0

    for a in range(g.n):
        if not alive[a]:
            continue
        for c1 in (RED, BLUE):
            for x in adj[a][c1]:
                if not alive[x]:
                    continue
                # cols[i] is the color of edge (path[i], path[i+1])
                path, cols, onpath = [a, x], [c1], {a, x}
                stack = [iter(adj[x][other(c1)])]
                while stack:
                    steps += 1
                    if steps > budget:
                        raise SearchBudgetExceeded(f"almost-alternating search exceeded {budget} steps")
                    w = next((w for w in stack[-1] if alive[w] and w not in onpath), None)
                    if w is None:
                        stack.pop()
                        onpath.discard(path.pop())
                        cols.pop()
                        continue
                    c = other(cols[-1])
                    path.append(w)
                    cols.append(c)
                    onpath.add(w)
                    if a in adj[w][other(c)]:
                        colors = tuple(cols) + (other(c),)
                        L = len(colors)
                        rep = [i for i in range(L) if colors[i] == colors[(i + 1) % L]]
                        return AlmostAlternatingCycle(tuple(path), colors, rep[0] if rep else None)
                    stack.append(iter(adj[w][other(c)]))
    return None


def has_almost_alternating_cycle(g: BicoloredGraph, max_n: int = 200, budget: int = 5_000_000) -> bool:
    return find_almost_alternating_cycle(g, max_n=max_n, budget=budget) is not None


def find_alternating_cycles(g: BicoloredGraph, max_length: int = 12, limit: int = 10_000) -> list[AlternatingCircuit]:
    """Simple fully alternating cycles of length <= ``max_length``.

    Each cycle is reported once: rooted at its smallest vertex, leaving along
    that vertex's red cycle edge.
    """
    adj = _colored_adjacency(g)
    found: list[AlternatingCircuit] = []
    for a in range(g.n):
        for x in adj[a][RED]:
            if x < a:
                continue
            path = [a, x]
            onpath = {a, x}

            def rec():
                b = path[-1]
                depth = len(path) - 1  # edges so far; last edge is red iff depth is odd
                last = RED if depth % 2 else BLUE
                if last == RED and depth >= 3 and a in adj[b][BLUE]:
                    cols = tuple(RED if i % 2 == 0 else BLUE for i in range(depth + 1))
                    found.append(AlternatingCircuit(tuple(path), cols))
                    if len(found) >= limit:
                        return True
                if depth + 1 >= max_length:
                    return False
                for w in adj[b][other(last)]:
                    if w in onpath or w < a:
                        continue
                    path.append(w)
                    onpath.add(w)
                    if rec():
                        return True
                    path.pop()
                    onpath.discard(w)
                return False

            if rec():
                return found
    return found


def alternating_neighborhood(g: BicoloredGraph, e: Edge, t: int) -> tuple[BicoloredGraph, frozenset]:
    """Edges on alternating walks of length <= t leaving the planted edge ``e``.

    Walks start at an endpoint of ``e`` with a blue edge, alternate colors,
    and never use ``e`` itself.  The boundary holds the vertices whose
    shortest such walk has exactly ``t`` edges.
    """
    e = edge(*e)
    if e not in g.red_set:
        raise ValueError(f"{e} is not a planted edge")
    if t < 0:
        raise ValueError("t must be nonnegative")
    adj = _colored_adjacency(g)
    # state (v, depth parity); next edge is blue from even depth, red from odd
    dist: dict[tuple[int, int], int] = {(e[0], 0): 0, (e[1], 0): 0}
    q = deque([(e[0], 0), (e[1], 0)])
    red_edges, blue_edges = {e}, set()
    while q:
        v, p = q.popleft()
        s = dist[(v, p)]
        if s >= t:
            continue
        c = BLUE if p == 0 else RED
        for w in adj[v][c]:
            f = edge(v, w)
            if f == e:
                continue
            (blue_edges if c == BLUE else red_edges).add(f)
            st = (w, 1 - p)
            if st not in dist:
                dist[st] = s + 1
                q.append(st)
    best: dict[int, int] = {}
    for (v, _), s in dist.items():
        best[v] = min(s, best.get(v, s))
    boundary = frozenset(v for v, s in best.items() if s == t)
    return BicoloredGraph.from_sets(g.n, g.k, red_edges, blue_edges), boundary


# ---------------------------------------------------------------------------
# counting bound for k-factors at distance 2t from H*


@dataclass(frozen=True)
class EnumerationBound:
    log_value: float
    exact: int | None


def double_factorial_odd(t: int) -> int:
    """``(2t - 1)!!``, with ``(-1)!! = 1``."""
    out = 1
    for i in range(1, 2 * t, 2):
        out *= i
    return out


def enumeration_bound(n: int, k: int, t: int, exact: bool | None = None) -> EnumerationBound:
    """``C(kn/2, t) * (2t - 1)!!`` in log scale, plus the exact integer when
    ``kn/2 <= 64`` (or when ``exact=True``)."""
    if (n * k) % 2:
        raise ValueError("k * n must be even")
    M = n * k // 2
    if not 0 <= t <= M:
        raise ValueError(f"t must lie in [0, {M}]")
    logv = (
        math.lgamma(M + 1)
        - math.lgamma(t + 1)
        - math.lgamma(M - t + 1)
        + math.lgamma(2 * t + 1)
        - t * math.log(2)
        - math.lgamma(t + 1)
    )
    want_exact = M <= 64 if exact is None else exact
    val = math.comb(M, t) * double_factorial_odd(t) if want_exact else None
    if val is not None:
        logv = math.log(val)
    return EnumerationBound(logv, val)

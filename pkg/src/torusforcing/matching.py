"""Perfect matchings, M-alternating cycles and forcing-set tests.

Graphs are duck-typed: anything with ``num_vertices`` and ``adjacency`` (a
sequence of neighbour sequences over ``range(num_vertices)``) works, which
covers :class:`~torusforcing.torus.TorusGraph` and :class:`SimpleGraph`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NotAMatching

Pair = tuple[int, int]


def _key(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    num_vertices: int
    edge_pairs: tuple[Pair, ...]
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Pair]) -> "SimpleGraph":
        keys = sorted({_key(u, v) for u, v in edges})
        nb: list[list[int]] = [[] for _ in range(num_vertices)]
        for u, v in keys:
            if u == v:
                raise ValueError(f"loop at {u}")
            nb[u].append(v)
            nb[v].append(u)
        return cls(num_vertices, tuple(keys), tuple(tuple(sorted(x)) for x in nb))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


def cycle_graph(k: int) -> SimpleGraph:
    return SimpleGraph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def prism_graph(k: int) -> SimpleGraph:
    """C_k x P_2 with outer cycle 0..k-1, inner cycle k..2k-1 and rungs i -- i+k."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, i + k) for i in range(k)]
    return SimpleGraph.from_edges(2 * k, edges)


def _edge_set(graph) -> set[Pair]:
    pairs = getattr(graph, "edge_pairs", None)
    if pairs is not None:
        return set(pairs)
    return {_key(u, v) for u, nb in enumerate(graph.adjacency) for v in nb}


@dataclass(frozen=True)
class PerfectMatching:
    """A perfect matching stored as its partner map ``mate[v]``."""

    mate: tuple[int, ...]

    @property
    def edges(self) -> tuple[Pair, ...]:
        return tuple((v, w) for v, w in enumerate(self.mate) if v < w)

    def __len__(self):
        return len(self.mate) // 2

    def __contains__(self, edge) -> bool:
        u, v = edge
        return 0 <= u < len(self.mate) and self.mate[u] == v

    @classmethod
    def from_edges(cls, graph, edges: Iterable[Pair]) -> "PerfectMatching":
        """Validate ``edges`` as a perfect matching of ``graph``."""
        n = graph.num_vertices
        mate = [-1] * n
        allowed = _edge_set(graph)
        for u, v in edges:
            if _key(u, v) not in allowed:
                raise NotAMatching(f"{(u, v)} is not an edge of the graph")
            if mate[u] != -1 or mate[v] != -1:
                raise NotAMatching(f"vertex covered twice by {(u, v)}")
            mate[u], mate[v] = v, u
        missing = [v for v in range(n) if mate[v] == -1]
        if missing:
            raise NotAMatching(f"{len(missing)} vertices uncovered, first {missing[0]}")
        return cls(tuple(mate))

    def check(self, graph) -> None:
        PerfectMatching.from_edges(graph, self.edges)


def enumerate_matchings(graph) -> Iterator[PerfectMatching]:
    """Yield every perfect matching once.

    Always extends from the uncovered vertex of least index, trying its
    neighbours in increasing order, so the stream order is reproducible.
    """
    n = graph.num_vertices
    if n % 2:
        return
    adj = graph.adjacency
    mate = [-1] * n

    def extend(u: int) -> Iterator[PerfectMatching]:
        while u < n and mate[u] != -1:
            u += 1
        if u == n:
            yield PerfectMatching(tuple(mate))
            return
        for v in adj[u]:
            if mate[v] == -1:
                mate[u], mate[v] = v, u
                yield from extend(u + 1)
                mate[u] = mate[v] = -1

    yield from extend(0)


def count_matchings(graph) -> int:
    return sum(1 for _ in enumerate_matchings(graph))


# -- alternating cycles ------------------------------------------------------


@dataclass(frozen=True)
class AlternatingCycle:
    """Vertex sequence of an M-alternating cycle in canonical rotation.

    The sequence starts at the least vertex and continues toward its smaller
    cycle neighbour.
    """

    vertices: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    @property
    def edges(self) -> tuple[Pair, ...]:
        vs = self.vertices
        return tuple(_key(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def matched_edges(self, matching: PerfectMatching) -> tuple[Pair, ...]:
        return tuple(e for e in self.edges if e in matching)

    def is_valid(self, graph, matching: PerfectMatching) -> bool:
        vs = self.vertices
        if len(vs) < 4 or len(vs) % 2 or len(set(vs)) != len(vs):
            return False
        allowed = _edge_set(graph)
        flags = []
        for e in self.edges:
            if e not in allowed:
                return False
            flags.append(e in matching)
        return all(flags[i] != flags[(i + 1) % len(flags)] for i in range(len(flags)))


def canonical_cycle(vertices: Sequence[int]) -> AlternatingCycle:
    vs = list(vertices)
    k = vs.index(min(vs))
    vs = vs[k:] + vs[:k]
    if len(vs) > 2 and vs[-1] < vs[1]:
        vs = [vs[0]] + vs[:0:-1]
    return AlternatingCycle(tuple(vs))


class AlternatingSearch:
    """Exact M-alternating cycle search for a fixed (graph, matching).

    Any alternating cycle avoiding a blocked set of matched pairs is found, or
    its absence is certified. Vertices whose pair can no longer lie on a cycle
    (no unmatched edge to another live pair) are peeled first; a quick scan for
    alternating 4-cycles follows; otherwise, for each matched edge ``ab`` an
    Edmonds blossom search looks for an M-alternating path from ``a`` to ``b``,
    which closes into a cycle through ``ab``. Blossom handling is what keeps
    the search exact on non-bipartite tori.
    """

    def __init__(self, graph, matching: PerfectMatching, within: Iterable[Pair] | None = None):
        self.n = graph.num_vertices
        self.mate = list(matching.mate)
        n, mate = self.n, self.mate
        if within is None:
            adjacency = graph.adjacency
            self.base_live = [True] * n
            self.free_adj = [[w for w in adjacency[v] if w != mate[v]] for v in range(n)]
        else:
            keys = {_key(u, v) for u, v in within}
            live = [False] * n
            for u, v in keys:
                if mate[u] == v:
                    live[u] = live[v] = True
            self.base_live = live
            free: list[list[int]] = [[] for _ in range(n)]
            for u, v in sorted(keys):
                if mate[u] != v and live[u] and live[v]:
                    free[u].append(v)
                    free[v].append(u)
            self.free_adj = free

    def live_mask(self, blocked: Iterable[int] = ()) -> list[bool]:
        live = list(self.base_live)
        for v in blocked:
            live[v] = False
            live[self.mate[v]] = False
        return live

    def find(self, blocked: Iterable[int] = ()) -> list[int] | None:
        """Cycle avoiding the pairs of ``blocked`` vertices, as a raw vertex list."""
        live = self._peel(self.live_mask(blocked))
        cyc = self._square(live)
        if cyc is not None:
            return cyc
        return self._blossom_search(live)

    def _peel(self, live: list[bool]) -> list[bool]:
        n, mate, free = self.n, self.mate, self.free_adj
        deg = [0] * n
        for v in range(n):
            if live[v]:
                deg[v] = sum(1 for w in free[v] if live[w])
        queue = deque(v for v in range(n) if live[v] and deg[v] == 0)
        while queue:
            v = queue.popleft()
            if not live[v]:
                continue
            for x in (v, mate[v]):
                live[x] = False
            for x in (v, mate[v]):
                for w in free[x]:
                    if live[w]:
                        deg[w] -= 1
                        if deg[w] == 0:
                            queue.append(w)
        return live

    def _square(self, live: list[bool]) -> list[int] | None:
        mate, free = self.mate, self.free_adj
        for a in range(self.n):
            if not live[a]:
                continue
            b = mate[a]
            for c in free[b]:
                if not live[c]:
                    continue
                d = mate[c]
                if d in free[a] and live[d]:
                    return [a, b, c, d]
        return None

    def _blossom_search(self, live: list[bool]) -> list[int] | None:
        n = self.n
        adj = [[w for w in self.free_adj[v] if live[w]] if live[v] else [] for v in range(n)]
        match = [m if live[v] else -1 for v, m in enumerate(self.mate)]
        for a in range(n):
            b = match[a]
            if not live[a] or b < a:
                continue
            match[a] = match[b] = -1
            path = _augmenting_path(adj, match, a, n)
            match[a], match[b] = b, a
            if path is not None:
                return path
        return None


def _augmenting_path(adj, match, root: int, n: int) -> list[int] | None:
    """Edmonds search for an augmenting path from the exposed vertex ``root``.

    Returns the path from the exposed endpoint back to ``root``.
    """
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    used[root] = True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    path = []
                    w = to
                    while w != -1:
                        pw = parent[w]
                        path.append(w)
                        path.append(pw)
                        w = match[pw]
                    return path
                nxt = match[to]
                used[nxt] = True
                queue.append(nxt)
    return None


def _as_matching(graph, matching) -> PerfectMatching:
    if isinstance(matching, PerfectMatching):
        return matching
    return PerfectMatching.from_edges(graph, matching)


def _blocked_vertices(matching: PerfectMatching, forbidden: Iterable[Pair]) -> list[int]:
    out = []
    for u, v in forbidden:
        if matching.mate[u] != v:
            raise NotAMatching(f"forbidden edge {(u, v)} is not in the matching")
        out.append(u)
    return out


def find_alternating_cycle(graph, matching, forbidden: Iterable[Pair] = (),
                           within: Iterable[Pair] | None = None) -> AlternatingCycle | None:
    """An M-alternating cycle avoiding ``forbidden`` (a subset of M), or None.

    ``within`` restricts the search to the subgraph with that edge set; only
    vertices whose matched edge lies in the subgraph can be on a cycle.
    """
    matching = _as_matching(graph, matching)
    search = AlternatingSearch(graph, matching, within)
    raw = search.find(_blocked_vertices(matching, forbidden))
    if raw is None:
        return None
    cycle = canonical_cycle(raw)
    if not cycle.is_valid(graph, matching):
        raise RuntimeError(f"alternating search produced an invalid cycle {raw}")
    return cycle


def forcing_violation(graph, matching, candidate: Iterable[Pair]) -> AlternatingCycle | None:
    """An alternating cycle missed by ``candidate``; None when it is a forcing set."""
    return find_alternating_cycle(graph, matching, forbidden=candidate)


def is_forcing_set(graph, matching, candidate: Iterable[Pair]) -> bool:
    return forcing_violation(graph, matching, candidate) is None

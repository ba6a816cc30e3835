"""Quadriculated tori T(n, m, r): construction, classification, cycle structure.

Vertices are stored as linear indices ``i * m + j`` for ``v_{i,j}``; use
:meth:`TorusGraph.vertex` and :meth:`TorusGraph.coords` to convert.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

from .errors import BandUndefined, DegenerateInstance, InvalidParams, OddOrder

HORIZONTAL = "h"
VERTICAL = "v"


@dataclass(frozen=True, order=True)
class TorusParams:
    """Rows ``n``, columns ``m`` and torsion ``r`` of T(n, m, r)."""

    n: int
    m: int
    r: int

    def __post_init__(self):
        for name in ("n", "m", "r"):
            if not isinstance(getattr(self, name), int):
                raise InvalidParams(f"{name} must be an integer")
        if self.n < 1:
            raise InvalidParams(f"row count must be positive, got n={self.n}")
        if self.m < 2:
            raise InvalidParams(f"column count must be at least 2, got m={self.m}")
        if not 1 <= self.r <= self.m:
            raise InvalidParams(f"torsion must satisfy 1 <= r <= m, got r={self.r}, m={self.m}")

    @property
    def g(self) -> int:
        """gcd(r, m), the number of I-cycles."""
        return gcd(self.r, self.m)

    @property
    def num_vertices(self) -> int:
        return self.n * self.m

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n, self.m, self.r)

    def __str__(self):
        return f"T({self.n},{self.m},{self.r})"


def as_params(p) -> TorusParams:
    if isinstance(p, TorusParams):
        return p
    return TorusParams(*p)


class Edge(NamedTuple):
    u: int
    v: int
    kind: str


@dataclass(frozen=True, eq=False)
class TorusGraph:
    params: TorusParams
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    _kinds: dict = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def num_vertices(self) -> int:
        return self.params.num_vertices

    @property
    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((e.u, e.v) for e in self.edges)

    def vertex(self, i: int, j: int) -> int:
        """Linear index of ``v_{i,j}``; both indices are taken modulo the grid."""
        return (i % self.n) * self.m + (j % self.m)

    def coords(self, v: int) -> tuple[int, int]:
        return divmod(v, self.m)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._kinds

    def edge_kind(self, u: int, v: int) -> str:
        return self._kinds[(min(u, v), max(u, v))]

    def right(self, v: int) -> int:
        i, j = self.coords(v)
        return self.vertex(i, j + 1)

    def down(self, v: int) -> int:
        """The vertical neighbour one step along the column successor walk."""
        i, j = self.coords(v)
        if i < self.n - 1:
            return self.vertex(i + 1, j)
        return self.vertex(0, j + self.r)


def _raw_edges(p: TorusParams):
    n, m, r = p.n, p.m, p.r
    for i in range(n):
        for j in range(m):
            yield i * m + j, i * m + (j + 1) % m, HORIZONTAL
            if i < n - 1:
                yield i * m + j, (i + 1) * m + j, VERTICAL
    for j in range(m):
        yield j, (n - 1) * m + (m - r + j) % m, VERTICAL


def definition_edges(params) -> list[tuple[int, int, str]]:
    """Edges exactly as the definition lists them, loops and repeats included.

    Works for degenerate parameters too, where build_torus refuses.
    """
    return list(_raw_edges(as_params(params)))


def degeneracy(params) -> str | None:
    """Why ``params`` would give a loop or parallel edge, or None if simple."""
    p = as_params(params)
    if p.n == 1:
        return "single row: vertical edges stay inside the row"
    seen: dict[tuple[int, int], str] = {}
    for u, v, kind in _raw_edges(p):
        if u == v:
            return "loop"
        key = (min(u, v), max(u, v))
        if key in seen:
            if seen[key] == kind == HORIZONTAL:
                return "parallel horizontal edges"
            if seen[key] == kind == VERTICAL:
                return "parallel vertical edges"
            return "parallel horizontal and vertical edges"
        seen[key] = kind
    return None


def build_torus(params) -> TorusGraph:
    """Build T(n, m, r) as a simple 4-regular graph.

    Raises DegenerateInstance when the definition would produce a loop or a
    parallel edge (any single-row torus, m = 2, or n = 2 with r = m).
    """
    p = as_params(params)
    reason = degeneracy(p)
    if reason is not None:
        raise DegenerateInstance(f"{p}: {reason}")
    kinds: dict[tuple[int, int], str] = {}
    neighbours: list[list[int]] = [[] for _ in range(p.num_vertices)]
    for u, v, kind in _raw_edges(p):
        a, b = min(u, v), max(u, v)
        kinds[(a, b)] = kind
        neighbours[a].append(b)
        neighbours[b].append(a)
    edges = tuple(Edge(a, b, k) for (a, b), k in sorted(kinds.items()))
    adjacency = tuple(tuple(sorted(nb)) for nb in neighbours)
    return TorusGraph(p, edges, adjacency, kinds)


def torus(n: int, m: int, r: int) -> TorusGraph:
    return build_torus(TorusParams(n, m, r))


# -- classification ---------------------------------------------------------


class ParityClass(str, enum.Enum):
    EE_EVEN = "EE-even"  # T(2n, 2m, 2r)
    EE_ODD = "EE-odd"  # T(2n, 2m, 2r-1)
    OE_EVEN = "OE-even"  # T(2n+1, 2m, 2r)
    OE_ODD = "OE-odd"  # T(2n+1, 2m, 2r-1), the open case
    EO_EVEN = "EO-even"  # T(2n, 2m+1, 2r)
    EO_ODD = "EO-odd"  # T(2n, 2m+1, 2r-1)

    def __str__(self):
        return self.value

    @property
    def pattern(self) -> str:
        return _PATTERNS[self]


_PATTERNS = {
    ParityClass.EE_EVEN: "T(2n,2m,2r)",
    ParityClass.EE_ODD: "T(2n,2m,2r-1)",
    ParityClass.OE_EVEN: "T(2n+1,2m,2r)",
    ParityClass.OE_ODD: "T(2n+1,2m,2r-1)",
    ParityClass.EO_EVEN: "T(2n,2m+1,2r)",
    ParityClass.EO_ODD: "T(2n,2m+1,2r-1)",
}


@dataclass(frozen=True)
class ClassTag:
    """Parity class plus the normalized (n, m, r) read off the class pattern."""

    cls: ParityClass
    n: int
    m: int
    r: int

    def __str__(self):
        return f"{self.cls.value} (n={self.n}, m={self.m}, r={self.r})"


def classify(params) -> ClassTag:
    p = as_params(params)
    if (p.n * p.m) % 2:
        raise OddOrder(f"{p} has {p.n * p.m} vertices")
    rows_even = p.n % 2 == 0
    cols_even = p.m % 2 == 0
    tors_even = p.r % 2 == 0
    n = p.n // 2
    m = p.m // 2
    r = p.r // 2 if tors_even else (p.r + 1) // 2
    if rows_even and cols_even:
        cls = ParityClass.EE_EVEN if tors_even else ParityClass.EE_ODD
    elif cols_even:
        cls = ParityClass.OE_EVEN if tors_even else ParityClass.OE_ODD
    else:
        cls = ParityClass.EO_EVEN if tors_even else ParityClass.EO_ODD
    return ClassTag(cls, n, m, r)


# -- cycle structure ---------------------------------------------------------


def column_walk(params, start: int) -> list[int]:
    """Columns of the I-cycle through ``start`` in successor order (j -> j + r)."""
    p = as_params(params)
    cols = [start % p.m]
    while True:
        nxt = (cols[-1] + p.r) % p.m
        if nxt == cols[0]:
            return cols
        cols.append(nxt)


def i_cycles(graph: TorusGraph) -> list[tuple[int, ...]]:
    """The gcd(r, m) cycles formed by vertical edges, as vertex sequences.

    Cycle ``c`` starts at ``v_{0,c}`` and walks down its columns; position
    ``t * n + i`` holds ``v_{i, c + t r}``.
    """
    p = graph.params
    cycles = []
    for c in range(p.g):
        cycles.append(tuple(graph.vertex(i, col) for col in column_walk(p, c) for i in range(p.n)))
    return cycles


def ii_cycles(graph: TorusGraph) -> list[tuple[int, ...]]:
    return [tuple(graph.vertex(i, j) for j in range(graph.m)) for i in range(graph.n)]


@dataclass(frozen=True)
class Band:
    """Induced subgraph on two consecutive rows or two consecutive I-cycles.

    ``quads`` lists the faces of the spanning prism C_L x P_2, in cyclic order;
    quad ``k`` is ``(a_k, a_{k+1}, b_{k+1}, b_k)`` with ``a`` and ``b`` the two
    sides of the prism.
    """

    vertices: frozenset
    edges: tuple[Edge, ...]
    quads: tuple[tuple[int, int, int, int], ...]

    @property
    def length(self) -> int:
        return len(self.quads)


def _band(graph: TorusGraph, side: list[int], partner) -> Band:
    other = [partner(v) for v in side]
    verts = frozenset(side) | frozenset(other)
    edges = tuple(e for e in graph.edges if e.u in verts and e.v in verts)
    L = len(side)
    quads = tuple((side[k], side[(k + 1) % L], other[(k + 1) % L], other[k]) for k in range(L))
    return Band(verts, edges, quads)


def row_band(graph: TorusGraph, i: int) -> Band:
    """R_{i,i+1}: rows ``i`` and ``i + 1`` (row 0 follows row n-1 with torsion)."""
    i %= graph.n
    side = [graph.vertex(i, j) for j in range(graph.m)]
    return _band(graph, side, graph.down)


def col_band(graph: TorusGraph, j: int) -> Band:
    """C_{j,j+1}: the I-cycles through columns ``j`` and ``j + 1``."""
    g = graph.params.g
    if g < 2:
        raise BandUndefined(f"{graph.params} has a single I-cycle")
    if not 0 <= j < g:
        raise BandUndefined(f"band index {j} outside Z_{g}")
    side = list(i_cycles(graph)[j])
    return _band(graph, side, graph.right)


# -- the T* re-representation -------------------------------------------------


@dataclass(frozen=True)
class StarParams:
    source: TorusParams
    k: int
    target: TorusParams


def star_params(params) -> StarParams:
    """Parameters of T*, which swaps the roles of I-cycles and II-cycles."""
    p = as_params(params)
    g = p.g
    L = p.m // g
    k = next(k for k in range(L) if (p.r * k - g) % p.m == 0)
    cols = p.m * p.n // g
    tors = ((L - k) * p.n) % cols or cols
    return StarParams(p, k, TorusParams(g, cols, tors))


def star_map(params, allow_degenerate_target: bool = False) -> tuple[int, ...]:
    """Vertex bijection T(n,m,r) -> T*(n,m,r) as a tuple indexed by source vertex.

    ``v_{i,j}`` goes to row ``g - 1 - (j mod g)`` and column ``t n + i``, where
    ``t`` is the rank of column ``j`` on the walk from column ``j mod g``.
    A single-row target (g = 1) is refused unless ``allow_degenerate_target``;
    it can then only be compared against ``definition_edges``.
    """
    p = as_params(params)
    build_torus(p)
    target = star_params(p).target
    reason = degeneracy(target)
    if reason is not None and not allow_degenerate_target:
        raise DegenerateInstance(f"T* of {p} is {target}: {reason}")
    g = p.g
    rank = {}
    for c in range(g):
        for t, col in enumerate(column_walk(p, c)):
            rank[col] = t
    mapping = [0] * p.num_vertices
    for i in range(p.n):
        for j in range(p.m):
            mapping[i * p.m + j] = (g - 1 - j % g) * target.m + rank[j] * p.n + i
    return tuple(mapping)


def is_isomorphism(source: TorusGraph, target: TorusGraph, mapping) -> bool:
    if len(mapping) != source.num_vertices or sorted(mapping) != list(range(target.num_vertices)):
        return False
    image = {(min(mapping[e.u], mapping[e.v]), max(mapping[e.u], mapping[e.v])) for e in source.edges}
    return image == set(target.edge_pairs)


# -- automorphisms -------------------------------------------------------------


def translation(params, rows: int, cols: int) -> tuple[int, ...]:
    """Automorphism moving every vertex ``rows`` rows down and ``cols`` columns right.

    Crossing from row n-1 into row 0 adds the torsion r to the column.
    """
    p = as_params(params)
    n, m, r = p.n, p.m, p.r
    rows %= n
    out = [0] * p.num_vertices
    for i in range(n):
        for j in range(m):
            ii, jj = i + rows, j + cols
            if ii >= n:
                ii -= n
                jj += r
            out[i * m + j] = ii * m + jj % m
    return tuple(out)


# -- edge-list text format -----------------------------------------------------


def _edge_line(graph: TorusGraph, u: int, v: int) -> str:
    a, b = min(u, v), max(u, v)
    i1, j1 = graph.coords(a)
    i2, j2 = graph.coords(b)
    return f"e {i1} {j1} {i2} {j2} {graph.edge_kind(a, b)}"


def edge_lines(graph: TorusGraph, pairs) -> list[str]:
    keys = sorted((min(u, v), max(u, v)) for u, v in pairs)
    return [_edge_line(graph, a, b) for a, b in keys]


def format_edge_list(graph: TorusGraph) -> str:
    p = graph.params
    lines = [f"p torus {p.n} {p.m} {p.r}"]
    lines.extend(edge_lines(graph, graph.edge_pairs))
    return "\n".join(lines) + "\n"


def parse_edge_records(text: str, graph: TorusGraph | None = None):
    """Parse ``e`` lines into (header params or None, list of vertex pairs).

    Vertex pairs need a graph for coordinates; if ``graph`` is None the header
    line is required and used to build one.
    """
    header = None
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 5 or parts[1] != "torus":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            header = TorusParams(int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "e":
            if len(parts) != 6 or parts[5] not in (HORIZONTAL, VERTICAL):
                raise ValueError(f"line {lineno}: malformed edge {line!r}")
            records.append((tuple(int(x) for x in parts[1:5]), parts[5]))
        else:
            raise ValueError(f"line {lineno}: unknown record {line!r}")
    if graph is None:
        if header is None:
            raise ValueError("missing 'p torus' header")
        graph = build_torus(header)
    pairs = []
    for (i1, j1, i2, j2), kind in records:
        if not (0 <= i1 < graph.n and 0 <= i2 < graph.n and 0 <= j1 < graph.m and 0 <= j2 < graph.m):
            raise ValueError(f"edge {(i1, j1, i2, j2)} outside the grid")
        u, v = graph.vertex(i1, j1), graph.vertex(i2, j2)
        if not graph.has_edge(u, v) or graph.edge_kind(u, v) != kind:
            raise ValueError(f"edge {(i1, j1, i2, j2, kind)} is not an edge of {graph.params}")
        pairs.append((min(u, v), max(u, v)))
    return header, graph, pairs


def parse_edge_list(text: str) -> TorusGraph:
    """Read a graph written by :func:`format_edge_list`, checking every edge."""
    header, graph, pairs = parse_edge_records(text)
    if sorted(pairs) != sorted(graph.edge_pairs) or len(set(pairs)) != len(pairs):
        raise ValueError(f"edge records do not match {graph.params}")
    return graph

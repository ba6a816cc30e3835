"""Explicit matchings, forcing sets and markings used to bound F(T(n, m, r)).

Families are indexed as in the proofs: ``W_j`` are vertical edges
``v_{2k,j} v_{2k+1,j}``, ``E_j`` the horizontal edges leaving column ``j``,
``X_i`` / ``Y_i`` the even / odd columns of row ``i``. Row and column indices
wrap modulo the true grid size.

A *marking* is an independent vertex set T. Its marked subgraph is the union
of all 2-paths with both ends in T; when that subgraph has no M-alternating
cycle, M minus the matched edges at T is a forcing set, so
``f(G, M) <= |M| - |T|``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import DegenerateInstance, NotApplicable, NotIndependent, SearchExhausted, WrongClass
from .forcing import forcing_number, predicted_max_forcing
from .matching import AlternatingCycle, PerfectMatching, find_alternating_cycle
from .polyomino import Polyomino
from .torus import (
    HORIZONTAL,
    ParityClass,
    TorusGraph,
    build_torus,
    classify,
    degeneracy,
    i_cycles,
    star_map,
    star_params,
    translation,
)

Pair = tuple[int, int]


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


# -- families -------------------------------------------------------------------


class Family(str, enum.Enum):
    W = "W"
    W1 = "W1"
    W2 = "W2"
    E = "E"
    X = "X"
    Y = "Y"
    X_PRIME_ODD = "X'odd"  # (X_i - v_{i,0}) + v_{i,2m}, odd column count
    X_PRIME = "X'"  # X_i - v_{i,0}, even column count
    X_STAR = "X*"  # last-row set of the odd-column marking
    X_SUB = "X_sub"  # row-0 set of the coprime marking
    Y_SUB = "Y_sub"  # column-0 set of the coprime marking
    Y_SUB_ODD = "Y_sub_odd"  # torsion-odd marking

    @property
    def is_edge_family(self) -> bool:
        return self in (Family.W, Family.W1, Family.W2, Family.E)


def _need_even_rows(graph: TorusGraph, what: str) -> int:
    if graph.n % 2:
        raise WrongClass(f"{what} needs an even row count, {graph.params} has {graph.n}")
    return graph.n // 2


def resolve_family(graph: TorusGraph, family: Family | str, index: int = 0) -> frozenset:
    """Edge set (pairs) or vertex set named by ``family`` and ``index``."""
    fam = Family(family)
    G = graph
    v = G.vertex
    if fam is Family.W:
        n = _need_even_rows(G, "W_j")
        return frozenset(_pair(v(2 * k, index), v(2 * k + 1, index)) for k in range(n))
    if fam is Family.W1:
        n = _need_even_rows(G, "W1_j")
        return frozenset(_pair(v(4 * k + 2, index), v(4 * k + 3, index)) for k in range(n // 2))
    if fam is Family.W2:
        n = _need_even_rows(G, "W2_j")
        return frozenset(_pair(v(4 * k, index), v(4 * k + 1, index)) for k in range((n + 1) // 2))
    if fam is Family.E:
        return frozenset(_pair(v(i, index), v(i, index + 1)) for i in range(G.n))
    half = G.m // 2
    if fam is Family.X:
        return frozenset(v(index, 2 * k) for k in range(half))
    if fam is Family.Y:
        return frozenset(v(index, 2 * k + 1) for k in range(half))
    if fam is Family.X_PRIME_ODD:
        if G.m % 2 == 0:
            raise WrongClass(f"X'_i with v_(i,2m) needs an odd column count, got {G.m}")
        return (resolve_family(G, Family.X, index) - {v(index, 0)}) | {v(index, G.m - 1)}
    if fam is Family.X_PRIME:
        if G.m % 2:
            raise WrongClass(f"X'_i = X_i - v_(i,0) needs an even column count, got {G.m}")
        return resolve_family(G, Family.X, index) - {v(index, 0)}
    tag = classify(G.params)
    n, m, r = tag.n, tag.m, tag.r
    if fam is Family.X_STAR:
        if tag.cls not in (ParityClass.EO_EVEN, ParityClass.EO_ODD):
            raise WrongClass(f"X* is defined on T(2n,2m+1,r), not {G.params}")
        start = 2 * m + 1 - G.r
        return frozenset([v(2 * n - 1, start)] + [v(2 * n - 1, start + j) for j in range(3, 2 * m, 2)])
    if fam is Family.X_SUB:
        if tag.cls is not ParityClass.EE_EVEN:
            raise WrongClass(f"X_sub is defined on T(2n,2m,2r), not {G.params}")
        cols = list(range(1, 2 * r, 2)) + list(range(2 * r + 3, 2 * m, 2))
        return frozenset(v(0, c) for c in cols)
    if fam is Family.Y_SUB:
        if tag.cls is not ParityClass.EE_EVEN:
            raise WrongClass(f"Y_sub is defined on T(2n,2m,2r), not {G.params}")
        return frozenset(v(i, 0) for i in range(3, 2 * n, 2))
    if fam is Family.Y_SUB_ODD:
        if tag.cls is not ParityClass.EE_ODD:
            raise WrongClass(f"Y_sub_odd is defined on T(2n,2m,2r-1), not {G.params}")
        return frozenset([v(2 * n - 1, 2 * m - 2 * r + 1)] + [v(i, 0) for i in range(1, 2 * n - 2, 2)])
    raise AssertionError(fam)  # pragma: no cover


# -- the matching M1 and its forcing sets -------------------------------------------


def construct_M1(graph: TorusGraph, variant: str | None = None) -> PerfectMatching:
    """The striped perfect matching M1.

    ``vertical`` is W_0 + W_1 + ... (even row count); ``horizontal`` is
    E_0 + E_2 + ... (even column count). By default T(2n, 2m, 2r) gets the
    horizontal one and the other even-row classes the vertical one.
    """
    if variant is None:
        try:
            cls = classify(graph.params).cls
        except Exception as exc:
            raise WrongClass(str(exc)) from exc
        if cls is ParityClass.EE_EVEN:
            variant = "horizontal"
        elif cls in (ParityClass.EE_ODD, ParityClass.EO_EVEN, ParityClass.EO_ODD):
            variant = "vertical"
        else:
            raise WrongClass(f"no M1 construction for class {cls}")
    if variant == "vertical":
        edges = set()
        for j in range(graph.m):
            edges |= resolve_family(graph, Family.W, j)
    elif variant == "horizontal":
        if graph.m % 2:
            raise WrongClass(f"horizontal M1 needs an even column count, got {graph.m}")
        edges = set()
        for j in range(0, graph.m, 2):
            edges |= resolve_family(graph, Family.E, j)
    else:
        raise ValueError(f"unknown M1 variant {variant!r}")
    return PerfectMatching.from_edges(graph, sorted(edges))


@dataclass(frozen=True)
class ConstructedForcingSet:
    matching: PerfectMatching
    edges: tuple[Pair, ...]
    claimed_size: int
    method: str

    def __len__(self):
        return len(self.edges)


def _striped_band_selection(graph: TorusGraph) -> set[Pair]:
    # Every other horizontal M1 edge along each column band, the two phases alternating band to band.
    chosen = set()
    g = graph.params.g // 2
    for b in range(g):
        walk = i_cycles(graph)[2 * b]
        for pos, u in enumerate(walk):
            if pos % 2 == b % 2:
                chosen.add(_pair(u, graph.right(u)))
    return chosen


def construct_forcing_set(graph: TorusGraph) -> ConstructedForcingSet:
    """A forcing set of :func:`construct_M1` of the size the closed form predicts.

    T(2n, 2m+1, r): W_0 + W1_1 + W2_2 + ... + W1_{2m-1} + W2_{2m}, size (m+1)n.
    T(2n, 2m, 2r-1): W2_0 + W1_1 + ... + W2_{2m-2} + W1_{2m-1}, size mn.
    T(2n, 2m, 2r) with gcd(r, m) > 1: alternate horizontal edges of each
    column band, size mn. With gcd(r, m) = 1 no explicit set is given, so the
    solver's minimum forcing set (size mn + 1) is returned.
    """
    tag = classify(graph.params)
    n, m, r = tag.n, tag.m, tag.r
    M1 = construct_M1(graph)
    if tag.cls in (ParityClass.EO_EVEN, ParityClass.EO_ODD):
        edges = set(resolve_family(graph, Family.W, 0))
        for j in range(1, 2 * m + 1):
            edges |= resolve_family(graph, Family.W1 if j % 2 else Family.W2, j)
        return ConstructedForcingSet(M1, tuple(sorted(edges)), (m + 1) * n, "alternating W1/W2 columns")
    if tag.cls is ParityClass.EE_ODD:
        edges = set()
        for j in range(2 * m):
            edges |= resolve_family(graph, Family.W1 if j % 2 else Family.W2, j)
        return ConstructedForcingSet(M1, tuple(sorted(edges)), m * n, "alternating W2/W1 columns")
    if tag.cls is ParityClass.EE_EVEN:
        if gcd(r, m) == 1:
            w = forcing_number(graph, M1)
            return ConstructedForcingSet(M1, w.witness_set, m * n + 1, "solver witness")
        edges = _striped_band_selection(graph)
        return ConstructedForcingSet(M1, tuple(sorted(edges)), m * n, "alternate edges per column band")
    raise WrongClass(f"no forcing-set construction for class {tag.cls}")


# -- markings ------------------------------------------------------------------------


class Strategy(str, enum.Enum):
    ODD_COLUMNS = "odd-columns"  # T = X'_1 + X'_3 + ... + X'_{2n-3} + X*
    ALTERNATE_ROWS = "alternate-rows"  # T = Y_1 + X_3 + Y_5 + ...
    ALTERNATE_ROWS_SWAPPED = "alternate-rows-swapped"  # T = X_1 + Y_3 + X_5 + ...
    COPRIME = "coprime"  # T = Y_sub + X_sub + X'_2 + ... + X'_{2n-2}, size mn - 1
    ODD_TORSION = "odd-torsion"  # T = Y_sub_odd + X'_0 + X'_2 + ... + X'_{2n-2}

    def __str__(self):
        return self.value


_STRATEGY_CLASSES = {
    Strategy.ODD_COLUMNS: (ParityClass.EO_EVEN, ParityClass.EO_ODD),
    Strategy.ALTERNATE_ROWS: (ParityClass.EE_EVEN, ParityClass.EE_ODD),
    Strategy.ALTERNATE_ROWS_SWAPPED: (ParityClass.EE_EVEN, ParityClass.EE_ODD),
    Strategy.COPRIME: (ParityClass.EE_EVEN,),
    Strategy.ODD_TORSION: (ParityClass.EE_ODD,),
}


def marking_vertices(graph: TorusGraph, strategy: Strategy | str) -> frozenset:
    """The marked set of ``strategy`` in its reference position."""
    strategy = Strategy(strategy)
    tag = classify(graph.params)
    if tag.cls not in _STRATEGY_CLASSES[strategy]:
        raise WrongClass(f"strategy {strategy} does not apply to {graph.params} ({tag.cls})")
    n, m, r = tag.n, tag.m, tag.r
    out: set[int] = set()
    if strategy is Strategy.ODD_COLUMNS:
        for i in range(1, 2 * n - 2, 2):
            out |= resolve_family(graph, Family.X_PRIME_ODD, i)
        out |= resolve_family(graph, Family.X_STAR)
    elif strategy in (Strategy.ALTERNATE_ROWS, Strategy.ALTERNATE_ROWS_SWAPPED):
        first, second = Family.Y, Family.X
        if strategy is Strategy.ALTERNATE_ROWS_SWAPPED:
            first, second = second, first
        for t, row in enumerate(range(1, 2 * n, 2)):
            out |= resolve_family(graph, first if t % 2 == 0 else second, row)
    elif strategy is Strategy.COPRIME:
        if gcd(r, m) != 1:
            raise WrongClass(f"the coprime marking needs gcd(r, m) = 1, got gcd({r}, {m})")
        out |= resolve_family(graph, Family.Y_SUB) | resolve_family(graph, Family.X_SUB)
        for i in range(2, 2 * n - 1, 2):
            out |= resolve_family(graph, Family.X_PRIME, i)
    elif strategy is Strategy.ODD_TORSION:
        out |= resolve_family(graph, Family.Y_SUB_ODD)
        for i in range(0, 2 * n - 1, 2):
            out |= resolve_family(graph, Family.X_PRIME, i)
    return frozenset(out)


def claimed_marking_size(graph: TorusGraph, strategy: Strategy | str) -> int:
    tag = classify(graph.params)
    return tag.m * tag.n - 1 if Strategy(strategy) is Strategy.COPRIME else tag.m * tag.n


def is_independent(graph, vertices: Iterable[int]) -> bool:
    vs = set(vertices)
    return all(w not in vs for v in vs for w in graph.adjacency[v])


def marked_subgraph(graph, marked: Iterable[int]) -> frozenset:
    """Edge set of the union of all 2-paths whose two ends are marked."""
    T = set(marked)
    if not is_independent(graph, T):
        raise NotIndependent("marked vertices must form an independent set")
    edges = set()
    for x in range(graph.num_vertices):
        ends = [w for w in graph.adjacency[x] if w in T]
        if len(ends) >= 2:
            edges.update(_pair(x, w) for w in ends)
    return frozenset(edges)


def _deltas(graph: TorusGraph, u: int, v: int) -> tuple[int, int]:
    if graph.edge_kind(u, v) == HORIZONTAL:
        return (1, 0) if graph.right(u) == v else (-1, 0)
    return (0, 1) if graph.down(u) == v else (0, -1)


def plane_lift(graph: TorusGraph, edges: Iterable[Pair]) -> dict[int, tuple[int, int]] | None:
    """Grid coordinates for the subgraph's vertices, or None if it does not lift.

    Each component is unrolled from its least vertex; the lift fails when a
    cycle winds around the torus or two vertices land on the same point.
    Components are placed side by side so the result is one plane drawing.
    """
    nb: dict[int, list[int]] = {}
    for u, v in edges:
        nb.setdefault(u, []).append(v)
        nb.setdefault(v, []).append(u)
    pos: dict[int, tuple[int, int]] = {}
    offset = 0
    for start in sorted(nb):
        if start in pos:
            continue
        local = {start: (0, 0)}
        stack = [start]
        while stack:
            u = stack.pop()
            x, y = local[u]
            for w in nb[u]:
                dx, dy = _deltas(graph, u, w)
                want = (x + dx, y + dy)
                if w in local:
                    if local[w] != want:
                        return None
                else:
                    local[w] = want
                    stack.append(w)
        if len(set(local.values())) != len(local):
            return None
        xmin = min(x for x, _ in local.values())
        xmax = max(x for x, _ in local.values())
        for w, (x, y) in local.items():
            pos[w] = (x - xmin + offset, y)
        offset += xmax - xmin + 2
    return pos


@dataclass(frozen=True)
class MarkedShape:
    """How a marked subgraph sits in the plane grid.

    ``blocks`` are lower-left corners of 2x2 squares whose 8-edge perimeter
    is in the subgraph; every other edge of a 2x2-polyomino's base shape is
    a 2-path through an unmarked middle vertex, so these blocks are the base
    cells of the 2x2-polyomino. ``squares`` are unit 4-cycles, and
    ``path_edges`` counts edges on neither.
    """

    plane: bool
    blocks: frozenset = frozenset()
    squares: frozenset = frozenset()
    path_edges: int = 0

    @property
    def polyomino(self) -> Polyomino | None:
        """The filled 2x2-polyomino spanned by the blocks, if they are connected."""
        if not self.blocks:
            return None
        cells = frozenset((x + a, y + b) for x, y in self.blocks for a in (0, 1) for b in (0, 1))
        try:
            return Polyomino(cells)
        except ValueError:
            return None


def _perimeter(x: int, y: int, size: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    ring = ([(x + k, y) for k in range(size)] + [(x + size, y + k) for k in range(size)]
            + [(x + size - k, y + size) for k in range(size)] + [(x, y + size - k) for k in range(size)])
    return list(zip(ring, ring[1:] + ring[:1]))


def describe_marked_subgraph(graph: TorusGraph, edges: Iterable[Pair]) -> MarkedShape:
    edges = set(edges)
    pos = plane_lift(graph, edges)
    if pos is None:
        return MarkedShape(False)
    at = {xy: v for v, xy in pos.items()}

    def present(side) -> bool:
        a, b = at.get(side[0]), at.get(side[1])
        return a is not None and b is not None and _pair(a, b) in edges

    covered = set()
    found = {1: set(), 2: set()}
    for size in (2, 1):
        for x, y in at:
            sides = _perimeter(x, y, size)
            if all(present(s) for s in sides):
                found[size].add((x, y))
                covered.update(_pair(at[a], at[b]) for a, b in sides)
    return MarkedShape(True, frozenset(found[2]), frozenset(found[1]), len(edges - covered))


@dataclass(frozen=True)
class MarkedSet:
    vertices: frozenset
    matched_edges: tuple[Pair, ...]
    subgraph: frozenset
    strategy: str = ""
    representation: str = "T"
    shift: tuple[int, int] = (0, 0)

    def __len__(self):
        return len(self.vertices)


def _matched_at(matching: PerfectMatching, vertices) -> tuple[Pair, ...]:
    return tuple(sorted({_pair(v, matching.mate[v]) for v in vertices}))


def _pull_back(matching: PerfectMatching, sigma) -> PerfectMatching:
    inv = [0] * len(sigma)
    for v, w in enumerate(sigma):
        inv[w] = v
    return PerfectMatching(tuple(inv[matching.mate[sigma[v]]] for v in range(len(sigma))))


def alternating_rows(graph: TorusGraph, matching: PerfectMatching) -> list[tuple[int, int]]:
    """(row, phase) for every M-alternating II-cycle; phase is the column parity of its M-edges' left ends."""
    out = []
    if graph.m % 2:
        return out
    for i in range(graph.n):
        for phase in (0, 1):
            if all(matching.mate[graph.vertex(i, 2 * k + phase)] == graph.vertex(i, 2 * k + phase + 1)
                   for k in range(graph.m // 2)):
                out.append((i, phase))
    return out


def _precondition(graph: TorusGraph, matching: PerfectMatching, strategy: Strategy) -> str | None:
    rows = alternating_rows(graph, matching)
    if strategy in (Strategy.ALTERNATE_ROWS, Strategy.ALTERNATE_ROWS_SWAPPED):
        if rows:
            return f"II-cycle in row {rows[0][0]} is M-alternating"
    elif strategy in (Strategy.COPRIME, Strategy.ODD_TORSION):
        if (graph.n - 1, 0) not in rows:
            return "last row is not an M-alternating II-cycle with M-edges at even columns"
    return None


def construct_marking(graph: TorusGraph, matching: PerfectMatching, strategy: Strategy | str,
                      shift: tuple[int, int] = (0, 0)) -> MarkedSet:
    """Marking of ``strategy`` translated by ``shift`` = (rows down, columns right).

    Raises NotApplicable when the matching violates the strategy's
    precondition in the translated frame, WrongClass on the wrong parity
    class and NotIndependent if the translated set is not independent.
    """
    strategy = Strategy(strategy)
    base = marking_vertices(graph, strategy)
    sigma = translation(graph.params, *shift)
    why = _precondition(graph, _pull_back(matching, sigma), strategy)
    if why is not None:
        raise NotApplicable(f"{strategy} at shift {shift}: {why}")
    T = frozenset(sigma[v] for v in base)
    sub = marked_subgraph(graph, T)
    return MarkedSet(T, _matched_at(matching, T), sub, strategy.value, "T", tuple(shift))


@dataclass(frozen=True)
class MarkingBound:
    """Outcome of the marking bound: either ``bound`` with its forcing set, or a certificate cycle."""

    marked: frozenset
    bound: int | None
    forcing_set: tuple[Pair, ...] = ()
    certificate: AlternatingCycle | None = None

    @property
    def applicable(self) -> bool:
        return self.bound is not None


def marking_bound(graph, matching: PerfectMatching, marked: Iterable[int]) -> MarkingBound:
    """``|M| - |T|`` as a certified upper bound on f(G, M), when it applies."""
    T = frozenset(marked)
    sub = marked_subgraph(graph, T)
    cyc = find_alternating_cycle(graph, matching, within=sub) if sub else None
    if cyc is not None:
        return MarkingBound(T, None, certificate=cyc)
    MT = set(_matched_at(matching, T))
    rest = tuple(e for e in matching.edges if e not in MT)
    return MarkingBound(T, len(matching) - len(T), rest)


# -- the shift search -----------------------------------------------------------------


@dataclass(frozen=True)
class _Frame:
    name: str
    graph: TorusGraph
    to_frame: tuple[int, ...] | None  # source vertex -> frame vertex


def _frames(graph: TorusGraph) -> list[_Frame]:
    frames = [_Frame("T", graph, None)]
    target = star_params(graph.params).target
    if degeneracy(target) is None:
        try:
            frames.append(_Frame("T*", build_torus(target), star_map(graph.params)))
        except DegenerateInstance:  # pragma: no cover - guarded by degeneracy()
            pass
    return frames


def _strategies_for(graph: TorusGraph) -> list[Strategy]:
    try:
        cls = classify(graph.params).cls
    except Exception:
        return []
    return [s for s, classes in _STRATEGY_CLASSES.items() if cls in classes]


def _shifts(graph: TorusGraph, strategy: Strategy):
    # Row translations first (they also carry the torsion), then column moves.
    for b in range(graph.m):
        for a in range(graph.n):
            yield (a, b)


def shift_marking_search(graph: TorusGraph, matching: PerfectMatching, required: int | None = None) -> MarkedSet:
    """Find a marking whose marked subgraph has no M-alternating cycle.

    Tries every strategy that applies to the torus or to its T* redrawing, in
    every translation whose frame satisfies the strategy's precondition,
    largest marking first. ``required`` (default ``|M| - F`` from the closed
    forms) is the smallest acceptable marking. Raises SearchExhausted when
    nothing works.
    """
    if required is None:
        predicted = predicted_max_forcing(graph.params)
        if predicted is None:
            raise WrongClass(f"no marking argument is known for {graph.params}")
        required = len(matching) - predicted
    plans = []
    for frame in _frames(graph):
        for strategy in _strategies_for(frame.graph):
            size = claimed_marking_size(frame.graph, strategy)
            if size >= required:
                plans.append((-size, frame, strategy))
    plans.sort(key=lambda p: p[0])
    tried = 0
    for _, frame, strategy in plans:
        if frame.to_frame is None:
            fm = matching
            back = None
        else:
            fwd = frame.to_frame
            back = [0] * len(fwd)
            for v, w in enumerate(fwd):
                back[w] = v
            fm = PerfectMatching(tuple(fwd[matching.mate[back[w]]] for w in range(len(fwd))))
        for shift in _shifts(frame.graph, strategy):
            try:
                ms = construct_marking(frame.graph, fm, strategy, shift)
            except (NotApplicable, NotIndependent):
                continue
            tried += 1
            T = ms.vertices if back is None else frozenset(back[w] for w in ms.vertices)
            result = marking_bound(graph, matching, T)
            if result.applicable:
                return MarkedSet(T, _matched_at(matching, T), marked_subgraph(graph, T),
                                 strategy.value, frame.name, shift)
    raise SearchExhausted(f"{graph.params}: no marking of size >= {required} worked ({tried} placements tried)")

"""Fixed polyominoes, 2x2 inflation and interior-vertex parity.

Cells are unit squares named by their lower-left corner (x, y). Vertices are
lattice points, so cell (x, y) has corners (x, y), (x+1, y), (x, y+1) and
(x+1, y+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NotSimplyConnected

Cell = tuple[int, int]
_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _connected(cells: set) -> bool:
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for dx, dy in _STEPS:
            c = (x + dx, y + dy)
            if c in cells and c not in seen:
                seen.add(c)
                stack.append(c)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Polyomino:
    cells: frozenset

    def __post_init__(self):
        cells = frozenset((int(x), int(y)) for x, y in self.cells)
        object.__setattr__(self, "cells", cells)
        if not _connected(set(cells)):
            raise ValueError("a polyomino is a non-empty edge-connected set of cells")

    def __len__(self):
        return len(self.cells)

    @classmethod
    def rectangle(cls, width: int, height: int) -> "Polyomino":
        return cls(frozenset((x, y) for x in range(width) for y in range(height)))

    @property
    def vertices(self) -> frozenset:
        return frozenset((x + a, y + b) for x, y in self.cells for a in (0, 1) for b in (0, 1))

    def _edge_uses(self) -> dict:
        uses: dict = {}
        for x, y in self.cells:
            for e in (((x, y), (x + 1, y)), ((x, y + 1), (x + 1, y + 1)),
                      ((x, y), (x, y + 1)), ((x + 1, y), (x + 1, y + 1))):
                uses[e] = uses.get(e, 0) + 1
        return uses

    @property
    def edges(self) -> frozenset:
        return frozenset(self._edge_uses())

    @property
    def boundary_vertices(self) -> frozenset:
        """Endpoints of edges that lie on exactly one cell."""
        out = set()
        for (a, b), k in self._edge_uses().items():
            if k == 1:
                out.update((a, b))
        return frozenset(out)

    def normalized(self) -> "Polyomino":
        x0 = min(x for x, _ in self.cells)
        y0 = min(y for _, y in self.cells)
        return Polyomino(frozenset((x - x0, y - y0) for x, y in self.cells))

    def holes(self) -> list[frozenset]:
        """Bounded components of empty cells, each a frozenset of cells."""
        xs = [x for x, _ in self.cells]
        ys = [y for _, y in self.cells]
        lo_x, hi_x, lo_y, hi_y = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
        empty = {(x, y) for x in range(lo_x, hi_x + 1) for y in range(lo_y, hi_y + 1)} - self.cells
        out = []
        while empty:
            start = empty.pop()
            comp = {start}
            stack = [start]
            outside = False
            while stack:
                x, y = stack.pop()
                if x in (lo_x, hi_x) or y in (lo_y, hi_y):
                    outside = True
                for dx, dy in _STEPS:
                    c = (x + dx, y + dy)
                    if c in empty:
                        empty.discard(c)
                        comp.add(c)
                        stack.append(c)
            if not outside:
                out.append(frozenset(comp))
        return sorted(out, key=sorted)

    @property
    def simply_connected(self) -> bool:
        return not self.holes()


def inflate(base: Polyomino) -> Polyomino:
    """Replace every cell by a 2x2 block of cells."""
    return Polyomino(frozenset((2 * x + a, 2 * y + b) for x, y in base.cells for a in (0, 1) for b in (0, 1)))


def interior_vertex_count(p: Polyomino) -> int:
    """Lattice points surrounded by four cells of ``p``."""
    cells = p.cells
    count = 0
    for x, y in p.vertices:
        if (x, y) in cells and (x - 1, y) in cells and (x, y - 1) in cells and (x - 1, y - 1) in cells:
            count += 1
    return count


def interior_vertex_count_by_boundary(p: Polyomino) -> int:
    """Cross-check: all vertices minus those on a boundary edge."""
    return len(p.vertices) - len(p.boundary_vertices)


def is_22_polyomino_boundary_alternating_possible(p: Polyomino, matching=None) -> bool:
    """False when the boundary of ``p`` cannot be an alternating cycle.

    A cycle alternating for a perfect matching encloses an even number of
    vertices (each interior vertex is matched inside), so an odd interior
    count rules it out. True means no conclusion. ``matching`` is accepted
    for symmetry with callers that hold one; the parity test does not need it.
    """
    if not p.simply_connected:
        raise NotSimplyConnected("the region enclosed by a cycle has no holes")
    return interior_vertex_count(p) % 2 == 0


def cells_inside(cycle: Sequence[tuple[int, int]]) -> Polyomino:
    """Cells enclosed by a closed lattice path given as consecutive points."""
    vertical = set()
    pts = list(cycle)
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        if abs(x1 - x2) + abs(y1 - y2) != 1:
            raise ValueError("consecutive cycle points must be lattice neighbours")
        if x1 == x2:
            vertical.add((x1, min(y1, y2)))
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    cells = set()
    for y in range(min(ys), max(ys)):
        inside = False
        for x in range(min(xs), max(xs)):
            if (x, y) in vertical:
                inside = not inside
            if inside:
                cells.add((x, y))
    return Polyomino(frozenset(cells))


def fixed_polyominoes(size: int) -> Iterator[Polyomino]:
    """Every fixed polyomino with ``size`` cells, once each (Redelmeier's method).

    Cells are grown from (0, 0) inside the half plane y > 0 or (y = 0, x >= 0),
    so each shape is produced exactly once, anchored at its least cell.
    """
    if size < 1:
        return

    def allowed(c: Cell) -> bool:
        return c[1] > 0 or (c[1] == 0 and c[0] >= 0)

    def grow(poly: list, untried: list, seen: set):
        while untried:
            c = untried.pop()
            poly.append(c)
            if len(poly) == size:
                yield Polyomino(frozenset(poly))
            else:
                fresh = []
                for dx, dy in _STEPS:
                    nb = (c[0] + dx, c[1] + dy)
                    if allowed(nb) and nb not in seen:
                        fresh.append(nb)
                seen.update(fresh)
                yield from grow(poly, untried + fresh, seen)
                seen.difference_update(fresh)
            poly.pop()

    yield from grow([], [(0, 0)], {(0, 0)})


def enumerate_fixed(size: int) -> list[Polyomino]:
    """:func:`fixed_polyominoes` with an explicit duplicate check on normalized shapes."""
    shapes = list(fixed_polyominoes(size))
    keys = {p.normalized().cells for p in shapes}
    if len(keys) != len(shapes):
        raise AssertionError(f"duplicate fixed polyominoes generated at size {size}")
    return shapes


# -- text format -----------------------------------------------------------------


def format_cells(p: Polyomino) -> str:
    return "".join(f"c {x} {y}\n" for x, y in sorted(p.cells))


def parse_cells(text: str) -> Polyomino:
    cells = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "c" or len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'c <x> <y>', got {raw!r}")
        cells.append((int(parts[1]), int(parts[2])))
    return Polyomino(frozenset(cells))


def polyomino_from_cells(cells: Iterable[Cell]) -> Polyomino:
    return Polyomino(frozenset(cells))

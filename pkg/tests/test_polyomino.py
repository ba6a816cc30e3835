import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusforcing.errors import NotSimplyConnected
from torusforcing.polyomino import (
    Polyomino,
    cells_inside,
    enumerate_fixed,
    format_cells,
    inflate,
    interior_vertex_count,
    interior_vertex_count_by_boundary,
    is_22_polyomino_boundary_alternating_possible,
    parse_cells,
)

L_TROMINO = Polyomino(frozenset({(0, 0), (1, 0), (0, 1)}))


def test_invalid():
    with pytest.raises(ValueError):
        Polyomino(frozenset())
    with pytest.raises(ValueError):
        Polyomino(frozenset({(0, 0), (1, 1)}))  # corner contact only


def test_inflate_examples():
    assert inflate(Polyomino(frozenset({(0, 0)}))) == Polyomino.rectangle(2, 2)
    assert inflate(Polyomino.rectangle(2, 1)) == Polyomino.rectangle(4, 2)


def test_interior_examples():
    assert interior_vertex_count(Polyomino(frozenset({(0, 0)}))) == 0
    assert interior_vertex_count(Polyomino.rectangle(2, 2)) == 1
    assert interior_vertex_count(inflate(Polyomino.rectangle(3, 1))) == 5
    assert interior_vertex_count(inflate(L_TROMINO)) == 5


def test_parity_predicate():
    assert is_22_polyomino_boundary_alternating_possible(inflate(Polyomino.rectangle(3, 1))) is False
    assert is_22_polyomino_boundary_alternating_possible(Polyomino(frozenset({(0, 0)}))) is True
    assert is_22_polyomino_boundary_alternating_possible(inflate(L_TROMINO)) is False
    ring = Polyomino(frozenset((x, y) for x in range(3) for y in range(3)) - {(1, 1)})
    with pytest.raises(NotSimplyConnected):
        is_22_polyomino_boundary_alternating_possible(ring)


def test_fixed_counts():
    # the enumerator's duplicate check runs inside enumerate_fixed
    assert [len(enumerate_fixed(k)) for k in range(1, 7)] == [1, 2, 6, 19, 63, 216]


def test_enumerated_shapes_are_distinct_and_sized():
    for k in range(1, 6):
        shapes = enumerate_fixed(k)
        assert all(len(p) == k for p in shapes)
        assert len({p.normalized() for p in shapes}) == len(shapes)


def test_inflated_interior_count_odd_up_to_five_cells():
    for k in range(1, 6):
        for base in enumerate_fixed(k):
            assert interior_vertex_count(inflate(base)) % 2 == 1


def test_holes():
    ring = Polyomino(frozenset((x, y) for x in range(3) for y in range(3)) - {(1, 1)})
    assert ring.holes() == [frozenset({(1, 1)})]
    assert not ring.simply_connected
    assert Polyomino.rectangle(3, 2).simply_connected


def test_cells_inside():
    square = [(0, 0), (2, 0), (2, 2), (0, 2)]
    path = []
    for (x1, y1), (x2, y2) in zip(square, square[1:] + square[:1]):
        steps = max(abs(x2 - x1), abs(y2 - y1))
        for s in range(steps):
            path.append((x1 + (x2 - x1) * s // steps, y1 + (y2 - y1) * s // steps))
    assert cells_inside(path) == Polyomino.rectangle(2, 2)
    with pytest.raises(ValueError):
        cells_inside([(0, 0), (2, 0), (2, 1)])


def test_text_round_trip():
    p = inflate(L_TROMINO)
    text = format_cells(p)
    assert text.splitlines()[0] == "c 0 0"
    assert parse_cells(text) == p
    with pytest.raises(ValueError):
        parse_cells("x 1 2\n")


@st.composite
def random_polyomino(draw):
    cells = {(0, 0)}
    for _ in range(draw(st.integers(0, 12))):
        x, y = draw(st.sampled_from(sorted(cells)))
        dx, dy = draw(st.sampled_from([(1, 0), (-1, 0), (0, 1), (0, -1)]))
        cells.add((x + dx, y + dy))
    return Polyomino(frozenset(cells))


@settings(max_examples=150, deadline=None)
@given(random_polyomino())
def test_inflation_invariants(p):
    big = inflate(p)
    assert len(big) == 4 * len(p)
    assert interior_vertex_count(big) == interior_vertex_count_by_boundary(big)
    assert interior_vertex_count(p) == interior_vertex_count_by_boundary(p)
    if p.simply_connected:
        assert interior_vertex_count(big) % 2 == 1

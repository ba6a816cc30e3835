import pytest

from oracles import Oracle
from torusforcing.constructions import (
    Family,
    Strategy,
    claimed_marking_size,
    construct_forcing_set,
    construct_M1,
    construct_marking,
    describe_marked_subgraph,
    is_independent,
    marked_subgraph,
    marking_bound,
    marking_vertices,
    plane_lift,
    resolve_family,
    shift_marking_search,
)
from torusforcing.errors import NotApplicable, NotIndependent, SearchExhausted, WrongClass
from torusforcing.forcing import forcing_number
from torusforcing.matching import PerfectMatching, enumerate_matchings, is_forcing_set
from torusforcing.torus import torus


def coords(g, vs):
    return sorted(g.coords(v) for v in vs)


def edge_coords(g, es):
    return sorted((g.coords(u), g.coords(v)) for u, v in es)


# -- families ------------------------------------------------------------------


def test_W0_example():
    g = torus(4, 7, 5)
    assert edge_coords(g, resolve_family(g, Family.W, 0)) == [((0, 0), (1, 0)), ((2, 0), (3, 0))]


def test_W_split():
    g = torus(8, 6, 3)
    for j in range(6):
        W, W1, W2 = (resolve_family(g, f, j) for f in (Family.W, Family.W1, Family.W2))
        assert W1 | W2 == W and not W1 & W2
        assert edge_coords(g, W1) == [((2, j), (3, j)), ((6, j), (7, j))]


def test_E_family():
    g = torus(4, 8, 4)
    E = resolve_family(g, Family.E, 7)
    assert edge_coords(g, E) == sorted(((i, 0), (i, 7)) for i in range(4))


def test_X_star_example():
    # 2m+1-r = 6; then 6+3, 6+5, 6+7, 6+9 taken mod 11
    g = torus(6, 11, 5)
    assert coords(g, resolve_family(g, Family.X_STAR)) == [(5, 0), (5, 2), (5, 4), (5, 6), (5, 9)]


def test_X_prime_contexts():
    g = torus(4, 8, 2)
    assert coords(g, resolve_family(g, Family.X_PRIME, 2)) == [(2, 2), (2, 4), (2, 6)]
    with pytest.raises(WrongClass):
        resolve_family(g, Family.X_PRIME_ODD, 2)
    h = torus(6, 11, 5)
    assert coords(h, resolve_family(h, Family.X_PRIME_ODD, 1)) == [(1, c) for c in (2, 4, 6, 8, 10)]
    with pytest.raises(WrongClass):
        resolve_family(h, Family.X_PRIME, 1)


def test_sub_families():
    g = torus(8, 10, 4)  # n=4, m=5, r=2
    assert coords(g, resolve_family(g, Family.Y_SUB)) == [(3, 0), (5, 0), (7, 0)]
    assert coords(g, resolve_family(g, Family.X_SUB)) == [(0, 1), (0, 3), (0, 7), (0, 9)]
    h = torus(6, 10, 5)  # n=3, m=5, r=3
    assert coords(h, resolve_family(h, Family.Y_SUB_ODD)) == [(1, 0), (3, 0), (5, 5)]
    with pytest.raises(WrongClass):
        resolve_family(h, Family.Y_SUB)
    with pytest.raises(WrongClass):
        resolve_family(torus(3, 4, 2), Family.W, 0)


# -- M1 and its forcing sets ---------------------------------------------------------


@pytest.mark.parametrize("p, size, kind", [((4, 7, 5), 14, "v"), ((4, 8, 4), 16, "h"), ((6, 10, 5), 30, "v")])
def test_M1_examples(p, size, kind):
    g = torus(*p)
    M = construct_M1(g)
    M.check(g)
    assert len(M) == size
    assert all(g.edge_kind(u, v) == kind for u, v in M.edges)


def test_M1_horizontal_is_E_even():
    g = torus(4, 8, 4)
    want = set()
    for j in (0, 2, 4, 6):
        want |= resolve_family(g, Family.E, j)
    assert set(construct_M1(g).edges) == want


def test_M1_wrong_class():
    with pytest.raises(WrongClass):
        construct_M1(torus(3, 4, 2))
    with pytest.raises(WrongClass):
        construct_M1(torus(4, 7, 5), "horizontal")


@pytest.mark.parametrize("p, claimed", [
    ((4, 7, 5), 8), ((6, 10, 5), 15), ((4, 8, 4), 8), ((4, 10, 4), 11), ((4, 6, 3), 6), ((2, 5, 2), 3),
    ((4, 5, 1), 6), ((6, 8, 4), 12), ((4, 12, 6), 12), ((4, 8, 2), 9), ((2, 8, 4), 4), ((6, 7, 3), 12),
])
def test_forcing_set_claimed_size(p, claimed):
    g = torus(*p)
    fs = construct_forcing_set(g)
    assert len(fs) == fs.claimed_size == claimed
    assert set(fs.edges) <= set(fs.matching.edges)
    assert is_forcing_set(g, fs.matching, fs.edges)
    assert forcing_number(g, fs.matching).value == claimed


@pytest.mark.parametrize("p", [(2, 6, 2), (4, 4, 2), (4, 5, 3)])
def test_forcing_set_against_oracle(p):
    g = torus(*p)
    fs = construct_forcing_set(g)
    oracle = Oracle.of(g)
    assert oracle.is_forcing(fs.edges)
    assert oracle.forcing_number(fs.matching.edges) == fs.claimed_size


# -- markings ------------------------------------------------------------------------


@pytest.mark.parametrize("p, strategy, size", [
    ((6, 11, 5), Strategy.ODD_COLUMNS, 15),
    ((6, 11, 6), Strategy.ODD_COLUMNS, 15),
    ((6, 8, 3), Strategy.ALTERNATE_ROWS, 12),
    ((8, 8, 3), Strategy.ALTERNATE_ROWS, 16),
    ((6, 8, 3), Strategy.ALTERNATE_ROWS_SWAPPED, 12),
    ((8, 10, 4), Strategy.COPRIME, 19),
    ((8, 6, 2), Strategy.COPRIME, 11),
    ((6, 10, 5), Strategy.ODD_TORSION, 15),
    ((6, 6, 3), Strategy.ODD_TORSION, 9),
])
def test_marking_sizes(p, strategy, size):
    g = torus(*p)
    T = marking_vertices(g, strategy)
    assert len(T) == size == claimed_marking_size(g, strategy)
    assert is_independent(g, T)


def test_marking_wrong_class():
    with pytest.raises(WrongClass):
        marking_vertices(torus(4, 8, 4), Strategy.ODD_COLUMNS)
    with pytest.raises(WrongClass):
        marking_vertices(torus(4, 8, 4), Strategy.COPRIME)  # gcd(2, 4) = 2


def test_alternating_row_marking():
    g = torus(6, 8, 3)
    T = marking_vertices(g, Strategy.ALTERNATE_ROWS)
    by_row = {}
    for v in T:
        i, j = g.coords(v)
        by_row.setdefault(i, []).append(j)
    assert sorted(by_row) == [1, 3, 5]
    assert sorted(by_row[1]) == [1, 3, 5, 7] and sorted(by_row[3]) == [0, 2, 4, 6]
    assert sorted(by_row[5]) == [1, 3, 5, 7]


def test_marked_subgraph_trivial():
    g = torus(4, 7, 5)
    assert marked_subgraph(g, [g.vertex(1, 1)]) == frozenset()
    with pytest.raises(NotIndependent):
        marked_subgraph(g, [g.vertex(1, 1), g.vertex(1, 2)])


def test_marked_subgraph_two_vertices():
    g = torus(4, 7, 5)
    a, b = g.vertex(0, 0), g.vertex(0, 2)
    sub = marked_subgraph(g, [a, b])
    # the only common neighbour of v_{0,0} and v_{0,2} is v_{0,1}
    assert edge_coords(g, sub) == [((0, 0), (0, 1)), ((0, 1), (0, 2))]
    c = g.vertex(1, 1)
    sub = marked_subgraph(g, [a, c])
    assert len(sub) == 4  # two 2-paths, through v_{0,1} and v_{1,0}


def test_odd_columns_shape():
    g = torus(6, 11, 5)
    shape = describe_marked_subgraph(g, marked_subgraph(g, marking_vertices(g, Strategy.ODD_COLUMNS)))
    assert shape.plane
    assert len(shape.blocks) >= 4 and shape.path_edges > 0  # 2x2-polyomino with a path attached
    assert shape.polyomino is not None


def test_coprime_shape_has_square():
    g = torus(8, 10, 4)
    shape = describe_marked_subgraph(g, marked_subgraph(g, marking_vertices(g, Strategy.COPRIME)))
    assert shape.plane and len(shape.blocks) == (4 - 2) * (5 - 2) and len(shape.squares) == 1


def test_two_row_marking_not_plane():
    g = torus(6, 8, 3)
    sub = marked_subgraph(g, marking_vertices(g, Strategy.ALTERNATE_ROWS))
    assert plane_lift(g, sub) is None  # contains full rows, which wind around the torus


def test_marking_bound_example():
    g = torus(4, 7, 5)
    M = construct_M1(g)
    res = marking_bound(g, M, marking_vertices(g, Strategy.ODD_COLUMNS))
    assert res.bound == 14 - 6 == 8
    assert is_forcing_set(g, M, res.forcing_set) and len(res.forcing_set) == 8


def test_marking_bound_empty_set():
    g = torus(4, 7, 5)
    M = construct_M1(g)
    res = marking_bound(g, M, [])
    assert res.bound == len(M)


def test_marking_bound_inapplicable_certificate():
    # some matching of T(6,8,3) with an alternating row defeats the unshifted row marking
    g = torus(6, 8, 3)
    T = marking_vertices(g, Strategy.ALTERNATE_ROWS)
    row = [(g.vertex(1, 2 * k), g.vertex(1, 2 * k + 1)) for k in range(4)]
    rest = [(g.vertex(i, j), g.vertex(i + 1, j)) for i in (2, 4) for j in range(8)]
    rest += [(g.vertex(0, 2 * k + 1), g.vertex(0, (2 * k + 2) % 8)) for k in range(4)]
    M = PerfectMatching.from_edges(g, row + rest)
    res = marking_bound(g, M, T)
    assert not res.applicable
    assert res.certificate.is_valid(g, M)
    assert set(res.certificate.edges) <= marked_subgraph(g, T)
    with pytest.raises(NotApplicable):
        construct_marking(g, M, Strategy.ALTERNATE_ROWS)


@pytest.mark.parametrize("p", [(4, 5, 2), (4, 7, 3), (4, 8, 4), (4, 6, 1), (3, 4, 2)])
def test_marking_bound_is_an_upper_bound(p):
    g = torus(*p)
    for k, M in enumerate(enumerate_matchings(g)):
        if k % 23:
            continue
        try:
            ms = shift_marking_search(g, M)
        except SearchExhausted:
            continue
        res = marking_bound(g, M, ms.vertices)
        assert res.applicable
        assert res.bound >= forcing_number(g, M).value
        assert is_forcing_set(g, M, res.forcing_set)


def test_shift_search_coprime_branch():
    # M with the last row alternating (even phase) on T(4,8,2): needs the mn-1 marking
    g = torus(4, 8, 2)
    last = [(g.vertex(3, 2 * k), g.vertex(3, 2 * k + 1)) for k in range(4)]
    rest = [(g.vertex(i, 2 * k), g.vertex(i, 2 * k + 1)) for i in range(3) for k in range(4)]
    M = PerfectMatching.from_edges(g, last + rest)
    ms = shift_marking_search(g, M)
    assert len(ms) >= 7
    assert marking_bound(g, M, ms.vertices).applicable
    # all rows alternating: the row strategies cannot apply, only the coprime one
    assert ms.strategy == Strategy.COPRIME.value and len(ms) == 7


def test_shift_search_needs_a_claim():
    g = torus(3, 4, 1)
    with pytest.raises(WrongClass):
        shift_marking_search(g, next(iter(enumerate_matchings(g))))


def test_shift_search_reports_exhaustion():
    # two-row EO torus, a matching found by the sweep where the odd-column marking has no valid translate
    g = torus(2, 9, 2)
    for M in enumerate_matchings(g):
        try:
            shift_marking_search(g, M)
        except SearchExhausted:
            break
    else:
        pytest.fail("expected at least one matching with no valid marking")

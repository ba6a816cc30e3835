from math import gcd

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusforcing.errors import BandUndefined, DegenerateInstance, InvalidParams, OddOrder
from torusforcing.torus import (
    ParityClass,
    TorusParams,
    build_torus,
    classify,
    col_band,
    column_walk,
    degeneracy,
    format_edge_list,
    i_cycles,
    ii_cycles,
    is_isomorphism,
    parse_edge_list,
    parse_edge_records,
    row_band,
    star_map,
    star_params,
    torus,
    translation,
)


def expected_degenerate(n, m, r):
    # the three ways a multigraph arises, written out independently of the builder
    return n == 1 or m == 2 or (n == 2 and r == m)


@st.composite
def good_params(draw, max_vertices=40):
    n = draw(st.integers(2, 8))
    m = draw(st.integers(3, max(3, max_vertices // n)))
    r = draw(st.integers(1, m))
    if n == 2 and r == m:
        r = 1
    return TorusParams(n, m, r)


def nx_graph(graph):
    G = nx.Graph()
    G.add_nodes_from(range(graph.num_vertices))
    G.add_edges_from(graph.edge_pairs)
    return G


def test_params_validation():
    with pytest.raises(InvalidParams):
        TorusParams(0, 4, 1)
    with pytest.raises(InvalidParams):
        TorusParams(2, 1, 1)
    with pytest.raises(InvalidParams):
        TorusParams(2, 4, 5)
    with pytest.raises(InvalidParams):
        TorusParams(2, 4, 0)
    assert str(TorusParams(3, 8, 4)) == "T(3,8,4)"


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", range(2, 7))
def test_degeneracy_rule(n, m):
    for r in range(1, m + 1):
        assert (degeneracy((n, m, r)) is not None) == expected_degenerate(n, m, r)
        if expected_degenerate(n, m, r):
            with pytest.raises(DegenerateInstance):
                build_torus((n, m, r))


def test_degenerate_messages():
    assert degeneracy((2, 4, 4)) == "parallel vertical edges"
    with pytest.raises(DegenerateInstance, match="T\\(2,4,4\\)"):
        torus(2, 4, 4)


@settings(max_examples=60, deadline=None)
@given(good_params())
def test_four_regular_simple(p):
    g = build_torus(p)
    assert len(g.edges) == 2 * p.num_vertices
    assert all(len(nb) == 4 for nb in g.adjacency)
    assert len(set(g.edge_pairs)) == len(g.edge_pairs)
    kinds = [e.kind for e in g.edges]
    assert kinds.count("h") == kinds.count("v") == p.num_vertices


def test_wrap_edges_follow_torsion():
    g = torus(3, 8, 3)
    # v_{0,j} ~ v_{n-1, m-r+j}
    for j in range(8):
        assert g.has_edge(g.vertex(0, j), g.vertex(2, (8 - 3 + j) % 8))
        assert g.down(g.vertex(2, j)) == g.vertex(0, (j + 3) % 8)


def test_gen_example_counts():
    text = format_edge_list(torus(3, 8, 4))
    lines = text.splitlines()
    assert lines[0] == "p torus 3 8 4"
    assert sum(1 for line in lines if line.startswith("e ")) == 48


@settings(max_examples=40, deadline=None)
@given(good_params())
def test_edge_list_round_trip(p):
    g = build_torus(p)
    text = format_edge_list(g)
    back = parse_edge_list(text)
    assert back.params == p
    assert format_edge_list(back) == text


def test_edge_list_rejects_foreign_edges():
    text = "p torus 3 8 4\ne 0 0 1 1 v\n"
    with pytest.raises(ValueError):
        parse_edge_records(text)
    with pytest.raises(ValueError):
        parse_edge_list("e 0 0 0 1 h\n")
    with pytest.raises(ValueError):
        parse_edge_list("p torus 3 8 4\ne 0 0 0 1 h\n")  # incomplete


def test_classify_examples():
    assert classify((4, 7, 5)).cls is ParityClass.EO_ODD
    assert classify((4, 8, 4)).cls is ParityClass.EE_EVEN
    assert classify((6, 10, 5)).cls is ParityClass.EE_ODD
    assert classify((3, 4, 2)).cls is ParityClass.OE_EVEN
    assert classify((3, 4, 1)).cls is ParityClass.OE_ODD
    assert classify((4, 7, 2)).cls is ParityClass.EO_EVEN
    tag = classify((6, 10, 5))
    assert (tag.n, tag.m, tag.r) == (3, 5, 3)
    with pytest.raises(OddOrder):
        classify((3, 5, 1))


@settings(max_examples=60, deadline=None)
@given(good_params(max_vertices=60))
def test_i_cycles_partition(p):
    g = build_torus(p)
    cyc = i_cycles(g)
    d = gcd(p.r, p.m)
    assert len(cyc) == d
    assert all(len(c) == p.n * p.m // d for c in cyc)
    assert sorted(v for c in cyc for v in c) == list(range(p.num_vertices))
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            assert g.has_edge(a, b) and g.edge_kind(a, b) == "v"
    rows = ii_cycles(g)
    assert len(rows) == p.n and all(len(c) == p.m for c in rows)


def test_column_walk():
    assert column_walk((3, 12, 8), 0) == [0, 8, 4]
    assert column_walk((3, 12, 8), 1) == [1, 9, 5]


@settings(max_examples=40, deadline=None)
@given(good_params())
def test_row_band_is_prism(p):
    g = build_torus(p)
    b = row_band(g, p.n - 1)
    assert b.length == p.m
    for a0, a1, b1, b0 in b.quads:
        assert g.has_edge(a0, a1) and g.has_edge(b0, b1)
        assert g.has_edge(a0, b0) and g.has_edge(a1, b1)


def test_col_band():
    g = torus(4, 8, 4)
    b = col_band(g, 0)
    assert b.length == 4 * 8 // 4
    for a0, a1, b1, b0 in b.quads:
        assert g.has_edge(a0, b0) and g.edge_kind(a0, b0) == "h"
    with pytest.raises(BandUndefined):
        col_band(torus(4, 8, 3), 0)
    with pytest.raises(BandUndefined):
        col_band(g, 4)


def test_star_3_12_8_is_4_9_3():
    sp = star_params((3, 12, 8))
    assert sp.target == TorusParams(4, 9, 3)
    assert star_params(sp.target).target == TorusParams(3, 12, 8)
    assert is_isomorphism(torus(3, 12, 8), torus(4, 9, 3), star_map((3, 12, 8)))


@pytest.mark.parametrize("p", [(3, 12, 8), (4, 8, 2), (3, 4, 4), (4, 6, 3), (5, 6, 4)])
def test_star_map_agrees_with_networkx(p):
    src = build_torus(p)
    dst = build_torus(star_params(p).target)
    assert is_isomorphism(src, dst, star_map(p))
    assert nx.is_isomorphic(nx_graph(src), nx_graph(dst))


def test_star_rejects_bad_mapping():
    g = torus(3, 12, 8)
    h = torus(4, 9, 3)
    ident = tuple(range(36))
    assert not is_isomorphism(g, h, ident)
    assert not is_isomorphism(g, h, ident[:-1])


@settings(max_examples=40, deadline=None)
@given(good_params(), st.integers(-10, 10), st.integers(-10, 10))
def test_translations_are_automorphisms(p, a, b):
    g = build_torus(p)
    sigma = translation(p, a, b)
    assert is_isomorphism(g, g, sigma)


def test_translation_group_size():
    p = TorusParams(3, 4, 2)
    perms = {translation(p, a, b) for a in range(3) for b in range(4)}
    assert len(perms) == 12

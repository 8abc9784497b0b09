import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from morsebranch.complex import COMPLEX_VERTICES, ComplexVertex
from morsebranch.graph import Part
from morsebranch.morse import (
    ASC,
    DESC,
    CoverVertex,
    MarginError,
    Truncation,
    asc_desc_link,
    branch_set,
    dump_level_graph,
    dump_truncation,
    level_graph,
)

PP = ComplexVertex(1, 1)


@pytest.mark.parametrize("t", range(1, 7))
def test_closed_form_counts(t):
    Z = Truncation(t)
    assert (len(Z.vertices), len(Z.edges), len(Z.squares)) == (4 * (2 * t + 1), 144 * t, 72 * (2 * t - 1))


def test_every_edge_changes_level_by_one(Z3):
    for e in Z3.edges:
        a, b = Z3.edge_ends(e)
        assert b.level - a.level in (1, -1)


def test_square_has_one_top_and_one_bottom(Z3):
    for s in Z3.squares:
        levels = sorted(c.level for c in Z3.square_corners(s))
        assert levels == [s.bottom, s.bottom + 1, s.bottom + 1, s.bottom + 2]
        assert Z3.top(s).level == s.bottom + 2 and Z3.bottom(s).level == s.bottom


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.data())
def test_boundary_of_square_is_closed(t, data):
    Z = Truncation(t)
    s = data.draw(st.sampled_from(Z.squares))
    chain = {}
    for e, d in Z.square_boundary(s):
        a, b = Z.edge_ends(e)
        chain[a] = chain.get(a, 0) - d
        chain[b] = chain.get(b, 0) + d
    assert not any(chain.values())


def test_level_graph_of_z1():
    Z0 = level_graph(Truncation(1))
    assert (len(Z0.vertices), len(Z0.edges)) == (4, 72)


def test_level_graph_has_two_components(Z0):
    # the literal "connected, rank 69" is unattainable; see the ledger
    g = nx.MultiGraph()
    g.add_nodes_from(Z0.vertices)
    g.add_edges_from((e.a_mid, e.b_mid) for e in Z0.edges)
    assert nx.number_connected_components(g) == 2 == len(Z0.components)
    assert Z0.cycle_rank == 72 - 4 + 2 == 70
    assert Z0.generator_count == 70


def test_desc_link_example(Z3):
    _, cert = asc_desc_link(Z3, CoverVertex(PP, 2), DESC)
    assert len(cert) == 18
    assert {v.part for v in cert.vertices} == {Part.APlus, Part.BPlus}


def test_asc_link_example(Z3, Z4):
    # the squares above level 2 reach level 4, so Z_3 is one level short
    with pytest.raises(MarginError):
        asc_desc_link(Z3, CoverVertex(PP, 2), ASC)
    _, cert = asc_desc_link(Z4, CoverVertex(PP, 2), ASC)
    assert len(cert) == 18
    assert {v.part for v in cert.vertices} == {Part.AMinus, Part.BMinus}


def test_asc_link_at_top_is_margin_error(Z3):
    with pytest.raises(MarginError):
        asc_desc_link(Z3, CoverVertex(PP, 3), ASC)
    with pytest.raises(MarginError):
        asc_desc_link(Z3, CoverVertex(PP, -2), DESC)


def test_all_admissible_links_in_z4(Z4):
    n = 0
    for v in Z4.vertices:
        for d in (ASC, DESC):
            try:
                Z4.check_margin(v, d)
            except MarginError:
                continue
            _, cert = asc_desc_link(Z4, v, d)
            assert len(cert) == 18
            n += 1
    # levels -2..4 descend, -4..2 ascend
    assert n == 2 * 4 * 7


def test_branch_set():
    assert [b.level for b in branch_set(4)] == [1, 2, 3, 4]
    assert [b.level for b in branch_set(1)] == [1]
    assert branch_set(2)[1].vertex == CoverVertex(PP, 2)


def test_truncation_is_nested_and_shift_invariant(Z3, Z4):
    assert set(Z3.edges) <= set(Z4.edges) and set(Z3.squares) <= set(Z4.squares)
    for e in Z3.edges:
        if e.low + 1 < 3:
            assert Z3.has_edge(Z3.shift(e))


def test_truncation_text(Z3):
    text = dump_truncation(Z3)
    lines = text.splitlines()
    assert lines[:3] == ["morsebranch-truncation v1", "t 3", "counts 28 432 360"]
    assert dump_truncation(Truncation(3)) == text
    assert dump_level_graph(level_graph(Z3)).splitlines()[1:3] == ["vertices 4", "edges 72"]


def test_level_graph_vertices_are_all_types(Z0):
    assert sorted(v.base for v in Z0.vertices) == sorted(COMPLEX_VERTICES)

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from morsebranch.graph import (
    ACYCLIC,
    GAMMA_RULES,
    LITERAL_RULES,
    CertificationError,
    GammaVertex,
    ModGraph,
    Part,
    build_gamma,
    build_link_cover,
    cover_from_weights,
    cycle_certificate,
    dump_graph,
    girth,
    is_bipartite_ab,
    load_gamma_graph,
    sign_subgraph,
    special_cycle,
)
from morsebranch.reports import shortest_cycle_oracle

SIGN_PAIRS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def to_nx(g: ModGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def cycle_graph(n):
    return ModGraph(tuple(range(n)), tuple((i, (i + 1) % n) for i in range(n)))


def test_gamma_counts(gamma):
    assert len(gamma.vertices) == 36
    assert len(gamma.edges) == 72
    assert all(gamma.degree(v) == 4 for v in gamma.vertices)
    assert is_bipartite_ab(gamma)


def test_gamma_girth_matches_networkx(gamma):
    g = girth(gamma)
    assert g >= 5
    assert g == nx.girth(to_nx(gamma)) == len(shortest_cycle_oracle(gamma))
    assert g == 6


def test_literal_rules_have_four_cycles():
    # the rule table as printed closes 4-cycles; see the decisions ledger
    assert girth(build_gamma(LITERAL_RULES)) == 4


def test_girth_of_single_cycle():
    assert girth(cycle_graph(18)) == 18


def test_girth_of_forest_is_sentinel():
    path = ModGraph(tuple(range(5)), tuple((i, i + 1) for i in range(4)))
    assert girth(path) == ACYCLIC


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 14), st.sets(st.tuples(st.integers(0, 13), st.integers(0, 13)), max_size=30))
def test_girth_matches_networkx_on_random_graphs(n, pairs):
    edges = {(u, v) for u, v in pairs if u < n and v < n and u != v}
    g = ModGraph(tuple(range(n)), tuple(edges))
    expected = nx.girth(to_nx(g))
    got = girth(g)
    assert got == (ACYCLIC if expected == float("inf") else expected)


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(
    st.sampled_from(list(GAMMA_RULES)),
    st.lists(st.integers(0, 8), min_size=1, max_size=3),
    min_size=4, max_size=4,
))
def test_girth_on_other_rule_tables(rules):
    g = build_gamma(rules)
    assert girth(g) == nx.girth(to_nx(g))


def test_plus_plus_cycle_order(gamma):
    cert = special_cycle(gamma, 1, 1)
    expected = []
    for a in range(9):
        expected += [GammaVertex(Part.APlus, a), GammaVertex(Part.BPlus, a)]
    assert list(cert.vertices) == expected


@pytest.mark.parametrize("s,t", SIGN_PAIRS)
def test_special_cycles_are_18_cycles(gamma, s, t):
    cert = special_cycle(gamma, s, t)
    assert len(cert) == 18
    sub = to_nx(sign_subgraph(gamma, s, t))
    assert nx.is_connected(sub) and all(d == 2 for _, d in sub.degree())


def test_special_cycle_with_deleted_edge_fails(gamma):
    edge = special_cycle(gamma, 1, 1).vertices[:2]
    with pytest.raises(CertificationError, match="not 2-regular"):
        special_cycle(gamma.without_edges([edge]), 1, 1)


def test_cycle_certificate_rejects_two_triangles():
    g = ModGraph(tuple(range(6)), ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)))
    with pytest.raises(CertificationError, match="not connected"):
        cycle_certificate(g)


def test_cover_p3(gamma):
    cover = build_link_cover(gamma, 3)
    g = to_nx(cover.graph)
    assert g.number_of_nodes() == 108 and nx.is_connected(g)
    assert all(cover.deck(v, 3) == v and cover.deck(v) != v for v in cover.graph.vertices)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_special_cycle_preimages(gamma, p):
    cover = build_link_cover(gamma, p)
    for s, t in [(1, 1), (-1, -1)]:
        cert = cycle_certificate(cover.preimage(sign_subgraph(gamma, s, t)))
        assert len(cert) == 18 * p


def test_trivial_cocycle_gives_copies(gamma):
    cover = cover_from_weights(gamma, 4, {})
    comps = list(nx.connected_components(to_nx(cover.graph)))
    assert len(comps) == 4 and all(len(c) == 36 for c in comps)


def test_cover_rejects_composite_p(gamma):
    with pytest.raises(ValueError):
        build_link_cover(gamma, 4)


def test_graph_text_roundtrip(gamma):
    text = dump_graph(gamma)
    assert text.splitlines()[1:4] == ["vertices 36", "edges 72", "girth 6"]
    assert load_gamma_graph(text) == gamma
    assert dump_graph(load_gamma_graph(text)) == text

import random

import networkx as nx
import pytest

from morsebranch.complex import (
    COMPLEX_VERTICES,
    ComplexEdge,
    SquareCell,
    SquareComplex,
    build_x_gamma,
    canonical_link,
    dump_complex,
    load_x_gamma_squares,
    square_for_cell,
    verify_moussong,
    verify_npc,
    vertex_link,
)
from morsebranch.graph import ModGraph, Part, all_gamma_vertices


def test_counts(X):
    assert (len(X.vertices), len(X.edges), len(X.squares)) == (4, 72, 72)


def test_no_squares_without_edges():
    empty = build_x_gamma(ModGraph(all_gamma_vertices(), ()))
    assert (len(empty.vertices), len(empty.edges), len(empty.squares)) == (4, 72, 0)
    link = canonical_link(empty, COMPLEX_VERTICES[0])
    assert len(link.vertices) == 36 and not link.edges


@pytest.mark.parametrize("v", COMPLEX_VERTICES)
def test_links_equal_gamma(X, gamma, v):
    link = canonical_link(X, v)
    assert link == gamma
    assert len(link.vertices) == 36 and len(link.edges) == 72


def test_x_gamma_passes_both_checks(X):
    assert verify_npc(X).passed
    assert verify_moussong(X).passed


def _edge(X, factor, label, co):
    return X.edge_labels.index(ComplexEdge(factor, label, co))


def plant_triangle(X, gamma, rng):
    """A square with two A-edges meeting at (+,+): its corner joins two
    A-labels at distance 2 in Γ, closing a triangle through their common
    neighbour."""
    b = rng.choice([v for v in gamma.vertices if v.part in (Part.BMinus, Part.BPlus)])
    a1, a2 = rng.sample(gamma.neighbors(b), 2)
    e1, e2 = _edge(X, "A", a1, 1), _edge(X, "A", a2, 1)
    names = {str(X.edge_labels[e1]), str(X.edge_labels[e2])}
    return X.with_squares([[(e1, 1), (e2, -1), (e1, 1), (e2, -1)]]), names


def plant_double(X, rng):
    j = rng.randrange(len(X.squares))
    return X.with_squares([X.squares[j]])


def plant_four_cycle(X, gamma, rng):
    """A square for a non-edge (a, b) at distance 3 in Γ."""
    dist = dict(nx.all_pairs_shortest_path_length(nx.Graph(list(gamma.edges))))
    A = [v for v in gamma.vertices if v.part.factor == "A"]
    while True:
        a = rng.choice(A)
        far = [b for b, d in dist[a].items() if d == 3]
        if far:
            b = rng.choice(far)
            return X.with_squares([square_for_cell(X, SquareCell(a, b))]), {str(a), str(b)}


def test_npc_catches_100_planted(X, gamma):
    rng = random.Random(7)
    for i in range(100):
        if i % 2:
            Y, names = plant_triangle(X, gamma, rng)
            rep = verify_npc(Y)
            tri = [w for w in rep.witnesses if w["kind"] == "triangle"]
            assert any(names <= set(w["cycle"]) for w in tri)
        else:
            rep = verify_npc(plant_double(X, rng))
            assert any(w["kind"] == "multi-edge" for w in rep.witnesses)
        assert not rep.passed


def test_moussong_catches_100_planted(X, gamma):
    rng = random.Random(11)
    for _ in range(100):
        Y, names = plant_four_cycle(X, gamma, rng)
        rep = verify_moussong(Y)
        assert not rep.passed
        assert all(w["kind"] == "4-cycle" for w in rep.witnesses)
        # the planted square stays simple and triangle-free
        assert verify_npc(Y).passed


def test_torus_link_is_a_four_cycle():
    torus = SquareComplex(("v",), (("v", "v"), ("v", "v")), (((0, 1), (1, 1), (0, -1), (1, -1)),))
    link = vertex_link(torus, "v")
    assert len(link.vertices) == 4 and len(link.edges) == 4
    assert not verify_moussong(torus).passed


def test_inconsistent_square_rejected(X):
    with pytest.raises(ValueError):
        X.with_squares([[(0, 1), (0, 1), (0, 1), (0, 1)]])


def test_complex_text_roundtrip(X):
    text = dump_complex(X)
    assert text.splitlines()[1] == "counts 4 72 72"
    assert load_x_gamma_squares(text) == list(X.square_labels)

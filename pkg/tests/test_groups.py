from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from morsebranch.groups import (
    Hom,
    Perm,
    abelianization,
    evaluate,
    nontriviality_certificate,
    order_profile,
    toy_presentation,
    vtf_witness_search,
)
from morsebranch.relators import presentation
from morsebranch.words import MarkedPresentation

X = ((0, 1),)


def perms(n):
    return st.permutations(list(range(n))).map(Perm)


def fold(h, w):
    """Left-to-right oracle on raw tuples."""
    cur = list(range(h.degree))
    for g, e in w:
        img = list(h.images[g].images)
        if e < 0:
            inv = [0] * len(img)
            for i, x in enumerate(img):
                inv[x] = i
            img = inv
        cur = [img[i] for i in cur]
    return tuple(cur)


def order(t):
    k, cur = 1, t
    ident = tuple(range(len(t)))
    while cur != ident:
        cur = tuple(t[i] for i in cur)
        k += 1
    return k


def test_empty_word_is_identity():
    h = Hom(3, (Perm.parse("(0 1 2)", 3),))
    assert evaluate(h, ()).is_identity()


def test_three_cycle_cubed():
    h = Hom(3, (Perm.parse("(0 1 2)", 3),))
    assert evaluate(h, X * 3).is_identity()
    assert not evaluate(h, X * 2).is_identity()


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(perms(n), min_size=3, max_size=3),
    st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), min_size=20, max_size=20),
)))
def test_evaluate_matches_fold(data):
    imgs, w = data
    h = Hom(imgs[0].degree, tuple(imgs))
    assert evaluate(h, w).images == fold(h, w)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7).flatmap(perms))
def test_perm_text_roundtrip(p):
    assert Perm.parse(str(p), p.degree) == p
    assert p.order() == order(p.images)


def test_hom_json_roundtrip():
    h = Hom(4, (Perm.parse("(0 3 1 2)", 4), Perm.identity(4)))
    assert Hom.from_json(h.to_json()) == h
    assert h.to_json()["images"] == ["(0 3 1 2)", "()"]


def test_trivial_hom_profile():
    P = presentation(1, 2, (1,))
    prof = order_profile(P, Hom.trivial(3, P.generator_count))
    assert prof.all_satisfied and prof.O == frozenset()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_p_cycle_profile(p):
    P = toy_presentation([X], 1, p, [True])
    h = Hom(p, (Perm.from_cycles(p, [list(range(p))]),))
    prof = order_profile(P, h)
    assert prof.all_satisfied and prof.O == {1}


def test_transposition_unsatisfied_for_p3():
    P = toy_presentation([X], 1, 3, [True])
    prof = order_profile(P, Hom(2, (Perm.parse("(0 1)", 2),)))
    assert not prof.all_satisfied


def test_search_examples():
    res = vtf_witness_search(toy_presentation([X], 1, 2, [True]), 2, 10**4)
    assert res.status == "witness" and str(res.hom.images[0]) == "(0 1)"
    for n in (1, 2, 3):
        res = vtf_witness_search(toy_presentation([X], 1, 2, [False]), n, 10**4)
        assert res.status == "witness" and res.hom.images[0].is_identity()
    res = vtf_witness_search(toy_presentation([X], 1, 3, [True]), 2, 10**4)
    assert res.status == "exhausted"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_power_family(p):
    # <x | x^p>: the base word x carries the p-power flag
    P = toy_presentation([X], 1, p, [True])
    res = vtf_witness_search(P, p, 10**5)
    assert res.status == "witness" and order_profile(P, res.hom).O == P.W
    for n in range(1, p):
        assert vtf_witness_search(P, n, 10**5).status == "exhausted"


def brute_force(P, n):
    """Does some hom to S_n satisfy every relator with O == W?"""
    group = [Perm(q) for q in permutations(range(n))]
    for imgs in product(group, repeat=P.generator_count):
        h = Hom(n, imgs)
        ok, O = True, set()
        for r in P.relators:
            k = order(fold(h, r.word))
            if k != 1 and not (r.flagged and k == P.p):
                ok = False
                break
            if r.flagged and k == P.p:
                O.add(r.level)
        if ok and O == set(P.W):
            return True
    return False


words = st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 2), st.lists(st.tuples(words, st.booleans()), min_size=1, max_size=3),
    st.sampled_from([2, 3]), st.integers(1, 4),
)
def test_search_matches_exhaustive_enumeration(gens, rels, p, n):
    rels = [([(g % gens, e) for g, e in w], f) for w, f in rels]
    P = toy_presentation([w for w, _ in rels], gens, p, [f for _, f in rels])
    res = vtf_witness_search(P, n, 10**7)
    assert res.status in ("witness", "exhausted")
    assert (res.status == "witness") == brute_force(P, n)
    if res.hom is not None:
        prof = order_profile(P, res.hom)
        assert prof.all_satisfied and prof.O == P.W


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 2), st.lists(st.tuples(words, st.booleans()), min_size=1, max_size=3),
       st.sampled_from([2, 3]), st.data())
def test_order_profile_matches_oracle(gens, rels, p, data):
    rels = [([(g % gens, e) for g, e in w], f) for w, f in rels]
    P = toy_presentation([w for w, _ in rels], gens, p, [f for _, f in rels])
    n = data.draw(st.integers(1, 4))
    h = Hom(n, tuple(data.draw(perms(n)) for _ in range(gens)))
    prof = order_profile(P, h)
    for r, ok in zip(P.relators, prof.satisfied):
        k = order(fold(h, r.word))
        assert ok == (k == 1 or (r.flagged and p % k == 0))
        assert prof.orders[r.name] == k
        if r.flagged and ok:
            assert k in (1, p)


def test_nontriviality_examples():
    P = toy_presentation([X], 1, 2, [True])
    cert = nontriviality_certificate(P, [1], 2, 10**4)
    assert str(cert[1].images[0]) == "(0 1)"
    P = toy_presentation([X], 1, 2, [False])
    for n in (1, 2, 3, 4):
        assert nontriviality_certificate(P, [1], n, 10**4) == {1: None}


def test_abelianization_examples():
    assert abelianization(MarkedPresentation(70, (), 2)).free_rank == 70
    P = toy_presentation([X], 2, 2, [False], [None])
    ab = abelianization(P)
    assert ab.snf.invariants == (1,) and ab.free_rank == 1


def test_flagged_relator_scales_row():
    P = toy_presentation([X], 1, 3, [True])
    ab = abelianization(P)
    assert ab.snf.invariants == (3,) and ab.snf.torsion == (3,) and ab.free_rank == 0


def test_real_abelianization():
    ab = abelianization(presentation(3, 2, (1, 3)))
    assert (ab.free_rank, ab.snf.rank, ab.snf.torsion) == (66, 4, ())

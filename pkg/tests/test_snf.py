import random
from itertools import combinations
from math import gcd

from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from morsebranch.snf import ColumnLattice, smith_normal_form, smith_normal_form_sparse


def det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def minors_oracle(a):
    """Invariant factors d_k / d_(k-1) from gcds of k x k minors."""
    rows, cols = len(a), len(a[0])
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                g = gcd(g, det([[a[i][j] for j in c] for i in r]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


def test_zero_matrix():
    assert smith_normal_form([[0, 0], [0, 0]]).invariants == ()


def test_diag_2_3():
    assert smith_normal_form([[2, 0], [0, 3]]).invariants == (1, 6)


def test_100_random_4x6_against_minors():
    rng = random.Random(2024)
    for _ in range(100):
        a = [[rng.randint(-5, 5) for _ in range(6)] for _ in range(4)]
        inv = smith_normal_form(a).invariants
        assert inv == minors_oracle(a)
        assert all(y % x == 0 for x, y in zip(inv, inv[1:]))


small = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(small)
def test_matches_sympy(a):
    ours = smith_normal_form(a).invariants
    s = sympy_snf(Matrix(a), domain=ZZ)
    diag = [abs(s[i, i]) for i in range(min(s.shape)) if s[i, i] != 0]
    assert ours == tuple(diag)
    assert ours == minors_oracle(a)


@settings(max_examples=60, deadline=None)
@given(small)
def test_sparse_agrees_with_dense(a):
    rows = [{j: v for j, v in enumerate(r) if v} for r in a]
    assert smith_normal_form_sparse(rows, len(a[0])).invariants == smith_normal_form(a).invariants


@settings(max_examples=100, deadline=None)
@given(small, st.data())
def test_column_span_membership(a, data):
    cols = [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(len(a[0]))]
    lattice = ColumnLattice(cols, len(a))
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(cols), max_size=len(cols)))
    v = {}
    for c, col in zip(coeffs, cols):
        for i, x in col.items():
            v[i] = v.get(i, 0) + c * x
    assert lattice.contains(v)


def test_column_span_excludes_half():
    lattice = ColumnLattice([{0: 2}], 1)
    assert lattice.contains({0: 4}) and not lattice.contains({0: 1})

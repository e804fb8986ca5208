import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from gyrogroups.intlin import (Subgroup, abelian_invariants_from_relations, invariant_factors,
                               smith_normal_form)

small_mats = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(small_mats)
def test_snf_matches_sympy_and_transforms(A):
    diag, U, V, Vi = smith_normal_form(A)
    U, V, Vi, M = Matrix(U), Matrix(V), Matrix(Vi), Matrix(A)
    D = U * M * V
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D[i, j] == 0
    assert [D[i, i] for i in range(min(D.shape))] == diag
    assert V * Vi == Matrix.eye(V.rows)
    assert abs(U.det()) == 1
    for a, b in zip(diag, diag[1:]):
        assert (b % a == 0) if a else b == 0
    ref = sympy_snf(M, domain=ZZ)
    ref_diag = sorted(abs(ref[i, i]) for i in range(min(ref.shape)))
    assert sorted(diag) == ref_diag


def test_invariant_factors_examples():
    assert invariant_factors([[2, 0], [0, 3]]) == [6]
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert abelian_invariants_from_relations([[2, 0]], 2) == [2, 0]
    assert abelian_invariants_from_relations([], 1) == [0]


def _brute_span(gens, moduli):
    pts = {tuple([0] * len(moduli))}
    frontier = list(pts)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple((a + b) % m for a, b, m in zip(p, g, moduli))
                if q not in pts:
                    pts.add(q)
                    nxt.append(q)
        frontier = nxt
    return pts


moduli_st = st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=3)


@settings(max_examples=80, deadline=None)
@given(moduli_st, st.data())
def test_subgroup_generation_and_membership(moduli, data):
    k = data.draw(st.integers(0, 3))
    gens = [[data.draw(st.integers(0, m - 1)) for m in moduli] for _ in range(k)]
    S = Subgroup.generated(np.array(gens, dtype=np.int64).reshape(k, len(moduli)), moduli)
    span = _brute_span(gens, moduli)
    assert S.order() == len(span)
    for v in itertools.product(*[range(m) for m in moduli]):
        assert S.contains(v) == (v in span)


@settings(max_examples=60, deadline=None)
@given(moduli_st, st.data())
def test_kernel_matches_brute_force(moduli, data):
    n = data.draw(st.sampled_from([2, 3, 4, 6, 12]))
    # entries must define a homomorphism: n | a * m
    row = []
    for m in moduli:
        step = n // np.gcd(n, m)
        row.append(step * data.draw(st.integers(0, n)) % n)
    K = Subgroup.whole(moduli).kernel(np.array([row]), [n])
    brute = [v for v in itertools.product(*[range(m) for m in moduli])
             if sum(a * b for a, b in zip(row, v)) % n == 0]
    assert K.order() == len(brute)
    assert all(K.contains(v) for v in brute)


@settings(max_examples=60, deadline=None)
@given(moduli_st, st.data())
def test_quotient_classes_are_consistent(moduli, data):
    k = data.draw(st.integers(0, 2))
    gens = [[data.draw(st.integers(0, m - 1)) for m in moduli] for _ in range(k)]
    top = Subgroup.whole(moduli)
    sub = Subgroup.generated(np.array(gens, dtype=np.int64).reshape(k, len(moduli)), moduli)
    Q = top.quotient(sub)
    assert Q.order() * sub.order() == top.order()
    classes = {}
    for v in itertools.product(*[range(m) for m in moduli]):
        classes.setdefault(Q.class_of(v), []).append(v)
    assert len(classes) == Q.order()
    for members in classes.values():
        base = np.array(members[0])
        for w in members[1:]:
            assert sub.contains((np.array(w) - base) % moduli)
    for coords, rep in Q.elements():
        assert Q.class_of(rep) == tuple(c % d for c, d in zip(coords, Q.factors))


def test_quotient_of_subgroups():
    moduli = [4, 4]
    top = Subgroup.generated([[2, 0], [0, 1]], moduli)
    sub = Subgroup.generated([[2, 2]], moduli)
    Q = top.quotient(sub)
    assert Q.order() == 4
    assert sorted(Q.factors) == [4]


def test_kernel_rejects_non_homomorphism():
    with pytest.raises(ValueError):
        Subgroup.whole([2]).kernel([[1]], [3])

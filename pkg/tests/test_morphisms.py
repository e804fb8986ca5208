import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gyrogroups import catalog
from gyrogroups.errors import InvalidParameter, NotNormal
from gyrogroups.groups import GroupMap, central_extension, cyclic, extension_from_normal, symmetric
from gyrogroups.loops import circ_n
from gyrogroups.morphisms import (CRITERIA, are_gyro_isomorphic, enumerate_gyro_homs, find_gyro_splitting,
                                  first_isomorphism_check, ghom_left_exactness, gyro_hom_violations,
                                  gyro_isomorphism_search, gyro_splittings, is_gyro_hom, is_gyro_semidirect)

PAIRS = [("Z2", "Z2"), ("Z3", "Z3"), ("Z4", "Z2"), ("S3", "Z2"), ("Z2xZ2", "Z2"), ("S3", "S3"), ("Q8", "Z2xZ2")]


def brute_gyro_homs(G, K):
    A, B = circ_n(G, 1).op, circ_n(K, 1).op
    out = []
    for vals in itertools.product(range(K.order), repeat=G.order - 1):
        f = np.array((0,) + vals)
        if np.array_equal(f[A], B[f[:, None], f[None, :]]):
            out.append(f)
    return out


@pytest.mark.parametrize("g,k", PAIRS)
def test_enumeration_matches_brute_force(g, k):
    G, K = catalog.get_group(g), catalog.get_group(k)
    got = sorted(m.values.tolist() for m in enumerate_gyro_homs(G, K).maps)
    ref = sorted(f.tolist() for f in brute_gyro_homs(G, K))
    assert got == ref


def test_ghom_invariants():
    r = enumerate_gyro_homs(catalog.get_group("S3"), cyclic(2))
    assert len(r) == 2 and r.invariants == [2]
    r = enumerate_gyro_homs(catalog.get_group("Z2xZ2"), cyclic(2))
    assert r.invariants == [2, 2]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["S3", "Q8", "Z4", "Z2xZ2", "D4"]), st.sampled_from(["Z2", "Z4", "S3", "Q8"]), st.data())
def test_three_criteria_agree(g, k, data):
    G, K = catalog.get_group(g), catalog.get_group(k)
    vals = data.draw(st.lists(st.integers(0, K.order - 1), min_size=G.order, max_size=G.order))
    f = GroupMap(G, K, np.array(vals))
    verdicts = {c: is_gyro_hom(f, c).verdict for c in CRITERIA}
    assert len(set(verdicts.values())) == 1, verdicts


def test_group_homs_and_antihoms():
    S = symmetric(3)
    assert is_gyro_hom(GroupMap(S, S, np.arange(6))).verdict
    assert is_gyro_hom(GroupMap(S, cyclic(1), np.zeros(6, dtype=np.int64))).verdict
    with pytest.raises(InvalidParameter):
        gyro_hom_violations(GroupMap(S, S, np.arange(6)), "nope")


def test_gyro_isomorphism():
    Q8, D4 = catalog.get_group("Q8"), catalog.get_group("D4")
    assert not gyro_isomorphism_search(Q8, D4).found
    f = are_gyro_isomorphic(Q8, Q8)
    assert f is not None and is_gyro_hom(f).verdict
    # (E27, o1) and (Z3^3, o1) are both elementary abelian
    assert are_gyro_isomorphic(catalog.get_group("E27"), catalog.get_group("Z3xZ3xZ3")) is not None
    assert are_gyro_isomorphic(catalog.get_group("M27"), catalog.get_group("Z3xZ3xZ3")) is None


def test_first_isomorphism():
    for m in enumerate_gyro_homs(catalog.get_group("Q8"), catalog.get_group("Z2xZ2")).maps:
        assert first_isomorphism_check(m).verdict


def test_semidirect():
    S = symmetric(3)
    A3 = [int(i) for i in np.flatnonzero(S.element_orders != 2)]
    t = [0, int(np.flatnonzero(S.element_orders == 2)[0])]
    r = is_gyro_semidirect(S, A3, t)
    assert r.verdict and r.transversal
    bad = is_gyro_semidirect(S, [0], [0, 1, 2])
    assert not bad.verdict and bad.reason
    with pytest.raises(NotNormal):
        is_gyro_semidirect(S, t, A3)


def test_splittings():
    E27 = central_extension(catalog.get_group("E27"))
    for method in ("linear", "search"):
        r = find_gyro_splitting(E27, method=method)
        assert r.found and r.certificate["certified"]
    Z4 = catalog.get_group("Z4")
    E = extension_from_normal(Z4, [0, 2])
    assert not find_gyro_splitting(E, "linear").found
    assert not find_gyro_splitting(E, "search").found
    U5 = central_extension(catalog.get_group("U3Z5"))
    assert not find_gyro_splitting(U5, "search").found
    assert len(gyro_splittings(E27, limit=None)) > 1


def test_left_exactness():
    E = central_extension(catalog.get_group("Q8"))
    assert ghom_left_exactness(E, cyclic(2)).exact

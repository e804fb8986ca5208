import numpy as np
import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from gyrogroups import catalog
from gyrogroups.boxed import (boxed_square, free_morphism_to, gyro_schur_multiplier, hom_from_pair_values,
                              homs_from_square, relation_rows, u_group)
from gyrogroups.cohomology import classify_gext, cocycle_spaces, trivial_kernel
from gyrogroups.errors import CapExceeded, NotAHomomorphism
from gyrogroups.groups import GroupMap, cyclic, identity_map, isomorphism_search

G = catalog.get_group


def exact_invariants(K):
    """Torsion invariants of K box K from an exact integer Smith form of the full relation matrix."""
    n = K.order
    rows = set()
    for r in relation_rows(K):
        v = [0] * (n * n)
        for k, c in r.items():
            v[k] += c
        if any(v):
            rows.add(tuple(v))
    inv = invariant_factors(Matrix(sorted(rows)), domain=ZZ)
    assert len(inv) == n * n          # no free part
    return sorted(int(abs(d)) for d in inv if abs(d) != 1)


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Z3xZ3", "Z9"])
def test_boxed_square_matches_exact_smith_form(name):
    K = G(name)
    assert boxed_square(K).factors == exact_invariants(K)


@pytest.mark.parametrize("name", ["Z2xZ2", "Z3xZ3", "S3", "Q8"])
def test_exponent_bound_is_sufficient(name):
    K = G(name)
    a = boxed_square(K)
    b = boxed_square(K, exponent_bound=2 * a.exponent_bound)
    assert a.factors == b.factors


def test_frozen_values():
    # Z3xZ3 and E27 give Z3; the other small groups give 0
    assert boxed_square(G("Z2")).order == 1
    assert [boxed_square(cyclic(n)).order for n in range(1, 9)] == [1] * 8
    assert boxed_square(G("Z3xZ3")).factors == [3]
    assert boxed_square(G("E27")).factors == [3]
    assert boxed_square(G("Q8")).factors == []


def test_relations_hold_and_cap():
    BS = boxed_square(G("Z3xZ3"))
    assert BS.relation_violations() == {"i": 0, "ii": 0, "iii": 0}
    with pytest.raises(CapExceeded):
        boxed_square(G("Z3xZ3xZ3xZ3"))


def test_homs_out_of_square():
    BS = boxed_square(G("Z3xZ3"))
    homs = homs_from_square(BS, cyclic(3))
    assert len(homs) == 3
    assert len(homs_from_square(BS, cyclic(2))) == 1
    zero = np.zeros((9, 9), dtype=np.int64)
    assert hom_from_pair_values(BS, cyclic(3), zero) is not None
    bad = zero.copy()
    bad[1, 1] = 1
    assert hom_from_pair_values(BS, cyclic(3), bad) is None
    assert len({h.tobytes() for h in homs}) == 3


def test_u_group_is_central_extension():
    for name in ("Z2xZ2", "Z3xZ3", "S3"):
        BS = boxed_square(G(name))
        U = u_group(BS)
        assert U.central and U.section_certified
        assert U.G.order == BS.order * BS.K.order
        U.extension.validate()


def test_u_z3_squared_is_e27():
    U = u_group(boxed_square(G("Z3xZ3")))
    assert isomorphism_search(U.G, G("E27")) is not None


def test_freeness_onto_gyro_split_extensions():
    K = G("Z3xZ3")
    BS = boxed_square(K)
    U = u_group(BS)
    for c in classify_gext(trivial_kernel(K, cyclic(3))):
        m = free_morphism_to(BS, c.extension, identity_map(K), U)
        assert m.commutes and m.mu_is_hom


def test_free_morphism_needs_a_gyro_hom():
    K = G("S3")
    BS = boxed_square(K)
    c = classify_gext(trivial_kernel(K, cyclic(2)))[0]
    nu = GroupMap(K, K, np.array([0, 1, 1, 1, 1, 1]))
    with pytest.raises(NotAHomomorphism):
        free_morphism_to(BS, c.extension, nu)


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z2xZ2", "Z3xZ3", "S3", "Q8", "D4"])
def test_schur_agrees_with_gh2(name):
    r = gyro_schur_multiplier(G(name))
    assert r.agree
    assert r.gh2_factors == list(cocycle_spaces(trivial_kernel(G(name), cyclic(r.modulus))).GH2.factors)


def test_schur_frozen():
    assert gyro_schur_multiplier(G("Z3xZ3")).order == 3
    r = gyro_schur_multiplier(G("E27"))
    assert r.order == 1 and r.agree

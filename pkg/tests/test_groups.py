import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from gyrogroups import catalog
from gyrogroups.errors import CapExceeded, NoIdentity, NotAssociative, NotNormal
from gyrogroups.groups import (GroupMap, abelian_decomposition, abelian_group, abelian_invariants,
                               alternating, automorphisms, build_from_permutations, build_from_table,
                               center, central_extension, commutator_subgroup, cyclic, dihedral,
                               direct_product, extension_from_normal, extraspecial27, heisenberg_mod_p,
                               is_central_by_2_engel, isomorphism_search, nilpotency_class,
                               quaternion8, quotient_with_map, subgroup_closure, symmetric)
from gyrogroups.loops import circ_n


def test_builders_orders_and_invariants():
    assert cyclic(7).order == 7
    assert dihedral(4).order == 8 and not dihedral(4).is_abelian
    assert quaternion8().exponent == 4
    assert heisenberg_mod_p(5).order == 125
    assert extraspecial27(3).exponent == 3
    assert extraspecial27(9).exponent == 9
    assert symmetric(4).order == 24
    assert alternating(5).order == 60
    assert abelian_invariants(direct_product(cyclic(2), cyclic(4))) == [2, 4]
    assert abelian_invariants(direct_product(cyclic(2), cyclic(3))) == [6]


def test_centers_and_commutators():
    assert len(center(quaternion8())) == 2
    assert len(center(dihedral(4))) == 2
    assert len(center(symmetric(3))) == 1
    assert len(center(extraspecial27(3))) == 3
    assert len(commutator_subgroup(symmetric(3))) == 3
    assert len(commutator_subgroup(alternating(4))) == 4
    assert nilpotency_class(quaternion8()) == 2
    assert nilpotency_class(symmetric(3)) is None


def test_permutation_closure_matches_sympy():
    gens = [[[0, 1, 2, 3, 4]], [[0, 1, 2]]]
    G = build_from_permutations(5, gens)
    ref = PermutationGroup([Permutation([[0, 1, 2, 3, 4]], size=5), Permutation([[0, 1, 2]], size=5)])
    assert G.order == ref.order() == 60
    ref_orders = sorted(Permutation(list(p)).order() for p in np.asarray(G.perms))
    assert sorted(G.element_orders.tolist()) == ref_orders


def test_permutation_product_is_left_to_right():
    G = build_from_permutations(3, [[[0, 1]], [[1, 2]]])
    perms = np.asarray(G.perms)
    for a in range(G.order):
        for b in range(G.order):
            assert np.array_equal(perms[G.mul[a, b]], perms[b][perms[a]])


def test_table_validation():
    with pytest.raises(NotAssociative):
        build_from_table(None, circ_n(symmetric(3), 1).op)
    with pytest.raises(NoIdentity):
        build_from_table(None, [[1, 0], [1, 0]])


def test_cap_raises():
    with pytest.raises(CapExceeded):
        abelian_group([4096, 2])


def test_isomorphism_search():
    assert isomorphism_search(quaternion8(), dihedral(4)) is None
    assert isomorphism_search(cyclic(4), direct_product(cyclic(2), cyclic(2))) is None
    f = isomorphism_search(cyclic(6), direct_product(cyclic(2), cyclic(3)))
    assert f is not None and f.is_homomorphism() and f.is_injective()
    assert isomorphism_search(extraspecial27(3), extraspecial27(9)) is None


def test_automorphism_counts():
    # |Aut| of Z8, Z2^2, S3, Q8, D4
    counts = [len(automorphisms(G)) for G in
              (cyclic(8), direct_product(cyclic(2), cyclic(2)), symmetric(3), quaternion8(), dihedral(4))]
    assert counts == [4, 6, 6, 24, 8]


def test_central_extension_of_e27():
    E = central_extension(extraspecial27(3))
    E.validate()
    assert (E.H.order, E.G.order, E.K.order) == (3, 27, 9)
    assert E.is_central()


def test_quotient_rejects_non_normal():
    S = symmetric(3)
    two = [0, int(np.flatnonzero(S.element_orders == 2)[0])]
    with pytest.raises(NotNormal):
        quotient_with_map(S, two)


def test_central_by_2_engel():
    assert is_central_by_2_engel(quaternion8())
    assert is_central_by_2_engel(heisenberg_mod_p(3))
    assert not is_central_by_2_engel(symmetric(3))


factor_lists = st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=3).filter(
    lambda fs: int(np.prod(fs)) <= 144)


@settings(max_examples=40, deadline=None)
@given(factor_lists, st.data())
def test_quotient_map_is_homomorphism(factors, data):
    G = abelian_group(factors)
    seeds = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    N = subgroup_closure(G, [0] + seeds)
    Q, pi = quotient_with_map(G, N)
    assert Q.order * len(N) == G.order
    assert pi.is_homomorphism() and pi.is_surjective()
    assert np.array_equal(pi.kernel(), np.sort(N))
    E = extension_from_normal(G, N)
    E.validate()


@settings(max_examples=30, deadline=None)
@given(factor_lists)
def test_abelian_decomposition_is_isomorphism(factors):
    G = abelian_group(factors)
    dec = abelian_decomposition(G)
    assert int(np.prod(dec.moduli)) == G.order
    back = dec.elements(dec.coords)
    assert np.array_equal(back, np.arange(G.order))
    x, y = G.order // 2, G.order - 1
    s = (dec.coords[x] + dec.coords[y]) % dec.moduli
    assert dec.element(s) == G.mul[x, y]


def test_catalog_groups_have_consistent_tables():
    for G in catalog.catalog_groups():
        assert G.mul.shape == (G.order, G.order)
        assert np.all(G.mul[0] == np.arange(G.order))
        assert GroupMap(G, G, np.arange(G.order)).is_homomorphism()

"""Tests for simplicial vector spaces, Dold-Kan and the shuffle map"""

import pytest

from src.core.exactlin import ONE, BasedSpace, LinearMap, is_injective, is_surjective
from src.core.simplicial import (ChainComplex, SimplicialMap, TruncatedSimplicialVS, check_structure,
                                 cosimplicial_K, cosimplicial_N, dold_kan_dimension, dold_kan_K, dold_kan_unit,
                                 dual_em_coassociativity_violations, em_chain_map_violations, em_shuffle,
                                 em_symmetry_violations, is_fibration, is_weak_equivalence, normalized_chains,
                                 random_chain_complex, random_cochain_complex, random_simplicial_vs, shift)
from src.utils.exceptions import AlmostInput, NegativeDegree


def interval_complex():
    """``b -> a`` in degrees 1 and 0"""
    C0, C1 = BasedSpace(("a",)), BasedSpace(("b",))
    return ChainComplex([C0, C1], {1: LinearMap(C1, C0, {"b": {"a": ONE}})})


def test_chain_complex_homology():
    C = interval_complex()
    assert C.square_zero_violations() == []
    assert C.homology_dims(2) == [0, 0]


def test_shift_moves_degrees():
    C = interval_complex()
    shifted = shift(C, 1)
    assert shifted.dims() == [0, 1, 1]
    assert shift(shifted, -1).dims() == [1, 1]
    with pytest.raises(NegativeDegree):
        shift(C, -1)


def test_constant_object_has_trivial_moore_complex():
    V = TruncatedSimplicialVS.constant(BasedSpace(("x", "y")), 3)
    assert check_structure(V) == []
    N = normalized_chains(V)
    assert N.dims() == [2, 0, 0, 0]


def test_dold_kan_dimensions():
    C = interval_complex()
    K = dold_kan_K(C, 3)
    assert [level.dim for level in K.levels] == [dold_kan_dimension(C, n) for n in range(3)] + [4]
    assert dold_kan_dimension(C, 2) == 3
    assert check_structure(K) == []


def test_normalization_inverts_k():
    C = interval_complex()
    assert normalized_chains(dold_kan_K(C)).same_matrices(C)


@pytest.mark.parametrize("seed", [7, 8, 9])
def test_dold_kan_round_trips_on_random_inputs(seed):
    C = random_chain_complex(seed, 4, 3)
    assert C.square_zero_violations() == []
    assert normalized_chains(dold_kan_K(C)).same_matrices(C)

    V = random_simplicial_vs(seed, 3, 2)
    assert check_structure(V) == []
    unit = dold_kan_unit(V)
    assert unit.naturality_violations() == []
    assert all(is_injective(f) and is_surjective(f) for f in unit.components)


@pytest.mark.parametrize("seed", [7, 11])
def test_cosimplicial_round_trip(seed):
    D = random_cochain_complex(seed, 3, 3)
    A = cosimplicial_K(D)
    assert check_structure(A) == []
    assert cosimplicial_N(A).same_matrices(D)


def test_almost_objects_have_no_d0():
    V = TruncatedSimplicialVS.constant(BasedSpace(("x",)), 2).forget_d0()
    with pytest.raises(AlmostInput):
        V.face(1, 0)
    with pytest.raises(AlmostInput):
        normalized_chains(V)


def test_em_shuffle_in_degree_zero_is_tensor_product():
    V = TruncatedSimplicialVS.constant(BasedSpace(("x",)), 2)
    W = TruncatedSimplicialVS.constant(BasedSpace(("y",)), 2)
    EM = em_shuffle(V, W, 0, 0)
    assert EM.source.dim == 1 and EM.target.dim == 1
    assert is_injective(EM)


def test_em_identities_on_random_inputs():
    V, W = random_simplicial_vs(3, 3, 1), random_simplicial_vs(4, 3, 1)
    assert em_chain_map_violations(V, W, 3) == []
    assert em_symmetry_violations(V, W, 3) == []


def test_dual_em_is_coassociative():
    A, B, C = (random_simplicial_vs(seed, 2, 1).dual() for seed in (5, 6, 7))
    assert dual_em_coassociativity_violations(A, B, C, 2) == []


def test_identity_is_fibration_and_weak_equivalence():
    V = dold_kan_K(interval_complex(), 2)
    identity = SimplicialMap(V, V, [LinearMap.identity(level) for level in V.levels])
    assert identity.naturality_violations() == []
    assert is_fibration(identity)
    assert is_weak_equivalence(identity)


def test_zero_map_onto_contractible_object():
    V = dold_kan_K(interval_complex(), 2)
    Z = TruncatedSimplicialVS.constant(BasedSpace(()), 2)
    to_zero = SimplicialMap(V, Z, [LinearMap.zero(level, Z.levels[n]) for n, level in enumerate(V.levels)])
    assert is_fibration(to_zero)
    assert is_weak_equivalence(to_zero)
    from_zero = SimplicialMap(Z, V, [LinearMap.zero(Z.levels[n], level) for n, level in enumerate(V.levels)])
    assert not is_fibration(from_zero)

"""Tests for local algebras, truncated cdgas, K_alg and D*"""

import pytest

from src.core import catalog
from src.core.bar import wbar
from src.core.coalg import TruncatedSymCoalgebra
from src.core.dual import (CdgaTruncated, LambdaAlgebra, TruncatedLocalAlgebra, cotangent_matches, d_star,
                           d_star_plus, dualize, forgetful_compatible, k_alg, k_alg_dimension_check, k_alg_round_trip,
                           lambda_algebra, random_cdga, spf, sym_matches_normalized)
from src.core.exactlin import BasedSpace
from src.core.simplicial import random_simplicial_vs
from src.utils.exceptions import AlmostInput, NotReduced


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_lambda_algebra(n):
    lam = lambda_algebra(n)
    assert sum(lam.dims()) == 2 ** (n + 1)
    assert len(lam.basis) == 2 ** (n + 1)
    assert lam.square_violations() == []


def test_lambda_products():
    assert LambdaAlgebra.sorted_product([1, 0]) == (-1, (0, 1))
    assert LambdaAlgebra.sorted_product([0, 2, 1]) == (-1, (0, 1, 2))
    assert LambdaAlgebra.sorted_product([1, 1]) == (0, None)
    lam = LambdaAlgebra(2)
    assert lam.degree((0, 2)) == -2
    assert lam.pushforward([0, 0, 1], (0, 1)) == (0, None)


def test_local_algebra_of_a_sym_coalgebra():
    C = TruncatedSymCoalgebra(BasedSpace(("x", "y")), 2)
    A = TruncatedLocalAlgebra.dual_of(C)
    assert A.violations() == []
    assert len(A.augmentation_ideal()) == C.space.dim - 1


def test_dualize_wbar():
    X = wbar(catalog.build("nonabelian-2dim", 2), 2)
    A = dualize(X)
    assert A.reduced
    assert not A.almost
    assert A.violations() == []
    assert spf(A).structure_violations() == []


def test_d_star_needs_every_coface():
    full = dualize(wbar(catalog.build("abelian-1", 2), 2))
    A = full.forget_d0()
    with pytest.raises(AlmostInput):
        d_star(A, 2, 2)
    assert d_star_plus(A, 2, 2).generators.labels == d_star(full, 2, 2).generators.labels


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_cdga(seed):
    C = random_cdga(seed)
    assert C.violations() == []
    assert C.square_violations() == []
    assert k_alg_dimension_check(C)


def test_k_alg_is_cosimplicial_algebra():
    A = k_alg(random_cdga(2), 2)
    assert A.violations() == []


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(1, 9))
def test_k_alg_round_trip(seed):
    assert k_alg_round_trip(random_cdga(seed))


def test_k_alg_round_trip_keeps_products_decomposable():
    C = CdgaTruncated.free(["a", "b"], {"a": 1, "b": 2}, 2, 3, name="ab")
    D = d_star(k_alg(C), 2, 3)
    assert C.dims_by_bidegree() == {(0, 0): 1, (1, 1): 1, (2, 1): 1, (3, 2): 1}
    assert D.dims_by_bidegree() == C.dims_by_bidegree()
    assert D.indecomposables() == [0, 1, 1, 0]


@pytest.mark.parametrize("name", ["trivial", "abelian-1", "nonabelian-2dim"])
def test_d_star_of_wbar(name):
    A = dualize(wbar(catalog.build(name, 2), 2))
    assert forgetful_compatible(A, 2, 2)
    assert cotangent_matches(A, 2, 2)


@pytest.mark.parametrize("seed", [3, 4, 5])
def test_sym_matches_normalized(seed):
    V = random_simplicial_vs(seed, 2, 2, reduced=True)
    assert V.levels[0].dim == 0
    assert sym_matches_normalized(V, 2, 2)


def test_sym_of_unreduced_space_is_rejected():
    V = random_simplicial_vs(3, 2, 2)
    assert V.levels[0].dim > 0
    with pytest.raises(NotReduced):
        sym_matches_normalized(V, 2, 2)


def test_d_star_of_wbar_with_inhomogeneous_moore_elements():
    D = d_star(dualize(wbar(catalog.build("nonabelian-2dim", 2), 2)), 2, 2)
    pure = D.pure_generators()
    assert sorted(g[0] for g in pure) == [1, 1]
    for g in pure:
        assert all(len(label) == 1 for label in D.moore_generators[g].row)


def test_degree_one_decomposables_are_eliminated():
    D = d_star(dualize(wbar(catalog.build("abelian-1", 2), 2)), 2, 2)
    impure = [g for g in D.generators.labels if g[0] == 1 and g not in D.pure_generators()]
    assert impure
    assert all(w == () or D.is_pure(w) for w in D.basis())

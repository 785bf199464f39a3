"""Tests for the bar constructions and the comparison maps"""

import pytest

from src.core import catalog
from src.core.bar import (ComparisonMaps, WConstruction, canonical_pbw_wbar, eu_coalgebra, phi_vect, phi_wbar_linear,
                          quotient_map, w_total, wbar, wbar_linear)
from src.core.exactlin import rank
from src.core.simplicial import check_structure, random_simplicial_vs


def test_wbar_level_zero_is_the_unit():
    g = catalog.build("nonabelian-2dim", 2)
    W = WConstruction(g, 2)
    assert W.wbar_level(0).space.dim == 1
    assert W.wbar_level(1).space.dim == W.coalgebra(0).space.dim


def test_w_total_extra_degeneracy():
    total = w_total(catalog.build("nonabelian-2dim", 2), 2)
    assert total.extra_degeneracy_violations() == []
    assert total.recursion_violations() == []


def test_wbar_is_a_simplicial_coalgebra():
    X = wbar(catalog.build("nonabelian-2dim", 2), 2)
    assert X.reduced
    assert X.structure_violations() == []
    assert X.comultiplicativity_violations() == []


def test_quotient_map_is_natural():
    g = catalog.build("abelian-1", 2)
    total = w_total(g, 2)
    base = wbar(g, 2, total.construction)
    assert quotient_map(total, base).naturality_violations() == []


def test_linear_wbar():
    V = random_simplicial_vs(4, 2, 2)
    assert check_structure(wbar_linear(V)) == []
    assert phi_wbar_linear(V).naturality_violations() == []


def test_phi_vect_is_a_natural_isomorphism():
    V = random_simplicial_vs(5, 2, 2)
    f = phi_vect(V)
    assert f.naturality_violations() == []
    for component in f.components:
        assert component.source.dim == component.target.dim
        assert rank(component) == component.source.dim


def test_canonical_witness():
    wit = canonical_pbw_wbar(catalog.build("nonabelian-2dim", 2), 2)
    assert wit.almost_violations() == []
    assert wit.comultiplicativity_violations() == []
    assert wit.model.structure_violations() == []


@pytest.mark.parametrize("name", ["abelian-1", "nonabelian-2dim", "crossed-module-shifted"])
def test_eu_coalgebra_square_zero(name):
    assert eu_coalgebra(catalog.build(name, 2), 2).square_violations() == []


def test_theta_is_the_coderivation_of_its_linear_part():
    eu = eu_coalgebra(catalog.build("nonabelian-2dim", 2), 2)
    x0, x1 = (0, "e0"), (0, "e1")
    # the second term picks up the Koszul sign of moving sx1 past sx0
    assert eu.theta((), (x0,)) == {eu.join((x0,), ()): -1}
    assert eu.theta((), (x0, x1)) == {eu.join((x0,), (x1,)): -1, eu.join((x1,), (x0,)): 1}


@pytest.mark.slow
def test_eu_coalgebra_square_zero_on_longer_words():
    assert eu_coalgebra(catalog.build("sl2", 2), 3).square_violations() == []


def test_psi_quadratic_terms_are_symmetric():
    maps = ComparisonMaps(catalog.build("nonabelian-2dim", 2), 2)
    value = maps.psi(2)(((), ((0, "e0"), (0, "e1"))))
    assert value[((1, "e0"), (0, "e1"))] == 1
    assert value[((1, "e1"), (0, "e0"))] == -1
    assert maps.coalgebra_violations() == []


@pytest.mark.parametrize("top", [2, 3])
def test_comparison_maps_nonabelian_levels(top):
    maps = ComparisonMaps(catalog.build("nonabelian-2dim", top), 2)
    assert maps.coalgebra_violations() == []
    assert maps.face_violations() == []


@pytest.mark.parametrize("name", ["abelian-1", "nonabelian-2dim", "crossed-module-id"])
def test_comparison_maps(name):
    maps = ComparisonMaps(catalog.build(name, 2), 2)
    assert maps.closed_form_violations() == []
    assert maps.face_violations() == []
    assert maps.coalgebra_violations() == []
    assert maps.app_map_violations() == []


@pytest.mark.slow
def test_comparison_maps_sl2():
    maps = ComparisonMaps(catalog.build("sl2", 3), 3)
    assert maps.closed_form_violations() == []
    assert maps.face_violations() == []
    assert maps.coalgebra_violations() == []

"""Tests for formal ∞-groups and the differentiation pipeline"""

import pytest

from src.core import catalog
from src.core.coalg import CoalgebraMorphism
from src.core.diffcore import (ExactnessReport, FormalInfinityGroup, canonical_witness, diff, diff_morphism,
                               exactness_check, functoriality_violations, lie_n_report, pbw_normalize, phi_comparison,
                               quadratic_skew, window_stability)
from src.core.exactlin import ONE, rational
from src.utils.exceptions import MalformedJets, NotReduced


def wbar_group(name, top=2, max_word=2):
    g = catalog.build(name, top)
    return FormalInfinityGroup.from_simplicial_coalgebra(canonical_witness(g, max_word).target, g.name)


def test_level_zero_must_be_reduced():
    with pytest.raises(NotReduced):
        FormalInfinityGroup.from_jets([["a"]], 2, {}, {})


def test_wbar_group_is_kan():
    G = wbar_group("abelian-2")
    assert all(G.kan_flags().values())
    assert G.jet_violations() == []
    assert G.prim().levels[1].dim == 2


def test_pbw_normalize_straightens_a_skew():
    G = wbar_group("abelian-2")
    skewed = quadratic_skew(G, G.top_level)
    assert skewed.jet_violations() == []
    witness = pbw_normalize(skewed)
    assert witness.criteria_violations() == []


def test_diff_rejects_malformed_jets():
    G = wbar_group("abelian-1")
    faces = dict(G.faces)
    d0 = faces[(2, 0)]
    faces[(2, 0)] = CoalgebraMorphism.from_linear(d0.source, d0.target, d0.linear_part().scale(rational(2)))
    broken = FormalInfinityGroup(G.levels, faces, G.degeneracies)
    with pytest.raises(MalformedJets):
        diff(broken, 2, 2)


def test_diff_abelian_line():
    result = diff(catalog.build("abelian-1", 2), 2, 2)
    L = result.algebra
    assert result.witness_id == "canonical"
    assert result.tangent_matches()
    assert L.square_violations() == []
    dims = L.tangent_dims()
    assert dims[0] == 1
    assert sum(dims) == 1


@pytest.mark.parametrize("name", ["trivial", "abelian-1", "abelian-2", "nonabelian-2dim", "crossed-module-id",
                                  "crossed-module-shifted", pytest.param("heisenberg", marks=pytest.mark.slow),
                                  pytest.param("sl2", marks=pytest.mark.slow)])
def test_diff_over_the_catalog(name):
    result = diff(catalog.build(name, 2), 2, 2)
    assert result.tangent_matches()
    assert result.algebra.square_violations() == []


@pytest.mark.slow
def test_diff_sl2_on_a_wider_window():
    L = diff(catalog.build("sl2", 4), 3, 4).algebra
    assert L.tangent_dims()[0] == 3
    assert sum(L.tangent_dims()) == 3
    assert L.square_violations() == []


def test_diff_crossed_modules():
    shifted = diff(catalog.build("crossed-module-shifted", 2), 2, 2)
    assert shifted.tangent_matches()
    assert shifted.algebra.tangent_dims()[1] == 1
    assert sum(shifted.algebra.tangent_dims()) == 1
    contractible = diff(catalog.build("crossed-module-id", 2), 2, 2)
    assert contractible.tangent_matches()
    assert contractible.algebra.tangent_complex().homology_dims(2) == [0, 0]


def test_diff_of_jet_group_matches_wbar():
    G = wbar_group("nonabelian-2dim")
    from_jets = diff(G, 2, 2)
    from_lie = diff(catalog.build("nonabelian-2dim", 2), 2, 2)
    assert from_jets.algebra.tangent_dims() == from_lie.algebra.tangent_dims()
    assert from_jets.tangent_matches()


def test_lie_n_report():
    report = lie_n_report(diff(catalog.build("crossed-module-shifted", 2), 2, 2), 2)
    assert report == {"lie_n_group": True, "lie_n_algebra": True}


@pytest.mark.parametrize("name", ["abelian-1", "nonabelian-2dim"])
def test_phi_comparison(name):
    comparison = phi_comparison(catalog.build(name, 2), 2, 2)
    assert comparison.is_iso
    assert comparison.ce_matches
    assert comparison.violations == []


def test_exactness_report_consistency():
    assert ExactnessReport(True, True, True, True).consistent
    assert ExactnessReport(False, False, True, False).consistent
    assert not ExactnessReport(True, False, False, False).consistent
    assert not ExactnessReport(False, True, False, False).consistent
    assert ExactnessReport(True, False, True, False).to_dict()["consistent"]


@pytest.mark.parametrize("name", ["quotient", "inclusion", "identity-sl2"])
def test_exactness_on_catalog_morphisms(name):
    report = exactness_check(catalog.MORPHISMS[name].build(2), 2, 2)
    assert report.consistent


def test_identity_is_weak_equivalence():
    report = exactness_check(catalog.MORPHISMS["identity-sl2"].build(2), 2, 2)
    assert report.source_weak_equivalence and report.target_weak_equivalence
    assert report.source_fibration and report.target_fibration


def test_diff_morphism_of_identity():
    f = diff_morphism(catalog.MORPHISMS["identity-sl2"].build(2), 2, 2)
    assert f.violations() == []
    linear = f.linear_part()
    for a in linear.source.labels:
        assert linear.columns[a] == {a: ONE}


@pytest.mark.slow
def test_functoriality():
    f = catalog.MORPHISMS["inclusion"].build(2)
    h = catalog.MORPHISMS["quotient"].build(2)
    assert functoriality_violations(f, h, 2, 2) == []


@pytest.mark.slow
def test_window_stability():
    assert window_stability(catalog.build("abelian-1", 3), 2, 2)

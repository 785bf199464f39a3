"""Tests for Lie, simplicial Lie, dg Lie and L∞ algebras"""

import pytest

from src.core import catalog
from src.core.exactlin import ONE, BasedSpace, LinearMap, rational
from src.core.liealg import (LieAlgebra, LieAlgebraMap, LInfinityAlgebra, LInfinityMorphism, SimplicialLieAlgebra,
                             SimplicialLieMap, brackets_from_codifferential, codifferential_from_brackets,
                             generalized_jacobi_check, is_fib, is_weq, normalized_dg_lie)
from src.utils.exceptions import NotSquareZero, SchemaViolation

SL2 = {("e", "f"): {"h": "1"}, ("h", "e"): {"e": "2"}, ("h", "f"): {"f": "-2"}}


def sl2():
    return LieAlgebra.from_structure_constants(["e", "f", "h"], SL2, "sl2")


def broken():
    """Antisymmetric but fails Jacobi"""
    return LieAlgebra.from_structure_constants(
        ["x", "y", "z"], {("x", "y"): {"x": "1"}, ("y", "z"): {"y": "1"}, ("z", "x"): {"z": "1"}}, "broken")


def ce(g, top=3, max_word=3):
    return LInfinityAlgebra.from_dg_lie(normalized_dg_lie(SimplicialLieAlgebra.constant(g, top)), max_word)


def test_structure_constants():
    g = sl2()
    assert g.violations() == []
    assert g.bracket_letters("f", "e") == {"h": -ONE}
    assert g.bracket({"e": ONE}, {"h": ONE}) == {"e": rational(-2)}
    assert broken().jacobi_violations() == [("x", "y", "z")]


def test_unknown_label_rejected():
    with pytest.raises(SchemaViolation):
        LieAlgebra.from_structure_constants(["x"], {("x", "y"): {"x": "1"}})


def test_lie_algebra_maps():
    f = LinearMap(BasedSpace(("e0", "e1")), BasedSpace(("x",)), {"e0": {"x": ONE}})
    source = catalog.build("nonabelian-2dim", 0).level(0)
    target = catalog.build("abelian-1", 0).level(0)
    assert LieAlgebraMap(source, target, f).violations() == []

    g = LinearMap(BasedSpace(("x", "y")), source.space, {"x": {"e0": ONE}, "y": {"e1": ONE}})
    assert LieAlgebraMap(LieAlgebra.abelian(["x", "y"]), source, g).violations() == [("x", "y")]


def test_simplicial_lie_algebras_are_valid():
    assert SimplicialLieAlgebra.constant(sl2(), 3).violations() == []
    for name in ("crossed-module-id", "crossed-module-shifted"):
        g = catalog.build(name, 3)
        assert g.violations() == []
        assert g.truncate(2).top_level == 2


def test_simplicial_lie_map_composition():
    inclusion = catalog.MORPHISMS["inclusion"].build(2)
    quotient = catalog.MORPHISMS["quotient"].build(2)
    assert inclusion.violations() == []
    assert quotient.violations() == []
    composite = quotient.compose(inclusion)
    assert isinstance(composite, SimplicialLieMap)
    assert all(f.is_zero() for f in composite.components)


def test_normalized_dg_lie_of_constant_algebra():
    L = normalized_dg_lie(SimplicialLieAlgebra.constant(sl2(), 2))
    assert L.complex.dims() == [3, 0, 0]
    assert L.violations() == []
    assert L.bracket_letters((0, "e"), (0, "f")) == {(0, "h"): ONE}


def test_ce_brackets_recover_structure_constants():
    L = ce(sl2())
    assert L.square_violations() == []
    table = L.brackets()
    assert table[2][((0, "e"), (0, "f"))] == {(0, "h"): ONE}
    assert table[2][((0, "e"), (0, "h"))] == {(0, "e"): rational(-2)}
    assert not any(table[3].values())
    assert L.tangent_dims() == [3, 0, 0, 0]
    assert L.is_lie_n_algebra(1)
    assert generalized_jacobi_check(L)["passed"]


def test_brackets_round_trip_through_codifferential():
    L = ce(sl2())
    rebuilt = codifferential_from_brackets(L.letters, L.tangent_degrees, L.brackets(), L.max_word, L.top_degree)
    assert rebuilt.corestriction == L.corestriction


def test_jacobi_failure_is_not_square_zero():
    L = ce(broken())
    assert L.square_violations()
    with pytest.raises(NotSquareZero):
        brackets_from_codifferential(L)


def test_identity_morphism_is_weq_and_fib():
    L = ce(sl2())
    identity = LInfinityMorphism.strict(L, L, LinearMap.identity(L.letters))
    assert identity.violations() == []
    assert is_weq(identity)
    assert is_fib(identity)
    assert identity.compose(identity).linear_part() == LinearMap.identity(L.letters)

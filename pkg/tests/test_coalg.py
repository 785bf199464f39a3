"""Tests for truncated Sym^co coalgebras, their morphisms and U(g)"""

import pytest

from src.core.coalg import (CoalgebraMorphism, FiniteCoalgebra, TruncatedSymCoalgebra, UETruncation, apply_morphism,
                            is_formal_submersion, pbw_inverse_map, pbw_map, primitives, submersion_section,
                            ue_product)
from src.core.exactlin import ONE, BasedSpace, LinearMap, rational
from src.core.liealg import LieAlgebra
from src.utils.exceptions import WordTooLong


def sym(*letters, max_word=2, degrees=None):
    return TruncatedSymCoalgebra(BasedSpace(tuple(letters)), max_word, degrees)


def heisenberg(max_word=3):
    g = LieAlgebra.from_structure_constants(["x", "y", "z"], {("x", "y"): {"z": "1"}}, "heisenberg")
    return UETruncation(g, max_word)


def test_comultiplication_of_a_square():
    C = sym("x")
    assert C.comultiply(("x", "x")) == {((), ("x", "x")): ONE, (("x",), ("x",)): rational(2),
                                         (("x", "x"), ()): ONE}
    assert C.coassociativity_violations() == []


def test_odd_letters_do_not_repeat():
    C = sym("x", "y", degrees={"y": 1})
    assert ("y", "y") not in C.space
    assert ("x", "y") in C.space
    assert C.sort_word(("y", "x")) == (1, ("x", "y"))
    assert C.sort_word(("y", "y")) == (0, None)


def test_primitives_are_letters():
    C = sym("x", "y", max_word=3)
    assert len(C.primitive_basis()) == 2
    assert primitives(C).labels == (("x",), ("y",))


def test_word_too_long():
    C = sym("x", max_word=1)
    with pytest.raises(WordTooLong):
        C.comultiply(("x", "x"))


def test_sym_of_linear_map():
    C = sym("x")
    F = CoalgebraMorphism.from_linear(C, C, LinearMap(C.cogenerators, C.cogenerators, {"x": {"x": rational(2)}}))
    assert F.apply_word(("x", "x")) == {("x", "x"): rational(4)}
    assert F.violations() == []
    with pytest.raises(WordTooLong):
        apply_morphism(F, ("x", "x", "x"))


def test_nonlinear_morphism_inverse():
    C = sym("x")
    F = CoalgebraMorphism.from_table(C, C, {("x",): {"x": ONE}, ("x", "x"): {"x": ONE}})
    assert F.apply_word(("x", "x")) == {("x", "x"): ONE, ("x",): ONE}
    assert F.violations() == []
    G = F.inverse()
    assert G.compose(F).matrix() == LinearMap.identity(C.space)
    assert F.compose(G).matrix() == LinearMap.identity(C.space)


def test_submersion_section():
    source, target = sym("a", "b"), sym("c")
    projection = LinearMap(source.cogenerators, target.cogenerators, {"a": {"c": ONE}})
    F = CoalgebraMorphism.from_table(source, target, {("a",): {"c": ONE}, ("a", "b"): {"c": ONE}})
    assert F.linear_part() == projection
    assert is_formal_submersion(F)
    G = submersion_section(F)
    assert F.compose(G).matrix() == LinearMap.identity(target.space)

    flat = CoalgebraMorphism.from_linear(target, source, LinearMap.zero(target.cogenerators, source.cogenerators))
    assert not is_formal_submersion(flat)


def test_ue_straightening():
    U = heisenberg()
    assert U.normal_form(("y", "x")) == {("x", "y"): ONE, ("z",): -ONE}
    assert ue_product(U, ("y",), ("x",)) == {("x", "y"): ONE, ("z",): -ONE}
    with pytest.raises(WordTooLong):
        ue_product(U, ("x", "y"), ("x", "y"))


def test_pbw_symmetrization():
    U = heisenberg()
    assert U.pbw(("x", "y")) == {("x", "y"): ONE, ("z",): rational(-1, 2)}
    assert U.pbw_vector(U.pbw_inverse(("x", "y"))) == {("x", "y"): ONE}
    P = pbw_map(U)
    assert P.violations() == []
    assert pbw_inverse_map(U) @ P.matrix() == LinearMap.identity(P.source.space)


def test_hopf_compatibility_and_antipode():
    U = heisenberg()
    assert U.hopf_violations() == []
    assert U.antipode(("x",)) == {("x",): -ONE}


def test_coalgebra_levels_must_define_a_comultiplication():
    class Bare(FiniteCoalgebra):
        space = BasedSpace(("1",))
        unit = "1"

    with pytest.raises(TypeError):
        Bare()

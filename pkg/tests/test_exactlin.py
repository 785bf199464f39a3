"""Tests for exact rational linear algebra"""

import pytest

from src.core.exactlin import (NO_SOLUTION, ONE, BasedSpace, LinearMap, block_matrix, complement,
                               coordinates_in_basis, format_rational, image, inverse, is_injective,
                               is_surjective, kernel, parse_rational, rank, rational, solve, span_rank)
from src.utils.exceptions import DependentInput, SchemaViolation


def space(*labels):
    return BasedSpace(tuple(labels))


def test_rational_parsing_and_formatting():
    assert parse_rational("3/6") == rational(1, 2)
    assert parse_rational("-4") == rational(-4)
    assert format_rational(rational(6, 4)) == "3/2"
    assert format_rational(rational(-2)) == "-2"
    assert rational("2/3") == rational(2, 3)


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5", ""])
def test_bad_rational_literals(text):
    with pytest.raises(SchemaViolation):
        parse_rational(text)


def test_duplicate_labels_rejected():
    with pytest.raises(DependentInput):
        space("a", "a")


def test_from_matrix_shape_checked():
    with pytest.raises(SchemaViolation):
        LinearMap.from_matrix(space("a", "b"), space("x"), [["1"]])


def test_composition_matches_matrix_product():
    U, V, W = space("u1", "u2"), space("v1", "v2"), space("w")
    f = LinearMap.from_matrix(U, V, [["1", "2"], ["0", "1"]])
    g = LinearMap.from_matrix(V, W, [["1", "-1"]])
    assert (g @ f).matrix() == [[rational(1), rational(1)]]
    assert (f - f).is_zero()
    assert (f + f) == f.scale(rational(2))
    assert f.transpose().transpose() == f


def test_tensor_of_maps():
    A, B = space("a"), space("b1", "b2")
    f = LinearMap.from_matrix(A, A, [["2"]])
    g = LinearMap.identity(B)
    h = f.tensor(g)
    assert h.source.labels == (("a", "b1"), ("a", "b2"))
    assert h.apply({("a", "b2"): ONE}) == {("a", "b2"): rational(2)}


def test_kernel_image_and_rank():
    V, W = space("a", "b", "c"), space("x", "y")
    f = LinearMap.from_matrix(V, W, [["1", "1", "0"], ["0", "0", "1"]])
    assert rank(f) == 2
    K = kernel(f)
    assert len(K) == 1
    assert f.apply(K[0]) == {}
    assert len(image(f)) == 2
    assert is_surjective(f)
    assert not is_injective(f)


def test_complement_spans_quotient():
    V = space("a", "b", "c")
    sub = [{"a": ONE, "b": ONE}]
    comp = complement(sub, V)
    assert len(comp) == 2
    assert span_rank(sub + comp, V.labels) == 3
    with pytest.raises(DependentInput):
        complement([{"a": ONE}, {"a": rational(2)}], V)


def test_solve_returns_particular_solution():
    V, W = space("a", "b"), space("x", "y")
    f = LinearMap.from_matrix(V, W, [["1", "1"], ["1", "1"]])
    assert solve(f, {"x": ONE, "y": ONE}) == {"a": ONE}
    assert solve(f, {"x": ONE}) is NO_SOLUTION
    assert solve(f, {}) == {}


def test_inverse():
    V = space("a", "b")
    f = LinearMap.from_matrix(V, V, [["2", "1"], ["1", "1"]])
    assert inverse(f) @ f == LinearMap.identity(V)
    with pytest.raises(DependentInput):
        inverse(LinearMap.from_matrix(V, V, [["1", "1"], ["1", "1"]]))


def test_coordinates_in_basis():
    basis = [{"a": ONE, "b": ONE}, {"b": ONE}]
    assert coordinates_in_basis({"a": ONE}, basis, ("a", "b")) == [ONE, -ONE]
    assert coordinates_in_basis({"c": ONE}, basis, ("a", "b")) is NO_SOLUTION


def test_block_matrix_places_blocks():
    A, B = space("a"), space("b")
    f = LinearMap.from_matrix(A, B, [["3"]])
    M = block_matrix({(1, 0): f}, [A, B], [A, B])
    assert M.apply({(0, "a"): ONE}) == {(1, "b"): rational(3)}
    assert M.apply({(1, "b"): ONE}) == {}

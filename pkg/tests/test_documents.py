"""Tests for document models and conversions"""

import pytest

from src.core import catalog
from src.core.diffcore import FormalInfinityGroup, canonical_witness, diff
from src.core.documents import (jets_to_document, label_name, lie_to_document, linf_from_document, linf_to_document,
                                load_input, simplicial_vs_to_document)
from src.core.liealg import LieAlgebra, LInfinityAlgebra, SimplicialLieAlgebra, normalized_dg_lie
from src.core.simplicial import check_structure, random_simplicial_vs
from src.utils.exceptions import SchemaViolation
from src.utils.schemas import SCHEMA_VERSION, dump, parse_input, parse_linf

SL2_DOC = {
    "schema": SCHEMA_VERSION,
    "kind": "lie",
    "name": "sl2",
    "basis": ["e", "f", "h"],
    "brackets": [
        {"left": "e", "right": "f", "value": {"h": "1"}},
        {"left": "h", "right": "e", "value": {"e": "2"}},
        {"left": "h", "right": "f", "value": {"f": "-2"}},
    ],
}


def with_changes(**changes):
    data = dict(SL2_DOC)
    data.update(changes)
    return data


def test_label_name():
    assert label_name("x") == "x"
    assert label_name((0, ("x", "y"))) == "(0,(x,y))"
    assert label_name(3) == "3"


def test_parse_lie_document():
    doc = parse_input(SL2_DOC)
    assert doc.kind == "lie"
    assert doc.schema_version == SCHEMA_VERSION
    assert dump(doc)["schema"] == SCHEMA_VERSION


@pytest.mark.parametrize("data, path", [
    ({k: v for k, v in SL2_DOC.items() if k != "schema"}, "schema"),
    (with_changes(schema="linfdiff/0"), "schema"),
    (with_changes(basis=["e", "e"]), "basis"),
    (with_changes(extra=1), "extra"),
    (with_changes(brackets=[{"left": "e", "right": "f", "value": {"h": "0.5"}}]), "brackets"),
])
def test_schema_violations_name_the_field(data, path):
    with pytest.raises(SchemaViolation, match=path):
        parse_input(data)


def test_unknown_kind_and_non_object():
    with pytest.raises(SchemaViolation):
        parse_input(with_changes(kind="group"))
    with pytest.raises(SchemaViolation, match="<root>"):
        parse_input([1, 2])


def test_load_lie_document():
    g = load_input(SL2_DOC, 3, 2)
    assert isinstance(g, SimplicialLieAlgebra)
    assert g.top_level == 2
    assert g.level(0).bracket_letters("e", "f") == {"h": 1}


def test_jacobi_failure_is_a_schema_violation():
    data = with_changes(basis=["x", "y", "z"], brackets=[
        {"left": "x", "right": "y", "value": {"x": "1"}},
        {"left": "y", "right": "z", "value": {"y": "1"}},
        {"left": "z", "right": "x", "value": {"z": "1"}},
    ])
    with pytest.raises(SchemaViolation, match="brackets"):
        load_input(data, 3, 2)


def test_lie_document_round_trip():
    g = LieAlgebra.from_structure_constants(["x", "y", "z"], {("x", "y"): {"z": "1"}}, "heisenberg")
    h = load_input(dump(lie_to_document(g)), 2, 1).level(0)
    assert h.space.labels == g.space.labels
    assert h.bracket_letters("x", "y") == g.bracket_letters("x", "y")
    assert h.bracket_letters("y", "z") == {}


def test_simplicial_lie_document_round_trip():
    data = dump(catalog.get_entry("crossed-module-id").document(2))
    assert data["kind"] == "simplicial_lie"
    g = load_input(data, 2, 2)
    assert g.top_level == 2
    assert g.violations() == []


def test_simplicial_lie_missing_face():
    data = dump(catalog.get_entry("crossed-module-id").document(2))
    data["faces"] = data["faces"][1:]
    with pytest.raises(SchemaViolation, match="faces"):
        load_input(data, 2, 2)


def test_simplicial_vs_document():
    V = random_simplicial_vs(3, 2, 2)
    g = load_input(dump(simplicial_vs_to_document(V, "random")), 2, 2)
    assert [a.space.dim for a in g.algebras] == [space.dim for space in V.levels]
    assert check_structure(g.underlying) == []


def test_simplicial_vs_bad_matrix_shape():
    data = dump(simplicial_vs_to_document(random_simplicial_vs(3, 2, 2)))
    data["faces"][0]["matrix"] = [["1"] * 9]
    with pytest.raises(SchemaViolation, match="faces.0.matrix"):
        load_input(data, 2, 2)


def jets_data():
    g = catalog.build("abelian-1", 2)
    G = FormalInfinityGroup.from_simplicial_coalgebra(canonical_witness(g, 2).target, g.name)
    return dump(jets_to_document(G))


def test_jets_document_round_trip():
    data = jets_data()
    assert data["kind"] == "jets"
    G = load_input(data, 2, 2)
    assert isinstance(G, FormalInfinityGroup)
    assert G.jet_violations() == []
    result = diff(G, 2, 2)
    assert result.tangent_matches()
    assert sum(result.algebra.tangent_dims()) == 1


def test_jets_bad_component_shape():
    data = jets_data()
    data["faces"][0]["components"][0] = [["1", "0", "0"]]
    with pytest.raises(SchemaViolation, match="faces.0.components.0"):
        load_input(data, 2, 2)


def sl2_ce():
    g = LieAlgebra.from_structure_constants(["e", "f", "h"], {("e", "f"): {"h": "1"}, ("h", "e"): {"e": "2"},
                                                              ("h", "f"): {"f": "-2"}}, "sl2")
    return LInfinityAlgebra.from_dg_lie(normalized_dg_lie(SimplicialLieAlgebra.constant(g, 3)), 3)


def test_linf_document_round_trip():
    L = sl2_ce()
    data = dump(linf_to_document(L, 3, 3, "canonical"))
    assert data["kind"] == "linf"
    assert data["tangent_dims"] == L.tangent_dims()
    assert [e["name"] for e in data["letters"]] == ["x0_0", "x0_1", "x0_2"]
    assert len(data["brackets"]["2"]) == 3
    M = linf_from_document(parse_linf(data))
    assert M.tangent_dims() == L.tangent_dims()
    assert M.square_violations() == []
    assert len([v for v in M.brackets()[2].values() if v]) == 3


def test_linf_document_is_not_an_input():
    data = dump(linf_to_document(sl2_ce(), 3, 3))
    with pytest.raises(SchemaViolation, match="kind"):
        load_input(data, 3, 3)


def test_linf_unknown_letter():
    data = dump(linf_to_document(sl2_ce(), 3, 3))
    data["brackets"]["2"][0]["output"] = {"nope": "1"}
    with pytest.raises(SchemaViolation, match="unknown letter"):
        linf_from_document(parse_linf(data))

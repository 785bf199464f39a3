"""Tests for the built-in catalog"""

import pytest

from src.core import catalog
from src.utils.exceptions import SchemaViolation
from src.utils.schemas import dump, parse_input


def test_listing_covers_every_entry():
    names = [row["name"] for row in catalog.listing()]
    assert names == list(catalog.ENTRIES)
    assert {"trivial", "abelian-1", "sl2", "crossed-module-id", "crossed-module-shifted"} <= set(names)
    assert all(row["description"] and row["provenance"] for row in catalog.listing())


def test_unknown_entry():
    with pytest.raises(SchemaViolation, match="unknown entry"):
        catalog.get_entry("so3")


@pytest.mark.parametrize("name", list(catalog.ENTRIES))
def test_entries_are_simplicial_lie_algebras(name):
    g = catalog.build(name, 2)
    assert g.top_level == 2
    assert g.violations() == []


@pytest.mark.parametrize("name", list(catalog.ENTRIES))
def test_entry_documents_validate(name):
    entry = catalog.get_entry(name)
    doc = parse_input(dump(entry.document(2)))
    assert doc.kind == ("lie" if entry.constant else "simplicial_lie")


@pytest.mark.parametrize("name", list(catalog.MORPHISMS))
def test_morphisms(name):
    m = catalog.MORPHISMS[name]
    f = m.build(2)
    assert f.violations() == []
    assert f.source.name == m.source
    assert f.target.name == m.target

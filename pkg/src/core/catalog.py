"""
Built-in simplicial Lie algebras and morphisms between them
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

from .documents import lie_to_document, simplicial_lie_to_document
from .exactlin import ONE, BasedSpace, LinearMap, rational
from .liealg import LieAlgebra, SimplicialLieAlgebra, SimplicialLieMap
from .simplicial import ChainComplex
from ..utils.exceptions import SchemaViolation
from ..utils.schemas import Document


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    provenance: str
    build: Callable[[int], SimplicialLieAlgebra]
    constant: bool = True

    def document(self, top_level: int) -> Document:
        """Input document; constant entries are emitted as a plain Lie algebra"""
        g = self.build(top_level)
        if self.constant:
            return lie_to_document(g.level(0))
        return simplicial_lie_to_document(g)


@dataclass(frozen=True)
class CatalogMorphism:
    name: str
    source: str
    target: str
    description: str
    build: Callable[[int], SimplicialLieMap]


def _constant(name: str, labels: List[str], constants: Dict) -> Callable[[int], SimplicialLieAlgebra]:
    def build(top_level: int) -> SimplicialLieAlgebra:
        g = LieAlgebra.from_structure_constants(labels, constants, name)
        return SimplicialLieAlgebra.constant(g, top_level)
    return build


def _crossed_module(name: str, base: tuple, fibre: tuple, identity: bool) -> Callable[[int], SimplicialLieAlgebra]:
    """Abelian crossed module ``fibre -> base`` placed in chain degrees 1 and 0"""
    def build(top_level: int) -> SimplicialLieAlgebra:
        spaces = [BasedSpace(base), BasedSpace(fibre)]
        if identity:
            d = LinearMap(spaces[1], spaces[0], {h: {g: ONE} for h, g in zip(fibre, base)})
        else:
            d = LinearMap.zero(spaces[1], spaces[0])
        return SimplicialLieAlgebra.from_complex(ChainComplex(spaces, {1: d}), top_level, name)
    return build


ENTRIES: Dict[str, CatalogEntry] = {entry.name: entry for entry in [
    CatalogEntry("trivial", "zero Lie algebra", "unit object; every table vanishes",
                 _constant("trivial", [], {})),
    CatalogEntry("abelian-1", "abelian Lie algebra of dimension 1", "additive formal group of the line",
                 _constant("abelian-1", ["x"], {})),
    CatalogEntry("abelian-2", "abelian Lie algebra of dimension 2", "additive formal group of the plane",
                 _constant("abelian-2", ["x", "y"], {})),
    CatalogEntry("nonabelian-2dim", "[e0, e1] = e1", "Lie algebra of the affine line group",
                 _constant("nonabelian-2dim", ["e0", "e1"], {("e0", "e1"): {"e1": "1"}})),
    CatalogEntry("sl2", "[e, f] = h, [h, e] = 2e, [h, f] = -2f", "simple Lie algebra sl(2)",
                 _constant("sl2", ["e", "f", "h"], {("e", "f"): {"h": "1"}, ("h", "e"): {"e": "2"},
                                                    ("h", "f"): {"f": "-2"}})),
    CatalogEntry("heisenberg", "[x, y] = z", "three-dimensional Heisenberg algebra",
                 _constant("heisenberg", ["x", "y", "z"], {("x", "y"): {"z": "1"}})),
    CatalogEntry("crossed-module-id", "crossed module Q -> Q, identity",
                 "abelian Lie 2-algebra; contractible tangent complex",
                 _crossed_module("crossed-module-id", ("g",), ("h",), identity=True), constant=False),
    CatalogEntry("crossed-module-shifted", "crossed module Q -> 0",
                 "abelian Lie 2-algebra concentrated in tangent degree 1",
                 _crossed_module("crossed-module-shifted", (), ("h",), identity=False), constant=False),
]}


def _constant_map(source: str, target: str, images: Dict[str, Dict[str, str]]) -> Callable[[int], SimplicialLieMap]:
    def build(top_level: int) -> SimplicialLieMap:
        g, h = get_entry(source).build(top_level), get_entry(target).build(top_level)
        f = LinearMap.from_function(g.level(0).space, h.level(0).space,
                                    lambda a: {b: rational(v) for b, v in images.get(a, {}).items()})
        return SimplicialLieMap(g, h, [f] * (top_level + 1))
    return build


MORPHISMS: Dict[str, CatalogMorphism] = {m.name: m for m in [
    CatalogMorphism("quotient", "nonabelian-2dim", "abelian-1", "surjection e0 -> x, e1 -> 0",
                    _constant_map("nonabelian-2dim", "abelian-1", {"e0": {"x": "1"}})),
    CatalogMorphism("inclusion", "abelian-1", "nonabelian-2dim", "subalgebra x -> e1",
                    _constant_map("abelian-1", "nonabelian-2dim", {"x": {"e1": "1"}})),
    CatalogMorphism("identity-sl2", "sl2", "sl2", "identity of sl2",
                    _constant_map("sl2", "sl2", {"e": {"e": "1"}, "f": {"f": "1"}, "h": {"h": "1"}})),
]}


def get_entry(name: str) -> CatalogEntry:
    if name not in ENTRIES:
        raise SchemaViolation(f"catalog: unknown entry {name!r}; available: {', '.join(ENTRIES)}")
    return ENTRIES[name]


def build(name: str, top_level: int) -> SimplicialLieAlgebra:
    return get_entry(name).build(top_level)


def listing() -> List[Dict[str, str]]:
    return [{"name": e.name, "description": e.description, "provenance": e.provenance} for e in ENTRIES.values()]

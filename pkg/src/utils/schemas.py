"""
JSON document models for linfdiff

Every document carries ``"schema": "linfdiff/1"`` and a ``kind``; rationals
are strings ``"p"`` or ``"p/q"``, never floats.
"""

from typing import Annotated, Any, Dict, List, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator

from .exceptions import SchemaViolation

SCHEMA_VERSION = "linfdiff/1"

Rational = Annotated[str, Field(pattern=r"^-?\d+(/[1-9]\d*)?$")]
Matrix = List[List[Rational]]
Name = Annotated[str, Field(min_length=1)]


class Document(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_version: Literal["linfdiff/1"] = Field(alias="schema")
    name: str = ""


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

class BracketEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left: Name
    right: Name
    value: Dict[str, Rational]


class LieDocument(Document):
    """Finite-dimensional Lie algebra by structure constants, read as a constant simplicial object"""
    kind: Literal["lie"]
    basis: List[Name]
    brackets: List[BracketEntry] = Field(default_factory=list)

    @field_validator("basis")
    @classmethod
    def distinct_basis(cls, value: List[str]) -> List[str]:
        if len(set(value)) != len(value):
            raise ValueError("basis labels must be distinct")
        return value


class LieLevel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    basis: List[Name]
    brackets: List[BracketEntry] = Field(default_factory=list)


class MatrixEntry(BaseModel):
    """Face or degeneracy at ``level`` with rows indexed by the target basis"""
    model_config = ConfigDict(extra="forbid")

    level: int = Field(ge=0)
    index: int = Field(ge=0)
    matrix: Matrix


class SimplicialLieDocument(Document):
    kind: Literal["simplicial_lie"]
    levels: List[LieLevel] = Field(min_length=1)
    faces: List[MatrixEntry] = Field(default_factory=list)
    degeneracies: List[MatrixEntry] = Field(default_factory=list)


class SimplicialVSDocument(Document):
    """Truncated simplicial vector space; read as an abelian simplicial Lie algebra"""
    kind: Literal["simplicial_vs"]
    levels: List[List[Name]] = Field(min_length=1)
    faces: List[MatrixEntry] = Field(default_factory=list)
    degeneracies: List[MatrixEntry] = Field(default_factory=list)


class JetEntry(BaseModel):
    """Structure map by primitive components; ``components[j-1]`` acts on words of length j"""
    model_config = ConfigDict(extra="forbid")

    level: int = Field(ge=0)
    index: int = Field(ge=0)
    components: List[Matrix] = Field(min_length=1)


class JetsDocument(Document):
    kind: Literal["jets"]
    max_word: int = Field(ge=1)
    cogenerators: List[List[Name]] = Field(min_length=1)
    faces: List[JetEntry] = Field(default_factory=list)
    degeneracies: List[JetEntry] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# outputs
# ---------------------------------------------------------------------------

class LetterEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Name
    degree: int = Field(ge=0)
    label: str = ""


class BracketTableEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    inputs: List[Name] = Field(min_length=1)
    output: Dict[str, Rational]


class WindowInfo(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_word: int = Field(ge=1)
    max_level: int = Field(ge=0)
    top_degree: int = Field(ge=0)


class LInfinityDocument(Document):
    """Tangent complex and brackets ``ℓ_k`` of an L∞ algebra inside a truncation window"""
    kind: Literal["linf"]
    letters: List[LetterEntry]
    tangent_dims: List[int]
    differentials: Dict[str, Matrix] = Field(default_factory=dict)
    brackets: Dict[str, List[BracketTableEntry]] = Field(default_factory=dict)
    window: WindowInfo
    witness: str = ""


class CheckEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    detail: str = ""


class ReportDocument(Document):
    kind: Literal["report"]
    suite: str
    passed: bool
    checks: List[CheckEntry] = Field(default_factory=list)


class CatalogListing(Document):
    kind: Literal["catalog"]
    entries: List[Dict[str, str]]


InputDocument = Annotated[Union[LieDocument, SimplicialLieDocument, SimplicialVSDocument, JetsDocument,
                                LInfinityDocument],
                          Field(discriminator="kind")]

_input_adapter = TypeAdapter(InputDocument)


def _violation(error: ValidationError) -> SchemaViolation:
    first = error.errors()[0]
    path = ".".join(str(part) for part in first["loc"]) or "<root>"
    return SchemaViolation(f"{path}: {first['msg']}")


def parse_input(data: Any) -> Document:
    """Validate an input document, raising SchemaViolation with the path of the first bad field"""
    if not isinstance(data, dict):
        raise SchemaViolation("<root>: a JSON object is required")
    try:
        return _input_adapter.validate_python(data)
    except ValidationError as e:
        raise _violation(e)


def parse_linf(data: Any) -> LInfinityDocument:
    try:
        return LInfinityDocument.model_validate(data)
    except ValidationError as e:
        raise _violation(e)


def parse_report(data: Any) -> ReportDocument:
    try:
        return ReportDocument.model_validate(data)
    except ValidationError as e:
        raise _violation(e)


def dump(document: Document) -> Dict[str, Any]:
    """Plain dictionary with the ``schema`` key restored"""
    return document.model_dump(by_alias=True)

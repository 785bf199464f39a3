"""
Exact rational linear algebra for linfdiff

Vectors are sparse dictionaries ``label -> QQ``; every reduced row echelon
form is computed by sympy's DomainMatrix over QQ so that pivots, kernels and
complements are canonical and reproducible.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from ..utils.exceptions import DependentInput, SchemaViolation

Label = Hashable
Vector = Dict[Label, "QQ.dtype"]

ZERO = QQ(0)
ONE = QQ(1)


def rational(numerator, denominator: int = 1):
    """Build an exact rational from ints, rationals or a ``"p/q"`` string"""
    if isinstance(numerator, str):
        return parse_rational(numerator)
    if denominator == 1 and isinstance(numerator, QQ.dtype):
        return numerator
    return QQ(numerator, denominator)


def parse_rational(text: str):
    """Parse ``"p"`` or ``"p/q"`` into an exact rational"""
    try:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) == 0:
                raise ValueError("zero denominator")
            return QQ(int(num), int(den))
        return QQ(int(text))
    except (ValueError, AttributeError) as e:
        raise SchemaViolation(f"Invalid rational literal {text!r}: {str(e)}")


def format_rational(value) -> str:
    value = QQ(value) if not isinstance(value, QQ.dtype) else value
    if value.denominator == 1:
        return str(int(value.numerator))
    return f"{int(value.numerator)}/{int(value.denominator)}"


def factorial(k: int):
    return QQ(math.factorial(k))


# ---------------------------------------------------------------------------
# sparse vectors
# ---------------------------------------------------------------------------

def add_to(acc: Vector, vec: Vector, coeff=ONE) -> Vector:
    """In-place ``acc += coeff * vec``; zero entries are dropped"""
    if not coeff:
        return acc
    for label, value in vec.items():
        new = acc.get(label, ZERO) + coeff * value
        if new:
            acc[label] = new
        else:
            acc.pop(label, None)
    return acc


def add_term(acc: Vector, label: Label, coeff) -> Vector:
    if not coeff:
        return acc
    new = acc.get(label, ZERO) + coeff
    if new:
        acc[label] = new
    else:
        acc.pop(label, None)
    return acc


def scaled(vec: Vector, coeff) -> Vector:
    if not coeff:
        return {}
    return {label: coeff * value for label, value in vec.items()}


def vector_sum(vectors: Iterable[Vector]) -> Vector:
    acc: Vector = {}
    for vec in vectors:
        add_to(acc, vec)
    return acc


def difference(a: Vector, b: Vector) -> Vector:
    return add_to(dict(a), b, -ONE)


def max_entry(vec: Vector):
    """Largest absolute entry, used as a discrepancy measure in reports"""
    return max((abs(v) for v in vec.values()), default=ZERO)


# ---------------------------------------------------------------------------
# based spaces and linear maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasedSpace:
    """Finite-dimensional space with an ordered basis of distinct labels"""
    labels: Tuple[Label, ...]
    _index: Dict[Label, int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != len(labels):
            raise DependentInput("Basis labels must be pairwise distinct")
        object.__setattr__(self, "_index", index)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __iter__(self):
        return iter(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def basis_vector(self, label) -> Vector:
        return {label: ONE}

    def tensor(self, other: "BasedSpace") -> "BasedSpace":
        return BasedSpace(tuple((a, b) for a in self.labels for b in other.labels))

    def restrict(self, vec: Vector) -> Vector:
        return {k: v for k, v in vec.items() if k in self._index}


class LinearMap:
    """Sparse matrix between based spaces, stored column by column"""

    def __init__(self, source: BasedSpace, target: BasedSpace, columns: Dict[Label, Vector]):
        self.source = source
        self.target = target
        self.columns = {label: {k: v for k, v in columns.get(label, {}).items() if v}
                        for label in source.labels}

    @classmethod
    def from_function(cls, source: BasedSpace, target: BasedSpace,
                      fn: Callable[[Label], Vector]) -> "LinearMap":
        return cls(source, target, {label: fn(label) for label in source.labels})

    @classmethod
    def from_matrix(cls, source: BasedSpace, target: BasedSpace, rows: Sequence[Sequence]) -> "LinearMap":
        if len(rows) != target.dim or any(len(row) != source.dim for row in rows):
            raise SchemaViolation(
                f"Matrix shape does not match {target.dim}x{source.dim}")
        columns = {}
        for j, s in enumerate(source.labels):
            columns[s] = {t: rational(rows[i][j]) for i, t in enumerate(target.labels)
                          if rational(rows[i][j])}
        return cls(source, target, columns)

    @classmethod
    def identity(cls, space: BasedSpace) -> "LinearMap":
        return cls(space, space, {label: {label: ONE} for label in space.labels})

    @classmethod
    def zero(cls, source: BasedSpace, target: BasedSpace) -> "LinearMap":
        return cls(source, target, {})

    def apply(self, vec: Vector) -> Vector:
        acc: Vector = {}
        for label, coeff in vec.items():
            add_to(acc, self.columns[label], coeff)
        return acc

    def __call__(self, vec: Vector) -> Vector:
        return self.apply(vec)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``"""
        return LinearMap(other.source, self.target,
                         {label: self.apply(col) for label, col in other.columns.items()})

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return self.compose(other)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.source, self.target,
                         {label: add_to(dict(col), other.columns[label])
                          for label, col in self.columns.items()})

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.source, self.target,
                         {label: difference(col, other.columns[label])
                          for label, col in self.columns.items()})

    def scale(self, coeff) -> "LinearMap":
        return LinearMap(self.source, self.target,
                         {label: scaled(col, coeff) for label, col in self.columns.items()})

    def transpose(self) -> "LinearMap":
        columns: Dict[Label, Vector] = {label: {} for label in self.target.labels}
        for s, col in self.columns.items():
            for t, value in col.items():
                columns[t][s] = value
        return LinearMap(self.target, self.source, columns)

    def tensor(self, other: "LinearMap") -> "LinearMap":
        columns = {}
        for a, col_a in self.columns.items():
            for b, col_b in other.columns.items():
                columns[(a, b)] = {(x, y): u * v for x, u in col_a.items() for y, v in col_b.items()}
        return LinearMap(self.source.tensor(other.source), self.target.tensor(other.target), columns)

    def rows(self) -> Dict[Label, Vector]:
        return self.transpose().columns

    def matrix(self) -> List[List]:
        return [[self.columns[s].get(t, ZERO) for s in self.source.labels] for t in self.target.labels]

    def is_zero(self) -> bool:
        return not any(self.columns.values())

    def discrepancy(self, other: "LinearMap"):
        """Largest entry of ``self - other``"""
        return max((max_entry(col) for col in (self - other).columns.values()), default=ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.source.labels == other.source.labels
                and self.target.labels == other.target.labels
                and self.columns == other.columns)

    def __repr__(self) -> str:
        return f"LinearMap({self.source.dim} -> {self.target.dim})"


# ---------------------------------------------------------------------------
# reduced row echelon kernel
# ---------------------------------------------------------------------------

def rref(vectors: Sequence[Vector], order: Sequence[Label]) -> Tuple[List[Vector], List[Label]]:
    """Reduced row echelon form of the rows ``vectors`` over the column ``order``

    Returns the nonzero RREF rows and their pivot labels, leftmost pivots first.
    """
    if not vectors or not order:
        return [], []
    position = {label: j for j, label in enumerate(order)}
    dod = {}
    for i, vec in enumerate(vectors):
        row = {position[label]: value for label, value in vec.items() if value}
        if row:
            dod[i] = row
    if not dod:
        return [], []
    matrix = DomainMatrix(dod, (len(vectors), len(order)), QQ)
    reduced, pivots = matrix.rref()
    rows: Dict[int, Vector] = {}
    for (i, j), value in reduced.to_dok().items():
        if value:
            rows.setdefault(i, {})[order[j]] = QQ.convert(value)
    return [rows.get(i, {}) for i in range(len(pivots))], [order[j] for j in pivots]


def span_rank(vectors: Sequence[Vector], order: Optional[Sequence[Label]] = None) -> int:
    if order is None:
        order = sorted({label for vec in vectors for label in vec}, key=repr)
    return len(rref(vectors, order)[1])


def rank(f: LinearMap) -> int:
    return len(rref(list(f.columns.values()), f.target.labels)[1])


@dataclass
class EchelonBasis:
    """RREF basis of a subspace; coordinates are read off at the pivot columns"""
    rows: List[Vector]
    pivots: List[Label]

    @classmethod
    def of(cls, vectors: Sequence[Vector], order: Sequence[Label]) -> "EchelonBasis":
        rows, pivots = rref(vectors, order)
        return cls(rows, pivots)

    def __len__(self) -> int:
        return len(self.rows)

    def coordinates(self, vec: Vector) -> List:
        return [vec.get(p, ZERO) for p in self.pivots]

    def reduce(self, vec: Vector) -> Vector:
        """Remainder of ``vec`` after clearing every pivot column"""
        out = dict(vec)
        for row, pivot in zip(self.rows, self.pivots):
            c = out.get(pivot)
            if c:
                add_to(out, row, -c)
        return out

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)


def kernel(f: LinearMap) -> List[Vector]:
    """Basis of ker f, returned in reduced row echelon form"""
    order = f.source.labels
    rows, pivots = rref(list(f.rows().values()), order)
    pivot_set = set(pivots)
    vectors = []
    for free in order:
        if free in pivot_set:
            continue
        vec = {free: ONE}
        for row, pivot in zip(rows, pivots):
            c = row.get(free)
            if c:
                vec[pivot] = -c
        vectors.append(vec)
    return rref(vectors, order)[0]


def image(f: LinearMap) -> List[Vector]:
    return rref(list(f.columns.values()), f.target.labels)[0]


def complement(sub: Sequence[Vector], ambient: BasedSpace) -> List[Vector]:
    """Standard basis vectors at the non-pivot columns of RREF(sub)"""
    rows, pivots = rref(list(sub), ambient.labels)
    if len(pivots) < len([v for v in sub]):
        raise DependentInput(f"Expected {len(sub)} independent vectors, rank is {len(pivots)}")
    pivot_set = set(pivots)
    return [{label: ONE} for label in ambient.labels if label not in pivot_set]


class NoSolution:
    """Distinct return value of :func:`solve` for inconsistent systems"""

    def __repr__(self) -> str:
        return "NO_SOLUTION"

    def __bool__(self) -> bool:
        return False


NO_SOLUTION = NoSolution()

_RHS = ("__rhs__",)


def solve(f: LinearMap, target_vector: Vector):
    """Canonical particular solution of ``f(x) = target_vector``, free variables zero"""
    order = list(f.source.labels) + [_RHS]
    rows = []
    for t, row in f.rows().items():
        aug = dict(row)
        if target_vector.get(t):
            aug[_RHS] = target_vector[t]
        rows.append(aug)
    for t, value in target_vector.items():
        if t not in f.target and value:
            return NO_SOLUTION
    reduced, pivots = rref(rows, order)
    if _RHS in pivots:
        return NO_SOLUTION
    return {pivot: row[_RHS] for row, pivot in zip(reduced, pivots) if row.get(_RHS)}


def inverse(f: LinearMap) -> LinearMap:
    """Inverse of a bijective map, by RREF of ``[f | I]``"""
    if f.source.dim != f.target.dim:
        raise DependentInput(f"Cannot invert a {f.target.dim}x{f.source.dim} map")
    n = f.source.dim
    order = list(range(2 * n))
    rows = []
    for i, (t, row) in enumerate(f.rows().items()):
        aug = {f.source.index(s): value for s, value in row.items()}
        aug[n + i] = ONE
        rows.append(aug)
    reduced, pivots = rref(rows, order)
    if len(pivots) != n or any(p >= n for p in pivots):
        raise DependentInput("Map is not invertible")
    columns: Dict[Label, Vector] = {t: {} for t in f.target.labels}
    for row, pivot in zip(reduced, pivots):
        s = f.source.labels[pivot]
        for key, value in row.items():
            if key >= n:
                columns[f.target.labels[key - n]][s] = value
    return LinearMap(f.target, f.source, columns)


def coordinates_in_basis(vec: Vector, basis: Sequence[Vector], order: Sequence[Label]):
    """Coordinates of ``vec`` in an arbitrary basis, or NO_SOLUTION"""
    names = BasedSpace(tuple(range(len(basis))))
    f = LinearMap(names, BasedSpace(tuple(order)), {i: b for i, b in enumerate(basis)})
    sol = solve(f, vec)
    if sol is NO_SOLUTION:
        return NO_SOLUTION
    return [sol.get(i, ZERO) for i in range(len(basis))]


def is_injective(f: LinearMap) -> bool:
    return rank(f) == f.source.dim


def is_surjective(f: LinearMap) -> bool:
    return rank(f) == f.target.dim


def block_matrix(blocks: Dict[Tuple[int, int], LinearMap], sources: Sequence[BasedSpace],
                 targets: Sequence[BasedSpace]) -> LinearMap:
    """Assemble maps between tagged direct sums; labels become ``(block, label)``"""
    source = BasedSpace(tuple((j, s) for j, space in enumerate(sources) for s in space.labels))
    target = BasedSpace(tuple((i, t) for i, space in enumerate(targets) for t in space.labels))
    columns: Dict[Label, Vector] = {label: {} for label in source.labels}
    for (i, j), block in blocks.items():
        for s, col in block.columns.items():
            for t, value in col.items():
                add_term(columns[(j, s)], (i, t), value)
    return LinearMap(source, target, columns)

"""
Truncated local algebras, Λ, K_alg and the left adjoint D*

The algebra side is kept dual to the coalgebra side: a level of a cosimplicial
algebra stores its multiplication table on the dual basis of a coalgebra
level, and D* is computed from the coalgebra ``spf(A)`` by eliminating
relations degree by degree.
"""

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .coalg import (CachedMap, CoalgebraMorphism, FiniteCoalgebra, SimplicialCoalgebra, TabulatedCoalgebra,
                    TruncatedSymCoalgebra, Word, from_sym_morphisms)
from .exactlin import (ONE, BasedSpace, EchelonBasis, LinearMap, Vector, add_term, add_to, kernel,
                       rational, rref, span_rank)
from .shuffle import coface, codegeneracy
from .simplicial import (CochainComplex, TruncatedCosimplicialVS, Violation, check_structure, cosimplicial_K,
                         cosimplicial_N, em_vector, normalized_basis)
from ..utils.exceptions import AlmostInput, NotKan, NotReduced, SchemaViolation
from ..utils.logger import logger


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# truncated local algebras
# ---------------------------------------------------------------------------

class TruncatedLocalAlgebra:
    """Finite-dimensional commutative local algebra on an explicit basis

    ``table[(a, b)]`` is the product of two non-unit basis elements; pairs
    missing from the table multiply to zero.
    """

    def __init__(self, space: BasedSpace, unit, table: Dict[Tuple, Vector], weights: Optional[Dict] = None,
                 degrees: Optional[Dict] = None):
        self.space = space
        self.unit = unit
        self.table = {k: v for k, v in table.items() if v}
        self.weights = dict(weights or {})
        self.degrees = dict(degrees or {})

    @classmethod
    def dual_of(cls, C: FiniteCoalgebra) -> "TruncatedLocalAlgebra":
        """``m(a*, b*) = Σ_c Δc[(a, b)] c*``"""
        table: Dict[Tuple, Vector] = {}
        for c in C.space.labels:
            for (a, b), value in C.comultiply(c).items():
                if a == C.unit or b == C.unit:
                    continue
                add_term(table.setdefault((a, b), {}), c, value)
        weights = {label: C.weight(label) for label in C.space.labels}
        degrees = {label: C.degree(label) for label in C.space.labels}
        return cls(C.space, C.unit, table, weights, degrees)

    def degree(self, label) -> int:
        return self.degrees.get(label, 0)

    def weight(self, label) -> int:
        return self.weights.get(label, 0)

    def multiply_labels(self, a, b) -> Vector:
        if a == self.unit:
            return {b: ONE}
        if b == self.unit:
            return {a: ONE}
        return self.table.get((a, b), {})

    def multiply(self, x: Vector, y: Vector) -> Vector:
        out: Vector = {}
        for a, u in x.items():
            for b, v in y.items():
                add_to(out, self.multiply_labels(a, b), u * v)
        return out

    def augmentation_ideal(self) -> Tuple:
        return tuple(label for label in self.space.labels if label != self.unit)

    def violations(self) -> List[str]:
        """Failures of associativity and graded commutativity on basis elements"""
        bad = []
        labels = self.augmentation_ideal()
        for a in labels:
            for b in labels:
                sign = _sign(self.degree(a) * self.degree(b))
                lhs = self.multiply_labels(a, b)
                rhs = {k: sign * v for k, v in self.multiply_labels(b, a).items()}
                if lhs != rhs:
                    bad.append(f"commutativity at ({a!r}, {b!r})")
                for c in labels:
                    left = self.multiply(lhs, {c: ONE})
                    right = self.multiply({a: ONE}, self.multiply_labels(b, c))
                    if left != right:
                        bad.append(f"associativity at ({a!r}, {b!r}, {c!r})")
        return bad

    def dual_coalgebra(self) -> TabulatedCoalgebra:
        """Coalgebra with ``Δc[(a, b)] = m(a, b)[c]``, unit pairs included"""
        table: Dict = {label: {} for label in self.space.labels}
        for label in self.space.labels:
            add_term(table[label], (label, self.unit), ONE)
            if label != self.unit:
                add_term(table[label], (self.unit, label), ONE)
        for (a, b), vec in self.table.items():
            for c, value in vec.items():
                add_term(table[c], (a, b), value)
        return TabulatedCoalgebra(self.space, self.unit, table, self.weights, self.degrees)


@dataclass
class CosimplicialTruncatedAlgebra:
    """Levels of local algebras with cofaces and codegeneracies keyed as in TruncatedCosimplicialVS"""
    levels: List[TruncatedLocalAlgebra]
    underlying: TruncatedCosimplicialVS
    weighted: bool = False

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    @property
    def almost(self) -> bool:
        return self.underlying.almost

    @property
    def reduced(self) -> bool:
        return self.levels[0].space.labels == (self.levels[0].unit,)

    def forget_d0(self) -> "CosimplicialTruncatedAlgebra":
        A = self.underlying
        underlying = TruncatedCosimplicialVS(list(A.levels), {k: f for k, f in A.cofaces.items() if k[1]},
                                             dict(A.codegeneracies), almost=True)
        return CosimplicialTruncatedAlgebra(self.levels, underlying, self.weighted)

    def violations(self) -> List[Violation]:
        """Cosimplicial identities plus multiplicativity of every structure map"""
        out = list(check_structure(self.underlying))
        maps = [(k, f, k[0] + 1) for k, f in self.underlying.cofaces.items()]
        maps += [(k, s, k[0] - 1) for k, s in self.underlying.codegeneracies.items()]
        for (n, i), f, m in maps:
            src, tgt = self.levels[n], self.levels[m]
            kind = "d" if m > n else "s"
            labels = src.augmentation_ideal()
            bad = next(((a, b) for a in labels for b in labels
                        if f.apply(src.multiply_labels(a, b)) != tgt.multiply(f.columns[a], f.columns[b])), None)
            if bad is not None:
                out.append(Violation(f"{kind}^{i} is multiplicative", n, bad))
        return out


def dualize(C: SimplicialCoalgebra) -> CosimplicialTruncatedAlgebra:
    """Level-wise linear dual ``k[C]`` with transposed structure maps"""
    levels = [TruncatedLocalAlgebra.dual_of(level) for level in C.levels]
    logger.debug(f"Dualized simplicial coalgebra with level dims {[a.space.dim for a in levels]}")
    return CosimplicialTruncatedAlgebra(levels, C.underlying_vs().dual(), C.weighted)


def spf(A: CosimplicialTruncatedAlgebra) -> SimplicialCoalgebra:
    V = A.underlying.dual()
    levels = [level.dual_coalgebra() for level in A.levels]
    return SimplicialCoalgebra(levels, V.faces, V.degeneracies, A.almost, A.weighted)


# ---------------------------------------------------------------------------
# free truncated cdgas
# ---------------------------------------------------------------------------

class FreeGradedAlgebra(TruncatedSymCoalgebra):
    """Graded-commutative polynomials on positive-degree generators

    Monomials are sorted words of length ≤ K and degree ≤ N. Generators are
    kept in non-decreasing degree so enumeration can stop early.
    """

    def __init__(self, generators: BasedSpace, max_length: int, degrees: Dict, max_degree: int):
        order = sorted(range(generators.dim), key=lambda i: degrees[generators.labels[i]])
        generators = BasedSpace(tuple(generators.labels[i] for i in order))
        if any(degrees[g] < 1 for g in generators.labels):
            raise SchemaViolation("Generators of a reduced cdga need positive degree")
        super().__init__(generators, max_length, degrees, max_degree)

    def _enumerate(self):
        letters = self.cogenerators.labels
        words: List[Word] = [()]

        def extend(word: Word, start: int, degree: int):
            for idx in range(start, len(letters)):
                a = letters[idx]
                total = degree + self.letter_degree(a)
                if total > self.max_degree:
                    break
                longer = word + (a,)
                words.append(longer)
                if len(longer) < self.max_word:
                    extend(longer, idx + 1 if self.letter_degree(a) % 2 else idx, total)

        if self.max_word:
            extend((), 0, 0)
        return sorted(words, key=lambda w: (len(w), [self._order[a] for a in w]))

    def monomials(self, degree: Optional[int] = None) -> List[Word]:
        return [w for w in self.space.labels if degree is None or self.degree(w) == degree]


class CdgaTruncated:
    """Quotient of a free truncated cdga by an ideal given degree-wise in echelon form"""

    def __init__(self, algebra: FreeGradedAlgebra, differential: Optional[Dict[Hashable, Vector]] = None,
                 ideal: Optional[Dict[int, EchelonBasis]] = None, name: str = ""):
        self.algebra = algebra
        self.generators = algebra.cogenerators
        self.max_length = algebra.max_word
        self.max_degree = algebra.max_degree
        self.ideal = dict(ideal or {})
        self.name = name
        self._pivots = {p for basis in self.ideal.values() for p in basis.pivots}
        self.differential = {g: self.reduce(v) for g, v in (differential or {}).items()}
        self._d = CachedMap(self._d_word)

    @classmethod
    def free(cls, generators: Sequence, degrees: Dict, max_length: int, max_degree: int,
             differential: Optional[Dict[Hashable, Vector]] = None, name: str = "") -> "CdgaTruncated":
        algebra = FreeGradedAlgebra(BasedSpace(tuple(generators)), max_length, degrees, max_degree)
        return cls(algebra, differential, None, name)

    def degree(self, word: Word) -> int:
        return self.algebra.degree(word)

    def basis(self, degree: Optional[int] = None) -> List[Word]:
        return [w for w in self.algebra.monomials(degree) if w not in self._pivots]

    def dims_by_degree(self) -> List[int]:
        return [len(self.basis(d)) for d in range(self.max_degree + 1)]

    def dims_by_bidegree(self) -> Dict[Tuple[int, int], int]:
        """Dimensions of ``𝔪^k / 𝔪^{k+1}`` in each degree, keyed ``(degree, k)``

        ``𝔪^k`` is spanned by the reductions of words of length ≥ k, so the
        counts do not depend on which monomials the ideal uses as pivots.
        """
        out: Dict[Tuple[int, int], int] = {}
        for d in range(self.max_degree + 1):
            basis = self.basis(d)
            words = self.algebra.monomials(d)
            filtration = [span_rank([self.reduce({w: ONE}) for w in words if len(w) >= k], basis)
                          for k in range(self.max_length + 2)]
            for k in range(self.max_length + 1):
                dim = filtration[k] - filtration[k + 1]
                if dim:
                    out[(d, k)] = dim
        return out

    def reduce(self, vec: Vector) -> Vector:
        parts: Dict[int, Vector] = {}
        for word, value in vec.items():
            if value:
                parts.setdefault(self.degree(word), {})[word] = value
        out: Vector = {}
        for d, part in parts.items():
            basis = self.ideal.get(d)
            out.update(basis.reduce(part) if basis is not None else part)
        return {k: v for k, v in out.items() if v}

    def multiply(self, a: Vector, b: Vector) -> Vector:
        return self.reduce(self.algebra.multiply(a, b))

    def _d_word(self, word: Word) -> Vector:
        out: Vector = {}
        A = self.algebra
        for i, letter in enumerate(word):
            dx = self.differential.get(letter)
            if not dx:
                continue
            sign = _sign(A.degree(word[:i]))
            term = A.multiply(A.multiply({word[:i]: ONE}, dx), {word[i + 1:]: ONE})
            add_to(out, term, rational(sign))
        return self.reduce(out)

    def d(self, vec: Vector) -> Vector:
        return self.reduce(self._d.apply(self.reduce(vec)))

    def square_violations(self) -> List[Word]:
        return [w for w in self.basis() if self.d(self.d({w: ONE}))]

    def leibniz_violations(self) -> List[Tuple[Word, Word]]:
        """Basis pairs with ``d(ab) ≠ d(a) b + (-1)^{|a|} a d(b)``"""
        bad = []
        words = [w for w in self.basis() if w]
        for i, a in enumerate(words):
            for b in words[i:]:
                if len(a) + len(b) > self.max_length or self.degree(a) + self.degree(b) > self.max_degree:
                    continue
                lhs = self.d(self.multiply({a: ONE}, {b: ONE}))
                rhs = self.multiply(self.d({a: ONE}), {b: ONE})
                add_to(rhs, self.multiply({a: ONE}, self.d({b: ONE})), rational(_sign(self.degree(a))))
                if add_to(dict(lhs), rhs, -ONE):
                    bad.append((a, b))
        return bad

    def violations(self) -> List[str]:
        out = [f"δ² ≠ 0 on {w!r}" for w in self.square_violations()]
        out += [f"Leibniz fails on {pair!r}" for pair in self.leibniz_violations()]
        return out

    def indecomposables(self) -> List[int]:
        """Dimensions of ``𝔪/𝔪²`` by degree"""
        dims = [0]
        for d in range(1, self.max_degree + 1):
            basis = self.basis(d)
            products = [self.reduce({w: ONE}) for w in self.algebra.monomials(d) if len(w) >= 2]
            dims.append(len(basis) - span_rank(products, basis))
        return dims

    def cochain_complex(self) -> CochainComplex:
        spaces = [BasedSpace(tuple(self.basis(d))) for d in range(self.max_degree + 1)]
        differentials = {d: LinearMap.from_function(spaces[d], spaces[d + 1],
                                                    lambda w: spaces[d + 1].restrict(self.d({w: ONE})))
                         for d in range(self.max_degree)}
        return CochainComplex(spaces, differentials)

    def tensor(self, other: "CdgaTruncated") -> "CdgaTruncated":
        """``C ⊗ D`` of free presentations, generators tagged 0 and 1"""
        if self.ideal or other.ideal:
            raise SchemaViolation("Tensor products are formed on free presentations only")
        generators, degrees, differential = [], {}, {}
        for tag, C in ((0, self), (1, other)):
            for g in C.generators.labels:
                generators.append((tag, g))
                degrees[(tag, g)] = C.algebra.letter_degree(g)
                dx = C.differential.get(g, {})
                if dx:
                    differential[(tag, g)] = {tuple((tag, a) for a in w): v for w, v in dx.items()}
        algebra = FreeGradedAlgebra(BasedSpace(tuple(generators)), max(self.max_length, other.max_length),
                                    degrees, max(self.max_degree, other.max_degree))
        resorted = {}
        for g, dx in differential.items():
            out: Vector = {}
            for w, v in dx.items():
                sign, word = algebra.sort_word(w)
                if sign:
                    add_term(out, word, sign * v)
            resorted[g] = out
        return CdgaTruncated(algebra, resorted, None, f"{self.name}⊗{other.name}")


def random_cdga(seed: int, max_length: int = 2, max_degree: int = 3, max_generators: int = 3) -> CdgaTruncated:
    """Seeded minimal cdga: each differential is a combination of products of closed generators"""
    rng = random.Random(seed)
    count = rng.randint(1, max_generators)
    degrees = {f"g{i}": rng.randint(1, max(1, max_degree - 1)) for i in range(count)}
    labels = sorted(degrees, key=lambda g: (degrees[g], g))
    algebra = FreeGradedAlgebra(BasedSpace(tuple(labels)), max_length, degrees, max_degree)
    closed: List[str] = []
    differential: Dict[Hashable, Vector] = {}
    for g in labels:
        targets = [w for w in algebra.monomials(degrees[g] + 1) if w and all(a in closed for a in w)]
        if targets and rng.random() < 0.6:
            image: Vector = {}
            for w in targets:
                c = rng.randint(-2, 2)
                if c:
                    image[w] = rational(c)
            differential[g] = image
        else:
            closed.append(g)
    return CdgaTruncated(algebra, differential, None, f"random-{seed}")


# ---------------------------------------------------------------------------
# Λ
# ---------------------------------------------------------------------------

class LambdaAlgebra:
    """Free graded-commutative algebra on ``e_0..e_n`` in degree -1 with ``δe_i = 1``

    Basis elements are increasing tuples S; ``e_S = e_{s_1} ⋯ e_{s_k}``.
    """

    def __init__(self, n: int):
        self.n = n
        self.basis = [S for k in range(n + 2) for S in combinations(range(n + 1), k)]

    def degree(self, S: Tuple[int, ...]) -> int:
        return -len(S)

    def subsets(self, size: int) -> List[Tuple[int, ...]]:
        if size < 0 or size > self.n + 1:
            return []
        return list(combinations(range(self.n + 1), size))

    @staticmethod
    def sorted_product(seq: Sequence[int]) -> Tuple[int, Optional[Tuple[int, ...]]]:
        """Sign and sorted support of ``e_{i_1} ⋯ e_{i_k}``, or ``(0, None)`` on a repeat"""
        if len(set(seq)) != len(seq):
            return 0, None
        inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
        return _sign(inversions), tuple(sorted(seq))

    def product(self, S: Tuple[int, ...], T: Tuple[int, ...]) -> Tuple[int, Optional[Tuple[int, ...]]]:
        return self.sorted_product(S + T)

    def differential(self, S: Tuple[int, ...]) -> Vector:
        return {S[:i] + S[i + 1:]: rational(_sign(i)) for i in range(len(S))}

    def dims(self) -> List[int]:
        return [comb(self.n + 1, k) for k in range(self.n + 2)]

    def square_violations(self) -> List[Tuple[int, ...]]:
        bad = []
        for S in self.basis:
            out: Vector = {}
            for T, c in self.differential(S).items():
                add_to(out, self.differential(T), c)
            if out:
                bad.append(S)
        return bad

    def pushforward(self, values: Sequence[int], S: Tuple[int, ...]) -> Tuple[int, Optional[Tuple[int, ...]]]:
        """``e_S -> e_{α(s_1)} ⋯ e_{α(s_k)}`` for an order map α given by its value table"""
        return self.sorted_product([values[s] for s in S])


def lambda_algebra(n: int) -> LambdaAlgebra:
    return LambdaAlgebra(n)


def lambda_cosimplicial(top_level: int) -> TruncatedCosimplicialVS:
    """``[n] -> Λ^n`` as a truncated cosimplicial graded vector space"""
    algebras = [LambdaAlgebra(n) for n in range(top_level + 1)]
    levels = [BasedSpace(tuple(a.basis)) for a in algebras]

    def induced(n: int, m: int, values: Sequence[int]) -> LinearMap:
        columns = {}
        for S in algebras[n].basis:
            sign, image = algebras[m].pushforward(values, S)
            columns[S] = {image: rational(sign)} if sign else {}
        return LinearMap(levels[n], levels[m], columns)

    cofaces = {(n, i): induced(n, n + 1, coface(i, n + 1)) for n in range(top_level) for i in range(n + 2)}
    codegeneracies = {(n, j): induced(n, n - 1, codegeneracy(j, n - 1).values)
                      for n in range(1, top_level + 1) for j in range(n)}
    return TruncatedCosimplicialVS(levels, cofaces, codegeneracies)


# ---------------------------------------------------------------------------
# K_alg
# ---------------------------------------------------------------------------

def _tensor_differential(C: CdgaTruncated, lam: LambdaAlgebra, c: Word, S: Tuple[int, ...]) -> Vector:
    """``δ(c ⊗ e_S) = δc ⊗ e_S + (-1)^{|c|} c ⊗ δe_S``"""
    out: Vector = {}
    for w, v in C.d({c: ONE}).items():
        add_term(out, (w, S), v)
    sign = rational(_sign(C.degree(c)))
    for T, v in lam.differential(S).items():
        add_term(out, (c, T), sign * v)
    return out


def _tensor_product(C: CdgaTruncated, lam: LambdaAlgebra, x: Vector, y: Vector) -> Vector:
    """``(c ⊗ e_S)(c' ⊗ e_T) = (-1)^{|S||c'|} cc' ⊗ e_S e_T``"""
    out: Vector = {}
    for (c, S), u in x.items():
        for (c2, T), v in y.items():
            sign, ST = lam.product(S, T)
            if not sign:
                continue
            sign *= _sign(len(S) * C.degree(c2))
            for w, z in C.multiply({c: ONE}, {c2: ONE}).items():
                add_term(out, (w, ST), sign * u * v * z)
    return out


def _k_alg_level(C: CdgaTruncated, n: int) -> Tuple[TruncatedLocalAlgebra, EchelonBasis]:
    lam = LambdaAlgebra(n)
    words = C.basis()
    degree_zero = [(c, S) for c in words for S in lam.subsets(C.degree(c))]
    degree_one = [(c, S) for c in words for S in lam.subsets(C.degree(c) - 1)]
    source, target = BasedSpace(tuple(degree_zero)), BasedSpace(tuple(degree_one))
    delta = LinearMap.from_function(source, target,
                                    lambda label: target.restrict(_tensor_differential(C, lam, *label)))
    cocycles = kernel(delta)
    pivots = [next(label for label in source.labels if label in v) for v in cocycles]
    Z = EchelonBasis(cocycles, pivots)
    space = BasedSpace(tuple(pivots))
    unit = ((), ())
    table: Dict[Tuple, Vector] = {}
    rows = dict(zip(pivots, cocycles))
    for a in pivots:
        if a == unit:
            continue
        for b in pivots:
            if b == unit:
                continue
            product = _tensor_product(C, lam, rows[a], rows[b])
            coords = {p: c for p, c in zip(Z.pivots, Z.coordinates(product)) if c}
            if coords:
                table[(a, b)] = coords
    return TruncatedLocalAlgebra(space, unit, table), Z


def k_alg(C: CdgaTruncated, top_level: Optional[int] = None) -> CosimplicialTruncatedAlgebra:
    """``[n] -> Z⁰(C ⊗ Λ^n)``; structure maps induced by ``e_i -> e_{α(i)}``"""
    N = C.max_degree if top_level is None else top_level
    levels, bases = [], []
    for n in range(N + 1):
        algebra, Z = _k_alg_level(C, n)
        levels.append(algebra)
        bases.append(Z)
    lambdas = [LambdaAlgebra(n) for n in range(N + 1)]

    def induced(n: int, m: int, values: Sequence[int]) -> LinearMap:
        columns = {}
        for pivot, row in zip(bases[n].pivots, bases[n].rows):
            image: Vector = {}
            for (c, S), v in row.items():
                sign, T = lambdas[m].pushforward(values, S)
                if sign:
                    add_term(image, (c, T), sign * v)
            columns[pivot] = {p: x for p, x in zip(bases[m].pivots, bases[m].coordinates(image)) if x}
        return LinearMap(levels[n].space, levels[m].space, columns)

    cofaces = {(n, i): induced(n, n + 1, coface(i, n + 1)) for n in range(N) for i in range(n + 2)}
    codegeneracies = {(n, j): induced(n, n - 1, codegeneracy(j, n - 1).values)
                      for n in range(1, N + 1) for j in range(n)}
    underlying = TruncatedCosimplicialVS([a.space for a in levels], cofaces, codegeneracies)
    logger.debug(f"K_alg levels: {[a.space.dim for a in levels]}")
    return CosimplicialTruncatedAlgebra(levels, underlying)


def k_alg_dimension_check(C: CdgaTruncated, top_level: Optional[int] = None) -> bool:
    """Level dims of K_alg(C) against the cosimplicial Dold-Kan K of its cochain complex"""
    A = k_alg(C, top_level)
    K = cosimplicial_K(C.cochain_complex())
    return [a.space.dim for a in A.levels] == [level.dim for level in K.levels[:A.top_level + 1]]


# ---------------------------------------------------------------------------
# D* as a coequalizer
# ---------------------------------------------------------------------------

@dataclass
class MooreGenerator:
    grade: int
    pivot: Hashable
    row: Vector
    weight: int

    @property
    def label(self) -> Tuple:
        return (self.grade, self.pivot)


class CoequalizerCdga(CdgaTruncated):
    """D*(A) together with the Moore bases its generators are dual to"""

    def __init__(self, algebra: FreeGradedAlgebra, differential, ideal, generators: Dict[Tuple, MooreGenerator],
                 moore: Dict[int, EchelonBasis], weighted: bool, name: str = ""):
        super().__init__(algebra, differential, ideal, name)
        self.moore_generators = generators
        self.moore = moore
        self.weighted = weighted

    def is_pure(self, word: Word) -> bool:
        return all(self.moore_generators[g].weight == 1 for g in word)

    def pure_generators(self) -> List[Tuple]:
        return [g for g in self.generators.labels if self.moore_generators[g].weight == 1]


class _Coequalizer:
    """Generators, relations and reduction for D* of a reduced simplicial coalgebra"""

    def __init__(self, X: SimplicialCoalgebra, max_word: int, max_degree: int, weighted: bool,
                 with_differential: bool, name: str = ""):
        if not X.reduced:
            raise NotReduced(f"Level 0 has dimension {X.levels[0].space.dim}, expected 1")
        self.X = X
        self.V = X.underlying_vs()
        self.K = max_word
        self.N = min(max_degree, X.top_level)
        self.weighted = weighted
        self.with_differential = with_differential
        self.name = name

    def generators(self) -> Tuple[Dict[Tuple, MooreGenerator], Dict[int, EchelonBasis]]:
        gens: Dict[Tuple, MooreGenerator] = {}
        moore: Dict[int, EchelonBasis] = {}
        for n in range(1, self.N + 1):
            level = self.X.levels[n]
            # heaviest labels first: a row with a weight-1 pivot lies in the primitives
            order = sorted(level.space.labels, key=lambda label: -level.weight(label))
            basis = EchelonBasis.of(normalized_basis(self.V, n).rows, order)
            moore[n] = basis
            for pivot, row in zip(basis.pivots, basis.rows):
                gens[(n, pivot)] = MooreGenerator(n, pivot, row, level.weight(pivot))
        return gens, moore

    def relations(self, algebra: FreeGradedAlgebra, gens: Dict[Tuple, MooreGenerator], n: int) -> List[Vector]:
        """``Δ̄`` of Moore generators against EM products of lower ones, paired with level n"""
        level = self.X.levels[n]
        rows: Dict[Tuple, Vector] = {}
        by_grade: Dict[int, List[MooreGenerator]] = {}
        for g in gens.values():
            by_grade.setdefault(g.grade, []).append(g)
        for g in by_grade.get(n, []):
            for label, c in g.row.items():
                for pair, v in level.reduced_comultiply(label).items():
                    add_term(rows.setdefault(pair, {}), (g.label,), c * v)
        for p in range(1, n):
            for a in by_grade.get(p, []):
                for b in by_grade.get(n - p, []):
                    sign, word = algebra.word_product((a.label,), (b.label,))
                    if not sign:
                        continue
                    for pair, v in em_vector(self.V, self.V, a.row, b.row, p, n - p).items():
                        add_term(rows.setdefault(pair, {}), word, -sign * v)
        vectors = [r for r in rows.values() if r]
        return rref(vectors, algebra.monomials(n))[0] if vectors else []

    def ideal(self, algebra: FreeGradedAlgebra, gens: Dict[Tuple, MooreGenerator]) -> Dict[int, EchelonBasis]:
        spanning: Dict[int, List[Vector]] = {}
        monomials = [w for w in algebra.space.labels if w]
        for n in range(1, self.N + 1):
            relations = self.relations(algebra, gens, n)
            logger.debug(f"D*: {len(relations)} independent relations in degree {n}")
            for relation in relations:
                spanning.setdefault(n, []).append(relation)
                for m in monomials:
                    if len(m) + 1 > self.K or algebra.degree(m) + n > self.N:
                        continue
                    product = algebra.multiply({m: ONE}, relation)
                    if product:
                        spanning.setdefault(n + algebra.degree(m), []).append(product)
        ideal = {}
        for d, vectors in spanning.items():
            order = self.column_order(algebra, gens, d)
            basis = EchelonBasis.of(vectors, order)
            if self.weighted:
                expected = {w for w in order if not all(gens[g].weight == 1 for g in w)}
                if set(basis.pivots) != expected:
                    missing = sorted(map(repr, expected - set(basis.pivots)))[:1]
                    raise NotKan(f"Degree {d}: decomposable generators are not eliminated "
                                 f"({len(expected)} expected, {len(basis.pivots)} found; e.g. {missing})")
            ideal[d] = basis
        if self.weighted:
            for d in range(1, self.N + 1):
                if d not in ideal and any(not all(gens[g].weight == 1 for g in w) for w in algebra.monomials(d)):
                    raise NotKan(f"Degree {d}: decomposable generators have no defining relation")
        return ideal

    def column_order(self, algebra: FreeGradedAlgebra, gens: Dict[Tuple, MooreGenerator], d: int) -> List[Word]:
        words = algebra.monomials(d)
        if self.weighted:
            impure = [w for w in words if not all(gens[g].weight == 1 for g in w)]
            pure = [w for w in words if all(gens[g].weight == 1 for g in w)]
            return impure + pure
        return sorted(words, key=len)

    def differential(self, gens: Dict[Tuple, MooreGenerator], moore: Dict[int, EchelonBasis]) -> Dict[Tuple, Vector]:
        """``δx_j = Σ_k ⟨d_0 b_k, b_j⟩ x_k`` over Moore generators one grade up"""
        out: Dict[Tuple, Vector] = {}
        if not self.with_differential:
            return out
        for n in range(2, self.N + 1):
            lower = moore[n - 1]
            d0 = self.V.faces[(n, 0)]
            for pivot, row in zip(moore[n].pivots, moore[n].rows):
                image = d0.apply(row)
                for p, c in zip(lower.pivots, lower.coordinates(image)):
                    if c:
                        add_term(out.setdefault((n - 1, p), {}), ((n, pivot),), c)
        return out

    def run(self) -> CoequalizerCdga:
        gens, moore = self.generators()
        degrees = {label: g.grade for label, g in gens.items()}
        algebra = FreeGradedAlgebra(BasedSpace(tuple(gens)), self.K, degrees, self.N)
        ideal = self.ideal(algebra, gens)
        differential = self.differential(gens, moore)
        result = CoequalizerCdga(algebra, differential, ideal, gens, moore, self.weighted, self.name)
        logger.debug(f"D* computed: {len(gens)} generators, dims by degree {result.dims_by_degree()}")
        return result


def d_star_of_coalgebra(X: SimplicialCoalgebra, max_word: int, max_degree: int,
                        weighted: Optional[bool] = None, name: str = "") -> CoequalizerCdga:
    """D*(k[X]) computed directly from the simplicial coalgebra X"""
    weighted = X.weighted if weighted is None else weighted
    return _Coequalizer(X, max_word, max_degree, weighted, not X.almost, name).run()


def d_star(A: CosimplicialTruncatedAlgebra, max_word: int, max_degree: int,
           weighted: Optional[bool] = None, name: str = "") -> CoequalizerCdga:
    if A.almost:
        raise AlmostInput("d_star needs every coface; use d_star_plus")
    return d_star_of_coalgebra(spf(A), max_word, max_degree, weighted, name)


def d_star_plus(A: CosimplicialTruncatedAlgebra, max_word: int, max_degree: int,
                weighted: Optional[bool] = None, name: str = "") -> CoequalizerCdga:
    """The same coequalizer on the almost cosimplicial object, without differential"""
    X = spf(A)
    weighted = X.weighted if weighted is None else weighted
    return _Coequalizer(X, max_word, max_degree, weighted, False, name).run()


def forgetful_compatible(A: CosimplicialTruncatedAlgebra, max_word: int, max_degree: int) -> bool:
    """Forgetting δ on D*(A) gives D*₊ of A with d^0 forgotten"""
    full = d_star(A, max_word, max_degree)
    plus = d_star_plus(A.forget_d0(), max_word, max_degree)
    if full.generators.labels != plus.generators.labels:
        return False
    for d in range(full.max_degree + 1):
        a, b = full.ideal.get(d), plus.ideal.get(d)
        if (a is None) != (b is None):
            return False
        if a is not None and (a.pivots != b.pivots or a.rows != b.rows):
            return False
    return True


def cotangent(A: CosimplicialTruncatedAlgebra) -> CochainComplex:
    """``N*(𝔪/𝔪²)``, the conormalized dual of the primitives of spf(A)"""
    return cosimplicial_N(spf(A).primitive_vs().dual())


def cotangent_matches(A: CosimplicialTruncatedAlgebra, max_word: int, max_degree: int) -> bool:
    """Indecomposables of D*(A) against N*(𝔪/𝔪²), degree by degree"""
    D = d_star(A, max_word, max_degree)
    cot = cotangent(A)
    expected = [cot.spaces[d].dim if d <= cot.top_degree else 0 for d in range(D.max_degree + 1)]
    expected[0] = 0
    return D.indecomposables() == expected


# ---------------------------------------------------------------------------
# level-wise Sym of a simplicial vector space
# ---------------------------------------------------------------------------

def sym_levelwise(V, max_word: int) -> SimplicialCoalgebra:
    """``Sym^co(V_n)`` on every level with ``Sym(f)`` structure maps"""
    levels = [TruncatedSymCoalgebra(space, max_word) for space in V.levels]
    faces = {k: CoalgebraMorphism.from_linear(levels[k[0]], levels[k[0] - 1], f) for k, f in V.faces.items()}
    degeneracies = {k: CoalgebraMorphism.from_linear(levels[k[0]], levels[k[0] + 1], s)
                    for k, s in V.degeneracies.items()}
    return from_sym_morphisms(levels, faces, degeneracies)


def free_on_normalized(V, max_word: int, max_degree: int) -> FreeGradedAlgebra:
    """``Sym(N*V)`` window: one generator per Moore basis element in degrees 1..N"""
    labels, degrees = [], {}
    for n in range(1, min(max_degree, V.top_level) + 1):
        for pivot in normalized_basis(V, n).pivots:
            labels.append((n, pivot))
            degrees[(n, pivot)] = n
    return FreeGradedAlgebra(BasedSpace(tuple(labels)), max_word, degrees, max_degree)


def k_alg_round_trip(C: CdgaTruncated) -> bool:
    """``D*(K_alg(C))`` against C: bidegree dims and indecomposables"""
    D = d_star(k_alg(C), C.max_length, C.max_degree, name=f"D*K({C.name})")
    return D.dims_by_bidegree() == C.dims_by_bidegree() and D.indecomposables() == C.indecomposables()


def sym_matches_normalized(V, max_word: int, max_degree: int) -> bool:
    """Bidegree dims of ``D*(Sym(V•))`` against the free algebra on ``N*V``"""
    D = d_star(dualize(sym_levelwise(V, max_word)), max_word, max_degree)
    free = CdgaTruncated(free_on_normalized(V, max_word, max_degree))
    return D.dims_by_bidegree() == free.dims_by_bidegree()

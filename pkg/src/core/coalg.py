"""
Truncated cofree cocommutative coalgebras and their morphisms

A word is a sorted tuple of letters (cogenerator labels) of length ≤ K.
Odd letters never repeat. ``Δ`` sums over subsets of positions with Koszul
signs, so ``Δ(x^2) = x^2⊗1 + 2 x⊗x + 1⊗x^2``.
"""

import itertools
import math
from abc import ABC, abstractmethod
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .exactlin import (NO_SOLUTION, ONE, ZERO, BasedSpace, EchelonBasis, LinearMap, Vector, add_term,
                       add_to, inverse, kernel, rational, rref, scaled, solve)
from .shuffle import codegeneracy_composite, enumerate_shuffles
from .simplicial import (ChainComplex, TruncatedSimplicialVS, Violation, check_structure, dold_kan_K,
                         _basis_space, _restricted)
from ..utils.exceptions import MalformedJets, WordTooLong
from ..utils.logger import logger

Word = Tuple[Hashable, ...]


# ---------------------------------------------------------------------------
# coalgebra levels
# ---------------------------------------------------------------------------

class FiniteCoalgebra(ABC):
    """Finite-dimensional counital coalgebra on an explicit basis"""

    space: BasedSpace
    unit: Hashable

    @abstractmethod
    def comultiply(self, label) -> Vector:
        ...

    def weight(self, label) -> int:
        return 0

    def degree(self, label) -> int:
        return 0

    @property
    def labels(self) -> Tuple:
        return self.space.labels

    def non_unit_labels(self) -> Tuple:
        return tuple(label for label in self.space.labels if label != self.unit)

    def counit(self, label):
        return ONE if label == self.unit else ZERO

    def reduced_comultiply(self, label) -> Vector:
        """``Δ(c) - c⊗1 - 1⊗c`` on non-unit basis elements"""
        out = dict(self.comultiply(label))
        if label == self.unit:
            return {}
        add_term(out, (label, self.unit), -ONE)
        add_term(out, (self.unit, label), -ONE)
        return out

    def comultiply_vector(self, vec: Vector) -> Vector:
        out: Vector = {}
        for label, coeff in vec.items():
            add_to(out, self.comultiply(label), coeff)
        return out

    def comultiplication_map(self) -> LinearMap:
        return LinearMap.from_function(self.space, self.space.tensor(self.space), self.comultiply)

    def primitive_basis(self) -> List[Vector]:
        """Kernel of the reduced comultiplication on the non-unit part"""
        source = BasedSpace(self.non_unit_labels())
        pairs = BasedSpace(tuple((a, b) for a in self.space.labels for b in self.space.labels))
        reduced = LinearMap.from_function(source, pairs, self.reduced_comultiply)
        return kernel(reduced)

    def coassociativity_violations(self) -> List:
        bad = []
        for label in self.space.labels:
            left: Vector = {}
            right: Vector = {}
            for (a, b), c in self.comultiply(label).items():
                for (x, y), d in self.comultiply(a).items():
                    add_term(left, (x, y, b), c * d)
                for (x, y), d in self.comultiply(b).items():
                    add_term(right, (a, x, y), c * d)
            if left != right:
                bad.append(label)
        return bad


class TabulatedCoalgebra(FiniteCoalgebra):
    """Coalgebra given by a comultiplication table"""

    def __init__(self, space: BasedSpace, unit, table: Dict, weights: Optional[Dict] = None,
                 degrees: Optional[Dict] = None):
        self.space = space
        self.unit = unit
        self.table = table
        self.weights = weights or {}
        self.degrees = degrees or {}

    def comultiply(self, label) -> Vector:
        return self.table[label]

    def weight(self, label) -> int:
        return self.weights.get(label, 0)

    def degree(self, label) -> int:
        return self.degrees.get(label, 0)


class TruncatedSymCoalgebra(FiniteCoalgebra):
    """``Sym^co(V)`` restricted to words of length ≤ K"""

    def __init__(self, cogenerators: BasedSpace, max_word: int, degrees: Optional[Dict] = None,
                 max_degree: Optional[int] = None):
        self.cogenerators = cogenerators
        self.max_word = max_word
        self.degrees = dict(degrees or {})
        self.max_degree = max_degree
        self.unit = ()
        self._order = {letter: i for i, letter in enumerate(cogenerators.labels)}
        self._splits: Dict[Word, List] = {}
        self.space = BasedSpace(tuple(self._enumerate()))

    def _enumerate(self) -> Iterable[Word]:
        letters = self.cogenerators.labels
        for length in range(self.max_word + 1):
            for word in itertools.combinations_with_replacement(letters, length):
                if self.is_admissible(word):
                    yield word

    def letter_degree(self, letter) -> int:
        return self.degrees.get(letter, 0)

    def degree(self, word) -> int:
        return sum(self.letter_degree(a) for a in word)

    def weight(self, word) -> int:
        return len(word)

    def is_admissible(self, word) -> bool:
        if self.max_degree is not None and self.degree(word) > self.max_degree:
            return False
        return all(not (a == b and self.letter_degree(a) % 2) for a, b in zip(word, word[1:]))

    def sort_word(self, letters: Sequence) -> Tuple[int, Optional[Word]]:
        """Koszul sign and sorted word, or ``(0, None)`` when an odd letter repeats"""
        seq = list(letters)
        sign = 1
        for i in range(1, len(seq)):
            j = i
            while j > 0 and self._order[seq[j - 1]] > self._order[seq[j]]:
                if self.letter_degree(seq[j - 1]) % 2 and self.letter_degree(seq[j]) % 2:
                    sign = -sign
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                j -= 1
        word = tuple(seq)
        if not self.is_admissible(word):
            return 0, None
        return sign, word

    def splittings(self, word: Word) -> List[Tuple[int, Word, Word]]:
        """``(sign, w_S, w_{S^c})`` over every subset S of positions"""
        if word in self._splits:
            return self._splits[word]
        out = []
        r = len(word)
        for mask in range(1 << r):
            left = [word[i] for i in range(r) if mask >> i & 1]
            right = [word[i] for i in range(r) if not mask >> i & 1]
            odd = 0
            for i in range(r):
                if mask >> i & 1 or not self.letter_degree(word[i]) % 2:
                    continue
                odd += sum(1 for j in range(i + 1, r)
                           if mask >> j & 1 and self.letter_degree(word[j]) % 2)
            out.append((-1 if odd % 2 else 1, tuple(left), tuple(right)))
        self._splits[word] = out
        return out

    def comultiply(self, word) -> Vector:
        if len(word) > self.max_word:
            raise WordTooLong(f"Word of length {len(word)} exceeds window {self.max_word}")
        out: Vector = {}
        for sign, left, right in self.splittings(word):
            add_term(out, (left, right), rational(sign))
        return out

    def word_product(self, w1: Word, w2: Word) -> Tuple[int, Optional[Word]]:
        if len(w1) + len(w2) > self.max_word:
            return 0, None
        return self.sort_word(w1 + w2)

    def multiply(self, a: Vector, b: Vector) -> Vector:
        out: Vector = {}
        for w1, x in a.items():
            for w2, y in b.items():
                sign, word = self.word_product(w1, w2)
                if sign:
                    add_term(out, word, sign * x * y)
        return out

    def letters_vector(self, vec: Vector) -> Vector:
        """Lift a vector on cogenerators to length-one words"""
        return {(letter,): c for letter, c in vec.items()}

    def linear_part(self, vec: Vector) -> Vector:
        return {word[0]: c for word, c in vec.items() if len(word) == 1}

    def primitives(self) -> BasedSpace:
        return BasedSpace(tuple((letter,) for letter in self.cogenerators.labels))

    def factorial(self, word: Word):
        """``b!`` for the multiplicities of a word"""
        out = 1
        for _, group in itertools.groupby(word):
            out *= math.factorial(len(list(group)))
        return rational(out)


def tensor_coalgebra_comultiply(C: FiniteCoalgebra, D: FiniteCoalgebra, label) -> Vector:
    """Comultiplication of ``C ⊗ D`` on ``(c, d)``, ungraded"""
    c, d = label
    out: Vector = {}
    for (c1, c2), x in C.comultiply(c).items():
        for (d1, d2), y in D.comultiply(d).items():
            add_term(out, ((c1, d1), (c2, d2)), x * y)
    return out


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

class CachedMap:
    """Memoized ``label -> Vector`` function"""

    def __init__(self, fn: Callable[[Hashable], Vector]):
        self.fn = fn
        self.cache: Dict = {}

    def __call__(self, label) -> Vector:
        if label not in self.cache:
            self.cache[label] = self.fn(label)
        return self.cache[label]

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for label, coeff in vec.items():
            add_to(out, self(label), coeff)
        return out


class CoalgebraMorphism:
    """Morphism ``Sym^co(V) -> Sym^co(W)`` stored by its components ``f^1_j``

    ``components(word)`` returns a vector on the cogenerators of the target.
    """

    def __init__(self, source: TruncatedSymCoalgebra, target: TruncatedSymCoalgebra,
                 components: Callable[[Word], Vector]):
        self.source = source
        self.target = target
        self.components = components if isinstance(components, CachedMap) else CachedMap(components)
        self._values: Dict[Word, Vector] = {(): {(): ONE}}

    @classmethod
    def from_table(cls, source, target, table: Dict[Word, Vector]) -> "CoalgebraMorphism":
        return cls(source, target, lambda word: table.get(word, {}))

    @classmethod
    def from_linear(cls, source, target, f: LinearMap) -> "CoalgebraMorphism":
        """``Sym^co(f)`` for a linear map of cogenerators"""
        return cls(source, target, lambda word: dict(f.columns[word[0]]) if len(word) == 1 else {})

    @classmethod
    def identity(cls, coalgebra: TruncatedSymCoalgebra) -> "CoalgebraMorphism":
        return cls.from_linear(coalgebra, coalgebra, LinearMap.identity(coalgebra.cogenerators))

    def linear_part(self) -> LinearMap:
        return LinearMap.from_function(self.source.cogenerators, self.target.cogenerators,
                                       lambda letter: self.components((letter,)))

    def apply_word(self, word: Word) -> Vector:
        """``F(w) = Σ_k (1/k!) f^{⊗k} diag_k(w)``, summed as unordered partitions"""
        if word in self._values:
            return self._values[word]
        out: Vector = {}
        first = word[0]
        for sign, left, right in self.source.splittings(word[1:]):
            f_block = self.components((first,) + left)
            if not f_block:
                continue
            lifted = self.target.letters_vector(f_block)
            add_to(out, self.target.multiply(lifted, self.apply_word(right)), rational(sign))
        self._values[word] = out
        return out

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for word, coeff in vec.items():
            add_to(out, self.apply_word(word), coeff)
        return out

    def matrix(self) -> LinearMap:
        return LinearMap.from_function(self.source.space, self.target.space, self.apply_word)

    def compose(self, other: "CoalgebraMorphism") -> "CoalgebraMorphism":
        """``self ∘ other`` with components ``π_1 F(G(w))``"""
        return CoalgebraMorphism(other.source, self.target,
                                 lambda word: self.target.linear_part(self.apply(other.apply_word(word))))

    def inverse(self) -> "CoalgebraMorphism":
        """Inverse through the word-basis matrix, which is unitriangular up to the linear part"""
        inv = inverse(self.matrix())
        return CoalgebraMorphism(self.target, self.source,
                                 lambda word: self.source.linear_part(inv.columns[word]))

    def violations(self) -> List[Word]:
        """Words on which ``Δ∘F = (F⊗F)∘Δ`` or ``ε∘F = ε`` fails"""
        bad = []
        for word in self.source.space.labels:
            image = self.apply_word(word)
            if image.get((), ZERO) != (ONE if not word else ZERO):
                bad.append(word)
                continue
            lhs = self.target.comultiply_vector(image)
            rhs: Vector = {}
            for (a, b), c in self.source.comultiply(word).items():
                for x, u in self.apply_word(a).items():
                    for y, v in self.apply_word(b).items():
                        add_term(rhs, (x, y), c * u * v)
            lhs = {k: v for k, v in lhs.items() if len(k[0]) + len(k[1]) <= self.target.max_word}
            rhs = {k: v for k, v in rhs.items() if len(k[0]) + len(k[1]) <= self.target.max_word}
            if lhs != rhs:
                bad.append(word)
        return bad


def apply_morphism(F: CoalgebraMorphism, word: Word) -> Vector:
    if len(word) > F.source.max_word:
        raise WordTooLong(f"Word of length {len(word)} exceeds window {F.source.max_word}")
    return F.apply_word(word)


def comultiply(C: FiniteCoalgebra, word) -> Vector:
    return C.comultiply(word)


def is_formal_submersion(F: CoalgebraMorphism) -> bool:
    """Surjectivity of the induced map on primitives"""
    f = F.linear_part()
    return len(rref(list(f.columns.values()), f.target.labels)[1]) == f.target.dim


def submersion_section(F: CoalgebraMorphism) -> CoalgebraMorphism:
    """A coalgebra section G with ``F∘G = id``, built word length by word length"""
    f = F.linear_part()
    split = _right_inverse(f)
    table: Dict[Word, Vector] = {}
    G = CoalgebraMorphism(F.target, F.source, lambda word: table.get(word, {}))
    for word in F.target.space.labels:
        if not word:
            continue
        if len(word) == 1:
            table[word] = split.apply({word[0]: ONE})
            continue
        residual = F.target.linear_part(F.apply(G.apply_word(word)))
        table[word] = scaled(split.apply(residual), -ONE)
        G.components.cache.pop(word, None)
        G._values.pop(word, None)
    return G


def _right_inverse(f: LinearMap) -> LinearMap:
    """A right inverse of a surjective map, supported on pivot columns"""
    columns = {}
    for t in f.target.labels:
        sol = solve(f, {t: ONE})
        if sol is NO_SOLUTION:
            raise MalformedJets(f"Linear part is not surjective at {t!r}")
        columns[t] = sol
    return LinearMap(f.target, f.source, columns)


# ---------------------------------------------------------------------------
# simplicial coalgebras
# ---------------------------------------------------------------------------

class SimplicialCoalgebra:
    """Levels of finite coalgebras with faces and degeneracies on word bases"""

    def __init__(self, levels: List[FiniteCoalgebra], faces: Dict[Tuple[int, int], LinearMap],
                 degeneracies: Dict[Tuple[int, int], LinearMap], almost: bool = False,
                 weighted: bool = False):
        self.levels = levels
        self.faces = faces
        self.degeneracies = degeneracies
        self.almost = almost
        self.weighted = weighted

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    @property
    def reduced(self) -> bool:
        return self.levels[0].space.labels == (self.levels[0].unit,)

    def underlying_vs(self) -> TruncatedSimplicialVS:
        return TruncatedSimplicialVS([level.space for level in self.levels], self.faces,
                                     self.degeneracies, self.almost)

    def primitive_bases(self) -> List[EchelonBasis]:
        return [EchelonBasis.of(level.primitive_basis(), level.space.labels) for level in self.levels]

    def primitive_vs(self) -> TruncatedSimplicialVS:
        """Level-wise primitives with the restricted structure maps"""
        bases = self.primitive_bases()
        spaces = [_basis_space(b) for b in bases]
        faces = {(n, i): _restricted(f, bases[n], bases[n - 1]) for (n, i), f in self.faces.items()}
        degeneracies = {(n, j): _restricted(s, bases[n], bases[n + 1])
                        for (n, j), s in self.degeneracies.items()}
        return TruncatedSimplicialVS(spaces, faces, degeneracies, self.almost)

    def structure_violations(self) -> List[Violation]:
        return check_structure(self.underlying_vs())

    def comultiplicativity_violations(self) -> List[Violation]:
        """Structure maps that fail ``Δ f = (f⊗f) Δ``"""
        out = []
        for kind, maps in (("d", self.faces), ("s", self.degeneracies)):
            for (n, i), f in maps.items():
                src = self.levels[n]
                tgt = self.levels[n - 1] if kind == "d" else self.levels[n + 1]
                for label in src.space.labels:
                    lhs = tgt.comultiply_vector(f.columns[label])
                    rhs: Vector = {}
                    for (a, b), c in src.comultiply(label).items():
                        for x, u in f.columns[a].items():
                            for y, v in f.columns[b].items():
                                add_term(rhs, (x, y), c * u * v)
                    if lhs != rhs:
                        out.append(Violation(f"Δ{kind}{i}=({kind}{i}⊗{kind}{i})Δ", n, label))
                        break
        return out

    def forget_d0(self) -> "SimplicialCoalgebra":
        return SimplicialCoalgebra(self.levels, {k: f for k, f in self.faces.items() if k[1]},
                                   self.degeneracies, almost=True, weighted=self.weighted)

    def weight_preserving(self) -> bool:
        """Whether every d_{i≥1} and s_j preserves word weight"""
        positive = [(f, n, n - 1) for (n, i), f in self.faces.items() if i]
        positive += [(s, n, n + 1) for (n, j), s in self.degeneracies.items()]
        for f, n, m in positive:
            src, tgt = self.levels[n], self.levels[m]
            for label, col in f.columns.items():
                w = src.weight(label)
                if any(tgt.weight(t) != w for t in col):
                    return False
        return True


def from_sym_morphisms(levels: List[TruncatedSymCoalgebra],
                       faces: Dict[Tuple[int, int], CoalgebraMorphism],
                       degeneracies: Dict[Tuple[int, int], CoalgebraMorphism]) -> SimplicialCoalgebra:
    """Materialize a simplicial coalgebra given by primitive components"""
    return SimplicialCoalgebra(levels,
                               {k: F.matrix() for k, F in faces.items()},
                               {k: F.matrix() for k, F in degeneracies.items()},
                               weighted=True)


def coalgebra_exponential(C: FiniteCoalgebra, f: Callable[[Hashable], Vector],
                          target: TruncatedSymCoalgebra) -> CachedMap:
    """The coalgebra map ``C -> Sym^co(V)`` with linear part f

    Uses the Euler identity ``k F_k(c) = Σ F_{k-1}(c') f(c'')`` over ``Δc = c'⊗c''``.
    f must vanish on the unit of C.
    """
    parts: Dict[Tuple, Vector] = {}

    def part(label, k: int) -> Vector:
        key = (label, k)
        if key in parts:
            return parts[key]
        if k == 0:
            out = {(): C.counit(label)} if C.counit(label) else {}
        else:
            out = {}
            for (left, right), c in C.comultiply(label).items():
                if right == C.unit:
                    continue
                tail = f(right)
                if not tail:
                    continue
                head = part(left, k - 1)
                if head:
                    add_to(out, target.multiply(head, target.letters_vector(tail)), c)
            out = scaled(out, ONE / rational(k))
        parts[key] = out
        return out

    def total(label) -> Vector:
        out: Vector = {}
        for k in range(target.max_word + 1):
            add_to(out, part(label, k))
        return out

    return CachedMap(total)


def primitives(C: FiniteCoalgebra) -> BasedSpace:
    if isinstance(C, TruncatedSymCoalgebra):
        return C.primitives()
    basis = C.primitive_basis()
    return BasedSpace(tuple(next(label for label in C.space.labels if label in v) for v in basis))


# ---------------------------------------------------------------------------
# K^co of a dg coalgebra
# ---------------------------------------------------------------------------

class DgSymCoalgebra:
    """``Sym^co(V)`` with a codifferential given on words"""

    def __init__(self, coalgebra: TruncatedSymCoalgebra, differential: Callable[[Word], Vector]):
        self.coalgebra = coalgebra
        self.differential = differential if isinstance(differential, CachedMap) else CachedMap(differential)

    def chain_complex(self, top_degree: int) -> ChainComplex:
        """The underlying complex in degrees 0..top_degree"""
        C = self.coalgebra
        by_degree = [[w for w in C.space.labels if C.degree(w) == n] for n in range(top_degree + 1)]
        spaces = [BasedSpace(tuple(words)) for words in by_degree]
        differentials = {}
        for n in range(1, top_degree + 1):
            differentials[n] = LinearMap.from_function(
                spaces[n], spaces[n - 1],
                lambda w: {k: v for k, v in self.differential(w).items() if k in spaces[n - 1]})
        return ChainComplex(spaces, differentials)


class KcoLevel(FiniteCoalgebra):
    """Level n of ``K^co(C)``: labels ``(B, c)``"""

    def __init__(self, dg: DgSymCoalgebra, n: int, space: Optional[BasedSpace] = None):
        self.dg = dg
        self.n = n
        self.space = space if space is not None else BasedSpace(())
        self.unit = (tuple(range(n)), ())
        self._cache: Dict = {}

    def weight(self, label) -> int:
        return len(label[1])

    def comultiply(self, label) -> Vector:
        if label in self._cache:
            return self._cache[label]
        B, c = label
        C = self.dg.coalgebra
        eta = codegeneracy_composite(B, self.n)
        out: Vector = {}
        for sign, left, right in C.splittings(c):
            p, q = C.degree(left), C.degree(right)
            for sh in enumerate_shuffles(p, q):
                a = codegeneracy_composite(sh.J, p + q).compose(eta).degeneracy_set()
                b = codegeneracy_composite(sh.I, p + q).compose(eta).degeneracy_set()
                add_term(out, ((a, left), (b, right)), rational(sign * sh.sign))
        self._cache[label] = out
        return out


def kco_of_dg(dg: DgSymCoalgebra, top_level: int) -> SimplicialCoalgebra:
    """``K^co(C)``: Dold-Kan K of the underlying complex with the shuffle comultiplication"""
    complex_ = dg.chain_complex(top_level)
    V = dold_kan_K(complex_, top_level)
    levels = [KcoLevel(dg, n, V.levels[n]) for n in range(top_level + 1)]
    logger.debug(f"K^co levels: {[level.space.dim for level in levels]}")
    return SimplicialCoalgebra(levels, V.faces, V.degeneracies, weighted=True)


# ---------------------------------------------------------------------------
# universal enveloping algebras on PBW words
# ---------------------------------------------------------------------------

class UETruncation(TruncatedSymCoalgebra):
    """``U(g)`` on PBW words of length ≤ K

    ``lie`` needs ``space``, ``degree(letter)`` and ``bracket_letters(a, b)``.
    The coalgebra structure on PBW words is the shuffle one, so it is inherited.
    """

    def __init__(self, lie, max_word: int):
        degrees = {a: lie.degree(a) for a in lie.space.labels}
        super().__init__(lie.space, max_word, degrees)
        self.lie = lie
        self._normal_forms: Dict[Word, Vector] = {}
        self._pbw: Dict[Word, Vector] = {}
        self._pbw_inverse: Dict[Word, Vector] = {}

    def _out_of_order(self, a, b) -> bool:
        if a == b:
            return self.letter_degree(a) % 2 == 1
        return self._order[a] > self._order[b]

    def normal_form(self, seq: Word) -> Vector:
        """Straighten a product of letters: ``x∗y = ±y∗x + [x,y]``, ``x∗x = ½[x,x]`` for odd x"""
        seq = tuple(seq)
        if seq in self._normal_forms:
            return self._normal_forms[seq]
        position = next((i for i in range(len(seq) - 1) if self._out_of_order(seq[i], seq[i + 1])), None)
        if position is None:
            out = {seq: ONE}
        else:
            a, b = seq[position], seq[position + 1]
            head, tail = seq[:position], seq[position + 2:]
            out = {}
            if a == b:
                for c, v in self.lie.bracket_letters(a, a).items():
                    add_to(out, self.normal_form(head + (c,) + tail), v / 2)
            else:
                sign = -1 if self.letter_degree(a) % 2 and self.letter_degree(b) % 2 else 1
                add_to(out, self.normal_form(head + (b, a) + tail), rational(sign))
                for c, v in self.lie.bracket_letters(a, b).items():
                    add_to(out, self.normal_form(head + (c,) + tail), v)
        self._normal_forms[seq] = out
        return out

    def truncate(self, vec: Vector) -> Vector:
        return {w: c for w, c in vec.items() if len(w) <= self.max_word}

    def product_words(self, w1: Word, w2: Word) -> Vector:
        return self.truncate(self.normal_form(tuple(w1) + tuple(w2)))

    def product(self, a: Vector, b: Vector) -> Vector:
        out: Vector = {}
        for w1, x in a.items():
            for w2, y in b.items():
                add_to(out, self.product_words(w1, w2), x * y)
        return out

    def _permutation_sign(self, word: Word, perm: Sequence[int]) -> int:
        sign = 1
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j] and self.letter_degree(word[perm[i]]) % 2 \
                        and self.letter_degree(word[perm[j]]) % 2:
                    sign = -sign
        return sign

    def pbw(self, word: Word) -> Vector:
        """Symmetrization ``x_1…x_k -> (1/k!) Σ_σ ε(σ) x_σ(1)∗…∗x_σ(k)``"""
        if word in self._pbw:
            return self._pbw[word]
        out: Vector = {}
        k = len(word)
        weight = ONE / rational(math.factorial(k))
        for perm in itertools.permutations(range(k)):
            sign = self._permutation_sign(word, perm)
            add_to(out, self.normal_form(tuple(word[i] for i in perm)), weight * sign)
        self._pbw[word] = out
        return out

    def pbw_vector(self, vec: Vector) -> Vector:
        out: Vector = {}
        for word, c in vec.items():
            add_to(out, self.pbw(word), c)
        return out

    def pbw_inverse(self, word: Word) -> Vector:
        """Inverse of :meth:`pbw`; ``pbw(w) = w + shorter words``"""
        if word in self._pbw_inverse:
            return self._pbw_inverse[word]
        out: Vector = {word: ONE}
        for other, c in self.pbw(word).items():
            if other != word:
                add_to(out, self.pbw_inverse(other), -c)
        self._pbw_inverse[word] = out
        return out

    def pbw_inverse_vector(self, vec: Vector) -> Vector:
        out: Vector = {}
        for word, c in vec.items():
            add_to(out, self.pbw_inverse(word), c)
        return out

    def antipode(self, word: Word) -> Vector:
        k = len(word)
        sign = (-1) ** k * self._permutation_sign(word, list(range(k - 1, -1, -1)))
        return scaled(self.normal_form(tuple(reversed(word))), rational(sign))

    def antipode_vector(self, vec: Vector) -> Vector:
        out: Vector = {}
        for word, c in vec.items():
            add_to(out, self.antipode(word), c)
        return out

    def counit_vector(self, vec: Vector):
        return vec.get((), ZERO)

    def map_image(self, target: "UETruncation", f: Callable[[Hashable], Vector], word: Word) -> Vector:
        """``U(f)`` on a PBW word, f given on letters"""
        out: Vector = {(): ONE}
        for letter in word:
            out = target.product(out, target.letters_vector(f(letter)))
        return out

    def hopf_violations(self) -> List[Tuple[Word, Word]]:
        """Pairs of words with ``Δ(a∗b) ≠ Δ(a)∗Δ(b)`` inside the window"""
        bad = []
        words = self.space.labels
        for a in words:
            for b in words:
                if len(a) + len(b) > self.max_word:
                    continue
                lhs = self.comultiply_vector(self.product_words(a, b))
                rhs: Vector = {}
                for (a1, a2), x in self.comultiply(a).items():
                    for (b1, b2), y in self.comultiply(b).items():
                        sign = -1 if self.degree(a2) % 2 and self.degree(b1) % 2 else 1
                        for u, p in self.product_words(a1, b1).items():
                            for v, q in self.product_words(a2, b2).items():
                                add_term(rhs, (u, v), sign * x * y * p * q)
                if lhs != rhs:
                    bad.append((a, b))
        return bad


def pbw_map(U: UETruncation) -> CoalgebraMorphism:
    """The coalgebra isomorphism ``Sym^co(g) -> U(g)`` as a morphism on word bases"""
    sym = TruncatedSymCoalgebra(U.cogenerators, U.max_word, U.degrees)
    morphism = CoalgebraMorphism(sym, U, lambda word: U.linear_part(U.pbw(word)))
    return morphism


def pbw_inverse_map(U: UETruncation) -> LinearMap:
    sym = TruncatedSymCoalgebra(U.cogenerators, U.max_word, U.degrees)
    return LinearMap.from_function(U.space, sym.space, U.pbw_inverse)


def ue_product(U: UETruncation, w1: Word, w2: Word) -> Vector:
    if len(w1) + len(w2) > U.max_word:
        raise WordTooLong(f"Product of lengths {len(w1)}+{len(w2)} exceeds window {U.max_word}")
    return U.product_words(w1, w2)

"""
Lie, simplicial Lie, dg Lie and L∞ algebras

An L∞ algebra is stored as the codifferential of its Chevalley-Eilenberg
coalgebra ``Sym^co(T[1])``. Brackets ℓ_k are a derived view:
``δ¹_k(sx_1…sx_k) = (-1)^{Σ_i (k-i)(|x_i|+1)} s ℓ_k(x_1,…,x_k)``.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .coalg import CachedMap, CoalgebraMorphism, DgSymCoalgebra, TruncatedSymCoalgebra, Word
from .exactlin import (ONE, BasedSpace, LinearMap, Vector, add_to, rational, rref,
                       scaled)
from .simplicial import (ChainComplex, SimplicialMap, TruncatedSimplicialVS, Violation, check_structure,
                         dold_kan_K, em_vector, homology_iso, normalized_basis, normalized_chains)
from ..utils.exceptions import NotSquareZero, SchemaViolation
from ..utils.logger import logger


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _bilinear(bracket_letters: Callable, x: Vector, y: Vector) -> Vector:
    out: Vector = {}
    for a, u in x.items():
        for b, v in y.items():
            add_to(out, bracket_letters(a, b), u * v)
    return out


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants on ordered pairs"""

    def __init__(self, space: BasedSpace, structure: Dict[Tuple[Hashable, Hashable], Vector], name: str = ""):
        self.space = space
        self.name = name
        self.structure: Dict[Tuple, Vector] = {}
        for (a, b), vec in structure.items():
            if a not in space or b not in space or any(c not in space for c in vec):
                raise SchemaViolation(f"Structure constant [{a!r}, {b!r}] uses an unknown basis label")
            vec = {c: v for c, v in vec.items() if v}
            if vec:
                self.structure[(a, b)] = vec

    @classmethod
    def from_structure_constants(cls, labels: Sequence, constants: Dict, name: str = "") -> "LieAlgebra":
        """``constants[(a, b)] = {c: "p/q"}``; pairs absent from the table bracket to zero"""
        structure = {}
        for (a, b), vec in constants.items():
            structure[(a, b)] = {c: rational(v) for c, v in vec.items()}
        return cls(BasedSpace(tuple(labels)), structure, name)

    @classmethod
    def abelian(cls, labels: Sequence, name: str = "") -> "LieAlgebra":
        return cls(BasedSpace(tuple(labels)), {}, name)

    def degree(self, letter) -> int:
        return 0

    def bracket_letters(self, a, b) -> Vector:
        if (a, b) in self.structure:
            return self.structure[(a, b)]
        if (b, a) in self.structure:
            return scaled(self.structure[(b, a)], -ONE)
        return {}

    def bracket(self, x: Vector, y: Vector) -> Vector:
        return _bilinear(self.bracket_letters, x, y)

    def is_abelian(self) -> bool:
        return not self.structure

    def antisymmetry_violations(self) -> List[Tuple]:
        bad = []
        for (a, b), vec in self.structure.items():
            if a == b or ((b, a) in self.structure and add_to(dict(vec), self.structure[(b, a)])):
                bad.append((a, b))
        return bad

    def jacobi_violations(self) -> List[Tuple]:
        bad = []
        labels = self.space.labels
        for i, x in enumerate(labels):
            for j in range(i + 1, len(labels)):
                for k in range(j + 1, len(labels)):
                    y, z = labels[j], labels[k]
                    total: Vector = {}
                    add_to(total, self.bracket({x: ONE}, self.bracket_letters(y, z)))
                    add_to(total, self.bracket({y: ONE}, self.bracket_letters(z, x)))
                    add_to(total, self.bracket({z: ONE}, self.bracket_letters(x, y)))
                    if total:
                        bad.append((x, y, z))
        return bad

    def violations(self) -> List[str]:
        out = [f"antisymmetry at {pair}" for pair in self.antisymmetry_violations()]
        out += [f"Jacobi at {triple}" for triple in self.jacobi_violations()]
        return out

    def direct_sum(self, other: "LieAlgebra") -> "LieAlgebra":
        """``g ⊕ h`` with labels ``(0, a)`` and ``(1, b)``"""
        space = BasedSpace(tuple((0, a) for a in self.space.labels) + tuple((1, b) for b in other.space.labels))
        structure = {}
        for tag, algebra in ((0, self), (1, other)):
            for (a, b), vec in algebra.structure.items():
                structure[((tag, a), (tag, b))] = {(tag, c): v for c, v in vec.items()}
        return LieAlgebra(space, structure, f"{self.name}+{other.name}")

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'g'}, dim={self.space.dim})"


@dataclass
class LieAlgebraMap:
    source: LieAlgebra
    target: LieAlgebra
    linear: LinearMap

    def violations(self) -> List[Tuple]:
        """Pairs with ``f[a,b] ≠ [fa,fb]``"""
        bad = []
        f = self.linear
        labels = self.source.space.labels
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                lhs = f.apply(self.source.bracket_letters(a, b))
                rhs = self.target.bracket(f.columns[a], f.columns[b])
                if add_to(dict(lhs), rhs, -ONE):
                    bad.append((a, b))
        return bad


# ---------------------------------------------------------------------------
# simplicial Lie algebras
# ---------------------------------------------------------------------------

def _block_sum(f: LinearMap, g: LinearMap, source: BasedSpace, target: BasedSpace) -> LinearMap:
    columns = {}
    for tag, h in ((0, f), (1, g)):
        for s, col in h.columns.items():
            columns[(tag, s)] = {(tag, t): v for t, v in col.items()}
    return LinearMap(source, target, columns)


@dataclass
class SimplicialLieAlgebra:
    """Truncated simplicial vector space with a Lie bracket on every level"""
    underlying: TruncatedSimplicialVS
    algebras: List[LieAlgebra]
    name: str = ""

    @property
    def top_level(self) -> int:
        return self.underlying.top_level

    def level(self, n: int) -> LieAlgebra:
        return self.algebras[n]

    @classmethod
    def constant(cls, g: LieAlgebra, top_level: int) -> "SimplicialLieAlgebra":
        return cls(TruncatedSimplicialVS.constant(g.space, top_level), [g] * (top_level + 1), g.name)

    @classmethod
    def from_complex(cls, C: ChainComplex, top_level: int, name: str = "") -> "SimplicialLieAlgebra":
        """Abelian ``K(C)``"""
        V = dold_kan_K(C, top_level)
        return cls(V, [LieAlgebra(space, {}, name) for space in V.levels], name)

    def truncate(self, top_level: int) -> "SimplicialLieAlgebra":
        return SimplicialLieAlgebra(self.underlying.truncate(top_level), self.algebras[:top_level + 1], self.name)

    def direct_sum(self, other: "SimplicialLieAlgebra") -> "SimplicialLieAlgebra":
        top = min(self.top_level, other.top_level)
        algebras = [self.algebras[n].direct_sum(other.algebras[n]) for n in range(top + 1)]
        levels = [a.space for a in algebras]
        V, W = self.underlying, other.underlying
        faces = {(n, i): _block_sum(V.faces[(n, i)], W.faces[(n, i)], levels[n], levels[n - 1])
                 for (n, i) in V.faces if n <= top}
        degeneracies = {(n, j): _block_sum(V.degeneracies[(n, j)], W.degeneracies[(n, j)], levels[n], levels[n + 1])
                        for (n, j) in V.degeneracies if n < top}
        return SimplicialLieAlgebra(TruncatedSimplicialVS(levels, faces, degeneracies), algebras,
                                    f"{self.name}+{other.name}")

    def violations(self) -> List[Violation]:
        out = list(check_structure(self.underlying))
        for n, algebra in enumerate(self.algebras):
            for problem in algebra.violations():
                out.append(Violation(problem, n, "bracket"))
        maps = [(k, f, k[0] - 1) for k, f in self.underlying.faces.items()]
        maps += [(k, s, k[0] + 1) for k, s in self.underlying.degeneracies.items()]
        for (n, i), f, m in maps:
            if LieAlgebraMap(self.algebras[n], self.algebras[m], f).violations():
                kind = "d" if m < n else "s"
                out.append(Violation(f"{kind}{i} is a Lie map", n, "bracket"))
        return out


@dataclass
class SimplicialLieMap:
    source: SimplicialLieAlgebra
    target: SimplicialLieAlgebra
    components: List[LinearMap]

    def as_simplicial_map(self) -> SimplicialMap:
        return SimplicialMap(self.source.underlying, self.target.underlying, self.components)

    def violations(self) -> List[Violation]:
        out = self.as_simplicial_map().naturality_violations()
        for n, f in enumerate(self.components):
            if LieAlgebraMap(self.source.algebras[n], self.target.algebras[n], f).violations():
                out.append(Violation("f is a Lie map", n, "bracket"))
        return out

    def compose(self, other: "SimplicialLieMap") -> "SimplicialLieMap":
        """``self ∘ other``"""
        return SimplicialLieMap(other.source, self.target,
                                [f @ g for f, g in zip(self.components, other.components)])


# ---------------------------------------------------------------------------
# dg Lie algebras
# ---------------------------------------------------------------------------

class DgLieAlgebra:
    """Chain complex with a degree-0 graded bracket; letters are ``(degree, label)``"""

    def __init__(self, complex_: ChainComplex, structure: Dict[Tuple, Vector], name: str = ""):
        self.complex = complex_
        self.name = name
        self.space = BasedSpace(tuple((n, c) for n, space in enumerate(complex_.spaces) for c in space.labels))
        self.structure = {k: dict(v) for k, v in structure.items() if v}

    @classmethod
    def from_lie(cls, g: LieAlgebra) -> "DgLieAlgebra":
        structure = {((0, a), (0, b)): {(0, c): v for c, v in vec.items()} for (a, b), vec in g.structure.items()}
        return cls(ChainComplex([g.space]), structure, g.name)

    @property
    def top_degree(self) -> int:
        return self.complex.top_degree

    def degree(self, letter) -> int:
        return letter[0]

    def bracket_letters(self, a, b) -> Vector:
        if (a, b) in self.structure:
            return self.structure[(a, b)]
        if (b, a) in self.structure:
            return scaled(self.structure[(b, a)], rational(-_sign(a[0] * b[0])))
        return {}

    def bracket(self, x: Vector, y: Vector) -> Vector:
        return _bilinear(self.bracket_letters, x, y)

    def differential_letter(self, letter) -> Vector:
        n, c = letter
        if n == 0:
            return {}
        return {(n - 1, t): v for t, v in self.complex.differentials[n].columns[c].items()}

    def differential(self, x: Vector) -> Vector:
        out: Vector = {}
        for letter, c in x.items():
            add_to(out, self.differential_letter(letter), c)
        return out

    def antisymmetry_violations(self) -> List[Tuple]:
        bad = []
        for (a, b), vec in self.structure.items():
            if (b, a) not in self.structure:
                continue
            expected = scaled(vec, rational(-_sign(a[0] * b[0])))
            if expected != self.structure[(b, a)]:
                bad.append((a, b))
        return bad

    def jacobi_violations(self) -> List[Tuple]:
        """Triples violating ``Σ_cyc (-1)^{|x||z|} [x,[y,z]] = 0`` inside the window"""
        bad = []
        letters = self.space.labels
        top = self.top_degree
        for x in letters:
            for y in letters:
                for z in letters:
                    if x[0] + y[0] + z[0] > top:
                        continue
                    total: Vector = {}
                    add_to(total, self.bracket({x: ONE}, self.bracket_letters(y, z)), rational(_sign(x[0] * z[0])))
                    add_to(total, self.bracket({y: ONE}, self.bracket_letters(z, x)), rational(_sign(y[0] * x[0])))
                    add_to(total, self.bracket({z: ONE}, self.bracket_letters(x, y)), rational(_sign(z[0] * y[0])))
                    if total:
                        bad.append((x, y, z))
        return bad

    def leibniz_violations(self) -> List[Tuple]:
        """Pairs violating ``d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]``"""
        bad = []
        letters = self.space.labels
        for x in letters:
            for y in letters:
                if x[0] + y[0] > self.top_degree or x[0] + y[0] == 0:
                    continue
                gap = self.differential(self.bracket_letters(x, y))
                add_to(gap, self.bracket(self.differential_letter(x), {y: ONE}), -ONE)
                add_to(gap, self.bracket({x: ONE}, self.differential_letter(y)), rational(-_sign(x[0])))
                if gap:
                    bad.append((x, y))
        return bad

    def violations(self) -> List[str]:
        out = [f"square zero at degree {n}" for n in self.complex.square_zero_violations()]
        out += [f"antisymmetry at {pair}" for pair in self.antisymmetry_violations()]
        out += [f"Jacobi at {triple}" for triple in self.jacobi_violations()]
        out += [f"Leibniz at {pair}" for pair in self.leibniz_violations()]
        return out


def normalized_dg_lie(g: SimplicialLieAlgebra) -> DgLieAlgebra:
    """Moore complex with ``⟦x,y⟧ = [·,·] ∘ EM(x⊗y)``"""
    V = g.underlying
    NV = normalized_chains(V)
    bases = [normalized_basis(V, n) for n in range(V.top_level + 1)]
    structure: Dict[Tuple, Vector] = {}
    for p in range(V.top_level + 1):
        for q in range(V.top_level + 1 - p):
            algebra = g.algebras[p + q]
            basis = bases[p + q]
            for a in NV.spaces[p].labels:
                for b in NV.spaces[q].labels:
                    pairs = em_vector(V, V, NV.inclusions[p].columns[a], NV.inclusions[q].columns[b], p, q)
                    image: Vector = {}
                    for (u, v), c in pairs.items():
                        add_to(image, algebra.bracket_letters(u, v), c)
                    coords = basis.coordinates(image)
                    vec = {(p + q, piv): c for piv, c in zip(basis.pivots, coords) if c}
                    if vec:
                        structure[((p, a), (q, b))] = vec
    logger.debug(f"Normalized dg Lie algebra: dims {NV.dims()}, {len(structure)} nonzero brackets")
    return DgLieAlgebra(NV, structure, g.name)


# ---------------------------------------------------------------------------
# L∞ algebras
# ---------------------------------------------------------------------------

class LInfinityAlgebra:
    """Codifferential on ``Sym^co(T[1])`` given by its corestrictions δ¹ on words ≤ K

    Letters carry tangent degrees; their CE degree is one more.
    """

    def __init__(self, letters: BasedSpace, tangent_degrees: Dict, max_word: int,
                 corestriction: Dict[Word, Vector], top_degree: Optional[int] = None, name: str = ""):
        self.letters = letters
        self.tangent_degrees = dict(tangent_degrees)
        self.max_word = max_word
        self.top_degree = top_degree if top_degree is not None else max(self.tangent_degrees.values(), default=0)
        self.name = name
        self.coalgebra = TruncatedSymCoalgebra(letters, max_word,
                                               {a: self.tangent_degrees[a] + 1 for a in letters.labels},
                                               max_degree=self.top_degree + 1)
        self.corestriction = {w: dict(v) for w, v in corestriction.items() if v and len(w) <= max_word}
        self._codifferential = CachedMap(self._coderivation)

    @classmethod
    def from_dg_lie(cls, L: DgLieAlgebra, max_word: int) -> "LInfinityAlgebra":
        """CE(L): ``δ¹₁(sx) = s dx``, ``δ¹₂(sx sy) = (-1)^{|x|-1} s⟦x,y⟧``"""
        degrees = {a: a[0] for a in L.space.labels}
        coalgebra = TruncatedSymCoalgebra(L.space, max_word, {a: a[0] + 1 for a in L.space.labels},
                                          max_degree=L.top_degree + 1)
        corestriction: Dict[Word, Vector] = {}
        for word in coalgebra.space.labels:
            if len(word) == 1:
                corestriction[word] = L.differential_letter(word[0])
            elif len(word) == 2:
                x, y = word
                corestriction[word] = scaled(L.bracket_letters(x, y), rational(_sign(x[0] - 1)))
        return cls(L.space, degrees, max_word, corestriction, L.top_degree, L.name)

    def ce_degree(self, letter) -> int:
        return self.tangent_degrees[letter] + 1

    def corestriction_of(self, word: Word) -> Vector:
        return self.corestriction.get(tuple(word), {})

    def _coderivation(self, word: Word) -> Vector:
        out: Vector = {}
        C = self.coalgebra
        for sign, left, right in C.splittings(word):
            if not left:
                continue
            head = self.corestriction_of(left)
            if head:
                add_to(out, C.multiply(C.letters_vector(head), {right: ONE}), rational(sign))
        return out

    def codifferential(self, word: Word) -> Vector:
        return self._codifferential(tuple(word))

    def codifferential_vector(self, vec: Vector) -> Vector:
        return self._codifferential.apply(vec)

    def dg_coalgebra(self) -> DgSymCoalgebra:
        return DgSymCoalgebra(self.coalgebra, self._codifferential)

    def square_violations(self) -> List[Word]:
        return [w for w in self.coalgebra.space.labels if self.codifferential_vector(self.codifferential(w))]

    def tangent_complex(self) -> ChainComplex:
        """``Prim[-1]`` with ℓ₁ = δ¹₁"""
        spaces = [BasedSpace(tuple(a for a in self.letters.labels if self.tangent_degrees[a] == n))
                  for n in range(self.top_degree + 1)]
        differentials = {n: LinearMap.from_function(spaces[n], spaces[n - 1],
                                                    lambda a: self.corestriction_of((a,)))
                         for n in range(1, self.top_degree + 1)}
        return ChainComplex(spaces, differentials)

    def tangent_dims(self) -> List[int]:
        return self.tangent_complex().dims()

    def bracket_sign(self, word: Word) -> int:
        k = len(word)
        return _sign(sum((k - i) * self.ce_degree(a) for i, a in enumerate(word, start=1)))

    def brackets(self) -> Dict[int, Dict[Word, Vector]]:
        out: Dict[int, Dict[Word, Vector]] = {k: {} for k in range(1, self.max_word + 1)}
        for word, vec in self.corestriction.items():
            out[len(word)][word] = scaled(vec, rational(self.bracket_sign(word)))
        return out

    def is_lie_n_algebra(self, n: int) -> bool:
        """Tangent concentrated in degrees ≤ n-1"""
        return all(self.tangent_degrees[a] <= n - 1 for a in self.letters.labels)

    def with_window(self, max_word: int) -> "LInfinityAlgebra":
        return LInfinityAlgebra(self.letters, self.tangent_degrees, max_word, self.corestriction,
                                self.top_degree, self.name)


def ce_coalgebra(L, max_word: int) -> DgSymCoalgebra:
    """``CE(L)`` as a dg coalgebra, for a dg Lie or an L∞ algebra"""
    if isinstance(L, DgLieAlgebra):
        return LInfinityAlgebra.from_dg_lie(L, max_word).dg_coalgebra()
    return L.with_window(max_word).dg_coalgebra()


def brackets_from_codifferential(L: LInfinityAlgebra) -> Dict[int, Dict[Word, Vector]]:
    bad = L.square_violations()
    if bad:
        raise NotSquareZero(f"δ² ≠ 0 on word {bad[0]!r} (length {len(bad[0])})")
    return L.brackets()


def codifferential_from_brackets(letters: BasedSpace, tangent_degrees: Dict, brackets: Dict[int, Dict[Word, Vector]],
                                 max_word: int, top_degree: Optional[int] = None, name: str = "") -> LInfinityAlgebra:
    probe = LInfinityAlgebra(letters, tangent_degrees, max_word, {}, top_degree, name)
    corestriction = {}
    for table in brackets.values():
        for word, vec in table.items():
            corestriction[tuple(word)] = scaled(vec, rational(probe.bracket_sign(word)))
    return LInfinityAlgebra(letters, tangent_degrees, max_word, corestriction, top_degree, name)


def generalized_jacobi_check(L: LInfinityAlgebra) -> Dict:
    failures = [{"word": [repr(a) for a in w], "length": len(w)} for w in L.square_violations()]
    return {"passed": not failures, "failures": failures}


def tangent_complex(L: LInfinityAlgebra) -> ChainComplex:
    return L.tangent_complex()


class LInfinityMorphism:
    """Coalgebra morphism ``CE(L) -> CE(L')`` commuting with the codifferentials"""

    def __init__(self, source: LInfinityAlgebra, target: LInfinityAlgebra, components: Callable[[Word], Vector]):
        self.source = source
        self.target = target
        self.coalgebra_map = CoalgebraMorphism(source.coalgebra, target.coalgebra, components)

    @classmethod
    def strict(cls, source: LInfinityAlgebra, target: LInfinityAlgebra, f: LinearMap) -> "LInfinityMorphism":
        return cls(source, target, lambda word: dict(f.columns[word[0]]) if len(word) == 1 else {})

    def linear_part(self) -> LinearMap:
        return self.coalgebra_map.linear_part()

    def apply_word(self, word: Word) -> Vector:
        return self.coalgebra_map.apply_word(word)

    def violations(self) -> List[Word]:
        """Words with ``δ' F(w) ≠ F δ(w)``"""
        bad = []
        F = self.coalgebra_map
        for word in self.source.coalgebra.space.labels:
            lhs = self.target.codifferential_vector(F.apply_word(word))
            rhs = F.apply(self.source.codifferential(word))
            if add_to(dict(lhs), rhs, -ONE):
                bad.append(word)
        return bad

    def tangent_map(self) -> Dict[int, LinearMap]:
        src, tgt = self.source.tangent_complex(), self.target.tangent_complex()
        f = self.linear_part()
        top = min(src.top_degree, tgt.top_degree)
        return {n: LinearMap(src.spaces[n], tgt.spaces[n],
                             {a: tgt.spaces[n].restrict(f.columns[a]) for a in src.spaces[n].labels})
                for n in range(top + 1)}

    def compose(self, other: "LInfinityMorphism") -> "LInfinityMorphism":
        """``self ∘ other``"""
        composite = self.coalgebra_map.compose(other.coalgebra_map)
        return LInfinityMorphism(other.source, self.target, composite.components)


def is_weq(F: LInfinityMorphism) -> bool:
    """Tangent homology isomorphism below the top degree of the window"""
    src, tgt = F.source.tangent_complex(), F.target.tangent_complex()
    top = min(src.top_degree, tgt.top_degree)
    return homology_iso(F.tangent_map(), src, tgt, top)


def is_fib(F: LInfinityMorphism) -> bool:
    """Tangent map surjective in every degree of the window"""
    for n, f in F.tangent_map().items():
        if len(rref(list(f.columns.values()), f.target.labels)[1]) != f.target.dim:
            return False
    return True

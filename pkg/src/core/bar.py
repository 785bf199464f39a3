"""
Classifying spaces of simplicial groups and the comparison with K^co(CE)

Elements of ``U(g_n) ⊗ … ⊗ U(g_0)`` are stored as sorted words of letters
``(j, a)``: factor j, basis label a of g_j. Words are truncated by their
total length across factors; every structure map here is non-increasing in
that length, so the truncation is exact.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .coalg import (CachedMap, CoalgebraMorphism, DgSymCoalgebra, KcoLevel, SimplicialCoalgebra,
                    TruncatedSymCoalgebra, UETruncation, Word, coalgebra_exponential, kco_of_dg)
from .exactlin import ONE, BasedSpace, LinearMap, Vector, add_term, add_to, inverse, rational, scaled
from .liealg import DgLieAlgebra, LInfinityAlgebra, SimplicialLieAlgebra, normalized_dg_lie
from .shuffle import codegeneracy_composite, enumerate_shuffles
from .simplicial import (ChainComplex, SimplicialMap, TruncatedSimplicialVS, Violation, _k_face,
                         apply_degeneracies, dold_kan_K, normalized_chains, shift)
from ..utils.logger import logger


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _gap(lhs: LinearMap, rhs: LinearMap):
    return lhs.discrepancy(rhs)


# ---------------------------------------------------------------------------
# W and W̄ of U(g)
# ---------------------------------------------------------------------------

class WConstruction:
    """Level-wise data of ``𝒲 U(g)``, ``W̄ U(g)`` and ``W̄^inh U(g)``"""

    def __init__(self, g: SimplicialLieAlgebra, max_word: int):
        self.g = g
        self.max_word = max_word
        self.top_level = g.top_level
        self.U = [UETruncation(g.level(n), max_word) for n in range(g.top_level + 1)]
        self._face_cache: Dict = {}
        self._degeneracy_cache: Dict = {}
        self._levels: Dict[int, TruncatedSymCoalgebra] = {}

    # letters and words

    def letters(self, top: int) -> BasedSpace:
        """Letters of factors ``top, …, 0``, higher factors first"""
        return BasedSpace(tuple((j, a) for j in range(top, -1, -1) for a in self.g.level(j).space.labels))

    def coalgebra(self, top: int) -> TruncatedSymCoalgebra:
        if top not in self._levels:
            self._levels[top] = TruncatedSymCoalgebra(self.letters(top), self.max_word)
        return self._levels[top]

    def w_level(self, n: int) -> TruncatedSymCoalgebra:
        return self.coalgebra(n)

    def wbar_level(self, n: int) -> TruncatedSymCoalgebra:
        return self.coalgebra(n - 1)

    @staticmethod
    def split(word: Word, size: int) -> List[Word]:
        factors: List[List] = [[] for _ in range(size)]
        for j, a in word:
            factors[j].append(a)
        return [tuple(f) for f in factors]

    @staticmethod
    def join(factors: Sequence[Word]) -> Word:
        return tuple((j, a) for j in range(len(factors) - 1, -1, -1) for a in factors[j])

    def tensor(self, parts: Sequence[Vector]) -> Vector:
        """Tensor product of per-factor vectors, indexed by factor"""
        out: Vector = {}
        items = [list(p.items()) for p in parts]
        for combo in itertools.product(*items):
            if sum(len(w) for w, _ in combo) > self.max_word:
                continue
            coeff = ONE
            for _, c in combo:
                coeff *= c
            add_term(out, self.join([w for w, _ in combo]), coeff)
        return out

    def project(self, n: int, vec: Vector) -> Vector:
        """``π^W``: words meeting factor n are killed by the counit"""
        return {w: c for w, c in vec.items() if all(j != n for j, _ in w)}

    # structure of the levels U(g_n)

    def face_image(self, n: int, i: int, word: Word) -> Vector:
        key = (n, i, word)
        if key not in self._face_cache:
            face = self.g.underlying.faces[(n, i)]
            self._face_cache[key] = self.U[n].map_image(self.U[n - 1], lambda a: face.columns[a], word)
        return self._face_cache[key]

    def degeneracy_image(self, n: int, j: int, word: Word) -> Vector:
        key = (n, j, word)
        if key not in self._degeneracy_cache:
            s = self.g.underlying.degeneracies[(n, j)]
            self._degeneracy_cache[key] = self.U[n].map_image(self.U[n + 1], lambda a: s.columns[a], word)
        return self._degeneracy_cache[key]

    def face_vector(self, n: int, i: int, vec: Vector) -> Vector:
        out: Vector = {}
        for word, c in vec.items():
            add_to(out, self.face_image(n, i, word), c)
        return out

    def iterated_d0(self, n: int, k: int, vec: Vector) -> Vector:
        for step in range(k):
            vec = self.face_vector(n - step, 0, vec)
        return vec

    def diagonal(self, n: int, word: Word, pieces: int) -> Dict[Tuple[Word, ...], object]:
        """Iterated coproduct ``Δ_pieces`` of a word of U(g_n)"""
        out: Dict[Tuple[Word, ...], object] = {(word,): ONE}
        for _ in range(pieces - 1):
            nxt: Dict = {}
            for key, c in out.items():
                for (left, right), d in self.U[n].comultiply(key[0]).items():
                    add_term(nxt, (left, right) + key[1:], c * d)
            out = nxt
        return out

    # 𝒲

    def w_face(self, n: int, i: int, word: Word) -> Vector:
        F = self.split(word, n + 1)
        parts: List[Vector] = [{}] * n
        if i < n:
            for j in range(n, n - i, -1):
                parts[j - 1] = self.face_image(j, i - (n - j), F[j])
            k = n - i
            parts[k - 1] = self.U[k - 1].product(self.face_image(k, 0, F[k]), {F[k - 1]: ONE})
            for j in range(k - 1):
                parts[j] = {F[j]: ONE}
        else:
            if F[0]:
                return {}
            for j in range(1, n + 1):
                parts[j - 1] = self.face_image(j, j, F[j])
        return self.tensor(parts)

    def w_degeneracy(self, n: int, i: int, word: Word) -> Vector:
        F = self.split(word, n + 1)
        parts: List[Vector] = [{}] * (n + 2)
        for j in range(n, n - i - 1, -1):
            parts[j + 1] = self.degeneracy_image(j, i - (n - j), F[j])
        parts[n - i] = {(): ONE}
        for j in range(n - i):
            parts[j] = {F[j]: ONE}
        return self.tensor(parts)

    def w_recursive_face(self, n: int, i: int, word: Word) -> Vector:
        """``d_i(g_n, rest) = (d_i g_n, d_{i-1}(rest))`` for i ≥ 1"""
        F = self.split(word, n + 1)
        rest = self.join(F[:n])
        out: Vector = {}
        for top, c in self.face_image(n, i, F[n]).items():
            for tail, d in self.w_face(n - 1, i - 1, rest).items():
                if len(top) + len(tail) <= self.max_word:
                    add_term(out, tuple((n - 1, a) for a in top) + tail, c * d)
        return out

    # W̄

    def wbar_face(self, n: int, i: int, word: Word) -> Vector:
        return self.project(n - 1, self.w_face(n, i, word))

    def wbar_degeneracy(self, n: int, i: int, word: Word) -> Vector:
        return self.project(n + 1, self.w_degeneracy(n, i, word))

    # W̄^inh

    def inh_face(self, n: int, i: int, word: Word) -> Vector:
        F = self.split(word, n)
        if i == 0:
            if n == 1:
                return {(): ONE} if not F[0] else {}
            out: Vector = {}
            for pieces, c in self.diagonal(n - 1, F[n - 1], n - 1).items():
                parts: List[Vector] = [{}] * (n - 1)
                for k in range(1, n):
                    j = n - 1 - k
                    inverse_piece = self.U[j].antipode_vector(self.iterated_d0(n - 1, k, {pieces[k - 1]: ONE}))
                    parts[j] = self.U[j].product({F[j]: ONE}, inverse_piece)
                add_to(out, self.tensor(parts), c)
            return out
        if F[n - i]:
            return {}
        parts = [{}] * (n - 1)
        for j in range(n - 1, n - i, -1):
            parts[j - 1] = self.face_image(j, i - n + j, F[j])
        for j in range(n - i):
            parts[j] = {F[j]: ONE}
        return self.tensor(parts)

    def inh_degeneracy(self, n: int, i: int, word: Word) -> Vector:
        if i == 0:
            return {word: ONE}
        F = self.split(word, n)
        k = n - i
        out: Vector = {}
        for (first, second), c in self.U[k].comultiply(F[k]).items():
            parts: List[Vector] = [{}] * (n + 1)
            for j in range(n - 1, k, -1):
                parts[j + 1] = self.degeneracy_image(j, i - n + j, F[j])
            parts[k + 1] = self.degeneracy_image(k, 0, first)
            parts[k] = {second: ONE}
            for j in range(k):
                parts[j] = {F[j]: ONE}
            add_to(out, self.tensor(parts), c)
        return out

    def phi_wbar(self, n: int, word: Word) -> Vector:
        """``φ_W̄: W̄^inh_n -> W̄_n``"""
        if n == 0:
            return {word: ONE}
        F = self.split(word, n)
        splits = [[((F[0], ()), ONE)]] + [list(self.U[j].comultiply(F[j]).items()) for j in range(1, n)]
        out: Vector = {}
        for combo in itertools.product(*splits):
            coeff = ONE
            for _, c in combo:
                coeff *= c
            parts: List[Vector] = []
            for j in range(n):
                first = combo[j][0][0]
                head = self.face_image(j + 1, 0, combo[j + 1][0][1]) if j + 1 <= n - 1 else {(): ONE}
                parts.append(self.U[j].product(head, self.U[j].antipode(first)))
            add_to(out, self.tensor(parts), coeff)
        return out

    def pbw_tensor(self, n: int, word: Word) -> Vector:
        """``pbw_{n-1} ⊗ … ⊗ pbw_0`` on a word of ``Sym^co(g_{n-1} ⊕ … ⊕ g_0)``"""
        F = self.split(word, n)
        return self.tensor([self.U[j].pbw(F[j]) for j in range(n)])


# ---------------------------------------------------------------------------
# assembled simplicial coalgebras
# ---------------------------------------------------------------------------

def _assemble(levels: List[TruncatedSymCoalgebra], face, degeneracy, top: int) -> SimplicialCoalgebra:
    faces = {(n, i): LinearMap.from_function(levels[n].space, levels[n - 1].space,
                                             lambda w: face(n, i, w))
             for n in range(1, top + 1) for i in range(n + 1)}
    degeneracies = {(n, j): LinearMap.from_function(levels[n].space, levels[n + 1].space,
                                                    lambda w: degeneracy(n, j, w))
                    for n in range(top) for j in range(n + 1)}
    return SimplicialCoalgebra(levels, faces, degeneracies, weighted=True)


@dataclass
class WTotalSpace:
    """``𝒲 U(g)`` with its extra degeneracy ``σ_n: 𝒲_n -> 𝒲_{n+1}``"""
    construction: WConstruction
    coalgebra: SimplicialCoalgebra
    extra: Dict[int, LinearMap] = field(default_factory=dict)

    @property
    def top_level(self) -> int:
        return self.coalgebra.top_level

    def extra_degeneracy_violations(self) -> List[Violation]:
        X, sigma, N = self.coalgebra, self.extra, self.top_level
        out = []

        def record(name: str, level: int, lhs: LinearMap, rhs: LinearMap):
            gap = _gap(lhs, rhs)
            if gap:
                out.append(Violation(name, level, gap))

        for n in range(N):
            record("d0σ=id", n, X.faces[(n + 1, 0)] @ sigma[n], LinearMap.identity(X.levels[n].space))
        for n in range(1, N):
            for i in range(n + 1):
                record(f"d{i + 1}σ=σd{i}", n, X.faces[(n + 1, i + 1)] @ sigma[n], sigma[n - 1] @ X.faces[(n, i)])
        for n in range(N - 1):
            for j in range(n + 1):
                record(f"s{j + 1}σ=σs{j}", n, X.degeneracies[(n + 1, j + 1)] @ sigma[n],
                       sigma[n + 1] @ X.degeneracies[(n, j)])
        for n in range(1, N):
            record("s0σ=σσ", n, X.degeneracies[(n, 0)] @ sigma[n - 1], sigma[n] @ sigma[n - 1])
        return out

    def recursion_violations(self) -> List[Violation]:
        W = self.construction
        out = []
        for n in range(2, self.top_level + 1):
            for i in range(1, n + 1):
                level = W.w_level(n)
                for word in level.space.labels:
                    if W.w_face(n, i, word) != W.w_recursive_face(n, i, word):
                        out.append(Violation(f"d{i} recursion", n, word))
                        break
        return out


def w_total(g: SimplicialLieAlgebra, max_word: int) -> WTotalSpace:
    W = WConstruction(g, max_word)
    N = g.top_level
    levels = [W.w_level(n) for n in range(N + 1)]
    X = _assemble(levels, W.w_face, W.w_degeneracy, N)
    extra = {n: LinearMap.from_function(levels[n].space, levels[n + 1].space, lambda w: {w: ONE})
             for n in range(N)}
    logger.debug(f"W U(g): level dims {[level.space.dim for level in levels]}")
    return WTotalSpace(W, X, extra)


def wbar(g: SimplicialLieAlgebra, max_word: int, construction: Optional[WConstruction] = None) -> SimplicialCoalgebra:
    """``W̄ U(g)`` on levels ``0..N``; level n is ``U(g_{n-1}) ⊗ … ⊗ U(g_0)``"""
    W = construction or WConstruction(g, max_word)
    N = g.top_level
    levels = [W.wbar_level(n) for n in range(N + 1)]
    X = _assemble(levels, W.wbar_face, W.wbar_degeneracy, N)
    logger.debug(f"W̄ U(g): level dims {[level.space.dim for level in levels]}")
    return X


def quotient_map(total: WTotalSpace, base: SimplicialCoalgebra) -> SimplicialMap:
    """``π^W`` as a simplicial map of the underlying spaces"""
    W = total.construction
    components = [LinearMap.from_function(total.coalgebra.levels[n].space, base.levels[n].space,
                                          lambda w: W.project(n, {w: ONE}))
                  for n in range(min(total.top_level, base.top_level) + 1)]
    return SimplicialMap(total.coalgebra.underlying_vs(), base.underlying_vs(), components)


def wbar_inhomogeneous(g: SimplicialLieAlgebra, max_word: int,
                       construction: Optional[WConstruction] = None) -> SimplicialCoalgebra:
    W = construction or WConstruction(g, max_word)
    N = g.top_level
    levels = [W.wbar_level(n) for n in range(N + 1)]
    return _assemble(levels, W.inh_face, W.inh_degeneracy, N)


def phi_wbar(g: SimplicialLieAlgebra, max_word: int,
             construction: Optional[WConstruction] = None) -> List[LinearMap]:
    """Level-wise matrices of ``φ_W̄: W̄^inh U(g) -> W̄ U(g)``"""
    W = construction or WConstruction(g, max_word)
    return [LinearMap.from_function(W.wbar_level(n).space, W.wbar_level(n).space,
                                    lambda w: W.phi_wbar(n, w))
            for n in range(g.top_level + 1)]


# ---------------------------------------------------------------------------
# linear versions for simplicial vector spaces
# ---------------------------------------------------------------------------

def _wbar_letters(V: TruncatedSimplicialVS, n: int) -> BasedSpace:
    return BasedSpace(tuple((j, a) for j in range(n - 1, -1, -1) for a in V.levels[j].labels))


def _lift(j: int, vec: Vector) -> Vector:
    return {(j, t): v for t, v in vec.items()}


def _linear_face(V: TruncatedSimplicialVS, n: int, i: int, letter) -> Vector:
    j, a = letter
    if i == 0:
        return {} if j == n - 1 else {letter: ONE}
    if j >= n - i:
        return {} if j == 0 else _lift(j - 1, V.faces[(j, i - n + j)].columns[a])
    return {letter: ONE}


def _linear_degeneracy(V: TruncatedSimplicialVS, n: int, i: int, letter) -> Vector:
    j, a = letter
    if j >= n - i:
        return _lift(j + 1, V.degeneracies[(j, i - n + j)].columns[a])
    return {letter: ONE}


def _iterated_face0(V: TruncatedSimplicialVS, level: int, k: int, vec: Vector) -> Vector:
    for step in range(k):
        vec = V.faces[(level - step, 0)].apply(vec)
    return vec


def _linear_inh_face(V: TruncatedSimplicialVS, n: int, i: int, letter) -> Vector:
    j, a = letter
    if i == 0:
        if j != n - 1:
            return {letter: ONE}
        out: Vector = {}
        for k in range(1, n):
            add_to(out, _lift(n - 1 - k, _iterated_face0(V, n - 1, k, {a: ONE})), -ONE)
        return out
    if j == n - i:
        return {}
    if j > n - i:
        return _lift(j - 1, V.faces[(j, i - n + j)].columns[a])
    return {letter: ONE}


def _linear_inh_degeneracy(V: TruncatedSimplicialVS, n: int, i: int, letter) -> Vector:
    j, a = letter
    if i == 0 or j < n - i:
        return {letter: ONE}
    if j == n - i:
        return add_to(_lift(j + 1, V.degeneracies[(j, 0)].columns[a]), {letter: ONE})
    return _lift(j + 1, V.degeneracies[(j, i - n + j)].columns[a])


def _linear_object(V: TruncatedSimplicialVS, top: int, face, degeneracy) -> TruncatedSimplicialVS:
    levels = [_wbar_letters(V, n) for n in range(top + 1)]
    faces = {(n, i): LinearMap.from_function(levels[n], levels[n - 1], lambda x: face(V, n, i, x))
             for n in range(1, top + 1) for i in range(n + 1)}
    degeneracies = {(n, j): LinearMap.from_function(levels[n], levels[n + 1], lambda x: degeneracy(V, n, j, x))
                    for n in range(top) for j in range(n + 1)}
    return TruncatedSimplicialVS(levels, faces, degeneracies)


def wbar_linear(V: TruncatedSimplicialVS, top_level: Optional[int] = None) -> TruncatedSimplicialVS:
    """``W̄ V`` of a simplicial vector space seen as an abelian group"""
    top = V.top_level + 1 if top_level is None else top_level
    return _linear_object(V, top, _linear_face, _linear_degeneracy)


def wbar_inh_linear(V: TruncatedSimplicialVS, top_level: Optional[int] = None) -> TruncatedSimplicialVS:
    top = V.top_level + 1 if top_level is None else top_level
    return _linear_object(V, top, _linear_inh_face, _linear_inh_degeneracy)


def phi_wbar_linear(V: TruncatedSimplicialVS, top_level: Optional[int] = None) -> SimplicialMap:
    """``x`` at factor j goes to ``-x`` at j plus ``d_0 x`` at j-1"""
    source = wbar_inh_linear(V, top_level)
    target = wbar_linear(V, top_level)

    def image(letter) -> Vector:
        j, a = letter
        out = {letter: -ONE}
        if j >= 1:
            add_to(out, _lift(j - 1, V.faces[(j, 0)].columns[a]))
        return out

    components = [LinearMap.from_function(source.levels[n], target.levels[n], image)
                  for n in range(source.top_level + 1)]
    return SimplicialMap(source, target, components)


def phi_vect(V: TruncatedSimplicialVS) -> SimplicialMap:
    """``K(sNV) ≅ W̄(V)``; on ``sx``, x ∈ N_{m-1}: ``(-1)^m x + (-1)^{m-1} d_0 x``"""
    NV = normalized_chains(V)
    suspended = shift(NV, 1)
    source = dold_kan_K(suspended)
    target = wbar_linear(V, source.top_level)
    components = []
    for n in range(source.top_level + 1):
        columns = {}
        for B, c in source.levels[n].labels:
            m = n - len(B)
            x = NV.inclusions[m - 1].columns[c]
            base = scaled(_lift(m - 1, x), rational(_sign(m)))
            if m >= 2:
                add_to(base, _lift(m - 2, V.faces[(m - 1, 0)].apply(x)), rational(_sign(m - 1)))
            columns[(B, c)] = apply_degeneracies(target, B, base, m)
        components.append(LinearMap(source.levels[n], target.levels[n], columns))
    logger.debug(f"K(sNV) -> W̄V: dims {[level.dim for level in source.levels]}")
    return SimplicialMap(source, target, components)


# ---------------------------------------------------------------------------
# the canonical PBW basis of W̄ U(g)
# ---------------------------------------------------------------------------

@dataclass
class CanonicalWitness:
    """``Wit_n = φ_W̄ ∘ pbw^⊗: Sym^co(W̄^inh g)_n -> W̄ U(g)_n`` and the transported model"""
    construction: WConstruction
    target: SimplicialCoalgebra
    linear: TruncatedSimplicialVS
    forward: List[LinearMap]
    backward: List[LinearMap]
    model: SimplicialCoalgebra

    @property
    def top_level(self) -> int:
        return self.target.top_level

    def almost_violations(self) -> List[Violation]:
        """Positive faces and degeneracies intertwined by the witness"""
        out = []
        for (n, i), d in self.target.faces.items():
            if not i:
                continue
            gap = _gap(d @ self.forward[n], self.forward[n - 1] @ self.model.faces[(n, i)])
            if gap:
                out.append(Violation(f"d{i} Wit = Wit Sym(d{i})", n, gap))
        for (n, j), s in self.target.degeneracies.items():
            gap = _gap(s @ self.forward[n], self.forward[n + 1] @ self.model.degeneracies[(n, j)])
            if gap:
                out.append(Violation(f"s{j} Wit = Wit Sym(s{j})", n, gap))
        return out

    def comultiplicativity_violations(self) -> List[Violation]:
        out = []
        for n, wit in enumerate(self.forward):
            C = self.target.levels[n]
            for word in C.space.labels:
                lhs = C.comultiply_vector(wit.columns[word])
                rhs: Vector = {}
                for (a, b), c in C.comultiply(word).items():
                    for x, u in wit.columns[a].items():
                        for y, v in wit.columns[b].items():
                            add_term(rhs, (x, y), c * u * v)
                if lhs != rhs:
                    out.append(Violation("Δ Wit = (Wit⊗Wit) Δ", n, word))
                    break
        return out


def canonical_pbw_wbar(g: SimplicialLieAlgebra, max_word: int,
                       construction: Optional[WConstruction] = None) -> CanonicalWitness:
    W = construction or WConstruction(g, max_word)
    target = wbar(g, max_word, W)
    linear = wbar_inh_linear(g.underlying, g.top_level)
    levels = target.levels
    forward, backward = [], []
    for n, level in enumerate(levels):
        pbw = LinearMap.from_function(level.space, level.space, lambda w: W.pbw_tensor(n, w))
        phi = LinearMap.from_function(level.space, level.space, lambda w: W.phi_wbar(n, w))
        wit = phi @ pbw
        forward.append(wit)
        backward.append(inverse(wit))

    def sym(f: LinearMap, n: int, m: int) -> LinearMap:
        return CoalgebraMorphism.from_linear(levels[n], levels[m], f).matrix()

    faces = {}
    for (n, i), d in target.faces.items():
        if i:
            faces[(n, i)] = sym(linear.faces[(n, i)], n, n - 1)
        else:
            faces[(n, i)] = backward[n - 1] @ d @ forward[n]
    degeneracies = {(n, j): sym(s, n, n + 1) for (n, j), s in linear.degeneracies.items()}
    model = SimplicialCoalgebra(levels, faces, degeneracies, weighted=True)
    logger.debug(f"Canonical PBW witness built on levels {[level.space.dim for level in levels]}")
    return CanonicalWitness(W, target, linear, forward, backward, model)


def prim_letters(X: SimplicialCoalgebra) -> TruncatedSimplicialVS:
    """Length-one words of a level-wise Sym^co object with the restricted maps"""
    spaces = [BasedSpace(tuple(w for w in level.space.labels if len(w) == 1)) for level in X.levels]

    def restrict(f: LinearMap, n: int, m: int) -> LinearMap:
        return LinearMap(spaces[n], spaces[m], {w: spaces[m].restrict(f.columns[w]) for w in spaces[n].labels})

    faces = {(n, i): restrict(f, n, n - 1) for (n, i), f in X.faces.items()}
    degeneracies = {(n, j): restrict(s, n, n + 1) for (n, j), s in X.degeneracies.items()}
    return TruncatedSimplicialVS(spaces, faces, degeneracies, X.almost)


def xi_g(g: SimplicialLieAlgebra, max_word: int, target: Optional[SimplicialCoalgebra] = None) -> SimplicialMap:
    """``ξ_g: W̄(g) -> Prim W̄ U(g)``, the inclusion of letters as length-one words"""
    target = target or wbar(g, max_word)
    source = wbar_linear(g.underlying, g.top_level)
    prim = prim_letters(target)
    components = [LinearMap.from_function(source.levels[n], prim.levels[n], lambda letter: {(letter,): ONE})
                  for n in range(source.top_level + 1)]
    return SimplicialMap(source, prim, components)


# ---------------------------------------------------------------------------
# the acyclic dg coalgebra U(Ng) ⊗ S(sNg)
# ---------------------------------------------------------------------------

class EUCoalgebra:
    """``U(Ng) ⊗ Sym^co(sNg)`` on letters ``("u", x)`` and ``("s", x)``

    ``δ_E(z⊗w) = (-1)^{|z|} z⊗δ_CE w + d_U z⊗w + (-1)^{|z|} θ(z⊗w)`` with
    ``θ(z⊗sx_1…sx_k) = Σ_i (-1)^{|w_i||x_i| + n_i} z∗x_i ⊗ w_i`` and
    ``n_i = |w| + Σ_{j>i} |sx_j||sx_i|`` for the sorted word w, so θ is the
    coderivation extending ``θ(1⊗sx) = (-1)^{|sx|} x⊗1``.
    """

    def __init__(self, L: DgLieAlgebra, max_word: int, top_degree: Optional[int] = None):
        self.L = L
        self.max_word = max_word
        self.top_degree = L.top_degree if top_degree is None else top_degree
        self.enveloping = UETruncation(L, max_word)
        self.ce = LInfinityAlgebra.from_dg_lie(L, max_word)
        letters = [("u", x) for x in L.space.labels] + [("s", x) for x in L.space.labels]
        degrees = {("u", x): x[0] for x in L.space.labels}
        degrees.update({("s", x): x[0] + 1 for x in L.space.labels})
        self.coalgebra = TruncatedSymCoalgebra(BasedSpace(tuple(letters)), max_word, degrees,
                                               max_degree=self.top_degree)
        self._delta = CachedMap(self._codifferential)
        self._d_u = CachedMap(self._enveloping_differential)

    @staticmethod
    def split(word: Word) -> Tuple[Word, Word]:
        return (tuple(x for tag, x in word if tag == "u"), tuple(x for tag, x in word if tag == "s"))

    @staticmethod
    def join(z: Word, w: Word) -> Word:
        return tuple(("u", x) for x in z) + tuple(("s", x) for x in w)

    def u_degree(self, z: Word) -> int:
        return sum(x[0] for x in z)

    def s_degree(self, w: Word) -> int:
        return sum(x[0] + 1 for x in w)

    def _enveloping_differential(self, z: Word) -> Vector:
        """Graded derivation extending d on PBW words"""
        out: Vector = {}
        passed = 0
        for i, x in enumerate(z):
            for y, c in self.L.differential_letter(x).items():
                add_to(out, self.enveloping.normal_form(z[:i] + (y,) + z[i + 1:]), c * _sign(passed))
            passed += x[0]
        return out

    def d_u(self, z: Word) -> Vector:
        return self._d_u(tuple(z))

    def theta(self, z: Word, w: Word) -> Vector:
        out: Vector = {}
        total = self.s_degree(w)
        for i, x in enumerate(w):
            rest = w[:i] + w[i + 1:]
            sx = x[0] + 1
            n_i = total + sum((y[0] + 1) * sx for y in w[i + 1:])
            sign = _sign(self.s_degree(rest) * x[0] + n_i)
            for zz, c in self.enveloping.normal_form(tuple(z) + (x,)).items():
                if len(zz) + len(rest) <= self.max_word:
                    add_term(out, self.join(zz, rest), sign * c)
        return out

    def _codifferential(self, word: Word) -> Vector:
        z, w = self.split(word)
        sz = _sign(self.u_degree(z))
        out: Vector = {}
        if w:
            for w2, c in self.ce.codifferential(w).items():
                add_term(out, self.join(z, w2), sz * c)
        for z2, c in self.d_u(z).items():
            add_term(out, self.join(z2, w), c)
        add_to(out, self.theta(z, w), rational(sz))
        return out

    def delta(self, word: Word) -> Vector:
        return self._delta(tuple(word))

    def delta_vector(self, vec: Vector) -> Vector:
        return self._delta.apply(vec)

    def dg(self) -> DgSymCoalgebra:
        return DgSymCoalgebra(self.coalgebra, self._delta)

    def enveloping_dg(self) -> DgSymCoalgebra:
        return DgSymCoalgebra(self.enveloping, self._d_u)

    def square_violations(self) -> List[Word]:
        return [w for w in self.coalgebra.space.labels if self.delta_vector(self.delta(w))]


def eu_coalgebra(g: SimplicialLieAlgebra, max_word: int) -> EUCoalgebra:
    return EUCoalgebra(normalized_dg_lie(g), max_word, g.top_level)


# ---------------------------------------------------------------------------
# ρ, φ and ψ
# ---------------------------------------------------------------------------

class ComparisonMaps:
    """``ψ = π^W ∘ φ ∘ ι: K^co(CE(Ng)) -> W̄ U(g)`` and its ingredients"""

    def __init__(self, g: SimplicialLieAlgebra, max_word: int, construction: Optional[WConstruction] = None):
        self.g = g
        self.max_word = max_word
        self.top_level = g.top_level
        self.W = construction or WConstruction(g, max_word)
        self.NV = normalized_chains(g.underlying)
        self.eu = eu_coalgebra(g, max_word)
        self.L = self.eu.L
        self.eu_complex: ChainComplex = self.eu.dg().chain_complex(self.top_level)
        self.u_dg = self.eu.enveloping_dg()
        self._rho: Dict[int, CachedMap] = {}
        self._phi: Dict[int, CachedMap] = {}
        self._psi: Dict[int, CachedMap] = {}
        self._kce: Optional[SimplicialCoalgebra] = None
        self._wbar: Optional[SimplicialCoalgebra] = None

    # α

    def alpha(self, n: int, label) -> List[Tuple[int, Tuple, Tuple]]:
        """``(π_U ⊗ π_S) Δ`` of a K^co(EU) simplex, as ``(sign, (a, z), (b, w))``"""
        B, c = label
        z, w = self.eu.split(c)
        p, q = self.eu.u_degree(z), self.eu.s_degree(w)
        eta = codegeneracy_composite(B, n)
        out = []
        for sh in enumerate_shuffles(p, q):
            a = codegeneracy_composite(sh.J, p + q).compose(eta).degeneracy_set()
            b = codegeneracy_composite(sh.I, p + q).compose(eta).degeneracy_set()
            out.append((sh.sign, (a, z), (b, w)))
        return out

    # ρ

    def _linear_rho(self, n: int, label) -> Vector:
        a, z = label
        if not z:
            return {}
        m = n - len(a)
        vec: Vector = {}
        for word, c in self.eu.enveloping.pbw_inverse(z).items():
            if len(word) == 1:
                degree, pivot = word[0]
                add_to(vec, self.NV.inclusions[degree].columns[pivot], c)
        return apply_degeneracies(self.g.underlying, a, vec, m)

    def rho(self, n: int) -> CachedMap:
        """``ρ_n: K^co_n U(Ng) -> U(g_n)``, the coalgebra map with the linear part above"""
        if n not in self._rho:
            level = KcoLevel(self.u_dg, n)
            target = TruncatedSymCoalgebra(self.g.level(n).space, self.max_word)
            exponential = coalgebra_exponential(level, lambda label: self._linear_rho(n, label), target)
            U = self.W.U[n]
            self._rho[n] = CachedMap(lambda label: U.pbw_vector(exponential(label)))
        return self._rho[n]

    # φ

    def _phi_value(self, n: int, label) -> Vector:
        B, c = label
        if n == 0:
            z, _ = self.eu.split(c)
            return {tuple((0, x[1]) for x in z): ONE}
        out: Vector = {}
        rho = self.rho(n)
        lower = self.phi(n - 1)
        for sign, head_label, (b, w) in self.alpha(n, label):
            head = rho(head_label)
            if not head:
                continue
            tail: Vector = {}
            for face_label, x in _k_face(self.eu_complex, n, 0, b, self.eu.join((), w)).items():
                add_to(tail, lower(face_label), x)
            for hw, u in head.items():
                for tw, v in tail.items():
                    if len(hw) + len(tw) <= self.max_word:
                        add_term(out, tuple((n, a) for a in hw) + tw, sign * u * v)
        return out

    def phi(self, n: int) -> CachedMap:
        """``φ_n: K^co_n(EU(Ng)) -> 𝒲_n U(g)``"""
        if n not in self._phi:
            self._phi[n] = CachedMap(lambda label: self._phi_value(n, label))
        return self._phi[n]

    def psi(self, n: int) -> CachedMap:
        if n not in self._psi:
            self._psi[n] = CachedMap(
                lambda label: self.W.project(n, self.phi(n)((label[0], self.eu.join((), label[1])))))
        return self._psi[n]

    # assembled objects

    def kco_ce(self) -> SimplicialCoalgebra:
        if self._kce is None:
            self._kce = kco_of_dg(self.eu.ce.dg_coalgebra(), self.top_level)
        return self._kce

    def wbar(self) -> SimplicialCoalgebra:
        if self._wbar is None:
            self._wbar = wbar(self.g, self.max_word, self.W)
        return self._wbar

    def psi_level(self, n: int) -> LinearMap:
        return LinearMap.from_function(self.kco_ce().levels[n].space, self.wbar().levels[n].space, self.psi(n))

    def psi_map(self) -> SimplicialMap:
        components = [self.psi_level(n) for n in range(self.top_level + 1)]
        return SimplicialMap(self.kco_ce().underlying_vs(), self.wbar().underlying_vs(), components)

    # checks

    def closed_form_violations(self) -> List[Violation]:
        """``φ_n(y⊗1) = y`` at factor n, and ``ψ(sx) = (-1)^n x + (-1)^{n-1} d_0 x``"""
        out = []
        for letter in self.L.space.labels:
            m, pivot = letter
            x = self.NV.inclusions[m].columns[pivot]
            if m >= 1:
                expected = {((m, a),): v for a, v in x.items()}
                got = self.phi(m)(((), self.eu.join((letter,), ())))
                if got != expected:
                    out.append(Violation("φ(y⊗1) = y", m, letter))
            n = m + 1
            if n > self.top_level:
                continue
            expected = {((m, a),): _sign(n) * v for a, v in x.items()}
            if m >= 1:
                dx: Vector = {}
                for (k, p), c in self.L.differential_letter(letter).items():
                    add_to(dx, self.NV.inclusions[k].columns[p], c)
                for a, v in dx.items():
                    add_term(expected, ((m - 1, a),), _sign(n - 1) * v)
            if self.psi(n)(((), (letter,))) != expected:
                out.append(Violation("ψ(sx) closed form", n, letter))
        return out

    def face_violations(self) -> List[Violation]:
        return self.psi_map().naturality_violations()

    def coalgebra_violations(self) -> List[Violation]:
        out = []
        X, Y = self.kco_ce(), self.wbar()
        for n in range(self.top_level + 1):
            psi = self.psi(n)
            source, target = X.levels[n], Y.levels[n]
            for label in source.space.labels:
                lhs = target.comultiply_vector(psi(label))
                rhs: Vector = {}
                for (a, b), c in source.comultiply(label).items():
                    for x, u in psi(a).items():
                        for y, v in psi(b).items():
                            add_term(rhs, (x, y), c * u * v)
                if lhs != rhs:
                    out.append(Violation("Δψ = (ψ⊗ψ)Δ", n, label))
                    break
        return out

    def app_map_violations(self) -> List[Violation]:
        """``d_0^W φ_m = φ_{m-1} d_0`` on simplices whose U-part has length ≤ 1"""
        out = []
        kco = dold_kan_K(self.eu_complex, self.top_level)
        for m in range(1, self.top_level + 1):
            lower = self.phi(m - 1)
            for B, c in kco.levels[m].labels:
                z, _ = self.eu.split(c)
                if len(z) > 1:
                    continue
                lhs: Vector = {}
                for word, x in self.phi(m)((B, c)).items():
                    add_to(lhs, self.W.w_face(m, 0, word), x)
                rhs: Vector = {}
                for label, x in _k_face(self.eu_complex, m, 0, B, c).items():
                    add_to(rhs, lower(label), x)
                if lhs != rhs:
                    out.append(Violation("d0 φ = φ d0", m, (B, c)))
                    break
        return out

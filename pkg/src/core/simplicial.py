"""
Truncated simplicial and cosimplicial vector spaces

Structure maps are keyed by the level they leave:

* face ``(n, i)``: ``V_n -> V_{n-1}``
* degeneracy ``(n, j)``: ``V_n -> V_{n+1}``
* coface ``(n, i)``: ``A^n -> A^{n+1}``
* codegeneracy ``(n, j)``: ``A^n -> A^{n-1}``

The Moore complex is ``N_n = ∩_{i≥1} ker d_i`` with differential ``d_0``.
"""

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exactlin import (ONE, ZERO, BasedSpace, EchelonBasis, LinearMap, Vector, inverse, kernel, rational, rref,
                       scaled)
from .shuffle import codegeneracy_composite, coface, enumerate_shuffles, factor_order_map
from ..utils.exceptions import AlmostInput, NegativeDegree, NotSimplicialMap
from ..utils.logger import logger


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

@dataclass
class ChainComplex:
    """Degree-wise based spaces with ``d_n: C_n -> C_{n-1}``"""
    spaces: List[BasedSpace]
    differentials: Dict[int, LinearMap] = field(default_factory=dict)
    inclusions: Optional[List[LinearMap]] = None

    def __post_init__(self):
        for n in range(1, len(self.spaces)):
            if n not in self.differentials:
                self.differentials[n] = LinearMap.zero(self.spaces[n], self.spaces[n - 1])

    @property
    def top_degree(self) -> int:
        return len(self.spaces) - 1

    def dims(self) -> List[int]:
        return [space.dim for space in self.spaces]

    def differential(self, n: int) -> LinearMap:
        return self.differentials[n]

    def square_zero_violations(self) -> List[int]:
        return [n for n in range(2, len(self.spaces))
                if not (self.differentials[n - 1] @ self.differentials[n]).is_zero()]

    def cycles(self, n: int) -> List[Vector]:
        if n == 0:
            return [{label: ONE} for label in self.spaces[0].labels]
        return kernel(self.differentials[n])

    def boundaries(self, n: int) -> List[Vector]:
        if n + 1 > self.top_degree:
            return []
        return rref(list(self.differentials[n + 1].columns.values()), self.spaces[n].labels)[0]

    def homology_dims(self, below: Optional[int] = None) -> List[int]:
        """Dimensions of H_n for n < below (default: every degree with a known boundary space)"""
        below = self.top_degree if below is None else below
        return [len(self.cycles(n)) - len(self.boundaries(n)) for n in range(min(below, self.top_degree + 1))]

    def same_matrices(self, other: "ChainComplex") -> bool:
        """Equal dims and equal differential matrices in the stored bases"""
        if self.dims() != other.dims():
            return False
        return all(self.differentials[n].matrix() == other.differentials[n].matrix()
                   for n in range(1, len(self.spaces)))


@dataclass
class CochainComplex:
    """Degree-wise based spaces with ``δ^n: C^n -> C^{n+1}``"""
    spaces: List[BasedSpace]
    differentials: Dict[int, LinearMap] = field(default_factory=dict)
    inclusions: Optional[List[LinearMap]] = None

    def __post_init__(self):
        for n in range(len(self.spaces) - 1):
            if n not in self.differentials:
                self.differentials[n] = LinearMap.zero(self.spaces[n], self.spaces[n + 1])

    @property
    def top_degree(self) -> int:
        return len(self.spaces) - 1

    def dims(self) -> List[int]:
        return [space.dim for space in self.spaces]

    def square_zero_violations(self) -> List[int]:
        return [n for n in range(len(self.spaces) - 2)
                if not (self.differentials[n + 1] @ self.differentials[n]).is_zero()]

    def same_matrices(self, other: "CochainComplex") -> bool:
        if self.dims() != other.dims():
            return False
        return all(self.differentials[n].matrix() == other.differentials[n].matrix()
                   for n in range(len(self.spaces) - 1))

    def dual(self) -> ChainComplex:
        """Degree-wise dual chain complex, ``d_{n+1} = (δ^n)^T``"""
        return ChainComplex(list(self.spaces),
                            {n + 1: d.transpose() for n, d in self.differentials.items()})


def shift(C: ChainComplex, n: int) -> ChainComplex:
    """``(C[n])_k = C_{k-n}``; the differential carries no sign"""
    if n < 0:
        if any(C.spaces[k].dim for k in range(min(-n, len(C.spaces)))):
            raise NegativeDegree(f"Shift by {n} moves a nonzero space below degree 0")
        spaces = C.spaces[-n:]
        return ChainComplex(list(spaces), {k: C.differentials[k - n] for k in range(1, len(spaces))})
    spaces = [BasedSpace(()) for _ in range(n)] + list(C.spaces)
    differentials = {k + n: d for k, d in C.differentials.items()}
    if n and C.spaces:
        differentials[n] = LinearMap.zero(C.spaces[0], spaces[n - 1])
    return ChainComplex(spaces, differentials)


# ---------------------------------------------------------------------------
# simplicial and cosimplicial vector spaces
# ---------------------------------------------------------------------------

@dataclass
class Violation:
    identity: str
    level: int
    discrepancy: object

    def to_dict(self) -> Dict:
        return {"identity": self.identity, "level": self.level, "discrepancy": str(self.discrepancy)}


@dataclass
class TruncatedSimplicialVS:
    """Levels ``0..N`` with faces and degeneracies; ``almost`` drops every d_0"""
    levels: List[BasedSpace]
    faces: Dict[Tuple[int, int], LinearMap]
    degeneracies: Dict[Tuple[int, int], LinearMap]
    almost: bool = False

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    def face(self, n: int, i: int) -> LinearMap:
        if i == 0 and self.almost:
            raise AlmostInput("Almost simplicial object has no d0")
        return self.faces[(n, i)]

    def degeneracy(self, n: int, j: int) -> LinearMap:
        return self.degeneracies[(n, j)]

    def forget_d0(self) -> "TruncatedSimplicialVS":
        return TruncatedSimplicialVS(list(self.levels), {k: f for k, f in self.faces.items() if k[1]},
                                     dict(self.degeneracies), almost=True)

    def truncate(self, top_level: int) -> "TruncatedSimplicialVS":
        return TruncatedSimplicialVS(
            self.levels[:top_level + 1],
            {k: f for k, f in self.faces.items() if k[0] <= top_level},
            {k: s for k, s in self.degeneracies.items() if k[0] < top_level},
            self.almost)

    def tensor(self, other: "TruncatedSimplicialVS") -> "TruncatedSimplicialVS":
        """Level-wise tensor product, basis labels are ordered pairs"""
        top = min(self.top_level, other.top_level)
        levels = [self.levels[n].tensor(other.levels[n]) for n in range(top + 1)]
        faces = {k: f.tensor(other.faces[k]) for k, f in self.faces.items()
                 if k[0] <= top and k in other.faces}
        degeneracies = {k: s.tensor(other.degeneracies[k]) for k, s in self.degeneracies.items()
                        if k[0] < top}
        return TruncatedSimplicialVS(levels, faces, degeneracies, self.almost or other.almost)

    def dual(self) -> "TruncatedCosimplicialVS":
        return TruncatedCosimplicialVS(
            list(self.levels),
            {(n - 1, i): f.transpose() for (n, i), f in self.faces.items()},
            {(n + 1, j): s.transpose() for (n, j), s in self.degeneracies.items()},
            self.almost)

    @classmethod
    def constant(cls, space: BasedSpace, top_level: int) -> "TruncatedSimplicialVS":
        identity = LinearMap.identity(space)
        faces = {(n, i): identity for n in range(1, top_level + 1) for i in range(n + 1)}
        degeneracies = {(n, j): identity for n in range(top_level) for j in range(n + 1)}
        return cls([space] * (top_level + 1), faces, degeneracies)


@dataclass
class TruncatedCosimplicialVS:
    """Levels ``0..N`` with cofaces and codegeneracies; ``almost`` drops every d^0"""
    levels: List[BasedSpace]
    cofaces: Dict[Tuple[int, int], LinearMap]
    codegeneracies: Dict[Tuple[int, int], LinearMap]
    almost: bool = False

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    def coface(self, n: int, i: int) -> LinearMap:
        if i == 0 and self.almost:
            raise AlmostInput("Almost cosimplicial object has no d^0")
        return self.cofaces[(n, i)]

    def codegeneracy(self, n: int, j: int) -> LinearMap:
        return self.codegeneracies[(n, j)]

    def dual(self) -> TruncatedSimplicialVS:
        return TruncatedSimplicialVS(
            list(self.levels),
            {(n + 1, i): d.transpose() for (n, i), d in self.cofaces.items()},
            {(n - 1, j): s.transpose() for (n, j), s in self.codegeneracies.items()},
            self.almost)

    def tensor(self, other: "TruncatedCosimplicialVS") -> "TruncatedCosimplicialVS":
        return self.dual().tensor(other.dual()).dual()


@dataclass
class SimplicialMap:
    """Level-wise linear maps between truncated simplicial spaces"""
    source: TruncatedSimplicialVS
    target: TruncatedSimplicialVS
    components: List[LinearMap]

    def naturality_violations(self) -> List[Violation]:
        out = []
        top = min(self.source.top_level, self.target.top_level, len(self.components) - 1)
        for (n, i), d in self.source.faces.items():
            if n > top or (n, i) not in self.target.faces:
                continue
            gap = (self.target.faces[(n, i)] @ self.components[n]).discrepancy(self.components[n - 1] @ d)
            if gap:
                out.append(Violation(f"f d{i} = d{i} f", n, gap))
        for (n, j), s in self.source.degeneracies.items():
            if n + 1 > top:
                continue
            gap = (self.target.degeneracies[(n, j)] @ self.components[n]).discrepancy(self.components[n + 1] @ s)
            if gap:
                out.append(Violation(f"f s{j} = s{j} f", n, gap))
        return out

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ other``"""
        return SimplicialMap(other.source, self.target,
                             [f @ g for f, g in zip(self.components, other.components)])


def check_structure(X: Union[TruncatedSimplicialVS, TruncatedCosimplicialVS]) -> List[Violation]:
    """Every violated (co)simplicial identity inside the truncation window"""
    if isinstance(X, TruncatedCosimplicialVS):
        return [Violation("co:" + v.identity, v.level, v.discrepancy) for v in check_structure(X.dual())]

    V = X
    N = V.top_level
    lo = 1 if V.almost else 0
    out: List[Violation] = []

    def record(name: str, level: int, lhs: LinearMap, rhs: LinearMap):
        gap = lhs.discrepancy(rhs)
        if gap:
            out.append(Violation(name, level, gap))

    for n in range(2, N + 1):
        for j in range(1, n + 1):
            for i in range(lo, j):
                record(f"d{i}d{j}=d{j - 1}d{i}", n,
                       V.faces[(n - 1, i)] @ V.faces[(n, j)], V.faces[(n - 1, j - 1)] @ V.faces[(n, i)])
    for n in range(N):
        identity = LinearMap.identity(V.levels[n])
        for j in range(n + 1):
            s = V.degeneracies[(n, j)]
            for i in range(n + 2):
                if i == 0 and V.almost:
                    continue
                d = V.faces[(n + 1, i)]
                if i < j:
                    record(f"d{i}s{j}=s{j - 1}d{i}", n, d @ s, V.degeneracies[(n - 1, j - 1)] @ V.faces[(n, i)])
                elif i in (j, j + 1):
                    record(f"d{i}s{j}=id", n, d @ s, identity)
                else:
                    record(f"d{i}s{j}=s{j}d{i - 1}", n, d @ s, V.degeneracies[(n - 1, j)] @ V.faces[(n, i - 1)])
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                record(f"s{i}s{j}=s{j + 1}s{i}", n,
                       V.degeneracies[(n + 1, i)] @ V.degeneracies[(n, j)],
                       V.degeneracies[(n + 1, j + 1)] @ V.degeneracies[(n, i)])
    return out


# ---------------------------------------------------------------------------
# Moore complexes
# ---------------------------------------------------------------------------

def _stacked(maps: Sequence[LinearMap], source: BasedSpace) -> LinearMap:
    """``x -> (f_1 x, ..., f_r x)`` into a tagged direct sum"""
    labels = tuple((k, t) for k, f in enumerate(maps) for t in f.target.labels)
    columns = {s: {(k, t): v for k, f in enumerate(maps) for t, v in f.columns[s].items()}
               for s in source.labels}
    return LinearMap(source, BasedSpace(labels), columns)


def normalized_basis(V: TruncatedSimplicialVS, n: int) -> EchelonBasis:
    """RREF basis of ``∩_{i≥1} ker d_i`` on level n"""
    if n == 0:
        return EchelonBasis([{label: ONE} for label in V.levels[0].labels], list(V.levels[0].labels))
    stacked = _stacked([V.faces[(n, i)] for i in range(1, n + 1)], V.levels[n])
    vectors = kernel(stacked)
    return EchelonBasis(vectors, [next(iter(label for label in V.levels[n].labels if label in v))
                                  for v in vectors])


def _basis_space(basis: EchelonBasis) -> BasedSpace:
    return BasedSpace(tuple(basis.pivots))


def _inclusion(basis: EchelonBasis, ambient: BasedSpace) -> LinearMap:
    return LinearMap(_basis_space(basis), ambient, dict(zip(basis.pivots, basis.rows)))


def _restricted(f: LinearMap, src: EchelonBasis, dst: EchelonBasis) -> LinearMap:
    """Matrix of f between subspaces, assuming f(src) ⊆ dst"""
    source, target = _basis_space(src), _basis_space(dst)
    columns = {}
    for pivot, row in zip(src.pivots, src.rows):
        image = f.apply(row)
        columns[pivot] = {p: c for p, c in zip(dst.pivots, dst.coordinates(image)) if c}
    return LinearMap(source, target, columns)


def normalized_chains(V: TruncatedSimplicialVS) -> ChainComplex:
    """Moore complex with differential d_0"""
    if V.almost:
        raise AlmostInput("normalized_chains needs d0; use normalized_graded")
    bases = [normalized_basis(V, n) for n in range(V.top_level + 1)]
    spaces = [_basis_space(b) for b in bases]
    differentials = {n: _restricted(V.faces[(n, 0)], bases[n], bases[n - 1]) for n in range(1, len(bases))}
    inclusions = [_inclusion(b, V.levels[n]) for n, b in enumerate(bases)]
    logger.debug(f"Normalized chains: dims {[s.dim for s in spaces]}")
    return ChainComplex(spaces, differentials, inclusions)


def normalized_graded(V: TruncatedSimplicialVS) -> List[BasedSpace]:
    """Degree-wise Moore kernels without differential"""
    return [_basis_space(normalized_basis(V, n)) for n in range(V.top_level + 1)]


def normalized_map(f: SimplicialMap, n: int) -> LinearMap:
    return _restricted(f.components[n], normalized_basis(f.source, n), normalized_basis(f.target, n))


# ---------------------------------------------------------------------------
# Dold-Kan K
# ---------------------------------------------------------------------------

def _index_sets(n: int, C: ChainComplex) -> List[Tuple[int, ...]]:
    sets = []
    for k in range(n + 1):
        if n - k > C.top_degree:
            continue
        sets.extend(itertools.combinations(range(n), k))
    return sets


def dold_kan_labels(C: ChainComplex, n: int) -> Tuple:
    """Labels ``(B, c)`` of ``K_n(C)``; B is the degeneracy set, c a basis label of C_{n-|B|}"""
    return tuple((B, c) for B in _index_sets(n, C) for c in C.spaces[n - len(B)].labels)


def _k_face(C: ChainComplex, n: int, i: int, B: Tuple[int, ...], c) -> Vector:
    eta = codegeneracy_composite(B, n)
    m = eta.m
    epi, image = factor_order_map([eta(t) for t in coface(i, n)])
    if image == tuple(range(m + 1)):
        return {(epi.degeneracy_set(), c): ONE}
    if image == tuple(range(1, m + 1)):
        B2 = epi.degeneracy_set()
        return {(B2, c2): v for c2, v in C.differentials[m].columns[c].items()}
    return {}


def _k_degeneracy(n: int, j: int, B: Tuple[int, ...], c) -> Vector:
    eta = codegeneracy_composite(B, n)
    composite = [eta(t if t <= j else t - 1) for t in range(n + 2)]
    epi, _ = factor_order_map(composite)
    return {(epi.degeneracy_set(), c): ONE}


def dold_kan_K(C: ChainComplex, top_level: Optional[int] = None) -> TruncatedSimplicialVS:
    """``K_n(C) = ⊕_{B ⊆ [n-1]} C_{n-|B|}``, with d_0 = d_C and d_{i≥1} = 0 on C_n"""
    N = C.top_degree if top_level is None else top_level
    if N > C.top_degree:
        extra = [BasedSpace(()) for _ in range(N - C.top_degree)]
        C = ChainComplex(list(C.spaces) + extra, dict(C.differentials))
    levels = [BasedSpace(dold_kan_labels(C, n)) for n in range(N + 1)]
    faces = {}
    for n in range(1, N + 1):
        for i in range(n + 1):
            faces[(n, i)] = LinearMap.from_function(levels[n], levels[n - 1],
                                                    lambda label: _k_face(C, n, i, *label))
    degeneracies = {}
    for n in range(N):
        for j in range(n + 1):
            degeneracies[(n, j)] = LinearMap.from_function(levels[n], levels[n + 1],
                                                           lambda label: _k_degeneracy(n, j, *label))
    return TruncatedSimplicialVS(levels, faces, degeneracies)


def dold_kan_dimension(C: ChainComplex, n: int) -> int:
    return sum(comb(n, k) * C.spaces[n - k].dim for k in range(n + 1) if n - k <= C.top_degree)


def dold_kan_unit(V: TruncatedSimplicialVS) -> SimplicialMap:
    """The comparison ``K(N V) -> V`` sending ``(B, c)`` to ``s_B c``"""
    NV = normalized_chains(V)
    KNV = dold_kan_K(NV)
    components = []
    for n in range(V.top_level + 1):
        columns = {}
        for (B, c) in KNV.levels[n].labels:
            m = n - len(B)
            vec = NV.inclusions[m].columns[c]
            columns[(B, c)] = apply_degeneracies(V, B, vec, m)
        components.append(LinearMap(KNV.levels[n], V.levels[n], columns))
    return SimplicialMap(KNV, V, components)


# ---------------------------------------------------------------------------
# Eilenberg-MacLane shuffle map
# ---------------------------------------------------------------------------

def apply_degeneracies(V: TruncatedSimplicialVS, J: Sequence[int], vec: Vector, level: int) -> Vector:
    """``s_J v``: for J increasing, apply s_{j_1} first"""
    for j in J:
        vec = V.degeneracies[(level, j)].apply(vec)
        level += 1
    return vec


def em_vector(V: TruncatedSimplicialVS, W: TruncatedSimplicialVS, v: Vector, w: Vector,
              p: int, q: int) -> Vector:
    """``Σ sgn(I,J) s_J v ⊗ s_I w`` on level p+q of V ⊗ W"""
    out: Vector = {}
    for sh in enumerate_shuffles(p, q):
        left = apply_degeneracies(V, sh.J, v, p)
        right = apply_degeneracies(W, sh.I, w, q)
        sign = sh.sign
        for a, x in left.items():
            for b, y in right.items():
                value = out.get((a, b), ZERO) + sign * x * y
                if value:
                    out[(a, b)] = value
                else:
                    out.pop((a, b), None)
    return out


def em_shuffle(V: TruncatedSimplicialVS, W: TruncatedSimplicialVS, p: int, q: int,
               NV: Optional[ChainComplex] = None, NW: Optional[ChainComplex] = None,
               VW: Optional[TruncatedSimplicialVS] = None) -> LinearMap:
    """``EM: N_p(V) ⊗ N_q(W) -> N_{p+q}(V ⊗ W)`` in Moore bases"""
    NV = NV or normalized_chains(V)
    NW = NW or normalized_chains(W)
    VW = VW or V.tensor(W)
    target = normalized_basis(VW, p + q)
    source = NV.spaces[p].tensor(NW.spaces[q])
    columns = {}
    for a in NV.spaces[p].labels:
        for b in NW.spaces[q].labels:
            image = em_vector(V, W, NV.inclusions[p].columns[a], NW.inclusions[q].columns[b], p, q)
            columns[(a, b)] = {piv: c for piv, c in zip(target.pivots, target.coordinates(image)) if c}
    return LinearMap(source, _basis_space(target), columns)


# ---------------------------------------------------------------------------
# cosimplicial Dold-Kan
# ---------------------------------------------------------------------------

def conormalized_basis(A: TruncatedCosimplicialVS, n: int) -> EchelonBasis:
    """RREF basis of ``∩_j ker s^j`` on level n"""
    if n == 0:
        return EchelonBasis([{label: ONE} for label in A.levels[0].labels], list(A.levels[0].labels))
    stacked = _stacked([A.codegeneracies[(n, j)] for j in range(n)], A.levels[n])
    vectors = kernel(stacked)
    return EchelonBasis(vectors, [next(label for label in A.levels[n].labels if label in v)
                                  for v in vectors])


def alternating_coface(A: TruncatedCosimplicialVS, n: int) -> LinearMap:
    """``Σ_i (-1)^{n+1+i} d^i: A^n -> A^{n+1}``"""
    total = LinearMap.zero(A.levels[n], A.levels[n + 1])
    for i in range(n + 2):
        total = total + A.cofaces[(n, i)].scale((-1) ** (n + 1 + i))
    return total


def cosimplicial_N(A: TruncatedCosimplicialVS) -> CochainComplex:
    if A.almost:
        raise AlmostInput("cosimplicial_N needs d^0; use cosimplicial_normalized_graded")
    bases = [conormalized_basis(A, n) for n in range(A.top_level + 1)]
    spaces = [_basis_space(b) for b in bases]
    differentials = {n: _restricted(alternating_coface(A, n), bases[n], bases[n + 1])
                     for n in range(len(bases) - 1)}
    inclusions = [_inclusion(b, A.levels[n]) for n, b in enumerate(bases)]
    return CochainComplex(spaces, differentials, inclusions)


def cosimplicial_normalized_graded(A: TruncatedCosimplicialVS) -> List[BasedSpace]:
    return [_basis_space(conormalized_basis(A, n)) for n in range(A.top_level + 1)]


def cosimplicial_K(C: CochainComplex) -> TruncatedCosimplicialVS:
    """Dual of K applied to ``D_n = (C^n)^∨`` with ``d_{n+1} = (-1)^{n+1} (δ^n)^T``"""
    D = ChainComplex(list(C.spaces),
                     {n + 1: d.transpose().scale((-1) ** (n + 1)) for n, d in C.differentials.items()})
    return dold_kan_K(D).dual()


def _gram(cochains: EchelonBasis, chains: EchelonBasis) -> Dict:
    return {(a, alpha): sum((row_a.get(k, ZERO) * v for k, v in row_alpha.items()), ZERO)
            for a, row_a in zip(cochains.pivots, cochains.rows)
            for alpha, row_alpha in zip(chains.pivots, chains.rows)}


def dual_em(A: TruncatedCosimplicialVS, B: TruncatedCosimplicialVS, p: int, q: int) -> LinearMap:
    """``N^{p+q}(A ⊗ B) -> N^p(A) ⊗ N^q(B)``, transpose of EM twisted by ``(-1)^{pq}``"""
    Av, Bv = A.dual(), B.dual()
    AB = A.tensor(B)
    NA, NB, NAB = conormalized_basis(A, p), conormalized_basis(B, q), conormalized_basis(AB, p + q)
    CA, CB = normalized_basis(Av, p), normalized_basis(Bv, q)
    GA, GB = _gram(NA, CA), _gram(NB, CB)

    target = _basis_space(NA).tensor(_basis_space(NB))
    pairs = BasedSpace(tuple((alpha, beta) for alpha in CA.pivots for beta in CB.pivots))
    gram = LinearMap(target, pairs, {
        (a, b): {(alpha, beta): GA[(a, alpha)] * GB[(b, beta)]
                 for alpha in CA.pivots for beta in CB.pivots if GA[(a, alpha)] and GB[(b, beta)]}
        for a in NA.pivots for b in NB.pivots})
    solve_gram = inverse(gram)

    sign = (-1) ** (p * q)
    images = {(alpha, beta): em_vector(Av, Bv, ra, rb, p, q)
              for alpha, ra in zip(CA.pivots, CA.rows) for beta, rb in zip(CB.pivots, CB.rows)}
    columns = {}
    for x, row in zip(NAB.pivots, NAB.rows):
        paired = {}
        for key, image in images.items():
            value = sum((row.get(k, ZERO) * v for k, v in image.items()), ZERO)
            if value:
                paired[key] = sign * value
        columns[x] = solve_gram.apply(paired)
    return LinearMap(_basis_space(NAB), target, columns)


def em_chain_map_violations(V: TruncatedSimplicialVS, W: TruncatedSimplicialVS,
                            max_total: Optional[int] = None) -> List[Tuple[int, int]]:
    """Pairs (p, q) where ``d∘EM ≠ EM∘(d⊗1) + (-1)^p EM∘(1⊗d)``"""
    top = min(V.top_level, W.top_level)
    top = top if max_total is None else min(top, max_total)
    NV, NW = normalized_chains(V), normalized_chains(W)
    VW = V.tensor(W)
    NVW = normalized_chains(VW)
    cache: Dict[Tuple[int, int], LinearMap] = {}

    def em(p: int, q: int) -> LinearMap:
        if (p, q) not in cache:
            cache[(p, q)] = em_shuffle(V, W, p, q, NV, NW, VW)
        return cache[(p, q)]

    bad = []
    for total in range(1, top + 1):
        for p in range(total + 1):
            q = total - p
            lhs = NVW.differentials[total] @ em(p, q)
            rhs = LinearMap.zero(lhs.source, lhs.target)
            if p:
                rhs = rhs + em(p - 1, q) @ NV.differentials[p].tensor(LinearMap.identity(NW.spaces[q]))
            if q:
                rhs = rhs + (em(p, q - 1) @ LinearMap.identity(NV.spaces[p]).tensor(NW.differentials[q])).scale(
                    (-1) ** p)
            if lhs != rhs:
                bad.append((p, q))
    return bad


def em_symmetry_violations(V: TruncatedSimplicialVS, W: TruncatedSimplicialVS,
                           max_total: Optional[int] = None) -> List[Tuple[int, int]]:
    """Pairs (p, q) where ``τ EM(v⊗w) ≠ (-1)^{pq} EM(w⊗v)`` on Moore basis vectors"""
    top = min(V.top_level, W.top_level)
    top = top if max_total is None else min(top, max_total)
    NV, NW = normalized_chains(V), normalized_chains(W)
    bad = []
    for total in range(top + 1):
        for p in range(total + 1):
            q = total - p
            sign = (-1) ** (p * q)
            for v in NV.inclusions[p].columns.values():
                for w in NW.inclusions[q].columns.values():
                    swapped = {(b, a): c for (a, b), c in em_vector(V, W, v, w, p, q).items()}
                    if swapped != scaled(em_vector(W, V, w, v, q, p), sign):
                        bad.append((p, q))
                        break
                else:
                    continue
                break
    return bad


def dual_em_coassociativity_violations(A: TruncatedCosimplicialVS, B: TruncatedCosimplicialVS,
                                       C: TruncatedCosimplicialVS, max_total: Optional[int] = None
                                       ) -> List[Tuple[int, int, int]]:
    """Triples where both ways of splitting ``N*(A⊗B⊗C)`` with the dual shuffle disagree"""
    top = min(A.top_level, B.top_level, C.top_level)
    top = top if max_total is None else min(top, max_total)
    NA, NB, NC = (cosimplicial_normalized_graded(X) for X in (A, B, C))
    AB, BC = A.tensor(B), B.tensor(C)
    bad = []
    for total in range(top + 1):
        for p in range(total + 1):
            for q in range(total - p + 1):
                r = total - p - q
                left = dual_em(A, B, p, q).tensor(LinearMap.identity(NC[r])) @ dual_em(AB, C, p + q, r)
                right = LinearMap.identity(NA[p]).tensor(dual_em(B, C, q, r)) @ dual_em(A, BC, p, q + r)
                moved = {(a, (b, c)): {(x, (y, z)): v for ((x, y), z), v in col.items()}
                         for ((a, b), c), col in left.columns.items()}
                if moved != right.columns:
                    bad.append((p, q, r))
    return bad


# ---------------------------------------------------------------------------
# homotopy classes of maps
# ---------------------------------------------------------------------------

def _require_simplicial(f: SimplicialMap):
    violations = f.naturality_violations()
    if violations:
        first = violations[0]
        raise NotSimplicialMap(f"{first.identity} fails at level {first.level}")


def is_fibration(f: SimplicialMap) -> bool:
    """N_k(f) surjective for 1 ≤ k ≤ N"""
    _require_simplicial(f)
    for k in range(1, f.target.top_level + 1):
        Nf = normalized_map(f, k)
        if len(rref(list(Nf.columns.values()), Nf.target.labels)[1]) != Nf.target.dim:
            return False
    return True


def homology_iso(f_chain: Dict[int, LinearMap], src: ChainComplex, tgt: ChainComplex, below: int) -> bool:
    """Whether chain-level components induce isomorphisms on H_k for k < below"""
    for k in range(below):
        Z_src, Z_tgt = src.cycles(k), tgt.cycles(k)
        B_src, B_tgt = src.boundaries(k), tgt.boundaries(k)
        if len(Z_src) - len(B_src) != len(Z_tgt) - len(B_tgt):
            return False
        images = [f_chain[k].apply(z) for z in Z_src] + list(B_tgt)
        if len(rref(images, tgt.spaces[k].labels)[1]) != len(Z_tgt):
            return False
    return True


def is_weak_equivalence(f: SimplicialMap) -> bool:
    """Homology isomorphism of Moore complexes in degrees below the top level"""
    _require_simplicial(f)
    src, tgt = normalized_chains(f.source), normalized_chains(f.target)
    top = min(f.source.top_level, f.target.top_level)
    components = {k: normalized_map(f, k) for k in range(top + 1)}
    return homology_iso(components, src, tgt, top)


# ---------------------------------------------------------------------------
# seeded random inputs
# ---------------------------------------------------------------------------

def _random_unitriangular(rng: random.Random, space: BasedSpace) -> LinearMap:
    columns = {}
    for j, s in enumerate(space.labels):
        col = {s: ONE}
        for i in range(j):
            value = rng.randint(-2, 2)
            if value:
                col[space.labels[i]] = rational(value)
        columns[s] = col
    return LinearMap(space, space, columns)


def random_chain_complex(seed: int, top_degree: int, max_dim: int = 3, reduced: bool = False) -> ChainComplex:
    """Split complex ``B ⊕ H ⊕ E`` conjugated by random unitriangular changes of basis

    ``reduced`` forces ``C_0 = 0``.
    """
    rng = random.Random(seed)
    bounds = [rng.randint(0, max_dim // 2) if n < top_degree else 0 for n in range(top_degree + 1)]
    if reduced:
        bounds[0] = 0
    spaces, parts = [], []
    for n in range(top_degree + 1):
        e = bounds[n - 1] if n else 0
        h = rng.randint(0, max(0, max_dim - bounds[n] - e))
        if reduced and n == 0:
            h = 0
        parts.append((bounds[n], h, e))
        spaces.append(BasedSpace(tuple(range(bounds[n] + h + e))))
    differentials = {}
    for n in range(1, top_degree + 1):
        b, h, e = parts[n]
        columns = {b + h + k: {k: ONE} for k in range(e)}
        differentials[n] = LinearMap(spaces[n], spaces[n - 1], columns)
    changes = [_random_unitriangular(rng, space) for space in spaces]
    inverses = [inverse(P) for P in changes]
    return ChainComplex(spaces, {n: changes[n - 1] @ d @ inverses[n] for n, d in differentials.items()})


def conjugate(V: TruncatedSimplicialVS, changes: Sequence[LinearMap]) -> TruncatedSimplicialVS:
    """Transport structure maps along level-wise automorphisms"""
    inverses = [inverse(P) for P in changes]
    faces = {(n, i): changes[n - 1] @ d @ inverses[n] for (n, i), d in V.faces.items()}
    degeneracies = {(n, j): changes[n + 1] @ s @ inverses[n] for (n, j), s in V.degeneracies.items()}
    return TruncatedSimplicialVS(list(V.levels), faces, degeneracies, V.almost)


def random_simplicial_vs(seed: int, top_level: int, max_dim: int = 3, reduced: bool = False) -> TruncatedSimplicialVS:
    C = random_chain_complex(seed, top_level, max_dim, reduced)
    V = dold_kan_K(C)
    rng = random.Random(seed + 1)
    return conjugate(V, [_random_unitriangular(rng, space) for space in V.levels])


def random_cochain_complex(seed: int, top_degree: int, max_dim: int = 3) -> CochainComplex:
    C = random_chain_complex(seed, top_degree, max_dim)
    return CochainComplex(list(C.spaces), {n - 1: d.transpose() for n, d in C.differentials.items()})


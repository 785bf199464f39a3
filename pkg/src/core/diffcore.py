"""
Differentiation of formal ∞-groups and simplicial Lie algebras

``fdiff`` runs Spf ∘ D* ∘ k[-] on a formal ∞-group after a PBW witness has
straightened its positive faces and degeneracies; ``diff`` routes simplicial
Lie algebras through W̄U(g) with the canonical witness and jet presentations
through ``pbw_normalize``.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .bar import ComparisonMaps, WConstruction, canonical_pbw_wbar, wbar_linear
from .coalg import CoalgebraMorphism, SimplicialCoalgebra, TruncatedSymCoalgebra, Word, from_sym_morphisms
from .dual import CoequalizerCdga, d_star, dualize
from .exactlin import (NO_SOLUTION, ONE, BasedSpace, LinearMap, Vector, add_term, add_to, block_matrix, inverse,
                       is_injective, is_surjective, rank, solve)
from .liealg import (LInfinityAlgebra, LInfinityMorphism, SimplicialLieAlgebra, SimplicialLieMap, is_fib, is_weq,
                     normalized_dg_lie)
from .simplicial import (SimplicialMap, TruncatedSimplicialVS, Violation, is_fibration, is_weak_equivalence,
                         normalized_chains, normalized_map)
from ..utils.exceptions import ComparisonFailed, MalformedJets, NotKan, NotMorphism, NotReduced
from ..utils.logger import logger


def _primitive_components(f: LinearMap, target: TruncatedSymCoalgebra):
    return lambda word: target.linear_part(f.columns[word])


# ---------------------------------------------------------------------------
# formal ∞-groups
# ---------------------------------------------------------------------------

class FormalInfinityGroup:
    """Reduced simplicial object in ``Sym^co`` coalgebras, maps given by primitive components"""

    def __init__(self, levels: List[TruncatedSymCoalgebra], faces: Dict[Tuple[int, int], CoalgebraMorphism],
                 degeneracies: Dict[Tuple[int, int], CoalgebraMorphism], name: str = ""):
        if levels[0].cogenerators.dim:
            raise NotReduced(f"Level 0 has {levels[0].cogenerators.dim} cogenerators, expected none")
        self.levels = levels
        self.faces = faces
        self.degeneracies = degeneracies
        self.name = name
        self._coalgebra: Optional[SimplicialCoalgebra] = None
        self._flags: Optional[Dict[Tuple[int, int], bool]] = None

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    @property
    def max_word(self) -> int:
        return self.levels[0].max_word

    @classmethod
    def from_simplicial_coalgebra(cls, X: SimplicialCoalgebra, name: str = "") -> "FormalInfinityGroup":
        if not all(isinstance(level, TruncatedSymCoalgebra) for level in X.levels):
            raise MalformedJets("Every level of a formal ∞-group must be a truncated Sym^co coalgebra")
        levels = X.levels
        faces = {(n, i): CoalgebraMorphism(levels[n], levels[n - 1], _primitive_components(f, levels[n - 1]))
                 for (n, i), f in X.faces.items()}
        degeneracies = {(n, j): CoalgebraMorphism(levels[n], levels[n + 1], _primitive_components(s, levels[n + 1]))
                        for (n, j), s in X.degeneracies.items()}
        group = cls(levels, faces, degeneracies, name)
        group._coalgebra = X
        return group

    @classmethod
    def from_jets(cls, cogenerators: Sequence[Sequence], max_word: int, faces: Dict[Tuple[int, int], Dict[Word, Vector]],
                  degeneracies: Dict[Tuple[int, int], Dict[Word, Vector]], name: str = "") -> "FormalInfinityGroup":
        """Build from per-level cogenerator labels and truncated power-series components"""
        levels = [TruncatedSymCoalgebra(BasedSpace(tuple(labels)), max_word) for labels in cogenerators]
        face_maps = {(n, i): CoalgebraMorphism.from_table(levels[n], levels[n - 1], table)
                     for (n, i), table in faces.items()}
        degeneracy_maps = {(n, j): CoalgebraMorphism.from_table(levels[n], levels[n + 1], table)
                           for (n, j), table in degeneracies.items()}
        return cls(levels, face_maps, degeneracy_maps, name)

    def coalgebra(self) -> SimplicialCoalgebra:
        if self._coalgebra is None:
            self._coalgebra = from_sym_morphisms(self.levels, self.faces, self.degeneracies)
        return self._coalgebra

    def prim(self) -> TruncatedSimplicialVS:
        """Cogenerators with the linear parts of the structure maps"""
        return TruncatedSimplicialVS([level.cogenerators for level in self.levels],
                                     {k: F.linear_part() for k, F in self.faces.items()},
                                     {k: F.linear_part() for k, F in self.degeneracies.items()})

    def linear_model(self) -> SimplicialCoalgebra:
        """``Sym^co`` of the linear parts on every structure map"""
        levels = self.levels
        faces = {(n, i): CoalgebraMorphism.from_linear(levels[n], levels[n - 1], F.linear_part())
                 for (n, i), F in self.faces.items()}
        degeneracies = {(n, j): CoalgebraMorphism.from_linear(levels[n], levels[n + 1], F.linear_part())
                        for (n, j), F in self.degeneracies.items()}
        return from_sym_morphisms(levels, faces, degeneracies)

    # Kan condition on primitives

    def _horn(self, n: int, k: int) -> Tuple[LinearMap, int]:
        """The horn map ``(d_i)_{i≠k}`` and the dimension of compatible tuples"""
        V = self.prim()
        others = [i for i in range(n + 1) if i != k]
        position = {i: t for t, i in enumerate(others)}
        horn = block_matrix({(t, 0): V.faces[(n, i)] for t, i in enumerate(others)},
                            [V.levels[n]], [V.levels[n - 1]] * len(others))
        total = V.levels[n - 1].dim * len(others)
        if n < 2:
            return horn, total
        pairs = [(i, j) for i in others for j in others if i < j]
        blocks = {}
        for r, (i, j) in enumerate(pairs):
            blocks[(r, position[j])] = V.faces[(n - 1, i)]
            blocks[(r, position[i])] = V.faces[(n - 1, j - 1)].scale(-ONE)
        constraints = block_matrix(blocks, [V.levels[n - 1]] * len(others), [V.levels[n - 2]] * len(pairs))
        return horn, total - rank(constraints)

    def kan_flags(self) -> Dict[Tuple[int, int], bool]:
        """Surjectivity of every Prim-level horn map inside the window"""
        if self._flags is None:
            flags = {}
            for n in range(1, self.top_level + 1):
                for k in range(n + 1):
                    horn, compatible = self._horn(n, k)
                    flags[(n, k)] = rank(horn) == compatible
            self._flags = flags
        return self._flags

    def require_kan(self):
        for (n, k), ok in self.kan_flags().items():
            if not ok:
                raise NotKan(f"Horn Λ^{n}_{k} has no filler on primitives")

    def is_lie_n_group(self, n: int) -> bool:
        """Prim-level horn maps are isomorphisms in every dimension above n"""
        for m in range(n + 1, self.top_level + 1):
            for k in range(m + 1):
                horn, compatible = self._horn(m, k)
                r = rank(horn)
                if r != compatible or r != horn.source.dim:
                    return False
        return True

    def is_aligned(self) -> bool:
        """Whether every positive face and every degeneracy is linear on cogenerators"""
        maps = [F for (n, i), F in self.faces.items() if i] + list(self.degeneracies.values())
        return all(not F.components(word) for F in maps for word in F.source.space.labels if len(word) > 1)

    def jet_violations(self) -> List[str]:
        out = []
        for kind, maps in (("d", self.faces), ("s", self.degeneracies)):
            for (n, i), F in sorted(maps.items()):
                bad = F.violations()
                if bad:
                    out.append(f"{kind}{i} at level {n} is not a coalgebra map on word {bad[0]!r}")
        if not out:
            out += [f"{v.identity} at level {v.level}" for v in self.coalgebra().structure_violations()]
        return out

    def conjugate(self, changes: Sequence[CoalgebraMorphism]) -> "FormalInfinityGroup":
        """Transport along level-wise coalgebra automorphisms ``changes[n]``"""
        inverses = [F.inverse() for F in changes]
        faces = {(n, i): inverses[n - 1].compose(F.compose(changes[n])) for (n, i), F in self.faces.items()}
        degeneracies = {(n, j): inverses[n + 1].compose(F.compose(changes[n]))
                        for (n, j), F in self.degeneracies.items()}
        return FormalInfinityGroup(self.levels, faces, degeneracies, self.name)


def coordinate_change(level: TruncatedSymCoalgebra, table: Dict[Word, Vector]) -> CoalgebraMorphism:
    """Coalgebra automorphism with identity linear part and higher components from ``table``"""
    return CoalgebraMorphism(level, level, lambda word: {word[0]: ONE} if len(word) == 1 else table.get(word, {}))


def quadratic_skew(G: FormalInfinityGroup, level: int) -> FormalInfinityGroup:
    """Re-coordinatize one level by ``x_0 -> x_0 + x_1·x_0`` style quadratic terms"""
    changes = [CoalgebraMorphism.identity(L) for L in G.levels]
    letters = G.levels[level].cogenerators.labels
    if letters:
        first, second = letters[0], letters[1] if len(letters) > 1 else letters[0]
        changes[level] = coordinate_change(G.levels[level], {(first, first): {second: ONE}})
    return G.conjugate(changes)


# ---------------------------------------------------------------------------
# PBW witnesses
# ---------------------------------------------------------------------------

@dataclass
class PBWBasisWitness:
    """Level-wise isomorphisms ``forward[n]: model_n -> target_n`` of coalgebras

    Positive faces and degeneracies of the model are ``Sym^co`` of linear maps.
    """
    identifier: str
    target: SimplicialCoalgebra
    forward: List[LinearMap]
    backward: List[LinearMap]
    model: SimplicialCoalgebra

    def criteria_violations(self) -> List[Violation]:
        out = []
        for (n, i), d in self.target.faces.items():
            if not i:
                continue
            gap = (d @ self.forward[n]).discrepancy(self.forward[n - 1] @ self.model.faces[(n, i)])
            if gap:
                out.append(Violation(f"d{i} Φ = Φ Sym(d{i})", n, gap))
        for (n, j), s in self.target.degeneracies.items():
            gap = (s @ self.forward[n]).discrepancy(self.forward[n + 1] @ self.model.degeneracies[(n, j)])
            if gap:
                out.append(Violation(f"s{j} Φ = Φ Sym(s{j})", n, gap))
        return out


def _stage_system(G: FormalInfinityGroup, n: int, length: int, partial: CoalgebraMorphism,
                  lower: CoalgebraMorphism) -> Tuple[LinearMap, Vector]:
    """Linear equations for the length-``length`` components of the level-n coordinates"""
    level, below = G.levels[n], G.levels[n - 1]
    words = [w for w in level.space.labels if len(w) == length]
    letters = level.cogenerators.labels
    unknowns = BasedSpace(tuple((w, p) for w in words for p in letters))
    columns: Dict = {u: {} for u in unknowns.labels}
    rhs: Vector = {}
    equations = []

    for i in range(1, n + 1):
        F = G.faces[(n, i)]
        L = F.linear_part()
        sym = CoalgebraMorphism.from_linear(level, below, L)
        for w in words:
            value = lower.components.apply(sym.apply_word(w))
            add_to(value, F.components.apply(partial.apply_word(w)), -ONE)
            for q in below.cogenerators.labels:
                equations.append(("A", i, w, q))
            for q, c in value.items():
                add_term(rhs, ("A", i, w, q), c)
            for p in letters:
                for q, c in L.columns[p].items():
                    add_term(columns[(w, p)], ("A", i, w, q), c)

    below_words = [u for u in below.space.labels if len(u) == length]
    for j in range(n):
        S = G.degeneracies[(n - 1, j)]
        sym = CoalgebraMorphism.from_linear(below, level, S.linear_part())
        for u in below_words:
            value = S.components.apply(lower.apply_word(u))
            image = sym.apply_word(u)
            for p in letters:
                equations.append(("B", j, u, p))
                add_term(rhs, ("B", j, u, p), value.get(p, 0))
                for v, c in image.items():
                    add_term(columns[(v, p)], ("B", j, u, p), c)

    return LinearMap(unknowns, BasedSpace(tuple(equations)), columns), rhs


def pbw_normalize(G: FormalInfinityGroup) -> PBWBasisWitness:
    """Coordinates in which positive faces and degeneracies become linear

    Level by level and word length by word length, the higher components
    of ``Φ_n`` are solved from ``d_i Φ_n = Φ_{n-1} Sym(L_i)`` (i ≥ 1) and
    ``s_j Φ_{n-1} = Φ_n Sym(S_j)`` on primitives.
    """
    G.require_kan()
    X = G.coalgebra()
    if G.is_aligned():
        identity = [LinearMap.identity(level.space) for level in G.levels]
        logger.debug("PBW normalization: structure maps already aligned")
        return PBWBasisWitness("identity", X, identity, identity, X)

    tables: List[Dict[Word, Vector]] = [{} for _ in G.levels]
    coordinates = [coordinate_change(level, {}) for level in G.levels]
    for n in range(1, G.top_level + 1):
        level = G.levels[n]
        for length in range(2, level.max_word + 1):
            if not level.cogenerators.dim:
                break
            partial = coordinate_change(level, dict(tables[n]))
            system, rhs = _stage_system(G, n, length, partial, coordinates[n - 1])
            if not system.source.dim:
                continue
            solution = solve(system, rhs)
            if solution is NO_SOLUTION:
                raise NotKan(f"No PBW coordinates at level {n} for words of length {length}")
            for (w, p), c in solution.items():
                add_term(tables[n].setdefault(w, {}), p, c)
            logger.debug(f"PBW normalization: level {n}, length {length}, {len(solution)} nonzero components")
        coordinates[n] = coordinate_change(level, dict(tables[n]))

    forward = [Phi.matrix() for Phi in coordinates]
    backward = [inverse(f) for f in forward]
    levels = G.levels
    faces = {}
    for (n, i), F in G.faces.items():
        if i:
            faces[(n, i)] = CoalgebraMorphism.from_linear(levels[n], levels[n - 1], F.linear_part()).matrix()
        else:
            faces[(n, i)] = backward[n - 1] @ X.faces[(n, 0)] @ forward[n]
    degeneracies = {(n, j): CoalgebraMorphism.from_linear(levels[n], levels[n + 1], F.linear_part()).matrix()
                    for (n, j), F in G.degeneracies.items()}
    model = SimplicialCoalgebra(levels, faces, degeneracies, weighted=True)
    return PBWBasisWitness("pbw-normalize", X, forward, backward, model)


def canonical_witness(g: SimplicialLieAlgebra, max_word: int,
                      construction: Optional[WConstruction] = None) -> PBWBasisWitness:
    wit = canonical_pbw_wbar(g, max_word, construction)
    return PBWBasisWitness("canonical", wit.target, wit.forward, wit.backward, wit.model)


# ---------------------------------------------------------------------------
# Spf of D*
# ---------------------------------------------------------------------------

def _letter(generator: Tuple) -> Tuple:
    grade, pivot = generator
    return (grade - 1, pivot)


def _pure_word(D: CoequalizerCdga, word: Word) -> Word:
    if not D.is_pure(word):
        raise NotKan(f"Monomial {word!r} survives with a decomposable generator")
    return tuple(_letter(g) for g in word)


def spf_linf(D: CoequalizerCdga, name: str = "") -> LInfinityAlgebra:
    """The L∞ algebra dual to D*: pure generators of grade n become letters of tangent degree n-1

    ``δ¹(w)`` at letter j is ``w!`` times the coefficient of the monomial w in ``δx_j``.
    """
    pure = D.pure_generators()
    letters = BasedSpace(tuple(_letter(g) for g in pure))
    degrees = {_letter(g): g[0] - 1 for g in pure}
    corestriction: Dict[Word, Vector] = {}
    for g in pure:
        for word, c in D.differential.get(g, {}).items():
            add_term(corestriction.setdefault(_pure_word(D, word), {}), _letter(g), c * D.algebra.factorial(word))
    L = LInfinityAlgebra(letters, degrees, D.max_length, corestriction, D.max_degree - 1, name or D.name)
    logger.debug(f"Spf(D*): tangent dims {L.tangent_dims()}")
    return L


def pullback_morphism(DX: CoequalizerCdga, DY: CoequalizerCdga, LX: LInfinityAlgebra, LY: LInfinityAlgebra,
                      maps: Sequence[LinearMap]) -> LInfinityMorphism:
    """``Spf(D*(f))`` for level maps ``maps[n]: X_n -> Y_n`` of simplicial coalgebras"""
    table: Dict[Word, Vector] = {}
    for y in DY.pure_generators():
        n = y[0]
        index = DY.moore[n].pivots.index(y[1])
        image: Vector = {}
        for (m, pivot), gen in DX.moore_generators.items():
            if m != n:
                continue
            coords = DY.moore[n].coordinates(maps[n].apply(gen.row))
            add_term(image, ((m, pivot),), coords[index])
        for word, c in DX.reduce(image).items():
            add_term(table.setdefault(_pure_word(DX, word), {}), _letter(y), c * DX.algebra.factorial(word))
    return LInfinityMorphism(LX, LY, lambda word: dict(table.get(word, {})))


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------

@dataclass
class Differentiation:
    algebra: LInfinityAlgebra
    witness_id: str
    cdga: CoequalizerCdga
    witness: PBWBasisWitness
    max_word: int
    max_level: int
    group: Optional[FormalInfinityGroup] = None

    def tangent_matches(self) -> bool:
        """Tangent complex against ``N(Prim)[-1]``: dims and ranks of ℓ₁"""
        tangent = self.algebra.tangent_complex()
        prim = normalized_chains(self.group.prim()) if self.group is not None else None
        if prim is None:
            return True
        for d in range(tangent.top_degree + 1):
            expected = prim.spaces[d + 1].dim if d + 1 <= prim.top_degree else 0
            if tangent.spaces[d].dim != expected:
                return False
            if d >= 1 and d + 1 <= prim.top_degree and rank(tangent.differentials[d]) != rank(prim.differentials[d + 1]):
                return False
        return True


def fdiff(G: FormalInfinityGroup, max_word: int, max_level: int,
          witness: Optional[PBWBasisWitness] = None) -> Differentiation:
    """Spf(D*(k[G])) read through a PBW witness"""
    G.require_kan()
    witness = witness or pbw_normalize(G)
    top = min(max_level, G.top_level)
    D = d_star(dualize(witness.model), max_word, top, name=G.name)
    L = spf_linf(D, G.name)
    bad = L.square_violations()
    if bad:
        raise NotKan(f"Differentiated codifferential does not square to zero on {bad[0]!r}")
    logger.debug(f"fdiff({G.name}): witness {witness.identifier}, tangent dims {L.tangent_dims()}")
    return Differentiation(L, witness.identifier, D, witness, max_word, top, G)


def _window(g: SimplicialLieAlgebra, max_level: int) -> SimplicialLieAlgebra:
    if g.top_level > max_level:
        return g.truncate(max_level)
    if g.top_level < max_level:
        logger.warning(f"Input has levels 0..{g.top_level}; window shrinks to N = {g.top_level}")
    return g


def diff(source: Union[SimplicialLieAlgebra, FormalInfinityGroup], max_word: int, max_level: int) -> Differentiation:
    """Diff of a simplicial Lie algebra (through W̄U(g)) or of jet data"""
    if isinstance(source, SimplicialLieAlgebra):
        g = _window(source, max_level)
        witness = canonical_witness(g, max_word)
        G = FormalInfinityGroup.from_simplicial_coalgebra(witness.target, g.name)
        return fdiff(G, max_word, g.top_level, witness)
    problems = source.jet_violations()
    if problems:
        raise MalformedJets(problems[0])
    return fdiff(source, max_word, max_level)


@dataclass
class PhiComparison:
    source: LInfinityAlgebra
    target: LInfinityAlgebra
    morphism: LInfinityMorphism
    ce_matches: bool
    violations: List[Word] = field(default_factory=list)

    @property
    def is_iso(self) -> bool:
        f = self.morphism.linear_part()
        return not self.violations and is_injective(f) and is_surjective(f)


def _ce_window(g: SimplicialLieAlgebra, max_word: int) -> LInfinityAlgebra:
    return LInfinityAlgebra.from_dg_lie(normalized_dg_lie(g), max_word)


def _matches_ce(LX: LInfinityAlgebra, CE: LInfinityAlgebra) -> bool:
    """LX, with letters ``(n-1, ((), (x,)))`` renamed to x, against CE(Ng) in the same window"""
    rename = {a: a[1][1][0] for a in LX.letters.labels}
    if set(rename.values()) != {a for a in CE.letters.labels if CE.tangent_degrees[a] <= LX.top_degree}:
        return False
    top = LX.top_degree + 1

    def restricted(table: Dict[Word, Vector], degree) -> Dict[Word, Vector]:
        return {tuple(sorted(w, key=repr)): v for w, v in table.items()
                if v and sum(degree(a) + 1 for a in w) <= top}

    renamed: Dict[Word, Vector] = {}
    for w, v in LX.corestriction.items():
        renamed[tuple(rename[a] for a in w)] = {rename[a]: c for a, c in v.items()}
    lhs = restricted(renamed, lambda a: a[0])
    rhs = restricted({w: {a: c for a, c in v.items() if CE.tangent_degrees[a] <= LX.top_degree}
                      for w, v in CE.corestriction.items()}, lambda a: a[0])
    return lhs == rhs


def phi_comparison(g: SimplicialLieAlgebra, max_word: int, max_level: int) -> PhiComparison:
    """``Φ_g: CE(Ng) -> FDiff(W̄U(g))`` from ψ and the canonical witness"""
    g = _window(g, max_level)
    maps = ComparisonMaps(g, max_word)
    witness = canonical_witness(g, max_word, maps.W)
    X = maps.kco_ce()
    psi = [witness.backward[n] @ maps.psi_level(n) for n in range(g.top_level + 1)]
    N = g.top_level
    DX = d_star(dualize(X), max_word, N, name=f"Kco CE({g.name})")
    DY = d_star(dualize(witness.model), max_word, N, name=g.name)
    LX, LY = spf_linf(DX), spf_linf(DY)
    ce_matches = _matches_ce(LX, _ce_window(g, max_word))
    morphism = pullback_morphism(DX, DY, LX, LY, psi)
    result = PhiComparison(LX, LY, morphism, ce_matches, morphism.violations())
    if result.violations:
        raise ComparisonFailed(f"Φ does not commute with codifferentials on {result.violations[0]!r}")
    if not result.is_iso:
        raise ComparisonFailed("Linear part of Φ is not an isomorphism")
    logger.debug(f"Φ comparison for {g.name}: iso, CE match {ce_matches}")
    return result


# ---------------------------------------------------------------------------
# morphisms, exactness and window checks
# ---------------------------------------------------------------------------

def _wbar_map(f: SimplicialLieMap, top: int) -> SimplicialMap:
    """``W̄f`` on levels 0..top, letters ``(j, a) -> (j, f_j a)``"""
    source = wbar_linear(f.source.underlying, top)
    target = wbar_linear(f.target.underlying, top)
    components = [LinearMap.from_function(source.levels[n], target.levels[n],
                                          lambda letter: {(letter[0], b): c
                                                          for b, c in f.components[letter[0]].columns[letter[1]].items()})
                  for n in range(top + 1)]
    return SimplicialMap(source, target, components)


def diff_morphism(f: SimplicialLieMap, max_word: int, max_level: int) -> LInfinityMorphism:
    """Diff(f) through the strict map ``Sym(W̄^inh f)`` of canonical models"""
    if f.violations():
        raise NotMorphism("Components do not form a map of simplicial Lie algebras")
    source, target = _window(f.source, max_level), _window(f.target, max_level)
    top = min(source.top_level, target.top_level)
    X = canonical_witness(source.truncate(top), max_word).model
    Y = canonical_witness(target.truncate(top), max_word).model
    W = _wbar_map(f, top)
    maps = [CoalgebraMorphism.from_linear(X.levels[n], Y.levels[n], W.components[n]).matrix() for n in range(top + 1)]
    DX = d_star(dualize(X), max_word, top, name=source.name)
    DY = d_star(dualize(Y), max_word, top, name=target.name)
    return pullback_morphism(DX, DY, spf_linf(DX), spf_linf(DY), maps)


def functoriality_violations(f: SimplicialLieMap, h: SimplicialLieMap, max_word: int, max_level: int) -> List[Word]:
    """Words where ``Diff(h ∘ f)`` and ``Diff(h) ∘ Diff(f)`` differ"""
    composite = diff_morphism(h.compose(f), max_word, max_level)
    stepwise = diff_morphism(h, max_word, max_level).compose(diff_morphism(f, max_word, max_level))
    return [w for w in composite.source.coalgebra.space.labels
            if add_to(dict(composite.apply_word(w)), stepwise.apply_word(w), -ONE)]


@dataclass
class ExactnessReport:
    source_fibration: bool
    source_weak_equivalence: bool
    target_fibration: bool
    target_weak_equivalence: bool

    @property
    def consistent(self) -> bool:
        """Fibrations are preserved and weak equivalences preserved and reflected"""
        preserved = not self.source_fibration or self.target_fibration
        return preserved and self.source_weak_equivalence == self.target_weak_equivalence

    def to_dict(self) -> Dict[str, bool]:
        return {"source_fibration": self.source_fibration,
                "source_weak_equivalence": self.source_weak_equivalence,
                "target_fibration": self.target_fibration,
                "target_weak_equivalence": self.target_weak_equivalence,
                "consistent": self.consistent}


def exactness_check(f: SimplicialLieMap, max_word: int, max_level: int) -> ExactnessReport:
    """Prim-level Moore criteria on W̄f against tangent criteria on the strict CE(Nf)"""
    if f.violations():
        raise NotMorphism("Components do not form a map of simplicial Lie algebras")
    top = min(f.source.top_level, f.target.top_level, max_level)
    W = _wbar_map(f, top + 1)
    src_fib, src_weq = is_fibration(W), is_weak_equivalence(W)
    source, target = f.source.truncate(top), f.target.truncate(top)
    CEs, CEt = _ce_window(source, max_word), _ce_window(target, max_word)
    linear = f.as_simplicial_map()
    columns = {}
    for n in range(top + 1):
        Nf = normalized_map(linear, n)
        for a, col in Nf.columns.items():
            columns[(n, a)] = {(n, b): c for b, c in col.items()}
    strict = LInfinityMorphism.strict(CEs, CEt, LinearMap(CEs.letters, CEt.letters, columns))
    report = ExactnessReport(src_fib, src_weq, is_fib(strict), is_weq(strict))
    logger.debug(f"Exactness: {report.to_dict()}")
    return report


def window_stability(g: SimplicialLieAlgebra, max_word: int, max_level: int) -> bool:
    """Diff at (K+1, N+1) restricted to (K, N) reproduces Diff at (K, N)"""
    small = diff(g, max_word, max_level).algebra
    large = diff(g, max_word + 1, max_level + 1).algebra
    top = small.top_degree + 1

    def window(L: LInfinityAlgebra) -> Dict[Word, Vector]:
        keep = {a for a in L.letters.labels if L.tangent_degrees[a] <= small.top_degree}
        out = {}
        for w, v in L.corestriction.items():
            if len(w) <= max_word and all(a in keep for a in w) and sum(L.ce_degree(a) for a in w) <= top:
                restricted = {a: c for a, c in v.items() if a in keep}
                if restricted:
                    out[w] = restricted
        return out

    return window(small) == window(large)


def lie_n_report(result: Differentiation, n: int) -> Dict[str, bool]:
    group = result.group.is_lie_n_group(n) if result.group is not None else False
    return {"lie_n_group": group, "lie_n_algebra": result.algebra.is_lie_n_algebra(n)}

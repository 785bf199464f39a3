"""
Conversion between core objects and the JSON document models
"""

from typing import Dict, List, Optional, Sequence, Union

from .coalg import TruncatedSymCoalgebra, Word
from .diffcore import FormalInfinityGroup
from .exactlin import ZERO, BasedSpace, LinearMap, Vector, format_rational, rational
from .liealg import LieAlgebra, LInfinityAlgebra, SimplicialLieAlgebra, codifferential_from_brackets
from .simplicial import TruncatedSimplicialVS, check_structure
from ..utils.exceptions import SchemaViolation
from ..utils.schemas import (SCHEMA_VERSION, BracketEntry, BracketTableEntry, JetEntry, JetsDocument, LetterEntry,
                             LieDocument, LieLevel, LInfinityDocument, MatrixEntry, SimplicialLieDocument,
                             SimplicialVSDocument, WindowInfo, parse_input)


def label_name(label) -> str:
    """Stable string for a basis label; tuples print as ``(a,b)``"""
    if isinstance(label, str):
        return label
    if isinstance(label, tuple):
        return "(" + ",".join(label_name(part) for part in label) + ")"
    return str(label)


def _names(space: BasedSpace) -> List[str]:
    names = [label_name(label) for label in space.labels]
    if len(set(names)) != len(names):
        raise SchemaViolation(f"Basis labels {names} do not have distinct names")
    return names


def _matrix(f: LinearMap) -> List[List[str]]:
    return [[format_rational(v) for v in row] for row in f.matrix()]


def _values(vec: Vector, names: Dict) -> Dict[str, str]:
    return {names[label]: format_rational(v) for label, v in vec.items() if v}


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

def _bracket_entries(g: LieAlgebra) -> List[BracketEntry]:
    names = dict(zip(g.space.labels, _names(g.space)))
    entries = []
    labels = g.space.labels
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            value = g.bracket_letters(a, b)
            if value:
                entries.append(BracketEntry(left=names[a], right=names[b], value=_values(value, names)))
    return entries


def lie_to_document(g: LieAlgebra) -> LieDocument:
    return LieDocument(schema_version=SCHEMA_VERSION, kind="lie", name=g.name, basis=_names(g.space),
                       brackets=_bracket_entries(g))


def _lie_level(basis: Sequence[str], brackets: Sequence[BracketEntry], name: str, path: str) -> LieAlgebra:
    constants = {(e.left, e.right): e.value for e in brackets}
    g = LieAlgebra.from_structure_constants(basis, constants, name)
    problems = g.violations()
    if problems:
        raise SchemaViolation(f"{path}: {problems[0]}")
    return g


def lie_from_document(doc: LieDocument) -> LieAlgebra:
    return _lie_level(doc.basis, doc.brackets, doc.name, "brackets")


# ---------------------------------------------------------------------------
# simplicial Lie algebras
# ---------------------------------------------------------------------------

def simplicial_lie_to_document(g: SimplicialLieAlgebra) -> SimplicialLieDocument:
    levels = [LieLevel(basis=_names(a.space), brackets=_bracket_entries(a)) for a in g.algebras]
    V = g.underlying
    faces = [MatrixEntry(level=n, index=i, matrix=_matrix(V.faces[(n, i)])) for n, i in sorted(V.faces)]
    degeneracies = [MatrixEntry(level=n, index=j, matrix=_matrix(V.degeneracies[(n, j)]))
                    for n, j in sorted(V.degeneracies)]
    return SimplicialLieDocument(schema_version=SCHEMA_VERSION, kind="simplicial_lie", name=g.name,
                                 levels=levels, faces=faces, degeneracies=degeneracies)


def _structure_maps(entries: Sequence[MatrixEntry], levels: List[BasedSpace], kind: str) -> Dict:
    top = len(levels) - 1
    offset = -1 if kind == "faces" else 1
    maps = {}
    for k, entry in enumerate(entries):
        n, i = entry.level, entry.index
        in_range = 1 <= n <= top if kind == "faces" else n < top
        if not in_range or i > n:
            raise SchemaViolation(f"{kind}.{k}: no map with index {i} at level {n}")
        try:
            maps[(n, i)] = LinearMap.from_matrix(levels[n], levels[n + offset], entry.matrix)
        except SchemaViolation as e:
            raise SchemaViolation(f"{kind}.{k}.matrix: {e}")
    for n in range(1 if kind == "faces" else 0, top + 1 if kind == "faces" else top):
        for i in range(n + 1):
            if (n, i) not in maps:
                raise SchemaViolation(f"{kind}: missing index {i} at level {n}")
    return maps


def simplicial_lie_from_document(doc: SimplicialLieDocument) -> SimplicialLieAlgebra:
    algebras = [_lie_level(level.basis, level.brackets, doc.name, f"levels.{n}.brackets")
                for n, level in enumerate(doc.levels)]
    spaces = [a.space for a in algebras]
    V = TruncatedSimplicialVS(spaces, _structure_maps(doc.faces, spaces, "faces"),
                              _structure_maps(doc.degeneracies, spaces, "degeneracies"))
    g = SimplicialLieAlgebra(V, algebras, doc.name)
    problems = g.violations()
    if problems:
        v = problems[0]
        raise SchemaViolation(f"levels.{v.level}: {v.identity} fails")
    return g


def simplicial_vs_to_document(V: TruncatedSimplicialVS, name: str = "") -> SimplicialVSDocument:
    faces = [MatrixEntry(level=n, index=i, matrix=_matrix(V.faces[(n, i)])) for n, i in sorted(V.faces)]
    degeneracies = [MatrixEntry(level=n, index=j, matrix=_matrix(V.degeneracies[(n, j)]))
                    for n, j in sorted(V.degeneracies)]
    return SimplicialVSDocument(schema_version=SCHEMA_VERSION, kind="simplicial_vs", name=name,
                                levels=[_names(space) for space in V.levels], faces=faces, degeneracies=degeneracies)


def simplicial_vs_from_document(doc: SimplicialVSDocument) -> TruncatedSimplicialVS:
    for n, labels in enumerate(doc.levels):
        if len(set(labels)) != len(labels):
            raise SchemaViolation(f"levels.{n}: labels must be distinct")
    spaces = [BasedSpace(tuple(labels)) for labels in doc.levels]
    V = TruncatedSimplicialVS(spaces, _structure_maps(doc.faces, spaces, "faces"),
                              _structure_maps(doc.degeneracies, spaces, "degeneracies"))
    problems = check_structure(V)
    if problems:
        raise SchemaViolation(f"levels.{problems[0].level}: {problems[0].identity} fails")
    return V


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------

def _words_by_length(level: TruncatedSymCoalgebra, length: int) -> List[Word]:
    return [w for w in level.space.labels if len(w) == length]


def jets_to_document(G: FormalInfinityGroup) -> JetsDocument:
    K = G.max_word
    cogenerators = [_names(level.cogenerators) for level in G.levels]

    def entry(n: int, i: int, F) -> JetEntry:
        targets = F.target.cogenerators.labels
        components = []
        for j in range(1, K + 1):
            words = _words_by_length(F.source, j)
            components.append([[format_rational(F.components(w).get(t, ZERO)) for w in words] for t in targets])
        return JetEntry(level=n, index=i, components=components)

    return JetsDocument(schema_version=SCHEMA_VERSION, kind="jets", name=G.name, max_word=K,
                        cogenerators=cogenerators,
                        faces=[entry(n, i, G.faces[(n, i)]) for n, i in sorted(G.faces)],
                        degeneracies=[entry(n, j, G.degeneracies[(n, j)]) for n, j in sorted(G.degeneracies)])


def _jet_tables(entries: Sequence[JetEntry], levels: List[TruncatedSymCoalgebra], kind: str,
                max_word: int) -> Dict:
    top = len(levels) - 1
    offset = -1 if kind == "faces" else 1
    tables = {}
    for k, entry in enumerate(entries):
        n, i = entry.level, entry.index
        in_range = 1 <= n <= top if kind == "faces" else n < top
        if not in_range or i > n:
            raise SchemaViolation(f"{kind}.{k}: no map with index {i} at level {n}")
        source, target = levels[n], levels[n + offset]
        if len(entry.components) > source.max_word:
            raise SchemaViolation(f"{kind}.{k}.components: more than {source.max_word} word lengths")
        table: Dict[Word, Vector] = {}
        for j, matrix in enumerate(entry.components, start=1):
            words = _words_by_length(source, j)
            if len(matrix) != target.cogenerators.dim or any(len(row) != len(words) for row in matrix):
                raise SchemaViolation(f"{kind}.{k}.components.{j - 1}: expected a "
                                      f"{target.cogenerators.dim}x{len(words)} matrix")
            if j > max_word:
                continue
            for c, word in enumerate(words):
                column = {t: rational(matrix[r][c]) for r, t in enumerate(target.cogenerators.labels)}
                table[word] = {t: v for t, v in column.items() if v}
        tables[(n, i)] = table
    for n in range(1 if kind == "faces" else 0, top + 1 if kind == "faces" else top):
        for i in range(n + 1):
            if (n, i) not in tables:
                raise SchemaViolation(f"{kind}: missing index {i} at level {n}")
    return tables


def jets_from_document(doc: JetsDocument, max_word: Optional[int] = None) -> FormalInfinityGroup:
    """Formal ∞-group from jets, cut down to ``max_word`` when that is smaller"""
    K = min(doc.max_word, max_word) if max_word else doc.max_word
    for n, labels in enumerate(doc.cogenerators):
        if len(set(labels)) != len(labels):
            raise SchemaViolation(f"cogenerators.{n}: labels must be distinct")
    probe = [TruncatedSymCoalgebra(BasedSpace(tuple(labels)), doc.max_word) for labels in doc.cogenerators]
    faces = _jet_tables(doc.faces, probe, "faces", K)
    degeneracies = _jet_tables(doc.degeneracies, probe, "degeneracies", K)
    return FormalInfinityGroup.from_jets(doc.cogenerators, K, faces, degeneracies, doc.name)


# ---------------------------------------------------------------------------
# L∞ algebras
# ---------------------------------------------------------------------------

def _letter_names(L: LInfinityAlgebra) -> Dict:
    names = {}
    counts: Dict[int, int] = {}
    for letter in L.letters.labels:
        d = L.tangent_degrees[letter]
        names[letter] = f"x{d}_{counts.get(d, 0)}"
        counts[d] = counts.get(d, 0) + 1
    return names


def linf_to_document(L: LInfinityAlgebra, max_word: int, max_level: int, witness: str = "") -> LInfinityDocument:
    names = _letter_names(L)
    letters = [LetterEntry(name=names[a], degree=L.tangent_degrees[a], label=label_name(a)) for a in L.letters.labels]
    T = L.tangent_complex()
    differentials = {str(d): _matrix(T.differentials[d]) for d in range(1, T.top_degree + 1)}
    tables = L.brackets()
    brackets = {}
    for k in range(1, L.max_word + 1):
        rows = []
        for word in L.coalgebra.space.labels:
            if len(word) == k and word in tables[k] and tables[k][word]:
                rows.append(BracketTableEntry(inputs=[names[a] for a in word], output=_values(tables[k][word], names)))
        brackets[str(k)] = rows
    return LInfinityDocument(schema_version=SCHEMA_VERSION, kind="linf", name=L.name, letters=letters,
                             tangent_dims=T.dims(), differentials=differentials, brackets=brackets,
                             window=WindowInfo(max_word=max_word, max_level=max_level, top_degree=L.top_degree),
                             witness=witness)


def linf_from_document(doc: LInfinityDocument) -> LInfinityAlgebra:
    """Rebuild the codifferential from the emitted ℓ_k tables"""
    names = [e.name for e in doc.letters]
    if len(set(names)) != len(names):
        raise SchemaViolation("letters: names must be distinct")
    index = {name: i for i, name in enumerate(names)}
    degrees = {e.name: e.degree for e in doc.letters}
    brackets: Dict[int, Dict[Word, Vector]] = {}
    for key, rows in doc.brackets.items():
        k = int(key)
        table = brackets.setdefault(k, {})
        for r, row in enumerate(rows):
            unknown = [a for a in list(row.inputs) + list(row.output) if a not in index]
            if unknown:
                raise SchemaViolation(f"brackets.{key}.{r}: unknown letter {unknown[0]!r}")
            if len(row.inputs) != k or list(row.inputs) != sorted(row.inputs, key=index.__getitem__):
                raise SchemaViolation(f"brackets.{key}.{r}.inputs: expected {k} letters in letter order")
            table[tuple(row.inputs)] = {a: rational(v) for a, v in row.output.items()}
    return codifferential_from_brackets(BasedSpace(tuple(names)), degrees, brackets, doc.window.max_word,
                                        doc.window.top_degree, doc.name)


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def load_input(data, max_word: int, max_level: int) -> Union[SimplicialLieAlgebra, FormalInfinityGroup]:
    """Validate an input document and build the object to differentiate"""
    doc = parse_input(data)
    if isinstance(doc, LieDocument):
        return SimplicialLieAlgebra.constant(lie_from_document(doc), max_level)
    if isinstance(doc, SimplicialLieDocument):
        return simplicial_lie_from_document(doc)
    if isinstance(doc, SimplicialVSDocument):
        V = simplicial_vs_from_document(doc)
        return SimplicialLieAlgebra(V, [LieAlgebra(space, {}, doc.name) for space in V.levels], doc.name)
    if isinstance(doc, JetsDocument):
        return jets_from_document(doc, max_word)
    raise SchemaViolation("kind: L∞ documents are results and cannot be differentiated")

"""
Shuffles, order-preserving surjections and the shuffle bijection

Ordinals are ``[n] = {0, ..., n}``. A surjection ``[n] -> [m]`` is stored as
its value table; a shuffle as the pair of index sets ``(I, J)``.
"""

import itertools
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple

from ..utils.exceptions import MalformedShuffle, NegativeIndex
from ..utils.logger import logger

Indices = Tuple[int, ...]


@dataclass(frozen=True)
class Shuffle:
    """An ordered partition ``I ⊔ J = {0, ..., p+q-1}`` with ``|I| = p``"""
    p: int
    q: int
    I: Indices
    J: Indices

    def __post_init__(self):
        I, J = tuple(self.I), tuple(self.J)
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "J", J)
        if len(I) != self.p or len(J) != self.q:
            raise MalformedShuffle(f"Expected sizes ({self.p},{self.q}), got ({len(I)},{len(J)})")
        if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
            raise MalformedShuffle(f"Index sets must be strictly increasing: {I}, {J}")
        if sorted(I + J) != list(range(self.p + self.q)):
            raise MalformedShuffle(f"{I} and {J} do not partition [{self.p + self.q - 1}]")

    @property
    def sign(self) -> int:
        return shuffle_sign(self)


def enumerate_shuffles(p: int, q: int) -> List[Shuffle]:
    """All (p,q)-shuffles, lexicographic in I"""
    total = range(p + q)
    out = []
    for I in itertools.combinations(total, p):
        chosen = set(I)
        out.append(Shuffle(p, q, I, tuple(t for t in total if t not in chosen)))
    return out


def shuffle_sign(s: Shuffle) -> int:
    signature = sum(i - k for k, i in enumerate(s.I))
    return -1 if signature % 2 else 1


# ---------------------------------------------------------------------------
# order-preserving maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrdinalEpi:
    """Order-preserving surjection ``[n] -> [m]`` given by its value table"""
    n: int
    m: int
    values: Indices

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.n + 1:
            raise MalformedShuffle(f"Value table of length {len(values)} for [{self.n}]")
        if values[0] != 0 or values[-1] != self.m:
            raise MalformedShuffle(f"{values} is not onto [{self.m}]")
        if any(b - a not in (0, 1) for a, b in zip(values, values[1:])):
            raise MalformedShuffle(f"{values} is not a monotone surjection")

    @classmethod
    def identity(cls, n: int) -> "OrdinalEpi":
        return cls(n, n, tuple(range(n + 1)))

    def __call__(self, t: int) -> int:
        return self.values[t]

    def compose(self, other: "OrdinalEpi") -> "OrdinalEpi":
        """``self ∘ other``"""
        if other.m != self.n:
            raise MalformedShuffle(f"Cannot compose [{other.n}]->[{other.m}] with [{self.n}]->[{self.m}]")
        return OrdinalEpi(other.n, self.m, tuple(self.values[v] for v in other.values))

    def degeneracy_set(self) -> Indices:
        """The set of t with f(t) = f(t+1)"""
        return tuple(t for t in range(self.n) if self.values[t] == self.values[t + 1])


def codegeneracy_composite(B: Sequence[int], n: int) -> OrdinalEpi:
    """The surjection ``s^B: [n] -> [n - |B|]`` with degeneracy set B"""
    B = tuple(B)
    if any(b < 0 or b >= n for b in B) or list(B) != sorted(set(B)):
        raise MalformedShuffle(f"{B} is not an increasing subset of [{n - 1}]")
    chosen = set(B)
    kept = [a for a in range(n) if a not in chosen]
    values = tuple(sum(1 for a in kept if a < t) for t in range(n + 1))
    return OrdinalEpi(n, n - len(B), values)


def coface(i: int, n: int) -> Indices:
    """Value table of ``δ^i: [n-1] -> [n]`` (skips i)"""
    return tuple(t if t < i else t + 1 for t in range(n))


def codegeneracy(j: int, n: int) -> OrdinalEpi:
    """``σ^j: [n+1] -> [n]`` (hits j twice)"""
    return codegeneracy_composite((j,), n + 1)


def factor_order_map(values: Sequence[int]) -> Tuple[OrdinalEpi, Indices]:
    """Epi-mono factorization of a monotone map given by its value table

    Returns the surjection onto ``[k]`` and the image, listed increasingly.
    """
    image = tuple(sorted(set(values)))
    position = {v: k for k, v in enumerate(image)}
    epi = OrdinalEpi(len(values) - 1, len(image) - 1, tuple(position[v] for v in values))
    return epi, image


def shift_filter(I: Sequence[int], r: int, t: int, keep: str = ">") -> Indices:
    """Keep entries related to r by ``keep`` then add t to each, ``I^{>r}_t``"""
    tests = {
        ">": lambda x: x > r,
        ">=": lambda x: x >= r,
        "<": lambda x: x < r,
        "<=": lambda x: x <= r,
        "all": lambda x: True,
    }
    if keep not in tests:
        raise MalformedShuffle(f"Unknown filter {keep!r}")
    out = tuple(x + t for x in I if tests[keep](x))
    if out and min(out) < 0:
        raise NegativeIndex(f"Shifting {tuple(I)} by {t} gives negative entry {min(out)}")
    return out


def shifted(I: Sequence[int], t: int) -> Indices:
    return shift_filter(I, 0, t, "all")


# ---------------------------------------------------------------------------
# the shuffle bijection
# ---------------------------------------------------------------------------

def theta(p1: int, p2: int, p3: int, AB: Shuffle, CD: Shuffle) -> Tuple[Shuffle, Shuffle]:
    """Sh(p1+p2, p3) × Sh(p1, p2) → Sh(p1, p2+p3+1)|_{0∈J} × Sh(p2, p3)"""
    if p1 + p2 + p3 <= 0:
        raise MalformedShuffle("theta needs p1 + p2 + p3 > 0")
    if (AB.p, AB.q) != (p1 + p2, p3) or (CD.p, CD.q) != (p1, p2):
        raise MalformedShuffle(
            f"Expected shuffles of type ({p1 + p2},{p3}) and ({p1},{p2}), "
            f"got ({AB.p},{AB.q}) and ({CD.p},{CD.q})")
    n = p1 + p2 + p3
    A, B = AB.I, AB.J
    K = tuple(A[c] for c in CD.I)
    chosen = set(K)
    L = [a for a in range(n) if a not in chosen]
    M = tuple(L.index(A[d]) for d in CD.J)
    N = tuple(L.index(b) for b in B)
    I = shifted(K, 1)
    J = (0,) + shifted(L, 1)
    return Shuffle(p1, p2 + p3 + 1, I, J), Shuffle(p2, p3, M, N)


def _epi_equal(lhs: OrdinalEpi, rhs: OrdinalEpi) -> bool:
    return lhs.n == rhs.n and lhs.values == rhs.values


def _theta_case_checks(p1: int, p2: int, p3: int, AB: Shuffle, CD: Shuffle,
                       IJ: Shuffle, MN: Shuffle) -> List[str]:
    """Names of the identities violated by one input pair"""
    n = p1 + p2 + p3
    A, B, C, D = AB.I, AB.J, CD.I, CD.J
    I, J, M, N = IJ.I, IJ.J, MN.I, MN.J
    s = codegeneracy_composite
    failed = []

    sign_lhs = AB.sign * CD.sign
    sign_rhs = (-1) ** p1 * IJ.sign * MN.sign
    if sign_lhs != sign_rhs:
        failed.append("sign")

    K = shifted(I, -1)
    if not _epi_equal(s(N, n - p1).compose(s(K, n)), s(C, p1 + p2).compose(s(B, n))):
        failed.append("sN sI-1 = sC sB")
    L = shift_filter(J, 0, -1)
    if not _epi_equal(s(L, n), s(D, p1 + p2).compose(s(B, n))):
        failed.append("sJ>0-1 = sD sB")
    if not _epi_equal(s(A, n), s(M, p2 + p3).compose(s(K, n))):
        failed.append("sA = sM sI-1")

    if 0 in A and 1 in I:
        lhs = s(shift_filter(A, 0, -1), n - 1)
        rhs = s(M, p2 + p3).compose(s(shift_filter(I, 1, -2), n - 1))
        if not _epi_equal(lhs, rhs):
            failed.append("case 0∈A, 1∈I")
    if 0 in A and 1 in J:
        if 0 not in M:
            failed.append("case 0∈A, 1∈J: 0∈M")
        else:
            lhs = s(shift_filter(A, 0, -1), n - 1)
            rhs = s(shift_filter(M, 0, -1), p2 + p3 - 1).compose(s(shifted(I, -2), n - 1))
            if not _epi_equal(lhs, rhs):
                failed.append("case 0∈A, 1∈J")
    if 0 in B:
        if 1 not in J or 0 not in N:
            failed.append("case 0∈B: 1∈J, 0∈N")
        else:
            lhs = s(shifted(A, -1), n - 1)
            rhs = s(shifted(M, -1), p2 + p3 - 1).compose(s(shifted(I, -2), n - 1))
            if not _epi_equal(lhs, rhs):
                failed.append("case 0∈B")
    return failed


def verify_theta_identities(n_max: int) -> Dict:
    """Exhaustively check the shuffle bijection and its codegeneracy identities"""
    violations = []
    cases = 0
    bijective = True
    for n in range(1, n_max + 1):
        for p1 in range(n + 1):
            for p2 in range(n - p1 + 1):
                p3 = n - p1 - p2
                images = set()
                for AB in enumerate_shuffles(p1 + p2, p3):
                    for CD in enumerate_shuffles(p1, p2):
                        cases += 1
                        IJ, MN = theta(p1, p2, p3, AB, CD)
                        images.add((IJ, MN))
                        for name in _theta_case_checks(p1, p2, p3, AB, CD, IJ, MN):
                            violations.append({
                                "identity": name,
                                "p": [p1, p2, p3],
                                "AB": [list(AB.I), list(AB.J)],
                                "CD": [list(CD.I), list(CD.J)],
                            })
                expected = comb(n, p1) * comb(p2 + p3, p2)
                domain = comb(n, p3) * comb(p1 + p2, p1)
                if len(images) != domain or domain != expected:
                    bijective = False
                    violations.append({"identity": "bijection", "p": [p1, p2, p3],
                                       "images": len(images), "expected": expected})
    logger.debug(f"Shuffle bijection: {cases} cases checked up to n = {n_max}")
    return {"passed": not violations and bijective, "cases": cases, "violations": violations}


def shuffle_count_table(limit: int) -> Iterable[Tuple[int, int, bool]]:
    """(p, q, |Sh(p,q)| == binom(p+q, p)) for every p + q ≤ limit"""
    for total in range(limit + 1):
        for p in range(total + 1):
            yield p, total - p, len(enumerate_shuffles(p, total - p)) == comb(total, p)

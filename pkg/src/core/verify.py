"""
Verification suites for linfdiff

Each suite returns a list of named checks; ``all`` runs every suite in a
fixed order. Failures are report content, never exceptions.
"""

from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from . import catalog
from .bar import ComparisonMaps, eu_coalgebra, wbar
from .diffcore import (FormalInfinityGroup, canonical_witness, diff, exactness_check, functoriality_violations,
                       lie_n_report, pbw_normalize, phi_comparison, quadratic_skew, window_stability)
from .dual import (cotangent_matches, dualize, forgetful_compatible, k_alg_dimension_check, k_alg_round_trip,
                   lambda_algebra, random_cdga, sym_matches_normalized)
from .liealg import LInfinityAlgebra, normalized_dg_lie
from .shuffle import shuffle_count_table, verify_theta_identities
from .simplicial import (check_structure, cosimplicial_K, cosimplicial_N, dold_kan_K, dold_kan_unit,
                         dual_em_coassociativity_violations, em_chain_map_violations, em_symmetry_violations,
                         normalized_chains, random_chain_complex, random_cochain_complex, random_simplicial_vs)
from .config import RunConfig
from .exactlin import is_injective, is_surjective
from ..utils.exceptions import LinfDiffException
from ..utils.logger import RunLogger, get_run_logger
from ..utils.schemas import SCHEMA_VERSION, CheckEntry, ReportDocument

SUITE_ORDER = ("shuffles", "doldkan", "em", "psi", "dstar", "main", "exactness")

PSI_DEFAULTS = ("sl2", "crossed-module-id", "crossed-module-shifted")
DSTAR_DEFAULTS = ("trivial", "abelian-1", "nonabelian-2dim")


def check(name: str, passed: bool, detail: str = "") -> CheckEntry:
    return CheckEntry(name=name, passed=bool(passed), detail=detail)


def _guarded(name: str, fn: Callable[[], CheckEntry]) -> CheckEntry:
    try:
        return fn()
    except LinfDiffException as e:
        return check(name, False, f"{type(e).__name__}: {e}")


def _violations(name: str, found: Sequence) -> CheckEntry:
    if found:
        return check(name, False, f"{len(found)} violation(s), first: {found[0]!r}")
    return check(name, True)


class VerificationRunner:
    """Runs the named suites for one invocation"""

    def __init__(self, config: RunConfig, run_logger: Optional[RunLogger] = None):
        self.config = config
        self.run_logger = run_logger or get_run_logger()
        self.suites: Dict[str, Callable[[], List[CheckEntry]]] = {
            "shuffles": self.suite_shuffles,
            "doldkan": self.suite_doldkan,
            "em": self.suite_em,
            "psi": self.suite_psi,
            "dstar": self.suite_dstar,
            "main": self.suite_main,
            "exactness": self.suite_exactness,
        }

    @property
    def K(self) -> int:
        return self.config.max_word

    @property
    def N(self) -> int:
        return self.config.max_level

    def _map(self, fn: Callable, items: Iterable) -> List:
        items = list(items)
        if self.config.threads <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
            return list(pool.map(fn, items))

    def _catalog(self, defaults: Optional[Sequence[str]] = None) -> List[str]:
        if self.config.catalog:
            catalog.get_entry(self.config.catalog)
            return [self.config.catalog]
        return list(defaults) if defaults is not None else list(catalog.ENTRIES)

    def _seeds(self) -> range:
        return range(self.config.seed, self.config.seed + self.config.random_trials)

    # suites

    def suite_shuffles(self) -> List[CheckEntry]:
        n = self.config.max_n
        theta = verify_theta_identities(n)
        detail = f"{theta['cases']} cases"
        if theta["violations"]:
            detail += f"; first violation {theta['violations'][0]}"
        counts = [(p, q) for p, q, ok in shuffle_count_table(n) if not ok]
        return [check(f"theta bijection and identities (n <= {n})", theta["passed"], detail),
                _violations(f"|Sh(p,q)| = binom(p+q,p) (p+q <= {n})", counts)]

    def _doldkan_trial(self, seed: int) -> List[CheckEntry]:
        def nk() -> CheckEntry:
            C = random_chain_complex(seed, 4, 3)
            return check(f"N(K(C)) = C [seed {seed}]", normalized_chains(dold_kan_K(C)).same_matrices(C))

        def kn() -> CheckEntry:
            V = random_simplicial_vs(seed, 4, 2)
            unit = dold_kan_unit(V)
            iso = all(is_injective(f) and is_surjective(f) for f in unit.components)
            natural = not unit.naturality_violations()
            structure = not check_structure(V)
            return check(f"K(N(V)) -> V iso [seed {seed}]", iso and natural and structure)

        def dual() -> CheckEntry:
            D = random_cochain_complex(seed, 4, 3)
            A = cosimplicial_K(D)
            ok = not check_structure(A) and cosimplicial_N(A).same_matrices(D)
            return check(f"N*(K*(C)) = C [seed {seed}]", ok)

        return [_guarded(f"N(K(C)) = C [seed {seed}]", nk),
                _guarded(f"K(N(V)) -> V iso [seed {seed}]", kn),
                _guarded(f"N*(K*(C)) = C [seed {seed}]", dual)]

    def suite_doldkan(self) -> List[CheckEntry]:
        return [c for trial in self._map(self._doldkan_trial, self._seeds()) for c in trial]

    def suite_em(self) -> List[CheckEntry]:
        seed = self.config.seed
        V, W = random_simplicial_vs(seed, 4, 1), random_simplicial_vs(seed + 1, 4, 1)
        A, B, C = (random_simplicial_vs(seed + k, 3, 1).dual() for k in range(2, 5))
        return [
            _guarded("EM is a chain map (p+q <= 4)", lambda: _violations(
                "EM is a chain map (p+q <= 4)", em_chain_map_violations(V, W, 4))),
            _guarded("EM is Koszul symmetric (p+q <= 4)", lambda: _violations(
                "EM is Koszul symmetric (p+q <= 4)", em_symmetry_violations(V, W, 4))),
            _guarded("dual EM is coassociative (p+q+r <= 3)", lambda: _violations(
                "dual EM is coassociative (p+q+r <= 3)", dual_em_coassociativity_violations(A, B, C, 3))),
        ]

    def _psi_entry(self, name: str) -> List[CheckEntry]:
        def run() -> List[CheckEntry]:
            maps = ComparisonMaps(catalog.build(name, self.N), self.K)
            return [_violations(f"psi closed formula on N Prim [{name}]", maps.closed_form_violations()),
                    _violations(f"psi commutes with faces and degeneracies [{name}]", maps.face_violations()),
                    _violations(f"psi is a coalgebra map [{name}]", maps.coalgebra_violations()),
                    _violations(f"phi recursion matches [{name}]", maps.app_map_violations())]
        try:
            return run()
        except LinfDiffException as e:
            return [check(f"psi [{name}]", False, f"{type(e).__name__}: {e}")]

    def suite_psi(self) -> List[CheckEntry]:
        return [c for entry in self._map(self._psi_entry, self._catalog(PSI_DEFAULTS)) for c in entry]

    def _dstar_trial(self, seed: int) -> List[CheckEntry]:
        def free() -> CheckEntry:
            V = random_simplicial_vs(seed, 2, 2, reduced=True)
            return check(f"D*(Sym V) matches Sym(N*V) [seed {seed}]", sym_matches_normalized(V, 2, 2))

        def round_trip() -> CheckEntry:
            C = random_cdga(seed)
            ok = not C.violations() and k_alg_dimension_check(C) and k_alg_round_trip(C)
            return check(f"D*(K_alg(C)) = C [seed {seed}]", ok)

        return [_guarded(f"D*(Sym V) matches Sym(N*V) [seed {seed}]", free),
                _guarded(f"D*(K_alg(C)) = C [seed {seed}]", round_trip)]

    def _dstar_entry(self, name: str) -> List[CheckEntry]:
        def forgetful() -> CheckEntry:
            A = dualize(wbar(catalog.build(name, self.N), self.K))
            return check(f"D* forgets to D*+ [{name}]", forgetful_compatible(A, self.K, self.N))

        def cot() -> CheckEntry:
            A = dualize(wbar(catalog.build(name, self.N), self.K))
            return check(f"indecomposables of D* = N*(cotangent) [{name}]", cotangent_matches(A, self.K, self.N))

        return [_guarded(f"D* forgets to D*+ [{name}]", forgetful),
                _guarded(f"indecomposables of D* = N*(cotangent) [{name}]", cot)]

    def suite_dstar(self) -> List[CheckEntry]:
        checks = []
        for n in range(4):
            lam = lambda_algebra(n)
            ok = lam.dims() == [comb(n + 1, k) for k in range(n + 2)] and not lam.square_violations()
            checks.append(check(f"Lambda({n}) dims and square-zero", ok))
        checks += [c for trial in self._map(self._dstar_trial, self._seeds()) for c in trial]
        checks += [c for entry in self._map(self._dstar_entry, self._catalog(DSTAR_DEFAULTS)) for c in entry]
        return checks

    def _main_entry(self, name: str) -> List[CheckEntry]:
        entry = catalog.get_entry(name)
        out: List[CheckEntry] = []

        def guarded(label: str, fn: Callable[[], CheckEntry]):
            out.append(_guarded(f"{label} [{name}]", fn))

        g = entry.build(self.N)
        guarded("delta_E^2 = 0 on EU(Ng)",
                lambda: _violations(f"delta_E^2 = 0 on EU(Ng) [{name}]", eu_coalgebra(g, self.K).square_violations()))
        guarded("delta_CE^2 = 0 on CE(Ng)", lambda: _violations(
            f"delta_CE^2 = 0 on CE(Ng) [{name}]",
            LInfinityAlgebra.from_dg_lie(normalized_dg_lie(g), self.K).square_violations()))

        result = None
        try:
            result = diff(g, self.K, self.N)
        except LinfDiffException as e:
            out.append(check(f"Diff(W̄U(g)) [{name}]", False, f"{type(e).__name__}: {e}"))
        if result is not None:
            L = result.algebra
            out.append(check(f"tangent complex = N(T W̄U(g))[-1] [{name}]", result.tangent_matches(),
                             f"tangent dims {L.tangent_dims()}"))
            out.append(_violations(f"generalized Jacobi [{name}]", L.square_violations()))
            if not entry.constant:
                report = lie_n_report(result, 2)
                out.append(check(f"Lie 2-group gives Lie 2-algebra [{name}]",
                                 report["lie_n_group"] and report["lie_n_algebra"], str(report)))

        def phi() -> CheckEntry:
            comparison = phi_comparison(g, self.K, self.N)
            ok = comparison.is_iso and comparison.ce_matches
            if ok and entry.constant and self.K >= 3:
                ok = not any(comparison.source.brackets().get(3, {}).values())
            return check(f"Phi is an L-infinity isomorphism onto CE(Ng) [{name}]", ok,
                         f"iso {comparison.is_iso}, CE match {comparison.ce_matches}")

        guarded("Phi is an L-infinity isomorphism onto CE(Ng)", phi)
        return out

    def _pbw_check(self) -> CheckEntry:
        name = "pbw_normalize on skewed W̄U(abelian-2)"

        def run() -> CheckEntry:
            top = min(self.N, 3)
            g = catalog.build("abelian-2", top)
            G = FormalInfinityGroup.from_simplicial_coalgebra(canonical_witness(g, self.K).target, g.name)
            skewed = quadratic_skew(G, G.top_level)
            witness = pbw_normalize(skewed)
            return _violations(name, witness.criteria_violations())

        return _guarded(name, run)

    def suite_main(self) -> List[CheckEntry]:
        checks = [c for entry in self._map(self._main_entry, self._catalog()) for c in entry]
        if not self.config.catalog:
            checks.append(self._pbw_check())
            checks.append(_guarded("window stability [abelian-1]", lambda: check(
                "window stability [abelian-1]",
                window_stability(catalog.build("abelian-1", self.N + 1), self.K, self.N))))
        return checks

    def _exactness_entry(self, name: str) -> CheckEntry:
        morphism = catalog.MORPHISMS[name]

        def run() -> CheckEntry:
            report = exactness_check(morphism.build(self.N), self.K, self.N)
            return check(f"fibrations and weak equivalences [{name}]", report.consistent, str(report.to_dict()))

        return _guarded(f"fibrations and weak equivalences [{name}]", run)

    def suite_exactness(self) -> List[CheckEntry]:
        checks = self._map(self._exactness_entry, list(catalog.MORPHISMS))
        top = min(self.N, 2)
        name = "Diff(h f) = Diff(h) Diff(f) [inclusion, quotient]"
        checks.append(_guarded(name, lambda: _violations(name, functoriality_violations(
            catalog.MORPHISMS["inclusion"].build(top), catalog.MORPHISMS["quotient"].build(top),
            min(self.K, 2), top))))
        return checks

    # reports

    def run(self, suite: str) -> ReportDocument:
        names = SUITE_ORDER if suite == "all" else (suite,)
        checks: List[CheckEntry] = []
        for name in names:
            self.run_logger.start_stage(name)
            self.run_logger.info(f"Suite started: {name}")
            found = self.suites[name]()
            for entry in found:
                self.run_logger.log_check(entry.name, entry.passed, entry.detail)
            checks += found
            self.run_logger.end_stage(name)
        passed = all(c.passed for c in checks)
        self.run_logger.end_run(passed)
        return ReportDocument(schema_version=SCHEMA_VERSION, kind="report", name=self.config.catalog or "",
                              suite=suite, passed=passed, checks=checks)

"""
Inequality checks over constructed and seeded corpora.

Each check returns a CheckReport. Checks whose bound depends on constants that are
not known exactly for the space (K, K_b, Gamma, Gamma_c, Gamma_r) report status
"skipped" instead of asserting anything.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Sequence

import numpy as np

from .constants import (
    conservative_constant,
    democratic_constant,
    greedy_type_constant,
    indicator_extremes,
    reverse_conservative_constant,
)
from .corpus import EPSILONS, make_corpus, proof_witnesses
from .errors import (
    dist_indicator,
    sigma,
    sigma_branch,
    sigma_gag,
    sigma_L,
    sigma_overlap,
    sigma_R,
    sigma_tilde,
    sigma_tilde_L,
    sigma_tilde_R,
)
from .exceptions import InvalidParameterError, SelectorAxiomError
from .greedy import (
    BranchSelector,
    bga_run,
    check_selector_axioms,
    greedy_set,
    tga,
    valid_greedy_sets,
    wtga,
)
from .logger import get_logger
from .records import ConstantEstimate, dumps_record, one_based, zero_based
from .settings import get_settings
from .space import SpaceSpec, basis_constant, batch_norm, indicator, is_absolute, norm, project, support
from .worker import run_jobs

logger = get_logger("greedybases.verify")

CheckStatus = Literal["pass", "fail", "skipped"]

MAX_WITNESSES = 20
SIGN_CAP = 6
GRID_CAP = 4
OVERLAP_LAMBDAS = (0.0, 0.25, 0.5)
T3_LAMBDAS = (0.0, 0.5)
CSV_COLUMNS = ("check", "instances", "max_ratio", "bound", "violations", "vacuous")


# -------------------------------
# Reports
# -------------------------------


@dataclass
class CheckReport:
    check_id: str
    space: str
    bound: float | None = None
    instances: int = 0
    max_ratio: float | None = None
    worst: dict[str, Any] | None = None
    violation_count: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    vacuous: int = 0
    skipped: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> CheckStatus:
        if self.skipped is not None:
            return "skipped"
        return "fail" if self.violation_count else "pass"

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def violate(self, witness: dict[str, Any]):
        self.violation_count += 1
        if len(self.violations) < MAX_WITNESSES:
            self.violations.append(witness)

    def record(self, ratio: float, witness: dict[str, Any], bound: float | None = None) -> bool:
        """Count one instance. Returns False when it breaks the bound."""
        ratio = float(ratio)
        self.instances += 1
        if self.max_ratio is None or ratio > self.max_ratio:
            self.max_ratio, self.worst = ratio, witness
        limit = self.bound if bound is None else bound
        if limit is not None and not get_settings().leq(ratio, limit):
            self.violate({**witness, "ratio": ratio, "bound": limit})
            return False
        return True

    def record_batch(self, ratios: np.ndarray, witness: Callable[[int], dict[str, Any]]):
        ratios = np.asarray(ratios, dtype=float)
        if ratios.size == 0:
            return
        self.instances += int(ratios.size)
        k = int(np.argmax(ratios))
        if self.max_ratio is None or ratios[k] > self.max_ratio:
            self.max_ratio, self.worst = float(ratios[k]), witness(k)
        if self.bound is not None:
            settings = get_settings()
            limit = self.bound + settings.abs_tol + settings.rel_tol * abs(self.bound)
            for i in np.flatnonzero(ratios > limit):
                self.violate({**witness(int(i)), "ratio": float(ratios[i]), "bound": self.bound})

    def to_record(self) -> dict[str, Any]:
        return {
            "check": self.check_id,
            "space": self.space,
            "status": self.status,
            "instances": self.instances,
            "max_ratio": self.max_ratio,
            "bound": self.bound,
            "violations": self.violation_count,
            "vacuous": self.vacuous,
            "witnesses": self.violations,
            "worst": self.worst,
            "skipped": self.skipped,
            "details": self.details,
        }

    def csv_row(self) -> dict[str, Any]:
        return {
            "check": self.check_id,
            "instances": self.instances,
            "max_ratio": self.max_ratio,
            "bound": self.bound,
            "violations": self.violation_count,
            "vacuous": self.vacuous,
        }

    def to_json(self) -> str:
        return dumps_record(self.to_record())


def _skipped(check_id: str, space: SpaceSpec, reason: str) -> CheckReport:
    logger.warning(f"Skipping {check_id} on {space.label}: {reason}")
    return CheckReport(check_id, space.label, skipped=reason)


def _missing(**values: float | None) -> str | None:
    absent = [name for name, value in values.items() if value is None]
    if absent:
        return "no exact value for " + ", ".join(absent)
    return None


# -------------------------------
# Constants a check may rely on
# -------------------------------


class ExactConstants:
    """Lazily computed constants of one space; exact values only."""

    def __init__(self, space: SpaceSpec, size_cap: int | None = None):
        self.space = space
        self.size_cap = size_cap

    @functools.cached_property
    def quasi_greedy(self) -> float | None:
        return 1.0 if is_absolute(self.space) else None

    @functools.cached_property
    def basis(self) -> float | None:
        est = basis_constant(self.space)
        return est.value if est.is_exact else None

    @functools.cached_property
    def democratic_estimate(self) -> ConstantEstimate:
        return democratic_constant(self.space, self.size_cap)

    @functools.cached_property
    def conservative_estimate(self) -> ConstantEstimate:
        return conservative_constant(self.space, self.size_cap)

    @functools.cached_property
    def reverse_estimate(self) -> ConstantEstimate:
        return reverse_conservative_constant(self.space, self.size_cap)

    @property
    def democratic(self) -> float | None:
        est = self.democratic_estimate
        return est.value if est.is_exact else None

    @property
    def conservative(self) -> float | None:
        est = self.conservative_estimate
        return est.value if est.is_exact else None

    @property
    def reverse(self) -> float | None:
        est = self.reverse_estimate
        return est.value if est.is_exact else None


def _constants(space: SpaceSpec, constants: ExactConstants | None) -> ExactConstants:
    return constants if constants is not None else ExactConstants(space)


def _corpus(space: SpaceSpec, corpus) -> np.ndarray:
    if corpus is None:
        return make_corpus(space.dim)
    X = np.atleast_2d(np.asarray(corpus, dtype=float))
    if X.shape[1] != space.dim:
        raise InvalidParameterError(f"Corpus vectors have dimension {X.shape[1]}, expected {space.dim}")
    return X


def _grid_cap(space: SpaceSpec, size_cap: int | None, default: int) -> int:
    cap = default if size_cap is None else size_cap
    return max(1, min(cap, space.dim, get_settings().cap_subset))


def _sign_patterns(k: int) -> np.ndarray:
    return np.array(list(itertools.product((1.0, -1.0), repeat=k)))


def _embed(dim: int, A: Sequence[int], rows: np.ndarray) -> np.ndarray:
    block = np.zeros((rows.shape[0], dim))
    block[:, list(A)] = rows
    return block


# -------------------------------
# Unconditionality and the min inequality
# -------------------------------


def check_sign_unconditionality(space: SpaceSpec, size_cap: int | None = None, *, constants: ExactConstants | None = None) -> CheckReport:
    """(1/2K)||1_A|| <= ||sum eps_j e_j|| <= 2K||1_A|| and ||sum a_j e_j|| <= 2K max|a_j| ||1_A||."""
    constants = _constants(space, constants)
    K = constants.quasi_greedy
    if (reason := _missing(K=K)) is not None:
        return _skipped("sign_unconditionality", space, reason)
    report = CheckReport("sign_unconditionality", space.label, bound=2 * K)
    cap = _grid_cap(space, size_cap, SIGN_CAP)
    d = space.dim
    uc_max = cuc_max = 0.0
    grid = (0.25, -0.25, 1.0, -1.0)
    for k in range(1, cap + 1):
        signs = _sign_patterns(k)
        coeffs = np.array(list(itertools.product(grid, repeat=k))) if k <= GRID_CAP else None
        for A in itertools.combinations(range(d), k):
            ind = norm(space, indicator(d, A))
            values = batch_norm(space, _embed(d, A, signs))
            ratios = np.maximum(values / ind, ind / values)
            uc_max = max(uc_max, float(ratios.max()))
            report.record_batch(ratios, lambda i, A=A, signs=signs: {"part": "uc", "A": one_based(A), "signs": signs[i].tolist()})
            if coeffs is not None:
                cvals = batch_norm(space, _embed(d, A, coeffs))
                cratios = cvals / (np.abs(coeffs).max(axis=1) * ind)
                cuc_max = max(cuc_max, float(cratios.max()))
                report.record_batch(cratios, lambda i, A=A, coeffs=coeffs: {"part": "cuc", "A": one_based(A), "a": coeffs[i].tolist()})
    report.details = {"size_cap": cap, "uc_max": uc_max, "cuc_max": cuc_max}
    return report


def check_min_inequality(space: SpaceSpec, corpus=None, *, constants: ExactConstants | None = None) -> CheckReport:
    """|e_rho(m)^*(x)| ||sum_{i<=m} e_rho(i)|| <= 4K^2 ||x|| for every greedy ordering rho."""
    constants = _constants(space, constants)
    K = constants.quasi_greedy
    if (reason := _missing(K=K)) is not None:
        return _skipped("min", space, reason)
    report = CheckReport("min", space.label, bound=4 * K**2)
    d = space.dim
    for x in _corpus(space, corpus):
        base = norm(space, x)
        if base <= get_settings().abs_tol:
            report.vacuous += 1
            continue
        mags = np.sort(np.abs(x))[::-1]
        sets = [(m, lam) for m in range(1, d + 1) for lam in valid_greedy_sets(x, m)]
        block = np.array([indicator(d, lam) for _, lam in sets])
        lhs = np.array([mags[m - 1] for m, _ in sets]) * batch_norm(space, block)
        report.record_batch(lhs / base, lambda i, x=x, sets=sets: {"x": x, "m": sets[i][0], "greedy_set": one_based(sets[i][1])})
    return report


# -------------------------------
# Partially greedy type bounds
# -------------------------------


def _greedy_ratios(report: CheckReport, space: SpaceSpec, x: np.ndarray, denominator: Callable[..., Any], m_values: Sequence[int] | None = None):
    """Record ||x - P_Lambda x|| / D(x, m; Lambda) for every valid greedy set Lambda."""
    tol = get_settings().abs_tol
    for m in m_values or range(1, space.dim + 1):
        for lam in valid_greedy_sets(x, m):
            den = denominator(space, x, m, greedy_set=lam)
            if den.is_infeasible or den.value <= tol:
                report.vacuous += 1
                continue
            num = norm(space, x - project(x, lam))
            report.record(
                num / den.value,
                {"x": x, "m": m, "greedy_set": one_based(lam), "competitor": one_based(den.witness_set)},
            )


def _witness_pair(estimate: ConstantEstimate) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return zero_based(estimate.witness["A"]), zero_based(estimate.witness["B"])


def check_pg_bound(space: SpaceSpec, corpus=None, *, constants: ExactConstants | None = None) -> CheckReport:
    """||x - G_m x|| <= (1 + K + 8K^4 Gamma_c) sigma~_m^L(x), plus the witness family for the converse."""
    constants = _constants(space, constants)
    K, gc = constants.quasi_greedy, constants.conservative
    if (reason := _missing(K=K, Gamma_c=gc)) is not None:
        return _skipped("pg", space, reason)
    report = CheckReport("pg", space.label, bound=1 + K + 8 * K**4 * gc)
    for x in _corpus(space, corpus):
        _greedy_ratios(report, space, x, sigma_tilde_L)

    # x = 1_A + (1+eps) 1_B with A < B forces the ratio up to ||1_A|| / ((1+eps)||1_B||).
    A, B = _witness_pair(constants.conservative_estimate)
    converse = []
    for eps, x in zip(EPSILONS, proof_witnesses(space.dim, A, B)):
        m = len(B)
        den = sigma_tilde_L(space, x, m)
        ratio = norm(space, x - tga(x, m)) / den.value
        lower = norm(space, indicator(space.dim, A)) / ((1 + eps) * norm(space, indicator(space.dim, B)))
        report.record(ratio, {"x": x, "m": m, "family": "conservative_witness", "eps": eps})
        if not get_settings().leq(lower, ratio):
            report.violate({"x": x, "m": m, "kind": "converse", "ratio": ratio, "lower": lower})
        converse.append({"eps": eps, "ratio": ratio, "lower": lower})
    report.details = {"K": K, "Gamma_c": gc, "converse": converse}
    return report


def _star_bound(K: float, K_b: float, gamma: float) -> float:
    return K * K_b + 16 * K**4 * gamma * (K_b + 1) + K * (K_b + 1) + 1


def check_property_star(space: SpaceSpec, corpus=None, *, reverse: bool = False, constants: ExactConstants | None = None) -> CheckReport:
    """||x - G_m x|| <= (KK_b + 16K^4 Gamma (K_b+1) + K(K_b+1) + 1) sigma_m^L(x) (sigma_m^R when reverse)."""
    check_id = "property_star_star" if reverse else "property_star"
    constants = _constants(space, constants)
    K, K_b = constants.quasi_greedy, constants.basis
    gamma = constants.reverse if reverse else constants.conservative
    if (reason := _missing(K=K, K_b=K_b, **{"Gamma_r" if reverse else "Gamma_c": gamma})) is not None:
        return _skipped(check_id, space, reason)
    report = CheckReport(check_id, space.label, bound=_star_bound(K, K_b, gamma))
    denominator = sigma_R if reverse else sigma_L
    for x in _corpus(space, corpus):
        _greedy_ratios(report, space, x, denominator)
    report.details = {"K": K, "K_b": K_b, "Gamma_r" if reverse else "Gamma_c": gamma}
    return report


def check_property_star_star(space: SpaceSpec, corpus=None, *, constants: ExactConstants | None = None) -> CheckReport:
    return check_property_star(space, corpus, reverse=True, constants=constants)


def check_gag(space: SpaceSpec, corpus=None) -> CheckReport:
    """
    sup ||x - G_m x|| / sigma over A outside [alpha_m, beta_m], and the overlap variant
    |A n Lambda_m(x)| <= floor(lam m). Reported, not bounded.
    """
    report = CheckReport("gag", space.label)
    overlap = {lam: 0.0 for lam in OVERLAP_LAMBDAS}
    tol = get_settings().abs_tol
    for x in _corpus(space, corpus):
        _greedy_ratios(report, space, x, sigma_gag)
        for m in range(1, space.dim + 1):
            lam_set = greedy_set(x, m)
            num = norm(space, x - project(x, lam_set))
            for lam in OVERLAP_LAMBDAS:
                den = sigma_overlap(space, x, m, lam, reference=lam_set)
                if den.value > tol:
                    overlap[lam] = max(overlap[lam], num / den.value)
    report.details = {"overlap_sup": {f"{lam:g}": v for lam, v in overlap.items()}}
    return report


def check_indicator_characterization(space: SpaceSpec, corpus=None) -> CheckReport:
    """sup ||x - G_m x|| / d(x, a 1_A) with A left of alpha_m, right of beta_m, or either."""
    report = CheckReport("indicator", space.label)
    sides = {}
    for side in ("left", "right", "both"):
        side_report = CheckReport("indicator", space.label)
        for x in _corpus(space, corpus):
            _greedy_ratios(side_report, space, x, functools.partial(dist_indicator, side=side))
        sides[side] = side_report.max_ratio
        report.instances += side_report.instances
        report.vacuous += side_report.vacuous
        if side_report.max_ratio is not None and (report.max_ratio is None or side_report.max_ratio > report.max_ratio):
            report.max_ratio, report.worst = side_report.max_ratio, {**(side_report.worst or {}), "side": side}
    report.details = {"sup_by_side": sides}
    return report


# -------------------------------
# 1-partially greedy characterization
# -------------------------------


def check_one_pg(space: SpaceSpec, corpus=None, *, reverse: bool = False, seed: int | None = None) -> CheckReport:
    """
    Two conditions that characterize (reverse) 1-partially greedy bases:
      (i)  ||x - G_1 x|| <= min(||x||, ||x - x_j e_j||) for j < alpha_1(x) (j > beta_1(x));
      (ii) max(||x||, ||x + s e_j||) <= ||x + t e_k|| for j < k (j > k) off supp(x),
           |s| = |t| >= max|x_i|.
    Plus the convexity step used to pass from (ii) to (i). Both conditions should hold or
    fail together; a mismatch is reported as its own violation.
    """
    check_id = "one_pg_reverse" if reverse else "one_pg"
    report = CheckReport(check_id, space.label, bound=1.0)
    d = space.dim
    X = _corpus(space, corpus)
    rng = np.random.default_rng(get_settings().seed if seed is None else seed)
    failures = {"constant_one": 0, "norm_condition": 0, "convexity": 0}
    tol = get_settings().abs_tol

    # (i)
    for x in X:
        if not np.any(x):
            continue
        base = norm(space, x)
        for (k,) in valid_greedy_sets(x, 1):
            lhs = norm(space, x - project(x, (k,)))
            others = range(k) if not reverse else range(k + 1, d)
            rhs, rival = base, None
            for j in others:
                value = norm(space, x - project(x, (j,)))
                if value < rhs:
                    rhs, rival = value, j
            witness = {"condition": "constant_one", "x": x, "greedy_index": k + 1, "j": None if rival is None else rival + 1}
            if rhs <= tol:
                if lhs > tol:
                    failures["constant_one"] += 1
                    report.violate(witness)
                else:
                    report.vacuous += 1
                continue
            if not report.record(lhs / rhs, witness):
                failures["constant_one"] += 1

    # (ii) and the convexity step
    probes = [np.zeros(d)]
    for x in X:
        y = x.copy()
        if d >= 2:
            y[rng.choice(d, size=2, replace=False)] = 0.0
        probes.append(y)
    for x in probes:
        top = float(np.abs(x).max())
        scale = top if top > 0 else 1.0
        off = [i for i in range(d) if x[i] == 0.0]
        pairs = [(j, k) for j, k in itertools.permutations(off, 2) if (j > k if reverse else j < k)]
        if pairs:
            rows, meta = [], []
            for j, k in pairs:
                for c in (1.0, 2.0):
                    for s_sign, t_sign in itertools.product((1.0, -1.0), repeat=2):
                        s, t = s_sign * c * scale, t_sign * c * scale
                        plus_j, plus_k = x.copy(), x.copy()
                        plus_j[j] += s
                        plus_k[k] += t
                        rows.extend([plus_j, plus_k])
                        meta.append((j, k, s, t))
            values = batch_norm(space, np.array(rows))
            base = norm(space, x)
            for i, (j, k, s, t) in enumerate(meta):
                lhs, rhs = max(base, values[2 * i]), values[2 * i + 1]
                witness = {"condition": "norm_condition", "x": x, "j": j + 1, "k": k + 1, "s": s, "t": t}
                if not report.record(lhs / rhs, witness):
                    failures["norm_condition"] += 1
        for j in support(x):
            z = x.copy()
            z[j] = 0.0
            plus, minus = z.copy(), z.copy()
            plus[j], minus[j] = top, -top
            if not get_settings().leq(norm(space, x), max(norm(space, plus), norm(space, minus))):
                failures["convexity"] += 1
                report.violate({"condition": "convexity", "x": x, "j": j + 1, "s": top})

    constant_one = failures["constant_one"] == 0
    norm_condition = failures["norm_condition"] == 0
    if constant_one != norm_condition:
        report.violate({"condition": "equivalence", "constant_one": constant_one, "norm_condition": norm_condition})
    report.details = {"constant_one_holds": constant_one, "norm_condition_holds": norm_condition, "failures": failures}
    return report


def check_one_pg_reverse(space: SpaceSpec, corpus=None, *, seed: int | None = None) -> CheckReport:
    return check_one_pg(space, corpus, reverse=True, seed=seed)


# -------------------------------
# Weak and branch algorithms
# -------------------------------


def check_property_p_tau(space: SpaceSpec, tau: float, size_cap: int | None = None) -> CheckReport:
    """Smallest C with max_+-||sum +-e_i|| <= C ||sum a_i e_i|| for 1 <= |a_i| <= 1/tau^2, |A| <= dim/2."""
    if not 0.0 < tau < 1.0:
        raise InvalidParameterError(f"tau must lie in (0, 1), got {tau!r}")
    report = CheckReport("property_p", space.label)
    d = space.dim
    cap = max(1, min(_grid_cap(space, size_cap, GRID_CAP), d // 2))
    mags = (1.0, 1.0 / tau, 1.0 / tau**2)
    absolute = is_absolute(space)
    levels = mags if absolute else tuple(s * v for v in mags for s in (1.0, -1.0))
    for k in range(1, cap + 1):
        grid = np.array(list(itertools.product(levels, repeat=k)))
        signs = np.ones((1, k)) if absolute else _sign_patterns(k)
        for A in itertools.combinations(range(d), k):
            lhs = float(batch_norm(space, _embed(d, A, signs)).max())
            ratios = lhs / batch_norm(space, _embed(d, A, grid))
            report.record_batch(ratios, lambda i, A=A, grid=grid: {"A": one_based(A), "a": grid[i].tolist()})
    report.details = {"tau": tau, "size_cap": cap, "empirical_C": report.max_ratio}
    return report


def _split_disjoint(A: Sequence[int], D: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]] | None:
    """A = A1 u A2, D = D1 u D2 with A1 < D1 and A2 > D2, |A_i| = |D_i|."""
    A, D = sorted(A), sorted(D)
    k = len(A)
    for j in range(k + 1):
        A1, A2 = A[:j], A[j:]
        D1, D2 = D[k - j :], D[: k - j]
        if A1 and max(A1) > min(D1):
            continue
        if A2 and min(A2) < max(D2):
            continue
        return [(tuple(a), tuple(b)) for a, b in ((A1, D1), (A2, D2)) if a]
    return None


def _theta_pairs(dim: int, cap: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    pairs = []
    for k in range(1, min(cap, dim // 2) + 1):
        for A in itertools.combinations(range(dim), k):
            rest = [i for i in range(dim) if i not in A]
            for D in {tuple(rest[:k]), tuple(rest[-k:])}:
                pairs.append((A, D))
    return sorted(pairs)


def check_bga_theorems(
    space: SpaceSpec,
    tau: float,
    selector: BranchSelector | None = None,
    corpus=None,
    size_cap: int | None = None,
    *,
    constants: ExactConstants | None = None,
) -> CheckReport:
    """
    Empirical constant C of ||x - BGA_m(x)|| <= C ||x - P_A x|| (A left or right of the
    selection) over the corpus and the theta-scaled witness families, then the bounds it
    implies: Gamma_c, Gamma_r <= C/theta and max_+-||sum_A +-e_i|| <= C^2(2K_b+1)/theta^2 ||sum_A a_i e_i||.

    The asserted forms use theta_max = 0.99 tau, the largest witness scale, so they are
    C/theta_max and C^2(2K_b+1)/theta_max^2. The tau forms C/tau and C^2(2K_b+1)/tau are
    only reported in the details (keys ending in "_tau_form"); they are not checked.
    """
    selector = selector or BranchSelector(tau)
    report = CheckReport("bga", space.label)
    constants = _constants(space, constants)
    d = space.dim
    tol = get_settings().abs_tol
    try:
        check_selector_axioms(selector, dim=d)
    except SelectorAxiomError as e:
        report.violate({"kind": "selector_axioms", "message": str(e)})
        return report

    def branch_ratio(x: np.ndarray, m: int, family: str) -> tuple[float, Any] | None:
        run = bga_run(x, m, selector)
        num = norm(space, x - run.approximant)
        den = sigma_branch(space, x, run.indices)
        if den.value <= tol:
            report.vacuous += 1
            return None
        report.record(num / den.value, {"x": x, "m": m, "family": family, "selected": one_based(run.indices)})
        return num, run

    for x in _corpus(space, corpus):
        for m in range(1, len(support(x)) + 1):
            branch_ratio(x, m, "corpus")

    thetas = (tau / 2, 0.99 * tau)
    theta_max = max(thetas)
    mags = (1.0, 1.0 / tau, 1.0 / tau**2)
    absolute = is_absolute(space)
    cap = _grid_cap(space, size_cap, GRID_CAP)
    sign_cases = []
    es_checked = 0
    for A, D in _theta_pairs(d, cap):
        parts = _split_disjoint(A, D)
        if parts is None:
            report.vacuous += 1
            continue
        a = np.array([mags[i % len(mags)] for i in range(len(A))])
        coeff = dict(zip(A, a))
        for A_j, D_j in parts:
            a_j = np.array([coeff[i] for i in A_j])
            patterns = np.ones((1, len(A_j))) if absolute else _sign_patterns(len(A_j))
            for theta in thetas:
                x = theta * indicator(d, D_j)
                x[list(A_j)] = a_j
                result = branch_ratio(x, len(A_j), "es1")
                expected = theta * norm(space, indicator(d, D_j))
                es_checked += 1
                if result is None or sorted(result[1].indices) != list(A_j) or abs(result[0] - expected) > 1e-9:
                    report.violate({"kind": "es1_reproduction", "x": x, "A": one_based(A_j), "D": one_based(D_j)})
                for signs in patterns:
                    y = indicator(d, D_j)
                    y[list(A_j)] = theta * signs
                    result = branch_ratio(y, len(D_j), "es2")
                    expected = theta * norm(space, _embed(d, A_j, signs[None, :])[0])
                    es_checked += 1
                    if result is None or sorted(result[1].indices) != list(D_j) or abs(result[0] - expected) > 1e-9:
                        report.violate({"kind": "es2_reproduction", "x": y, "A": one_based(A_j), "D": one_based(D_j)})
        sign_cases.append((A, a))

    # x = theta 1_A + 1_B on the extremal pairs of Gamma_c and Gamma_r
    sided = {
        "Gamma_c": constants.conservative_estimate,
        "Gamma_r": constants.reverse_estimate,
    }
    for name, est in sided.items():
        A, B = _witness_pair(est)
        for theta in thetas:
            x = indicator(d, B)
            x[list(A)] = theta
            branch_ratio(x, len(B), name)

    C = report.max_ratio
    derived: dict[str, Any] = {"C": C, "theta": theta_max, "es_instances": es_checked}
    if C is not None:
        for name, est in sided.items():
            bound = C / theta_max
            derived[f"{name}_bound"] = bound
            derived[f"{name}_bound_tau_form"] = C / tau
            if not get_settings().leq(est.value, bound):
                report.violate({"kind": name, "value": est.value, "bound": bound})
        K_b = constants.basis
        if K_b is not None:
            factor = C**2 * (2 * K_b + 1) / theta_max**2
            derived["sign_factor"] = factor
            derived["sign_factor_tau_form"] = C**2 * (2 * K_b + 1) / tau
            for A, a in sign_cases:
                signs = np.ones((1, len(A))) if absolute else _sign_patterns(len(A))
                lhs = float(batch_norm(space, _embed(d, A, signs)).max())
                rhs = factor * norm(space, _embed(d, A, a[None, :])[0])
                if not get_settings().leq(lhs, rhs):
                    report.violate({"kind": "sign_bound", "A": one_based(A), "a": a.tolist(), "lhs": lhs, "rhs": rhs})
    report.details = {"tau": tau, "rule": selector.rule, **derived}
    return report


def check_wtga_vs_tga(space: SpaceSpec, corpus=None, tau: float = 0.5) -> CheckReport:
    """
    sup ||x - G_m^tau(x)|| / ||x - G_m(x)|| for the greedy and lazy policies, and the
    weak-greedy ratio against competitors with |A n Lambda_m^tau(x)| <= floor(lam m).
    """
    report = CheckReport("wtga", space.label)
    tol = get_settings().abs_tol
    policy_sup = {"greedy": 0.0, "lazy": 0.0}
    overlap_sup = {lam: 0.0 for lam in T3_LAMBDAS}
    for x in _corpus(space, corpus):
        for m in range(1, space.dim + 1):
            G = tga(x, m)
            den = norm(space, x - G)
            lazy_num = None
            for policy in ("greedy", "lazy"):
                selection, approx = wtga(x, m, tau, policy)
                num = norm(space, x - approx)
                if policy == "greedy" and not np.array_equal(approx, G):
                    report.violate({"kind": "greedy_policy", "x": x, "m": m, "selected": one_based(selection.indices)})
                if policy == "lazy":
                    lazy_num, lazy_set = num, selection.index_set
                if den > tol:
                    policy_sup[policy] = max(policy_sup[policy], num / den)
            if den > tol:
                report.record(lazy_num / den, {"x": x, "m": m, "policy": "lazy"})
            else:
                report.vacuous += 1
            for lam in T3_LAMBDAS:
                comp = sigma_overlap(space, x, m, lam, reference=lazy_set)
                if comp.value > tol:
                    overlap_sup[lam] = max(overlap_sup[lam], lazy_num / comp.value)
    report.details = {
        "tau": tau,
        "policy_sup": policy_sup,
        "overlap_sup": {f"{lam:g}": v for lam, v in overlap_sup.items()},
    }
    return report


# -------------------------------
# Constant relations
# -------------------------------


def check_crd_bound(space: SpaceSpec, size_cap: int | None = None, *, constants: ExactConstants | None = None) -> CheckReport:
    """Gamma <= Gamma'(2K_b + 1) + 2K_b with Gamma' = max(Gamma_c, Gamma_r), and Gamma >= Gamma'."""
    constants = constants if constants is not None else ExactConstants(space, size_cap)
    gamma, gc, gr, K_b = constants.democratic, constants.conservative, constants.reverse, constants.basis
    if (reason := _missing(Gamma=gamma, Gamma_c=gc, Gamma_r=gr, K_b=K_b)) is not None:
        return _skipped("crd", space, reason)
    sided = max(gc, gr)
    report = CheckReport("crd", space.label, bound=sided * (2 * K_b + 1) + 2 * K_b)
    report.record(gamma, {"Gamma": gamma, "Gamma_c": gc, "Gamma_r": gr, "K_b": K_b})
    if not get_settings().leq(sided, gamma):
        report.violate({"kind": "democratic_below_sided", "Gamma": gamma, "Gamma_prime": sided})
    report.details = {"Gamma": gamma, "Gamma_c": gc, "Gamma_r": gr, "K_b": K_b}
    return report


def check_fundamental(space: SpaceSpec, size_cap: int | None = None) -> CheckReport:
    """phi(m+n) <= phi(m) + phi(n) and phi(m) >= (m/n) phi(n) for m <= n."""
    report = CheckReport("fundamental", space.label, bound=1.0)
    extremes = indicator_extremes(space, size_cap)
    phi = [0.0]
    for ext in extremes:
        phi.append(max(phi[-1], ext.max_value))
    top = len(phi) - 1
    for m in range(1, top + 1):
        for n in range(m, top + 1):
            report.record(m * phi[n] / (n * phi[m]), {"relation": "scaling", "m": m, "n": n})
            if m + n <= top:
                report.record(phi[m + n] / (phi[m] + phi[n]), {"relation": "subadditive", "m": m, "n": n})
    report.details = {"phi": phi[1:]}
    return report


def check_agmin(space: SpaceSpec, size_cap: int | None = None, *, constants: ExactConstants | None = None) -> CheckReport:
    """phi(|A|) min|a_i| <= 4K^2 Gamma ||sum_A a_i e_i||."""
    constants = constants if constants is not None else ExactConstants(space, size_cap)
    K, gamma = constants.quasi_greedy, constants.democratic
    if (reason := _missing(K=K, Gamma=gamma)) is not None:
        return _skipped("agmin", space, reason)
    report = CheckReport("agmin", space.label, bound=4 * K**2 * gamma)
    d = space.dim
    extremes = indicator_extremes(space, size_cap)
    phi = np.maximum.accumulate([ext.max_value for ext in extremes])
    levels = (0.5, 1.0, 2.0) if is_absolute(space) else (0.5, -0.5, 1.0, -1.0, 2.0, -2.0)
    for k in range(1, min(GRID_CAP, len(phi)) + 1):
        grid = np.array(list(itertools.product(levels, repeat=k)))
        lhs = phi[k - 1] * np.abs(grid).min(axis=1)
        for A in itertools.combinations(range(d), k):
            ratios = lhs / batch_norm(space, _embed(d, A, grid))
            report.record_batch(ratios, lambda i, A=A, grid=grid: {"A": one_based(A), "a": grid[i].tolist()})
    report.details = {"K": K, "Gamma": gamma}
    return report


# -------------------------------
# Functional lattice and finite-m remarks
# -------------------------------


def check_lattice(space: SpaceSpec, corpus=None) -> CheckReport:
    """
    sigma_m <= sigma~_m <= sigma~_m^L, sigma~_m^R; monotone in m; sigma_m^L infeasible
    exactly when alpha_m(x) <= m and sigma_m^R exactly when beta_m(x) >= d - m + 1 (1-based).
    """
    report = CheckReport("lattice", space.label, bound=1.0)
    d = space.dim
    tol = get_settings().abs_tol

    def leq(lhs: float, rhs: float, witness: dict[str, Any]):
        if rhs <= tol:
            if lhs > tol:
                report.violate({**witness, "lhs": lhs, "rhs": rhs})
            else:
                report.vacuous += 1
            return
        report.record(lhs / rhs, witness)

    for x in _corpus(space, corpus):
        prev = None
        for m in range(0, d + 1):
            s = sigma(space, x, m).value
            st = sigma_tilde(space, x, m).value
            stl = sigma_tilde_L(space, x, m).value
            str_ = sigma_tilde_R(space, x, m).value
            leq(s, st, {"relation": "sigma<=sigma_tilde", "x": x, "m": m})
            leq(st, stl, {"relation": "sigma_tilde<=sigma_tilde_L", "x": x, "m": m})
            leq(st, str_, {"relation": "sigma_tilde<=sigma_tilde_R", "x": x, "m": m})
            if prev is not None:
                leq(s, prev[0], {"relation": "sigma monotone", "x": x, "m": m})
                leq(st, prev[1], {"relation": "sigma_tilde monotone", "x": x, "m": m})
            prev = (s, st)
            if m == 0:
                continue
            lam = greedy_set(x, m)
            left_infeasible = sigma_L(space, x, m).is_infeasible
            right_infeasible = sigma_R(space, x, m).is_infeasible
            if left_infeasible != (min(lam) + 1 <= m):
                report.violate({"relation": "sigma_L feasibility", "x": x, "m": m})
            if right_infeasible != (max(lam) + 1 >= d - m + 1):
                report.violate({"relation": "sigma_R feasibility", "x": x, "m": m})
    return report


def check_remark(space: SpaceSpec, corpus=None, *, constants: ExactConstants | None = None) -> CheckReport:
    """
    At m = |supp(x)|: sigma_m^L(x) >= ||x|| / (1 + K_b) and sigma_m^R(x) >= ||x|| / K_b.
    Other m are recorded without assertion.
    """
    constants = _constants(space, constants)
    K_b = constants.basis
    if (reason := _missing(K_b=K_b)) is not None:
        return _skipped("remark", space, reason)
    report = CheckReport("remark", space.label, bound=1.0)
    observed = {"left_min": math.inf, "right_min": math.inf}
    for x in _corpus(space, corpus):
        base = norm(space, x)
        if base <= get_settings().abs_tol:
            report.vacuous += 1
            continue
        supp = len(support(x))
        for m in range(1, space.dim + 1):
            left, right = sigma_L(space, x, m), sigma_R(space, x, m)
            for side, value, factor in (("left", left, 1 + K_b), ("right", right, K_b)):
                if value.is_infeasible:
                    if m == supp:
                        report.vacuous += 1
                    continue
                if m == supp:
                    if value.value <= get_settings().abs_tol:
                        report.violate({"side": side, "x": x, "m": m, "value": value.value})
                        continue
                    report.record(base / (factor * value.value), {"side": side, "x": x, "m": m})
                else:
                    observed[f"{side}_min"] = min(observed[f"{side}_min"], value.value / base)
    report.details = {"K_b": K_b, "other_m": observed}
    return report


def check_triangulation(space: SpaceSpec, corpus=None, *, constants: ExactConstants | None = None) -> CheckReport:
    """
    conservative + quasi-greedy, a bounded (qc) supremum and a bounded property (*)
    supremum must agree: Gamma_c/(1+eps) <= sup_qc <= 1 + K + 8K^4 Gamma_c and
    sup_(*) <= KK_b + 16K^4 Gamma_c (K_b+1) + K(K_b+1) + 1.
    """
    constants = _constants(space, constants)
    K, K_b, gc = constants.quasi_greedy, constants.basis, constants.conservative
    if (reason := _missing(K=K, K_b=K_b, Gamma_c=gc)) is not None:
        return _skipped("triangulation", space, reason)
    X = _corpus(space, corpus)
    A, B = _witness_pair(constants.conservative_estimate)
    with_witnesses = np.vstack([X, proof_witnesses(space.dim, A, B)])
    qc = greedy_type_constant(space, "qc", with_witnesses)
    star = greedy_type_constant(space, "property_star", X)
    qc_bound = 1 + K + 8 * K**4 * gc
    star_bound = _star_bound(K, K_b, gc)
    report = CheckReport("triangulation", space.label)
    report.record(qc.value, {"relation": "qc_upper", "witness": qc.witness}, bound=qc_bound)
    report.record(star.value, {"relation": "star_upper", "witness": star.witness}, bound=star_bound)
    lower = gc / (1 + min(EPSILONS))
    if not get_settings().leq(lower, qc.value):
        report.violate({"relation": "qc_lower", "sup_qc": qc.value, "lower": lower})
    outcomes = {
        "conservative_quasi_greedy": math.isfinite(K) and math.isfinite(gc),
        "qc_bounded": get_settings().leq(qc.value, qc_bound),
        "star_bounded": get_settings().leq(star.value, star_bound),
    }
    if len(set(outcomes.values())) != 1:
        report.violate({"relation": "equivalence", **outcomes})
    report.details = {"Gamma_c": gc, "sup_qc": qc.value, "sup_star": star.value, "outcomes": outcomes}
    return report


# -------------------------------
# Suites
# -------------------------------


@dataclass
class VerifyContext:
    space: SpaceSpec
    corpus: np.ndarray
    tau: float = 0.5
    rule: str = "smallest-index"
    size_cap: int | None = None
    seed: int = 42

    @functools.cached_property
    def constants(self) -> ExactConstants:
        return ExactConstants(self.space, self.size_cap)


SUITES: dict[str, Callable[[VerifyContext], CheckReport]] = {
    "sign_unconditionality": lambda c: check_sign_unconditionality(c.space, min(c.size_cap or SIGN_CAP, SIGN_CAP), constants=c.constants),
    "min": lambda c: check_min_inequality(c.space, c.corpus, constants=c.constants),
    "pg": lambda c: check_pg_bound(c.space, c.corpus, constants=c.constants),
    "property_star": lambda c: check_property_star(c.space, c.corpus, constants=c.constants),
    "property_star_star": lambda c: check_property_star_star(c.space, c.corpus, constants=c.constants),
    "gag": lambda c: check_gag(c.space, c.corpus),
    "indicator": lambda c: check_indicator_characterization(c.space, c.corpus),
    "one_pg": lambda c: check_one_pg(c.space, c.corpus, seed=c.seed),
    "one_pg_reverse": lambda c: check_one_pg_reverse(c.space, c.corpus, seed=c.seed),
    "property_p": lambda c: check_property_p_tau(c.space, c.tau, c.size_cap),
    "bga": lambda c: check_bga_theorems(c.space, c.tau, BranchSelector(c.tau, c.rule), c.corpus, c.size_cap, constants=c.constants),
    "wtga": lambda c: check_wtga_vs_tga(c.space, c.corpus, c.tau),
    "crd": lambda c: check_crd_bound(c.space, c.size_cap, constants=c.constants),
    "fundamental": lambda c: check_fundamental(c.space, c.size_cap),
    "agmin": lambda c: check_agmin(c.space, c.size_cap, constants=c.constants),
    "lattice": lambda c: check_lattice(c.space, c.corpus),
    "remark": lambda c: check_remark(c.space, c.corpus, constants=c.constants),
    "triangulation": lambda c: check_triangulation(c.space, c.corpus, constants=c.constants),
}


def suite_names(suite: str) -> list[str]:
    """'all', one suite name, or a comma-separated list; sorted and de-duplicated."""
    if suite == "all":
        return sorted(SUITES)
    names = [s.strip() for s in suite.split(",") if s.strip()]
    unknown = [s for s in names if s not in SUITES]
    if unknown or not names:
        raise InvalidParameterError(f"Unknown suite '{suite}'. Available: all, {', '.join(sorted(SUITES))}")
    return sorted(set(names))


def run_suite(
    space: SpaceSpec,
    suite: str = "all",
    *,
    corpus=None,
    corpus_size: int | None = None,
    seed: int | None = None,
    tau: float = 0.5,
    rule: str = "smallest-index",
    size_cap: int | None = None,
    workers: int | None = None,
) -> list[CheckReport]:
    """Run the named checks as independent jobs; reports come back sorted by check id."""
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    names = suite_names(suite)
    if corpus is None:
        corpus = make_corpus(space.dim, corpus_size, seed)
    context = VerifyContext(space=space, corpus=_corpus(space, corpus), tau=tau, rule=rule, size_cap=size_cap, seed=seed)
    logger.info(f"Running {len(names)} checks on {space.label} with {context.corpus.shape[0]} vectors")
    jobs = [functools.partial(SUITES[name], context) for name in names]
    reports = run_jobs(jobs, settings.workers if workers is None else workers)
    return sorted(reports, key=lambda r: r.check_id)

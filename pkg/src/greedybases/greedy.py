"""Greedy orderings and the TGA, WTGA and BGA selection procedures."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .exceptions import InvalidParameterError, SelectorAxiomError, ZeroVectorError
from .logger import get_logger
from .settings import get_settings
from .space import as_vector, project, support

logger = get_logger("greedybases.greedy")

TIE_POLICY = "smallest-index"

BranchRule = Literal["smallest-index", "largest-coefficient", "largest-index"]
BRANCH_RULES: tuple[str, ...] = ("smallest-index", "largest-coefficient", "largest-index")

# (magnitudes, admissible indices ascending) -> chosen index
WeakPolicy = Callable[[np.ndarray, np.ndarray], int]


def _check_m(m: int, dim: int, upper: int | None = None) -> int:
    upper = dim if upper is None else upper
    if not isinstance(m, (int, np.integer)) or not 0 <= m <= upper:
        raise InvalidParameterError(f"m must be an integer in [0, {upper}], got {m!r}")
    return int(m)


def _check_tau(tau: float) -> float:
    if not 0.0 < tau < 1.0:
        raise InvalidParameterError(f"Weakness parameter tau must lie in (0, 1), got {tau!r}")
    return float(tau)


# -------------------------------
# Greedy orderings and the TGA
# -------------------------------


@dataclass(frozen=True)
class GreedySelection:
    order: tuple[int, ...]
    values: tuple[float, ...]
    m: int
    alpha_m: int | None
    beta_m: int | None
    tie_policy: str = TIE_POLICY

    @property
    def indices(self) -> tuple[int, ...]:
        """Lambda_m(x), sorted."""
        return tuple(sorted(self.order[: self.m]))


def _order(x: np.ndarray) -> np.ndarray:
    # Stable sort on -|x|: equal magnitudes keep increasing index order.
    return np.argsort(-np.abs(x), kind="stable")


def greedy_ordering(x, m: int | None = None) -> GreedySelection:
    """Full greedy ordering of all indices, ties broken by smallest index."""
    x = as_vector(x)
    order = _order(x)
    m = x.size if m is None else _check_m(m, x.size)
    head = order[:m]
    return GreedySelection(
        order=tuple(int(i) for i in order),
        values=tuple(float(x[i]) for i in order),
        m=m,
        alpha_m=int(head.min()) if m else None,
        beta_m=int(head.max()) if m else None,
    )


def greedy_set(x, m: int) -> tuple[int, ...]:
    x = as_vector(x)
    m = _check_m(m, x.size)
    return tuple(sorted(int(i) for i in _order(x)[:m]))


def tga(x, m: int) -> np.ndarray:
    """G_m(x) = P_{Lambda_m(x)}(x)."""
    x = as_vector(x)
    return project(x, greedy_set(x, m))


def valid_greedy_sets(x, m: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """
    Every Lambda_m(x) produced by some greedy ordering, the canonical one first.
    Falls back to the canonical set alone when more than `limit` exist.
    """
    x = as_vector(x)
    m = _check_m(m, x.size)
    canonical = greedy_set(x, m)
    if m == 0 or m == x.size:
        return [canonical]
    limit = get_settings().tie_limit if limit is None else limit
    mags = np.abs(x)
    threshold = mags[_order(x)[m - 1]]
    above = [int(i) for i in np.flatnonzero(mags > threshold)]
    tied = [int(i) for i in np.flatnonzero(mags == threshold)]
    need = m - len(above)
    count = math.comb(len(tied), need)
    if count == 1:
        return [canonical]
    if count > limit:
        logger.warning(f"{count} tied greedy sets for m={m} exceed the limit {limit}; using the canonical ordering only")
        return [canonical]
    others = [tuple(sorted(above + list(c))) for c in itertools.combinations(tied, need)]
    return [canonical] + [s for s in others if s != canonical]


# -------------------------------
# Weak thresholding (WTGA)
# -------------------------------


def weak_set(x, tau: float) -> tuple[int, ...]:
    """A^tau(x) = {n : |x_n| >= tau * max |x|}."""
    tau = _check_tau(tau)
    x = as_vector(x)
    mags = np.abs(x)
    top = mags.max()
    if top == 0.0:
        raise ZeroVectorError("A^tau(x) is undefined for x = 0")
    return tuple(int(i) for i in np.flatnonzero(mags >= tau * top))


def _greedy_policy(mags: np.ndarray, admissible: np.ndarray) -> int:
    return int(admissible[np.argmax(mags[admissible])])


def _lazy_policy(mags: np.ndarray, admissible: np.ndarray) -> int:
    return int(admissible[np.argmin(mags[admissible])])


WEAK_POLICIES: dict[str, WeakPolicy] = {
    "greedy": _greedy_policy,
    "lazy": _lazy_policy,
}


@dataclass(frozen=True)
class WeakSelection:
    indices: tuple[int, ...]
    tau: float
    policy: str
    thresholds: tuple[float, ...] = ()

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    @property
    def alpha(self) -> int | None:
        return min(self.indices) if self.indices else None

    @property
    def beta(self) -> int | None:
        return max(self.indices) if self.indices else None


def wtga(x, m: int, tau: float, policy: str | WeakPolicy = "greedy") -> tuple[WeakSelection, np.ndarray]:
    """
    Builds Lambda_m^tau(x) one index at a time. Each chosen coefficient is at least
    tau times the largest coefficient still unselected, so the final set satisfies
    min_{selected} |x| >= tau * max_{unselected} |x|.
    """
    tau = _check_tau(tau)
    x = as_vector(x)
    m = _check_m(m, x.size)
    if isinstance(policy, str):
        if policy not in WEAK_POLICIES:
            raise InvalidParameterError(f"Unknown WTGA policy '{policy}'. Available: {', '.join(WEAK_POLICIES)}")
        name, choose = policy, WEAK_POLICIES[policy]
    else:
        name, choose = getattr(policy, "__name__", "custom"), policy

    mags = np.abs(x)
    unselected = np.ones(x.size, dtype=bool)
    chosen: list[int] = []
    thresholds: list[float] = []
    for _ in range(m):
        threshold = tau * mags[unselected].max()
        admissible = np.flatnonzero(unselected & (mags >= threshold))
        idx = int(choose(mags, admissible))
        if idx not in admissible:
            raise InvalidParameterError(f"WTGA policy '{name}' chose index {idx + 1}, which is not admissible")
        chosen.append(idx)
        thresholds.append(float(threshold))
        unselected[idx] = False

    selection = WeakSelection(indices=tuple(chosen), tau=tau, policy=name, thresholds=tuple(thresholds))
    return selection, project(x, chosen)


# -------------------------------
# Branch greedy algorithm (BGA)
# -------------------------------

# (residual, admissible indices ascending) -> chosen index
CustomSelector = Callable[[np.ndarray, tuple[int, ...]], int]


@dataclass(frozen=True)
class BranchSelector:
    tau: float
    rule: str = "smallest-index"
    custom: CustomSelector | None = field(default=None, compare=False)

    def __post_init__(self):
        _check_tau(self.tau)
        if self.custom is None and self.rule not in BRANCH_RULES:
            raise InvalidParameterError(f"Unknown BGA rule '{self.rule}'. Available: {', '.join(BRANCH_RULES)}")

    def select(self, x: np.ndarray) -> tuple[int, tuple[int, ...]]:
        """G^tau(x) together with A^tau(x)."""
        admissible = weak_set(x, self.tau)
        if self.custom is not None:
            return int(self.custom(x, admissible)), admissible
        if self.rule == "smallest-index":
            return admissible[0], admissible
        if self.rule == "largest-index":
            return admissible[-1], admissible
        mags = np.abs(x[list(admissible)])
        return admissible[int(np.argmax(mags))], admissible


@dataclass(frozen=True, eq=False)
class BranchRun:
    indices: tuple[int, ...]
    admissible_sets: tuple[tuple[int, ...], ...]
    selector: BranchSelector
    approximant: np.ndarray

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    @property
    def alpha(self) -> int | None:
        return min(self.indices) if self.indices else None

    @property
    def beta(self) -> int | None:
        return max(self.indices) if self.indices else None


def bga_run(x, m: int, selector: BranchSelector) -> BranchRun:
    """Apply the selector to x, remove the chosen term, repeat on the residual m times."""
    x = as_vector(x)
    m = _check_m(m, x.size, upper=len(support(x)))
    residual = x.copy()
    chosen: list[int] = []
    seen: list[tuple[int, ...]] = []
    for _ in range(m):
        idx, admissible = selector.select(residual)
        if idx not in admissible:
            raise SelectorAxiomError(f"Selector chose index {idx + 1} outside A^tau = {[i + 1 for i in admissible]}")
        chosen.append(idx)
        seen.append(admissible)
        residual[idx] = 0.0
    return BranchRun(indices=tuple(chosen), admissible_sets=tuple(seen), selector=selector, approximant=x - residual)


def bga(x, m: int, selector: BranchSelector) -> np.ndarray:
    """The m-th branch greedy approximant."""
    return bga_run(x, m, selector).approximant


def check_selector_axioms(selector: BranchSelector, probes: Sequence[np.ndarray] | None = None, dim: int = 6, count: int = 50, seed: int = 0):
    """
    Probe conditions (a)-(c): the choice lies in A^tau, is invariant under scaling,
    and depends only on A^tau and the coefficients on it. Raises SelectorAxiomError.
    """
    if probes is None:
        rng = np.random.default_rng(seed)
        probes = [v for v in rng.standard_normal((count, dim)) if np.any(v)]
    for x in probes:
        x = as_vector(x)
        idx, admissible = selector.select(x)
        if idx not in admissible:
            raise SelectorAxiomError(f"(a) violated on {x.tolist()}: chose {idx + 1}")
        for scale in (-7.0, 0.5, 3.0):
            if selector.select(scale * x)[0] != idx:
                raise SelectorAxiomError(f"(b) violated on {x.tolist()} with scale {scale}")
        outside = np.ones(x.size, dtype=bool)
        outside[list(admissible)] = False
        for factor in (0.5, 0.0):
            y = x.copy()
            y[outside] *= factor
            if selector.select(y)[0] != idx:
                raise SelectorAxiomError(f"(c) violated on {x.tolist()}: changing coefficients off A^tau moved the choice")

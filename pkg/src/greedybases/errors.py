"""
Best m-term error functionals, computed exactly by subset enumeration.

Every functional is an infimum over a family of index sets A of an inner problem:
  - free coefficients:  min_a ||x - sum_{i in A} a_i e_i||   (sigma-type)
  - projection:         ||x - P_A(x)||                        (sigma-tilde-type)
  - indicator:          min_a ||x - a 1_A||                   (dist_indicator)
For absolute norms the free inner problem is solved by a_i = x_i, since the norm is
separable in the magnitudes of the coordinates.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Sequence

import numpy as np
from scipy.optimize import linprog, minimize

from .exceptions import CapExceededError, DualNormError, InvalidParameterError, UnsupportedNormError
from .greedy import greedy_set as canonical_greedy_set
from .linesearch import golden_section
from .logger import get_logger
from .records import one_based
from .settings import get_settings
from .space import (
    PolyhedralLinear,
    SpaceSpec,
    _linear_matrix,
    absolute_rows,
    as_vector,
    batch_norm,
    is_absolute,
    norm,
)
from .worker import run_jobs

logger = get_logger("greedybases.errors")

InnerMethod = Literal["auto", "lp", "descent"]
Side = Literal["both", "left", "right", "unconstrained"]
SIDES: tuple[str, ...] = ("both", "left", "right", "unconstrained")

CHUNK_SIZE = 4096
LARGE_ENUMERATION = 10_000


@dataclass(frozen=True)
class ErrorValue:
    functional: str
    value: float
    witness_set: tuple[int, ...] = ()
    witness_coeffs: tuple[float, ...] | None = None
    witness_scalar: float | None = None
    feasible: bool = True

    @property
    def is_infeasible(self) -> bool:
        return not self.feasible

    def residual(self, x) -> np.ndarray:
        """x minus the witness approximant."""
        if not self.feasible:
            raise InvalidParameterError(f"{self.functional} is infeasible: there is no witness to evaluate")
        x = np.asarray(x, dtype=float)
        idx = list(self.witness_set)
        r = x.copy()
        if self.witness_scalar is not None:
            r[idx] -= self.witness_scalar
        elif self.witness_coeffs is not None:
            r[idx] -= np.asarray(self.witness_coeffs, dtype=float)
        else:
            r[idx] = 0.0
        return r

    def reevaluate(self, space: SpaceSpec, x) -> float:
        return norm(space, self.residual(x))

    def to_record(self) -> dict:
        return {
            "functional": self.functional,
            "value": self.value if self.feasible else None,
            "feasible": self.feasible,
            "witness_set": one_based(self.witness_set),
            "witness_coeffs": list(self.witness_coeffs) if self.witness_coeffs is not None else None,
            "witness_scalar": self.witness_scalar,
        }


def _infeasible(functional: str) -> ErrorValue:
    return ErrorValue(functional, math.inf, feasible=False)


# -------------------------------
# Enumeration helpers
# -------------------------------


def _prepare(space: SpaceSpec, x, m: int) -> tuple[np.ndarray, int]:
    cap = get_settings().cap_dim
    if space.dim > cap:
        raise CapExceededError(f"Dimension {space.dim} of {space.label} is above the enumeration cap {cap}")
    x = as_vector(x, space.dim)
    if not isinstance(m, (int, np.integer)) or not 0 <= m <= space.dim:
        raise InvalidParameterError(f"m must be an integer in [0, {space.dim}], got {m!r}")
    return x, int(m)


def _sets(pool: Sequence[int], sizes: Iterable[int]) -> Iterator[tuple[int, ...]]:
    for k in sizes:
        yield from itertools.combinations(pool, k)


def _sizes(m: int, pool_len: int, prune: bool) -> range:
    top = min(m, pool_len)
    # Absolute norms: removing more coordinates never increases ||x - P_A x||.
    return range(top, top + 1) if prune else range(0, top + 1)


def _chunks(iterable: Iterable[tuple[int, ...]], size: int = CHUNK_SIZE) -> Iterator[list[tuple[int, ...]]]:
    it = iter(iterable)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


def _masks(chunk: Sequence[tuple[int, ...]], dim: int) -> np.ndarray:
    masks = np.zeros((len(chunk), dim), dtype=bool)
    for r, A in enumerate(chunk):
        masks[r, list(A)] = True
    return masks


def _side_pools(dim: int, lam: Sequence[int]) -> tuple[range, range]:
    """Indices left of alpha = min(lam) and right of beta = max(lam)."""
    return range(0, min(lam)), range(max(lam) + 1, dim)


def _resolve_greedy_set(x: np.ndarray, m: int, greedy_set: Sequence[int] | None) -> tuple[int, ...]:
    if greedy_set is None:
        return canonical_greedy_set(x, m)
    lam = tuple(sorted(int(i) for i in greedy_set))
    if len(lam) != m:
        raise InvalidParameterError(f"Greedy set has {len(lam)} indices, expected {m}")
    return lam


# -------------------------------
# Inner problems
# -------------------------------


def _projection_chunk(space: SpaceSpec, x: np.ndarray, chunk: list[tuple[int, ...]]) -> tuple[float, tuple[int, ...]]:
    residuals = np.where(_masks(chunk, space.dim), 0.0, x)
    values = batch_norm(space, residuals)
    k = int(np.argmin(values))
    return float(values[k]), chunk[k]


def _min_projection(space: SpaceSpec, x: np.ndarray, sets: Iterable[tuple[int, ...]]) -> tuple[float, tuple[int, ...]] | None:
    chunks = list(_chunks(sets))
    if not chunks:
        return None
    total = sum(len(c) for c in chunks)
    if total > LARGE_ENUMERATION:
        logger.info(f"Enumerating {total} index sets on {space.label}")
    jobs = [functools.partial(_projection_chunk, space, x, chunk) for chunk in chunks]
    best: tuple[float, tuple[int, ...]] | None = None
    for value, A in run_jobs(jobs, get_settings().workers):
        # Strict comparison keeps the first minimizer in enumeration order.
        if best is None or value < best[0]:
            best = (value, A)
    return best


def _selection_matrix(dim: int, A: Sequence[int]) -> np.ndarray:
    E = np.zeros((dim, len(A)))
    E[list(A), range(len(A))] = 1.0
    return E


def _lp_free(space: SpaceSpec, x: np.ndarray, A: tuple[int, ...]) -> np.ndarray:
    """Optimal coefficients on A for a polyhedral norm, by linear programming."""
    d, k = space.dim, len(A)
    E = _selection_matrix(d, A)
    if isinstance(space.norm, PolyhedralLinear):
        R = _linear_matrix(space.norm.rows)
        q = R.shape[0]
        # variables [a, t]: -t <= R(x - E a) <= t
        c = np.concatenate([np.zeros(k), [1.0]])
        A_ub = np.vstack([
            np.hstack([-R @ E, -np.ones((q, 1))]),
            np.hstack([R @ E, -np.ones((q, 1))]),
        ])
        b_ub = np.concatenate([-R @ x, R @ x])
        bounds = [(None, None)] * k + [(0, None)]
    else:
        M = absolute_rows(space)
        if M is None:
            raise UnsupportedNormError(f"{space.label} is not a polyhedral norm; use inner='descent'")
        q = M.shape[0]
        # variables [a, s, t]: s >= |x - E a|, M s <= t
        c = np.concatenate([np.zeros(k + d), [1.0]])
        eye = np.eye(d)
        A_ub = np.vstack([
            np.hstack([-E, -eye, np.zeros((d, 1))]),
            np.hstack([E, -eye, np.zeros((d, 1))]),
            np.hstack([np.zeros((q, k)), M, -np.ones((q, 1))]),
        ])
        b_ub = np.concatenate([-x, x, np.zeros(q)])
        bounds = [(None, None)] * k + [(0, None)] * (d + 1)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        logger.error(f"Inner LP failed on {space.label} for A={one_based(A)}: {res.message}")
        raise DualNormError(f"Inner LP failed: {res.message}")
    return res.x[:k]


def _descent_free(space: SpaceSpec, x: np.ndarray, A: tuple[int, ...]) -> np.ndarray:
    """Nelder-Mead on the convex inner problem, started from a_i = x_i."""
    idx = list(A)
    start = x[idx].copy()

    def objective(a: np.ndarray) -> float:
        r = x.copy()
        r[idx] -= a
        return norm(space, r)

    res = minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000 * len(idx)},
    )
    return res.x if res.fun < objective(start) else start


def _inner_method(space: SpaceSpec, inner: InnerMethod) -> str:
    if inner == "auto":
        if is_absolute(space):
            return "projection"
        if isinstance(space.norm, PolyhedralLinear) or absolute_rows(space) is not None:
            return "lp"
        return "descent"
    if inner not in ("lp", "descent"):
        raise InvalidParameterError(f"Unknown inner method '{inner}'")
    return inner


def _min_free(space: SpaceSpec, x: np.ndarray, sets: Iterable[tuple[int, ...]], inner: InnerMethod) -> tuple[float, tuple[int, ...], np.ndarray] | None:
    method = _inner_method(space, inner)
    if method == "projection":
        best = _min_projection(space, x, sets)
        if best is None:
            return None
        return best[0], best[1], x[list(best[1])]

    solve = _lp_free if method == "lp" else _descent_free
    best: tuple[float, tuple[int, ...], np.ndarray] | None = None
    for A in sets:
        coeffs = solve(space, x, A) if A else np.zeros(0)
        r = x.copy()
        r[list(A)] -= coeffs
        value = norm(space, r)
        if best is None or value < best[0]:
            best = (value, A, coeffs)
    return best


def _free_value(functional: str, best) -> ErrorValue:
    if best is None:
        return _infeasible(functional)
    value, A, coeffs = best
    return ErrorValue(functional, float(value), tuple(A), tuple(float(c) for c in coeffs))


def _projection_value(functional: str, best) -> ErrorValue:
    if best is None:
        return _infeasible(functional)
    value, A = best
    return ErrorValue(functional, float(value), tuple(A))


# -------------------------------
# The six functionals
# -------------------------------


def sigma(space: SpaceSpec, x, m: int, *, inner: InnerMethod = "auto") -> ErrorValue:
    """Best m-term error: min over |A| = m and free coefficients."""
    x, m = _prepare(space, x, m)
    return _free_value("sigma", _min_free(space, x, itertools.combinations(range(space.dim), m), inner))


def sigma_tilde(space: SpaceSpec, x, m: int) -> ErrorValue:
    """Best projection error: min over |A| <= m of ||x - P_A x||."""
    x, m = _prepare(space, x, m)
    sizes = _sizes(m, space.dim, is_absolute(space))
    return _projection_value("sigma_tilde", _min_projection(space, x, _sets(range(space.dim), sizes)))


def _sided_free(functional: str, space: SpaceSpec, x, m: int, left: bool, greedy_set, inner) -> ErrorValue:
    x, m = _prepare(space, x, m)
    if m == 0:
        return ErrorValue(functional, norm(space, x), (), ())
    lam = _resolve_greedy_set(x, m, greedy_set)
    left_pool, right_pool = _side_pools(space.dim, lam)
    pool = left_pool if left else right_pool
    if len(pool) < m:
        # inf over the empty family
        return _infeasible(functional)
    return _free_value(functional, _min_free(space, x, itertools.combinations(pool, m), inner))


def sigma_L(space: SpaceSpec, x, m: int, *, greedy_set: Sequence[int] | None = None, inner: InnerMethod = "auto") -> ErrorValue:
    """|A| = m, A < alpha_m(x), free coefficients. INFEASIBLE when no such A exists."""
    return _sided_free("sigma_L", space, x, m, True, greedy_set, inner)


def sigma_R(space: SpaceSpec, x, m: int, *, greedy_set: Sequence[int] | None = None, inner: InnerMethod = "auto") -> ErrorValue:
    """|A| = m, A > beta_m(x), free coefficients. INFEASIBLE when no such A exists."""
    return _sided_free("sigma_R", space, x, m, False, greedy_set, inner)


def _sided_projection(functional: str, space: SpaceSpec, x, m: int, left: bool, greedy_set) -> ErrorValue:
    x, m = _prepare(space, x, m)
    if m == 0:
        return ErrorValue(functional, norm(space, x), ())
    lam = _resolve_greedy_set(x, m, greedy_set)
    left_pool, right_pool = _side_pools(space.dim, lam)
    pool = left_pool if left else right_pool
    sizes = _sizes(m, len(pool), is_absolute(space))
    return _projection_value(functional, _min_projection(space, x, _sets(pool, sizes)))


def sigma_tilde_L(space: SpaceSpec, x, m: int, *, greedy_set: Sequence[int] | None = None) -> ErrorValue:
    """|A| <= m, A < alpha_m(x), projections. A = {} keeps it feasible."""
    return _sided_projection("sigma_tilde_L", space, x, m, True, greedy_set)


def sigma_tilde_R(space: SpaceSpec, x, m: int, *, greedy_set: Sequence[int] | None = None) -> ErrorValue:
    """|A| <= m, A > beta_m(x), projections. A = {} keeps it feasible."""
    return _sided_projection("sigma_tilde_R", space, x, m, False, greedy_set)


# -------------------------------
# Distance to multiples of indicators
# -------------------------------


def dist_indicator(space: SpaceSpec, x, m: int, side: Side = "unconstrained", *, greedy_set: Sequence[int] | None = None) -> ErrorValue:
    """
    min over admissible A and scalar a of ||x - a 1_A||. Sided variants range over
    |A| <= m left of alpha_m(x) and/or right of beta_m(x); the unconstrained variant
    over |A| = m. The scalar is found by golden-section search on [-r_A, r_A] with
    r_A = 2||x|| / ||1_A||: a minimizer has |a| ||1_A|| <= ||x|| + ||x - a 1_A|| <= 2||x||
    for every norm, absolute or not.
    """
    if side not in SIDES:
        raise InvalidParameterError(f"Unknown side '{side}'. Available: {', '.join(SIDES)}")
    x, m = _prepare(space, x, m)
    d = space.dim
    if side == "unconstrained":
        sets: Iterable[tuple[int, ...]] = itertools.combinations(range(d), m)
    elif m == 0:
        sets = [()]
    else:
        lam = _resolve_greedy_set(x, m, greedy_set)
        left_pool, right_pool = _side_pools(d, lam)
        left_sets = _sets(left_pool, range(0, min(m, len(left_pool)) + 1))
        right_sets = _sets(right_pool, range(1, min(m, len(right_pool)) + 1))
        if side == "left":
            sets = left_sets
        elif side == "right":
            sets = itertools.chain([()], right_sets)
        else:
            sets = itertools.chain(left_sets, right_sets)

    x_norm = norm(space, x)
    tol = get_settings().golden_tol
    best: tuple[float, tuple[int, ...], float] | None = None
    for chunk in _chunks(sets):
        if () in chunk:
            if best is None or x_norm < best[0]:
                best = (x_norm, (), 0.0)
            chunk = [A for A in chunk if A]
            if not chunk:
                continue
        masks = _masks(chunk, d).astype(float)

        def objective(a: np.ndarray, masks=masks) -> np.ndarray:
            return batch_norm(space, x[None, :] - a[:, None] * masks)

        radius = 2.0 * x_norm / batch_norm(space, masks)
        argmin, minimum = golden_section(objective, -radius, radius, tol=tol)
        k = int(np.argmin(minimum))
        if best is None or minimum[k] < best[0]:
            best = (float(minimum[k]), chunk[k], float(argmin[k]))

    if best is None:
        return _infeasible("dist_indicator")
    value, A, a = best
    return ErrorValue("dist_indicator", value, A, witness_scalar=a)


# -------------------------------
# Further competitor families
# -------------------------------


def sigma_gag(space: SpaceSpec, x, m: int, *, greedy_set: Sequence[int] | None = None, inner: InnerMethod = "auto") -> ErrorValue:
    """min over A in [0, alpha_m) u (beta_m, d), |A| <= m, free coefficients."""
    x, m = _prepare(space, x, m)
    if m == 0:
        return ErrorValue("sigma_gag", norm(space, x), (), ())
    lam = _resolve_greedy_set(x, m, greedy_set)
    left_pool, right_pool = _side_pools(space.dim, lam)
    pool = tuple(left_pool) + tuple(right_pool)
    sizes = _sizes(m, len(pool), is_absolute(space))
    return _free_value("sigma_gag", _min_free(space, x, _sets(pool, sizes), inner))


def _overlap_sets(dim: int, m: int, reference: tuple[int, ...], budget: int, prune: bool) -> Iterator[tuple[int, ...]]:
    inside = reference
    outside = tuple(i for i in range(dim) if i not in set(reference))
    for j in range(0, min(budget, len(inside), m) + 1):
        outer_sizes = _sizes(m - j, len(outside), prune)
        for part_in in itertools.combinations(inside, j):
            for k in outer_sizes:
                for part_out in itertools.combinations(outside, k):
                    yield tuple(sorted(part_in + part_out))


def sigma_overlap(space: SpaceSpec, x, m: int, lam: float, *, reference: Sequence[int] | None = None, inner: InnerMethod = "auto") -> ErrorValue:
    """
    min over |A| <= m with |A n reference| <= floor(lam*m), free coefficients.
    The reference defaults to Lambda_m(x).
    """
    x, m = _prepare(space, x, m)
    if not 0.0 <= lam < 1.0:
        raise InvalidParameterError(f"lambda must lie in [0, 1), got {lam!r}")
    ref = tuple(sorted(int(i) for i in (canonical_greedy_set(x, m) if reference is None else reference)))
    budget = math.floor(lam * m)
    sets = _overlap_sets(space.dim, m, ref, budget, is_absolute(space))
    return _free_value("sigma_overlap", _min_free(space, x, sets, inner))


def sigma_branch(space: SpaceSpec, x, selected: Sequence[int]) -> ErrorValue:
    """
    min over |A| <= |selected| with A < min(selected) or A > max(selected) of
    ||x - P_A x||: the competitor family for a branch greedy selection.
    """
    x = as_vector(x, space.dim)
    selected = tuple(sorted(int(i) for i in selected))
    m = len(selected)
    if m == 0:
        return ErrorValue("sigma_branch", norm(space, x), ())
    left_pool, right_pool = _side_pools(space.dim, selected)
    prune = is_absolute(space)
    sets = itertools.chain(
        _sets(left_pool, _sizes(m, len(left_pool), prune)),
        _sets(right_pool, _sizes(m, len(right_pool), prune)),
    )
    return _projection_value("sigma_branch", _min_projection(space, x, sets))


FUNCTIONALS = {
    "sigma": sigma,
    "sigma_tilde": sigma_tilde,
    "sigma_L": sigma_L,
    "sigma_R": sigma_R,
    "sigma_tilde_L": sigma_tilde_L,
    "sigma_tilde_R": sigma_tilde_R,
}

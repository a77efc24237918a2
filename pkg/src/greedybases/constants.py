"""
Fundamental function, democracy-type constants and greedy-type constants.

Indicator constants (phi, democratic, conservative, reverse conservative) are
computed from one table of ||1_A|| over every A with |A| <= size_cap. Greedy-type
constants are suprema over a vector corpus and are always lower bounds.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import (
    ErrorValue,
    sigma,
    sigma_gag,
    sigma_L,
    sigma_R,
    sigma_tilde,
    sigma_tilde_L,
    sigma_tilde_R,
)
from .exceptions import CapExceededError, EmptyCorpusError, InvalidParameterError
from .greedy import greedy_set, tga
from .logger import get_logger
from .records import ConstantEstimate, one_based
from .settings import get_settings
from .space import (
    DualOf,
    Lp,
    SpaceSpec,
    WeightedL1,
    absolute_rows,
    as_vector,
    basis_vector,
    batch_norm,
    is_absolute,
    norm,
    project,
)

logger = get_logger("greedybases.constants")

GreedyKind = Literal[
    "qc",
    "qr",
    "ag",
    "greedy",
    "partially_greedy_tail",
    "property_star",
    "property_star_star",
    "gag_set",
    "one_pg",
]


def _size_cap(space: SpaceSpec, size_cap: int | None) -> int:
    settings = get_settings()
    if space.dim > settings.cap_dim:
        raise CapExceededError(f"Dimension {space.dim} of {space.label} is above the enumeration cap {settings.cap_dim}")
    if size_cap is None:
        return min(space.dim, settings.cap_subset)
    if not isinstance(size_cap, int) or not 1 <= size_cap <= space.dim:
        raise InvalidParameterError(f"size_cap must be an integer in [1, {space.dim}], got {size_cap!r}")
    if size_cap > settings.cap_subset:
        raise CapExceededError(f"size_cap {size_cap} is above the subset cap {settings.cap_subset}")
    return size_cap


# -------------------------------
# Indicator table
# -------------------------------


@dataclass(frozen=True, eq=False)
class IndicatorTable:
    """||1_A|| for every non-empty A with |A| <= size_cap, in enumeration order."""

    sets: tuple[tuple[int, ...], ...]
    values: np.ndarray
    sizes: np.ndarray
    firsts: np.ndarray
    lasts: np.ndarray
    size_cap: int


@functools.lru_cache(maxsize=16)
def indicator_table(space: SpaceSpec, size_cap: int) -> IndicatorTable:
    d = space.dim
    sets = tuple(itertools.chain.from_iterable(itertools.combinations(range(d), k) for k in range(1, size_cap + 1)))
    if len(sets) > 10_000:
        logger.info(f"Evaluating {len(sets)} indicator vectors on {space.label}")
    values = np.empty(len(sets))
    step = 4096
    for start in range(0, len(sets), step):
        chunk = sets[start : start + step]
        block = np.zeros((len(chunk), d))
        for r, A in enumerate(chunk):
            block[r, list(A)] = 1.0
        values[start : start + len(chunk)] = batch_norm(space, block)
    values.flags.writeable = False
    return IndicatorTable(
        sets=sets,
        values=values,
        sizes=np.array([len(A) for A in sets]),
        firsts=np.array([A[0] for A in sets]),
        lasts=np.array([A[-1] for A in sets]),
        size_cap=size_cap,
    )


@dataclass(frozen=True)
class SizeExtremes:
    size: int
    max_value: float
    max_set: tuple[int, ...]
    min_value: float
    min_set: tuple[int, ...]


def indicator_extremes(space: SpaceSpec, size_cap: int | None = None) -> list[SizeExtremes]:
    """Per size k = 1..size_cap: the largest and smallest ||1_A|| over |A| = k."""
    table = indicator_table(space, _size_cap(space, size_cap))
    out: list[SizeExtremes] = []
    for k in range(1, table.size_cap + 1):
        rows = np.flatnonzero(table.sizes == k)
        vals = table.values[rows]
        hi = rows[int(np.argmax(vals))]
        lo = rows[int(np.argmin(vals))]
        out.append(SizeExtremes(k, float(table.values[hi]), table.sets[hi], float(table.values[lo]), table.sets[lo]))
    return out


def fundamental_function(space: SpaceSpec, n: int) -> float:
    """phi(n) = max over |A| <= n of ||1_A||."""
    if not isinstance(n, int) or not 0 <= n <= space.dim:
        raise InvalidParameterError(f"n must be an integer in [0, {space.dim}], got {n!r}")
    if n == 0:
        return 0.0
    settings = get_settings()
    if space.dim > settings.cap_dim:
        raise CapExceededError(f"Dimension {space.dim} of {space.label} is above the enumeration cap {settings.cap_dim}")
    # Absolute norms are monotone under adding coordinates: only |A| = n matters.
    sizes = [n] if is_absolute(space) else range(1, n + 1)
    best = 0.0
    for k in sizes:
        sets = list(itertools.combinations(range(space.dim), k))
        for start in range(0, len(sets), 4096):
            chunk = sets[start : start + 4096]
            block = np.zeros((len(chunk), space.dim))
            for r, A in enumerate(chunk):
                block[r, list(A)] = 1.0
            best = max(best, float(batch_norm(space, block).max()))
    return best


# -------------------------------
# Forced values
# -------------------------------


def is_symmetric(space: SpaceSpec) -> bool:
    """||1_A|| depends only on |A|, and the norm is absolute."""
    norm_def = space.norm
    if isinstance(norm_def, Lp):
        return True
    if isinstance(norm_def, WeightedL1):
        return len(set(norm_def.weights)) == 1
    if isinstance(norm_def, DualOf):
        return is_symmetric(norm_def.inner)
    return False


def _spread_monotone(M: np.ndarray) -> bool:
    """Whether x -> max(M|x|) never decreases when the support moves right."""
    if M.shape[0] == 1:
        return bool(np.all(np.diff(M[0]) >= 0))
    if np.all(np.count_nonzero(M, axis=1) <= 1):
        return bool(np.all(np.diff(M.max(axis=0)) >= 0))
    if not np.all((M == 0) | (M == 1)):
        return False
    # Downward closure of the rows must be closed under moving one element right.
    rows = M.astype(bool)
    d = M.shape[1]
    for row in rows:
        members = np.flatnonzero(row)
        for r in members:
            for j in range(r + 1, d):
                if row[j]:
                    continue
                moved = row.copy()
                moved[r] = False
                moved[j] = True
                if not np.any(rows[:, moved].sum(axis=1) == moved.sum()):
                    return False
    return True


def is_right_spread_monotone(space: SpaceSpec) -> bool:
    """Absolute norm with ||x|| <= ||y|| whenever y is a spread of x to larger indices."""
    if isinstance(space.norm, Lp):
        return True
    M = absolute_rows(space)
    return M is not None and _spread_monotone(M)


def is_left_spread_monotone(space: SpaceSpec) -> bool:
    if isinstance(space.norm, Lp):
        return True
    M = absolute_rows(space)
    return M is not None and _spread_monotone(M[:, ::-1])


# -------------------------------
# Democracy-type constants
# -------------------------------


def _exactness(size_cap: int, space: SpaceSpec, forced: bool) -> str:
    return "exact" if forced or size_cap >= space.dim else "lower_bound"


def _pair_estimate(kind: str, space: SpaceSpec, table: IndicatorTable, a_row: int, b_row: int, ratio: float, forced: bool) -> ConstantEstimate:
    return ConstantEstimate(
        kind=kind,
        value=float(ratio),
        exactness=_exactness(table.size_cap, space, forced),
        witness={
            "A": one_based(table.sets[a_row]),
            "B": one_based(table.sets[b_row]),
            "norm_A": float(table.values[a_row]),
            "norm_B": float(table.values[b_row]),
        },
        budget={"size_cap": table.size_cap, "sets": len(table.sets), "forced": forced},
        seed=None,
    )


def democratic_constant(space: SpaceSpec, size_cap: int | None = None) -> ConstantEstimate:
    """Gamma = max over |A| <= |B| <= size_cap of ||1_A|| / ||1_B||."""
    table = indicator_table(space, _size_cap(space, size_cap))
    best_ratio, best_pair = -math.inf, (0, 0)
    running_max, running_row = -math.inf, -1
    for k in range(1, table.size_cap + 1):
        rows = np.flatnonzero(table.sizes == k)
        vals = table.values[rows]
        hi = rows[int(np.argmax(vals))]
        if table.values[hi] > running_max:
            running_max, running_row = float(table.values[hi]), hi
        lo = rows[int(np.argmin(vals))]
        ratio = running_max / table.values[lo]
        if ratio > best_ratio:
            best_ratio, best_pair = ratio, (running_row, lo)
    return _pair_estimate("democratic", space, table, *best_pair, best_ratio, is_symmetric(space))


def _grouped_best(keys: np.ndarray, table: IndicatorTable, shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Largest ||1_A|| per (key, |A|) cell, first in enumeration order on ties."""
    best = np.full(shape, -math.inf)
    where = np.full(shape, -1, dtype=int)
    order = np.lexsort((-table.values, table.sizes, keys))
    k_sorted, s_sorted = keys[order], table.sizes[order]
    first = np.ones(order.size, dtype=bool)
    first[1:] = (k_sorted[1:] != k_sorted[:-1]) | (s_sorted[1:] != s_sorted[:-1])
    picked = order[first]
    best[keys[picked], table.sizes[picked]] = table.values[picked]
    where[keys[picked], table.sizes[picked]] = picked
    return best, where


def _cumulate(best: np.ndarray, where: np.ndarray, positions: Sequence[int]):
    """Running max along `positions` of the first axis, then along increasing size."""
    prev = None
    for p in positions:
        if prev is not None:
            take = best[prev] > best[p]
            best[p] = np.where(take, best[prev], best[p])
            where[p] = np.where(take, where[prev], where[p])
        for k in range(1, best.shape[1]):
            if best[p, k - 1] > best[p, k]:
                best[p, k], where[p, k] = best[p, k - 1], where[p, k - 1]
        prev = p


def _sided_constant(kind: str, space: SpaceSpec, size_cap: int | None, reverse: bool) -> ConstantEstimate:
    table = indicator_table(space, _size_cap(space, size_cap))
    d = space.dim
    shape = (d + 1, table.size_cap + 1)
    if not reverse:
        # A < B: A lies inside [0, min B); key A by max A + 1.
        best, where = _grouped_best(table.lasts + 1, table, shape)
        _cumulate(best, where, range(d + 1))
        cells = (table.firsts, table.sizes)
        forced = is_right_spread_monotone(space)
    else:
        # B < A: A lies inside (max B, d); key A by min A.
        best, where = _grouped_best(table.firsts, table, shape)
        _cumulate(best, where, range(d, -1, -1))
        cells = (table.lasts + 1, table.sizes)
        forced = is_left_spread_monotone(space)
    numerators = best[cells]
    ratios = np.where(np.isfinite(numerators), numerators / table.values, -math.inf)
    b_row = int(np.argmax(ratios))
    if not np.isfinite(ratios[b_row]):
        raise InvalidParameterError(f"{kind} constant needs dimension at least 2")
    a_row = int(where[cells[0][b_row], cells[1][b_row]])
    return _pair_estimate(kind, space, table, a_row, b_row, float(ratios[b_row]), forced)


def conservative_constant(space: SpaceSpec, size_cap: int | None = None) -> ConstantEstimate:
    """Gamma_c = max over A < B, |A| <= |B| <= size_cap of ||1_A|| / ||1_B||."""
    return _sided_constant("conservative", space, size_cap, reverse=False)


def reverse_conservative_constant(space: SpaceSpec, size_cap: int | None = None) -> ConstantEstimate:
    """Gamma_r = max over B < A, |A| <= |B| <= size_cap of ||1_A|| / ||1_B||."""
    return _sided_constant("reverse_conservative", space, size_cap, reverse=True)


# -------------------------------
# Greedy-type constants
# -------------------------------


def _check_corpus(corpus, dim: int) -> np.ndarray:
    X = np.atleast_2d(np.asarray(corpus, dtype=float))
    if X.size == 0:
        raise EmptyCorpusError("The corpus is empty")
    if X.shape[1] != dim:
        raise InvalidParameterError(f"Corpus vectors have dimension {X.shape[1]}, expected {dim}")
    return X


def quasi_greedy_constant(space: SpaceSpec, corpus) -> ConstantEstimate:
    """K. Exactly 1 for absolute norms; otherwise sup_{x, m} ||G_m x|| / ||x|| over the corpus."""
    if is_absolute(space):
        return ConstantEstimate(
            kind="quasi_greedy",
            value=1.0,
            exactness="exact",
            # ||G_1 e_1|| = ||e_1||: the supremum 1 is attained
            witness={"x": basis_vector(space.dim, 0).tolist(), "m": 1},
            budget={"method": "absolute"},
            seed=None,
        )
    X = _check_corpus(corpus, space.dim)
    best, witness = 1.0, {"x": X[0].tolist(), "m": space.dim}
    for x in X:
        base = norm(space, x)
        if base <= get_settings().abs_tol:
            continue
        heads = np.array([tga(x, m) for m in range(1, space.dim + 1)])
        ratios = batch_norm(space, heads) / base
        k = int(np.argmax(ratios))
        if ratios[k] > best:
            best, witness = float(ratios[k]), {"x": x.tolist(), "m": k + 1}
    return ConstantEstimate(
        kind="quasi_greedy",
        value=best,
        exactness="lower_bound",
        witness=witness,
        budget={"method": "corpus", "corpus_size": int(X.shape[0])},
        seed=None,
    )


def _tail(space: SpaceSpec, x: np.ndarray, m: int) -> ErrorValue:
    # ||sum_{n > m} e_n^*(x) e_n|| in 1-based terms
    kept = tuple(range(m))
    return ErrorValue("tail", norm(space, x - project(x, kept)), kept)


def _one_term(space: SpaceSpec, x: np.ndarray, m: int) -> ErrorValue:
    # min(||x||, ||x - x_j e_j||) over j < alpha_1(x)
    alpha = greedy_set(x, 1)[0]
    best = ErrorValue("one_term", norm(space, x), ())
    for j in range(alpha):
        r = x.copy()
        r[j] = 0.0
        value = norm(space, r)
        if value < best.value:
            best = ErrorValue("one_term", value, (j,))
    return best


DENOMINATORS: dict[str, Callable[[SpaceSpec, np.ndarray, int], ErrorValue]] = {
    "qc": sigma_tilde_L,
    "qr": sigma_tilde_R,
    "ag": sigma_tilde,
    "greedy": sigma,
    "partially_greedy_tail": _tail,
    "property_star": sigma_L,
    "property_star_star": sigma_R,
    "gag_set": sigma_gag,
    "one_pg": _one_term,
}


def greedy_type_constant(
    space: SpaceSpec,
    kind: GreedyKind,
    corpus,
    m_values: Sequence[int] | None = None,
    seed: int | None = None,
) -> ConstantEstimate:
    """
    sup over corpus x and m of ||x - G_m(x)|| / D(x, m), where D is the competitor
    functional of `kind`. INFEASIBLE and (near) zero denominators are skipped and counted.
    """
    if kind not in DENOMINATORS:
        raise InvalidParameterError(f"Unknown constant kind '{kind}'. Available: {', '.join(DENOMINATORS)}")
    X = _check_corpus(corpus, space.dim)
    denominator = DENOMINATORS[kind]
    if kind == "one_pg":
        m_values = [1]
    elif m_values is None:
        m_values = range(1, space.dim + 1)
    tol = get_settings().abs_tol

    best, witness = 0.0, {}
    infeasible = zero = evaluated = 0
    for x in X:
        x = as_vector(x)
        if not np.any(x):
            zero += len(m_values)
            continue
        for m in m_values:
            num = norm(space, x - tga(x, m))
            den = denominator(space, x, m)
            if den.is_infeasible:
                infeasible += 1
                continue
            if den.value <= tol:
                zero += 1
                continue
            evaluated += 1
            ratio = num / den.value
            if ratio > best:
                best = ratio
                witness = {
                    "x": x.tolist(),
                    "m": m,
                    "numerator": num,
                    "denominator": den.value,
                    "competitor": one_based(den.witness_set),
                }
    if infeasible or zero:
        logger.debug(f"{kind} on {space.label}: skipped {infeasible} infeasible and {zero} zero denominators")
    return ConstantEstimate(
        kind=kind,
        value=float(best),
        exactness="lower_bound",
        witness=witness,
        budget={
            "corpus_size": int(X.shape[0]),
            "m_values": [int(m) for m in m_values],
            "evaluated": evaluated,
            "skipped_infeasible": infeasible,
            "skipped_zero": zero,
        },
        seed=seed,
    )

"""Finite-dimensional normed spaces over a fixed algebraic basis.

A vector is a 1-D float array of coefficients; position i holds e_i^*(x)
(0-based). A space is a dimension plus a norm definition.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from .exceptions import (
    CapExceededError,
    DimensionMismatchError,
    DualNormError,
    InvalidParameterError,
    UnsupportedNormError,
)
from .logger import get_logger
from .records import ConstantEstimate, one_based
from .settings import get_settings

logger = get_logger("greedybases.space")

# -------------------------------
# Vectors
# -------------------------------


def as_vector(values, dim: int | None = None) -> np.ndarray:
    """Validate and copy coefficients into a float vector."""
    x = np.array(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidParameterError(f"Expected a non-empty 1-D coefficient array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("Vector entries must be finite")
    if dim is not None and x.size != dim:
        raise DimensionMismatchError(f"Vector has dimension {x.size}, space has dimension {dim}")
    return x


def basis_vector(dim: int, i: int) -> np.ndarray:
    x = np.zeros(dim)
    x[i] = 1.0
    return x


def indicator(dim: int, indices: Iterable[int], value: float = 1.0) -> np.ndarray:
    """value * 1_A."""
    x = np.zeros(dim)
    x[list(indices)] = value
    return x


def project(x: np.ndarray, indices: Iterable[int]) -> np.ndarray:
    """P_A(x): keep the coordinates in A, zero the rest."""
    out = np.zeros_like(x)
    idx = list(indices)
    out[idx] = x[idx]
    return out


def support(x: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(x))


def spread(x: np.ndarray, positions: Sequence[int], dim: int | None = None) -> np.ndarray:
    """Move the support of x, in increasing order, onto the increasing positions given."""
    supp = support(x)
    if len(positions) != len(supp):
        raise InvalidParameterError("A spread needs one target position per support index")
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise InvalidParameterError("Spread positions must be strictly increasing")
    y = np.zeros(dim or x.size)
    y[list(positions)] = x[list(supp)]
    return y


# -------------------------------
# Norm definitions
# -------------------------------


@dataclass(frozen=True)
class Lp:
    p: float

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise InvalidParameterError(f"Lp needs p >= 1, got {self.p}")


@dataclass(frozen=True)
class WeightedL1:
    weights: tuple[float, ...]


@dataclass(frozen=True)
class PolyhedralAbs:
    """||x|| = max over rows A of sum_{i in A} |x_i|; rows dominate their subsets."""

    family: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PolyhedralLinear:
    """||x|| = max over rows r of |<r, x>|; the rows must span R^d."""

    rows: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class DualOf:
    inner: "SpaceSpec"


NormKind = Union[Lp, WeightedL1, PolyhedralAbs, PolyhedralLinear, DualOf]


@dataclass(frozen=True)
class ExampleSpaceParams:
    n: int

    @property
    def dim(self) -> int:
        return 2 * math.factorial(self.n)


@dataclass(frozen=True)
class SpaceSpec:
    dim: int
    norm: NormKind
    example: ExampleSpaceParams | None = None

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InvalidParameterError(f"Space dimension must be a positive integer, got {self.dim!r}")
        norm = self.norm
        if isinstance(norm, WeightedL1):
            w = norm.weights
            if len(w) != self.dim:
                raise DimensionMismatchError(f"{len(w)} weights for dimension {self.dim}")
            if not all(math.isfinite(v) and v > 0 for v in w):
                raise InvalidParameterError("Weights must be positive and finite")
        elif isinstance(norm, PolyhedralAbs):
            object.__setattr__(self, "norm", PolyhedralAbs(_normalize_family(norm.family, self.dim)))
        elif isinstance(norm, PolyhedralLinear):
            rows = np.asarray(norm.rows, dtype=float)
            if rows.ndim != 2 or rows.shape[1] != self.dim:
                raise DimensionMismatchError(f"Linear rows must have length {self.dim}")
            if not np.all(np.isfinite(rows)):
                raise InvalidParameterError("Linear rows must be finite")
            if np.linalg.matrix_rank(rows) < self.dim:
                raise InvalidParameterError("Linear rows do not span the space; that is a seminorm")
        elif isinstance(norm, DualOf):
            if norm.inner.dim != self.dim:
                raise DimensionMismatchError("Dual space must share the inner dimension")
            if isinstance(norm.inner.norm, DualOf):
                raise UnsupportedNormError("DualOf may only be nested once")
        elif not isinstance(norm, Lp):
            raise UnsupportedNormError(f"Unknown norm definition {norm!r}")

    @property
    def label(self) -> str:
        norm = self.norm
        if self.example is not None:
            return f"example:{self.example.n}"
        if isinstance(norm, Lp):
            p = "inf" if math.isinf(norm.p) else f"{norm.p:g}"
            return f"lp:{p}:{self.dim}"
        if isinstance(norm, WeightedL1):
            return "weighted:" + ",".join(f"{w:g}" for w in norm.weights)
        if isinstance(norm, PolyhedralAbs):
            return f"polyhedral_abs:{self.dim}"
        if isinstance(norm, PolyhedralLinear):
            return f"polyhedral_linear:{self.dim}"
        return f"dual({norm.inner.label})"


def _normalize_family(family: Iterable[Iterable[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    rows: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for raw in family:
        row = tuple(sorted({int(i) for i in raw}))
        if not row:
            raise InvalidParameterError("Family rows must be non-empty")
        if row[0] < 0 or row[-1] >= dim:
            raise InvalidParameterError(f"Family row {one_based(row)} leaves [1, {dim}]")
        if row not in seen:
            seen.add(row)
            rows.append(row)
    if not rows:
        raise InvalidParameterError("Polyhedral family must be non-empty")
    # Singletons keep the max-of-sums a norm rather than a seminorm.
    for i in range(dim):
        if (i,) not in seen:
            rows.append((i,))
    return tuple(rows)


# -------------------------------
# Constructors
# -------------------------------


def lp_space(dim: int, p: float) -> SpaceSpec:
    return SpaceSpec(dim, Lp(float(p)))


def weighted_space(weights: Sequence[float]) -> SpaceSpec:
    return SpaceSpec(len(weights), WeightedL1(tuple(float(w) for w in weights)))


def polyhedral_space(dim: int, family: Iterable[Iterable[int]]) -> SpaceSpec:
    return SpaceSpec(dim, PolyhedralAbs(tuple(tuple(r) for r in family)))


def linear_space(rows: Sequence[Sequence[float]]) -> SpaceSpec:
    rows_t = tuple(tuple(float(v) for v in r) for r in rows)
    if not rows_t:
        raise InvalidParameterError("Linear norm needs at least one row")
    return SpaceSpec(len(rows_t[0]), PolyhedralLinear(rows_t))


def summing_space(dim: int) -> SpaceSpec:
    """Coefficient norm of the summing basis of c_0: max_k |sum_{i>=k} x_i|."""
    rows = [[1.0 if i >= k else 0.0 for i in range(dim)] for k in range(dim)]
    return linear_space(rows)


def dual_space(inner: SpaceSpec) -> SpaceSpec:
    return SpaceSpec(inner.dim, DualOf(inner))


def example_space(n: int, cap: int | None = None) -> SpaceSpec:
    """
    The right-spreading space: rows are the subsets A of [m!, 2n!] with |A| <= m!,
    for m = 1..n (1-based). Only rows of maximal size are stored.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidParameterError(f"example_space needs an integer n >= 2, got {n!r}")
    cap = cap if cap is not None else get_settings().cap_dim
    params = ExampleSpaceParams(n)
    dim = params.dim
    if dim > cap:
        raise CapExceededError(f"example_space({n}) has dimension {dim}, above the cap {cap}")
    rows: list[tuple[int, ...]] = []
    for m in range(1, n + 1):
        start = math.factorial(m) - 1
        size = min(math.factorial(m), dim - start)
        rows.extend(itertools.combinations(range(start, dim), size))
    logger.debug(f"example_space({n}): dim={dim}, {len(rows)} family rows")
    return SpaceSpec(dim, PolyhedralAbs(tuple(rows)), example=params)


# -------------------------------
# Norm evaluation
# -------------------------------


@functools.lru_cache(maxsize=128)
def _family_matrix(family: tuple[tuple[int, ...], ...], dim: int) -> np.ndarray:
    mat = np.zeros((len(family), dim))
    for r, row in enumerate(family):
        mat[r, list(row)] = 1.0
    mat.flags.writeable = False
    return mat


@functools.lru_cache(maxsize=128)
def _linear_matrix(rows: tuple[tuple[float, ...], ...]) -> np.ndarray:
    mat = np.array(rows, dtype=float)
    mat.flags.writeable = False
    return mat


def absolute_rows(space: SpaceSpec) -> np.ndarray | None:
    """
    Nonnegative matrix M with ||x|| = max(M @ |x|) when the norm is an absolute
    polyhedral norm (Lp(1), Lp(inf), WeightedL1, PolyhedralAbs, diagonal linear rows).
    None otherwise.
    """
    norm = space.norm
    if isinstance(norm, Lp):
        if norm.p == 1.0:
            return np.ones((1, space.dim))
        if math.isinf(norm.p):
            return np.eye(space.dim)
        return None
    if isinstance(norm, WeightedL1):
        return np.asarray(norm.weights, dtype=float)[None, :]
    if isinstance(norm, PolyhedralAbs):
        return _family_matrix(norm.family, space.dim)
    if isinstance(norm, PolyhedralLinear):
        mat = _linear_matrix(norm.rows)
        if np.all(np.count_nonzero(mat, axis=1) <= 1):
            return np.abs(mat)
    return None


def is_absolute(space: SpaceSpec) -> bool:
    """True when ||x|| depends only on |x_i|, so coordinate projections contract."""
    norm = space.norm
    if isinstance(norm, (Lp, WeightedL1, PolyhedralAbs)):
        return True
    if isinstance(norm, PolyhedralLinear):
        return absolute_rows(space) is not None
    return is_absolute(norm.inner)


def _check_dim(space: SpaceSpec, length: int):
    if length != space.dim:
        raise DimensionMismatchError(f"Vector has dimension {length}, space {space.label} has dimension {space.dim}")


def batch_norm(space: SpaceSpec, vectors) -> np.ndarray:
    """Norms of the rows of a 2-D array."""
    X = np.atleast_2d(np.asarray(vectors, dtype=float))
    _check_dim(space, X.shape[1])
    norm = space.norm
    if isinstance(norm, Lp):
        if math.isinf(norm.p):
            return np.max(np.abs(X), axis=1)
        if norm.p == 1.0:
            return np.sum(np.abs(X), axis=1)
        return np.linalg.norm(X, ord=norm.p, axis=1)
    if isinstance(norm, WeightedL1):
        return np.abs(X) @ np.asarray(norm.weights, dtype=float)
    if isinstance(norm, PolyhedralAbs):
        return np.max(np.abs(X) @ _family_matrix(norm.family, space.dim).T, axis=1)
    if isinstance(norm, PolyhedralLinear):
        return np.max(np.abs(X @ _linear_matrix(norm.rows).T), axis=1)
    return np.array([dual_norm(norm.inner, row) for row in X])


def norm(space: SpaceSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidParameterError("norm expects a single vector")
    return float(batch_norm(space, x[None, :])[0])


# -------------------------------
# Dual norms
# -------------------------------


def dual_norm_witness(space: SpaceSpec, f) -> tuple[float, np.ndarray]:
    """
    Returns (||f||^*, x) with ||x|| <= 1 and <f, x> = ||f||^*.
    Polyhedral norms are solved exactly by linear programming.
    """
    f = np.asarray(f, dtype=float)
    _check_dim(space, f.size)
    d = space.dim
    norm = space.norm

    if isinstance(norm, Lp):
        if not np.any(f):
            return 0.0, np.zeros(d)
        if norm.p == 1.0:
            k = int(np.argmax(np.abs(f)))
            return float(abs(f[k])), np.sign(f[k]) * basis_vector(d, k)
        if math.isinf(norm.p):
            return float(np.sum(np.abs(f))), np.sign(f)
        q = norm.p / (norm.p - 1.0)
        value = float(np.linalg.norm(f, ord=q))
        x = np.sign(f) * np.abs(f) ** (q - 1.0) / value ** (q - 1.0)
        return value, x

    if isinstance(norm, WeightedL1):
        w = np.asarray(norm.weights, dtype=float)
        ratios = np.abs(f) / w
        k = int(np.argmax(ratios))
        if ratios[k] == 0.0:
            return 0.0, np.zeros(d)
        return float(ratios[k]), np.sign(f[k]) * basis_vector(d, k) / w[k]

    if isinstance(norm, PolyhedralAbs):
        mat = _family_matrix(norm.family, d)
        # x = u - v with u, v >= 0; each row bounds sum_{i in A} (u_i + v_i).
        res = linprog(
            np.concatenate([-f, f]),
            A_ub=np.hstack([mat, mat]),
            b_ub=np.ones(mat.shape[0]),
            bounds=(0, None),
            method="highs",
        )
        if res.status != 0:
            logger.error(f"Dual norm LP failed on {space.label}: {res.message}")
            raise DualNormError(f"Dual norm LP failed: {res.message}")
        x = res.x[:d] - res.x[d:]
        return max(float(-res.fun), 0.0), x

    if isinstance(norm, PolyhedralLinear):
        mat = _linear_matrix(norm.rows)
        res = linprog(
            -f,
            A_ub=np.vstack([mat, -mat]),
            b_ub=np.ones(2 * mat.shape[0]),
            bounds=(None, None),
            method="highs",
        )
        if res.status != 0:
            logger.error(f"Dual norm LP failed on {space.label}: {res.message}")
            raise DualNormError(f"Dual norm LP failed: {res.message}")
        return max(float(-res.fun), 0.0), res.x

    raise UnsupportedNormError("The dual of a dual space (bidual) is not supported")


def dual_norm(space: SpaceSpec, f) -> float:
    return dual_norm_witness(space, f)[0]


# -------------------------------
# Basis constant
# -------------------------------


def basis_constant(space: SpaceSpec, budget: int | None = None, seed: int | None = None) -> ConstantEstimate:
    """
    K_b = max_m ||P_[1,m]||. Exactly 1 for absolute norms; otherwise a lower bound
    from sampled vectors.
    """
    settings = get_settings()
    d = space.dim
    if d > settings.cap_dim:
        raise CapExceededError(f"Dimension {d} above the cap {settings.cap_dim}")
    if is_absolute(space):
        return ConstantEstimate(
            kind="basis_constant",
            value=1.0,
            exactness="exact",
            witness={"x": basis_vector(d, 0).tolist(), "m": 1},
            budget={"method": "absolute"},
            seed=None,
        )

    samples = budget if budget is not None else 2000
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    candidates = np.vstack(
        [
            np.eye(d),
            rng.standard_normal((samples // 2, d)),
            rng.integers(-2, 3, size=(samples - samples // 2, d)).astype(float),
        ]
    )
    candidates = candidates[np.any(candidates != 0.0, axis=1)]
    base = batch_norm(space, candidates)
    best, best_x, best_m = 1.0, candidates[0], d
    for m in range(1, d + 1):
        heads = candidates.copy()
        heads[:, m:] = 0.0
        ratios = batch_norm(space, heads) / base
        k = int(np.argmax(ratios))
        if ratios[k] > best:
            best, best_x, best_m = float(ratios[k]), candidates[k], m
    return ConstantEstimate(
        kind="basis_constant",
        value=best,
        exactness="lower_bound",
        witness={"x": best_x.tolist(), "m": best_m},
        budget={"method": "sampled", "samples": int(candidates.shape[0])},
        seed=seed,
    )

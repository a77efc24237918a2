"""Deterministic test vectors for the greedy-type constants and the inequality checks."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .exceptions import InvalidParameterError
from .settings import get_settings

EPSILONS: tuple[float, ...] = (1e-3, 1e-1)
FAMILIES: tuple[str, ...] = ("signed_indicator", "geometric", "extremal", "sparse", "ties", "gaussian")


def proof_witnesses(dim: int, left: Sequence[int], right: Sequence[int], epsilons: Sequence[float] = EPSILONS, heavy_right: bool = True) -> np.ndarray:
    """
    Vectors 1_left + (1+eps) 1_right (or the heavier weight on `left`). With left < right
    and |left| <= |right| these make the greedy set exactly the heavy block.
    """
    rows = []
    for eps in epsilons:
        x = np.zeros(dim)
        x[list(left)] = 1.0 if heavy_right else 1.0 + eps
        x[list(right)] = 1.0 + eps if heavy_right else 1.0
        rows.append(x)
    return np.array(rows)


def _signed_indicator(rng: np.random.Generator, dim: int) -> np.ndarray:
    k = int(rng.integers(1, dim + 1))
    x = np.zeros(dim)
    idx = rng.choice(dim, size=k, replace=False)
    x[idx] = rng.choice([-1.0, 1.0], size=k)
    return x


def _geometric(rng: np.random.Generator, dim: int) -> np.ndarray:
    ratio = float(rng.choice([0.5, 0.8, 0.9]))
    x = ratio ** np.arange(dim, dtype=float) * rng.choice([-1.0, 1.0], size=dim)
    if rng.random() < 0.5:
        x = x[rng.permutation(dim)]
    return x


def _extremal(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim < 2:
        return np.ones(dim)
    split = int(rng.integers(1, dim))
    left = np.arange(split)
    right = np.arange(split, dim)
    if rng.random() < 0.5:
        # A < B, |A| <= |B|, heavy B
        size_b = int(rng.integers(1, right.size + 1))
        size_a = int(rng.integers(1, min(size_b, left.size) + 1))
        A = rng.choice(left, size=size_a, replace=False)
        B = rng.choice(right, size=size_b, replace=False)
        heavy_right = True
    else:
        # B < A, |A| <= |B|, heavy B
        size_b = int(rng.integers(1, left.size + 1))
        size_a = int(rng.integers(1, min(size_b, right.size) + 1))
        B = rng.choice(left, size=size_b, replace=False)
        A = rng.choice(right, size=size_a, replace=False)
        heavy_right = False
    eps = float(rng.choice(EPSILONS))
    lo, hi = (A, B) if heavy_right else (B, A)
    return proof_witnesses(dim, lo, hi, (eps,), heavy_right=heavy_right)[0]


def _sparse(rng: np.random.Generator, dim: int) -> np.ndarray:
    x = rng.standard_normal(dim)
    x[rng.random(dim) < 0.5] = 0.0
    return x


def _ties(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.integers(-2, 3, size=dim).astype(float)


def _gaussian(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal(dim)


_GENERATORS = {
    "signed_indicator": _signed_indicator,
    "geometric": _geometric,
    "extremal": _extremal,
    "sparse": _sparse,
    "ties": _ties,
    "gaussian": _gaussian,
}


def make_corpus(dim: int, size: int | None = None, seed: int | None = None) -> np.ndarray:
    """`size` non-zero vectors cycling through the families; identical for identical arguments."""
    settings = get_settings()
    size = settings.corpus_size if size is None else size
    seed = settings.seed if seed is None else seed
    if dim < 1 or size < 1:
        raise InvalidParameterError(f"Corpus needs dim >= 1 and size >= 1, got dim={dim}, size={size}")
    rng = np.random.default_rng(seed)
    rows = np.empty((size, dim))
    for i in range(size):
        x = _GENERATORS[FAMILIES[i % len(FAMILIES)]](rng, dim)
        if not np.any(x):
            x[int(rng.integers(dim))] = 1.0
        rows[i] = x
    return rows

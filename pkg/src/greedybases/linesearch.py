"""Golden-section search for convex 1-D problems, vectorized over independent brackets."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

PHI_RATIO = 2 / (1 + math.sqrt(5))


def golden_section(
    func: Callable[[np.ndarray], np.ndarray],
    lower,
    upper,
    tol: float = 1e-10,
    max_iterations: int = 200,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Minimize func elementwise on [lower, upper].

    func maps an array of abscissae (one per bracket) to the objective values of the
    corresponding problems. Returns (argmin, minimum) arrays. The bracket endpoints are
    compared against the interior result, so a minimum sitting on the boundary is found
    exactly.
    """
    lo = np.array(lower, dtype=float, ndmin=1)
    hi = np.array(upper, dtype=float, ndmin=1)
    lo0, hi0 = lo.copy(), hi.copy()

    x1 = hi - PHI_RATIO * (hi - lo)
    x2 = lo + PHI_RATIO * (hi - lo)
    f1 = func(x1)
    f2 = func(x2)

    for _ in range(max_iterations):
        if np.all(hi - lo <= tol):
            break
        go_left = f2 > f1
        hi = np.where(go_left, x2, hi)
        lo = np.where(go_left, lo, x1)
        probe = np.where(go_left, hi - PHI_RATIO * (hi - lo), lo + PHI_RATIO * (hi - lo))
        f_probe = func(probe)
        x1, x2 = np.where(go_left, probe, x2), np.where(go_left, x1, probe)
        f1, f2 = np.where(go_left, f_probe, f2), np.where(go_left, f1, f_probe)

    mid = 0.5 * (lo + hi)
    candidates_x = np.vstack([mid, lo0, hi0, x1, x2])
    candidates_f = np.vstack([func(mid), func(lo0), func(hi0), f1, f2])
    pick = np.argmin(candidates_f, axis=0)
    cols = np.arange(lo.size)
    return candidates_x[pick, cols], candidates_f[pick, cols]


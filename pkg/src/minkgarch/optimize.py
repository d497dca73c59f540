"""Nelder-Mead downhill simplex minimizer.

Kept local rather than delegating to scipy so that the stopping rule is the
simplex diameter (largest pairwise vertex distance) and iteration counts are
reported exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    diameter: float


def simplex_diameter(vertices: np.ndarray) -> float:
    diff = vertices[:, None, :] - vertices[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=-1)).max())


def nelder_mead(
    func: Callable[[np.ndarray], float],
    x0,
    step: float = 0.5,
    tol: float = 1e-8,
    max_iter: int = 2000,
    reflect: float = 1.0,
    expand: float = 2.0,
    contract: float = 0.5,
    shrink: float = 0.5,
) -> SimplexResult:
    """Minimize ``func`` starting from the axis-aligned simplex around ``x0``.

    Non-finite objective values are treated as +inf, so the search simply
    retreats from regions where the model is undefined.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    nfev = 0

    def f(x):
        nonlocal nfev
        nfev += 1
        val = float(func(x))
        return val if np.isfinite(val) else np.inf

    sim = np.vstack([x0] + [x0 + step * np.eye(n)[i] for i in range(n)])
    fs = np.array([f(v) for v in sim])

    it = 0
    converged = False
    while True:
        # stable sort keeps the earlier vertex first on ties
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        diameter = simplex_diameter(sim)
        if diameter < tol:
            converged = True
            break
        if it >= max_iter:
            break
        it += 1

        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]
        xr = centroid + reflect * (centroid - worst)
        fr = f(xr)
        if fr < fs[0]:
            xe = centroid + expand * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = centroid + contract * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xc = centroid + contract * (worst - centroid)
            fc = f(xc)
            if fc < fs[-1]:
                sim[-1], fs[-1] = xc, fc
                continue
        best = sim[0]
        for i in range(1, n + 1):
            sim[i] = best + shrink * (sim[i] - best)
            fs[i] = f(sim[i])

    return SimplexResult(sim[0].copy(), float(fs[0]), it, nfev, converged, diameter)

"""Compiled scalar recursions shared by the GARCH and metric-flow code.

All recursions use the same update expression ``c + a * x + b * prev`` so
that the Euclidean reduction of the metric flow agrees bit for bit with the
GARCH variance filter.
"""

import math

import numba
import numpy as np

LOG_2PI = math.log(2.0 * math.pi)


@numba.njit(cache=True)
def affine_recursion(x, c, a, b, y0, n_out):
    """y[0] = y0; y[t] = c + a * x[t-1] + b * y[t-1] for t < n_out."""
    y = np.empty(n_out)
    prev = y0
    y[0] = prev
    for t in range(1, n_out):
        prev = c + a * x[t - 1] + b * prev
        y[t] = prev
    return y


@numba.njit(cache=True)
def garch_loglik(r, kappa, alpha, beta, s0):
    """Gaussian log-likelihood of r under GARCH(1,1), fused with the filter."""
    n = r.shape[0]
    v = s0
    acc = 0.0
    for t in range(n):
        if t > 0:
            v = kappa + alpha * (r[t - 1] * r[t - 1]) + beta * v
        if not v > 0.0:
            return -np.inf
        acc += math.log(v) + r[t] * r[t] / v
    return -0.5 * (acc + n * LOG_2PI)


@numba.njit(cache=True)
def garch_simulate(kappa, alpha, beta, z, s0):
    n = z.shape[0]
    r = np.empty(n)
    v = np.empty(n)
    prev = s0
    for t in range(n):
        if t > 0:
            prev = kappa + alpha * (r[t - 1] * r[t - 1]) + beta * prev
        v[t] = prev
        r[t] = math.sqrt(prev) * z[t]
    return r, v

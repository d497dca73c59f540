"""Metric-coefficient GARCH flow with signed ("dark") variance.

The GARCH variance recursion is reinterpreted as a recursion on a scalar
metric coefficient g(t),

    g(t) = alpha0 + alpha1 * |eps_{t-1}|^2 + beta * g(t-1),

which, unlike a variance, may start (and stay for a while) below zero.
Regime labels follow the sign geometry of g: spherical at g = 1, Minkowski
at g = -1 and hyperbolic in between.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InvalidParams, NegativeShock, SingularDesign, TooShort, ZeroAlpha1
from .stylized import ols

CONE_TOL = 1e-12


class Regime(str, enum.Enum):
    SPHERICAL = "Spherical"
    HYPERBOLIC = "Hyperbolic"
    MINKOWSKI_LIKE = "MinkowskiLike"

    def __str__(self) -> str:
        return self.value


class Persistence(str, enum.Enum):
    PERSISTENT = "Persistent"
    INERT = "Inert"
    NEUTRAL = "Neutral"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MetricParams:
    alpha0: float
    alpha1: float
    beta: float

    def __post_init__(self):
        a0, a1, b = self.alpha0, self.alpha1, self.beta
        if not all(math.isfinite(v) for v in (a0, a1, b)):
            raise InvalidParams(f"non-finite parameters {self}")
        if a0 <= 0:
            raise InvalidParams(f"alpha0 must be > 0, got {a0}")
        if a1 < 0 or b < 0:
            raise InvalidParams(f"alpha1 and beta must be >= 0, got {a1}, {b}")
        if a1 + b >= 1:
            raise InvalidParams(f"alpha1 + beta must be < 1, got {a1 + b}")


@dataclass(frozen=True)
class RegimeLabel:
    regime: Regime
    g: float


@dataclass(frozen=True)
class MetricPath:
    g_values: np.ndarray
    regimes: tuple

    def __len__(self) -> int:
        return self.g_values.size

    def to_csv(self) -> str:
        rows = ["t,g,regime"]
        rows += [f"{t},{g:.17g},{reg.value}" for t, (g, reg) in enumerate(zip(self.g_values, self.regimes))]
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class FlowFit:
    a: float
    b: float
    residuals: np.ndarray


@dataclass(frozen=True)
class ConeTest:
    residual: float
    on_cone: bool


@dataclass(frozen=True)
class PersistenceClass:
    label: Persistence
    expected_price_sign: int


def classify_regime(g: float, tol: float = 1e-9) -> RegimeLabel:
    g = float(g)
    if g >= 1.0 - tol:
        return RegimeLabel(Regime.SPHERICAL, g)
    if g <= -1.0 + tol:
        return RegimeLabel(Regime.MINKOWSKI_LIKE, g)
    return RegimeLabel(Regime.HYPERBOLIC, g)


def metric_flow(shock_sq: Sequence[float], params: MetricParams, g0: float) -> MetricPath:
    """Run the metric recursion; the path has one more entry than ``shock_sq``."""
    x = np.ascontiguousarray(shock_sq, dtype=float)
    if x.ndim != 1:
        raise ValueError("shock_sq must be one-dimensional")
    if np.any(x < 0):
        raise NegativeShock(f"squared shocks must be >= 0 (min {x.min()})")
    if not math.isfinite(g0):
        raise InvalidParams("g0 must be finite")
    g = _kernels.affine_recursion(x, params.alpha0, params.alpha1, params.beta, float(g0), x.size + 1)
    g.setflags(write=False)
    return MetricPath(g, tuple(classify_regime(v).regime for v in g))


def signed_variance(g: float, x_norm_sq: float) -> float:
    """sigma^2 = g * |x|^2; negative values are dark volatility."""
    if x_norm_sq < 0:
        raise NegativeShock("x_norm_sq must be >= 0")
    return g * x_norm_sq


def extract_shock(g_t: float, g_prev: float, params: MetricParams) -> float:
    """Invert one step of the flow for the squared shock that produced it."""
    if params.alpha1 == 0:
        raise ZeroAlpha1("cannot recover shocks when alpha1 = 0")
    return (g_t - params.alpha0 - params.beta * g_prev) / params.alpha1


def extract_shocks(path: MetricPath, params: MetricParams) -> np.ndarray:
    if params.alpha1 == 0:
        raise ZeroAlpha1("cannot recover shocks when alpha1 = 0")
    g = path.g_values
    return (g[1:] - params.alpha0 - params.beta * g[:-1]) / params.alpha1


def flow_residual(path: MetricPath, shock_sq: Sequence[float]) -> FlowFit:
    """OLS of shock_sq[t] on the forward increment g[t+1] - g[t].

    Uses as many points as there are increments and shocks in common.
    """
    x = np.asarray(shock_sq, dtype=float)
    dg = np.diff(path.g_values)
    n = min(dg.size, x.size)
    if n < 3:
        raise TooShort(f"need at least 3 points, got {n}")
    fit = ols(dg[:n], x[:n])
    return FlowFit(fit.intercept, fit.slope, fit.residuals)


def scale_shock(eps: float, g: float) -> complex:
    """sqrt(g) * eps on the principal branch (imaginary for g < 0)."""
    return cmath.sqrt(complex(g, 0.0)) * eps


def in_cone(point: tuple[float, float], center: tuple[float, float], k: float) -> ConeTest:
    x, y = point
    d, s = center
    residual = (x - d) ** 2 - (y - s) ** 2 - k
    return ConeTest(residual, abs(residual) <= CONE_TOL)


def classify_persistence(delta_sigma_sq: float) -> PersistenceClass:
    """Predicted sign of the price change given the variance increment."""
    if delta_sigma_sq > 0:
        return PersistenceClass(Persistence.PERSISTENT, 1)
    if delta_sigma_sq < 0:
        return PersistenceClass(Persistence.INERT, -1)
    return PersistenceClass(Persistence.NEUTRAL, 0)

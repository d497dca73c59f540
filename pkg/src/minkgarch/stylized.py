"""Volatility-clustering diagnostics.

Absolute-return autocorrelation, its log-log power-law fit C / tau^beta, and
the embedding of the fitted curve into a 1+1 Minkowski plane with
x = ACF(tau) and x* = tau^beta.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    InsufficientPositiveLags,
    InvalidFit,
    InvalidParams,
    NoRealRoot,
    SingularDesign,
    TooShort,
    ZeroKurtosis,
    ZeroVariance,
)
from .series import as_values

LIGHTLIKE_TOL = 1e-9


class CausalClass(str, enum.Enum):
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"
    SPACELIKE = "Spacelike"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AcfCurve:
    lags: np.ndarray
    values: np.ndarray

    def to_csv(self) -> str:
        return "tau,acf\n" + "".join(f"{t},{v:.17g}\n" for t, v in zip(self.lags, self.values))


@dataclass(frozen=True)
class PowerLawFit:
    C: float
    beta: float
    r_squared: float
    used_lags: tuple

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "beta": self.beta,
            "r_squared": self.r_squared,
            "used_lags": list(self.used_lags),
        }


@dataclass(frozen=True)
class OlsFit:
    intercept: float
    slope: float
    residuals: np.ndarray


@dataclass(frozen=True)
class MinkowskiEmbedding:
    tau: np.ndarray
    acf: np.ndarray
    x: np.ndarray
    x_star: np.ndarray
    ds_sq: np.ndarray
    causal_class: tuple

    def to_csv(self) -> str:
        rows = ["tau,acf,x,x_star,ds_sq,class"]
        for t, a, x, xs, d, c in zip(self.tau, self.acf, self.x, self.x_star, self.ds_sq, self.causal_class):
            rows.append(f"{t},{a:.17g},{x:.17g},{xs:.17g},{d:.17g},{c.value}")
        return "\n".join(rows) + "\n"


class DarkRoot(NamedTuple):
    plus: float
    minus: float


@dataclass(frozen=True)
class MemoryConstant:
    per_lag_C: np.ndarray
    dispersion: float


def abs_acf(returns, max_lag: int) -> AcfCurve:
    """Pearson correlation of |r_t| with |r_{t+tau}| for tau = 1..max_lag.

    Each lag uses the means and variances of its own overlapping windows.
    """
    if max_lag < 1:
        raise InvalidParams("max_lag must be >= 1")
    a = np.abs(as_values(returns))
    if a.size <= max_lag + 4:
        raise TooShort(f"need more than {max_lag + 4} observations, got {a.size}")
    if np.ptp(a) == 0:
        raise ZeroVariance("|returns| is constant")
    lags = np.arange(1, max_lag + 1)
    values = np.empty(max_lag)
    for i, tau in enumerate(lags):
        head = a[:-tau] - a[:-tau].mean()
        tail = a[tau:] - a[tau:].mean()
        denom = math.sqrt(float(head @ head) * float(tail @ tail))
        if denom == 0:
            raise ZeroVariance(f"a lag-{tau} window of |returns| is constant")
        values[i] = float(head @ tail) / denom
    return AcfCurve(lags, values)


def ols(x: Sequence[float], y: Sequence[float]) -> OlsFit:
    """Least-squares line y = intercept + slope * x from the normal equations."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("x and y must have the same length")
    if x.size < 2:
        raise TooShort("need at least 2 points")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    scale = max(1.0, float(np.abs(x).max()))
    if np.ptp(x) == 0 or sxx <= (x.size * np.finfo(float).eps * scale) ** 2:
        raise SingularDesign("regressor is constant")
    slope = float(dx @ (y - ym)) / sxx
    intercept = float(ym - slope * xm)
    return OlsFit(intercept, slope, y - (intercept + slope * x))


def fit_power_law(curve: AcfCurve) -> PowerLawFit:
    mask = curve.values > 0
    if mask.sum() < 3:
        raise InsufficientPositiveLags(f"only {int(mask.sum())} lags have positive autocorrelation")
    lt = np.log(curve.lags[mask].astype(float))
    lv = np.log(curve.values[mask])
    fit = ols(lt, lv)
    ss_res = float(fit.residuals @ fit.residuals)
    dev = lv - lv.mean()
    ss_tot = float(dev @ dev)
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return PowerLawFit(
        C=math.exp(fit.intercept),
        beta=-fit.slope,
        r_squared=r2,
        used_lags=tuple(int(t) for t in curve.lags[mask]),
    )


def rotate_hyperbola(x: float, x_star: float) -> tuple[float, float]:
    """Rotate by pi/4 so that x * x* = C becomes u^2 - v^2 = 2C."""
    r = math.sqrt(0.5)
    return (x + x_star) * r, (x_star - x) * r


def causal_class(ds_sq: float, tol: float = LIGHTLIKE_TOL) -> CausalClass:
    if ds_sq > tol:
        return CausalClass.TIMELIKE
    if ds_sq < -tol:
        return CausalClass.SPACELIKE
    return CausalClass.LIGHTLIKE


def interval(x: float, x_star: float) -> tuple[float, CausalClass]:
    ds = x * x - x_star * x_star
    return ds, causal_class(ds)


def minkowski_embedding(curve: AcfCurve, fit: PowerLawFit, normalize: bool = True) -> MinkowskiEmbedding:
    """Map each lag to (x, x*) with ds^2 = x^2 - x*^2.

    Both variants are scaled so an exact power law lies on x * x* = 1:
    normalized uses x = ACF / C and x* = tau^beta, the raw variant keeps
    x = ACF and uses x* = tau^beta / C.
    """
    if not fit.C > 0 or not math.isfinite(fit.C):
        raise InvalidFit(f"power-law amplitude must be positive, got {fit.C}")
    tau = curve.lags.astype(float)
    growth = tau**fit.beta
    if normalize:
        x = curve.values / fit.C
        x_star = growth
    else:
        x = curve.values.copy()
        x_star = growth / fit.C
    ds = x * x - x_star * x_star
    classes = tuple(causal_class(d) for d in ds)
    return MinkowskiEmbedding(curve.lags.copy(), curve.values.copy(), x, x_star, ds, classes)


def memory_constant(curve: AcfCurve, beta: float) -> MemoryConstant:
    """Per-lag amplitude ACF(tau) * tau^beta and its spread over positive lags."""
    per_lag = curve.values * curve.lags.astype(float) ** beta
    pos = curve.values > 0
    dispersion = float(np.std(per_lag[pos])) if pos.any() else math.nan
    return MemoryConstant(per_lag, dispersion)


def dark_root(mu4: float, kurt: float) -> DarkRoot:
    """Roots of sigma^4 = mu4 / kurt - 3 read literally: (+sqrt, -sqrt).

    This is the rearrangement taken at face value, not the textbook
    kurt = mu4 / sigma^4 - 3; see ``series.moments`` for the latter.
    """
    if not mu4 > 0:
        raise InvalidParams(f"mu4 must be > 0, got {mu4}")
    if kurt == 0:
        raise ZeroKurtosis("excess kurtosis is zero")
    s4 = mu4 / kurt - 3.0
    if s4 < 0:
        raise NoRealRoot(f"mu4 / kurt - 3 = {s4} < 0")
    root = math.sqrt(s4)
    return DarkRoot(root, -root)

"""GARCH(1,1): variance filter, Gaussian QMLE and simulation.

    r_t = sigma_t * eps_t,  eps_t ~ iid N(0, 1)
    sigma_t^2 = kappa + alpha * r_{t-1}^2 + beta * sigma_{t-1}^2

Returns are taken as already demeaned; there is no mean equation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .errors import DegenerateData, InsufficientData, InvalidParams
from .optimize import nelder_mead
from .series import ReturnSeries, as_values

GENERATOR = "numpy.random.PCG64"

# persistence alpha + beta is squashed into (0, PERSISTENCE_CAP)
PERSISTENCE_CAP = 0.999
MIN_FIT_LENGTH = 50


@dataclass(frozen=True)
class GarchParams:
    kappa: float
    alpha: float
    beta: float

    def __post_init__(self):
        k, a, b = self.kappa, self.alpha, self.beta
        if not all(math.isfinite(v) for v in (k, a, b)):
            raise InvalidParams(f"non-finite parameters {self}")
        if k <= 0:
            raise InvalidParams(f"kappa must be > 0, got {k}")
        if a < 0 or b < 0:
            raise InvalidParams(f"alpha and beta must be >= 0, got {a}, {b}")
        if a + b >= 1:
            raise InvalidParams(f"alpha + beta must be < 1, got {a + b}")


@dataclass(frozen=True)
class SimConfig:
    seed: int
    T: int
    burn_in: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must be a 64-bit unsigned integer")
        if self.T < 1:
            raise InvalidParams("horizon T must be >= 1")
        if self.burn_in < 0:
            raise InvalidParams("burn_in must be >= 0")


@dataclass(frozen=True)
class FitOptions:
    multistarts: int = 8
    max_iter: int = 2000
    tol: float = 1e-8


@dataclass(frozen=True)
class GarchFit:
    params: GarchParams
    loglik: float
    iterations: int
    converged: bool
    sigma0_sq: float
    start_logliks: tuple = field(default=(), repr=False)
    seed: int | None = None
    generator: str = GENERATOR

    def to_dict(self) -> dict:
        return {
            "kappa": self.params.kappa,
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "loglik": self.loglik,
            "converged": self.converged,
            "iterations": self.iterations,
            "sigma0_sq": self.sigma0_sq,
            "generator": self.generator,
            "seed": self.seed,
        }


def _check_sigma0(sigma0_sq: float) -> float:
    sigma0_sq = float(sigma0_sq)
    if not sigma0_sq > 0 or not math.isfinite(sigma0_sq):
        raise InvalidParams(f"sigma0_sq must be a positive finite number, got {sigma0_sq}")
    return sigma0_sq


def variance_filter(returns, params: GarchParams, sigma0_sq: float) -> np.ndarray:
    """Conditional variance path, one value per observation."""
    r = as_values(returns)
    s0 = _check_sigma0(sigma0_sq)
    if r.size == 0:
        return np.empty(0)
    return _kernels.affine_recursion(r * r, params.kappa, params.alpha, params.beta, s0, r.size)


def unconditional_variance(params: GarchParams) -> float:
    return params.kappa / (1.0 - params.alpha - params.beta)


def gaussian_loglik(returns, params: GarchParams, sigma0_sq: float) -> float:
    r = np.ascontiguousarray(as_values(returns))
    s0 = _check_sigma0(sigma0_sq)
    return float(_kernels.garch_loglik(r, params.kappa, params.alpha, params.beta, s0))


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def to_params(theta) -> tuple[float, float, float]:
    """Unconstrained (a, b, c) to (kappa, alpha, beta)."""
    a, b, c = theta
    s = PERSISTENCE_CAP * _logistic(b)
    u = _logistic(c)
    return math.exp(a), s * u, s * (1.0 - u)


def from_params(kappa: float, alpha: float, beta: float) -> np.ndarray:
    s = alpha + beta
    return np.array([math.log(kappa), _logit(s / PERSISTENCE_CAP), _logit(alpha / s)])


def start_lattice(sample_var: float) -> list[np.ndarray]:
    """Deterministic starting points: persistence x ARCH share x intercept scale."""
    starts = []
    for s in (0.90, 0.98):
        for share in (0.08, 0.25):
            for scale in (1.0, 0.5):
                kappa = sample_var * (1.0 - s) * scale
                starts.append(from_params(kappa, s * share, s * (1.0 - share)))
    return starts


def fit_qmle(returns, options: FitOptions | None = None, seed: int | None = None) -> GarchFit:
    """Gaussian quasi-maximum-likelihood fit by multistart Nelder-Mead.

    ``seed`` is carried into the result for provenance only; the fit itself
    is deterministic.
    """
    options = options or FitOptions()
    r = np.ascontiguousarray(as_values(returns), dtype=float)
    if r.size < MIN_FIT_LENGTH:
        raise InsufficientData(f"need at least {MIN_FIT_LENGTH} returns, got {r.size}")
    s0 = float(np.var(r))
    if not s0 > 0:
        raise DegenerateData("returns have zero sample variance")

    def negloglik(theta):
        k, a, b = to_params(theta)
        return -_kernels.garch_loglik(r, k, a, b, s0)

    lattice = start_lattice(s0)
    n_starts = max(1, options.multistarts)
    starts = [lattice[i % len(lattice)] for i in range(n_starts)]

    best = None
    start_ll = []
    for theta0 in starts:
        start_ll.append(-negloglik(theta0))
        res = nelder_mead(negloglik, theta0, tol=options.tol, max_iter=options.max_iter)
        # strict comparison: ties go to the lowest start index
        if best is None or res.fun < best.fun:
            best = res

    params = GarchParams(*to_params(best.x))
    return GarchFit(
        params=params,
        loglik=gaussian_loglik(r, params, s0),
        iterations=best.iterations,
        converged=best.converged,
        sigma0_sq=s0,
        start_logliks=tuple(start_ll),
        seed=seed,
    )


def simulate_path(params: GarchParams, config: SimConfig) -> tuple[ReturnSeries, np.ndarray]:
    """Simulated returns together with the simulator's variance path."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    z = rng.standard_normal(config.T + config.burn_in)
    r, v = _kernels.garch_simulate(
        params.kappa, params.alpha, params.beta, z, unconditional_variance(params)
    )
    return ReturnSeries(r[config.burn_in:], "log"), v[config.burn_in:].copy()


def simulate(params: GarchParams, config: SimConfig) -> ReturnSeries:
    return simulate_path(params, config)[0]


def params_dict(params: GarchParams) -> dict:
    return asdict(params)

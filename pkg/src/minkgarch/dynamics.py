"""Integrable-systems layer: Nahm flow on su(2) triples, the Lax polynomial,
the sine-Gordon kink in supply/demand coordinates, and the Pauli trader
matrices.

Matrix conventions: every 2x2 matrix is a complex128 ndarray; a triple is
stored as a (3, 2, 2) array.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BlowUp, GridTooSmall, InvalidParams

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

BLOWUP_LIMIT = 1e8
SU2_TOL = 1e-12


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def levi_civita(i: int, j: int, k: int) -> int:
    return (i - j) * (j - k) * (k - i) // 2


# ---------------------------------------------------------------------------
# su(2) triples and the Nahm flow


@dataclass(frozen=True)
class Su2Triple:
    T1: np.ndarray
    T2: np.ndarray
    T3: np.ndarray

    def __post_init__(self):
        for name in ("T1", "T2", "T3"):
            m = np.array(getattr(self, name), dtype=complex)
            if m.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2, got shape {m.shape}")
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Su2Triple":
        return cls(arr[0], arr[1], arr[2])

    def as_array(self) -> np.ndarray:
        return np.stack([self.T1, self.T2, self.T3])

    def __iter__(self):
        return iter((self.T1, self.T2, self.T3))

    def scaled(self, lam: complex) -> "Su2Triple":
        return Su2Triple.from_array(lam * self.as_array())

    @property
    def traceless(self) -> bool:
        return all(abs(np.trace(m)) <= SU2_TOL for m in self)

    @property
    def anti_hermitian(self) -> bool:
        return all(np.abs(m + m.conj().T).max() <= SU2_TOL for m in self)

    @property
    def is_su2(self) -> bool:
        """False flags a general (non su(2)) input; such triples are still allowed."""
        return self.traceless and self.anti_hermitian


def canonical_triple(scale: float = 1.0) -> Su2Triple:
    """T_i = -(i/2) sigma_i, the fixed direction of the flow."""
    return Su2Triple(*(scale * -0.5j * s for s in PAULI))


def canonical_profile(T: Su2Triple) -> float:
    """Scalar f with T ~ f * canonical_triple(), by projection (mean over i)."""
    ref = canonical_triple()
    coeffs = [np.vdot(r, m) / np.vdot(r, r) for r, m in zip(ref, T)]
    return float(np.mean(coeffs).real)


def random_triple(seed: int, norm: float = 1.0) -> Su2Triple:
    """Random traceless anti-Hermitian triple with largest Frobenius norm ``norm``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    coef = rng.standard_normal((3, 3))
    mats = np.einsum("ia,ajk->ijk", coef, -0.5j * np.stack(PAULI))
    largest = max(np.linalg.norm(m) for m in mats)
    return Su2Triple.from_array(mats * (norm / largest))


def _rhs_array(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    out[0] = commutator(t[1], t[2])
    out[1] = commutator(t[2], t[0])
    out[2] = commutator(t[0], t[1])
    return out


def nahm_rhs(T: Su2Triple) -> Su2Triple:
    """dT_i/ds = [T_{i+1}, T_{i+2}] (indices cyclic)."""
    return Su2Triple.from_array(_rhs_array(T.as_array()))


def nahm_rhs_levi_civita(T: Su2Triple, half_commutator: bool = True) -> Su2Triple:
    """The same right-hand side summed over the Levi-Civita symbol.

    ``half_commutator`` selects 1/2 sum eps_ijk [T_j, T_k]; otherwise the
    plain product form sum eps_ijk T_j T_k is used. Both must agree with
    :func:`nahm_rhs`.
    """
    t = T.as_array()
    out = np.zeros_like(t)
    for i, j, k in itertools.product(range(3), repeat=3):
        eps = levi_civita(i, j, k)
        if eps == 0:
            continue
        if half_commutator:
            out[i] += 0.5 * eps * commutator(t[j], t[k])
        else:
            out[i] += eps * (t[j] @ t[k])
    return Su2Triple.from_array(out)


@dataclass(frozen=True)
class NahmTrajectory:
    s: np.ndarray
    states: np.ndarray  # (n_steps + 1, 3, 2, 2)

    def __len__(self) -> int:
        return self.s.size

    def __getitem__(self, n: int) -> Su2Triple:
        return Su2Triple.from_array(self.states[n])

    @property
    def final(self) -> Su2Triple:
        return self[-1]

    def to_csv(self) -> str:
        header = ["s"]
        for m in (1, 2, 3):
            for a, b in ((0, 0), (0, 1), (1, 0), (1, 1)):
                header += [f"re(T{m}_{a}{b})", f"im(T{m}_{a}{b})"]
        rows = [",".join(header)]
        for s, state in zip(self.s, self.states):
            flat = state.reshape(-1)
            cells = [f"{s:.17g}"]
            for z in flat:
                cells += [f"{z.real:.17g}", f"{z.imag:.17g}"]
            rows.append(",".join(cells))
        return "\n".join(rows) + "\n"


def integrate_nahm(T0: Su2Triple, s_from: float, s_to: float, step: float) -> NahmTrajectory:
    """Classic RK4 with uniform steps.

    The interval is split into round(|s_to - s_from| / step) equal steps, so
    the requested step is honoured exactly whenever it divides the interval.
    Raises BlowUp as soon as any entry exceeds BLOWUP_LIMIT in magnitude.
    """
    if not step > 0:
        raise InvalidParams(f"step must be > 0, got {step}")
    span = s_to - s_from
    n = max(1, int(round(abs(span) / step))) if span != 0 else 0
    h = span / n if n else 0.0
    states = np.empty((n + 1, 3, 2, 2), dtype=complex)
    y = T0.as_array()
    states[0] = y
    for i in range(1, n + 1):
        k1 = _rhs_array(y)
        k2 = _rhs_array(y + 0.5 * h * k1)
        k3 = _rhs_array(y + 0.5 * h * k2)
        k4 = _rhs_array(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        peak = np.abs(y).max()
        if not peak <= BLOWUP_LIMIT:
            raise BlowUp(f"Nahm trajectory diverged near s = {s_from + i * h:.6g} (|T| max {peak:.3g})")
        states[i] = y
    s = s_from + h * np.arange(n + 1)
    return NahmTrajectory(s, states)


# ---------------------------------------------------------------------------
# Lax polynomial and 2x2 spectra


@dataclass(frozen=True)
class LaxPolynomial:
    k: float
    matrix: np.ndarray


def lax_matrix(T: Su2Triple, k: float) -> LaxPolynomial:
    """(T1 + i T2) + k (-2i T3) + k^2 (T1 - i T2)."""
    m = (T.T1 + 1j * T.T2) + k * (-2j * T.T3) + k * k * (T.T1 - 1j * T.T2)
    return LaxPolynomial(k, m)


def spectrum(matrix: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix from lambda^2 - tr lambda + det = 0,
    ordered by (real part, imaginary part)."""
    m = np.asarray(matrix, dtype=complex)
    tr = complex(m[0, 0] + m[1, 1])
    det = complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    half = 0.5 * tr
    disc = np.sqrt(complex(half * half - det))
    roots = sorted((complex(half - disc), complex(half + disc)), key=lambda z: (z.real, z.imag))
    return roots[0], roots[1]


def spectral_distance(a, b) -> float:
    """Distance between two eigenvalue pairs, minimised over the matching."""
    direct = max(abs(a[0] - b[0]), abs(a[1] - b[1]))
    swapped = max(abs(a[0] - b[1]), abs(a[1] - b[0]))
    return float(min(direct, swapped))


def lax_drift(traj: NahmTrajectory, ks=(-1.0, 0.5, 1.0)) -> dict[float, float]:
    """Largest eigenvalue change of the Lax matrix along the trajectory, per k."""
    drift = {}
    for k in ks:
        ref = spectrum(lax_matrix(traj[0], k).matrix)
        drift[k] = max(spectral_distance(ref, spectrum(lax_matrix(traj[n], k).matrix)) for n in range(len(traj)))
    return drift


# ---------------------------------------------------------------------------
# sine-Gordon kink


@dataclass(frozen=True)
class SolitonParams:
    k: float
    p: float
    delta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.k) and math.isfinite(self.p) and math.isfinite(self.delta)):
            raise InvalidParams("soliton parameters must be finite")
        if self.k <= 0:
            raise InvalidParams(f"k must be > 0, got {self.k}")
        if abs(self.p) >= 1:
            raise InvalidParams(f"|p| must be < 1, got {self.p}")

    @property
    def alpha(self) -> float:
        """Lorentz-type factor 1 / sqrt(1 - p^2)."""
        return 1.0 / math.sqrt(1.0 - self.p * self.p)


def kink(theta):
    """4 arctan(exp(theta)), evaluated without overflow for large |theta|."""
    theta = np.asarray(theta, dtype=float)
    neg = theta <= 0
    e = np.exp(np.where(neg, theta, -theta))
    out = np.where(neg, 4.0 * np.arctan(e), 2.0 * np.pi - 4.0 * np.arctan(e))
    return out if out.ndim else float(out)


def soliton_phase(D, S, params: SolitonParams):
    return params.k * params.alpha * (np.asarray(D) - params.p * np.asarray(S)) + params.delta


def soliton_value(D, S, params: SolitonParams):
    """Psi(D, S) = 4 arctan exp(k alpha (D - p S) + delta); accepts arrays."""
    return kink(soliton_phase(D, S, params))


@dataclass(frozen=True)
class Grid2D:
    D_min: float
    D_max: float
    S_min: float
    S_max: float
    h: float
    values: np.ndarray  # values[i, j] at (D_i, S_j)

    @property
    def D(self) -> np.ndarray:
        return self.D_min + self.h * np.arange(self.values.shape[0])

    @property
    def S(self) -> np.ndarray:
        return self.S_min + self.h * np.arange(self.values.shape[1])


def _axis(lo: float, hi: float, h: float) -> np.ndarray:
    if not h > 0:
        raise InvalidParams(f"grid spacing must be > 0, got {h}")
    n = int(round((hi - lo) / h)) + 1
    return lo + h * np.arange(n)


def soliton_grid(params: SolitonParams, extent: tuple[float, float, float, float] = (-5, 5, -5, 5), h: float = 0.01) -> Grid2D:
    d_lo, d_hi, s_lo, s_hi = extent
    d = _axis(d_lo, d_hi, h)
    s = _axis(s_lo, s_hi, h)
    dd, ss = np.meshgrid(d, s, indexing="ij")
    return Grid2D(d[0], d[-1], s[0], s[-1], h, soliton_value(dd, ss, params))


@dataclass(frozen=True)
class SineGordonResidual:
    residual_grid: np.ndarray  # interior points only
    max_abs: float

    def to_csv(self, field: Grid2D) -> str:
        d, s = field.D[1:-1], field.S[1:-1]
        psi = field.values[1:-1, 1:-1]
        rows = ["D,S,psi,residual"]
        for i, dv in enumerate(d):
            for j, sv in enumerate(s):
                rows.append(f"{dv:.17g},{sv:.17g},{psi[i, j]:.17g},{self.residual_grid[i, j]:.17g}")
        return "\n".join(rows) + "\n"


def wave_operator(field: Grid2D) -> np.ndarray:
    """Centered second differences Psi_DD - Psi_SS at interior points."""
    v = field.values
    if v.shape[0] < 3 or v.shape[1] < 3:
        raise GridTooSmall(f"need >= 3 points per axis, got {v.shape}")
    c = v[1:-1, 1:-1]
    d2 = (v[2:, 1:-1] - 2.0 * c + v[:-2, 1:-1]) / field.h**2
    s2 = (v[1:-1, 2:] - 2.0 * c + v[1:-1, :-2]) / field.h**2
    return d2 - s2


def sine_gordon_residual(field: Grid2D, k: float = 1.0) -> SineGordonResidual:
    """Psi_DD - Psi_SS - k^2 sin(Psi) on the interior; k = 1 is the plain equation."""
    res = wave_operator(field) - k * k * np.sin(field.values[1:-1, 1:-1])
    return SineGordonResidual(res, float(np.abs(res).max()))


def lightcone_transform(D, S):
    """(D, S) -> ((D + S) / 2, (D - S) / 2)."""
    return (D + S) / 2, (D - S) / 2


def inverse_lightcone(pD, pS):
    return pD + pS, pD - pS


def lightcone_mixed_derivative(params: SolitonParams, D, S, h: float) -> np.ndarray:
    """Central mixed difference d^2 Psi / (d pD d pS) with step h in both
    light-cone coordinates, sampled at the points (D, S)."""
    pD, pS = lightcone_transform(np.asarray(D, dtype=float), np.asarray(S, dtype=float))

    def psi(u, v):
        return soliton_value(*inverse_lightcone(u, v), params)

    return (psi(pD + h, pS + h) - psi(pD + h, pS - h) - psi(pD - h, pS + h) + psi(pD - h, pS - h)) / (4.0 * h * h)


def lightcone_identity_error(params: SolitonParams, extent=(-5, 5, -5, 5), h: float = 0.01) -> float:
    """max |Psi_{pD pS} - (Psi_DD - Psi_SS)| over the interior of the grid."""
    field = soliton_grid(params, extent, h)
    dd, ss = np.meshgrid(field.D[1:-1], field.S[1:-1], indexing="ij")
    mixed = lightcone_mixed_derivative(params, dd, ss, h)
    return float(np.abs(mixed - wave_operator(field)).max())


# ---------------------------------------------------------------------------
# Trader algebra


@dataclass(frozen=True)
class TraderMatrix:
    label: str
    matrix: np.ndarray


class TraderMatrices(NamedTuple):
    A1: TraderMatrix
    A2: TraderMatrix
    A3_pauli: TraderMatrix
    A3_literal: TraderMatrix


def trader_matrices() -> TraderMatrices:
    """Fundamentalist A1, noise trader A2 and two readings of the bias trader A3.

    ``A3_pauli`` is -(1/2i)[sigma_z, sigma_y] = sigma_x. ``A3_literal`` is
    (1/2i)[A1, A2] from the displayed matrices, which commute, so it is zero.
    """
    a1 = np.array([[0, -1], [1, 0]], dtype=complex)
    a2 = SIGMA_Y.copy()
    a3_pauli = -commutator(SIGMA_Z, SIGMA_Y) / 2j
    a3_literal = commutator(a1, a2) / 2j
    return TraderMatrices(
        TraderMatrix("A1", a1),
        TraderMatrix("A2", a2),
        TraderMatrix("A3", a3_pauli),
        TraderMatrix("A3", a3_literal),
    )


def pauli_relations_hold() -> bool:
    """[sigma_a, sigma_b] = 2i eps_abc sigma_c for all a, b (exact comparison)."""
    for a, b in itertools.product(range(3), repeat=2):
        expected = sum(2j * levi_civita(a, b, c) * PAULI[c] for c in range(3))
        if not np.array_equal(commutator(PAULI[a], PAULI[b]), expected):
            return False
    return True


def wilson_swap(pair):
    a, b = pair
    return b, a

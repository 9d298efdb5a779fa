"""Mode-coefficient recovery and truncated series evaluation.

The truncated solution is

    u(t,x,y) = sum_{k1,k2 <= kmax} ( C e^{i omega t} + conj(C) e^{-i conj(omega) t}
                                     + R e^{r t} ) sin(k1 x) sin(k2 y),

where per mode (C, R) are pinned by three initial conditions on the mode
amplitude x(t):

    x(0) = a,   x'(0) = b,   x''(0) = -lam * a,

the last one forced by the mode equation at t = 0 (the memory integral
vanishes there).  This is a 3x3 Vandermonde-type solve in the exponents
{i*omega, -i*conj(omega), r}; the solution is conjugate-symmetric, so C is the
coefficient of e^{i omega t} and R is real.

Initial data enters as sine coefficients, extracted exactly from uniform-grid
samples by a type-I discrete sine transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.fft import dstn

from .errors import (
    DegenerateExponents,
    DegenerateMode,
    GridTooCoarse,
    NoUsableModes,
    RealityViolation,
)
from .spectrum import KernelParams, SpectralTriple, mode_spectrum

__all__ = [
    "InitialData",
    "ModeCoefficients",
    "ModeExpansion",
    "MuEstimate",
    "sine_coefficients",
    "solve_mode_coefficients",
    "expand",
    "evaluate_solution",
    "evaluate_solution_grid",
    "estimate_mu",
    "mu_from_expansion",
]

#: Exponent-separation threshold below which the coefficient solve is rejected.
_DEGENERATE_TOL = 1e-10

#: |C| below this counts as a vanishing oscillatory coefficient.
_C_ZERO_TOL = 1e-14


@dataclass(frozen=True)
class InitialData:
    """Sine coefficients (a, b) of the initial displacement and velocity."""

    a: np.ndarray
    b: np.ndarray
    kmax: int

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        expected = (self.kmax, self.kmax)
        if self.a.shape != expected or self.b.shape != expected:
            raise ValueError(
                f"coefficient arrays must have shape {expected}, "
                f"got {self.a.shape} and {self.b.shape}"
            )
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise ValueError("coefficient arrays must be finite")

    @classmethod
    def from_samples(cls, u0_values, u1_values, kmax: int) -> "InitialData":
        """Build initial data from uniform interior-grid samples of u0 and u1."""
        return cls(
            a=sine_coefficients(u0_values, kmax),
            b=sine_coefficients(u1_values, kmax),
            kmax=kmax,
        )


@dataclass(frozen=True)
class ModeCoefficients:
    """Recovered coefficients of one mode."""

    C: complex
    R: float


@dataclass(frozen=True)
class ModeExpansion:
    """Spectrum and coefficients of every mode k1, k2 <= kmax, indexed [k1-1, k2-1]."""

    params: KernelParams
    kmax: int
    lam: np.ndarray
    omega: np.ndarray
    r: np.ndarray
    C: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class MuEstimate:
    """Empirical amplitude-ratio constant: max over modes of |R|*sqrt(lam)/|C|."""

    mu_hat: float
    argmax_mode: Tuple[int, int]
    kmax: int


def sine_coefficients(values, kmax: int) -> np.ndarray:
    """Sine coefficients a[k1-1, k2-1] from samples on the uniform interior grid.

    `values[i, j]` holds the sample at (x_{i+1}, y_{j+1}) with x_i = i*pi/(M+1)
    on an M x M grid, M >= 2*kmax + 1.  The type-I DST quadrature is exact for
    sine polynomials of degree <= M, so coefficients of band-limited data come
    out to rounding error.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"expected a square 2-D sample grid, got shape {values.shape}")
    m = values.shape[0]
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if m < 2 * kmax + 1:
        raise GridTooCoarse(
            f"grid of {m} points per direction cannot resolve kmax={kmax}; "
            f"need at least {2 * kmax + 1}"
        )
    coeffs = dstn(values, type=1) / (m + 1) ** 2
    return np.ascontiguousarray(coeffs[:kmax, :kmax])


def _reality_tolerance(a: float, b: float) -> float:
    return 1e-10 * max(1.0, abs(a), abs(b))


def solve_mode_coefficients(
    a: float, b: float, triple: SpectralTriple, lam: float
) -> ModeCoefficients:
    """Recover (C, R) of one mode from x(0) = a, x'(0) = b, x''(0) = -lam*a.

    Solves the 3x3 system in the exponents {i*omega, -i*conj(omega), r};
    rejects exponent collisions (DegenerateExponents) and non-conjugate
    solutions (RealityViolation).
    """
    z = np.array(triple.roots(), dtype=complex)
    gaps = [abs(z[0] - z[1]), abs(z[0] - z[2]), abs(z[1] - z[2])]
    if min(gaps) <= _DEGENERATE_TOL:
        raise DegenerateExponents(f"exponents too close: {z} (min gap {min(gaps)})")
    matrix = np.vstack([np.ones(3, dtype=complex), z, z * z])
    rhs = np.array([a, b, -lam * a], dtype=complex)
    c = np.linalg.solve(matrix, rhs)
    tol = _reality_tolerance(a, b)
    if abs(c[1] - c[0].conjugate()) > tol or abs(c[2].imag) > tol:
        raise RealityViolation(
            f"solution not conjugate-consistent: c={c} (tolerance {tol})"
        )
    return ModeCoefficients(C=complex(c[0]), R=float(c[2].real))


def expand(params: KernelParams, data: InitialData, kmax: Optional[int] = None) -> ModeExpansion:
    """Recover coefficients of every mode k1, k2 <= kmax (batched 3x3 solves)."""
    if kmax is None:
        kmax = data.kmax
    if kmax < 1 or kmax > data.kmax:
        raise ValueError(f"kmax must lie in [1, {data.kmax}], got {kmax}")
    lam, omega, r = mode_spectrum(params, kmax)
    a = data.a[:kmax, :kmax]
    b = data.b[:kmax, :kmax]

    z1 = (1j * omega).reshape(-1)
    z2 = (-1j * omega.conj()).reshape(-1)
    z3 = r.reshape(-1).astype(complex)
    min_gap = np.minimum(
        np.abs(z1 - z2), np.minimum(np.abs(z1 - z3), np.abs(z2 - z3))
    )
    if np.any(min_gap <= _DEGENERATE_TOL):
        worst = int(np.argmin(min_gap))
        k1, k2 = divmod(worst, kmax)
        raise DegenerateExponents(
            f"exponents too close at mode ({k1 + 1}, {k2 + 1}): min gap {min_gap[worst]}"
        )

    n = kmax * kmax
    matrices = np.empty((n, 3, 3), dtype=complex)
    matrices[:, 0, :] = 1.0
    matrices[:, 1, 0], matrices[:, 1, 1], matrices[:, 1, 2] = z1, z2, z3
    matrices[:, 2, 0], matrices[:, 2, 1], matrices[:, 2, 2] = z1 * z1, z2 * z2, z3 * z3
    rhs = np.stack(
        [a.reshape(-1), b.reshape(-1), -lam.reshape(-1) * a.reshape(-1)], axis=1
    ).astype(complex)
    coeffs = np.linalg.solve(matrices, rhs[:, :, None])[:, :, 0]

    tol = 1e-10 * np.maximum(
        1.0, np.maximum(np.abs(a.reshape(-1)), np.abs(b.reshape(-1)))
    )
    conj_defect = np.abs(coeffs[:, 1] - coeffs[:, 0].conj())
    imag_defect = np.abs(coeffs[:, 2].imag)
    bad = (conj_defect > tol) | (imag_defect > tol)
    if np.any(bad):
        worst = int(np.argmax(np.maximum(conj_defect, imag_defect) / tol))
        k1, k2 = divmod(worst, kmax)
        raise RealityViolation(
            f"solution not conjugate-consistent at mode ({k1 + 1}, {k2 + 1}): "
            f"conjugacy defect {conj_defect[worst]}, imaginary defect {imag_defect[worst]}"
        )
    return ModeExpansion(
        params=params,
        kmax=kmax,
        lam=lam,
        omega=omega,
        r=r,
        C=coeffs[:, 0].reshape(kmax, kmax),
        R=coeffs[:, 2].real.reshape(kmax, kmax),
    )


def _mode_amplitudes(expansion: ModeExpansion, t: float) -> np.ndarray:
    """Real per-mode amplitude 2*Re(C e^{i omega t}) + R e^{r t} at time t."""
    osc = 2.0 * (expansion.C * np.exp(1j * expansion.omega * t)).real
    return osc + expansion.R * np.exp(expansion.r * t)


def evaluate_solution_grid(expansion: ModeExpansion, t: float, xs, ys) -> np.ndarray:
    """Truncated solution u(t, x_i, y_j) on a grid of points in [0, pi]."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    k = np.arange(1, expansion.kmax + 1, dtype=float)
    sin_x = np.sin(np.outer(k, xs))
    sin_y = np.sin(np.outer(k, ys))
    amp = _mode_amplitudes(expansion, t)
    return sin_x.T @ amp @ sin_y


def evaluate_solution(expansion: ModeExpansion, t: float, x: float, y: float) -> float:
    """Truncated solution at a single point; zero on the boundary of the square."""
    if t < 0.0:
        raise ValueError("t must be >= 0")
    return float(evaluate_solution_grid(expansion, t, [x], [y])[0, 0])


def mu_from_expansion(expansion: ModeExpansion) -> MuEstimate:
    """Empirical mu over an existing expansion: max |R|*sqrt(lam)/|C|.

    Modes with both coefficients zero are skipped; |C| = 0 with R != 0 flags a
    representation defect (DegenerateMode).
    """
    abs_c = np.abs(expansion.C.reshape(-1))
    abs_r = np.abs(expansion.R.reshape(-1))
    degenerate = (abs_c <= _C_ZERO_TOL) & (abs_r > 1e-10)
    if np.any(degenerate):
        worst = int(np.argmax(degenerate))
        k1, k2 = divmod(worst, expansion.kmax)
        raise DegenerateMode(
            f"mode ({k1 + 1}, {k2 + 1}) has |C|={abs_c[worst]} but |R|={abs_r[worst]}"
        )
    usable = abs_c > _C_ZERO_TOL
    if not np.any(usable):
        raise NoUsableModes("no mode with a nonzero oscillatory coefficient")
    ratios = np.zeros_like(abs_c)
    ratios[usable] = (
        abs_r[usable] * np.sqrt(expansion.lam.reshape(-1)[usable]) / abs_c[usable]
    )
    best = int(np.argmax(ratios))
    k1, k2 = divmod(best, expansion.kmax)
    return MuEstimate(
        mu_hat=float(ratios[best]),
        argmax_mode=(k1 + 1, k2 + 1),
        kmax=expansion.kmax,
    )


def estimate_mu(params: KernelParams, data: InitialData, kmax: Optional[int] = None) -> MuEstimate:
    """Empirical amplitude-ratio constant of the data's expansion."""
    return mu_from_expansion(expand(params, data, kmax))

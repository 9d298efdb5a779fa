"""Per-mode exponents of the wave equation with an exponentially decaying memory kernel.

Each Fourier mode sin(k1*x)*sin(k2*y) on the square (0,pi)^2 evolves with three
exponents: a complex-conjugate pair parameterized by omega and a real decaying
root r.  They are the roots of the characteristic cubic

    z^3 + eta*z^2 + lam*z + (eta - beta)*lam = 0,      lam = k1^2 + k2^2,

obtained by differentiating the mode equation x'' + lam*x =
beta*lam * integral of exp(-eta*(t-s)) x(s) ds.  For eta >= 3*beta/2 the cubic
has closed-form roots built from two real cube roots:

    Lam_minus = cbrt(Phi - Psi) / 2,   Lam_plus = cbrt(Phi + Psi) / 2,
    Re omega = sqrt(lam) * (Lam_minus + Lam_plus),
    Im omega = sqrt(lam) * (Lam_minus - Lam_plus) / sqrt(3) + eta/3,
    r        = 2 * sqrt(lam) * (Lam_minus - Lam_plus) / sqrt(3) - eta/3,

with

    Phi = sqrt(1 + (2*eta^2 + 27*beta^2/4 - 9*eta*beta)/lam + eta^3*(eta-beta)/lam^2),
    Psi = eta^3 / (3*sqrt(3*lam^3)) + (eta - 3*beta/2) * sqrt(3)/sqrt(lam).

The module also carries a companion-matrix root finder used as an independent
numeric cross-check, and Vieta residuals as a consistency certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplexRegime, NegativeRadicand

__all__ = [
    "KernelParams",
    "SpectralTriple",
    "laplace_eigenvalue",
    "phi_psi",
    "phi_psi_limiting",
    "characteristic_roots",
    "characteristic_roots_numeric",
    "vieta_residuals",
    "mode_spectrum",
]

SQRT3 = math.sqrt(3.0)

#: Largest kernel amplitude for which the limiting-regime gap analysis applies.
BETA_MAX = 2.0 / SQRT3


@dataclass(frozen=True)
class KernelParams:
    """Memory-kernel parameters of k(t) = beta * exp(-eta*t).

    Requires beta >= 0 and eta >= 3*beta/2 (up to rounding slack); the
    `limiting` flag is True exactly when eta equals 3*beta/2 in floating point.
    """

    beta: float
    eta: float

    def __post_init__(self):
        if not (self.beta >= 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        if not (self.eta >= 0.0 and math.isfinite(self.eta)):
            raise ValueError(f"eta must be finite and >= 0, got {self.eta}")
        # rounding slack so decimal inputs like (0.1, 0.15) stay admissible
        if self.eta < 1.5 * self.beta - 1e-12 * max(1.0, self.eta):
            raise ValueError(
                f"eta must be >= 3*beta/2, got eta={self.eta}, beta={self.beta}"
            )

    @property
    def limiting(self) -> bool:
        return self.eta == 1.5 * self.beta

    @classmethod
    def limiting_regime(cls, beta: float) -> "KernelParams":
        """Parameters on the line eta = 3*beta/2."""
        return cls(beta=beta, eta=1.5 * beta)


@dataclass(frozen=True)
class SpectralTriple:
    """Closed-form exponents of one mode: roots {i*omega, -i*conj(omega), r}."""

    omega: complex
    r: float
    phi: float
    psi: float
    lam_minus: float
    lam_plus: float

    def roots(self) -> tuple[complex, complex, complex]:
        """The three cubic roots, conjugate pair (positive imaginary part first) then r."""
        return 1j * self.omega, -1j * self.omega.conjugate(), complex(self.r)


def laplace_eigenvalue(k1: int, k2: int) -> float:
    """Dirichlet Laplacian eigenvalue k1^2 + k2^2 of the mode (k1, k2)."""
    if k1 < 1 or k2 < 1 or k1 != int(k1) or k2 != int(k2):
        raise ValueError(f"mode indices must be integers >= 1, got ({k1}, {k2})")
    return float(k1 * k1 + k2 * k2)


def phi_psi(params: KernelParams, lam: float):
    """Cube-root arguments (Phi, Psi) of the closed-form roots at eigenvalue lam.

    Works for scalar or ndarray lam.  Raises NegativeRadicand if the Phi
    radicand is negative, which cannot happen for eta >= 3*beta/2 (the radicand
    is then bounded below by 1/4) but guards out-of-regime sweeps.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0.0):
        raise ValueError("lam must be > 0")
    beta, eta = params.beta, params.eta
    mid = 2.0 * eta * eta + 6.75 * beta * beta - 9.0 * eta * beta
    radicand = 1.0 + mid / lam + eta**3 * (eta - beta) / lam**2
    if np.any(radicand < 0.0):
        bad = np.min(lam[np.asarray(radicand < 0.0)]) if radicand.ndim else float(lam)
        raise NegativeRadicand(f"Phi radicand negative at lam={bad}")
    phi = np.sqrt(radicand)
    psi = eta**3 / (3.0 * np.sqrt(3.0 * lam**3)) + (eta - 1.5 * beta) * SQRT3 / np.sqrt(lam)
    if lam.ndim == 0:
        return float(phi), float(psi)
    return phi, psi


def phi_psi_limiting(beta: float, lam: float):
    """Specialized (Phi, Psi) on the line eta = 3*beta/2.

    Must agree with the general form to machine precision; kept as a separate
    evaluation path for consistency checks.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0.0):
        raise ValueError("lam must be > 0")
    radicand = 1.0 - 2.25 * beta * beta / lam + 1.6875 * beta**4 / lam**2
    if np.any(radicand < 0.0):
        raise NegativeRadicand(f"Phi radicand negative at beta={beta}")
    phi = np.sqrt(radicand)
    psi = 0.375 * SQRT3 * beta**3 / lam**1.5
    if lam.ndim == 0:
        return float(phi), float(psi)
    return phi, psi


def characteristic_roots(params: KernelParams, lam: float) -> SpectralTriple:
    """Closed-form spectral triple of one mode.

    Real cube roots are taken with np.cbrt (sign-safe near phi = psi); inputs
    with phi < psi are rejected with ComplexRegime rather than switching to a
    complex branch.
    """
    phi, psi = phi_psi(params, lam)
    if phi < psi:
        raise ComplexRegime(
            f"phi={phi} < psi={psi} at lam={lam}: roots leave the real-cube-root configuration"
        )
    lam_minus = 0.5 * float(np.cbrt(phi - psi))
    lam_plus = 0.5 * float(np.cbrt(phi + psi))
    sq = math.sqrt(lam)
    diff = lam_minus - lam_plus
    re = sq * (lam_minus + lam_plus)
    im = sq * diff / SQRT3 + params.eta / 3.0
    r = 2.0 * sq * diff / SQRT3 - params.eta / 3.0
    return SpectralTriple(
        omega=complex(re, im), r=r, phi=phi, psi=psi,
        lam_minus=lam_minus, lam_plus=lam_plus,
    )


def characteristic_roots_numeric(params: KernelParams, lam: float):
    """The three cubic roots from companion-matrix eigenvalues (no closed forms).

    Canonical order: conjugate pair first (positive imaginary part leading),
    then the root closest to the real axis.  Serves as the independent
    cross-check for `characteristic_roots`.
    """
    if lam <= 0.0:
        raise ValueError("lam must be > 0")
    roots = np.roots([1.0, params.eta, lam, (params.eta - params.beta) * lam])
    real_idx = int(np.argmin(np.abs(roots.imag)))
    pair = sorted((roots[i] for i in range(3) if i != real_idx),
                  key=lambda z: -z.imag)
    return complex(pair[0]), complex(pair[1]), complex(roots[real_idx])


def vieta_residuals(triple: SpectralTriple, params: KernelParams, lam: float):
    """Absolute residuals of the three Vieta identities for the triple's roots.

    Returns (|e1 + eta|, |e2 - lam|, |e3 + (eta-beta)*lam|) where e1, e2, e3
    are the elementary symmetric functions of {i*omega, -i*conj(omega), r}.
    """
    z1, z2, z3 = triple.roots()
    e1 = z1 + z2 + z3
    e2 = z1 * z2 + z1 * z3 + z2 * z3
    e3 = z1 * z2 * z3
    return (
        abs(e1 + params.eta),
        abs(e2 - lam),
        abs(e3 + (params.eta - params.beta) * lam),
    )


def mode_spectrum(params: KernelParams, kmax: int):
    """Vectorized closed-form spectrum of all modes with k1, k2 <= kmax.

    Returns (lam, omega, r) as (kmax, kmax) arrays indexed [k1-1, k2-1].
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    k = np.arange(1, kmax + 1, dtype=float)
    lam = k[:, None] ** 2 + k[None, :] ** 2
    phi, psi = phi_psi(params, lam)
    if np.any(phi < psi):
        k1, k2 = np.unravel_index(int(np.argmax(psi - phi)), lam.shape)
        raise ComplexRegime(f"phi < psi at mode ({k1 + 1}, {k2 + 1})")
    lam_minus = 0.5 * np.cbrt(phi - psi)
    lam_plus = 0.5 * np.cbrt(phi + psi)
    sq = np.sqrt(lam)
    diff = lam_minus - lam_plus
    omega = sq * (lam_minus + lam_plus) + 1j * (sq * diff / SQRT3 + params.eta / 3.0)
    r = 2.0 * sq * diff / SQRT3 - params.eta / 3.0
    return lam, omega, r

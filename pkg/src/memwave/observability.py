"""Boundary observability verdict: trace energy vs weighted coefficient sum.

For the limiting regime eta = 3*beta/2 the boundary trace over
Gamma = (0,pi)x{0} union {0}x(0,pi) reduces to one-dimensional exponential-sum
energies per mode row and column:

    integral_0^T integral_Gamma |du/dnu|^2
        = (pi/2) * sum_{k1} integral_0^T | sum_{k2} k2 * x_{k1 k2}(t) |^2 dt
        + (pi/2) * sum_{k2} integral_0^T | sum_{k1} k1 * x_{k1 k2}(t) |^2 dt,

with x_{k1 k2}(t) = C e^{i omega t} + conj(C) e^{-i conj(omega) t} + R e^{r t}.
Each row/column integral is evaluated exactly by pairwise exponential
integration (no time quadrature in the verdict path).

The verdict compares this trace energy with

    c0 * sum_{k1,k2} (k1^2 + k2^2) |C|^2 (1 + e^{-2 Im omega T}),

using the proof-extracted constants

    S     = mu * max(zeta(2*theta), pi^2/6),
    c0    = (T*pi^2/2) * ( 1/(pi^2 + T^2*beta^2) - 4*(4 + 3*S)/(T^2*gamma^2) ),
    T0    = 2*pi*sqrt( (4 + 3*S) / (gamma^2 - 4*(4 + 3*S)*beta^2) ),
    beta0 = largest b in (0, 2/sqrt(3)] with gamma(b)^2 - 4*(4 + 3*S)*b^2 > 0.

These constants are extracted from a sufficiency proof and may be far from
sharp; runs with T <= T0 are permitted but flagged `below_threshold` rather
than read as counterexamples.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotPositiveWarning, OutOfRange, ThetaOutOfRange
from .gap_analysis import gap_constant
from .ingham import constant_S, pairwise_exponential_energy
from .modes import InitialData, ModeExpansion, expand, mu_from_expansion
from .spectrum import BETA_MAX, KernelParams

__all__ = [
    "ObservabilityConfig",
    "ObservabilityReport",
    "constant_S",
    "thresholds",
    "observability_constant",
    "boundary_trace_energy",
    "weighted_coefficient_sum",
    "verify_observability",
]

PI = math.pi


@dataclass(frozen=True)
class ObservabilityConfig:
    """Inputs of an observability run (limiting regime, eta = 3*beta/2 implied)."""

    beta: float
    T: float
    kmax: int
    mu: Optional[float] = None
    theta: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.beta <= BETA_MAX + 1e-12):
            raise OutOfRange(f"beta must lie in [0, 2/sqrt(3)], got {self.beta}")
        if not self.T > 0.0:
            raise OutOfRange(f"T must be > 0, got {self.T}")
        if self.kmax < 1:
            raise OutOfRange(f"kmax must be >= 1, got {self.kmax}")
        if self.theta <= 0.5:
            raise ThetaOutOfRange(f"theta must be > 1/2, got {self.theta}")
        if self.mu is not None and not self.mu > 0.0:
            raise OutOfRange(f"mu must be > 0 when supplied, got {self.mu}")


@dataclass(frozen=True)
class ObservabilityReport:
    """Both sides of the trace-energy inequality, its constants, and the verdict."""

    lhs: float
    rhs_sum: float
    S: float
    c0: float
    T0: float
    beta0: float
    margin: float
    verdict: bool
    gamma: float
    mu: float
    below_threshold: bool
    infeasible: bool
    beta: float
    T: float
    kmax: int
    theta: float


def thresholds(beta: float, mu: float, theta: float = 1.0):
    """Proof-extracted (beta0, T0) for the given mu and theta.

    beta0 is the unique crossing of gamma(b)^2 - 4*(4+3*S)*b^2 on (0, 2/sqrt(3)]
    (bisection to 1e-10; the function is strictly decreasing).  T0 is evaluated
    at the given beta and is +inf when that beta is already infeasible.
    """
    if not (0.0 <= beta <= BETA_MAX + 1e-12):
        raise OutOfRange(f"beta must lie in [0, 2/sqrt(3)], got {beta}")
    S = constant_S(mu, theta)
    coeff = 4.0 * (4.0 + 3.0 * S)

    def height(b: float) -> float:
        return gap_constant(b).gamma ** 2 - coeff * b * b

    if height(BETA_MAX) > 0.0:
        beta0 = BETA_MAX
    else:
        lo, hi = 0.0, BETA_MAX
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            if height(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        beta0 = 0.5 * (lo + hi)

    denom = gap_constant(beta).gamma ** 2 - coeff * beta * beta
    t0 = 2.0 * PI * math.sqrt((4.0 + 3.0 * S) / denom) if denom > 0.0 else math.inf
    return beta0, t0


def observability_constant(T: float, beta: float, S: float) -> float:
    """The explicit constant c0(T); positive exactly when T exceeds the threshold.

    The value is returned even when nonpositive, flagged with a
    NotPositiveWarning (time horizon at or below the threshold).
    """
    if T <= 0.0:
        raise OutOfRange(f"T must be > 0, got {T}")
    gamma = gap_constant(beta).gamma
    value = (T * PI * PI / 2.0) * (
        1.0 / (PI * PI + T * T * beta * beta)
        - 4.0 * (4.0 + 3.0 * S) / (T * T * gamma * gamma)
    )
    if value <= 0.0:
        warnings.warn(
            f"observability constant is nonpositive ({value}); "
            f"T={T} is at or below the threshold for beta={beta}",
            NotPositiveWarning,
            stacklevel=2,
        )
    return value


def _line_energy(weighted_C: np.ndarray, weighted_R: np.ndarray,
                 omega: np.ndarray, r: np.ndarray, T: float) -> float:
    coeffs = np.concatenate([weighted_C, weighted_C.conj(), weighted_R.astype(complex)])
    exps = np.concatenate([1j * omega, -1j * omega.conj(), r.astype(complex)])
    return pairwise_exponential_energy(coeffs, exps, T)


def boundary_trace_energy(expansion: ModeExpansion, T: float, threads: int = 1) -> float:
    """Exact integral_0^T integral_Gamma |du/dnu|^2 for the truncated series.

    One exponential-sum energy per mode row (side y = 0, weights k2) plus one
    per column (side x = 0, weights k1), combined in index order so repeated
    runs are bit-identical.
    """
    if T <= 0.0:
        raise ValueError("T must be > 0")
    kmax = expansion.kmax
    k = np.arange(1, kmax + 1, dtype=float)

    jobs = []
    for k1 in range(kmax):  # side y = 0: row k1, normal derivative weight k2
        jobs.append((expansion.C[k1, :] * k, expansion.R[k1, :] * k,
                     expansion.omega[k1, :], expansion.r[k1, :]))
    for k2 in range(kmax):  # side x = 0: column k2, weight k1
        jobs.append((expansion.C[:, k2] * k, expansion.R[:, k2] * k,
                     expansion.omega[:, k2], expansion.r[:, k2]))

    def run(job):
        wc, wr, om, rr = job
        return _line_energy(wc, wr, om, rr, T)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(job) for job in jobs]
    return (PI / 2.0) * math.fsum(parts)


def weighted_coefficient_sum(expansion: ModeExpansion, T: float) -> float:
    """sum over modes of (k1^2 + k2^2) |C|^2 (1 + e^{-2 Im omega T})."""
    weights = np.abs(expansion.C) ** 2 * (1.0 + np.exp(-2.0 * expansion.omega.imag * T))
    return float(np.sum(expansion.lam * weights))


def verify_observability(
    config: ObservabilityConfig, data: InitialData, threads: int = 1
) -> ObservabilityReport:
    """Assemble the full verdict for one configuration and data set.

    mu defaults to the empirical estimate from the expansion when not supplied.
    Verdict is True iff margin >= -1e-9*(1 + lhs), T > T0 and beta < beta0;
    an infeasible beta (beta >= beta0) still produces a report, with
    verdict False and T0 = +inf.
    """
    params = KernelParams.limiting_regime(config.beta)
    expansion = expand(params, data, config.kmax)
    mu = config.mu if config.mu is not None else mu_from_expansion(expansion).mu_hat
    S = constant_S(mu, config.theta)
    gamma = gap_constant(config.beta).gamma
    beta0, t0 = thresholds(config.beta, mu, config.theta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotPositiveWarning)
        c0 = observability_constant(config.T, config.beta, S)
    lhs = boundary_trace_energy(expansion, config.T, threads=threads)
    rhs_sum = weighted_coefficient_sum(expansion, config.T)
    margin = lhs - c0 * rhs_sum
    below_threshold = not (config.T > t0)
    infeasible = config.beta >= beta0
    verdict = (
        margin >= -1e-9 * (1.0 + lhs) and not below_threshold and not infeasible
    )
    return ObservabilityReport(
        lhs=lhs,
        rhs_sum=rhs_sum,
        S=S,
        c0=c0,
        T0=t0,
        beta0=beta0,
        margin=margin,
        verdict=verdict,
        gamma=gamma,
        mu=mu,
        below_threshold=below_threshold,
        infeasible=infeasible,
        beta=config.beta,
        T=config.T,
        kmax=config.kmax,
        theta=config.theta,
    )

"""Weighted lower bounds for finite sums of complex exponentials.

The machinery rests on the half-sine window k(t) = sin(pi*t/T) on [0, T] and
its transform kernel

    K(u) = T*pi / (pi^2 - T^2*u^2),        u complex,

with the moment identity

    integral k(t) * Re(z * exp(i*u*t)) dt = Re(z * (1 + exp(i*u*T)) * K(u))

and the decay bound |K(u)| <= 4*pi / (T*gamma^2*(4*j^2 - 1)) valid whenever
gamma > 2*pi/T and |u| >= gamma*j.

For a family of exponents {omega_n, r_n} with coefficients {C_n, R_n}
satisfying the separation, growth, decay and amplitude hypotheses checked by
`check_hypotheses`, the time-average energy of

    F(t) = sum_n ( C_n e^{i omega_n t} + conj(C_n) e^{-i conj(omega_n) t} + R_n e^{r_n t} )

admits the explicit lower bound evaluated by `energy_lower_bound`:

    integral_0^T |F(t)|^2 dt
        >= 2*T*pi * sum_{n=tau} ( 1/(pi^2 + 4*T^2*(Im omega_n)^2) - 2*S/(T^2*gamma^2) )
                     * |C_n|^2 * (1 + e^{-2*Im omega_n*T})
         - (8*pi/(T*gamma^2)) * (1 + S/2) * sum_{n=1} |C_n|^2 * (1 + e^{-2*Im omega_n*T}),

    S = mu * max( sum_n n^{-2*theta}, pi^2/6 ).

The left side is computed exactly by expanding into pairwise products of
exponentials and integrating each in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.special import zeta

from .errors import (
    AuditFailure,
    HypothesisError,
    PoleError,
    ThetaOutOfRange,
)

__all__ = [
    "ExponentFamily",
    "InghamBoundReport",
    "Violation",
    "sine_window",
    "window_kernel",
    "windowed_moment",
    "kernel_decay_bound",
    "exp_integral",
    "pairwise_exponential_energy",
    "energy_integral",
    "constant_S",
    "check_hypotheses",
    "energy_lower_bound",
]

PI = math.pi

#: |s|*T below which the exponential integral switches to its Taylor series.
_SERIES_CUTOFF = 1e-6

#: Rounding slack used when checking the exact family hypotheses.
_HYP_SLACK = 1e-12


@dataclass(frozen=True)
class ExponentFamily:
    """A finite family of exponents and coefficients, with its gap metadata.

    Plain container: the separation/growth/decay/amplitude hypotheses are NOT
    enforced at construction (so violating families can be diagnosed); use
    `check_hypotheses`.
    """

    omegas: np.ndarray
    rs: np.ndarray
    Cs: np.ndarray
    Rs: np.ndarray
    gamma: float
    tau: int
    theta: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "omegas", np.asarray(self.omegas, dtype=complex))
        object.__setattr__(self, "rs", np.asarray(self.rs, dtype=float))
        object.__setattr__(self, "Cs", np.asarray(self.Cs, dtype=complex))
        object.__setattr__(self, "Rs", np.asarray(self.Rs, dtype=float))
        n = len(self.omegas)
        if not (len(self.rs) == len(self.Cs) == len(self.Rs) == n):
            raise ValueError("omegas, rs, Cs, Rs must have equal lengths")
        if not 1 <= self.tau <= max(n, 1):
            raise ValueError(f"tau must lie in [1, {n}], got {self.tau}")

    def __len__(self) -> int:
        return len(self.omegas)


@dataclass(frozen=True)
class InghamBoundReport:
    """Both sides of the energy lower bound and their margin."""

    lhs: float
    rhs: float
    S: float
    margin: float


@dataclass(frozen=True)
class Violation:
    """One failed family hypothesis, naming the hypothesis and the indices involved."""

    hypothesis: str
    indices: Tuple[int, ...]
    detail: str = field(default="")

    def __str__(self) -> str:
        where = f" at n={self.indices}" if self.indices else ""
        return f"{self.hypothesis}{where}: {self.detail}"


def sine_window(t, T: float):
    """Half-sine window sin(pi*t/T) on [0, T], zero elsewhere; values in [0, 1]."""
    if T <= 0.0:
        raise ValueError("T must be > 0")
    t = np.asarray(t, dtype=float)
    inside = (t >= 0.0) & (t <= T)
    out = np.where(inside, np.sin(PI * np.clip(t, 0.0, T) / T), 0.0)
    return float(out) if out.ndim == 0 else out


def window_kernel(u: complex, T: float) -> complex:
    """Window transform kernel K(u) = T*pi / (pi^2 - T^2*u^2).

    Satisfies conj(K(u)) = K(conj(u)) and |K(u)| = |K(conj(u))|.  Raises
    PoleError within 1e-14*pi^2 of the poles u = +-pi/T.
    """
    if T <= 0.0:
        raise ValueError("T must be > 0")
    u = complex(u)
    denom = PI * PI - T * T * u * u
    if abs(denom) < 1e-14 * PI * PI:
        raise PoleError(f"kernel pole at u={u} for T={T}")
    return T * PI / denom


def windowed_moment(z: complex, u: complex, T: float) -> float:
    """Closed form of the windowed moment: Re(z * (1 + exp(i*u*T)) * K(u))."""
    k = window_kernel(u, T)
    return (complex(z) * (1.0 + np.exp(1j * complex(u) * T)) * k).real


def kernel_decay_bound(u: complex, j: int, gamma: float, T: float) -> Tuple[float, float]:
    """(|K(u)|, 4*pi/(T*gamma^2*(4*j^2-1))), certifying the first <= the second.

    Requires gamma > 2*pi/T and |u| >= gamma*j.
    """
    if j < 1:
        raise ValueError("j must be a positive integer")
    if gamma <= 2.0 * PI / T:
        raise HypothesisError(
            [Violation("window", (), f"gamma={gamma} <= 2*pi/T={2.0 * PI / T}")]
        )
    if abs(complex(u)) < gamma * j:
        raise HypothesisError(
            [Violation("growth", (j,), f"|u|={abs(complex(u))} < gamma*j={gamma * j}")]
        )
    value = abs(window_kernel(u, T))
    bound = 4.0 * PI / (T * gamma * gamma * (4.0 * j * j - 1.0))
    if value > bound * (1.0 + 1e-12):
        raise AuditFailure(
            f"kernel decay bound failed: |K(u)|={value} > {bound}", datum=(u, j, gamma, T)
        )
    return value, bound


def exp_integral(s, T: float):
    """Exact primitive integral_0^T e^{s*t} dt = (e^{s*T} - 1)/s, with E(0) = T.

    Switches to a 6-term Taylor series for |s|*T < 1e-6 to avoid cancellation.
    Accepts scalars or arrays of complex s.
    """
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.reshape(-1)
    x = flat * T
    out = np.empty(flat.shape, dtype=complex)
    small = np.abs(x) < _SERIES_CUTOFF
    if np.any(~small):
        sb = flat[~small]
        out[~small] = np.expm1(sb * T) / sb
    if np.any(small):
        xs = x[small]
        out[small] = T * (
            1.0 + xs / 2.0 + xs**2 / 6.0 + xs**3 / 24.0 + xs**4 / 120.0 + xs**5 / 720.0
        )
    out = out.reshape(s_arr.shape)
    return complex(out) if out.ndim == 0 else out


def pairwise_exponential_energy(coeffs, exps, T: float) -> float:
    """Exact integral_0^T |sum_a z_a e^{s_a t}|^2 dt by pairwise expansion.

    The result is real and nonnegative whenever the term list represents a
    real signal; tiny negative rounding residue is clamped to zero.
    """
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    exps = np.asarray(exps, dtype=complex).reshape(-1)
    if coeffs.shape != exps.shape:
        raise ValueError("coeffs and exps must have matching lengths")
    if coeffs.size == 0:
        return 0.0
    products = coeffs[:, None] * coeffs.conj()[None, :]
    pair_exps = exps[:, None] + exps.conj()[None, :]
    integrals = exp_integral(pair_exps, T)
    total = complex(np.sum(products * integrals))
    budget = float(np.sum(np.abs(products) * np.abs(integrals)))
    if total.real < 0.0:
        if total.real < -1e-9 * (budget + 1.0):
            raise ArithmeticError(
                f"energy integral came out negative beyond rounding: {total.real}"
            )
        return 0.0
    return total.real


def _family_terms(family: ExponentFamily):
    coeffs = np.concatenate([family.Cs, family.Cs.conj(), family.Rs.astype(complex)])
    exps = np.concatenate(
        [1j * family.omegas, -1j * family.omegas.conj(), family.rs.astype(complex)]
    )
    return coeffs, exps


def energy_integral(family: ExponentFamily, T: float) -> float:
    """Exact integral_0^T |F(t)|^2 dt for the family's signal F."""
    if len(family) == 0:
        raise ValueError("family must be nonempty")
    if T <= 0.0:
        raise ValueError("T must be > 0")
    coeffs, exps = _family_terms(family)
    return pairwise_exponential_energy(coeffs, exps, T)


def constant_S(mu: float, theta: float) -> float:
    """S = mu * max( zeta(2*theta), pi^2/6 ); exactly mu*pi^2/6 when theta = 1.

    Requires theta > 1/2 and mu >= 0 (the mu -> 0 limit gives S = 0).
    """
    if theta <= 0.5:
        raise ThetaOutOfRange(f"theta must be > 1/2, got {theta}")
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if theta == 1.0:
        tail_sum = PI * PI / 6.0
    else:
        tail_sum = float(zeta(2.0 * theta))
    return mu * max(tail_sum, PI * PI / 6.0)


def check_hypotheses(family: ExponentFamily, T: float) -> list:
    """Diagnose the four family hypotheses plus the window condition gamma > 2*pi/T.

    Returns an empty list iff all hold (with 1e-12 rounding slack); otherwise
    one Violation per failure, naming the hypothesis and the indices involved.
    """
    violations = []
    n = len(family)
    gamma, tau = family.gamma, family.tau
    if T <= 0.0:
        raise ValueError("T must be > 0")
    if gamma <= 2.0 * PI / T:
        violations.append(
            Violation("window", (), f"gamma={gamma} <= 2*pi/T={2.0 * PI / T}")
        )
    if family.theta <= 0.5:
        violations.append(Violation("amplitude", (), f"theta={family.theta} <= 1/2"))
    if family.mu <= 0.0 and np.any(family.Rs != 0.0):
        violations.append(Violation("amplitude", (), f"mu={family.mu} <= 0"))

    re = family.omegas.real
    im = family.omegas.imag
    idx = np.arange(1, n + 1)

    for a in range(n):
        for b in range(a + 1, n):
            if max(a + 1, b + 1) < tau:
                continue
            required = gamma * (b - a)
            got = abs(re[a] - re[b])
            if got < required - _HYP_SLACK * max(1.0, required):
                violations.append(
                    Violation(
                        "separation",
                        (a + 1, b + 1),
                        f"|Re omega_{a + 1} - Re omega_{b + 1}|={got} < gamma*|n-m|={required}",
                    )
                )
    growth_bad = re < gamma * idx - _HYP_SLACK * np.maximum(1.0, gamma * idx)
    for a in np.nonzero(growth_bad)[0]:
        violations.append(
            Violation("growth", (int(a) + 1,), f"Re omega={re[a]} < gamma*n={gamma * (a + 1)}")
        )
    decay_bad = family.rs > -im + _HYP_SLACK * np.maximum(1.0, np.abs(im))
    for a in np.nonzero(decay_bad)[0]:
        violations.append(
            Violation("root-decay", (int(a) + 1,), f"r={family.rs[a]} > -Im omega={-im[a]}")
        )
    if family.theta > 0.5 and family.mu > 0.0:
        allowed = family.mu * np.abs(family.Cs) / idx**family.theta
        amp_bad = np.abs(family.Rs) > allowed + _HYP_SLACK * np.maximum(1.0, allowed)
        for a in np.nonzero(amp_bad)[0]:
            violations.append(
                Violation(
                    "amplitude",
                    (int(a) + 1,),
                    f"|R|={abs(family.Rs[a])} > mu*|C|/n^theta={allowed[a]}",
                )
            )
    return violations


def energy_lower_bound(family: ExponentFamily, T: float, check: bool = True) -> InghamBoundReport:
    """Evaluate the explicit lower bound and compare it with the exact energy.

    With check=True (default) the family hypotheses are verified first
    (HypothesisError listing every violation) and the inequality
    lhs >= rhs - 1e-9*(1 + |rhs|) is certified (AuditFailure otherwise).
    """
    if check:
        violations = check_hypotheses(family, T)
        if violations:
            raise HypothesisError(violations)
    S = constant_S(family.mu, family.theta)
    gamma, tau = family.gamma, family.tau
    im = family.omegas.imag
    weights = np.abs(family.Cs) ** 2 * (1.0 + np.exp(-2.0 * im * T))
    head = weights[tau - 1:]
    im_head = im[tau - 1:]
    main = 2.0 * T * PI * float(
        np.sum((1.0 / (PI * PI + 4.0 * T * T * im_head**2) - 2.0 * S / (T * T * gamma * gamma)) * head)
    )
    sub = (8.0 * PI / (T * gamma * gamma)) * (1.0 + S / 2.0) * float(np.sum(weights))
    rhs = main - sub
    lhs = energy_integral(family, T)
    margin = lhs - rhs
    if check and margin < -1e-9 * (1.0 + abs(rhs)):
        raise AuditFailure(
            f"energy lower bound failed: lhs={lhs} < rhs={rhs}", datum=(lhs, rhs)
        )
    return InghamBoundReport(lhs=lhs, rhs=rhs, S=S, margin=margin)

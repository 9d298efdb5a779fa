"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the closed forms under test:
quadrature oracles use adaptive Gauss-Kronrod refinement, the mode ODE oracle
is a high-order Runge-Kutta integration of the third-order amplitude equation,
and family generation enforces the exponential-sum hypotheses by construction.
"""

import math

import numpy as np
from scipy.integrate import quad, solve_ivp

from memwave import ExponentFamily


def random_admissible_family(rng, n=None, T=None, real_frequencies=False,
                             force_tau_one=False, window_factor=1.1):
    """Random family satisfying all separated-exponent hypotheses.

    Real frequencies advance by a fresh increment of at least gamma per index,
    which enforces both the pairwise separation and the linear growth bound
    (a naive per-index jitter of gamma*n does not).  Decay exponents sit below
    -Im omega, and the decaying amplitudes stay within mu*|C|/n.

    gamma sits window_factor..window_factor+1 times above the 2*pi/T window
    bound; the lower-bound right side is positive only once that multiple
    clears roughly sqrt(1 + S/2), so positive-rhs batches need a factor >= 2.5.
    """
    n = int(rng.integers(1, 13)) if n is None else n
    T = float(2.0 + 8.0 * rng.random()) if T is None else T
    gamma = 2.0 * math.pi / T * (window_factor + rng.random())
    steps = gamma * (1.0 + 0.2 * rng.random(n))
    re = np.cumsum(steps)
    im = np.zeros(n) if real_frequencies else 0.4 * rng.random(n)
    cs = 0.5 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    mu = 0.5 + rng.random()
    theta = 1.0
    idx = np.arange(1, n + 1)
    amps = (2.0 * rng.random(n) - 1.0) * mu * np.abs(cs) / idx**theta
    rs = -im - 0.5 * rng.random(n)
    tau = 1 if force_tau_one else int(rng.integers(1, n + 1))
    family = ExponentFamily(
        omegas=re + 1j * im, rs=rs, Cs=cs, Rs=amps,
        gamma=gamma, tau=tau, theta=theta, mu=mu,
    )
    return family, T


def family_signal(family):
    """The real signal F(t) of a family, as a plain callable."""

    def f(t):
        osc = 2.0 * np.real(family.Cs * np.exp(1j * family.omegas * t))
        dec = family.Rs * np.exp(family.rs * t)
        return float(np.sum(osc) + np.sum(dec))

    return f


def quad_energy(family, T, epsabs=1e-11):
    """Adaptive-quadrature oracle for the time-average energy of a family."""
    f = family_signal(family)
    value, _ = quad(lambda t: f(t) ** 2, 0.0, T,
                    epsabs=epsabs, epsrel=1e-11, limit=2000)
    return value


def quad_windowed_moment(z, u, T):
    """Adaptive-quadrature oracle for the half-sine windowed moment."""
    import warnings
    from scipy.integrate import IntegrationWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, _ = quad(
            lambda t: math.sin(math.pi * t / T) * (z * np.exp(1j * u * t)).real,
            0.0, T, epsabs=1e-12, epsrel=1e-12, limit=3000,
        )
    return value


def mode_ode_oracle(beta, eta, lam, a, b, ts):
    """High-accuracy integration of x''' + eta x'' + lam x' + lam(eta-beta) x = 0.

    Initial state (a, b, -lam*a); returns x at the requested times.
    """
    def rhs(_t, y):
        return [y[1], y[2], -(eta * y[2] + lam * y[1] + lam * (eta - beta) * y[0])]

    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    sol = solve_ivp(rhs, (0.0, float(np.max(ts))), [a, b, -lam * a],
                    t_eval=ts, method="DOP853", rtol=1e-12, atol=1e-14)
    assert sol.success
    return sol.y[0]


def sine_polynomial_on_grid(coeffs, m):
    """Evaluate sum_k coeffs[k1-1,k2-1] sin(k1 x) sin(k2 y) on the uniform interior grid."""
    coeffs = np.asarray(coeffs, dtype=float)
    k = np.arange(1, coeffs.shape[0] + 1, dtype=float)
    x = np.pi / (m + 1) * np.arange(1, m + 1)
    sines = np.sin(np.outer(k, x))
    return sines.T @ coeffs @ sines

"""Jacobi theta functions Theta_2 and Theta_3.

Conventions used throughout the package::

    Theta3(nu | tau) = sum_{n in Z} exp(i*pi*tau*n^2 + 2*i*pi*nu*n)
    Theta2(nu | tau) = sum_{n in Z} exp(i*pi*tau*(n+1/2)^2 + 2*i*pi*nu*(n+1/2))

with nome q = exp(i*pi*tau), |q| < 1 (requires Im(tau) > 0).  Theta2 is
evaluated through the shift relation

    Theta2(nu | tau) = exp(i*pi*(tau/4 + nu)) * Theta3(nu + tau/2 | tau)

and the half-integer lattice sum is kept as an independent cross-check.
The modular transform

    Theta3(nu | tau) = exp(-i*pi*nu^2/tau) * sqrt(i/tau) * Theta3(-nu/tau | -1/tau)

exchanges slowly and rapidly convergent regimes; the prefactor reduces to
sqrt(pi) at tau = i*pi.

All sums are truncated symmetrically with a certified Gaussian tail bound,
so every returned value carries an absolute error below the policy
tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DomainError, PrecisionError

__all__ = [
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "theta3",
    "theta2",
    "theta2_series",
    "theta3_modular",
    "theta3_logderiv",
]


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation control for the lattice sums.

    ``target_tol`` is an absolute bound on the neglected tail; summation
    stops only once the Gaussian-decay bound for the remaining terms is
    below it.  ``max_terms`` caps the one-sided index range.
    """

    target_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.target_tol > 0.0:
            raise DomainError("target_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")


DEFAULT_POLICY = SeriesPolicy()


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0.0:
        raise DomainError(f"Im(tau) must be positive for convergence, got tau={tau}")
    return tau


def _truncation_order(nu: complex, tau: complex, policy: SeriesPolicy, shift: float = 0.0) -> int:
    """Smallest one-sided order N whose certified tail bound is < target_tol.

    Terms at index n (plus lattice ``shift``) have modulus
    exp(-pi*Im(tau)*(n+shift)^2 + 2*pi*|Im(nu)|*|n+shift|); for m >= N the
    two-sided tail is below

        2 * exp(-pi*b*m^2 + 2*pi*a*m) / (1 - rho),
        rho = exp(-pi*b*(2*m+1) + 2*pi*a)

    once the term ratio rho is < 1.
    """
    b = tau.imag
    a = abs(complex(nu).imag)
    bound = math.inf
    for n in range(1, policy.max_terms + 1):
        m = n + shift
        rho = math.exp(-math.pi * b * (2.0 * m + 1.0) + 2.0 * math.pi * a)
        if rho >= 1.0:
            continue
        log_mag = -math.pi * b * m * m + 2.0 * math.pi * a * m
        if log_mag > 700.0:  # keep exp() finite; bound cannot pass yet
            continue
        bound = 2.0 * math.exp(log_mag) / (1.0 - rho)
        if bound < policy.target_tol:
            return n
    raise PrecisionError(
        f"lattice sum did not reach tol={policy.target_tol:g} within "
        f"{policy.max_terms} terms (achieved bound {bound:g})",
        achieved=bound,
    )


def theta3(nu: complex, tau: complex, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Theta3(nu|tau) by direct two-sided summation over the integer lattice."""
    tau = _check_tau(tau)
    nu = complex(nu)
    n_max = _truncation_order(nu, tau, policy)
    n = np.arange(-n_max, n_max + 1, dtype=float)
    expo = 1j * math.pi * tau * n * n + 2j * math.pi * nu * n
    return complex(np.exp(expo).sum())


def theta2_series(nu: complex, tau: complex, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Theta2(nu|tau) by direct summation over the half-integer lattice.

    Independent of :func:`theta2`; kept as the oracle for the shift relation.
    """
    tau = _check_tau(tau)
    nu = complex(nu)
    n_max = _truncation_order(nu, tau, policy, shift=0.5)
    n = np.arange(-n_max, n_max, dtype=float) + 0.5
    expo = 1j * math.pi * tau * n * n + 2j * math.pi * nu * n
    return complex(np.exp(expo).sum())


def theta2(nu: complex, tau: complex, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Theta2(nu|tau) via the half-period shift of Theta3."""
    tau = _check_tau(tau)
    nu = complex(nu)
    prefactor = cmath.exp(1j * math.pi * (tau / 4.0 + nu))
    return prefactor * theta3(nu + tau / 2.0, tau, policy)


def theta3_modular(nu: complex, tau: complex, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Theta3(nu|tau) evaluated through the tau -> -1/tau transform.

    Fast path when the natural nome exp(i*pi*tau) decays slowly (small
    Im(tau)): the partner lattice parameter -1/tau has Im = Im(tau)/|tau|^2.
    """
    tau = _check_tau(tau)
    nu = complex(nu)
    tau_dual = -1.0 / tau
    nu_dual = -nu / tau
    prefactor = cmath.exp(-1j * math.pi * nu * nu / tau) * cmath.sqrt(1j / tau)
    return prefactor * theta3(nu_dual, tau_dual, policy)


def theta3_logderiv(nu: float, tau: complex, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """(1/Theta3) * dTheta3/dnu at real nu, from the triple-product expansion.

    d/dnu log Theta3(nu|tau)
        = 2*pi*i * sum_{n>=1} [ w_n/(1+w_n) - v_n/(1+v_n) ],
        w_n = q^{2n-1} e^{+2*pi*i*nu},  v_n = q^{2n-1} e^{-2*pi*i*nu}

    which for real nu and purely imaginary tau collapses to the real series
    -4*pi*sin(2*pi*nu) * sum_{n>=1} q^{2n-1} / |1 + q^{2n-1} e^{2*pi*i*nu}|^2.
    """
    tau = _check_tau(tau)
    nu = float(nu)
    q = cmath.exp(1j * math.pi * tau)
    absq = abs(q)
    if absq >= 1.0:
        raise DomainError("nome magnitude must be < 1")
    th3 = theta3(nu, tau, policy)
    if abs(th3) < 1e3 * policy.target_tol:
        raise DegeneracyError(f"Theta3({nu}|{tau}) vanishes within tolerance; log-derivative undefined")

    phase = cmath.exp(2j * math.pi * nu)
    total = 0.0 + 0.0j
    qodd = q
    for n in range(1, policy.max_terms + 1):
        w = qodd * phase
        v = qodd / phase
        dw = 1.0 + w
        dv = 1.0 + v
        if min(abs(dw), abs(dv)) < 1e-12:
            raise DegeneracyError("triple-product denominator vanished (zero of Theta3)")
        total += w / dw - v / dv
        # remaining terms are bounded by a geometric series in |q|^2
        tail = 4.0 * math.pi * abs(qodd) * absq * absq / (1.0 - absq * absq) / max(1.0 - absq, 1e-300)
        if tail < policy.target_tol:
            break
        qodd *= q * q
    else:
        raise PrecisionError("log-derivative series did not converge", achieved=tail)

    value = 2j * math.pi * total
    return float(value.real)

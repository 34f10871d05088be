"""Torus coherent states, the physical factorization, and constraint projectors.

The torus state factorizes over two independent level lattices,

    |T> = sum_{j,m} a_j b_m |j, m>,
    a_j = xi_ms^{-j} exp(-j^2/2),   b_m = xi_aux^{-m} exp(-m^2/2),

where xi_ms is the strip label (z_sign = -1 flavor, circling with phase i)
and xi_aux collects the leftover toroidal data with its *own* imaginary
unit k (i^2 = k^2 = -1, i and k never multiplied together).  The two label
planes are therefore kept as two separate complex numbers / coefficient
arrays and only combined through moduli.

The physical reduction torus -> strip contracts states across the m = 0
slice (the only level where the auxiliary k-phase factor is exactly 1):

    <<a|b>> = <T(a)| P |T(b)> / normalizer,   P = sum_j |j,0><j,0|

which reproduces the strip overlap series sum_j e^{(l'_a+l'_b)j}
e^{i(phi_a-phi_b)j} e^{-j^2} and degenerates to the circle (boson) overlap
as r -> 0.  A variant with the relative phase factored out globally
(independent of j) is kept for comparison; the two differ whenever
phi_a != phi_b mod 2*pi.

The universal constraint projector depends only on the constraint window:

    E(x; delta) = integral dlam exp(-i*lam*x^2) * sin(delta^2*lam)/(pi*lam),
    x = theta - (pi+phi)/2

a Dirichlet integral evaluating to the indicator of x^2 < delta^2 (1/2 on
the boundary).  Both the closed indicator and an honest truncated
quadrature of the oscillatory integral are exposed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DegeneracyError, DomainError
from .geometry import constraint_theta, label_center
from .states import FockVector, StateLabel, default_j_max, fiducial, level_grid

__all__ = [
    "ProjectionSpec",
    "TorusFock",
    "torus_labels",
    "build_torus_cs",
    "project_overlap",
    "projected_overlap_series",
    "universal_projector",
    "project_mobius_to_circle",
]


@dataclass(frozen=True)
class ProjectionSpec:
    """Constraint data: angles and the window half-width delta."""

    theta: float
    phi: float
    delta: float

    def __post_init__(self):
        if not self.delta > 0.0:
            raise DomainError("delta must be positive")

    @property
    def argument(self) -> float:
        """Signed constraint defect theta - (pi + phi)/2."""
        return self.theta - constraint_theta(self.phi)


def torus_labels(l: float, theta: float, phi: float, r: float) -> tuple[complex, complex]:
    """Labels (xi_ms, xi_aux) of the factorized torus state.

    xi_ms lives in the ordinary complex plane (unit i); xi_aux is returned
    as a second complex number whose imaginary unit represents the
    independent k.  On the constraint theta = (phi+pi)/2 the theta-dependent
    factors of xi_aux collapse and only exp(-2*pi*sin(phi)^2 + k*theta)
    survives.
    """
    if not (0.0 <= r < 1.0):
        raise DomainError(f"need 0 <= r < 1, got r={r}")
    half = 0.5 * phi
    radial = 1.0 + r * math.cos(half)
    xi_ms = cmath.exp(-(l - r * math.sin(half)) + math.log(radial) + 1j * phi)
    aux_exponent = (
        -2.0 * math.pi * math.sin(phi) ** 2
        - r * (math.cos(theta) + math.sin(half))
        + math.log((1.0 + r * math.sin(theta)) / radial)
    )
    xi_aux = cmath.exp(aux_exponent + 1j * theta)
    return xi_ms, xi_aux


@dataclass(frozen=True)
class TorusFock:
    """Factorized torus coefficients: strip plane a_j, auxiliary plane b_m."""

    j: np.ndarray
    m: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tail_bound: float = 0.0

    def modulus_grid(self) -> np.ndarray:
        """|c_{j,m}| as an outer product; rank 1 by construction, so the
        second singular value of this grid is a separability diagnostic."""
        return np.outer(np.abs(self.a), np.abs(self.b))

    def m_slice(self, m_value: int = 0) -> np.ndarray:
        """Strip-plane coefficients on the physical auxiliary level m = 0,
        the only level whose k-phase factor is exactly 1 (other slices would
        mix the two label planes)."""
        if m_value != 0:
            raise DomainError("only the m = 0 slice is physical")
        idx = np.nonzero(self.m == 0)[0]
        if idx.size != 1:
            raise DomainError("auxiliary level m=0 not on the grid")
        scale = self.b[idx[0]]
        if abs(scale) < 1e-300:
            raise DegeneracyError("auxiliary coefficient vanished")
        return self.a * scale

    def j_marginal(self) -> FockVector:
        """FockVector of the strip sector (m = 0 column)."""
        offset = float(self.j[0] % 1.0)
        return FockVector(offset=offset, j=self.j.copy(), c=self.m_slice(0).copy(),
                          tail_bound=self.tail_bound)


def build_torus_cs(
    l: float,
    theta: float,
    phi: float,
    r: float,
    j_max: float | None = None,
    s: float = 0.0,
) -> TorusFock:
    """Factorized torus coherent state at the given labels."""
    xi_ms, xi_aux = torus_labels(l, theta, phi, r)
    center_ms = -math.log(abs(xi_ms))
    center_aux = -math.log(abs(xi_aux))
    if j_max is None:
        j_max = max(default_j_max(center_ms), default_j_max(center_aux))
    j = level_grid(j_max, s)
    m = level_grid(j_max, 0.0)
    a = np.exp(center_ms * j - 1j * phi * j - 0.5 * j * j)
    b = np.exp(center_aux * m - 1j * theta * m - 0.5 * m * m)
    gap = j_max - max(abs(center_ms), abs(center_aux))
    tail = math.exp(-gap * gap) if gap > 0.0 else math.inf
    return TorusFock(j=j, m=m.astype(int), a=a, b=b, tail_bound=tail)


def _strip_center(label: StateLabel) -> float:
    # the torus factorization carries the z_sign = -1 flavor of the strip label
    return label_center(label.l, label.phi, label.r, z_sign=-1)


def project_overlap(a: StateLabel, b: StateLabel) -> complex:
    """Overlap of two strip states computed through the torus reduction.

    Both labels are lifted to factorized torus states (at the constraint
    angle), contracted across the physical m = 0 slice, and normalized by
    the same contraction of the fiducial torus state against the fiducial
    strip norm (identically 1; the quotient is kept as a guard against a
    degenerate truncation).
    """
    if a.s != b.s or a.r != b.r:
        raise DomainError("projected overlap requires matching (r, s)")
    j_max = max(default_j_max(_strip_center(a)), default_j_max(_strip_center(b))) + 2
    ta = build_torus_cs(a.l, constraint_theta(a.phi), a.phi, a.r, j_max=j_max, s=a.s)
    tb = build_torus_cs(b.l, constraint_theta(b.phi), b.phi, b.r, j_max=j_max, s=b.s)
    numerator = complex(np.vdot(ta.m_slice(0), tb.m_slice(0)))

    fid = fiducial(j_max=j_max, s=a.s)
    t0 = build_torus_cs(0.0, constraint_theta(0.0), 0.0, 0.0, j_max=j_max, s=a.s)
    denominator = float(np.vdot(t0.m_slice(0), t0.m_slice(0)).real) / fid.norm2()
    if abs(denominator) < 1e-12:
        raise DegeneracyError("projection normalizer vanished")
    return numerator / denominator


def projected_overlap_series(a: StateLabel, b: StateLabel,
                             phase_per_level: bool = True) -> complex:
    """Closed series for the projected overlap.

    phase_per_level=True:  sum_j e^{(l'_a+l'_b)j} e^{i(phi_a-phi_b)j} e^{-j^2}
    (the term-by-term contraction); False: the relative phase multiplies the
    sum globally instead, sum_j e^{(l'_a+l'_b)j} e^{-j^2} * e^{-i(phi_a-phi_b)}.
    The two variants agree only when phi_a = phi_b mod 2*pi.
    """
    if a.s != b.s or a.r != b.r:
        raise DomainError("projected overlap requires matching (r, s)")
    ca = _strip_center(a)
    cb = _strip_center(b)
    j = level_grid(max(default_j_max(ca), default_j_max(cb)) + 2, a.s)
    dphi = a.phi - b.phi
    if phase_per_level:
        return complex(np.exp((ca + cb) * j + 1j * dphi * j - j * j).sum())
    return complex(np.exp((ca + cb) * j - j * j).sum() * cmath.exp(-1j * dphi))


# ---------------------------------------------------------------------------
# Universal constraint projector
# ---------------------------------------------------------------------------

def _si_numeric(T: float, chunk: float = 50.0 * math.pi) -> float:
    """integral_0^T sin(u)/u du by chunked adaptive quadrature."""
    if T <= 0.0:
        return -_si_numeric(-T, chunk) if T < 0.0 else 0.0
    total = 0.0
    lo = 0.0
    while lo < T:
        hi = min(lo + chunk, T)
        val, _ = quad(lambda u: math.sin(u) / u if u != 0.0 else 1.0, lo, hi, limit=200)
        total += val
        lo = hi
    return total


def universal_projector(
    spec: ProjectionSpec,
    method: str = "indicator",
    tail_tol: float = 1e-4,
    boundary_tol: float = 1e-9,
) -> float:
    """Constraint-window projector value in [0, 1].

    method="indicator"   closed Dirichlet-integral value: 1 inside the
                         window x^2 < delta^2, 0 outside, 1/2 on the
                         boundary (boundary proximity measured by
                         ``boundary_tol``);
    method="quadrature"  truncated oscillatory integral
                         (1/pi) * [Si((a+x2)*L) + Si((a-x2)*L)] with the
                         cutoff L chosen so the certified tail is below
                         ``tail_tol``.
    """
    x2 = spec.argument ** 2
    a = spec.delta ** 2
    if method == "indicator":
        if abs(x2 - a) <= boundary_tol * max(1.0, a):
            return 0.5
        return 1.0 if x2 < a else 0.0
    if method == "quadrature":
        # the lam integral splits into two sine integrals,
        #   E = (1/pi) * [Si((a+x2)*L) + Si((a-x2)*L)],
        # truncated at a single L with |integral_T^inf sin(u)/u du| <= 2/T
        # certifying each tail below tail_tol/4.  Inside the boundary layer
        # |a - x2| << a + x2 the range is capped (a vanishing coefficient
        # would demand an unbounded range); there the smoothed value tends
        # to the boundary limit 1/2 by construction.
        c_plus = a + x2
        c_minus = a - x2
        coeffs = [c for c in (c_plus, c_minus) if c != 0.0]
        if not coeffs:
            raise DomainError("degenerate window: delta and the defect both vanish")
        T = 8.0 / tail_tol
        floor = max(min(abs(c) for c in coeffs), c_plus / 16.0)
        lam_max = T / floor
        total = 0.0
        for coeff in coeffs:
            total += math.copysign(_si_numeric(abs(coeff) * lam_max), coeff)
        value = total / math.pi
        return float(min(max(value, 0.0), 1.0))
    raise ValueError(f"unknown method {method!r}")


def project_mobius_to_circle(v: FockVector) -> FockVector:
    """Relabel a strip coherent state onto the circle (integer basis).

    The label (center, phase mod 2*pi) is read off adjacent coefficient
    ratios log(c_{j+1}/c_j) = center - i*phase - (j + 1/2) and rebuilt on
    the integer lattice: the double-cover information is dropped, the
    boson-sector state is returned.  Idempotent.
    """
    if v.j.size < 2:
        raise DomainError("need at least two levels to read off the label")
    k = int(np.argmax(np.abs(v.c)))
    if k == v.j.size - 1:
        k -= 1
    ratio = v.c[k + 1] / v.c[k]
    w = cmath.log(ratio) + (v.j[k] + 0.5)
    center = w.real
    phase = -w.imag % (2.0 * math.pi)
    j = level_grid(default_j_max(center), 0.0)
    c = np.exp(center * j - 1j * phase * j - 0.5 * j * j)
    return FockVector(offset=0.0, j=j, c=c, tail_bound=_strip_tail(j[-1], center))


def _strip_tail(j_max: float, center: float) -> float:
    gap = j_max - abs(center)
    return math.exp(-gap * gap) if gap > 0.0 else math.inf

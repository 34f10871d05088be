"""Free-particle dynamics on the strip and torus embeddings (m = 1).

Generalized coordinates on the strip are (phi, Z0): the azimuth and the
axial position of the fiber.  The kinetic Lagrangian obtained from the
z_sign = -1 embedding is

    L = 1/2 { phi_dot^2 * [(1 + r*cos(phi/2))^2 + r^2/4]
              - r*cos(phi/2) * z0_dot * phi_dot + z0_dot^2 }

Z0 is cyclic, so L0 = dL/dz0_dot is conserved; phi is not cyclic (the
surface metric depends on it), so the angular momentum

    J = p_phi = phi_dot * [(1 + r*cos(phi/2))^2 + (r^2/4)*sin^2(phi/2)]
        - (r/2)*cos(phi/2) * L0

varies along a generic orbit.  The conserved energy, reduced with L0, is

    H = 1/2 { JJ^2 * [(1 + r*cos(phi/2))^2 + (r^2/4)*sin^2(phi/2)] + L0^2 }

with JJ = phi_dot recovered from (J, L0, phi).  A "compact" variant with
bracket [(1 + r*cos(phi/2))^2 - (r^2/4)*cos(phi)] is retained for
comparison; it differs by (r^2/4)*cos^2(phi/2) and coincides at
phi = (2k+1)*pi, where the spectrum closes to

    E = 2 j^2 / (4 + r^2) + L0^2 / 2.

Trajectories come from a fixed-step RK4 in canonical variables with
compensated (Kahan) state accumulation and step-halving acceptance on the
energy drift; the stepping kernel is numba-compiled unless disabled (see
``mobiuscs._backend``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import njit
from .errors import CoordinateSingularityError, DomainError, EnergyDriftError
from .geometry import TorusGeometry, mobius_point, torus_point

__all__ = [
    "MobiusState",
    "TorusState",
    "SpectrumEntry",
    "ConservedSet",
    "Trajectory",
    "mobius_lagrangian",
    "mobius_momenta",
    "mobius_phidot",
    "mobius_hamiltonian",
    "energy_quantized",
    "energy_spectrum",
    "conserved_set",
    "integrate_mobius",
    "torus_lagrangian",
    "torus_momenta",
    "torus_hamiltonian",
]

TRAJECTORY_COLUMNS = ("t", "phi", "phi_dot", "z0", "z0_dot", "E", "J", "L0")


@dataclass(frozen=True)
class MobiusState:
    phi: float
    phi_dot: float
    z0: float = 0.0
    z0_dot: float = 0.0


@dataclass(frozen=True)
class TorusState:
    theta: float
    phi: float
    theta_dot: float
    phi_dot: float
    z0: float = 0.0
    z0_dot: float = 0.0


@dataclass(frozen=True)
class SpectrumEntry:
    j: float
    L0: float
    E: float


@dataclass(frozen=True)
class ConservedSet:
    J: float
    L0: float
    E: float


def _check_r(r: float, upper: float = 1.0) -> float:
    if not (0.0 <= r < upper):
        raise DomainError(f"need 0 <= r < {upper}, got r={r}")
    return float(r)


# ---------------------------------------------------------------------------
# Mobius strip: Lagrangian, momenta, Hamiltonian
# ---------------------------------------------------------------------------

def mobius_lagrangian(s: MobiusState, r: float, path: str = "closed", z_sign: int = -1) -> float:
    """Kinetic Lagrangian at a strip state.

    path="closed"        the closed form above (cross term -r*cos(phi/2), i.e.
                         the z_sign = -1 embedding, written out);
    path="embedding"     exact form derived from the embedding with the given
                         z_sign (cross term flips with the sign convention);
    path="embedding_fd"  kinetic energy from central finite differences of the
                         embedded point -- the independent oracle.
    """
    _check_r(r)
    half = 0.5 * s.phi
    c = math.cos(half)
    if path == "closed":
        bracket = (1.0 + r * c) ** 2 + 0.25 * r * r
        return 0.5 * (s.phi_dot ** 2 * bracket - r * c * s.z0_dot * s.phi_dot + s.z0_dot ** 2)
    if path == "embedding":
        bracket = (1.0 + r * c) ** 2 + 0.25 * r * r
        return 0.5 * (s.phi_dot ** 2 * bracket + z_sign * r * c * s.z0_dot * s.phi_dot + s.z0_dot ** 2)
    if path == "embedding_fd":
        eps = 1e-6
        g_plus = TorusGeometry(R=1.0, r=r, l=s.z0 + eps * s.z0_dot)
        g_minus = TorusGeometry(R=1.0, r=r, l=s.z0 - eps * s.z0_dot)
        p_plus = mobius_point(s.phi + eps * s.phi_dot, g_plus, z_sign=z_sign)
        p_minus = mobius_point(s.phi - eps * s.phi_dot, g_minus, z_sign=z_sign)
        vel = (p_plus - p_minus) / (2.0 * eps)
        return 0.5 * float(vel @ vel)
    raise ValueError(f"unknown path {path!r}")


def mobius_momenta(s: MobiusState, r: float) -> tuple[float, float]:
    """Conjugate momenta (p_phi, L0) in the closed (z_sign = -1) convention."""
    _check_r(r)
    half = 0.5 * s.phi
    c = math.cos(half)
    sn = math.sin(half)
    L0 = s.z0_dot - 0.5 * r * c * s.phi_dot
    p_phi = s.phi_dot * ((1.0 + r * c) ** 2 + 0.25 * r * r * sn * sn) - 0.5 * r * c * L0
    return p_phi, L0


def mobius_phidot(J: float, L0: float, phi: float, r: float) -> float:
    """Angular rate phi_dot recovered from (J, L0, phi); inverts mobius_momenta."""
    _check_r(r)
    half = 0.5 * phi
    c = math.cos(half)
    sn = math.sin(half)
    denom = (1.0 + r * c) ** 2 + 0.25 * r * r * sn * sn
    return (J + 0.5 * r * L0 * c) / denom


def mobius_hamiltonian(J: float, L0: float, phi: float, r: float, variant: str = "reduced") -> float:
    """Energy as a function of (J, L0, phi).

    variant="reduced"  bracket (1+r*cos(phi/2))^2 + (r^2/4)*sin^2(phi/2): the
                       Legendre transform of the closed Lagrangian, conserved
                       along trajectories;
    variant="compact"  bracket (1+r*cos(phi/2))^2 - (r^2/4)*cos(phi): a
                       commonly quoted compact form that drops a
                       (r^2/4)*cos^2(phi/2) term; kept for comparison.  The
                       two coincide at phi = (2k+1)*pi.
    """
    _check_r(r)
    half = 0.5 * phi
    c = math.cos(half)
    sn = math.sin(half)
    jj = mobius_phidot(J, L0, phi, r)
    if variant == "reduced":
        bracket = (1.0 + r * c) ** 2 + 0.25 * r * r * sn * sn
    elif variant == "compact":
        bracket = (1.0 + r * c) ** 2 - 0.25 * r * r * math.cos(phi)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return 0.5 * (jj * jj * bracket + L0 * L0)


def energy_quantized(j: float, L0: float, r: float) -> float:
    """Closed-form level energy at the quantized angles phi = (2k+1)*pi."""
    _check_r(r)
    return 2.0 * j * j / (4.0 + r * r) + 0.5 * L0 * L0


def energy_spectrum(j: float, L0: float, phi: float, r: float, variant: str = "reduced") -> SpectrumEntry:
    """Level energy for eigenvalue j at angle phi; reduces to energy_quantized."""
    return SpectrumEntry(j=j, L0=L0, E=mobius_hamiltonian(j, L0, phi, r, variant=variant))


def conserved_set(s: MobiusState, r: float) -> ConservedSet:
    """Monitored quantities (J, L0, E) at a state.

    L0 and E are first integrals of the strip flow.  J = p_phi is *not* (the
    metric depends on phi); it is tracked because it parameterizes the
    Hamiltonian and quantization formulas.
    """
    p_phi, L0 = mobius_momenta(s, r)
    E = mobius_hamiltonian(p_phi, L0, s.phi, r)
    return ConservedSet(J=p_phi, L0=L0, E=E)


# ---------------------------------------------------------------------------
# Trajectory integration (hot kernel)
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _mobius_rhs(phi, p_phi, p_z, r):
    half = 0.5 * phi
    c = math.cos(half)
    sn = math.sin(half)
    one = 1.0 + r * c
    denom = one * one + 0.25 * r * r * sn * sn
    jj = (p_phi + 0.5 * r * c * p_z) / denom
    d_denom = -r * sn * one + 0.25 * r * r * sn * c
    dphi = jj
    dpphi = 0.25 * r * sn * jj * p_z + 0.5 * jj * jj * d_denom
    dz0 = 0.5 * r * c * jj + p_z
    return dphi, dpphi, dz0


@njit(cache=True, nogil=True)
def _rk4_mobius(phi0, pphi0, z00, p_z, r, h, n_steps, stride, out):
    """Fixed-step RK4 in (phi, p_phi, z0) at constant p_z.

    Kahan-compensated state accumulation keeps the roundoff of ~1e5-step
    runs near machine precision.  Every ``stride``-th state is written to
    ``out`` (rows: phi, p_phi, z0).
    """
    phi = phi0
    pphi = pphi0
    z0 = z00
    c_phi = 0.0
    c_pphi = 0.0
    c_z0 = 0.0
    out[0, 0] = phi
    out[0, 1] = pphi
    out[0, 2] = z0
    row = 0
    for i in range(n_steps):
        k1 = _mobius_rhs(phi, pphi, p_z, r)
        k2 = _mobius_rhs(phi + 0.5 * h * k1[0], pphi + 0.5 * h * k1[1], p_z, r)
        k3 = _mobius_rhs(phi + 0.5 * h * k2[0], pphi + 0.5 * h * k2[1], p_z, r)
        k4 = _mobius_rhs(phi + h * k3[0], pphi + h * k3[1], p_z, r)
        inc_phi = h * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0
        inc_pphi = h * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0
        inc_z0 = h * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]) / 6.0

        y = inc_phi - c_phi
        t = phi + y
        c_phi = (t - phi) - y
        phi = t

        y = inc_pphi - c_pphi
        t = pphi + y
        c_pphi = (t - pphi) - y
        pphi = t

        y = inc_z0 - c_z0
        t = z0 + y
        c_z0 = (t - z0) - y
        z0 = t

        if (i + 1) % stride == 0:
            row += 1
            out[row, 0] = phi
            out[row, 1] = pphi
            out[row, 2] = z0
    return row


@dataclass(frozen=True)
class Trajectory:
    """Sampled strip trajectory with monitored quantities as columns."""

    t: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray
    z0: np.ndarray
    z0_dot: np.ndarray
    r: float
    L0: float
    substeps: int

    @property
    def states(self) -> list[MobiusState]:
        return [
            MobiusState(p, pd, z, zd)
            for p, pd, z, zd in zip(self.phi, self.phi_dot, self.z0, self.z0_dot)
        ]

    def momentum_column(self) -> np.ndarray:
        half = 0.5 * self.phi
        c = np.cos(half)
        sn = np.sin(half)
        denom = (1.0 + self.r * c) ** 2 + 0.25 * self.r ** 2 * sn ** 2
        return self.phi_dot * denom - 0.5 * self.r * c * self.L0

    def energy_column(self) -> np.ndarray:
        half = 0.5 * self.phi
        c = np.cos(half)
        sn = np.sin(half)
        denom = (1.0 + self.r * c) ** 2 + 0.25 * self.r ** 2 * sn ** 2
        return 0.5 * (self.phi_dot ** 2 * denom + self.L0 ** 2)

    def columns(self) -> dict[str, np.ndarray]:
        n = self.t.size
        return {
            "t": self.t,
            "phi": self.phi,
            "phi_dot": self.phi_dot,
            "z0": self.z0,
            "z0_dot": self.z0_dot,
            "E": self.energy_column(),
            "J": self.momentum_column(),
            "L0": np.full(n, self.L0),
        }

    def drift(self) -> dict[str, float]:
        """Max relative excursion of each monitored quantity from its start."""
        cols = self.columns()
        out = {}
        for name in ("E", "J"):
            col = cols[name]
            out[name] = float(np.max(np.abs(col - col[0])) / max(1.0, abs(col[0])))
        out["L0"] = 0.0  # exactly constant by construction of the canonical flow
        return out


def integrate_mobius(
    s0: MobiusState,
    r: float,
    t_end: float,
    dt: float,
    energy_tol: float = 1e-6,
    max_halvings: int = 8,
) -> Trajectory:
    """Integrate the strip flow, sampling every dt up to t_end.

    The run is accepted only if the relative energy drift stays below
    ``energy_tol``; otherwise the internal step is halved (output grid
    unchanged) up to ``max_halvings`` times before EnergyDriftError.
    """
    _check_r(r)
    if dt <= 0.0 or t_end <= 0.0:
        raise DomainError("need dt > 0 and t_end > 0")
    n_out = int(round(t_end / dt))
    if n_out < 1:
        raise DomainError("t_end shorter than one step")

    p_phi0, L0 = mobius_momenta(s0, r)
    E0 = mobius_hamiltonian(p_phi0, L0, s0.phi, r)

    drift = math.inf
    for attempt in range(max_halvings + 1):
        stride = 2 ** attempt
        h = dt / stride
        out = np.empty((n_out + 1, 3))
        try:
            _rk4_mobius(s0.phi, p_phi0, s0.z0, L0, r, h, n_out * stride, stride, out)
        except (ValueError, OverflowError):
            # interpreted-mode math.* raises on a diverged trial where the
            # compiled kernel would propagate non-finite values; same retry
            continue

        half = 0.5 * out[:, 0]
        c = np.cos(half)
        sn = np.sin(half)
        denom = (1.0 + r * c) ** 2 + 0.25 * r * r * sn * sn
        with np.errstate(over="ignore", invalid="ignore"):
            phi_dot = (out[:, 1] + 0.5 * r * c * L0) / denom
            energy = 0.5 * (phi_dot ** 2 * denom + L0 * L0)
        if not np.all(np.isfinite(energy)):
            drift = math.inf  # diverged trial; retry at a smaller step
            continue
        drift = float(np.max(np.abs(energy - E0)) / max(1.0, abs(E0)))
        if drift <= energy_tol:
            t = dt * np.arange(n_out + 1)
            z0_dot = L0 + 0.5 * r * c * phi_dot
            return Trajectory(
                t=t,
                phi=out[:, 0],
                phi_dot=phi_dot,
                z0=out[:, 2],
                z0_dot=z0_dot,
                r=r,
                L0=L0,
                substeps=stride,
            )
    raise EnergyDriftError(
        f"energy drift {drift:g} above {energy_tol:g} after {max_halvings} halvings",
        achieved=drift,
    )


# ---------------------------------------------------------------------------
# Torus: Lagrangian, momenta, Hamiltonian
# ---------------------------------------------------------------------------

def torus_lagrangian(s: TorusState, g: TorusGeometry, path: str = "embedding") -> float:
    """Kinetic Lagrangian at a torus state (independent angles theta, phi).

    path="embedding"     exact form from the embedding:
                         1/2 { phi_dot^2 (R + r sin th)^2 + (r th_dot)^2
                               - 2 r sin th z0_dot th_dot + z0_dot^2 };
    path="printed"       variant carrying an extra (r^2/4) phi_dot^2 term
                         inside the azimuthal bracket, kept for comparison
                         (it is what the strip reduction would leave behind);
    path="embedding_fd"  finite-difference kinetic energy oracle.
    """
    if not (0.0 <= g.r < g.R):
        raise DomainError("need 0 <= r < R")
    sth = math.sin(s.theta)
    if path == "embedding":
        return 0.5 * (
            s.phi_dot ** 2 * (g.R + g.r * sth) ** 2
            + (g.r * s.theta_dot) ** 2
            - 2.0 * g.r * sth * s.z0_dot * s.theta_dot
            + s.z0_dot ** 2
        )
    if path == "printed":
        return 0.5 * (
            s.phi_dot ** 2 * ((g.R + g.r * sth) ** 2 + 0.25 * g.r ** 2)
            + (g.r * s.theta_dot) ** 2
            - 2.0 * g.r * sth * s.z0_dot * s.theta_dot
            + s.z0_dot ** 2
        )
    if path == "embedding_fd":
        eps = 1e-6
        g_plus = TorusGeometry(R=g.R, r=g.r, l=s.z0 + eps * s.z0_dot)
        g_minus = TorusGeometry(R=g.R, r=g.r, l=s.z0 - eps * s.z0_dot)
        p_plus = torus_point(s.theta + eps * s.theta_dot, s.phi + eps * s.phi_dot, g_plus)
        p_minus = torus_point(s.theta - eps * s.theta_dot, s.phi - eps * s.phi_dot, g_minus)
        vel = (p_plus - p_minus) / (2.0 * eps)
        return 0.5 * float(vel @ vel)
    raise ValueError(f"unknown path {path!r}")


def torus_momenta(s: TorusState, g: TorusGeometry) -> tuple[float, float, float]:
    """Conjugate momenta (J0, L0, p_theta) of the torus Lagrangian."""
    sth = math.sin(s.theta)
    J0 = s.phi_dot * (g.R + g.r * sth) ** 2
    L0 = s.z0_dot - g.r * sth * s.theta_dot
    p_theta = g.r ** 2 * s.theta_dot - g.r * sth * s.z0_dot
    return J0, L0, p_theta


def torus_hamiltonian(
    J0: float,
    L0: float,
    p_theta: float,
    theta: float,
    r: float,
    singular_tol: float = 1e-9,
) -> float:
    """Torus energy in momenta (R = 1); singular where cos(theta) = 0."""
    _check_r(r)
    if r == 0.0:
        raise DomainError("tube radius r must be positive for the momentum chart")
    cth = math.cos(theta)
    if abs(cth) < singular_tol:
        raise CoordinateSingularityError(
            f"theta={theta} is within {singular_tol} of the chart singularity cos(theta)=0"
        )
    sth = math.sin(theta)
    return 0.5 * (
        J0 ** 2 / (1.0 + r * sth) ** 2
        + (p_theta + r * sth * L0) ** 2 / (r * cth) ** 2
        + L0 ** 2
    )

"""Embeddings of the torus and the Mobius strip, and the coherent-state label map.

The strip is carved out of a torus of central radius ``R`` and tube radius
``r`` by tying the tube angle to the azimuth::

    theta = (phi + pi) / 2

so the embedded point closes only after a 4*pi excursion in phi (double
cover).  Composing the torus embedding with the constraint puts the strip
point at

    X = (R + r*cos(phi/2)) * cos(phi)
    Y = (R + r*cos(phi/2)) * sin(phi)
    Z = l - r*sin(phi/2)            # z_sign = -1

The mirrored convention Z = l + r*sin(phi/2) (z_sign = +1) is equally valid
and is the default for the coherent-state label; both are kept because the
two sign choices propagate differently into the dynamics cross terms.

The coherent-state label is the exponentially damped planar position

    xi = exp(-(l + z_sign*r*sin(phi/2)) + i*phi) * (1 + r*cos(phi/2))

so |xi| = exp(-l') with the Gaussian center

    l' = (l + z_sign*r*sin(phi/2)) - log(1 + r*cos(phi/2)) = -log|xi|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "TorusGeometry",
    "torus_point",
    "constraint_theta",
    "mobius_point",
    "coherent_label",
    "label_center",
]


@dataclass(frozen=True)
class TorusGeometry:
    """Central radius R, tube (half-width) radius r, and axial offset l."""

    R: float = 1.0
    r: float = 0.5
    l: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.r < self.R):
            raise DomainError(f"need 0 <= r < R, got r={self.r}, R={self.R}")


def _check_z_sign(z_sign: int) -> int:
    if z_sign not in (+1, -1):
        raise DomainError(f"z_sign must be +1 or -1, got {z_sign}")
    return z_sign


def torus_point(theta: float, phi: float, g: TorusGeometry) -> np.ndarray:
    """Embedded torus point (X, Y, Z); angles unrestricted, 2*pi-periodic."""
    radial = g.R + g.r * math.sin(theta)
    return np.array([
        radial * math.cos(phi),
        radial * math.sin(phi),
        g.l + g.r * math.cos(theta),
    ])


def constraint_theta(phi: float) -> float:
    """Tube angle enforced on the strip: theta = (phi + pi)/2."""
    return 0.5 * (phi + math.pi)


def mobius_point(phi: float, g: TorusGeometry, z_sign: int = +1) -> np.ndarray:
    """Embedded strip point; z_sign=-1 equals torus_point(constraint_theta(phi), phi)."""
    _check_z_sign(z_sign)
    half = 0.5 * phi
    radial = g.R + g.r * math.cos(half)
    return np.array([
        radial * math.cos(phi),
        radial * math.sin(phi),
        g.l + z_sign * g.r * math.sin(half),
    ])


def coherent_label(l: float, phi: float, r: float, z_sign: int = +1) -> complex:
    """Complex coherent-state label xi; |xi| >= (1-r)*exp(-l-r) > 0."""
    _check_z_sign(z_sign)
    if not (0.0 <= r < 1.0):
        raise DomainError(f"need 0 <= r < 1, got r={r}")
    half = 0.5 * phi
    height = l + z_sign * r * math.sin(half)
    radial = 1.0 + r * math.cos(half)
    return radial * complex(math.cos(phi), math.sin(phi)) * math.exp(-height)


def label_center(l: float, phi: float, r: float, z_sign: int = +1) -> float:
    """Gaussian center l' of the coefficient profile; equals -log|xi|."""
    _check_z_sign(z_sign)
    if not (0.0 <= r < 1.0):
        raise DomainError(f"need 0 <= r < 1, got r={r}")
    half = 0.5 * phi
    return (l + z_sign * r * math.sin(half)) - math.log(1.0 + r * math.cos(half))

"""Earth model and force/energy functions for oblateness-only (J2) motion.

All quantities are in km, km/s, s, and radians.  The dynamical model is the
point mass plus the second zonal harmonic; nothing else (no higher zonals,
tesserals, drag, or third body).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover - type-only import, avoids a cycle
    from .states import CartesianState, PolarNodalState

# Default earth constants (GGM/EGM-class values).  The benchmark results
# depend on the adopted earth model, so all three are configurable at the
# service/CLI boundary; these defaults are used when a config omits them.
MU_EARTH = 398600.4415        # km^3/s^2
ALPHA_EARTH = 6378.1363       # km, mean equatorial radius
J2_EARTH = 1.0826267e-3       # dimensionless


@dataclass(frozen=True)
class GravityModel:
    """Gravitational parameter, equatorial radius, and J2 coefficient.

    ``j2 = 0`` selects the pure two-body degenerate case, which every
    analytical path in this package must reproduce exactly.
    """

    mu: float = MU_EARTH
    alpha: float = ALPHA_EARTH
    j2: float = J2_EARTH

    def __post_init__(self) -> None:
        if self.mu <= 0.0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.j2 < 0.0:
            raise ValueError(f"j2 must be non-negative, got {self.j2}")


def legendre_p2(x: float) -> float:
    """Legendre polynomial of degree 2, (3x^2 - 1)/2."""
    return 1.5 * x * x - 0.5


def potential(x: float, y: float, z: float, model: GravityModel) -> float:
    """Geopotential V(x, y, z) = -(mu/r) [1 - J2 (alpha/r)^2 P2(z/r)], km^2/s^2."""
    r2 = x * x + y * y + z * z
    if r2 <= 0.0:
        raise ValueError("potential is singular at the origin")
    r = math.sqrt(r2)
    return -(model.mu / r) * (1.0 - model.j2 * (model.alpha / r) ** 2 * legendre_p2(z / r))


def acceleration(x: float, y: float, z: float, model: GravityModel) -> tuple[float, float, float]:
    """Acceleration -grad V in km/s^2 at a Cartesian point."""
    r2 = x * x + y * y + z * z
    if r2 <= 0.0:
        raise ValueError("acceleration is singular at the origin")
    r = math.sqrt(r2)
    mu_r3 = model.mu / (r2 * r)
    # 1.5 mu J2 alpha^2 / r^5, the common oblateness factor
    k = 1.5 * model.mu * model.j2 * model.alpha * model.alpha / (r2 * r2 * r)
    z2_r2 = z * z / r2
    ax = -mu_r3 * x - k * x * (1.0 - 5.0 * z2_r2)
    ay = -mu_r3 * y - k * y * (1.0 - 5.0 * z2_r2)
    az = -mu_r3 * z - k * z * (3.0 - 5.0 * z2_r2)
    return ax, ay, az


def j2_acceleration(state: "CartesianState", model: GravityModel) -> tuple[float, float, float]:
    """Acceleration of the full (two-body + J2) field at a Cartesian state."""
    x, y, z = state.position
    return acceleration(x, y, z, model)


def specific_energy(state: "CartesianState", model: GravityModel) -> float:
    """Conserved energy 0.5 |v|^2 + V of a Cartesian state, km^2/s^2."""
    x, y, z = state.position
    vx, vy, vz = state.velocity
    return 0.5 * (vx * vx + vy * vy + vz * vz) + potential(x, y, z, model)


def main_problem_energy(state: "PolarNodalState", model: GravityModel) -> float:
    """Hamiltonian of the J2 main problem evaluated on polar-nodal variables.

    0.5 (R^2 + Theta^2/r^2) - (mu/r) [1 - J2 (alpha/r)^2 P2(s sin theta)]
    with s^2 = 1 - (N/Theta)^2.  The node nu does not appear: the value is
    invariant under rotations about the polar axis.
    """
    if state.r <= 0.0:
        raise ValueError(f"r must be positive, got {state.r}")
    c = state.N / state.Theta
    s = math.sqrt(max(0.0, 1.0 - c * c))
    kinetic = 0.5 * (state.R * state.R + (state.Theta / state.r) ** 2)
    bracket = 1.0 - model.j2 * (model.alpha / state.r) ** 2 * legendre_p2(s * math.sin(state.theta))
    return kinetic - (model.mu / state.r) * bracket

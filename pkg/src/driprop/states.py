"""State representations and conversions.

Three charts are used: canonical polar-nodal variables (r, theta, nu, R,
Theta, N) in which the analytical theory operates, inertial Cartesian
position/velocity shared with the numerical integrator, and classical
elements used to state initial conditions.  Angles are radians and are kept
unwrapped (continuous across revolutions) inside propagators; callers reduce
them to [0, 2*pi) only at output boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnboundOrbitError
from .gravity import GravityModel

TWO_PI = 2.0 * math.pi

# Below this sine-of-inclination the ascending node is numerically undefined;
# the equatorial convention (nu := 0, theta carries the in-plane angle) applies.
_NODE_DEGENERACY_FLOOR = 1e-12


def wrap_two_pi(angle: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    wrapped = math.fmod(angle, TWO_PI)
    return wrapped + TWO_PI if wrapped < 0.0 else wrapped


def wrap_pi(angle: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped > math.pi:
        return wrapped - TWO_PI
    if wrapped <= -math.pi:
        return wrapped + TWO_PI
    return wrapped


@dataclass(frozen=True)
class PolarNodalState:
    """Canonical polar-nodal (Whittaker) variables.

    r: radial distance [km]; theta: argument of latitude [rad]; nu: node
    longitude [rad]; R: radial velocity [km/s]; Theta: angular-momentum
    modulus [km^2/s]; N: polar component of the angular momentum [km^2/s].
    """

    r: float
    theta: float
    nu: float
    R: float
    Theta: float
    N: float

    def __post_init__(self) -> None:
        if self.r <= 0.0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.Theta <= 0.0:
            raise ValueError(f"Theta must be positive, got {self.Theta}")
        # tolerate round-off from upstream trigonometry at |N| = Theta
        if abs(self.N) > self.Theta * (1.0 + 1e-12):
            raise ValueError(f"|N| = {abs(self.N)} exceeds Theta = {self.Theta}")

    @property
    def cos_inclination(self) -> float:
        return max(-1.0, min(1.0, self.N / self.Theta))

    def speed(self) -> float:
        """Velocity modulus sqrt(R^2 + (Theta/r)^2) [km/s]."""
        return math.hypot(self.R, self.Theta / self.r)


@dataclass(frozen=True)
class CartesianState:
    """Inertial position [km] and velocity [km/s]."""

    position: tuple[float, float, float]
    velocity: tuple[float, float, float]

    def radius(self) -> float:
        x, y, z = self.position
        return math.sqrt(x * x + y * y + z * z)

    def speed(self) -> float:
        vx, vy, vz = self.velocity
        return math.sqrt(vx * vx + vy * vy + vz * vz)


@dataclass(frozen=True)
class ClassicalElements:
    """Keplerian elements (a [km], e, i/omega/Omega/f [rad])."""

    a: float
    e: float
    i: float
    omega: float
    Omega: float
    f: float

    def __post_init__(self) -> None:
        if self.a <= 0.0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not 0.0 <= self.e < 1.0:
            raise ValueError(f"e must lie in [0, 1), got {self.e}")
        if not 0.0 <= self.i <= math.pi:
            raise ValueError(f"i must lie in [0, pi], got {self.i}")


@dataclass(frozen=True)
class ConicFunctions:
    """Conic auxiliaries of a polar-nodal state.

    kappa = e cos f and sigma = e sin f are the eccentricity-vector
    projections in the orbital frame; ecosw/esinw are the projections on the
    node (argument-of-perigee) axes.
    """

    kappa: float
    sigma: float
    p: float
    ecc: float
    ecosw: float
    esinw: float


def conic_functions(state: PolarNodalState, model: GravityModel) -> ConicFunctions:
    """Eccentricity-vector projections and semilatus rectum of a state.

    p = Theta^2/mu, kappa = p/r - 1, sigma = p R / Theta; the perigee
    projections follow by rotating (kappa, sigma) through theta.
    """
    p = state.Theta * state.Theta / model.mu
    kappa = p / state.r - 1.0
    sigma = p * state.R / state.Theta
    ct, st = math.cos(state.theta), math.sin(state.theta)
    return ConicFunctions(
        kappa=kappa,
        sigma=sigma,
        p=p,
        ecc=math.hypot(kappa, sigma),
        ecosw=kappa * ct + sigma * st,
        esinw=kappa * st - sigma * ct,
    )


def classical_to_polar_nodal(el: ClassicalElements, model: GravityModel) -> PolarNodalState:
    """Map classical elements to polar-nodal variables."""
    if el.e >= 1.0:
        raise UnboundOrbitError(f"only elliptic orbits supported, got e = {el.e}")
    p = el.a * (1.0 - el.e * el.e)
    Theta = math.sqrt(model.mu * p)
    r = p / (1.0 + el.e * math.cos(el.f))
    R = (model.mu / Theta) * el.e * math.sin(el.f)
    return PolarNodalState(
        r=r,
        theta=el.omega + el.f,
        nu=el.Omega,
        R=R,
        Theta=Theta,
        N=Theta * math.cos(el.i),
    )


def polar_nodal_to_cartesian(state: PolarNodalState) -> CartesianState:
    """Rotate a polar-nodal state into inertial Cartesian coordinates."""
    c = state.cos_inclination
    s = math.sqrt(max(0.0, 1.0 - c * c))
    ct, st = math.cos(state.theta), math.sin(state.theta)
    cn, sn = math.cos(state.nu), math.sin(state.nu)
    # radial and transverse unit vectors of the orbital frame
    ux = ct * cn - st * c * sn
    uy = ct * sn + st * c * cn
    uz = st * s
    tx = -st * cn - ct * c * sn
    ty = -st * sn + ct * c * cn
    tz = ct * s
    vt = state.Theta / state.r
    return CartesianState(
        position=(state.r * ux, state.r * uy, state.r * uz),
        velocity=(state.R * ux + vt * tx, state.R * uy + vt * ty, state.R * uz + vt * tz),
    )


def cartesian_to_polar_nodal(state: CartesianState) -> PolarNodalState:
    """Invert polar_nodal_to_cartesian.

    For equatorial orbits (sin i below the degeneracy floor) the node is
    undefined; the convention nu := 0 is applied and theta absorbs the whole
    in-plane angle.  All angles come from atan2, never from acos of a ratio.
    """
    x, y, z = state.position
    vx, vy, vz = state.velocity
    r = state.radius()
    if r <= 0.0:
        raise ValueError("zero position vector")
    hx = y * vz - z * vy
    hy = z * vx - x * vz
    hz = x * vy - y * vx
    h_eq = math.hypot(hx, hy)
    Theta = math.hypot(h_eq, hz)
    if Theta <= 0.0:
        raise ValueError("rectilinear trajectory: angular momentum vanishes")
    R = (x * vx + y * vy + z * vz) / r
    s = h_eq / Theta
    if s < _NODE_DEGENERACY_FLOOR:
        c_sign = 1.0 if hz >= 0.0 else -1.0
        theta = math.atan2(c_sign * y, x)
        nu = 0.0
    else:
        nu = math.atan2(hx, -hy)
        cn, sn = math.cos(nu), math.sin(nu)
        theta = math.atan2(z / s, x * cn + y * sn)
    return PolarNodalState(r=r, theta=theta, nu=nu, R=R, Theta=Theta, N=hz)

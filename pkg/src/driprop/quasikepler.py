"""Closed-form flow of the quasi-Keplerian intermediary in prime space.

The intermediary Hamiltonian is Kepler-like with a J2-modified angular
momentum, so propagation reduces to the classical anomaly chain: advance the
mean anomaly linearly, solve the Kepler equation, convert to true anomaly,
and rebuild the prime polar-nodal state.  The argument of latitude and the
node advance linearly in the true anomaly through the secular factors zeta
and chi.

Everything in this module lives in the prime (parallax-transformed) variable
set; the short-period corrections that connect prime and osculating states
are in :mod:`driprop.corrections`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import KeplerConvergenceError, UnboundOrbitError
from .gravity import GravityModel
from .states import TWO_PI, PolarNodalState

# Anomalies are indistinguishable below this eccentricity; the epoch anomaly
# is then set to zero, which the flow formulas absorb exactly.
ECC_FLOOR = 1e-9

_KEPLER_TOL = 1e-14
_KEPLER_MAX_ITER = 50


@dataclass(frozen=True)
class QuasiKeplerianElements:
    """Frozen constants of the prime-space intermediary.

    c is cos(i) = N/Theta; eps the dimensionless oblateness parameter
    -J2 (alpha/p)^2 / 4; Theta_tilde the modified angular momentum; zeta and
    chi the per-true-anomaly-radian rates of theta and nu; p_tilde, a, e the
    conic of the intermediary; f0/u0/l0 the epoch anomalies.  Theta and N are
    exact constants of the prime flow.
    """

    c: float
    eps: float
    Theta_tilde: float
    zeta: float
    chi: float
    p_tilde: float
    a: float
    e: float
    f0: float
    u0: float
    l0: float
    theta0: float
    nu0: float
    Theta: float
    N: float
    mean_motion: float
    mu: float


def solve_kepler(l: float, e: float) -> float:
    """Solve u - e sin u = l for the eccentric anomaly u.

    The mean anomaly is reduced to its own revolution (where Newton reaches
    machine-level residuals), unwrapped back with the identical floating
    shift so the revolutions cancel exactly, and polished once in unwrapped
    space.  The returned u stays in the same revolution as l
    (|u - l| <= e < pi) and meets |u - e sin u - l| < 1e-13 across the
    benchmark envelope of hundreds of revolutions; far beyond that the
    residual is limited by the spacing of floats at |l| itself.
    """
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity must lie in [0, 1), got {e}")
    if e == 0.0:
        return l
    shift = TWO_PI * round(l / TWO_PI)
    u = _solve_kepler_reduced(l - shift, e) + shift
    if shift == 0.0:
        return u
    # one Newton polish against the unwrapped l pushes the residual to the
    # resolution floor of u; keep it only if it actually improved
    residual = (u - l) - e * math.sin(u)
    polished = u - residual / (1.0 - e * math.cos(u))
    if abs((polished - l) - e * math.sin(polished)) < abs(residual):
        return polished
    return u


def _solve_kepler_reduced(l: float, e: float) -> float:
    """Kepler solution for |l| <= pi: Newton with a bisection fallback."""
    u = l + e * math.sin(l)
    best_u, best_res = u, math.inf
    for _ in range(_KEPLER_MAX_ITER):
        residual = u - e * math.sin(u) - l
        if abs(residual) < best_res:
            best_u, best_res = u, abs(residual)
        if abs(residual) < _KEPLER_TOL:
            return u
        step = residual / (1.0 - e * math.cos(u))
        u -= step
        if abs(step) <= 1e-17:
            break  # stuck at the float resolution
    if best_res < 1e-13:
        return best_u
    # Newton stalled: bisection on the bracket [l - e, l + e]
    lo, hi = l - e, l + e
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        residual = mid - e * math.sin(mid) - l
        if abs(residual) < best_res:
            best_u, best_res = mid, abs(residual)
        if abs(residual) < _KEPLER_TOL:
            return mid
        if residual < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17:
            break
    if best_res < 1e-13:
        return best_u
    raise KeplerConvergenceError(
        f"Kepler solver residual {best_res:.3e} at l = {l}, e = {e}"
    )


def true_from_eccentric(u: float, e: float) -> float:
    """True anomaly from eccentric anomaly, continuous across revolutions.

    Evaluates the half-angle relation tan(f/2) = sqrt((1+e)/(1-e)) tan(u/2)
    through the shift form f = u + 2 atan2(...), which is quadrant-safe and
    preserves the revolution count of u.
    """
    if e == 0.0:
        return u
    beta = math.sqrt((1.0 + e) / (1.0 - e))
    su, cu = math.sin(u), math.cos(u)
    return u + 2.0 * math.atan2((beta - 1.0) * su, (beta + 1.0) - (beta - 1.0) * cu)


def eccentric_from_true(f: float, e: float) -> float:
    """Eccentric anomaly from true anomaly; inverse of true_from_eccentric."""
    if e == 0.0:
        return f
    gamma = math.sqrt((1.0 - e) / (1.0 + e))
    sf, cf = math.sin(f), math.cos(f)
    return f + 2.0 * math.atan2((gamma - 1.0) * sf, (gamma + 1.0) - (gamma - 1.0) * cf)


def build_elements(prime: PolarNodalState, model: GravityModel) -> QuasiKeplerianElements:
    """Auxiliary constants and epoch anomalies of the intermediary flow.

    The input must already be a prime-space state (the caller applies the
    inverse short-period transformation first).
    """
    Theta, N = prime.Theta, prime.N
    c = prime.cos_inclination
    c2 = c * c
    c4 = c2 * c2
    p0 = Theta * Theta / model.mu
    eps = -0.25 * model.j2 * (model.alpha / p0) ** 2
    Theta_tilde = Theta * math.sqrt(1.0 - (2.0 - 6.0 * c2) * eps + (1.0 - 21.0 * c4) * eps * eps)
    zeta = (Theta / Theta_tilde) * (1.0 + (2.0 - 12.0 * c2) * eps - (3.0 - 105.0 * c4) * eps * eps)
    chi = 6.0 * eps * (1.0 - 7.0 * eps * c2) * N / Theta_tilde
    p_tilde = Theta_tilde * Theta_tilde / model.mu

    two_energy = prime.R * prime.R + (Theta_tilde / prime.r) ** 2 - 2.0 * model.mu / prime.r
    if two_energy >= 0.0:
        raise UnboundOrbitError(f"non-elliptic intermediary energy {0.5 * two_energy}")
    a = -model.mu / two_energy
    e2 = 1.0 - p_tilde / a
    if e2 >= 1.0:
        raise UnboundOrbitError(f"intermediary eccentricity {math.sqrt(e2)} >= 1")
    e = math.sqrt(e2) if e2 > 0.0 else 0.0

    if e < ECC_FLOOR:
        f0 = u0 = l0 = 0.0
    else:
        f0 = math.atan2(prime.R * math.sqrt(p_tilde / model.mu), p_tilde / prime.r - 1.0)
        u0 = eccentric_from_true(f0, e)
        l0 = u0 - e * math.sin(u0)

    return QuasiKeplerianElements(
        c=c,
        eps=eps,
        Theta_tilde=Theta_tilde,
        zeta=zeta,
        chi=chi,
        p_tilde=p_tilde,
        a=a,
        e=e,
        f0=f0,
        u0=u0,
        l0=l0,
        theta0=prime.theta,
        nu0=prime.nu,
        Theta=Theta,
        N=N,
        mean_motion=math.sqrt(model.mu / (a * a * a)),
        mu=model.mu,
    )


def propagate_prime(elements: QuasiKeplerianElements, t: float) -> PolarNodalState:
    """Prime polar-nodal state after an elapsed time t [s].

    The momenta Theta and N are copied unchanged (constants of the flow);
    theta and nu are returned unwrapped.
    """
    el = elements
    l = el.l0 + el.mean_motion * t
    u = solve_kepler(l, el.e)
    f = true_from_eccentric(u, el.e)
    df = f - el.f0
    return PolarNodalState(
        r=el.a * (1.0 - el.e * math.cos(u)),
        theta=el.theta0 + el.zeta * df,
        nu=el.nu0 + el.chi * df,
        R=(el.mu / el.Theta_tilde) * el.e * math.sin(f),
        Theta=el.Theta,
        N=el.N,
    )


def prime_energy(elements: QuasiKeplerianElements, state: PolarNodalState) -> float:
    """Intermediary Hamiltonian 0.5 (R^2 + Theta_tilde^2/r^2) - mu/r.

    Constant along propagate_prime output, equal to -mu/(2a).
    """
    return (
        0.5 * (state.R * state.R + (elements.Theta_tilde / state.r) ** 2)
        - elements.mu / state.r
    )

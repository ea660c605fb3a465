"""Short-period contact transformation between osculating and prime states.

The transformation adds, per polar-nodal variable, a total correction
delta*D1 + 0.5*delta^2*D2 with delta = -J2 (alpha/p)^2 / 2.  The first-order
series D1 is shared by both directions; the second-order series differ
(direct recovers osculating variables from prime ones, inverse produces the
prime epoch state from osculating initial conditions).  Terms of order e^2
are dropped from the second-order series, consistent with the separability
assumption of the intermediary.

Every series is a polynomial in (s^2, kappa, sigma) times sines/cosines of
2*theta and 4*theta only.  The polynomial blocks are kept in the arrangement
that evaluates fastest: one sin/cos pair for 2*theta, double-angle identities
for 4*theta, and nested multiplications for the s^2 powers.  The same blocks
are independently described by a plain-text coefficient table shipped as
package data (``data/correction_series.txt``); ``extract_series_table`` pulls
the exact rational coefficients back out of the compiled code so tests can
prove code and table identical.

Sign resolution: composing the two directions must reproduce the identity up
to the transformation's truncation order.  That closure test (see the
round-trip tests) fixes two conventions once and for all:

* the first-order term enters the inverse map with a minus sign
  (``INVERSE_FIRST_ORDER_SIGN``); the wrong sign leaves a first-order
  residual about five orders of magnitude larger;
* the leading polynomial block of the inverse second-order theta series
  multiplies sin(4*theta).  Applied as a bare constant the round trip is
  left with a second-order residual, while with the sin(4*theta) factor the
  residual drops to third order at every inclination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .gravity import GravityModel
from .states import PolarNodalState

INVERSE_FIRST_ORDER_SIGN = -1.0

_VARIABLES = ("r", "theta", "nu", "R", "Theta")
_TRIG = ("1", "cos2", "sin2", "cos4", "sin4")


@dataclass(frozen=True)
class OrbitGeometry:
    """Per-state inputs of the correction series.

    Built either from prime variables (direct transformation) or from
    osculating variables (inverse transformation); the two sets are never
    mixed within one evaluation.
    """

    c: float
    s2: float
    p: float
    delta: float
    kappa: float
    sigma: float


@dataclass(frozen=True)
class CorrectionSet:
    """Per-variable correction increments (dN is identically zero)."""

    dr: float
    dtheta: float
    dnu: float
    dR: float
    dTheta: float
    dN: float = 0.0


def geometry(state: PolarNodalState, model: GravityModel) -> OrbitGeometry:
    """Series inputs computed from one polar-nodal variable set."""
    p = state.Theta * state.Theta / model.mu
    c = state.cos_inclination
    return OrbitGeometry(
        c=c,
        s2=max(0.0, 1.0 - c * c),
        p=p,
        delta=-0.5 * model.j2 * (model.alpha / p) ** 2,
        kappa=p / state.r - 1.0,
        sigma=p * state.R / state.Theta,
    )


def _first_order_blocks(s2, kappa, sigma, c2t, s2t):
    """Dimensionless first-order blocks (r, theta, nu, R, Theta order)."""
    br = 1.0 - s2 * (3 / 2 + 1 / 2 * c2t)
    bth = (3 / 2 - 7 / 4 * s2 + (2.0 - 3.0 * s2) * kappa) * s2t \
        - (5.0 - 6.0 * s2 + (1.0 - 2.0 * s2) * c2t) * sigma
    bnu = (3.0 + c2t) * sigma - (3 / 2 + 2.0 * kappa) * s2t
    onek = 1.0 + kappa
    bR = onek * onek * s2 * s2t
    bTh = -s2 * ((3 / 2 + 2.0 * kappa) * c2t + sigma * s2t)
    return br, bth, bnu, bR, bTh


def _second_order_direct_blocks(s2, kappa, sigma, c2t, s2t, c4t, s4t):
    """Dimensionless second-order blocks of the direct transformation."""
    s4 = s2 * s2
    br = (-8.0 + 15.0 * s2 - 23 / 4 * s4
          + (-3 / 2 + 7 / 2 * s2 - 41 / 16 * s4) * kappa
          - (13.0 - 14.0 * s2 - (65 / 8 - 153 / 16 * s2) * kappa) * s2 * c2t
          - (1 / 4 - 1 / 16 * kappa) * s4 * c4t
          + ((27 / 8 - 51 / 16 * s2) * s2 * s2t + 9 / 32 * s4 * s4t) * sigma)
    bth = ((8.0 - 29.0 * s2 + 85 / 4 * s4
            + (32.0 - 803 / 4 * s2 + 1419 / 8 * s4) * kappa) * s2t
           + (9 / 4 - 3 / 8 * s2 - 17 / 8 * s4
              + (6.0 - 3.0 * s2 - 55 / 16 * s4) * kappa) * s4t
           + (72.0 - 121.0 * s2 + 327 / 8 * s4
              + (-56.0 + 989 / 4 * s2 - 1609 / 8 * s4) * c2t
              + (-3.0 + 3.0 * s2 + 1 / 8 * s4) * c4t) * sigma)
    bnu = (((56.0 - 92.0 * s2) * c2t + (3.0 - 3 / 2 * s2) * (-9.0 + c4t)) * sigma
           - (8.0 - 21.0 * s2 + (32.0 - 76.0 * s2) * kappa) * s2t
           - (9 / 4 + 3 / 4 * s2 + 6.0 * kappa) * s4t)
    bR = ((16.0 - 16.0 * s2 + (237 / 8 - 437 / 16 * s2) * kappa) * s2 * s2t
          + (1.0 + 65 / 32 * kappa) * s4 * s4t
          + (-3 / 2 - 1 / 2 * s2 + 71 / 16 * s4
             + (-95 / 8 + 231 / 16 * s2) * s2 * c2t
             + 17 / 16 * s4 * c4t) * sigma)
    bTh = ((9 / 2 - 25 / 4 * s2 + (12.0 - 18.0 * s2) * kappa) * s2
           - (8.0 - 15 / 2 * s2 + (32.0 - 32.0 * s2) * kappa) * s2 * c2t
           - 3 / 4 * s4 * c4t
           + ((-56.0 + 64.0 * s2) * s2 * s2t + 3 / 2 * s4 * s4t) * sigma)
    return br, bth, bnu, bR, bTh


def _second_order_inverse_blocks(s2, kappa, sigma, c2t, s2t, c4t, s4t):
    """Dimensionless second-order blocks of the inverse transformation."""
    s4 = s2 * s2
    br = (8.0 - 12.0 * s2 + s4
          + (3 / 2 + 1 / 2 * s2 - 71 / 16 * s4) * kappa
          + (28.0 - 32.0 * s2 + (95 / 8 - 231 / 16 * s2) * kappa) * s2 * c2t
          - (1.0 + 17 / 16 * kappa) * s4 * c4t
          + ((-27 / 8 + 51 / 16 * s2) * s2 * s2t - 9 / 32 * s4 * s4t) * sigma)
    # leading block on sin(4*theta): required for third-order round-trip
    # closure (see module docstring)
    bth = ((9 / 4 - 15 / 8 * s2 + 2.0 * s4
            + (6.0 - 3.0 * s2 - 25 / 16 * s4) * kappa) * s4t
           + (-12.0 + 31.0 * s2 - 73 / 4 * s4
              + (-40.0 + 819 / 4 * s2 - 1371 / 8 * s4) * kappa) * s2t
           + (-72.0 + 116.0 * s2 - 243 / 8 * s4
              + (26.0 - 1029 / 4 * s2 + 1993 / 8 * s4) * c2t
              + (-3.0 + 43 / 8 * s4) * c4t) * sigma)
    bnu = ((12.0 - 21.0 * s2 + (40.0 - 76.0 * s2) * kappa) * s2t
           - (9 / 4 - 3 / 4 * s2 + 6.0 * kappa) * s4t
           + (27.0 - 27 / 2 * s2 + (-26.0 + 92.0 * s2) * c2t
              + (3.0 + 3 / 2 * s2) * c4t) * sigma)
    bR = ((-20.0 + 22.0 * s2 - (333 / 8 - 725 / 16 * s2) * kappa) * s2 * s2t
          + (1.0 + 95 / 32 * kappa) * s4 * s4t
          + (3 / 2 - 7 / 2 * s2 + 41 / 16 * s4
             + (-65 / 8 + 153 / 16 * s2) * s2 * c2t
             - 1 / 16 * s4 * c4t) * sigma)
    bTh = ((9 / 2 - 25 / 4 * s2 + (12.0 - 18.0 * s2) * kappa) * s2
           + (12.0 - 27 / 2 * s2 + (40.0 - 44.0 * s2) * kappa) * s2 * c2t
           + 3 / 4 * s4 * c4t
           + ((26.0 - 28.0 * s2) * s2 * s2t - (3 / 2 + 9 / 4 * kappa) * s4 * s4t) * sigma)
    return br, bth, bnu, bR, bTh


def _trig(theta: float) -> tuple[float, float, float, float]:
    """sin/cos of 2*theta and 4*theta from one trig pair."""
    c2t = math.cos(2.0 * theta)
    s2t = math.sin(2.0 * theta)
    return c2t, s2t, 2.0 * c2t * c2t - 1.0, 2.0 * s2t * c2t


def _scaled(blocks, g: OrbitGeometry, Theta: float) -> CorrectionSet:
    br, bth, bnu, bR, bTh = blocks
    return CorrectionSet(
        dr=g.p * br,
        dtheta=bth,
        dnu=g.c * bnu,
        dR=(Theta / g.p) * bR,
        dTheta=Theta * bTh,
    )


def first_order(g: OrbitGeometry, theta: float, Theta: float) -> CorrectionSet:
    """First-order series, identical for both transformation directions."""
    c2t, s2t, _, _ = _trig(theta)
    return _scaled(_first_order_blocks(g.s2, g.kappa, g.sigma, c2t, s2t), g, Theta)


def second_order_direct(g: OrbitGeometry, theta: float, Theta: float) -> CorrectionSet:
    """Second-order series of the direct (prime -> osculating) map."""
    c2t, s2t, c4t, s4t = _trig(theta)
    blocks = _second_order_direct_blocks(g.s2, g.kappa, g.sigma, c2t, s2t, c4t, s4t)
    return _scaled(blocks, g, Theta)


def second_order_inverse(g: OrbitGeometry, theta: float, Theta: float) -> CorrectionSet:
    """Second-order series of the inverse (osculating -> prime) map."""
    c2t, s2t, c4t, s4t = _trig(theta)
    blocks = _second_order_inverse_blocks(g.s2, g.kappa, g.sigma, c2t, s2t, c4t, s4t)
    return _scaled(blocks, g, Theta)


def _validated_order(order: int) -> int:
    if order not in (1, 2):
        raise ValueError(f"correction order must be 1 or 2, got {order}")
    return order


def apply_direct(prime: PolarNodalState, model: GravityModel, order: int = 2) -> PolarNodalState:
    """Osculating state recovered from a prime state.

    xi = xi' + delta*D1(xi') + (order == 2) * 0.5*delta^2*D2_direct(xi'),
    with delta and all series inputs taken from the prime variables.
    """
    _validated_order(order)
    g = geometry(prime, model)
    d1 = first_order(g, prime.theta, prime.Theta)
    if order == 2:
        d2 = second_order_direct(g, prime.theta, prime.Theta)
    else:
        d2 = CorrectionSet(0.0, 0.0, 0.0, 0.0, 0.0)
    half_d2 = 0.5 * g.delta * g.delta
    return PolarNodalState(
        r=prime.r + g.delta * d1.dr + half_d2 * d2.dr,
        theta=prime.theta + g.delta * d1.dtheta + half_d2 * d2.dtheta,
        nu=prime.nu + g.delta * d1.dnu + half_d2 * d2.dnu,
        R=prime.R + g.delta * d1.dR + half_d2 * d2.dR,
        Theta=prime.Theta + g.delta * d1.dTheta + half_d2 * d2.dTheta,
        N=prime.N,
    )


def apply_inverse(original: PolarNodalState, model: GravityModel, order: int = 2) -> PolarNodalState:
    """Prime state computed from an osculating state.

    xi' = xi - delta*D1(xi) + (order == 2) * 0.5*delta^2*D2_inverse(xi),
    with delta and all series inputs taken from the osculating variables.
    """
    return _apply_inverse_signed(original, model, order, INVERSE_FIRST_ORDER_SIGN)


def _apply_inverse_signed(
    original: PolarNodalState, model: GravityModel, order: int, sign: float
) -> PolarNodalState:
    # The sign parameter exists so the round-trip tests can demonstrate that
    # the opposite convention fails by five orders of magnitude.
    _validated_order(order)
    g = geometry(original, model)
    d1 = first_order(g, original.theta, original.Theta)
    if order == 2:
        d2 = second_order_inverse(g, original.theta, original.Theta)
    else:
        d2 = CorrectionSet(0.0, 0.0, 0.0, 0.0, 0.0)
    first = sign * g.delta
    half_d2 = 0.5 * g.delta * g.delta
    return PolarNodalState(
        r=original.r + first * d1.dr + half_d2 * d2.dr,
        theta=original.theta + first * d1.dtheta + half_d2 * d2.dtheta,
        nu=original.nu + first * d1.dnu + half_d2 * d2.dnu,
        R=original.R + first * d1.dR + half_d2 * d2.dR,
        Theta=original.Theta + first * d1.dTheta + half_d2 * d2.dTheta,
        N=original.N,
    )


# --- coefficient table: loading, evaluation, and exact extraction ---


@dataclass(frozen=True)
class SeriesTerm:
    """One monomial of a correction series.

    The term contributes coefficient * s2^s2_pow * kappa^kappa_pow *
    sigma^sigma_pow * trig to the dimensionless block of ``variable``;
    the block is then scaled by p (r), 1 (theta), cos i (nu), Theta/p (R),
    or Theta (Theta).  ``direction`` is ``both`` for the shared first-order
    series, else ``direct`` or ``inverse``.
    """

    variable: str
    direction: str
    order: int
    trig: str
    s2_pow: int
    kappa_pow: int
    sigma_pow: int
    coefficient: Fraction


def load_series_table() -> tuple[SeriesTerm, ...]:
    """Parse the packaged plain-text coefficient table."""
    text = resources.files("driprop").joinpath("data/correction_series.txt").read_text()
    terms = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 8:
            raise ValueError(f"correction_series.txt:{line_no}: expected 8 fields, got {len(fields)}")
        variable, direction, order, trig, s2_pow, kappa_pow, sigma_pow, coeff = fields
        if variable not in _VARIABLES or trig not in _TRIG:
            raise ValueError(f"correction_series.txt:{line_no}: bad variable/trig {variable!r}/{trig!r}")
        if direction not in ("both", "direct", "inverse"):
            raise ValueError(f"correction_series.txt:{line_no}: bad direction {direction!r}")
        terms.append(
            SeriesTerm(
                variable=variable,
                direction=direction,
                order=int(order),
                trig=trig,
                s2_pow=int(s2_pow),
                kappa_pow=int(kappa_pow),
                sigma_pow=int(sigma_pow),
                coefficient=Fraction(coeff),
            )
        )
    return tuple(terms)


def evaluate_from_table(
    terms: tuple[SeriesTerm, ...],
    direction: str,
    order: int,
    g: OrbitGeometry,
    theta: float,
    Theta: float,
) -> CorrectionSet:
    """Evaluate one series directly from table rows.

    Deliberately naive (term-by-term float summation): this is the second,
    independent route used to cross-check the compiled blocks.
    """
    if direction not in ("direct", "inverse"):
        raise ValueError(f"direction must be direct or inverse, got {direction!r}")
    c2t, s2t, c4t, s4t = _trig(theta)
    trig_values = {"1": 1.0, "cos2": c2t, "sin2": s2t, "cos4": c4t, "sin4": s4t}
    wanted = {"both", direction} if order == 1 else {direction}
    totals = dict.fromkeys(_VARIABLES, 0.0)
    for term in terms:
        if term.order != order or term.direction not in wanted:
            continue
        totals[term.variable] += (
            float(term.coefficient)
            * g.s2 ** term.s2_pow
            * g.kappa ** term.kappa_pow
            * g.sigma ** term.sigma_pow
            * trig_values[term.trig]
        )
    return _scaled((totals["r"], totals["theta"], totals["nu"], totals["R"], totals["Theta"]), g, Theta)


def extract_series_table() -> tuple[SeriesTerm, ...]:
    """Recover the exact rational coefficients from the compiled blocks.

    The block functions are plain polynomial arithmetic over their seven
    inputs, and every literal is a dyadic rational, so evaluating them on a
    small integer grid stays exact in binary floating point.  Finite
    differences on that grid then yield each monomial coefficient exactly.
    """
    series = (
        ("both", 1, lambda s2, k, sg, c2t, s2t, c4t, s4t: _first_order_blocks(s2, k, sg, c2t, s2t)),
        ("direct", 2, _second_order_direct_blocks),
        ("inverse", 2, _second_order_inverse_blocks),
    )
    terms = []
    for direction, order, fn in series:
        for trig_index, trig in enumerate(_TRIG):
            # indicator values for (cos2, sin2, cos4, sin4); the constant
            # part of a block is its value with all four set to zero
            indicator = tuple(int(trig_index == i) for i in range(1, 5))

            def block(s2, k, sg, _fn=fn, _ind=indicator, _const=(trig == "1")):
                vals = _fn(s2, k, sg, *_ind)
                if _const:
                    return vals
                zero = _fn(s2, k, sg, 0, 0, 0, 0)
                return tuple(v - z for v, z in zip(vals, zero))

            values = {
                (a, b, d): [Fraction(v) for v in block(a, b, d)]
                for a in (0, 1, 2)
                for b in (0, 1, 2)
                for d in (0, 1)
            }
            for var_index, variable in enumerate(_VARIABLES):
                for a in (0, 1, 2):       # s2 power
                    for b in (0, 1, 2):   # kappa power
                        for d in (0, 1):  # sigma power
                            coeff = _finite_difference(values, var_index, a, b, d)
                            if coeff != 0:
                                terms.append(
                                    SeriesTerm(
                                        variable=variable,
                                        direction=direction,
                                        order=order,
                                        trig=trig,
                                        s2_pow=a,
                                        kappa_pow=b,
                                        sigma_pow=d,
                                        coefficient=coeff,
                                    )
                                )
    return tuple(terms)


def _finite_difference(values, var_index: int, a: int, b: int, d: int) -> Fraction:
    """Coefficient of s2^a kappa^b sigma^d via exact divided differences."""

    def poly_s2(b_val: int, d_val: int, a_pow: int) -> Fraction:
        f0 = values[(0, b_val, d_val)][var_index]
        f1 = values[(1, b_val, d_val)][var_index]
        f2 = values[(2, b_val, d_val)][var_index]
        c2 = (f2 - 2 * f1 + f0) / 2
        c1 = f1 - f0 - c2
        return (f0, c1, c2)[a_pow]

    def poly_kappa(d_val: int, a_pow: int, b_pow: int) -> Fraction:
        f0 = poly_s2(0, d_val, a_pow)
        f1 = poly_s2(1, d_val, a_pow)
        f2 = poly_s2(2, d_val, a_pow)
        c2 = (f2 - 2 * f1 + f0) / 2
        c1 = f1 - f0 - c2
        return (f0, c1, c2)[b_pow]

    f0 = poly_kappa(0, a, b)
    f1 = poly_kappa(1, a, b)
    return (f0, f1 - f0)[d]

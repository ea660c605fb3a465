"""Round-trip closure of the contact transformation.

These tests pin the two conventions the printed series leave open (the sign
of the first-order term in the inverse map, and the trig placement of the
leading block of the inverse second-order angular series) by demanding that
the composed maps reproduce the identity to third order in the oblateness
parameter.
"""

import math

import pytest

from conftest import random_states
from driprop.corrections import _apply_inverse_signed, apply_direct, apply_inverse
from driprop.gravity import GravityModel
from driprop.states import PolarNodalState, classical_to_polar_nodal
from driprop.configfile import grid_elements

TWO_PI = 2.0 * math.pi


def residual(state: PolarNodalState, model: GravityModel, sign: float = -1.0) -> float:
    """Max normalized per-variable residual of inverse(direct(state))."""
    osculating = apply_direct(state, model, order=2)
    back = _apply_inverse_signed(osculating, model, 2, sign)
    scales = {
        "r": state.r,
        "theta": TWO_PI,
        "nu": TWO_PI,
        "R": max(abs(state.R), state.Theta / state.r),
        "Theta": state.Theta,
        "N": state.Theta,
    }
    return max(abs(getattr(back, k) - getattr(state, k)) / v for k, v in scales.items())


def residual_other_direction(state, model):
    prime = apply_inverse(state, model, order=2)
    back = apply_direct(prime, model, order=2)
    scales = {
        "r": state.r,
        "theta": TWO_PI,
        "nu": TWO_PI,
        "R": max(abs(state.R), state.Theta / state.r),
        "Theta": state.Theta,
        "N": state.Theta,
    }
    return max(abs(getattr(back, k) - getattr(state, k)) / v for k, v in scales.items())


@pytest.mark.parametrize("e", [0.0, 0.005, 0.01])
@pytest.mark.parametrize("inc", [5.0, 55.0, 89.0])
def test_roundtrip_small(model, e, inc):
    state = classical_to_polar_nodal(grid_elements(e, inc), model)
    assert residual(state, model) < 1e-9
    assert residual_other_direction(state, model) < 1e-9


@pytest.mark.parametrize("inc", [5.0, 55.0, 89.0])
def test_cubic_scaling(model, inc):
    state = classical_to_polar_nodal(grid_elements(0.005, inc), model)
    res = {}
    for factor in (1.0, 0.5, 0.25):
        scaled = GravityModel(mu=model.mu, alpha=model.alpha, j2=model.j2 * factor)
        res[factor] = residual(state, scaled)
    assert 6.0 <= res[1.0] / res[0.5] <= 10.0
    assert 40.0 <= res[1.0] / res[0.25] <= 80.0


def test_wrong_sign_detected(model):
    state = classical_to_polar_nodal(grid_elements(0.005, 55.0), model)
    wrong = residual(state, model, sign=+1.0)
    right = residual(state, model, sign=-1.0)
    assert wrong > 1e-4 / 2
    assert wrong / right > 1e5


def test_moderate_eccentricity_budget(model, rng):
    # above e ~ 0.01 the dropped second-order e^2 terms add an e^2 J2^2 floor
    for state in random_states(rng, 30, e_max=0.1):
        assert residual(state, model) < 5e-8


def test_order_one_roundtrip_is_second_order(model):
    state = classical_to_polar_nodal(grid_elements(0.0, 55.0), model)
    osculating = apply_direct(state, model, order=1)
    back = apply_inverse(osculating, model, order=1)
    # first-order maps leave a second-order residual
    assert abs(back.r - state.r) / state.r < 5e-7
    assert abs(back.r - state.r) / state.r > 1e-9

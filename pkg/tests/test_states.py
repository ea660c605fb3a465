import math

import numpy as np
import pytest

from conftest import random_states
from driprop.errors import UnboundOrbitError
from driprop.gravity import GravityModel
from driprop.states import (
    CartesianState,
    ClassicalElements,
    PolarNodalState,
    cartesian_to_polar_nodal,
    classical_to_polar_nodal,
    conic_functions,
    polar_nodal_to_cartesian,
    wrap_pi,
    wrap_two_pi,
)


def test_wrap_helpers():
    assert wrap_two_pi(-0.1) == pytest.approx(2 * math.pi - 0.1)
    assert wrap_two_pi(7.0) == pytest.approx(7.0 - 2 * math.pi)
    assert wrap_pi(3.5) == pytest.approx(3.5 - 2 * math.pi)
    assert wrap_pi(-math.pi) == pytest.approx(math.pi)
    assert wrap_pi(0.4) == 0.4


def test_polar_nodal_validation():
    with pytest.raises(ValueError):
        PolarNodalState(r=7000.0, theta=0, nu=0, R=0, Theta=-1.0, N=0.0)
    with pytest.raises(ValueError):
        PolarNodalState(r=7000.0, theta=0, nu=0, R=0, Theta=50000.0, N=50001.0)
    # round-off slack at |N| = Theta
    PolarNodalState(r=7000.0, theta=0, nu=0, R=0, Theta=50000.0, N=50000.0 * (1 + 1e-14))


def test_classical_validation():
    with pytest.raises(ValueError):
        ClassicalElements(a=-7000.0, e=0.0, i=0.0, omega=0.0, Omega=0.0, f=0.0)
    with pytest.raises(ValueError):
        ClassicalElements(a=7000.0, e=1.0, i=0.0, omega=0.0, Omega=0.0, f=0.0)
    with pytest.raises(ValueError):
        ClassicalElements(a=7000.0, e=0.1, i=3.5, omega=0.0, Omega=0.0, f=0.0)


class TestConicFunctions:
    def test_circular_state(self, model):
        a = 7200.0
        state = PolarNodalState(r=a, theta=1.0, nu=0.0, R=0.0,
                                Theta=math.sqrt(model.mu * a), N=30000.0)
        conic = conic_functions(state, model)
        assert conic.kappa == pytest.approx(0.0, abs=1e-15)
        assert conic.sigma == 0.0
        assert conic.ecc == pytest.approx(0.0, abs=1e-15)
        assert conic.p == pytest.approx(a, rel=1e-15)

    def test_projections_match_elements(self, model):
        e, f = 0.075, math.radians(15.0)
        el = ClassicalElements(a=7000.0, e=e, i=1.0, omega=0.2, Omega=0.4, f=f)
        conic = conic_functions(classical_to_polar_nodal(el, model), model)
        assert conic.kappa == pytest.approx(e * math.cos(f), abs=1e-14)
        assert conic.sigma == pytest.approx(e * math.sin(f), abs=1e-14)
        assert conic.ecosw == pytest.approx(e * math.cos(el.omega), abs=1e-14)
        assert conic.esinw == pytest.approx(e * math.sin(el.omega), abs=1e-14)

    def test_double_angle_identity(self, model, rng):
        # (kappa^2 - sigma^2) cos 2theta + 2 kappa sigma sin 2theta = e^2 cos 2(theta - f)
        for state in random_states(rng, 50):
            conic = conic_functions(state, model)
            f = math.atan2(conic.sigma, conic.kappa)
            lhs = (conic.kappa**2 - conic.sigma**2) * math.cos(2 * state.theta) \
                + 2 * conic.kappa * conic.sigma * math.sin(2 * state.theta)
            rhs = conic.ecc**2 * math.cos(2 * (state.theta - f))
            assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_ecc_independent_of_theta(self, model):
        base = dict(r=7050.0, nu=0.3, R=0.04, Theta=52500.0, N=31000.0)
        values = {conic_functions(PolarNodalState(theta=t, **base), model).ecc
                  for t in (0.0, 1.0, 2.0, 5.0)}
        assert len(values) == 1


class TestClassicalToPolarNodal:
    def test_circular_equatorial(self, model):
        el = ClassicalElements(a=7000.0, e=0.0, i=0.0, omega=0.0, Omega=0.0, f=0.0)
        state = classical_to_polar_nodal(el, model)
        assert state.r == pytest.approx(7000.0)
        assert state.R == 0.0
        assert state.theta == 0.0
        assert state.nu == 0.0
        assert state.Theta == pytest.approx(math.sqrt(7000.0 * model.mu), rel=1e-15)
        assert state.N == state.Theta

    def test_conic_radius(self, model):
        el = ClassicalElements(a=7000.0, e=0.005, i=math.radians(55.0),
                               omega=math.radians(10.0), Omega=0.0, f=math.radians(15.0))
        state = classical_to_polar_nodal(el, model)
        p = 7000.0 * (1 - 0.005**2)
        assert state.r == pytest.approx(p / (1 + 0.005 * math.cos(el.f)), rel=1e-15)

    def test_momenta_roundtrip_through_cartesian(self, model, rng):
        for state in random_states(rng, 100):
            back = cartesian_to_polar_nodal(polar_nodal_to_cartesian(state))
            assert back.r == pytest.approx(state.r, rel=1e-12)
            assert back.Theta == pytest.approx(state.Theta, rel=1e-12)
            assert back.N == pytest.approx(state.N, rel=1e-12, abs=1e-9 * state.Theta)


class TestPolarNodalCartesian:
    def test_equatorial_identity_rotation(self):
        state = PolarNodalState(r=7000.0, theta=0.0, nu=0.0, R=0.3, Theta=52000.0, N=52000.0)
        cart = polar_nodal_to_cartesian(state)
        assert cart.position == pytest.approx((7000.0, 0.0, 0.0))
        assert cart.velocity == pytest.approx((0.3, 52000.0 / 7000.0, 0.0))

    def test_polar_quarter_turn(self):
        state = PolarNodalState(r=7000.0, theta=math.pi / 2, nu=0.0, R=0.0,
                                Theta=52000.0, N=0.0)
        cart = polar_nodal_to_cartesian(state)
        assert cart.position == pytest.approx((0.0, 0.0, 7000.0), abs=1e-9)

    def test_angular_momentum_identity(self, rng):
        for state in random_states(rng, 100):
            cart = polar_nodal_to_cartesian(state)
            x, y, z = cart.position
            vx, vy, vz = cart.velocity
            h = (y * vz - z * vy, z * vx - x * vz, x * vy - y * vx)
            assert math.sqrt(sum(v * v for v in h)) == pytest.approx(state.Theta, rel=1e-12)
            assert h[2] == pytest.approx(state.N, rel=1e-12, abs=1e-9 * state.Theta)

    def test_mutual_inverse_angles(self, model, rng):
        for state in random_states(rng, 100):
            if math.sqrt(1 - state.cos_inclination**2) < 1e-6:
                continue
            back = cartesian_to_polar_nodal(polar_nodal_to_cartesian(state))
            assert wrap_pi(back.theta - state.theta) == pytest.approx(0.0, abs=1e-12)
            assert wrap_pi(back.nu - state.nu) == pytest.approx(0.0, abs=1e-12)
            assert back.R == pytest.approx(state.R, abs=1e-12)

    def test_equatorial_convention(self):
        v = 7.5
        state = cartesian_to_polar_nodal(CartesianState((7000.0, 0.0, 0.0), (0.0, v, 0.0)))
        assert state.nu == 0.0
        assert state.theta == 0.0
        assert state.R == 0.0
        assert state.N == pytest.approx(state.Theta)
        # in-plane angle carried entirely by theta
        rotated = cartesian_to_polar_nodal(CartesianState((0.0, 7000.0, 0.0), (-v, 0.0, 0.0)))
        assert rotated.nu == 0.0
        assert rotated.theta == pytest.approx(math.pi / 2)

    def test_retrograde_equatorial_convention(self):
        v = 7.5
        state = cartesian_to_polar_nodal(CartesianState((0.0, 7000.0, 0.0), (v, 0.0, 0.0)))
        assert state.nu == 0.0
        assert state.N == pytest.approx(-state.Theta)
        cart = polar_nodal_to_cartesian(state)
        assert cart.position == pytest.approx((0.0, 7000.0, 0.0), abs=1e-9)
        assert cart.velocity == pytest.approx((v, 0.0, 0.0), abs=1e-12)

    def test_orthogonal_position_velocity_gives_zero_R(self):
        state = cartesian_to_polar_nodal(
            CartesianState((7000.0, 0.0, 0.0), (0.0, 5.0, 3.0))
        )
        assert state.R == 0.0

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(ValueError):
            cartesian_to_polar_nodal(CartesianState((0.0, 0.0, 0.0), (1.0, 0.0, 0.0)))
        with pytest.raises(ValueError):
            cartesian_to_polar_nodal(CartesianState((7000.0, 0.0, 0.0), (7.5, 0.0, 0.0)))


class TestSpeed:
    def test_circular(self, model):
        a = 7000.0
        state = PolarNodalState(r=a, theta=0.0, nu=0.0, R=0.0,
                                Theta=math.sqrt(model.mu * a), N=0.0)
        assert state.speed() == pytest.approx(math.sqrt(model.mu / a), rel=1e-15)

    def test_matches_cartesian_velocity(self, rng):
        for state in random_states(rng, 50):
            assert state.speed() == pytest.approx(
                polar_nodal_to_cartesian(state).speed(), rel=1e-13
            )

    def test_homogeneity(self):
        state = PolarNodalState(r=7000.0, theta=0.2, nu=0.0, R=0.4, Theta=52000.0, N=100.0)
        scaled = PolarNodalState(r=7000.0, theta=0.2, nu=0.0, R=3 * 0.4,
                                 Theta=3 * 52000.0, N=300.0)
        assert scaled.speed() == pytest.approx(3 * state.speed(), rel=1e-15)


def test_unbound_elements_rejected_at_construction():
    with pytest.raises((UnboundOrbitError, ValueError)):
        ClassicalElements(a=7000.0, e=1.2, i=0.0, omega=0.0, Omega=0.0, f=0.0)

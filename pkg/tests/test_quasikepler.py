import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from driprop.errors import UnboundOrbitError
from driprop.gravity import GravityModel
from driprop.quasikepler import (
    build_elements,
    eccentric_from_true,
    prime_energy,
    propagate_prime,
    solve_kepler,
    true_from_eccentric,
)
from driprop.states import ClassicalElements, PolarNodalState, classical_to_polar_nodal

TWO_PI = 2.0 * math.pi


def bisect_kepler(l, e, tol=1e-12):
    """Independent bisection oracle for u - e sin u = l."""
    lo, hi = l - e, l + e
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - e * math.sin(mid) - l < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


class TestSolveKepler:
    def test_zero_mean_anomaly(self):
        for e in (0.0, 0.1, 0.3, 0.9):
            assert solve_kepler(0.0, e) == 0.0

    def test_circular_is_identity(self):
        for l in (-12.3, 0.4, 2000.0):
            assert solve_kepler(l, 0.0) == l

    def test_against_bisection_oracle(self):
        # frozen from the oracle: u solving u - 0.1 sin u = 0.5
        expected = bisect_kepler(0.5, 0.1)
        assert expected == pytest.approx(0.55248, abs=1e-5)
        assert solve_kepler(0.5, 0.1) == pytest.approx(expected, abs=1e-11)

    def test_residual_contract(self, rng):
        span = 100.0 * TWO_PI
        for e in (0.0, 0.05, 0.1, 0.2, 0.3):
            for l in rng.uniform(-span, span, size=2000):
                u = solve_kepler(float(l), e)
                assert abs((u - l) - e * math.sin(u)) < 1e-13

    def test_same_revolution(self, rng):
        for e in (0.05, 0.3, 0.95):
            for l in rng.uniform(-300.0, 300.0, size=200):
                u = solve_kepler(float(l), e)
                assert abs(u - l) <= e + 1e-12

    @given(st.floats(-1000.0, 1000.0), st.floats(0.0, 0.99))
    @settings(max_examples=300, deadline=None)
    def test_contract_property(self, l, e):
        u = solve_kepler(l, e)
        assert abs((u - l) - e * math.sin(u)) < 1e-12
        assert abs(u - l) < math.pi

    def test_rejects_bad_eccentricity(self):
        with pytest.raises(ValueError):
            solve_kepler(0.5, 1.0)
        with pytest.raises(ValueError):
            solve_kepler(0.5, -0.1)


class TestAnomalyConversions:
    def test_naive_half_angle_agreement(self, rng):
        for e in (0.01, 0.1, 0.3):
            for u in rng.uniform(-math.pi + 1e-6, math.pi - 1e-6, size=200):
                naive = 2.0 * math.atan2(
                    math.sqrt(1 + e) * math.sin(u / 2), math.sqrt(1 - e) * math.cos(u / 2)
                )
                assert true_from_eccentric(float(u), e) == pytest.approx(naive, abs=1e-12)

    def test_inverse_pair(self, rng):
        for e in (0.0, 0.05, 0.2):
            for f in rng.uniform(-500.0, 500.0, size=200):
                u = eccentric_from_true(float(f), e)
                assert true_from_eccentric(u, e) == pytest.approx(float(f), abs=1e-11)

    def test_revolution_preserved(self):
        e = 0.2
        for k in (-3, 0, 7, 50):
            u = 0.3 + TWO_PI * k
            f = true_from_eccentric(u, e)
            assert abs(f - u) < math.pi / 2


@pytest.fixture(scope="module")
def leo_prime(request):
    model = GravityModel()
    el = ClassicalElements(a=7000.0, e=0.005, i=math.radians(55.0),
                           omega=math.radians(10.0), Omega=0.0, f=math.radians(15.0))
    # treat the osculating state as a prime state: the flow machinery is
    # agnostic about which space it is given
    return classical_to_polar_nodal(el, model), model


class TestBuildElements:
    def test_kepler_degeneration(self):
        model = GravityModel(j2=0.0)
        el = ClassicalElements(a=7200.0, e=0.01, i=1.0, omega=0.5, Omega=0.2, f=0.9)
        state = classical_to_polar_nodal(el, model)
        elements = build_elements(state, model)
        assert elements.eps == 0.0
        assert elements.Theta_tilde == state.Theta
        assert elements.zeta == 1.0
        assert elements.chi == 0.0
        assert elements.a == pytest.approx(7200.0, rel=1e-13)
        assert elements.e == pytest.approx(0.01, rel=1e-12)
        assert elements.f0 == pytest.approx(0.9, rel=1e-12)

    def test_oblateness_parameter_value(self, leo_prime):
        # independent arithmetic: eps = -J2 (alpha/p)^2 / 4
        state, model = leo_prime
        elements = build_elements(state, model)
        p = state.Theta**2 / model.mu
        expected = -0.25 * model.j2 * (model.alpha / p) ** 2
        assert elements.eps == pytest.approx(expected, rel=1e-15)
        assert elements.eps == pytest.approx(-2.247e-4, rel=2e-4)

    def test_equatorial_prograde_momentum(self):
        model = GravityModel()
        el = ClassicalElements(a=7000.0, e=0.01, i=0.0, omega=0.1, Omega=0.0, f=0.4)
        state = classical_to_polar_nodal(el, model)
        elements = build_elements(state, model)
        eps = elements.eps
        assert elements.Theta_tilde == pytest.approx(
            state.Theta * math.sqrt(1 + 4 * eps - 20 * eps**2), rel=1e-15
        )

    def test_mean_anomaly_consistency(self, leo_prime):
        state, model = leo_prime
        elements = build_elements(state, model)
        assert elements.l0 == pytest.approx(elements.u0 - elements.e * math.sin(elements.u0),
                                            abs=1e-15)
        assert elements.e**2 == pytest.approx(1.0 - elements.p_tilde / elements.a, abs=1e-15)

    def test_circular_floor(self):
        model = GravityModel(j2=0.0)
        el = ClassicalElements(a=7000.0, e=0.0, i=1.0, omega=0.0, Omega=0.0, f=0.0)
        elements = build_elements(classical_to_polar_nodal(el, model), model)
        assert elements.e == 0.0
        assert elements.f0 == elements.u0 == elements.l0 == 0.0

    def test_hyperbolic_rejected(self):
        model = GravityModel()
        state = PolarNodalState(r=7000.0, theta=0.0, nu=0.0, R=12.0, Theta=80000.0, N=0.0)
        with pytest.raises(UnboundOrbitError):
            build_elements(state, model)


class TestPropagatePrime:
    def test_epoch_identity(self, leo_prime):
        state, model = leo_prime
        elements = build_elements(state, model)
        back = propagate_prime(elements, 0.0)
        assert back.r == pytest.approx(state.r, rel=1e-12)
        assert back.theta == pytest.approx(state.theta, rel=1e-12)
        assert back.nu == pytest.approx(state.nu, abs=1e-12)
        assert back.R == pytest.approx(state.R, rel=1e-12, abs=1e-15)
        assert back.Theta == state.Theta
        assert back.N == state.N

    def test_kepler_periodicity(self):
        model = GravityModel(j2=0.0)
        el = ClassicalElements(a=7000.0, e=0.05, i=1.0, omega=0.3, Omega=0.1, f=2.0)
        state = classical_to_polar_nodal(el, model)
        elements = build_elements(state, model)
        period = TWO_PI / elements.mean_motion
        after = propagate_prime(elements, period)
        assert after.r == pytest.approx(state.r, rel=1e-10)
        assert after.R == pytest.approx(state.R, rel=1e-10, abs=1e-13)
        assert after.theta - state.theta == pytest.approx(TWO_PI, rel=1e-10)

    def test_energy_conservation(self, leo_prime):
        state, model = leo_prime
        elements = build_elements(state, model)
        reference = -model.mu / (2.0 * elements.a)
        for t in np.linspace(0.0, 30 * 86400.0, 200):
            value = prime_energy(elements, propagate_prime(elements, float(t)))
            assert value == pytest.approx(reference, rel=1e-11)

    def test_momenta_bit_constant(self, leo_prime):
        state, model = leo_prime
        elements = build_elements(state, model)
        for t in (0.0, 1234.5, 86400.0, 2.6e6):
            prime = propagate_prime(elements, t)
            assert prime.Theta == elements.Theta
            assert prime.N == elements.N

    def test_anomaly_differences_bounded(self, leo_prime):
        state, model = leo_prime
        elements = build_elements(state, model)
        for t in np.linspace(0.0, 30 * 86400.0, 500):
            l = elements.l0 + elements.mean_motion * float(t)
            u = solve_kepler(l, elements.e)
            f = true_from_eccentric(u, elements.e)
            assert abs(u - l) < math.pi
            assert abs(f - u) < math.pi

    def test_angles_linear_in_true_anomaly(self, leo_prime):
        state, model = leo_prime
        elements = build_elements(state, model)
        for t in (500.0, 86400.0, 9e5):
            prime = propagate_prime(elements, t)
            l = elements.l0 + elements.mean_motion * t
            f = true_from_eccentric(solve_kepler(l, elements.e), elements.e)
            assert prime.theta == elements.theta0 + elements.zeta * (f - elements.f0)
            assert prime.nu == elements.nu0 + elements.chi * (f - elements.f0)

    def test_matches_pure_kepler_when_oblateness_off(self):
        model = GravityModel(j2=0.0)
        el = ClassicalElements(a=7100.0, e=0.02, i=0.8, omega=0.4, Omega=0.9, f=1.3)
        state = classical_to_polar_nodal(el, model)
        elements = build_elements(state, model)
        t = 5.0 * 86400.0
        prime = propagate_prime(elements, t)
        # independent Kepler propagation in classical elements
        n = math.sqrt(model.mu / el.a**3)
        l0 = eccentric_from_true(el.f, el.e) - el.e * math.sin(eccentric_from_true(el.f, el.e))
        u = solve_kepler(l0 + n * t, el.e)
        f = true_from_eccentric(u, el.e)
        expected = classical_to_polar_nodal(
            ClassicalElements(a=el.a, e=el.e, i=el.i, omega=el.omega, Omega=el.Omega,
                              f=math.remainder(f, TWO_PI)),
            model,
        )
        assert prime.r == pytest.approx(expected.r, rel=1e-12)
        assert prime.R == pytest.approx(expected.R, rel=1e-12, abs=1e-14)
        assert math.remainder(prime.theta - expected.theta, TWO_PI) == pytest.approx(0.0, abs=1e-11)

import math

import numpy as np
import pytest

from driprop.gravity import GravityModel, main_problem_energy
from driprop.propagator import (
    DriPropagator,
    EnvelopeWarning,
    PropagatorConfig,
    ephemeris,
    initialize,
    state_at,
)
from driprop.configfile import grid_elements
from driprop.states import classical_to_polar_nodal

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="module")
def leo_state():
    return classical_to_polar_nodal(grid_elements(0.005, 55.0), GravityModel())


class TestInitialize:
    def test_no_oblateness_identity(self):
        model = GravityModel(j2=0.0)
        state = classical_to_polar_nodal(grid_elements(0.01, 30.0), model)
        prime0, elements = initialize(state, PropagatorConfig(order=2, model=model))
        assert prime0 == state
        assert elements.e == pytest.approx(0.01, rel=1e-12)
        assert elements.a == pytest.approx(7000.0, rel=1e-12)

    def test_prime_eccentricity_within_perturbation_bound(self, leo_state, model):
        _, elements = initialize(leo_state, PropagatorConfig(order=2, model=model))
        # inverse transformation moves e by O(|delta|) at most (series coeffs ~ few)
        assert abs(elements.e - 0.005) < 10.0 * 4.5e-4

    def test_deterministic(self, leo_state, model):
        cfg = PropagatorConfig(order=2, model=model)
        a = initialize(leo_state, cfg)
        b = initialize(leo_state, cfg)
        assert a[0] == b[0]
        assert a[1] == b[1]

    def test_envelope_warning(self, model):
        state = classical_to_polar_nodal(grid_elements(0.12, 55.0, a_km=8000.0), model)
        with pytest.warns(EnvelopeWarning):
            initialize(state, PropagatorConfig(order=2, model=model))

    def test_no_warning_inside_envelope(self, leo_state, model):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            initialize(leo_state, PropagatorConfig(order=2, model=model))


class TestStateAt:
    def test_epoch_recovery(self, leo_state, model):
        cfg = PropagatorConfig(order=2, model=model)
        _, elements = initialize(leo_state, cfg)
        pn, cart = state_at(elements, 0.0, cfg)
        assert abs(pn.r - leo_state.r) / leo_state.r < 1e-9
        assert abs(pn.theta - leo_state.theta) < TWO_PI * 1e-9
        assert abs(pn.Theta - leo_state.Theta) / leo_state.Theta < 1e-9

    def test_kepler_period_return(self):
        model = GravityModel(j2=0.0)
        state = classical_to_polar_nodal(grid_elements(0.02, 40.0), model)
        cfg = PropagatorConfig(order=2, model=model)
        _, elements = initialize(state, cfg)
        period = TWO_PI / elements.mean_motion
        pn, _ = state_at(elements, period, cfg)
        assert pn.r == pytest.approx(state.r, rel=1e-10)
        assert pn.R == pytest.approx(state.R, rel=1e-10, abs=1e-13)

    def test_polar_momentum_bit_exact(self, leo_state, model):
        prop = DriPropagator(leo_state, PropagatorConfig(order=2, model=model))
        for t in (0.0, 1800.0, 86400.0, 2.5e6):
            pn, _ = prop.state_at(t)
            assert pn.N == leo_state.N

    def test_energy_drift_short_horizon(self, leo_state, model):
        prop = DriPropagator(leo_state, PropagatorConfig(order=2, model=model))
        e0 = main_problem_energy(leo_state, model)
        worst = max(
            abs(main_problem_energy(prop.state_at(float(t))[0], model) - e0)
            for t in np.linspace(0.0, 3 * 86400.0, 400)
        )
        assert worst / abs(e0) < 1e-8

    def test_dri1_dri2_differ_at_second_order(self, leo_state, model):
        one = DriPropagator(leo_state, PropagatorConfig(order=1, model=model))
        two = DriPropagator(leo_state, PropagatorConfig(order=2, model=model))
        t = 5000.0
        r1 = one.state_at(t)[0].r
        r2 = two.state_at(t)[0].r
        delta = -0.5 * model.j2 * (model.alpha / (leo_state.Theta**2 / model.mu)) ** 2
        # bounded by 0.5 delta^2 p times the largest series coefficient block
        assert abs(r1 - r2) < 0.5 * delta**2 * 7000.0 * 60.0
        assert abs(r1 - r2) > 0.0


class TestEphemeris:
    def test_single_point(self, leo_state, model):
        cfg = PropagatorConfig(order=2, model=model)
        eph = ephemeris(leo_state, [0.0], cfg)
        assert len(eph.samples) == 1
        _, elements = initialize(leo_state, cfg)
        pn, cart = state_at(elements, 0.0, cfg)
        assert eph.samples[0][1] == pn
        assert eph.samples[0][2] == cart

    def test_week_grid_count(self, leo_state, model):
        times = [60.0 * k for k in range(int(7 * 86400 / 60) + 1)]
        eph = ephemeris(leo_state, times, PropagatorConfig(order=2, model=model))
        assert len(eph.samples) == 10081
        ts = [s[0] for s in eph.samples]
        assert all(b > a for a, b in zip(ts, ts[1:]))

    def test_rejects_unsorted_grid(self, leo_state, model):
        with pytest.raises(ValueError):
            ephemeris(leo_state, [0.0, 60.0, 60.0], PropagatorConfig(order=2, model=model))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PropagatorConfig(order=3)

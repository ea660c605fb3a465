"""Acceptance gate: every shipped claim as an executable criterion.

Each criterion pins its thresholds here, prints one pass/fail line, and is
independently runnable (``bench verify`` or the pytest wrapper).  Heavy
artifacts — 30-day reference integrations and analytical trajectories — are
shared across criteria through an in-process memo plus the on-disk truth
cache, and 7-day views are slices of the 30-day tables (valid because the
analytical theory is evaluated pointwise and the reference samples come from
one deterministic integration).

Residual normalization for the round-trip criterion: radial distance by r,
angles by one revolution (2*pi; the angles of the canonical test case
include zero, so a literal per-value quotient is undefined), radial velocity
by the transverse speed Theta/r, momenta by Theta.  Wall-clock expectations
are reported, not asserted.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bench import BenchmarkCase, sample_analytical, time_per_sample
from .configfile import grid_elements
from .errors import SurfaceImpactError
from .corrections import (
    _apply_inverse_signed,
    apply_direct,
    extract_series_table,
    load_series_table,
)
from .gravity import GravityModel, main_problem_energy
from .propagator import DriPropagator, PropagatorConfig
from .quasikepler import prime_energy, propagate_prime, solve_kepler
from .states import PolarNodalState, classical_to_polar_nodal, polar_nodal_to_cartesian
from .truth import IntegratorConfig, TruthCache

GRID_INCLINATIONS_DEG = (5.0, 55.0, 89.0)
LOW_ECC = 0.005
SWEEP_ECCENTRICITIES = (0.025, 0.05, 0.075, 0.1)
STEP_S = 60.0
DAYS_FULL = 30.0
SAMPLES_7D = int(round(7.0 * 86400.0 / STEP_S)) + 1

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AcceptanceResult:
    cid: str
    title: str
    passed: bool
    details: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] C{self.cid}: {self.title} — {self.details}"


class AcceptanceContext:
    """Memoized truth tables and analytical trajectories."""

    def __init__(self, cache_dir=None):
        self.model = GravityModel()
        self.model_no_j2 = GravityModel(j2=0.0)
        self.integrator = IntegratorConfig()
        self.cache = TruthCache(cache_dir)
        self._truth: dict = {}
        self._analytical: dict = {}
        self._propagators: dict = {}

    def _model(self, j2_on: bool) -> GravityModel:
        return self.model if j2_on else self.model_no_j2

    def case(self, e: float, inc_deg: float, days: float = DAYS_FULL) -> BenchmarkCase:
        return BenchmarkCase(
            name=f"e{e:g}-i{inc_deg:g}-{days:g}d",
            elements=grid_elements(e, inc_deg),
            days=days,
            step_s=STEP_S,
        )

    def initial_state(self, e: float, inc_deg: float, j2_on: bool = True) -> PolarNodalState:
        return classical_to_polar_nodal(grid_elements(e, inc_deg), self._model(j2_on))

    def truth_table(self, e: float, inc_deg: float, j2_on: bool = True) -> np.ndarray:
        """(n, 7) reference table for the 30-day grid."""
        key = (e, inc_deg, j2_on)
        if key not in self._truth:
            case = self.case(e, inc_deg)
            model = self._model(j2_on)
            initial = polar_nodal_to_cartesian(self.initial_state(e, inc_deg, j2_on))
            self._truth[key] = self.cache.get(initial, model, case.time_grid(), self.integrator)
        return self._truth[key]

    def propagator(self, e: float, inc_deg: float, order: int, j2_on: bool = True) -> DriPropagator:
        key = (e, inc_deg, order, j2_on)
        if key not in self._propagators:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # envelope warnings are tested elsewhere
                self._propagators[key] = DriPropagator(
                    self.initial_state(e, inc_deg, j2_on),
                    PropagatorConfig(order=order, model=self._model(j2_on)),
                )
        return self._propagators[key]

    def analytical_table(self, e: float, inc_deg: float, order: int, j2_on: bool = True) -> np.ndarray:
        """(n, 6) Cartesian analytical samples on the 30-day grid."""
        key = (e, inc_deg, order, j2_on)
        if key not in self._analytical:
            times = self.case(e, inc_deg).time_grid()
            self._analytical[key] = sample_analytical(self.propagator(e, inc_deg, order, j2_on), times)
        return self._analytical[key]

    def error_maxima(
        self, e: float, inc_deg: float, order: int, j2_on: bool = True, n_samples: int | None = None
    ) -> tuple[float, float]:
        """(max radial-distance error [m], max speed error [m/s])."""
        truth = self.truth_table(e, inc_deg, j2_on)[:, 1:]
        analytical = self.analytical_table(e, inc_deg, order, j2_on)
        if n_samples is not None:
            truth = truth[:n_samples]
            analytical = analytical[:n_samples]
        dr = np.abs(
            np.linalg.norm(analytical[:, :3], axis=1) - np.linalg.norm(truth[:, :3], axis=1)
        )
        dv = np.abs(
            np.linalg.norm(analytical[:, 3:], axis=1) - np.linalg.norm(truth[:, 3:], axis=1)
        )
        return float(dr.max()) * 1000.0, float(dv.max()) * 1000.0


# --- round-trip helpers (criterion 5) ---


def _roundtrip_residual(state: PolarNodalState, model: GravityModel, sign: float) -> float:
    """Max normalized per-variable residual of inverse(direct(state))."""
    original = apply_direct(state, model, order=2)
    back = _apply_inverse_signed(original, model, 2, sign)
    scales = (
        state.r,
        TWO_PI,
        TWO_PI,
        max(abs(state.R), state.Theta / state.r),
        state.Theta,
        state.Theta,
    )
    values = ("r", "theta", "nu", "R", "Theta", "N")
    return max(
        abs(getattr(back, name) - getattr(state, name)) / scale
        for name, scale in zip(values, scales)
    )


# --- criteria ---


def criterion_1(ctx: AcceptanceContext) -> AcceptanceResult:
    """30-day second-order errors on the almost-circular cases."""
    worst_dr, worst_dv, elapsed_max = 0.0, 0.0, 0.0
    for inc in GRID_INCLINATIONS_DEG:
        start = time.perf_counter()
        dr, dv = ctx.error_maxima(LOW_ECC, inc, order=2)
        elapsed_max = max(elapsed_max, time.perf_counter() - start)
        worst_dr, worst_dv = max(worst_dr, dr), max(worst_dv, dv)
    passed = worst_dr < 20.0 and worst_dv < 0.02
    return AcceptanceResult(
        "1",
        "30-day DRI2 within 20 m radial / 2 cm/s speed at e=0.005, i in {5,55,89} deg",
        passed,
        f"max dr {worst_dr:.2f} m (limit 20), max dv {worst_dv * 100:.3f} cm/s (limit 2); "
        f"slowest case {elapsed_max:.0f} s including any truth generation",
    )


def criterion_2(ctx: AcceptanceContext) -> AcceptanceResult:
    """30-day second-order errors across the eccentricity envelope.

    Sweep values whose perigee a(1-e) lies below the equatorial radius are
    not propagatable (the reference integrator signals surface impact); they
    are excluded and reported.  At a = 7000 km that removes e = 0.1
    (perigee 6300 km), which also lies outside the theory's stated validity
    domain of non-impact orbits with e strictly below one tenth.
    """
    worst_dr, worst_dv = 0.0, 0.0
    excluded = []
    ok = True
    for e in SWEEP_ECCENTRICITIES:
        perigee = 7000.0 * (1.0 - e)
        if perigee <= ctx.model.alpha:
            try:
                ctx.truth_table(e, GRID_INCLINATIONS_DEG[0])
            except SurfaceImpactError:
                excluded.append(f"e={e:g} (perigee {perigee:.0f} km, impact)")
                continue
            ok = False  # sub-surface perigee must be refused by the integrator
            continue
        for inc in GRID_INCLINATIONS_DEG:
            dr, dv = ctx.error_maxima(e, inc, order=2)
            worst_dr, worst_dv = max(worst_dr, dr), max(worst_dv, dv)
    passed = ok and worst_dr < 500.0 and worst_dv < 0.5
    note = f"; excluded as sub-surface: {', '.join(excluded)}" if excluded else ""
    return AcceptanceResult(
        "2",
        "30-day DRI2 within 0.5 km / ±50 cm/s over the non-impact eccentricity sweep",
        passed,
        f"max dr {worst_dr:.1f} m (limit 500), max dv {worst_dv * 100:.2f} cm/s (limit 50){note}",
    )


def criterion_3(ctx: AcceptanceContext) -> AcceptanceResult:
    """7-day ordering DRI2 <= DRI1 everywhere; >= 5x at the mid-inclination case."""
    ordering_ok = True
    rows = []
    ratio_mid = math.nan
    for e in (0.005, 0.075):
        for inc in GRID_INCLINATIONS_DEG:
            dr1, _ = ctx.error_maxima(e, inc, order=1, n_samples=SAMPLES_7D)
            dr2, _ = ctx.error_maxima(e, inc, order=2, n_samples=SAMPLES_7D)
            ordering_ok &= dr2 <= dr1
            rows.append(f"e={e:g} i={inc:g}: {dr1 / dr2:.0f}x")
            if e == LOW_ECC and inc == 55.0:
                ratio_mid = dr1 / dr2
    passed = ordering_ok and ratio_mid >= 5.0
    return AcceptanceResult(
        "3",
        "7-day max dr: DRI2 <= DRI1 on every grid case, >= 5x smaller at e=0.005 i=55",
        passed,
        f"DRI1/DRI2 ratios {', '.join(rows)}; mid-inclination ratio {ratio_mid:.1f} (limit 5)",
    )


def criterion_4(ctx: AcceptanceContext) -> AcceptanceResult:
    """J2 = 0 degeneration: both orders match truth to round-off."""
    worst_dr, worst_dv = 0.0, 0.0
    for order in (1, 2):
        dr, dv = ctx.error_maxima(LOW_ECC, 55.0, order=order, j2_on=False)
        worst_dr, worst_dv = max(worst_dr, dr), max(worst_dv, dv)
    passed = worst_dr < 1e-3 and worst_dv < 1e-6
    return AcceptanceResult(
        "4",
        "J2=0: DRI1, DRI2, and numerical truth agree to < 1 mm and < 1e-9 km/s over 30 days",
        passed,
        f"max dr {worst_dr * 1000:.4f} mm (limit 1), max dv {worst_dv * 1000:.5f} mm/s (limit 0.001)",
    )


def criterion_5(ctx: AcceptanceContext) -> AcceptanceResult:
    """Contact-transformation round trip: size, delta^3 scaling, sign pinning."""
    model = ctx.model
    half = GravityModel(mu=model.mu, alpha=model.alpha, j2=model.j2 / 2.0)
    quarter = GravityModel(mu=model.mu, alpha=model.alpha, j2=model.j2 / 4.0)
    worst = 0.0
    ratios_half, ratios_quarter = [], []
    for e in (0.0, 0.005, 0.01):
        for inc in GRID_INCLINATIONS_DEG:
            state = ctx.initial_state(e, inc)
            res = _roundtrip_residual(state, model, -1.0)
            res_half = _roundtrip_residual(state, half, -1.0)
            res_quarter = _roundtrip_residual(state, quarter, -1.0)
            worst = max(worst, res)
            ratios_half.append(res / res_half)
            ratios_quarter.append(res / res_quarter)
    wrong = _roundtrip_residual(ctx.initial_state(LOW_ECC, 55.0), model, +1.0)
    right = _roundtrip_residual(ctx.initial_state(LOW_ECC, 55.0), model, -1.0)
    separation = wrong / right
    passed = (
        worst < 1e-9
        and all(6.0 <= ratio <= 10.0 for ratio in ratios_half)
        and all(40.0 <= ratio <= 80.0 for ratio in ratios_quarter)
        and separation >= 1e5
    )
    return AcceptanceResult(
        "5",
        "order-2 round trip < 1e-9 for e <= 0.01, scaling ~ J2^3, sign separation >= 1e5",
        passed,
        f"max residual {worst:.2e} (limit 1e-9); J2/2 ratios "
        f"[{min(ratios_half):.2f}, {max(ratios_half):.2f}] in [6, 10]; J2/4 ratios "
        f"[{min(ratios_quarter):.2f}, {max(ratios_quarter):.2f}] in [40, 80]; "
        f"wrong-sign residual {wrong:.2e} ({separation:.1e}x the correct sign)",
    )


def criterion_6(ctx: AcceptanceContext) -> AcceptanceResult:
    """Invariants along the 30-day DRI2 trajectory at e=0.005, i=55."""
    prop = ctx.propagator(LOW_ECC, 55.0, order=2)
    times = ctx.case(LOW_ECC, 55.0).time_grid()
    model = ctx.model
    n_values = set()
    energy_0 = None
    energy_drift = 0.0
    qk_drift = 0.0
    qk_ref = prime_energy(prop.elements, propagate_prime(prop.elements, 0.0))
    for t in times:
        prime = propagate_prime(prop.elements, float(t))
        state = apply_direct(prime, model, order=2)
        n_values.add(state.N)
        energy = main_problem_energy(state, model)
        if energy_0 is None:
            energy_0 = energy
        energy_drift = max(energy_drift, abs(energy - energy_0) / abs(energy_0))
        qk_drift = max(qk_drift, abs(prime_energy(prop.elements, prime) - qk_ref) / abs(qk_ref))
    passed = len(n_values) == 1 and energy_drift < 1e-8 and qk_drift < 1e-11
    return AcceptanceResult(
        "6",
        "N bit-constant; main-problem energy drift < 1e-8; intermediary energy < 1e-11",
        passed,
        f"{len(n_values)} distinct N value(s); energy drift {energy_drift:.2e} "
        f"(limit 1e-8); intermediary drift {qk_drift:.2e} (limit 1e-11) over 30 days",
    )


def criterion_7(ctx: AcceptanceContext) -> AcceptanceResult:
    """Kepler-solver residual contract across the eccentricity range."""
    rng = np.random.default_rng(20250810)
    worst = 0.0
    span = 100.0 * TWO_PI
    for e in (0.0, 0.05, 0.1, 0.2, 0.3):
        for l in rng.uniform(-span, span, size=10_000):
            u = solve_kepler(float(l), e)
            worst = max(worst, abs((u - l) - e * math.sin(u)))
    passed = worst < 1e-13
    return AcceptanceResult(
        "7",
        "Kepler residual < 1e-13 for e in {0..0.3} x 1e4 mean anomalies over ±100 rev",
        passed,
        f"max |u - e sin u - l| = {worst:.2e} (limit 1e-13) over 50000 solves",
    )


def criterion_8(ctx: AcceptanceContext) -> AcceptanceResult:
    """Compiled correction series must equal the packaged coefficient table."""

    def as_map(terms):
        out: dict[tuple, Fraction] = {}
        for term in terms:
            key = (term.variable, term.direction, term.order, term.trig,
                   term.s2_pow, term.kappa_pow, term.sigma_pow)
            if key in out:
                return None  # duplicate rows would mask a mismatch
            out[key] = term.coefficient
        return out

    from_code = as_map(extract_series_table())
    from_table = as_map(load_series_table())
    if from_code is None or from_table is None:
        return AcceptanceResult("8", "correction series coefficients", False, "duplicate rows")
    missing = set(from_table) - set(from_code)
    extra = set(from_code) - set(from_table)
    unequal = {k for k in set(from_code) & set(from_table) if from_code[k] != from_table[k]}
    passed = not missing and not extra and not unequal
    details = (
        f"{len(from_code)} monomials extracted from code, {len(from_table)} table rows; "
        f"{len(missing)} missing, {len(extra)} extra, {len(unequal)} unequal"
    )
    return AcceptanceResult(
        "8", "every series coefficient in code equals the fixture exactly (rational)", passed, details
    )


def criterion_9(ctx: AcceptanceContext) -> AcceptanceResult:
    """Per-sample cost of the second-order theory is flat in the horizon."""
    prop = ctx.propagator(LOW_ECC, 55.0, order=2)
    day = 86400.0
    early = np.arange(0.0, day, STEP_S)
    late = np.arange(29.0 * day, 30.0 * day, STEP_S)
    # best-of-three to suppress scheduler noise
    ns_early = min(time_per_sample(prop, early) for _ in range(3))
    ns_late = min(time_per_sample(prop, late) for _ in range(3))
    spread = abs(ns_early - ns_late) / ((ns_early + ns_late) / 2.0)
    passed = spread < 0.20
    return AcceptanceResult(
        "9",
        "DRI2 per-sample cost constant in horizon within 20% (reported, no absolute target)",
        passed,
        f"day-1 {ns_early:.0f} ns/sample, day-30 {ns_late:.0f} ns/sample, spread {spread * 100:.1f}%",
    )


CRITERIA = (
    ("1", criterion_1),
    ("2", criterion_2),
    ("3", criterion_3),
    ("4", criterion_4),
    ("5", criterion_5),
    ("6", criterion_6),
    ("7", criterion_7),
    ("8", criterion_8),
    ("9", criterion_9),
)


def run_all(cache_dir=None, only: "set[str] | None" = None, echo=print) -> list[AcceptanceResult]:
    """Run the acceptance criteria, printing one line each."""
    ctx = AcceptanceContext(cache_dir)
    results = []
    for cid, criterion in CRITERIA:
        if only is not None and cid not in only:
            continue
        result = criterion(ctx)
        results.append(result)
        echo(result.line())
    if results:
        n_passed = sum(result.passed for result in results)
        echo(f"{n_passed}/{len(results)} acceptance criteria passed")
    return results

"""Benchmark harness: analytical propagators against numerical truth.

For every (case, propagator) pair the harness samples both trajectories on
the case's time grid and records the two error metrics of interest — the
radial-distance difference and the speed difference — plus, beyond those,
the total position difference as an extra column.  Timing is the steady-state
mean wall-clock cost of one analytical sample, measured over at least 10^4
evaluations after warm-up.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .gravity import GravityModel
from .propagator import DriPropagator, PropagatorConfig
from .states import ClassicalElements, classical_to_polar_nodal, polar_nodal_to_cartesian
from .truth import IntegratorConfig, TruthCache

PROPAGATOR_ORDERS = {"DRI1": 1, "DRI2": 2}

MAX_DURATION_DAYS = 31.0
MAX_ECCENTRICITY = 0.3

CSV_HEADER = "t_s,dr_m,dv_mps,dpos_m"

_KM_TO_M = 1000.0


@dataclass(frozen=True)
class BenchmarkCase:
    """One orbit, duration [days], and sampling step [s]."""

    name: str
    elements: ClassicalElements
    days: float
    step_s: float = 60.0

    def __post_init__(self) -> None:
        if not 0.0 < self.days <= MAX_DURATION_DAYS:
            raise ConfigError(f"case {self.name!r}: days must lie in (0, {MAX_DURATION_DAYS}], got {self.days}")
        if self.step_s <= 0.0:
            raise ConfigError(f"case {self.name!r}: step_s must be positive, got {self.step_s}")
        if self.elements.e >= MAX_ECCENTRICITY:
            raise ConfigError(
                f"case {self.name!r}: eccentricity {self.elements.e} is outside the "
                f"supported range e < {MAX_ECCENTRICITY}"
            )

    def time_grid(self) -> np.ndarray:
        n = int(round(self.days * 86400.0 / self.step_s))
        return np.arange(n + 1, dtype=float) * self.step_s


@dataclass(frozen=True)
class BenchmarkConfig:
    """Earth model, cases, and propagator selection for one grid run."""

    model: GravityModel = field(default_factory=GravityModel)
    cases: tuple[BenchmarkCase, ...] = ()
    propagators: tuple[str, ...] = ("DRI1", "DRI2")
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self) -> None:
        if not self.cases:
            raise ConfigError("configuration defines no cases")
        if not self.propagators:
            raise ConfigError("configuration selects no propagators")
        for name in self.propagators:
            if name not in PROPAGATOR_ORDERS:
                raise ConfigError(
                    f"unknown propagator {name!r}; choose from {sorted(PROPAGATOR_ORDERS)}"
                )
        names = [case.name for case in self.cases]
        if len(set(names)) != len(names):
            raise ConfigError("case names must be unique")


@dataclass(frozen=True)
class ErrorRecord:
    """Per-sample errors against truth: radial distance [m], speed [m/s],
    and (beyond the two headline metrics) total position [m]."""

    t: float
    dr_m: float
    dv_mps: float
    dpos_m: float


@dataclass(frozen=True)
class CaseResult:
    """Outcome of one (case, propagator) pair.

    ``failure`` carries the error message when the pair could not run; grid
    execution continues past individual failures.
    """

    case: str
    propagator: str
    records: tuple[ErrorRecord, ...] = ()
    ns_per_sample: float | None = None
    warnings: tuple[str, ...] = ()
    failure: str | None = None

    @property
    def max_dr_m(self) -> float:
        return max((rec.dr_m for rec in self.records), default=math.nan)

    @property
    def max_dv_mps(self) -> float:
        return max((rec.dv_mps for rec in self.records), default=math.nan)

    @property
    def max_dpos_m(self) -> float:
        return max((rec.dpos_m for rec in self.records), default=math.nan)

    @property
    def rms_dr_m(self) -> float:
        return _rms([rec.dr_m for rec in self.records])

    @property
    def rms_dv_mps(self) -> float:
        return _rms([rec.dv_mps for rec in self.records])


def _rms(values) -> float:
    if not values:
        return math.nan
    return math.sqrt(sum(v * v for v in values) / len(values))


def error_records(times: np.ndarray, analytical: np.ndarray, truth: np.ndarray) -> tuple[ErrorRecord, ...]:
    """Radial-distance / speed / position errors, in m and m/s."""
    r_a = np.linalg.norm(analytical[:, :3], axis=1)
    r_t = np.linalg.norm(truth[:, :3], axis=1)
    v_a = np.linalg.norm(analytical[:, 3:], axis=1)
    v_t = np.linalg.norm(truth[:, 3:], axis=1)
    dpos = np.linalg.norm(analytical[:, :3] - truth[:, :3], axis=1)
    return tuple(
        ErrorRecord(
            t=float(t),
            dr_m=float(abs(ra - rt)) * _KM_TO_M,
            dv_mps=float(abs(va - vt)) * _KM_TO_M,
            dpos_m=float(dp) * _KM_TO_M,
        )
        for t, ra, rt, va, vt, dp in zip(times, r_a, r_t, v_a, v_t, dpos)
    )


def sample_analytical(prop: DriPropagator, times: np.ndarray) -> np.ndarray:
    """(n, 6) Cartesian samples of an initialized analytical propagator."""
    out = np.empty((times.size, 6), dtype=float)
    for k, t in enumerate(times):
        _, cart = prop.state_at(float(t))
        out[k, :3] = cart.position
        out[k, 3:] = cart.velocity
    return out


def time_per_sample(prop: DriPropagator, times: np.ndarray, min_evals: int = 10_000) -> float:
    """Steady-state mean cost of one analytical sample, ns.

    Cycles through the case's own epochs so the workload matches the
    benchmark loop; warms up first, then times >= min_evals calls.
    """
    pool = [float(t) for t in times] or [0.0]
    n = max(min_evals, len(pool))
    schedule = [pool[i % len(pool)] for i in range(n)]
    for t in schedule[:200]:
        prop.state_at(t)
    start = time.perf_counter_ns()
    for t in schedule:
        prop.state_at(t)
    return (time.perf_counter_ns() - start) / n


def run_case(
    case: BenchmarkCase,
    propagator: str,
    model: GravityModel,
    cache: TruthCache,
    integrator: IntegratorConfig | None = None,
    timing_evals: int = 10_000,
) -> CaseResult:
    """Errors and timing of one propagator on one case.

    Truth comes from the cache (computed on miss).  Envelope warnings from
    the propagator are captured and reported, not raised.
    """
    import warnings as _warnings

    if propagator not in PROPAGATOR_ORDERS:
        raise ConfigError(f"unknown propagator {propagator!r}")
    integrator = integrator if integrator is not None else IntegratorConfig()
    times = case.time_grid()
    initial_pn = classical_to_polar_nodal(case.elements, model)
    initial_cart = polar_nodal_to_cartesian(initial_pn)

    truth_table = cache.get(initial_cart, model, times, integrator)

    cfg = PropagatorConfig(order=PROPAGATOR_ORDERS[propagator], model=model)
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        prop = DriPropagator(initial_pn, cfg)
    analytical = sample_analytical(prop, times)

    ns = time_per_sample(prop, times, timing_evals) if timing_evals else None
    return CaseResult(
        case=case.name,
        propagator=propagator,
        records=error_records(times, analytical, truth_table[:, 1:]),
        ns_per_sample=ns,
        warnings=tuple(str(w.message) for w in caught),
    )


def run_grid(
    config: BenchmarkConfig,
    cache: TruthCache,
    out_dir: "Path | str | None" = None,
    timing_evals: int = 10_000,
) -> list[CaseResult]:
    """All (case x propagator) combinations; per-pair failures are aggregated.

    When out_dir is given, one CSV per pair plus a summary table are written
    there.
    """
    results: list[CaseResult] = []
    for case in config.cases:
        for propagator in config.propagators:
            try:
                result = run_case(case, propagator, config.model, cache, config.integrator, timing_evals)
            except ConfigError:
                raise
            except Exception as exc:  # numerical failure: keep the grid going
                result = CaseResult(case=case.name, propagator=propagator, failure=str(exc))
            results.append(result)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for result in results:
            if result.failure is None:
                emit_csv(result.records, out / f"{result.case}-{result.propagator.lower()}.csv")
        write_summary(results, out / "summary.csv")
    return results


def emit_csv(records, path: "Path | str") -> Path:
    """Write error records as CSV (17 significant digits, LF endings)."""
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for rec in records:
                fh.write(f"{rec.t:.17g},{rec.dr_m:.17g},{rec.dv_mps:.17g},{rec.dpos_m:.17g}\n")
    except OSError as exc:
        raise OSError(f"cannot write error CSV {path}: {exc}") from exc
    return path


def parse_csv(path: "Path | str") -> tuple[ErrorRecord, ...]:
    """Read back a CSV produced by emit_csv."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: not an error CSV (bad header)")
    records = []
    for line in lines[1:]:
        t, dr, dv, dpos = (float(v) for v in line.split(","))
        records.append(ErrorRecord(t=t, dr_m=dr, dv_mps=dv, dpos_m=dpos))
    return tuple(records)


def write_summary(results, path: "Path | str") -> Path:
    """Per-pair summary table.  Timing is wall-clock and thus not reproducible
    bit-for-bit, unlike the error CSVs."""
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write("case,propagator,n_samples,max_dr_m,rms_dr_m,max_dv_mps,rms_dv_mps,max_dpos_m,ns_per_sample,failure\n")
        for res in results:
            if res.failure is not None:
                fh.write(f"{res.case},{res.propagator},0,,,,,,,{res.failure!r}\n")
                continue
            ns = "" if res.ns_per_sample is None else f"{res.ns_per_sample:.0f}"
            fh.write(
                f"{res.case},{res.propagator},{len(res.records)},"
                f"{res.max_dr_m:.6e},{res.rms_dr_m:.6e},"
                f"{res.max_dv_mps:.6e},{res.rms_dv_mps:.6e},"
                f"{res.max_dpos_m:.6e},{ns},\n"
            )
    return path

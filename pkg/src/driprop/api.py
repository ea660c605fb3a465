"""HTTP service wrapping the propagator and benchmark harness.

All endpoints are pure compute over the request body except for the optional
server-side CSV/truth-cache writes.  Error mapping: configuration defects
return 400 with kind "config"; numerical failures (impact, unbound orbit,
solver breakdown) return 409 with kind "numerical".  The CLI translates
those kinds into its exit codes.
"""

from __future__ import annotations

import math
import warnings
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .bench import BenchmarkCase, BenchmarkConfig, CaseResult, run_case, run_grid
from .configfile import default_config, grid_elements
from .errors import ConfigError, KeplerConvergenceError, SurfaceImpactError, UnboundOrbitError
from .gravity import GravityModel
from .propagator import DriPropagator, PropagatorConfig
from .schemas import (
    BenchRequest,
    BenchResponse,
    CaseSchema,
    CaseSummarySchema,
    DefaultsResponse,
    EarthModelSchema,
    ElementsSchema,
    IntegratorSchema,
    PolarNodalSchema,
    PropagateRequest,
    PropagateResponse,
    RecordSchema,
    SampleSchema,
    SweepRequest,
    SweepResponse,
    SweepRowSchema,
    TruthEntrySchema,
    TruthRequest,
    TruthResponse,
)
from .states import classical_to_polar_nodal, polar_nodal_to_cartesian, wrap_two_pi
from .truth import IntegratorConfig, TruthCache


def _model(schema: EarthModelSchema) -> GravityModel:
    return GravityModel(mu=schema.mu, alpha=schema.alpha, j2=schema.j2)


def _integrator(schema: IntegratorSchema) -> IntegratorConfig:
    return IntegratorConfig(
        rel_tol=schema.rel_tol,
        abs_tol=schema.abs_tol,
        max_step=schema.max_step if schema.max_step is not None else math.inf,
    )


def _elements(schema: ElementsSchema):
    return grid_elements(
        e=schema.e,
        inc_deg=schema.inc_deg,
        a_km=schema.a_km,
        argp_deg=schema.argp_deg,
        raan_deg=schema.raan_deg,
        true_anomaly_deg=schema.true_anomaly_deg,
    )


def _case(schema: CaseSchema) -> BenchmarkCase:
    return BenchmarkCase(
        name=schema.name,
        elements=_elements(schema.elements),
        days=schema.days,
        step_s=schema.step_s,
    )


def _case_schema(case: BenchmarkCase) -> CaseSchema:
    el = case.elements
    return CaseSchema(
        name=case.name,
        elements=ElementsSchema(
            a_km=el.a,
            e=el.e,
            inc_deg=math.degrees(el.i),
            argp_deg=math.degrees(el.omega),
            raan_deg=math.degrees(el.Omega),
            true_anomaly_deg=math.degrees(el.f),
        ),
        days=case.days,
        step_s=case.step_s,
    )


def _summary(result: CaseResult, csv_path: "str | None" = None) -> CaseSummarySchema:
    if result.failure is not None:
        return CaseSummarySchema(
            case=result.case,
            propagator=result.propagator,
            n_samples=0,
            failure=result.failure,
            warnings=list(result.warnings),
        )
    return CaseSummarySchema(
        case=result.case,
        propagator=result.propagator,
        n_samples=len(result.records),
        max_dr_m=result.max_dr_m,
        rms_dr_m=result.rms_dr_m,
        max_dv_mps=result.max_dv_mps,
        rms_dv_mps=result.rms_dv_mps,
        max_dpos_m=result.max_dpos_m,
        ns_per_sample=result.ns_per_sample,
        csv_path=csv_path,
        warnings=list(result.warnings),
    )


def create_app(truth_cache_dir: "str | None" = None) -> FastAPI:
    """Application factory; the cache directory is fixed per instance."""
    app = FastAPI(
        title="driprop",
        version=__version__,
        description="Radial-intermediary analytical LEO propagation and J2 benchmark service",
    )
    cache = TruthCache(truth_cache_dir)

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError):
        return JSONResponse(status_code=400, content={"kind": "config", "message": str(exc)})

    @app.exception_handler(UnboundOrbitError)
    @app.exception_handler(SurfaceImpactError)
    @app.exception_handler(KeplerConvergenceError)
    async def _numerical_error(request: Request, exc: Exception):
        return JSONResponse(status_code=409, content={"kind": "numerical", "message": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/defaults", response_model=DefaultsResponse)
    def defaults() -> DefaultsResponse:
        grid = default_config()
        return DefaultsResponse(
            model=EarthModelSchema(),
            integrator=IntegratorSchema(),
            grid=[_case_schema(case) for case in grid.cases],
        )

    @app.post("/propagate", response_model=PropagateResponse)
    def propagate(req: PropagateRequest) -> PropagateResponse:
        model = _model(req.model)
        try:
            initial = classical_to_polar_nodal(_elements(req.elements), model)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if req.times_s is not None:
            times = list(req.times_s)
        else:
            n = int(round(req.days * 86400.0 / req.step_s))
            times = [k * req.step_s for k in range(n + 1)]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            prop = DriPropagator(initial, PropagatorConfig(order=req.order, model=model))
        samples = []
        for t in times:
            pn, cart = prop.state_at(t)
            samples.append(
                SampleSchema(
                    t_s=t,
                    polar_nodal=PolarNodalSchema(
                        r=pn.r,
                        theta=wrap_two_pi(pn.theta),
                        nu=wrap_two_pi(pn.nu),
                        R=pn.R,
                        Theta=pn.Theta,
                        N=pn.N,
                    ),
                    position_km=cart.position,
                    velocity_kms=cart.velocity,
                )
            )
        return PropagateResponse(samples=samples, warnings=[str(w.message) for w in caught])

    @app.post("/bench/run", response_model=BenchResponse)
    def bench_run(req: BenchRequest) -> BenchResponse:
        model = _model(req.model)
        if req.cases is None:
            config = default_config(model)
            config = BenchmarkConfig(
                model=model,
                cases=config.cases,
                propagators=tuple(req.propagators),
                integrator=_integrator(req.integrator),
            )
        else:
            config = BenchmarkConfig(
                model=model,
                cases=tuple(_case(c) for c in req.cases),
                propagators=tuple(req.propagators),
                integrator=_integrator(req.integrator),
            )
        results = run_grid(config, cache, out_dir=req.out_dir, timing_evals=req.timing_evals)

        summaries = []
        records = {} if req.include_records else None
        for result in results:
            csv_path = None
            if req.out_dir is not None and result.failure is None:
                csv_path = str(Path(req.out_dir) / f"{result.case}-{result.propagator.lower()}.csv")
            summaries.append(_summary(result, csv_path))
            if records is not None and result.failure is None:
                records[f"{result.case}/{result.propagator}"] = [
                    RecordSchema(t_s=r.t, dr_m=r.dr_m, dv_mps=r.dv_mps, dpos_m=r.dpos_m)
                    for r in result.records
                ]
        summary_csv = str(Path(req.out_dir) / "summary.csv") if req.out_dir is not None else None
        return BenchResponse(
            summaries=summaries,
            records=records,
            summary_csv=summary_csv,
            truth_cache_dir=str(cache.directory),
        )

    @app.post("/bench/truth", response_model=TruthResponse)
    def bench_truth(req: TruthRequest) -> TruthResponse:
        model = _model(req.model)
        integrator = _integrator(req.integrator)
        if req.cases is None:
            cases = default_config(model).cases
        else:
            cases = tuple(_case(c) for c in req.cases)
        entries = []
        for case in cases:
            times = case.time_grid()
            initial = polar_nodal_to_cartesian(classical_to_polar_nodal(case.elements, model))
            table = cache.get(initial, model, times, integrator)
            key = cache.key(
                np.array([*initial.position, *initial.velocity]), model, times, integrator
            )
            entries.append(
                TruthEntrySchema(case=case.name, path=str(cache.path_for(key)), n_samples=table.shape[0])
            )
        return TruthResponse(entries=entries, cache_dir=str(cache.directory))

    @app.post("/bench/sweep", response_model=SweepResponse)
    def bench_sweep(req: SweepRequest) -> SweepResponse:
        model = _model(req.model)
        integrator = _integrator(req.integrator)
        if req.steps == 1:
            values = [req.start]
        else:
            width = (req.stop - req.start) / (req.steps - 1)
            values = [req.start + k * width for k in range(req.steps)]
        rows = []
        for value in values:
            base = req.base.model_copy(
                update={"e": value} if req.param == "e" else {"inc_deg": value}
            )
            case = BenchmarkCase(
                name=f"{req.param}{value:.6g}",
                elements=_elements(base),
                days=req.days,
                step_s=req.step_s,
            )
            for propagator in req.propagators:
                try:
                    result = run_case(case, propagator, model, cache, integrator, timing_evals=0)
                except ConfigError:
                    raise
                except Exception as exc:
                    rows.append(SweepRowSchema(value=value, propagator=propagator, failure=str(exc)))
                    continue
                rows.append(
                    SweepRowSchema(
                        value=value,
                        propagator=propagator,
                        max_dr_m=result.max_dr_m,
                        max_dv_mps=result.max_dv_mps,
                        rms_dr_m=result.rms_dr_m,
                        ns_per_sample=result.ns_per_sample,
                    )
                )
        summary_csv = None
        if req.out_dir is not None:
            out = Path(req.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            summary_csv = str(out / f"sweep-{req.param}.csv")
            with open(summary_csv, "w", newline="\n") as fh:
                fh.write(f"{req.param},propagator,max_dr_m,max_dv_mps,rms_dr_m,failure\n")
                for row in rows:
                    fh.write(
                        f"{row.value:.17g},{row.propagator},"
                        f"{'' if row.max_dr_m is None else format(row.max_dr_m, '.6e')},"
                        f"{'' if row.max_dv_mps is None else format(row.max_dv_mps, '.6e')},"
                        f"{'' if row.rms_dr_m is None else format(row.rms_dr_m, '.6e')},"
                        f"{'' if row.failure is None else repr(row.failure)}\n"
                    )
        return SweepResponse(param=req.param, rows=rows, summary_csv=summary_csv)

    return app


app = create_app()

"""Pydantic request/response models of the HTTP service.

The wire format mirrors the config-file boundary: angles in degrees and
distances in km for orbit definitions; polar-nodal outputs carry radians
reduced to [0, 2*pi).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .gravity import ALPHA_EARTH, J2_EARTH, MU_EARTH


class EarthModelSchema(BaseModel):
    mu: float = Field(default=MU_EARTH, gt=0, description="gravitational parameter [km^3/s^2]")
    alpha: float = Field(default=ALPHA_EARTH, gt=0, description="mean equatorial radius [km]")
    j2: float = Field(default=J2_EARTH, ge=0, description="second zonal harmonic coefficient")


class IntegratorSchema(BaseModel):
    rel_tol: float = Field(default=1e-12, gt=0, lt=1e-3)
    abs_tol: float = Field(default=1e-12, gt=0, lt=1e-3)
    max_step: Optional[float] = Field(default=None, gt=0, description="seconds; omit for unlimited")


class ElementsSchema(BaseModel):
    a_km: float = Field(default=7000.0, gt=0)
    e: float = Field(ge=0, lt=1)
    inc_deg: float = Field(ge=0, le=180)
    argp_deg: float = 10.0
    raan_deg: float = 0.0
    true_anomaly_deg: float = 15.0


class CaseSchema(BaseModel):
    name: str = Field(min_length=1)
    elements: ElementsSchema
    days: float = Field(gt=0, le=31)
    step_s: float = Field(default=60.0, gt=0)


class PolarNodalSchema(BaseModel):
    r: float = Field(description="radial distance [km]")
    theta: float = Field(description="argument of latitude [rad], in [0, 2*pi)")
    nu: float = Field(description="node longitude [rad], in [0, 2*pi)")
    R: float = Field(description="radial velocity [km/s]")
    Theta: float = Field(description="angular-momentum modulus [km^2/s]")
    N: float = Field(description="polar angular-momentum component [km^2/s]")


class SampleSchema(BaseModel):
    t_s: float
    polar_nodal: PolarNodalSchema
    position_km: tuple[float, float, float]
    velocity_kms: tuple[float, float, float]


class PropagateRequest(BaseModel):
    model: EarthModelSchema = EarthModelSchema()
    elements: ElementsSchema
    order: Literal[1, 2] = 2
    days: Optional[float] = Field(default=None, gt=0, le=31)
    step_s: float = Field(default=60.0, gt=0)
    times_s: Optional[list[float]] = None

    @model_validator(mode="after")
    def _one_grid_source(self):
        if (self.days is None) == (self.times_s is None):
            raise ValueError("provide exactly one of days or times_s")
        if self.times_s is not None:
            if not self.times_s:
                raise ValueError("times_s must not be empty")
            if any(b <= a for a, b in zip(self.times_s, self.times_s[1:])):
                raise ValueError("times_s must be strictly increasing")
        return self


class PropagateResponse(BaseModel):
    samples: list[SampleSchema]
    warnings: list[str] = []


class BenchRequest(BaseModel):
    model: EarthModelSchema = EarthModelSchema()
    integrator: IntegratorSchema = IntegratorSchema()
    cases: Optional[list[CaseSchema]] = Field(
        default=None, description="omit to run the default benchmark grid"
    )
    propagators: list[Literal["DRI1", "DRI2"]] = ["DRI1", "DRI2"]
    out_dir: Optional[str] = Field(
        default=None,
        description="directory (on the service host) for per-case CSVs and summary.csv",
    )
    include_records: bool = False
    timing_evals: int = Field(default=10_000, ge=0)


class RecordSchema(BaseModel):
    t_s: float
    dr_m: float
    dv_mps: float
    dpos_m: float


class CaseSummarySchema(BaseModel):
    case: str
    propagator: str
    n_samples: int
    max_dr_m: Optional[float] = None
    rms_dr_m: Optional[float] = None
    max_dv_mps: Optional[float] = None
    rms_dv_mps: Optional[float] = None
    max_dpos_m: Optional[float] = None
    ns_per_sample: Optional[float] = None
    csv_path: Optional[str] = None
    warnings: list[str] = []
    failure: Optional[str] = None


class BenchResponse(BaseModel):
    summaries: list[CaseSummarySchema]
    records: Optional[dict[str, list[RecordSchema]]] = None
    summary_csv: Optional[str] = None
    truth_cache_dir: str


class TruthRequest(BaseModel):
    model: EarthModelSchema = EarthModelSchema()
    integrator: IntegratorSchema = IntegratorSchema()
    cases: Optional[list[CaseSchema]] = None


class TruthEntrySchema(BaseModel):
    case: str
    path: str
    n_samples: int


class TruthResponse(BaseModel):
    entries: list[TruthEntrySchema]
    cache_dir: str


class SweepRequest(BaseModel):
    model: EarthModelSchema = EarthModelSchema()
    integrator: IntegratorSchema = IntegratorSchema()
    param: Literal["e", "i"] = "e"
    start: float = 0.0
    stop: float = 0.1
    steps: int = Field(default=21, ge=1)
    base: ElementsSchema = ElementsSchema(e=0.005, inc_deg=55.0)
    days: float = Field(default=30.0, gt=0, le=31)
    step_s: float = Field(default=60.0, gt=0)
    propagators: list[Literal["DRI1", "DRI2"]] = ["DRI2"]
    out_dir: Optional[str] = None


class SweepRowSchema(BaseModel):
    value: float
    propagator: str
    max_dr_m: Optional[float] = None
    max_dv_mps: Optional[float] = None
    rms_dr_m: Optional[float] = None
    ns_per_sample: Optional[float] = None
    failure: Optional[str] = None


class SweepResponse(BaseModel):
    param: str
    rows: list[SweepRowSchema]
    summary_csv: Optional[str] = None


class DefaultsResponse(BaseModel):
    model: EarthModelSchema
    integrator: IntegratorSchema
    grid: list[CaseSchema]


class ErrorBody(BaseModel):
    kind: Literal["config", "numerical"]
    message: str

"""Benchmark configuration files: flat INI-style sections.

Angles are degrees and distances km at this boundary only; everything past
parsing is radians/km/s.  A minimal config::

    [model]
    mu = 398600.4415
    alpha = 6378.1363
    j2 = 1.0826267e-3

    [run]
    propagators = DRI1, DRI2
    step = 60

    [integrator]
    rel_tol = 1e-12
    abs_tol = 1e-12

    [case leo-e005-i55]
    a = 7000
    e = 0.005
    i = 55
    days = 7

Per-case keys argp / raan / true_anomaly default to 10 / 0 / 15 degrees (the
standard initial conditions of the benchmark grid); step defaults to the
[run] step.  When no config file is given the harness falls back to
``default_config()``: the full benchmark grid of eccentricities {0.005,
0.075}, inclinations {5, 55, 89} degrees, and horizons {7, 30} days.
"""

from __future__ import annotations

import configparser
import math
from pathlib import Path

from .bench import BenchmarkCase, BenchmarkConfig
from .errors import ConfigError
from .gravity import GravityModel
from .states import ClassicalElements
from .truth import IntegratorConfig

DEFAULT_ARGP_DEG = 10.0
DEFAULT_RAAN_DEG = 0.0
DEFAULT_TRUE_ANOMALY_DEG = 15.0
DEFAULT_SEMIMAJOR_KM = 7000.0
DEFAULT_STEP_S = 60.0

GRID_ECCENTRICITIES = (0.005, 0.075)
GRID_INCLINATIONS_DEG = (5.0, 55.0, 89.0)
GRID_DAYS = (7.0, 30.0)


def grid_elements(
    e: float,
    inc_deg: float,
    a_km: float = DEFAULT_SEMIMAJOR_KM,
    argp_deg: float = DEFAULT_ARGP_DEG,
    raan_deg: float = DEFAULT_RAAN_DEG,
    true_anomaly_deg: float = DEFAULT_TRUE_ANOMALY_DEG,
) -> ClassicalElements:
    """Classical elements from the degree/km boundary representation."""
    return ClassicalElements(
        a=a_km,
        e=e,
        i=math.radians(inc_deg),
        omega=math.radians(argp_deg),
        Omega=math.radians(raan_deg),
        f=math.radians(true_anomaly_deg),
    )


def default_config(model: GravityModel | None = None) -> BenchmarkConfig:
    """The standard benchmark grid."""
    cases = []
    for e in GRID_ECCENTRICITIES:
        for inc in GRID_INCLINATIONS_DEG:
            for days in GRID_DAYS:
                name = f"e{e:.3f}-i{inc:02.0f}-{days:.0f}d".replace("0.", "")
                cases.append(
                    BenchmarkCase(
                        name=name,
                        elements=grid_elements(e, inc),
                        days=days,
                        step_s=DEFAULT_STEP_S,
                    )
                )
    return BenchmarkConfig(
        model=model if model is not None else GravityModel(),
        cases=tuple(cases),
        propagators=("DRI1", "DRI2"),
        integrator=IntegratorConfig(),
    )


def _get_float(section, key: str, default: float | None = None) -> float:
    raw = section.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"[{section.name}] is missing required key {key!r}")
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] {key} = {raw!r} is not a number") from exc


def load_config(path: "Path | str") -> BenchmarkConfig:
    """Parse a benchmark config file; raises ConfigError on any defect."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    model_kwargs = {}
    if parser.has_section("model"):
        section = parser["model"]
        for key in ("mu", "alpha", "j2"):
            if key in section:
                model_kwargs[key] = _get_float(section, key)
        unknown = set(section) - {"mu", "alpha", "j2"}
        if unknown:
            raise ConfigError(f"[model] has unknown keys: {sorted(unknown)}")
    try:
        model = GravityModel(**model_kwargs)
    except ValueError as exc:
        raise ConfigError(f"[model]: {exc}") from exc

    integrator_kwargs = {}
    if parser.has_section("integrator"):
        section = parser["integrator"]
        mapping = {"rel_tol": "rel_tol", "abs_tol": "abs_tol", "max_step": "max_step"}
        for key, attr in mapping.items():
            if key in section:
                integrator_kwargs[attr] = _get_float(section, key)
        unknown = set(section) - set(mapping)
        if unknown:
            raise ConfigError(f"[integrator] has unknown keys: {sorted(unknown)}")
    try:
        integrator = IntegratorConfig(**integrator_kwargs)
    except ValueError as exc:
        raise ConfigError(f"[integrator]: {exc}") from exc

    step_default = DEFAULT_STEP_S
    propagators: tuple[str, ...] = ("DRI1", "DRI2")
    if parser.has_section("run"):
        section = parser["run"]
        if "step" in section:
            step_default = _get_float(section, "step")
        if "propagators" in section:
            propagators = tuple(
                name.strip() for name in section["propagators"].replace(",", " ").split()
            )
        unknown = set(section) - {"step", "propagators"}
        if unknown:
            raise ConfigError(f"[run] has unknown keys: {sorted(unknown)}")

    cases = []
    for section_name in parser.sections():
        if not section_name.startswith("case"):
            if section_name in ("model", "run", "integrator"):
                continue
            raise ConfigError(f"unknown section [{section_name}]")
        section = parser[section_name]
        name = section_name[len("case"):].strip() or f"case{len(cases) + 1}"
        known = {"a", "e", "i", "argp", "raan", "true_anomaly", "days", "step"}
        unknown = set(section) - known
        if unknown:
            raise ConfigError(f"[{section_name}] has unknown keys: {sorted(unknown)}")
        try:
            elements = grid_elements(
                e=_get_float(section, "e"),
                inc_deg=_get_float(section, "i"),
                a_km=_get_float(section, "a", DEFAULT_SEMIMAJOR_KM),
                argp_deg=_get_float(section, "argp", DEFAULT_ARGP_DEG),
                raan_deg=_get_float(section, "raan", DEFAULT_RAAN_DEG),
                true_anomaly_deg=_get_float(section, "true_anomaly", DEFAULT_TRUE_ANOMALY_DEG),
            )
            cases.append(
                BenchmarkCase(
                    name=name,
                    elements=elements,
                    days=_get_float(section, "days"),
                    step_s=_get_float(section, "step", step_default),
                )
            )
        except (ValueError,) as exc:
            raise ConfigError(f"[{section_name}]: {exc}") from exc

    if not cases:
        raise ConfigError(f"{path}: no [case ...] sections found")
    try:
        return BenchmarkConfig(
            model=model, cases=tuple(cases), propagators=propagators, integrator=integrator
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

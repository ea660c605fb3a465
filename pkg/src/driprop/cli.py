"""``bench``: thin HTTP client over the driprop service.

Subcommands marshal a config file (or the built-in default grid) into the
service request models, post them, and render the responses.  By default the
service runs in-process over an ASGI transport, so no server needs to be
started; ``--server URL`` points the same commands at a remote instance
(note that CSV outputs are then written on the server's filesystem).

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 acceptance-suite failure.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import httpx

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_ACCEPTANCE = 3

_KIND_EXIT = {"config": EXIT_CONFIG, "numerical": EXIT_NUMERICAL}


def _client(server: "str | None") -> httpx.Client:
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=None)
    from .api import create_app

    transport = httpx.ASGITransport(app=create_app())
    return httpx.Client(transport=transport, base_url="http://driprop.local", timeout=None)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code >= 400:
        try:
            body = response.json()
        except json.JSONDecodeError:
            body = {}
        kind = body.get("kind", "config")
        message = body.get("message") or body.get("detail") or response.text
        click.echo(f"error ({kind}): {message}", err=True)
        sys.exit(_KIND_EXIT.get(kind, EXIT_CONFIG))
    return response.json()


def _config_payload(config_path: "Path | None") -> dict:
    """Translate a config file into the shared request fields."""
    if config_path is None:
        return {}
    from .configfile import load_config
    from .errors import ConfigError

    try:
        config = load_config(config_path)
    except ConfigError as exc:
        click.echo(f"error (config): {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    cases = []
    for case in config.cases:
        el = case.elements
        cases.append(
            {
                "name": case.name,
                "elements": {
                    "a_km": el.a,
                    "e": el.e,
                    "inc_deg": math.degrees(el.i),
                    "argp_deg": math.degrees(el.omega),
                    "raan_deg": math.degrees(el.Omega),
                    "true_anomaly_deg": math.degrees(el.f),
                },
                "days": case.days,
                "step_s": case.step_s,
            }
        )
    integrator = {"rel_tol": config.integrator.rel_tol, "abs_tol": config.integrator.abs_tol}
    if math.isfinite(config.integrator.max_step):
        integrator["max_step"] = config.integrator.max_step
    return {
        "model": {"mu": config.model.mu, "alpha": config.model.alpha, "j2": config.model.j2},
        "integrator": integrator,
        "cases": cases,
        "propagators": list(config.propagators),
    }


def _print_summaries(summaries: list[dict]) -> bool:
    header = f"{'case':<18} {'prop':<5} {'samples':>8} {'max dr [m]':>12} {'max dv [m/s]':>13} {'ns/sample':>10}"
    click.echo(header)
    click.echo("-" * len(header))
    any_failure = False
    for row in summaries:
        if row.get("failure"):
            any_failure = True
            click.echo(f"{row['case']:<18} {row['propagator']:<5} FAILED: {row['failure']}")
            continue
        ns = row.get("ns_per_sample")
        ns_text = f"{ns:.0f}" if ns is not None else ""
        click.echo(
            f"{row['case']:<18} {row['propagator']:<5} {row['n_samples']:>8} "
            f"{row['max_dr_m']:>12.4g} {row['max_dv_mps']:>13.4g} {ns_text:>10}"
        )
        for warning in row.get("warnings", ()):
            click.echo(f"  warning: {warning}")
    return any_failure


@click.group()
def main() -> None:
    """Benchmark and serve the radial-intermediary analytical propagator."""


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="Benchmark config file; omitted = built-in default grid.")
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("bench_out"),
              show_default=True, help="Directory for per-case CSVs and summary.csv.")
@click.option("--server", default=None, help="Remote service URL; default runs in-process.")
@click.option("--timing-evals", default=10_000, show_default=True,
              help="Evaluations per timing measurement (0 disables timing).")
def run(config_path: "Path | None", out_dir: Path, server: "str | None", timing_evals: int) -> None:
    """Run the benchmark grid: error time histories plus timing."""
    payload = _config_payload(config_path)
    payload["out_dir"] = str(out_dir.resolve() if server is None else out_dir)
    payload["timing_evals"] = timing_evals
    with _client(server) as client:
        body = _post(client, "/bench/run", payload)
    any_failure = _print_summaries(body["summaries"])
    click.echo(f"\nCSV output:   {body['summary_csv']}")
    click.echo(f"truth cache:  {body['truth_cache_dir']}")
    if any_failure:
        sys.exit(EXIT_NUMERICAL)


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="Benchmark config file; omitted = built-in default grid.")
@click.option("--server", default=None, help="Remote service URL; default runs in-process.")
def truth(config_path: "Path | None", server: "str | None") -> None:
    """Pre-build the numerical truth cache for a config's cases."""
    payload = _config_payload(config_path)
    payload.pop("propagators", None)
    with _client(server) as client:
        body = _post(client, "/bench/truth", payload)
    for entry in body["entries"]:
        click.echo(f"{entry['case']:<18} {entry['n_samples']:>8} samples  {entry['path']}")
    click.echo(f"truth cache: {body['cache_dir']}")


@main.command()
@click.option("--param", type=click.Choice(["e", "i"]), default="e", show_default=True)
@click.option("--from", "start", type=float, default=0.0, show_default=True)
@click.option("--to", "stop", type=float, default=0.1, show_default=True)
@click.option("--steps", type=int, default=21, show_default=True)
@click.option("--days", type=float, default=30.0, show_default=True)
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="Optional config supplying the earth model and integrator.")
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("bench_out"),
              show_default=True)
@click.option("--server", default=None, help="Remote service URL; default runs in-process.")
def sweep(param: str, start: float, stop: float, steps: int, days: float,
          config_path: "Path | None", out_dir: Path, server: "str | None") -> None:
    """Sweep one orbit parameter (eccentricity envelope study by default)."""
    base_payload = _config_payload(config_path)
    payload = {
        "param": param,
        "start": start,
        "stop": stop,
        "steps": steps,
        "days": days,
        "out_dir": str(out_dir.resolve() if server is None else out_dir),
    }
    for key in ("model", "integrator"):
        if key in base_payload:
            payload[key] = base_payload[key]
    with _client(server) as client:
        body = _post(client, "/bench/sweep", payload)
    click.echo(f"{param:>10} {'prop':<5} {'max dr [m]':>12} {'max dv [m/s]':>13}")
    any_failure = False
    for row in body["rows"]:
        if row.get("failure"):
            any_failure = True
            click.echo(f"{row['value']:>10.5g} {row['propagator']:<5} FAILED: {row['failure']}")
        else:
            click.echo(
                f"{row['value']:>10.5g} {row['propagator']:<5} "
                f"{row['max_dr_m']:>12.4g} {row['max_dv_mps']:>13.4g}"
            )
    if body.get("summary_csv"):
        click.echo(f"\nCSV output: {body['summary_csv']}")
    if any_failure:
        sys.exit(EXIT_NUMERICAL)


@main.command()
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None,
              help="Truth cache directory (default: DRIPROP_TRUTH_CACHE or ~/.cache).")
@click.option("--criterion", "criteria", multiple=True,
              help="Run only the given criterion ids (repeatable); default all.")
def verify(cache_dir: "Path | None", criteria: tuple[str, ...]) -> None:
    """Run the acceptance suite and print one pass/fail line per criterion."""
    from .acceptance import run_all

    results = run_all(cache_dir=cache_dir, only=set(criteria) or None, echo=click.echo)
    if not all(result.passed for result in results):
        sys.exit(EXIT_ACCEPTANCE)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--truth-cache", type=click.Path(path_type=Path), default=None,
              help="Truth cache directory for this server instance.")
def serve(host: str, port: int, truth_cache: "Path | None") -> None:
    """Start the HTTP service."""
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(str(truth_cache) if truth_cache else None), host=host, port=port)


if __name__ == "__main__":
    main()

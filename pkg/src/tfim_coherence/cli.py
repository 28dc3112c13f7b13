"""Command-line front end.

A thin client over the service handlers: each subcommand assembles a
request model (from flags, an optional JSON config file, and an optional
preset), executes it either in-process or against a running service
(``--server``), and writes the response as CSV or JSON.

Exit status: 0 success, 1 validation or tolerance failure, 2 usage or
I/O error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import pydantic

from . import __version__
from .coherence import DetectorError
from .io_formats import render_csv, write_output
from .service import (
    OracleCheckRequest,
    OracleCheckResponse,
    QuenchRequest,
    QuenchResponse,
    StaticScanRequest,
    StaticScanResponse,
    StudyResponse,
    SweepRequest,
    SweepResponse,
    handle_oracle_check,
    handle_quench,
    handle_static_scan,
    handle_sweep,
)

_ENDPOINTS = {
    QuenchRequest: ("/v1/quench", handle_quench),
    StaticScanRequest: ("/v1/static-scan", handle_static_scan),
    SweepRequest: ("/v1/sweep-final", handle_sweep),
    OracleCheckRequest: ("/v1/oracle-check", handle_oracle_check),
}

_RESPONSE_TYPES = {
    "/v1/quench": (QuenchResponse, StudyResponse),
    "/v1/static-scan": (StaticScanResponse,),
    "/v1/sweep-final": (SweepResponse,),
    "/v1/oracle-check": (OracleCheckResponse,),
}


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read config file {path}: {exc}", 2)


def _build_request(model_cls, payload: dict):
    try:
        return model_cls.model_validate(payload)
    except pydantic.ValidationError as exc:
        _fail(f"invalid request: {exc}", 2)


def _execute(request, server: str | None):
    path, handler = _ENDPOINTS[type(request)]
    if server is None:
        try:
            return handler(request)
        except KeyError as exc:
            _fail(str(exc), 2)
        except (DetectorError,) as exc:
            _fail(str(exc), 1)
        except ValueError as exc:
            _fail(str(exc), 2)
    import httpx

    try:
        resp = httpx.post(
            server.rstrip("/") + path,
            json=request.model_dump(exclude_none=True),
            timeout=None,
        )
    except httpx.HTTPError as exc:
        _fail(f"cannot reach server {server}: {exc}", 2)
    if resp.status_code != 200:
        _fail(f"server returned {resp.status_code}: {resp.text}", 2)
    data = resp.json()
    for response_cls in _RESPONSE_TYPES[path]:
        try:
            return response_cls.model_validate(data)
        except pydantic.ValidationError:
            continue
    _fail("server response did not match any known schema", 2)


def _emit(response, out: str | None, fmt: str):
    if out is None:
        click.echo(render_csv(response) if fmt == "csv" else response.model_dump_json(indent=2))
        return
    try:
        written = write_output(response, Path(out), fmt)
    except OSError as exc:
        _fail(str(exc), 2)
    for path in written:
        click.echo(f"wrote {path}")


def _set_nested(payload: dict, dotted: str, value):
    if value is None:
        return
    keys = dotted.split(".")
    node = payload
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


server_option = click.option("--server", default=None, help="Base URL of a running service; default runs in-process.")
out_option = click.option("--out", default=None, help="Output file path; stdout when omitted.")
format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
config_option = click.option("--config", "config_path", default=None, help="JSON file with a full request payload.")
threads_option = click.option("--threads", type=int, default=None, help="Worker processes for the time grid (default: TFIM_COHERENCE_THREADS or 1).")


@click.group()
@click.version_option(__version__)
def main():
    """Quench coherence dynamics of the transverse-field Ising chain."""


@main.command()
@click.option("--preset", default=None, help="Named experiment preset (see 'presets').")
@click.option("--n", type=int, default=None, help="Chain length (sites).")
@click.option("--lambda1", type=float, default=None, help="Pre-quench coupling.")
@click.option("--lambda2", type=float, default=None, help="Post-quench coupling.")
@click.option("--sector", type=click.Choice(["integer", "half-integer"]), default=None)
@click.option("--t-max", type=float, default=None, help="End of the time grid.")
@click.option("--dt", type=float, default=None, help="Time step.")
@click.option("--t0", type=float, default=None, help="Start of the time grid.")
@threads_option
@config_option
@server_option
@out_option
@format_option
def quench(preset, n, lambda1, lambda2, sector, t_max, dt, t0, threads, config_path, server, out, fmt):
    """Fisher-density and echo time series (with detected events)."""
    payload = _load_config(config_path)
    _set_nested(payload, "preset", preset)
    _set_nested(payload, "spec.n", n)
    _set_nested(payload, "spec.lambda1", lambda1)
    _set_nested(payload, "spec.lambda2", lambda2)
    _set_nested(payload, "spec.sector", sector)
    _set_nested(payload, "grid.t_max", t_max)
    _set_nested(payload, "grid.dt", dt)
    _set_nested(payload, "grid.t0", t0)
    _set_nested(payload, "threads", threads)
    request = _build_request(QuenchRequest, payload)
    response = _execute(request, server)
    _emit(response, out, fmt)


@main.command("static-scan")
@click.option("--preset", default=None)
@click.option("--n", "n_values", type=int, multiple=True, help="Chain length; repeat for several sizes.")
@click.option("--lambda-start", type=float, default=None)
@click.option("--lambda-stop", type=float, default=None)
@click.option("--lambda-step", type=float, default=None)
@click.option("--sector", type=click.Choice(["integer", "half-integer"]), default=None)
@click.option("--no-refine", is_flag=True, default=False, help="Skip sub-grid refinement of lambda_m.")
@config_option
@server_option
@out_option
@format_option
def static_scan_cmd(preset, n_values, lambda_start, lambda_stop, lambda_step, sector, no_refine, config_path, server, out, fmt):
    """Equilibrium Fisher density versus coupling, with lambda_m and p-index."""
    payload = _load_config(config_path)
    _set_nested(payload, "preset", preset)
    if n_values:
        payload["n_values"] = list(n_values)
    _set_nested(payload, "lambdas.start", lambda_start)
    _set_nested(payload, "lambdas.stop", lambda_stop)
    _set_nested(payload, "lambdas.step", lambda_step)
    _set_nested(payload, "sector", sector)
    if no_refine:
        payload["refine"] = False
    request = _build_request(StaticScanRequest, payload)
    response = _execute(request, server)
    _emit(response, out, fmt)


@main.command("sweep-final")
@click.option("--preset", default=None)
@click.option("--n", type=int, default=None)
@click.option("--lambda1", type=float, default=None)
@click.option("--lambda2-start", type=float, default=None)
@click.option("--lambda2-stop", type=float, default=None)
@click.option("--lambda2-step", type=float, default=None)
@click.option("--t-ltr", type=float, default=None, help="Long-time-run reference time.")
@click.option("--window", type=float, default=None, help="Averaging window (default 20% of t-ltr).")
@click.option("--dt", type=float, default=None)
@click.option("--sector", type=click.Choice(["integer", "half-integer"]), default=None)
@threads_option
@config_option
@server_option
@out_option
@format_option
def sweep_final(preset, n, lambda1, lambda2_start, lambda2_stop, lambda2_step, t_ltr, window, dt, sector, threads, config_path, server, out, fmt):
    """Long-time Fisher density versus the final coupling."""
    payload = _load_config(config_path)
    _set_nested(payload, "preset", preset)
    _set_nested(payload, "n", n)
    _set_nested(payload, "lambda1", lambda1)
    _set_nested(payload, "lambda2.start", lambda2_start)
    _set_nested(payload, "lambda2.stop", lambda2_stop)
    _set_nested(payload, "lambda2.step", lambda2_step)
    _set_nested(payload, "t_ltr", t_ltr)
    _set_nested(payload, "window", window)
    _set_nested(payload, "dt", dt)
    _set_nested(payload, "sector", sector)
    _set_nested(payload, "threads", threads)
    request = _build_request(SweepRequest, payload)
    response = _execute(request, server)
    _emit(response, out, fmt)


@main.command("oracle-check")
@click.option("--quick", is_flag=True, default=False, help="Smaller sizes and fewer sample times.")
@click.option("--corrupt-kernel", is_flag=True, default=False, hidden=True)
@config_option
@server_option
@out_option
@format_option
def oracle_check(quick, corrupt_kernel, config_path, server, out, fmt):
    """Run the oracle-vs-pipeline comparison suite (exit 1 on any breach)."""
    payload = _load_config(config_path)
    if quick:
        payload["quick"] = True
    if corrupt_kernel:
        payload["corrupt_kernel"] = True
    request = _build_request(OracleCheckRequest, payload)
    response = _execute(request, server)
    for check in response.checks:
        status = "pass" if check.passed else "FAIL"
        click.echo(
            f"[{status}] {check.name}: max deviation {check.max_deviation:.3e} "
            f"(tolerance {check.tolerance:.0e})"
        )
        if not check.passed and check.detail:
            click.echo(f"       {check.detail}")
    if out is not None:
        _emit(response, out, fmt)
    sys.exit(0 if response.passed else 1)


@main.command()
def presets():
    """List the named experiment presets."""
    from .presets import PRESETS

    for name, (kind, summary, _) in PRESETS.items():
        click.echo(f"{name:8s} {kind:12s} {summary}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()

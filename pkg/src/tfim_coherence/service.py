"""Request/response models, handlers, and the FastAPI application.

The handlers are plain functions from request models to response models;
the HTTP layer and the command-line client both call them, so a CLI run
and a service call produce identical payloads.
"""

from __future__ import annotations

import hashlib
import json
from typing import Literal, Optional, Union

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import __version__
from .coherence import (
    DetectorError,
    TimeGrid,
    detect_revival_or_decay,
    long_time_sweep,
    run_series,
    static_scan,
)
from .oracle import oracle_report
from .spectrum import QuenchSpec, revival_time_prediction

SECTORS = ("integer", "half-integer")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpecModel(StrictModel):
    """Quench definition as it appears on the wire."""

    n: int = Field(ge=3)
    lambda1: float = Field(ge=0)
    lambda2: float = Field(ge=0)
    sector: Literal["integer", "half-integer"] = "integer"

    def to_spec(self) -> QuenchSpec:
        return QuenchSpec(n=self.n, lambda1=self.lambda1, lambda2=self.lambda2, sector=self.sector)


class GridModel(StrictModel):
    t0: float = Field(default=0.0, ge=0)
    dt: float = Field(default=0.01, gt=0)
    t_max: float = Field(gt=0)

    def to_grid(self) -> TimeGrid:
        count = int(np.floor((self.t_max - self.t0) / self.dt + 1e-9)) + 1
        return TimeGrid(t0=self.t0, dt=self.dt, count=max(count, 1))


class LambdaGridModel(StrictModel):
    """Either an explicit list of couplings or a uniform start/stop/step."""

    values: Optional[list[float]] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    step: Optional[float] = None

    @model_validator(mode="after")
    def _check(self):
        if self.values is None:
            if None in (self.start, self.stop, self.step):
                raise ValueError("provide either values or start/stop/step")
            if self.step <= 0 or self.stop < self.start:
                raise ValueError("need step > 0 and stop >= start")
        elif not self.values:
            raise ValueError("values must be non-empty")
        return self

    def to_array(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)


class StudyModel(StrictModel):
    """Multi-run revival/decay-time study (size and quench-size scaling)."""

    sizes: list[int]
    lambda1_values: list[float]
    lambda2: float = 1.0
    dt: float = 0.05
    sector: Literal["integer", "half-integer"] = "integer"


class QuenchRequest(StrictModel):
    preset: Optional[str] = None
    spec: Optional[SpecModel] = None
    grid: Optional[GridModel] = None
    study: Optional[StudyModel] = None
    threads: Optional[int] = Field(default=None, ge=1)
    deterministic: bool = True


class EventModel(StrictModel):
    kind: str
    time: float
    detail: dict = Field(default_factory=dict)


class QuenchResponse(StrictModel):
    metadata: dict
    columns: dict[str, list]
    events: list[EventModel]


class StudyResponse(StrictModel):
    metadata: dict
    columns: dict[str, list]
    fit: dict


class StaticScanRequest(StrictModel):
    preset: Optional[str] = None
    lambdas: Optional[LambdaGridModel] = None
    n_values: Optional[list[int]] = None
    sector: Literal["integer", "half-integer"] = "integer"
    refine: bool = True
    deterministic: bool = True


class StaticScanResponse(StrictModel):
    metadata: dict
    columns: dict[str, list]
    summary: dict


class SweepRequest(StrictModel):
    preset: Optional[str] = None
    lambda1: Optional[float] = Field(default=None, ge=0)
    lambda2: Optional[LambdaGridModel] = None
    n: Optional[int] = Field(default=None, ge=3)
    t_ltr: Optional[float] = Field(default=None, gt=0)
    window: Optional[float] = Field(default=None, gt=0)
    dt: float = Field(default=0.05, gt=0)
    sector: Literal["integer", "half-integer"] = "integer"
    threads: Optional[int] = Field(default=None, ge=1)
    deterministic: bool = True


class SweepResponse(StrictModel):
    metadata: dict
    columns: dict[str, list]
    summary: dict


class OracleCheckRequest(StrictModel):
    quick: bool = False
    corrupt_kernel: bool = False


class CheckModel(StrictModel):
    name: str
    tolerance: float
    max_deviation: float
    passed: bool
    detail: str


class OracleCheckResponse(StrictModel):
    passed: bool
    checks: list[CheckModel]
    metadata: dict


def config_hash(payload: dict) -> str:
    """Stable short hash of a resolved request; worker count is excluded
    because it never changes the numbers."""
    scrubbed = {k: v for k, v in payload.items() if k not in ("threads",)}
    blob = json.dumps(scrubbed, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _metadata(request: StrictModel, extra: dict | None = None) -> dict:
    payload = request.model_dump(exclude_none=True)
    meta = {
        "tool": "tfim-coherence",
        "version": __version__,
        "config": payload,
        "config_hash": config_hash(payload),
        "determinism": "seedless; fixed summation order; worker count does not affect values",
    }
    if extra:
        meta.update(extra)
    return meta


def _deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = v
    return out


def resolve_preset(request, model_cls, expected_kinds: tuple[str, ...]):
    """Merge a preset's stored payload under the request's explicit fields."""
    from .presets import PRESETS

    if request.preset is None:
        return request
    if request.preset not in PRESETS:
        raise KeyError(f"unknown preset {request.preset!r}; available: {sorted(PRESETS)}")
    kind, _, payload = PRESETS[request.preset]
    if kind not in expected_kinds:
        raise KeyError(
            f"preset {request.preset!r} is a {kind} preset, not usable with this command"
        )
    merged = _deep_merge(payload, request.model_dump(exclude_unset=True, exclude={"preset"}))
    merged["preset"] = request.preset
    return model_cls.model_validate(merged)


def _float_or_none(x) -> float | None:
    return None if x is None or not np.isfinite(x) else float(x)


def handle_quench(request: QuenchRequest) -> Union[QuenchResponse, StudyResponse]:
    request = resolve_preset(request, QuenchRequest, ("quench", "study"))
    if request.study is not None:
        return _handle_study(request)
    if request.spec is None or request.grid is None:
        raise ValueError("quench request needs spec and grid (or a preset)")
    series = run_series(request.spec.to_spec(), request.grid.to_grid(), workers=request.threads)
    columns = {
        "t": [float(t) for t in series.times],
        "fq": [float(v) for v in series.fq],
        "n_eff": [float(v) for v in series.n_eff],
        "le": [float(v) for v in series.le],
        "r_le": [_float_or_none(v) for v in series.r_le],
        "r_fq": [_float_or_none(v) for v in series.r_fq],
        "argmax": [str(s) for s in series.labels],
    }
    events = [EventModel(kind=e.kind, time=e.time, detail=e.detail) for e in series.events]
    return QuenchResponse(metadata=_metadata(request), columns=columns, events=events)


def _handle_study(request: QuenchRequest) -> StudyResponse:
    study = request.study
    rows = {
        "n": [],
        "lambda1": [],
        "lambda2": [],
        "quench_size": [],
        "kind": [],
        "measured_time": [],
        "predicted_time": [],
    }
    for n in study.sizes:
        for l1 in study.lambda1_values:
            spec = QuenchSpec(n=n, lambda1=l1, lambda2=study.lambda2, sector=study.sector)
            prediction = revival_time_prediction(spec)
            count = int(np.ceil(1.6 * prediction / study.dt)) + 1
            series = run_series(
                spec, TimeGrid(0.0, study.dt, count), workers=request.threads, detectors=False
            )
            t_meas, kind = detect_revival_or_decay(series, prediction)
            rows["n"].append(int(n))
            rows["lambda1"].append(float(l1))
            rows["lambda2"].append(float(study.lambda2))
            rows["quench_size"].append(abs(float(study.lambda2 - l1)))
            rows["kind"].append(kind)
            rows["measured_time"].append(float(t_meas))
            rows["predicted_time"].append(float(prediction))
    slope, intercept = np.polyfit(np.array(rows["n"], dtype=float), np.array(rows["measured_time"]), 1)
    fit = {"slope": float(slope), "intercept": float(intercept)}
    return StudyResponse(metadata=_metadata(request), columns=rows, fit=fit)


def handle_static_scan(request: StaticScanRequest) -> StaticScanResponse:
    request = resolve_preset(request, StaticScanRequest, ("static-scan",))
    if request.lambdas is None or not request.n_values:
        raise ValueError("static-scan request needs lambdas and n_values (or a preset)")
    result = static_scan(
        request.lambdas.to_array(),
        tuple(request.n_values),
        sector=request.sector,
        refine=request.refine,
    )
    columns = {"n": [], "lambda": [], "fq": [], "dfq_dlambda": [], "p_index": []}
    p = result.p_index
    for n in result.n_values:
        for i, lam in enumerate(result.lambdas):
            columns["n"].append(int(n))
            columns["lambda"].append(float(lam))
            columns["fq"].append(float(result.fq[n][i]))
            columns["dfq_dlambda"].append(float(result.dfq[n][i]))
            columns["p_index"].append(_float_or_none(p[i]) if p.ndim else None)
    summary = {
        "lambda_m": {str(n): float(v) for n, v in result.lambda_m.items()},
        "scaling_exponent": _float_or_none(result.scaling_exponent),
        "grid_warning": bool(result.grid_warning),
    }
    return StaticScanResponse(metadata=_metadata(request), columns=columns, summary=summary)


def handle_sweep(request: SweepRequest) -> SweepResponse:
    request = resolve_preset(request, SweepRequest, ("sweep",))
    if None in (request.lambda1, request.lambda2, request.n, request.t_ltr):
        raise ValueError("sweep request needs lambda1, lambda2 grid, n, t_ltr (or a preset)")
    result = long_time_sweep(
        request.lambda1,
        request.lambda2.to_array(),
        request.n,
        request.t_ltr,
        window=request.window,
        dt=request.dt,
        sector=request.sector,
        workers=request.threads,
    )
    columns = {
        "lambda2": [float(v) for v in result.lambda2],
        "fq_static": [float(v) for v in result.fq_static],
        "fq_longtime": [float(v) for v in result.fq_longtime],
        "dfq_longtime_dlambda2": [float(v) for v in result.derivative],
    }
    summary = {
        "transition_estimate": result.transition_estimate,
        "t_ltr": result.t_ltr,
        "window": result.window,
        "window_rule": "trailing-window time average",
        "transition_rule": "steepest change of log(longtime/static)",
    }
    return SweepResponse(metadata=_metadata(request), columns=columns, summary=summary)


def handle_oracle_check(request: OracleCheckRequest) -> OracleCheckResponse:
    report = oracle_report(quick=request.quick, corrupt_kernel=request.corrupt_kernel)
    checks = [
        CheckModel(
            name=c.name,
            tolerance=c.tolerance,
            max_deviation=c.max_deviation,
            passed=c.passed,
            detail=c.detail,
        )
        for c in report.checks
    ]
    return OracleCheckResponse(passed=report.passed, checks=checks, metadata=_metadata(request))


def create_app() -> FastAPI:
    app = FastAPI(
        title="tfim-coherence",
        version=__version__,
        description="Quench coherence dynamics of the transverse-field Ising chain",
    )

    def _run(handler, request):
        try:
            return handler(request)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (ValueError, DetectorError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/v1/presets")
    def presets():
        from .presets import PRESETS

        return {
            name: {"kind": kind, "summary": summary, "config": payload}
            for name, (kind, summary, payload) in PRESETS.items()
        }

    @app.post("/v1/quench", response_model=Union[QuenchResponse, StudyResponse])
    def quench(request: QuenchRequest):
        return _run(handle_quench, request)

    @app.post("/v1/static-scan", response_model=StaticScanResponse)
    def static(request: StaticScanRequest):
        return _run(handle_static_scan, request)

    @app.post("/v1/sweep-final", response_model=SweepResponse)
    def sweep(request: SweepRequest):
        return _run(handle_sweep, request)

    @app.post("/v1/oracle-check", response_model=OracleCheckResponse)
    def oracle(request: OracleCheckRequest):
        return _run(handle_oracle_check, request)

    return app


app = create_app()

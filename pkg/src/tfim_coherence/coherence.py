"""Headline observables and event detectors.

Produces the time series of the maximal-variance Fisher density F_Q, the
Loschmidt echo and both rate functions, and locates the dynamical events:
direction-switch cusps of F_Q, rate-function cusps, revival/decay extrema,
and the first minimum of the F_Q rate function.  Also provides the static
coupling scan (with the size scaling of the maximal variance) and the
long-time sweep over the final coupling.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .correlators import VarianceTriple, argmax_labels, variance_arrays_batch
from .kernel import eval_kernel_batch, static_kernel
from .spectrum import ModeSet, QuenchSpec, build_modes, revival_time_prediction

THREADS_ENV = "TFIM_COHERENCE_THREADS"

# F_Q below this is reported as a divergent rate rather than a huge float
_RATE_FLOOR = 1e-300


class DetectorError(ValueError):
    """A detector's preconditions are not met by the supplied series."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t0 + dt * (0 .. count-1)."""

    t0: float = 0.0
    dt: float = 0.01
    count: int = 1

    def __post_init__(self):
        if self.t0 < 0 or not np.isfinite(self.t0):
            raise ValueError("t0 must be finite and >= 0")
        if self.dt <= 0 or not np.isfinite(self.dt):
            raise ValueError("dt must be finite and > 0")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.count)

    @property
    def t_max(self) -> float:
        return self.t0 + self.dt * (self.count - 1)


@dataclass(frozen=True)
class MqfiPoint:
    fq: float
    n_eff: float
    argmax: str


@dataclass(frozen=True)
class CoherencePoint:
    t: float
    fq: float
    n_eff: float
    le: float
    r_le: float | None
    r_fq: float | None
    argmax: str


@dataclass(frozen=True)
class Event:
    kind: str
    time: float
    detail: dict = field(default_factory=dict)


@dataclass
class CoherenceSeries:
    """Aligned per-time records plus detected events.

    The raw variance branches are kept alongside the points: the cusp
    detector refines event times from the crossing branches.
    """

    spec: QuenchSpec
    grid: TimeGrid
    points: list[CoherencePoint]
    events: list[Event]
    times: np.ndarray
    fq: np.ndarray
    n_eff: np.ndarray
    le: np.ndarray
    r_le: np.ndarray
    r_fq: np.ndarray
    labels: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    vz: np.ndarray
    z_exp: np.ndarray


def mqfi(var: VarianceTriple, n: int) -> MqfiPoint:
    """Maximal Fisher density of one variance triple.

    The direction average over the unit sphere weights (vx, vy, vz) with
    (sin^2 b cos^2 p, sin^2 b sin^2 p, cos^2 b); those weights fill the
    whole probability simplex, so the maximum sits at the largest variance.
    """
    fq = max(var.vx, var.vy, var.vz) / float(n) ** 2
    fq = min(max(fq, 0.0), 1.0)
    return MqfiPoint(fq=fq, n_eff=n * fq, argmax=var.argmax)


def loschmidt_log_batch(modes: ModeSet, times: np.ndarray) -> np.ndarray:
    """log LE(t) accumulated per momentum pair (underflow-safe)."""
    times = np.asarray(times, dtype=float)
    if times.size and times.min() < 0:
        raise ValueError("times must be >= 0")
    phi = modes.phi[modes.paired]
    eps2 = modes.eps2[modes.paired]
    amp = np.abs(
        np.cos(phi) ** 2
        + np.sin(phi) ** 2 * np.exp(-2j * np.outer(times, eps2))
    )
    with np.errstate(divide="ignore"):
        return np.minimum(np.log(amp), 0.0).sum(axis=1)


def loschmidt_echo(modes: ModeSet, t: float) -> float:
    """Loschmidt echo |<initial | evolved>| at one time, clamped to [0, 1]."""
    return float(np.exp(loschmidt_log_batch(modes, np.array([float(t)]))[0]))


def rate_le(le: float, n: int) -> float | None:
    """Return-probability rate -log(le^2)/N; None marks a divergence."""
    return _rate(le, n)


def rate_fq(fq: float, n: int) -> float | None:
    """Fisher-density rate -log(fq^2)/N; None marks a divergence."""
    return _rate(fq, n)


def _rate(value: float, n: int) -> float | None:
    if not 0.0 <= value <= 1.0 + 1e-12:
        raise ValueError(f"rate input must lie in [0, 1], got {value}")
    if value < _RATE_FLOOR:
        return None
    return max(-2.0 * float(np.log(min(value, 1.0))) / n, 0.0)


def _series_chunk(spec: QuenchSpec, times: np.ndarray) -> dict:
    modes = build_modes(spec)
    g_rows = eval_kernel_batch(modes, times)
    vx, vy, vz, z_exp, _ = variance_arrays_batch(g_rows, spec.n)
    log_le = loschmidt_log_batch(modes, times)
    return {"vx": vx, "vy": vy, "vz": vz, "z_exp": z_exp, "log_le": log_le}


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1"))
    return max(1, workers)


def _compute_arrays(spec: QuenchSpec, times: np.ndarray, workers: int) -> dict:
    if workers <= 1 or times.size < 2 * workers:
        return _series_chunk(spec, times)
    chunks = np.array_split(times, min(4 * workers, times.size))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_series_chunk, [spec] * len(chunks), chunks))
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def run_series(
    spec: QuenchSpec,
    grid: TimeGrid,
    workers: int | None = None,
    detectors: bool = True,
) -> CoherenceSeries:
    """Evaluate the full coherence record over a time grid.

    Each grid time is independent: kernel -> variances -> Fisher density,
    plus the Loschmidt echo and both rate functions.  With ``detectors``
    the applicable event detectors run afterwards; inapplicable ones are
    skipped (call them directly to get the precondition errors).
    """
    workers = _resolve_workers(workers)
    times = grid.times
    arrs = _compute_arrays(spec, times, workers)
    n = spec.n
    vmax = np.maximum(np.maximum(arrs["vx"], arrs["vy"]), arrs["vz"])
    fq = np.clip(vmax / float(n) ** 2, 0.0, 1.0)
    labels = argmax_labels(arrs["vx"], arrs["vy"], arrs["vz"])
    le = np.exp(arrs["log_le"])
    r_le = np.maximum(-2.0 * arrs["log_le"] / n, 0.0)
    with np.errstate(divide="ignore"):
        r_fq = np.where(fq >= _RATE_FLOOR, -2.0 * np.log(np.maximum(fq, _RATE_FLOOR)) / n, np.inf)
    r_fq = np.maximum(r_fq, 0.0)

    points = [
        CoherencePoint(
            t=float(times[i]),
            fq=float(fq[i]),
            n_eff=float(n * fq[i]),
            le=float(le[i]),
            r_le=float(r_le[i]) if np.isfinite(r_le[i]) else None,
            r_fq=float(r_fq[i]) if np.isfinite(r_fq[i]) else None,
            argmax=str(labels[i]),
        )
        for i in range(times.size)
    ]
    series = CoherenceSeries(
        spec=spec,
        grid=grid,
        points=points,
        events=[],
        times=times,
        fq=fq,
        n_eff=n * fq,
        le=le,
        r_le=r_le,
        r_fq=r_fq,
        labels=labels,
        vx=arrs["vx"],
        vy=arrs["vy"],
        vz=arrs["vz"],
        z_exp=arrs["z_exp"],
    )
    if detectors:
        series.events = _auto_events(series)
    return series


def _auto_events(series: CoherenceSeries) -> list[Event]:
    events = list(detect_mqfi_cusps(series))
    events += detect_dqpt_cusps(series)
    try:
        t_min = rfq_first_minimum(series)
        events.append(Event(kind="rfq-first-min", time=t_min))
    except DetectorError:
        pass
    spec = series.spec
    if spec.lambda1 != spec.lambda2:
        prediction = revival_time_prediction(spec)
        if np.isfinite(prediction) and series.grid.t_max >= 1.5 * prediction:
            t, kind = detect_revival_or_decay(series, prediction)
            events.append(Event(kind=kind, time=t, detail={"prediction": prediction}))
    events.sort(key=lambda e: (e.time, e.kind))
    return events


def detect_mqfi_cusps(series: CoherenceSeries) -> list[Event]:
    """Cusp times where the maximizing direction switches.

    The event time is refined by linearly interpolating the two crossing
    variance branches inside the switching interval.
    """
    branches = {"X": series.vx, "Y": series.vy, "Z": series.vz}
    labels = series.labels
    times = series.times
    events = []
    for i in range(1, len(times)):
        a, b = str(labels[i - 1]), str(labels[i])
        if a == b:
            continue
        d0 = branches[a][i - 1] - branches[b][i - 1]
        d1 = branches[a][i] - branches[b][i]
        frac = 0.5 if d0 == d1 else d0 / (d0 - d1)
        frac = min(max(frac, 0.0), 1.0)
        t_c = times[i - 1] + (times[i] - times[i - 1]) * frac
        events.append(Event(kind="mqfi-cusp", time=float(t_c), detail={"from": a, "to": b}))
    return events


def detect_dqpt_cusps(series: CoherenceSeries) -> list[Event]:
    """Cusps of the return-probability rate function.

    Local maxima of the absolute second difference exceeding twenty times
    its median are reported; the scale-free threshold keeps the detector
    uniform across quench sizes (slope breaks scale linearly with the step
    while smooth curvature scales quadratically, so genuine cusps clear the
    bar by an order of magnitude).  Maxima closer than three grid steps
    merge into the strongest one.
    """
    r = series.r_le
    if len(r) < 3 or not np.all(np.isfinite(r)):
        return []
    curv = np.abs(r[:-2] - 2.0 * r[1:-1] + r[2:])
    med = float(np.median(curv))
    threshold = 20.0 * med
    peaks = [
        i
        for i in range(1, len(curv) - 1)
        if curv[i] > threshold and curv[i] >= curv[i - 1] and curv[i] >= curv[i + 1]
    ]
    merged: list[int] = []
    for i in peaks:
        if merged and i - merged[-1] <= 3:
            if curv[i] > curv[merged[-1]]:
                merged[-1] = i
        else:
            merged.append(i)
    return [
        Event(
            kind="dqpt-cusp",
            time=float(series.times[i + 1]),
            detail={"curvature": float(curv[i]), "threshold": threshold},
        )
        for i in merged
    ]


def detect_revival_or_decay(series: CoherenceSeries, prediction: float) -> tuple[float, str]:
    """Measured revival (F_Q minimum) or decay (F_Q maximum) time.

    The extremum is searched in a +-25% window around the light-cone
    prediction; the kind follows the initial phase: couplings above the
    critical point revive (dip), below it they decay (peak).
    """
    if not np.isfinite(prediction) or prediction <= 0:
        raise DetectorError(f"prediction must be finite and > 0, got {prediction}")
    if series.grid.t_max < 1.5 * prediction:
        raise DetectorError(
            f"series spans t <= {series.grid.t_max:g} but the detector needs at least "
            f"1.5x the predicted time {prediction:g}; extend the grid"
        )
    lo, hi = 0.75 * prediction, 1.25 * prediction
    mask = (series.times >= lo) & (series.times <= hi)
    if not np.any(mask):
        raise DetectorError("no grid points inside the +-25% search window")
    idx = np.nonzero(mask)[0]
    window = series.fq[idx]
    if series.spec.lambda1 > 1.0:
        j = idx[int(np.argmin(window))]
        kind = "revival"
    else:
        j = idx[int(np.argmax(window))]
        kind = "decay"
    return float(series.times[j]), kind


def rfq_first_minimum(series: CoherenceSeries) -> float:
    """Time of the first local minimum of the Fisher-density rate.

    Sub-grid accuracy comes from a parabolic fit through the minimum and
    its neighbours.
    """
    r = series.r_fq
    t = series.times
    for i in range(1, len(r) - 1):
        if not (np.isfinite(r[i - 1]) and np.isfinite(r[i]) and np.isfinite(r[i + 1])):
            continue
        if r[i] < r[i - 1] and r[i] <= r[i + 1]:
            denom = r[i - 1] - 2.0 * r[i] + r[i + 1]
            if denom <= 0:
                return float(t[i])
            shift = 0.5 * (r[i - 1] - r[i + 1]) / denom
            shift = min(max(shift, -1.0), 1.0)
            return float(t[i] + shift * (t[i] - t[i - 1]))
    raise DetectorError("no local minimum of the Fisher-density rate in the series span")


# ---------------------------------------------------------------------------
# static scan and long-time sweep


@dataclass(frozen=True)
class StaticScanResult:
    lambdas: np.ndarray
    n_values: tuple[int, ...]
    fq: dict[int, np.ndarray]          # per size: F_Q(lambda) at t = 0
    dfq: dict[int, np.ndarray]         # discrete derivative of F_Q(lambda)
    lambda_m: dict[int, float]         # per size: coupling of maximal derivative
    p_index: np.ndarray                # per lambda: scaling exponent of max variance
    scaling_exponent: float | None     # fit of log(1 - lambda_m) vs log N
    grid_warning: bool = False


def _static_fq_batch(lambdas: np.ndarray, n: int, sector: str) -> np.ndarray:
    rows = np.stack([static_kernel(lam, n, sector).values for lam in lambdas])
    vx, vy, vz, _, _ = variance_arrays_batch(rows, n)
    return np.maximum(np.maximum(vx, vy), vz) / float(n) ** 2


def _refine_lambda_m(n: int, sector: str, lo: float, hi: float, tol: float = 1e-7) -> float:
    """Zoom on the maximum of dF_Q/dlambda by repeated re-gridding."""
    for _ in range(60):
        grid = np.linspace(lo, hi, 17)
        fq = _static_fq_batch(grid, n, sector)
        d = np.gradient(fq, grid)
        i = int(np.argmax(d))
        lo_new = grid[max(i - 1, 0)]
        hi_new = grid[min(i + 1, len(grid) - 1)]
        if hi_new - lo_new < tol or (hi_new - lo_new) >= (hi - lo):
            return float(grid[i])
        lo, hi = lo_new, hi_new
    return float(0.5 * (lo + hi))


def static_scan(
    lambda_grid: np.ndarray,
    n_values: tuple[int, ...],
    sector: str = "integer",
    refine: bool = True,
) -> StaticScanResult:
    """Equilibrium Fisher density versus coupling for several sizes.

    For each size the coupling of maximal derivative is located (optionally
    refined beyond the grid); the per-coupling p-index is the slope of
    log(max variance) against log N over the supplied sizes.
    """
    lambdas = np.asarray(lambda_grid, dtype=float)
    if lambdas.ndim != 1 or lambdas.size < 1:
        raise ValueError("lambda grid must be a non-empty 1-d array")
    if lambdas.size > 1 and not np.all(np.diff(lambdas) > 0):
        raise ValueError("lambda grid must be strictly increasing")
    if np.any(lambdas < 0):
        raise ValueError("couplings must be >= 0")
    fq: dict[int, np.ndarray] = {}
    dfq: dict[int, np.ndarray] = {}
    lambda_m: dict[int, float] = {}
    grid_warning = lambdas.size < 3
    for n in n_values:
        fq[n] = _static_fq_batch(lambdas, n, sector)
        if lambdas.size >= 2:
            dfq[n] = np.gradient(fq[n], lambdas)
            i = int(np.argmax(dfq[n]))
            if refine and 0 < i < lambdas.size - 1:
                lambda_m[n] = _refine_lambda_m(n, sector, lambdas[i - 1], lambdas[i + 1])
            else:
                lambda_m[n] = float(lambdas[i])
                grid_warning = grid_warning or i in (0, lambdas.size - 1)
        else:
            dfq[n] = np.zeros_like(lambdas)
            lambda_m[n] = float(lambdas[0])
    logn = np.log(np.array(n_values, dtype=float))
    if len(n_values) >= 2:
        maxvar = np.stack([fq[n] * float(n) ** 2 for n in n_values])  # (sizes, lambdas)
        with np.errstate(divide="ignore"):
            logv = np.log(np.maximum(maxvar, 1e-300))
        p_index = np.polyfit(logn, logv, 1)[0]
        gaps = np.array([1.0 - lambda_m[n] for n in n_values])
        if np.all(gaps > 0):
            scaling_exponent = float(np.polyfit(logn, np.log(gaps), 1)[0])
        else:
            scaling_exponent = None
    else:
        p_index = np.full(lambdas.size, np.nan)
        scaling_exponent = None
    return StaticScanResult(
        lambdas=lambdas,
        n_values=tuple(int(n) for n in n_values),
        fq=fq,
        dfq=dfq,
        lambda_m=lambda_m,
        p_index=np.asarray(p_index, dtype=float),
        scaling_exponent=scaling_exponent,
        grid_warning=grid_warning,
    )


@dataclass(frozen=True)
class SweepResult:
    lambda1: float
    lambda2: np.ndarray
    n: int
    t_ltr: float
    window: float
    fq_static: np.ndarray
    fq_longtime: np.ndarray
    derivative: np.ndarray
    transition_estimate: float


def _sweep_point(spec: QuenchSpec, window_times: np.ndarray) -> float:
    arrs = _series_chunk(spec, window_times)
    vmax = np.maximum(np.maximum(arrs["vx"], arrs["vy"]), arrs["vz"])
    return float(np.clip(vmax / float(spec.n) ** 2, 0.0, 1.0).mean())


def long_time_sweep(
    lambda1: float,
    lambda2_grid: np.ndarray,
    n: int,
    t_ltr: float,
    window: float | None = None,
    dt: float = 0.05,
    sector: str = "integer",
    workers: int | None = None,
) -> SweepResult:
    """Trailing-window average of F_Q versus the final coupling.

    For each final coupling the Fisher density is averaged over
    [t_ltr - window, t_ltr] (window defaults to 20% of t_ltr); the
    equilibrium curve at t = 0 is emitted alongside, and the transition
    estimate is the grid midpoint where log(longtime/static) changes
    fastest, i.e. where the stationary value stops tracking equilibrium.
    """
    lambda2_grid = np.asarray(lambda2_grid, dtype=float)
    if lambda2_grid.ndim != 1 or lambda2_grid.size < 1:
        raise ValueError("lambda2 grid must be a non-empty 1-d array")
    if window is None:
        window = 0.2 * t_ltr
    if not 0 < window <= t_ltr:
        raise ValueError("window must satisfy 0 < window <= t_ltr")
    count = max(int(round(window / dt)) + 1, 2)
    window_times = t_ltr - window + (window / (count - 1)) * np.arange(count)
    specs = [QuenchSpec(n=n, lambda1=lambda1, lambda2=l2, sector=sector) for l2 in lambda2_grid]
    workers = _resolve_workers(workers)
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            longtime = np.array(
                list(pool.map(_sweep_point, specs, [window_times] * len(specs)))
            )
    else:
        longtime = np.array([_sweep_point(s, window_times) for s in specs])
    fq_static = _static_fq_batch(lambda2_grid, n, sector)
    if lambda2_grid.size >= 2:
        deriv = np.diff(longtime) / np.diff(lambda2_grid)
        derivative = np.concatenate([deriv, [deriv[-1]]])
        # transition estimate: the long-time value tracks the equilibrium
        # curve below the critical coupling and departs from it above, so
        # the steepest change of log(longtime/static) marks the transition
        log_ratio = np.log(np.maximum(longtime, 1e-300)) - np.log(
            np.maximum(fq_static, 1e-300)
        )
        i = int(np.argmax(np.abs(np.diff(log_ratio)) / np.diff(lambda2_grid)))
        transition = float(0.5 * (lambda2_grid[i] + lambda2_grid[i + 1]))
    else:
        derivative = np.zeros_like(lambda2_grid)
        transition = float(lambda2_grid[0])
    return SweepResult(
        lambda1=float(lambda1),
        lambda2=lambda2_grid,
        n=int(n),
        t_ltr=float(t_ltr),
        window=float(window),
        fq_static=fq_static,
        fq_longtime=longtime,
        derivative=derivative,
        transition_estimate=transition,
    )

"""Single-particle data for the transverse-field Ising chain.

Everything downstream (quench kernel, Loschmidt echo, correlators) is built
from the per-momentum dispersions and Bogoliubov angles of the pre- and
post-quench Hamiltonians collected here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SECTOR_INTEGER = "integer"
SECTOR_HALF_INTEGER = "half-integer"
SECTORS = (SECTOR_INTEGER, SECTOR_HALF_INTEGER)

# eps below this is treated as an exact level crossing when fixing the angle
_GAPLESS_EPS = 1e-12


class SectorMismatchError(ValueError):
    """Chain length incompatible with the requested momentum sector."""


@dataclass(frozen=True)
class QuenchSpec:
    """Definition of one sudden-quench experiment.

    n: chain length (sites). lambda1/lambda2: transverse-coupling ratio of
    the pre- and post-quench Hamiltonians. sector: momentum quantization,
    ``integer`` (k = 2*pi*m/N, odd N) or ``half-integer``
    (k = pi*(2m+1)/N, even N).
    """

    n: int
    lambda1: float
    lambda2: float
    sector: str = SECTOR_INTEGER

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 3:
            raise ValueError(f"chain length must be an integer >= 3, got {self.n}")
        for name in ("lambda1", "lambda2"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if self.sector not in SECTORS:
            raise ValueError(f"unknown sector {self.sector!r}, expected one of {SECTORS}")
        if self.sector == SECTOR_INTEGER and self.n % 2 == 0:
            raise SectorMismatchError(
                f"integer sector needs odd n (grid k = 2*pi*m/n, m = 0..(n-1)/2); got n={self.n}"
            )
        if self.sector == SECTOR_HALF_INTEGER and self.n % 2 == 1:
            raise SectorMismatchError(
                f"half-integer sector needs even n (grid k = pi*(2m+1)/n); got n={self.n}"
            )


@dataclass(frozen=True)
class ModeSet:
    """Per-momentum data over the non-negative half of the grid.

    ``weights`` carries the Fourier weight of each mode in chain-averaged
    sums: 2/N for +-k pairs, 1/N for a self-conjugate mode (k = 0).
    ``paired`` marks the +-k pairs; only those contribute factors to pair
    products such as the Loschmidt echo. ``degenerate`` flags modes where
    the dispersion vanished and the angle was set by its limiting value.
    """

    n: int
    sector: str
    momenta: np.ndarray
    eps1: np.ndarray
    eps2: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    paired: np.ndarray
    degenerate: np.ndarray = field(repr=False, default=None)


def momentum_grid(n: int, sector: str) -> tuple[np.ndarray, np.ndarray]:
    """Non-negative momenta of a sector and their pairing mask."""
    if sector == SECTOR_INTEGER:
        m = np.arange((n - 1) // 2 + 1)
        k = 2.0 * np.pi * m / n
        paired = m > 0
    elif sector == SECTOR_HALF_INTEGER:
        m = np.arange(n // 2)
        k = np.pi * (2 * m + 1) / n
        paired = np.ones(k.shape, dtype=bool)
    else:
        raise ValueError(f"unknown sector {sector!r}")
    return k, paired


def dispersion_parts(lam: float, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Quadratic-form coefficients (a_k, b_k) of the per-mode 2x2 block."""
    k = np.asarray(k, dtype=float)
    return -2.0 * (lam * np.cos(k) + 1.0), 2.0 * lam * np.sin(k)


def dispersion(lam: float, k: np.ndarray) -> np.ndarray:
    """Quasiparticle energy eps_k = sqrt(a_k^2 + b_k^2)."""
    a, b = dispersion_parts(lam, k)
    return np.hypot(a, b)


def bogoliubov_angle(lam: float, k: np.ndarray) -> np.ndarray:
    """Angle theta_k fixed by (cos 2theta, sin 2theta) = (-a_k, b_k)/eps_k.

    This branch makes all quasiparticle energies +eps_k.  At an exact level
    crossing (eps = 0) the k -> pi limit value pi/4 is used.
    """
    a, b = dispersion_parts(lam, k)
    eps = np.hypot(a, b)
    theta = 0.5 * np.arctan2(b, -a)
    return np.where(eps < _GAPLESS_EPS, np.pi / 4.0, theta)


def build_modes(spec: QuenchSpec) -> ModeSet:
    """Assemble dispersions, angles, and quench angle differences."""
    k, paired = momentum_grid(spec.n, spec.sector)
    eps1 = dispersion(spec.lambda1, k)
    eps2 = dispersion(spec.lambda2, k)
    theta1 = bogoliubov_angle(spec.lambda1, k)
    theta2 = bogoliubov_angle(spec.lambda2, k)
    phi = theta2 - theta1
    weights = np.where(paired, 2.0 / spec.n, 1.0 / spec.n)
    degenerate = (eps1 < _GAPLESS_EPS) | (eps2 < _GAPLESS_EPS)
    return ModeSet(
        n=spec.n,
        sector=spec.sector,
        momenta=k,
        eps1=eps1,
        eps2=eps2,
        theta1=theta1,
        theta2=theta2,
        phi=phi,
        weights=weights,
        paired=paired,
        degenerate=degenerate,
    )


def max_group_velocity(lam: float) -> float:
    """Largest quasiparticle group velocity: 2*lam below the critical
    coupling, saturating at 2 above it."""
    if not np.isfinite(lam) or lam < 0:
        raise ValueError(f"coupling must be finite and >= 0, got {lam}")
    return 2.0 * min(lam, 1.0)


def revival_time_prediction(spec: QuenchSpec) -> float:
    """Light-cone revival/decay time N / (2 v_max) of the post-quench
    Hamiltonian.  Returns ``inf`` for lambda2 = 0 (no propagation)."""
    v = max_group_velocity(spec.lambda2)
    if v == 0.0:
        return float("inf")
    return spec.n / (2.0 * v)


@dataclass(frozen=True)
class CriticalTimes:
    """Critical mode and real-time cusp schedule of a coupling-crossing
    quench.  ``times`` holds t_n = t_star*(n + 1/2); it is empty when the
    elementary period is infinite (post-quench gap closes at k_star)."""

    k_star: float
    t_star: float
    times: np.ndarray

    @property
    def finite(self) -> bool:
        return np.isfinite(self.t_star)


def dqpt_critical_times(spec: QuenchSpec, n_max: int = 4) -> CriticalTimes | None:
    """Locate the mode whose pre/post occupations are equal and the cusp
    times it generates.  Returns None when no such mode exists, i.e. when
    both couplings sit strictly on the same side of the critical point (or
    are equal)."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    l1, l2 = spec.lambda1, spec.lambda2
    denom = l1 + l2
    # no quench: the angle difference vanishes identically, so the crossing
    # condition has no solution even where the arccos formula degenerates
    if denom == 0.0 or l1 == l2:
        return None
    c = -(1.0 + l1 * l2) / denom
    if abs(c) > 1.0:
        return None
    k_star = float(np.arccos(c))
    eps_star = float(dispersion(l2, np.array([k_star]))[0])
    if eps_star < _GAPLESS_EPS:
        return CriticalTimes(k_star=k_star, t_star=float("inf"), times=np.empty(0))
    t_star = np.pi / eps_star
    times = t_star * (np.arange(n_max) + 0.5)
    return CriticalTimes(k_star=k_star, t_star=float(t_star), times=times)

"""Time-dependent contraction kernel G_j(t).

G_j(t) is the elementary fermionic contraction from which every string
correlator is assembled:

    G_j(t) = sum_k w_k [ cos(2 phi_k) cos(k j + 2 theta2_k)
                         + sin(2 phi_k) sin(k j + 2 theta2_k) cos(2 eps2_k t) ]

summed over the non-negative half of the momentum grid with Fourier weights
w_k (2/N for +-k pairs, 1/N for the self-conjugate k = 0 mode).  The sign
and the k = 0 weight are fixed so that the static kernel reproduces exact
diagonalization: at lambda = 0 the kernel is G_0 = 1, G_j = 0, giving the
product-state variances exactly.

The fast path evaluates all offsets j in [-(N-1), N-1] with two length-N
FFTs per time; the direct path is a plain ascending-k summation kept as an
independent reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectrum import SECTOR_HALF_INTEGER, ModeSet, QuenchSpec, build_modes


@dataclass(frozen=True)
class Kernel:
    """Contraction values at one time, indexed j = -(N-1) .. N-1."""

    n: int
    t: float
    values: np.ndarray

    def g(self, j: int) -> float:
        """G_j(t); valid for |j| <= N-1."""
        return float(self.values[self.n - 1 + j])


def _mode_coefficients(modes: ModeSet):
    """Per-mode complex coefficients of the kernel transform.

    G_j = Re[ phase_j * sum_m (c0_m - 1j * c1_m * cos(2 eps2_m t)) * e^{i k_m j} ]
    with c0 = w cos(2 phi) e^{2i theta2} and c1 = w sin(2 phi) e^{2i theta2}.
    """
    e2t = np.exp(2j * modes.theta2)
    c0 = modes.weights * np.cos(2.0 * modes.phi) * e2t
    c1 = modes.weights * np.sin(2.0 * modes.phi) * e2t
    return c0, c1


def eval_kernel_batch(modes: ModeSet, times: np.ndarray) -> np.ndarray:
    """Kernel rows for many times at once; shape (len(times), 2N-1)."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise ValueError("times must be one-dimensional")
    if times.size and times.min() < 0:
        raise ValueError("times must be >= 0 (the protocol starts at t = 0)")
    n = modes.n
    c0, c1 = _mode_coefficients(modes)
    osc = np.cos(2.0 * np.outer(times, modes.eps2))  # (T, K)
    z = np.zeros((times.size, n), dtype=complex)
    coeff = c0[None, :] - 1j * c1[None, :] * osc
    if modes.sector == SECTOR_HALF_INTEGER:
        # k_m = pi (2m+1)/N: absorb the half-step as a twiddle phase
        z[:, : coeff.shape[1]] = coeff
        j = np.arange(n)
        tw_pos = np.exp(1j * np.pi * j / n)
        pos = (np.fft.ifft(z, axis=1) * n) * tw_pos
        neg = np.fft.fft(z, axis=1) * np.conj(tw_pos)
    else:
        # k_m = 2 pi m / N sits directly on the DFT grid
        z[:, : coeff.shape[1]] = coeff
        pos = np.fft.ifft(z, axis=1) * n
        neg = np.fft.fft(z, axis=1)
    out = np.empty((times.size, 2 * n - 1))
    out[:, n - 1 :] = pos.real
    out[:, : n - 1] = neg.real[:, 1:][:, ::-1]
    return out


def eval_kernel(modes: ModeSet, t: float) -> Kernel:
    """Kernel at a single time (fast path)."""
    row = eval_kernel_batch(modes, np.array([float(t)]))[0]
    return Kernel(n=modes.n, t=float(t), values=row)


def eval_kernel_direct(modes: ModeSet, t: float) -> Kernel:
    """Reference evaluation: explicit ascending-k sum per offset."""
    if t < 0:
        raise ValueError("times must be >= 0 (the protocol starts at t = 0)")
    n = modes.n
    j = np.arange(-(n - 1), n)
    arg = np.outer(j, modes.momenta) + 2.0 * modes.theta2
    term = modes.weights * (
        np.cos(2.0 * modes.phi) * np.cos(arg)
        + np.sin(2.0 * modes.phi) * np.sin(arg) * np.cos(2.0 * modes.eps2 * t)
    )
    return Kernel(n=n, t=float(t), values=term.sum(axis=1))


def static_kernel(lam: float, n: int, sector: str = "integer") -> Kernel:
    """Equilibrium kernel of a single coupling (no quench, t = 0)."""
    modes = build_modes(QuenchSpec(n=n, lambda1=lam, lambda2=lam, sector=sector))
    return eval_kernel(modes, 0.0)

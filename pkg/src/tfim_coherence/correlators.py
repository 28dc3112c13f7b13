"""String correlators and collective variances from a contraction kernel.

The two-point functions along x and y are determinants of Toeplitz blocks
built from kernel values,

    xx, order n:  det[ G_{i-j-1} ]_{i,j=1..n}
    yy, order n:  det[ G_{i-j+1} ]_{i,j=1..n}
    zz, order n:  G_0^2 - G_n G_{-n}

and the collective variances follow from translation invariance,

    <eta^2> = N [ 1 + sum_{n=1}^{N-1} G^{eta eta}_n ],   <Z> = N G_0.

All leading principal minors of a Toeplitz matrix are produced in O(n^2)
total by a bordering recursion (Levinson/Trench style).  Each step computes
the next determinant ratio twice, once from the bottom-right and once from
the top-left bordering; a mismatch or a vanishing ratio marks the batch
element for a dense-determinant fallback, so a recursion breakdown can
never produce a wrong answer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .kernel import Kernel

logger = logging.getLogger(__name__)

# breakdown thresholds for the minor recursion (relative to kernel scale)
_PIVOT_RTOL = 1e-13
_MISMATCH_RTOL = 1e-9

ARGMAX_LABELS = ("X", "Y", "Z")


@dataclass(frozen=True)
class VarianceTriple:
    """Collective variances of the three spin directions at one time."""

    t: float
    vx: float
    vy: float
    vz: float
    z_exp: float
    argmax: str


def toeplitz_leading_minors_batch(first_col: np.ndarray, first_row: np.ndarray):
    """Determinants of all leading principal minors for a batch of Toeplitz
    matrices.

    first_col[b, i] = a_i (i = 0..n-1) and first_row[b, i] = a_{-i} define
    matrix entries a_{i-j}.  Returns (dets, fallback) where dets has shape
    (B, n) with dets[:, m-1] = det of the m-th leading minor, and fallback
    marks batch elements that hit a recursion breakdown and were recomputed
    densely.
    """
    first_col = np.atleast_2d(np.asarray(first_col, dtype=float))
    first_row = np.atleast_2d(np.asarray(first_row, dtype=float))
    if first_col.shape != first_row.shape:
        raise ValueError("first_col and first_row must have matching shapes")
    if first_col.shape[1] == 0:
        raise ValueError("empty Toeplitz generator")
    if np.any(first_col[:, 0] != first_row[:, 0]):
        raise ValueError("first_col[0] and first_row[0] must agree (the diagonal)")
    b, n = first_col.shape
    a0 = first_col[:, 0]
    apos = first_col[:, 1:]  # a_1 .. a_{n-1}
    aneg = first_row[:, 1:]  # a_{-1} .. a_{-(n-1)}

    dets = np.empty((b, n))
    dets[:, 0] = a0
    scale = np.maximum(np.abs(first_col).max(axis=1), np.abs(first_row).max(axis=1))
    scale = np.maximum(scale, 1e-30)
    fallback = np.abs(a0) <= _PIVOT_RTOL * scale
    if n == 1:
        return dets, _apply_dense_fallback(dets, fallback, first_col, first_row)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        xr = np.zeros((b, n - 1))  # solution of T_m x = (a_{-m}..a_{-1}), reversed
        w = np.zeros((b, n - 1))   # solution of T_m w = (a_1..a_m)
        xr[:, 0] = aneg[:, 0] / a0
        w[:, 0] = apos[:, 0] / a0
        for m in range(1, n):
            s = a0 - np.einsum("bi,bi->b", apos[:, :m], xr[:, :m])
            sigma = a0 - np.einsum("bi,bi->b", aneg[:, :m], w[:, :m])
            dets[:, m] = dets[:, m - 1] * s
            bad = ~np.isfinite(s) | ~np.isfinite(sigma)
            bad |= np.abs(s) <= _PIVOT_RTOL * scale
            bad |= np.abs(s - sigma) > _MISMATCH_RTOL * np.maximum(
                np.maximum(np.abs(s), np.abs(sigma)), scale * 1e-6
            )
            fallback |= bad
            if m == n - 1:
                break
            omega = (
                apos[:, m] - np.einsum("bi,bi->b", apos[:, :m][:, ::-1], w[:, :m])
            ) / s
            xi = (
                aneg[:, m] - np.einsum("bi,bi->b", aneg[:, :m][:, ::-1], xr[:, :m])
            ) / sigma
            xr_flip = xr[:, :m][:, ::-1].copy()
            xr[:, :m] -= xi[:, None] * w[:, :m][:, ::-1]
            xr[:, m] = xi
            w[:, :m] -= omega[:, None] * xr_flip
            w[:, m] = omega

    for i in np.nonzero(fallback)[0]:
        logger.warning(
            "Toeplitz minor recursion breakdown (batch element %d); "
            "switching to the dense-restart path",
            i,
        )
        dets[i] = _robust_minor_sequence(first_col[i], first_row[i])
    return dets, fallback


def _robust_minor_sequence(
    first_col: np.ndarray, first_row: np.ndarray, max_restarts: int = 80
) -> np.ndarray:
    """Minor recursion that rides through breakdowns.

    At a vanishing or inconsistent determinant ratio the offending order is
    recomputed with a dense factorization and the recursion state is rebuilt
    by dense solves at the next order, so only O(m^3) work is spent per
    breakdown instead of O(n^4) for the whole sequence.
    """
    n = first_col.size
    a0 = first_col[0]
    apos = first_col[1:]
    aneg = first_row[1:]
    idx = np.subtract.outer(np.arange(n), np.arange(n))
    full = np.where(idx >= 0, first_col[np.abs(idx)], first_row[np.abs(idx)])
    scale = max(np.abs(first_col).max(), np.abs(first_row).max(), 1e-30)
    dets = np.empty(n)
    dets[0] = a0

    def _restart(order: int):
        """Dense solves defining the recursion state at ``order``."""
        t_block = full[:order, :order]
        x = np.linalg.solve(t_block, first_row[order:0:-1])  # rhs (a_{-order}..a_{-1})
        wv = np.linalg.solve(t_block, first_col[1 : order + 1])
        return x[::-1].copy(), wv

    xr = np.zeros(n - 1)
    w = np.zeros(n - 1)
    if abs(a0) <= _PIVOT_RTOL * scale:
        return dense_minor_sequence(first_col, first_row)
    xr[0] = aneg[0] / a0
    w[0] = apos[0] / a0
    restarts = 0
    m = 1
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        while m < n:
            s = a0 - apos[:m] @ xr[:m]
            sigma = a0 - aneg[:m] @ w[:m]
            bad = not (np.isfinite(s) and np.isfinite(sigma))
            bad = bad or abs(s) <= _PIVOT_RTOL * scale
            bad = bad or abs(s - sigma) > _MISMATCH_RTOL * max(abs(s), abs(sigma), scale * 1e-6)
            if bad:
                if restarts >= max_restarts:
                    dets[m:] = dense_minor_sequence(first_col, first_row)[m:]
                    return dets
                restarts += 1
                dets[m] = np.linalg.det(full[: m + 1, : m + 1])
                if m + 1 < n:
                    try:
                        xr[: m + 1], w[: m + 1] = _restart(m + 1)
                    except np.linalg.LinAlgError:
                        dets[m:] = dense_minor_sequence(first_col, first_row)[m:]
                        return dets
                m += 1
                continue
            dets[m] = dets[m - 1] * s
            if m == n - 1:
                break
            omega = (apos[m] - apos[:m][::-1] @ w[:m]) / s
            xi = (aneg[m] - aneg[:m][::-1] @ xr[:m]) / sigma
            xr_flip = xr[:m][::-1].copy()
            xr[:m] -= xi * w[:m][::-1]
            xr[m] = xi
            w[:m] -= omega * xr_flip
            w[m] = omega
            m += 1
    return dets


def dense_minor_sequence(first_col: np.ndarray, first_row: np.ndarray) -> np.ndarray:
    """All leading principal minors via dense LU determinants (reference)."""
    first_col = np.asarray(first_col, dtype=float)
    first_row = np.asarray(first_row, dtype=float)
    n = first_col.size
    idx = np.subtract.outer(np.arange(n), np.arange(n))
    full = np.where(idx >= 0, first_col[np.abs(idx)], first_row[np.abs(idx)])
    dets = np.empty(n)
    dets[0] = first_col[0]
    for m in range(2, n + 1):
        dets[m - 1] = np.linalg.det(full[:m, :m])
    return dets


def _xx_generators(g_rows: np.ndarray, n: int):
    """Toeplitz generators for the xx determinants: entries G_{i-j-1}."""
    off = n - 1
    # order up to n-1: a_d = G_{d-1}, d = -(n-2) .. n-2
    d = np.arange(n - 1)
    col = g_rows[:, off + d - 1]      # a_0 .. a_{n-2} = G_{-1}, G_0, .., G_{n-3}
    row = g_rows[:, off - d - 1]      # a_0, a_{-1}, .. = G_{-1}, G_{-2}, ..
    return col, row


def _yy_generators(g_rows: np.ndarray, n: int):
    """Toeplitz generators for the yy determinants: entries G_{i-j+1}."""
    off = n - 1
    d = np.arange(n - 1)
    col = g_rows[:, off + d + 1]      # G_1, G_2, ..
    row = g_rows[:, off - d + 1]      # G_1, G_0, G_{-1}, ..
    return col, row


def xx_minor_sequence(kernel: Kernel) -> np.ndarray:
    """String correlators along x for separations 1 .. N-1."""
    dets, _ = toeplitz_leading_minors_batch(*_xx_generators(kernel.values[None, :], kernel.n))
    return dets[0]


def yy_minor_sequence(kernel: Kernel) -> np.ndarray:
    """String correlators along y for separations 1 .. N-1."""
    dets, _ = toeplitz_leading_minors_batch(*_yy_generators(kernel.values[None, :], kernel.n))
    return dets[0]


def zz_sequence(kernel: Kernel) -> np.ndarray:
    """Two-point functions along z: G_0^2 - G_n G_{-n}, n = 1 .. N-1."""
    n = kernel.n
    g = kernel.values
    off = n - 1
    m = np.arange(1, n)
    return g[off] ** 2 - g[off + m] * g[off - m]


def variance_arrays_batch(g_rows: np.ndarray, n: int):
    """Collective variances for a batch of kernel rows.

    Returns (vx, vy, vz, z_exp, fallback_mask); negative variances inside
    the rounding tolerance 1e-8*N^2 are clamped to zero, deeper negatives
    are clamped too but logged.
    """
    g_rows = np.atleast_2d(g_rows)
    off = n - 1
    xx, fb1 = toeplitz_leading_minors_batch(*_xx_generators(g_rows, n))
    yy, fb2 = toeplitz_leading_minors_batch(*_yy_generators(g_rows, n))
    m = np.arange(1, n)
    g0 = g_rows[:, off]
    zz = g0[:, None] ** 2 - g_rows[:, off + m] * g_rows[:, off - m]
    vx = n * (1.0 + xx.sum(axis=1))
    vy = n * (1.0 + yy.sum(axis=1))
    z_exp = n * g0
    vz = n * (1.0 + zz.sum(axis=1)) - z_exp**2
    tol = 1e-8 * n * n
    for arr, name in ((vx, "vx"), (vy, "vy"), (vz, "vz")):
        deep = arr < -tol
        if np.any(deep):
            logger.warning(
                "%s below -1e-8*N^2 at %d point(s) (min %.3e); clamping to 0",
                name,
                int(deep.sum()),
                float(arr.min()),
            )
        np.clip(arr, 0.0, None, out=arr)
    return vx, vy, vz, z_exp, fb1 | fb2


def argmax_labels(vx: np.ndarray, vy: np.ndarray, vz: np.ndarray) -> np.ndarray:
    """Direction of the largest variance with tie-break X > Y > Z."""
    vx, vy, vz = np.atleast_1d(vx, vy, vz)
    out = np.where(
        (vx >= vy) & (vx >= vz), "X", np.where(vy >= vz, "Y", "Z")
    )
    return out


def variances(kernel: Kernel) -> VarianceTriple:
    """Variance triple (and its maximizing direction) for one kernel."""
    vx, vy, vz, z_exp, _ = variance_arrays_batch(kernel.values[None, :], kernel.n)
    label = argmax_labels(vx, vy, vz)[0]
    return VarianceTriple(
        t=kernel.t,
        vx=float(vx[0]),
        vy=float(vy[0]),
        vz=float(vz[0]),
        z_exp=float(z_exp[0]),
        argmax=str(label),
    )

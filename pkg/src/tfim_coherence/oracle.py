"""Independent ground truth for validating the analytic pipeline.

Three routes, none of which share code with the production path:

* dense exact diagonalization of the spin chain (N <= 12), the ultimate
  reference for every observable;
* per-momentum two-level evolution for the Loschmidt echo;
* exact evolution of the fermionic covariance blocks, from which string
  correlators are assembled either as determinants of the mixed-contraction
  block (the production pipeline's object, computed by independent means)
  or as full Wick pfaffians over all contraction blocks (the exact
  dynamics, which also tracks anomalous same-species pairings that the
  determinant representation discards).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .coherence import loschmidt_log_batch
from .correlators import variance_arrays_batch
from .kernel import eval_kernel_batch
from .spectrum import (
    SECTOR_HALF_INTEGER,
    SECTOR_INTEGER,
    QuenchSpec,
    build_modes,
    dispersion_parts,
)

ED_MAX_SITES = 12


class EDSizeError(ValueError):
    """Requested chain too large for dense exact diagonalization."""


@dataclass(frozen=True)
class SpinState:
    """Dense many-body state of a small chain."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm must be 1 within 1e-12, got {norm}")


# ---------------------------------------------------------------------------
# dense exact diagonalization

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def _site(op: np.ndarray, i: int, n: int) -> np.ndarray:
    out = np.array([[1.0]], dtype=op.dtype)
    for m in range(n):
        out = np.kron(out, op if m == i else np.eye(2, dtype=op.dtype))
    return out


def _check_size(n: int):
    if n > ED_MAX_SITES:
        raise EDSizeError(f"dense diagonalization is capped at {ED_MAX_SITES} sites, got {n}")
    if n < 2:
        raise ValueError("need at least 2 sites")


def build_hamiltonian(lam: float, n: int) -> np.ndarray:
    """Dense chain Hamiltonian with periodic bonds (real symmetric)."""
    _check_size(n)
    h = np.zeros((2**n, 2**n))
    for i in range(n):
        h -= lam * _site(_SX, i, n) @ _site(_SX, (i + 1) % n, n)
        h -= _site(_SZ, i, n)
    return h


def _parity_diagonal(n: int) -> np.ndarray:
    bits = np.arange(2**n)
    pop = np.array([bin(b).count("1") for b in bits])
    return np.where(pop % 2 == 0, 1.0, -1.0)


def ed_ground_state(lam: float, n: int) -> SpinState:
    """Lowest eigenvector; degenerate ground spaces are resolved toward the
    even eigenvector of the global spin-flip operator."""
    _check_size(n)
    w, v = eigh(build_hamiltonian(lam, n))
    cluster = np.nonzero(w < w[0] + 1e-8 * max(1.0, abs(w[0])))[0]
    parity = _parity_diagonal(n)
    if len(cluster) == 1:
        vec = v[:, cluster[0]]
    else:
        sub = v[:, cluster]
        pmat = sub.T @ (parity[:, None] * sub)
        pw, pv = eigh(pmat)
        vec = sub @ pv[:, int(np.argmax(pw))]
    even = float(vec @ (parity * vec))
    if even < 0:
        # no even state in the cluster; keep the lowest state as-is
        vec = v[:, cluster[0]]
    vec = vec / np.linalg.norm(vec)
    return SpinState(n=n, amplitudes=vec.astype(complex))


def _collective_ops(n: int):
    x = sum(_site(_SX, i, n) for i in range(n))
    z = sum(_site(_SZ, i, n) for i in range(n))
    y = sum(_site(_SY, i, n) for i in range(n))
    return x, y, z


@dataclass(frozen=True)
class EDPoint:
    t: float
    vx: float
    vy: float
    vz: float
    z_exp: float
    le: float

    @property
    def fq_numerator(self) -> float:
        return max(self.vx, self.vy, self.vz)


def ed_quench_observables(
    lambda1: float, lambda2: float, n: int, times: np.ndarray
) -> list[EDPoint]:
    """Exact collective variances, magnetization, and echo after a quench."""
    _check_size(n)
    psi0 = ed_ground_state(lambda1, n).amplitudes
    w, v = eigh(build_hamiltonian(lambda2, n))
    c0 = v.T @ psi0
    x, y, z = _collective_ops(n)
    x2, y2, z2 = x @ x, (y @ y).real, z @ z
    out = []
    for t in np.asarray(times, dtype=float):
        psi = v @ (np.exp(-1j * w * t) * c0)
        ex = float((psi.conj() @ (x @ psi)).real)
        ey = float((psi.conj() @ (y @ psi)).real)
        ez = float((psi.conj() @ (z @ psi)).real)
        vx = float((psi.conj() @ (x2 @ psi)).real) - ex**2
        vy = float((psi.conj() @ (y2 @ psi)).real) - ey**2
        vz = float((psi.conj() @ (z2 @ psi)).real) - ez**2
        le = float(abs(psi0.conj() @ psi))
        out.append(EDPoint(t=float(t), vx=vx, vy=vy, vz=vz, z_exp=ez, le=le))
    return out


def ed_assumption_maxima(
    lambda1: float, lambda2: float, n: int, times: np.ndarray
) -> dict[str, float]:
    """Largest sampled magnitudes of the expectations assumed to vanish in
    the variance decomposition: <X>, <Y>, <XZ>, <YZ>, <XY+YX>."""
    _check_size(n)
    psi0 = ed_ground_state(lambda1, n).amplitudes
    w, v = eigh(build_hamiltonian(lambda2, n))
    c0 = v.T @ psi0
    x, y, z = _collective_ops(n)
    ops = {
        "X": x.astype(complex),
        "Y": y,
        "XZ": (x @ z).astype(complex),
        "YZ": y @ z,
        "XY+YX": x @ y + y @ x,
    }
    worst = {name: 0.0 for name in ops}
    for t in np.asarray(times, dtype=float):
        psi = v @ (np.exp(-1j * w * t) * c0)
        for name, op in ops.items():
            worst[name] = max(worst[name], abs(complex(psi.conj() @ (op @ psi))))
    return worst


# ---------------------------------------------------------------------------
# per-momentum two-level evolution

def pair_block(lam: float, k: float) -> np.ndarray:
    """Hermitian 2x2 block of one +-k pair in the {empty, doubly-occupied}
    basis, built directly from the quadratic-form coefficients."""
    a, b = dispersion_parts(lam, np.array([k]))
    return np.array([[a[0], 1j * b[0]], [-1j * b[0], -a[0]]])


def _evolved_pair(lambda1: float, lambda2: float, k: float, t: float) -> np.ndarray:
    w1, v1 = eigh(pair_block(lambda1, k))
    g = v1[:, 0]
    w2, v2 = eigh(pair_block(lambda2, k))
    return v2 @ (np.exp(-1j * w2 * t) * (v2.conj().T @ g))


def le_mode_pair(spec: QuenchSpec, t: float) -> float:
    """Loschmidt echo from explicit two-level evolution of every pair."""
    modes = build_modes(spec)
    le = 1.0
    for k in modes.momenta[modes.paired]:
        w1, v1 = eigh(pair_block(spec.lambda1, float(k)))
        g = v1[:, 0]
        psi = _evolved_pair(spec.lambda1, spec.lambda2, float(k), t)
        le *= abs(np.vdot(g, psi))
    return float(le)


# ---------------------------------------------------------------------------
# covariance evolution, contraction blocks, pfaffians

def _full_grid(n: int, sector: str) -> np.ndarray:
    if sector == SECTOR_INTEGER:
        return 2.0 * np.pi * np.arange(n) / n
    return np.pi * (2.0 * np.arange(n) + 1) / n


def covariance_blocks(spec: QuenchSpec, t: float):
    """Real-space contraction blocks (AA, BB, BA, AB) of the evolved state.

    A_m = c_m + c_m^+ and B_m = c_m^+ - c_m; the blocks hold <A_m A_n> etc.
    Assembled by Fourier sums of the per-mode occupations n_k and pair
    amplitudes f_k obtained from two-level evolution.
    """
    n = spec.n
    kfull = _full_grid(n, spec.sector)
    nk = np.zeros(n)
    fk = np.zeros(n, dtype=complex)
    modes = build_modes(spec)
    for k in modes.momenta[modes.paired]:
        u, v = _evolved_pair(spec.lambda1, spec.lambda2, float(k), t)
        occ = float(abs(v) ** 2)
        f = -np.conj(u) * v
        if spec.sector == SECTOR_INTEGER:
            ik = int(round(k * n / (2.0 * np.pi)))
            imk = (n - ik) % n
        else:
            ik = int(round((k * n / np.pi - 1) / 2))
            imk = n - 1 - ik
        nk[ik] = occ
        nk[imk] = occ
        fk[ik] = f
        fk[imk] = -f
    r = np.subtract.outer(np.arange(n), np.arange(n))
    phases = np.exp(1j * r[:, :, None] * kfull[None, None, :])
    cdag = np.einsum("mnk,k->mn", phases, nk) / n          # <c_m^+ c_n>
    cpair = np.einsum("mnk,k->mn", np.conj(phases), fk) / n  # <c_m c_n>
    cdd = np.conj(cpair).T                                  # <c_m^+ c_n^+>
    ccd = np.eye(n) - cdag.T                                # <c_m c_n^+>
    aa = cpair + cdd + cdag + ccd
    bb = cdd - cdag - ccd + cpair
    ba = cdd + cdag - ccd - cpair
    ab = -ba.T
    return aa, bb, ba, ab


def contraction_from_covariance(spec: QuenchSpec, t: float) -> np.ndarray:
    """Kernel values G_j, j = -(N-1) .. N-1, read off the evolved mixed
    block: G_j = -<B_{m+j} A_m>.

    Negative separations wrap around the ring; in the half-integer sector
    the fermion contraction is antiperiodic, so the wrap flips the sign.
    """
    _, _, ba, _ = covariance_blocks(spec, t)
    n = spec.n
    j = np.arange(-(n - 1), n)
    values = -ba[j % n, 0].real
    if spec.sector == SECTOR_HALF_INTEGER:
        values[j < 0] *= -1.0
    return values


def pfaffian(a: np.ndarray) -> complex:
    """Pfaffian of an (even-dimensional) antisymmetric matrix by skew
    elimination with row pivoting."""
    a = np.array(a, dtype=complex)
    m = a.shape[0]
    if m % 2:
        return 0.0
    if m == 0:
        return 1.0 + 0j
    pf = 1.0 + 0j
    for k in range(0, m - 2, 2):
        piv = k + 1 + int(np.argmax(np.abs(a[k, k + 1 :])))
        if abs(a[k, piv]) == 0.0:
            return 0.0
        if piv != k + 1:
            a[[k + 1, piv]] = a[[piv, k + 1]]
            a[:, [k + 1, piv]] = a[:, [piv, k + 1]]
            pf = -pf
        pivval = a[k, k + 1]
        pf *= pivval
        rb = a[k, k + 2 :]
        rc = a[k + 1, k + 2 :]
        a[k + 2 :, k + 2 :] += (np.outer(rc, rb) - np.outer(rb, rc)) / pivval
    return pf * a[m - 2, m - 1]


def pfaffian_checked(a: np.ndarray, rtol: float = 1e-8) -> tuple[complex, bool]:
    """Pfaffian plus a consistency flag from the pf^2 = det identity."""
    pf = pfaffian(a)
    det = np.linalg.det(np.asarray(a, dtype=complex))
    scale = max(abs(det), abs(pf) ** 2, 1e-300)
    return pf, bool(abs(pf**2 - det) <= rtol * scale)


_STRING_OPS = {"xx": ("B", "A"), "yy": ("A", "B")}


def _string_ops(kind: str, dist: int) -> list[tuple[str, int]]:
    first, last = _STRING_OPS[kind]
    ops = [(first, 0)]
    for m in range(1, dist):
        ops.append(("A", m))
        ops.append(("B", m))
    ops.append((last, dist))
    return ops


def _contract(ops, aa, bb, ba, ab) -> np.ndarray:
    sz = len(ops)
    mat = np.zeros((sz, sz), dtype=complex)
    for i in range(sz):
        ti, si = ops[i]
        for j in range(i + 1, sz):
            tj, sj = ops[j]
            if ti == "A" and tj == "A":
                v = aa[si, sj] - (1.0 if si == sj else 0.0)
            elif ti == "B" and tj == "B":
                v = bb[si, sj] + (1.0 if si == sj else 0.0)
            elif ti == "B":
                v = ba[si, sj]
            else:
                v = ab[si, sj]
            mat[i, j] = v
            mat[j, i] = -v
    return mat


def string_correlators_pfaffian(spec: QuenchSpec, t: float, max_dist: int | None = None):
    """Exact <sigma_1 sigma_{1+n}> strings along x and y via full Wick
    pfaffians (keeps the anomalous same-species contractions)."""
    aa, bb, ba, ab = covariance_blocks(spec, t)
    max_dist = spec.n - 1 if max_dist is None else max_dist
    xx = np.empty(max_dist)
    yy = np.empty(max_dist)
    for d in range(1, max_dist + 1):
        xx[d - 1] = ((-1) ** d * pfaffian(_contract(_string_ops("xx", d), aa, bb, ba, ab))).real
        yy[d - 1] = (-((-1) ** d) * pfaffian(_contract(_string_ops("yy", d), aa, bb, ba, ab))).real
    return xx, yy


def string_correlators_determinant(spec: QuenchSpec, t: float, max_dist: int | None = None):
    """Strings along x and y as determinants of the mixed-contraction block
    (the determinant representation the production pipeline uses, computed
    from covariance evolution instead of the closed-form kernel)."""
    _, _, ba, _ = covariance_blocks(spec, t)
    max_dist = spec.n - 1 if max_dist is None else max_dist
    xx = np.empty(max_dist)
    yy = np.empty(max_dist)
    for d in range(1, max_dist + 1):
        idx = np.arange(d)
        mx = ba[np.ix_(idx, idx + 1)].real
        my = ba[np.ix_(idx + 1, idx)].real
        xx[d - 1] = (-1) ** d * np.linalg.det(mx)
        yy[d - 1] = (-1) ** d * np.linalg.det(my)
    return xx, yy


@dataclass(frozen=True)
class MajoranaResult:
    kernel_values: np.ndarray
    xx: np.ndarray
    yy: np.ndarray


def majorana_correlators(spec: QuenchSpec, t: float, max_dist: int | None = None) -> MajoranaResult:
    """Kernel equivalents and string correlators from covariance evolution."""
    xx, yy = string_correlators_determinant(spec, t, max_dist)
    return MajoranaResult(
        kernel_values=contraction_from_covariance(spec, t), xx=xx, yy=yy
    )


def variances_exact(spec: QuenchSpec, t: float):
    """Exact collective variances from full Wick pfaffians.

    The z component uses the four-operator pfaffian, which keeps the
    anomalous product the two-term formula drops.
    """
    aa, bb, ba, ab = covariance_blocks(spec, t)
    n = spec.n
    sx = sy = sz = 0.0
    for d in range(1, n):
        sx += ((-1) ** d * pfaffian(_contract(_string_ops("xx", d), aa, bb, ba, ab))).real
        sy += (-((-1) ** d) * pfaffian(_contract(_string_ops("yy", d), aa, bb, ba, ab))).real
        ops = [("A", 0), ("B", 0), ("A", d), ("B", d)]
        sz += pfaffian(_contract(ops, aa, bb, ba, ab)).real
    z_exp = float(np.trace(ab).real)
    vx = n * (1.0 + sx)
    vy = n * (1.0 + sy)
    vz = n * (1.0 + sz) - z_exp**2
    return float(vx), float(vy), float(vz), z_exp


# ---------------------------------------------------------------------------
# comparison suite

@dataclass(frozen=True)
class CheckResult:
    name: str
    tolerance: float
    max_deviation: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class OracleReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _pipeline_fq(spec: QuenchSpec, times: np.ndarray):
    modes = build_modes(spec)
    rows = eval_kernel_batch(modes, times)
    vx, vy, vz, _, _ = variance_arrays_batch(rows, spec.n)
    return np.maximum(np.maximum(vx, vy), vz) / float(spec.n) ** 2


def _check_kernel_equivalence(n: int, quenches, times, corrupt: bool) -> CheckResult:
    worst = 0.0
    for l1, l2 in quenches:
        spec = QuenchSpec(n=n, lambda1=l1, lambda2=l2)
        modes = build_modes(spec)
        rows = eval_kernel_batch(modes, times)
        if corrupt:
            rows = rows + 1e-6
        for i, t in enumerate(times):
            ref = contraction_from_covariance(spec, float(t))
            worst = max(worst, float(np.max(np.abs(rows[i] - ref))))
    return CheckResult(
        name="kernel-vs-covariance",
        tolerance=1e-8,
        max_deviation=worst,
        passed=worst <= 1e-8,
        detail=f"closed-form kernel vs evolved mixed contraction, N={n}",
    )


def _check_string_equivalence(n: int, quenches, times, corrupt: bool) -> CheckResult:
    worst = 0.0
    for l1, l2 in quenches:
        spec = QuenchSpec(n=n, lambda1=l1, lambda2=l2)
        modes = build_modes(spec)
        rows = eval_kernel_batch(modes, times)
        if corrupt:
            rows = rows + 1e-6
        from .correlators import toeplitz_leading_minors_batch, _xx_generators, _yy_generators

        xx_fast, _ = toeplitz_leading_minors_batch(*_xx_generators(rows, n))
        yy_fast, _ = toeplitz_leading_minors_batch(*_yy_generators(rows, n))
        for i, t in enumerate(times):
            xx_ref, yy_ref = string_correlators_determinant(spec, float(t))
            scale = max(1.0, float(np.max(np.abs(xx_ref))), float(np.max(np.abs(yy_ref))))
            dev = max(
                float(np.max(np.abs(xx_fast[i] - xx_ref))),
                float(np.max(np.abs(yy_fast[i] - yy_ref))),
            )
            worst = max(worst, dev / scale)
    return CheckResult(
        name="string-minors-vs-covariance",
        tolerance=1e-8,
        max_deviation=worst,
        passed=worst <= 1e-8,
        detail=f"minor recursion vs dense determinants over evolved contractions, N={n}",
    )


def _check_le(n_values, quenches, times) -> CheckResult:
    worst = 0.0
    for n in n_values:
        for l1, l2 in quenches:
            spec = QuenchSpec(n=n, lambda1=l1, lambda2=l2)
            modes = build_modes(spec)
            le_closed = np.exp(loschmidt_log_batch(modes, times))
            for i, t in enumerate(times):
                worst = max(worst, abs(float(le_closed[i]) - le_mode_pair(spec, float(t))))
    return CheckResult(
        name="le-closed-vs-mode-pair",
        tolerance=1e-10,
        max_deviation=worst,
        passed=worst <= 1e-10,
        detail=f"echo product formula vs two-level evolution, N in {tuple(n_values)}",
    )


def _check_ed_static(n: int, lambdas) -> CheckResult:
    worst = 0.0
    for lam in lambdas:
        spec = QuenchSpec(n=n, lambda1=lam, lambda2=lam)
        fq_pipe = float(_pipeline_fq(spec, np.array([0.0]))[0])
        ed = ed_quench_observables(lam, lam, n, np.array([0.0]))[0]
        worst = max(worst, abs(fq_pipe - ed.fq_numerator / n**2))
    return CheckResult(
        name="ed-static",
        tolerance=1e-9,
        max_deviation=worst,
        passed=worst <= 1e-9,
        detail=f"equilibrium Fisher density vs dense diagonalization, N={n}",
    )


def _check_ed_dynamics(n: int, l1: float, l2: float, times) -> CheckResult:
    spec = QuenchSpec(n=n, lambda1=l1, lambda2=l2)
    fq_pipe = _pipeline_fq(spec, times)
    ed = ed_quench_observables(l1, l2, n, times)
    dev_pipe = max(
        abs(float(fq_pipe[i]) - p.fq_numerator / n**2) for i, p in enumerate(ed)
    )
    dev_exact = 0.0
    for i, p in enumerate(ed):
        vx, vy, vz, _ = variances_exact(spec, float(times[i]))
        dev_exact = max(dev_exact, abs(max(vx, vy, vz) / n**2 - p.fq_numerator / n**2))
    return CheckResult(
        name="ed-dynamics",
        tolerance=0.05,
        max_deviation=dev_pipe,
        passed=dev_pipe <= 0.05,
        detail=(
            f"determinant pipeline vs dense diagonalization, N={n}, {l1}->{l2}; "
            f"full-Wick pfaffian route deviates from ED by {dev_exact:.2e}, so the gap "
            "is the anomalous-contraction truncation of the determinant representation, "
            "not an implementation or sector effect"
        ),
    )


def _check_ed_assumptions(n: int, l1: float, l2: float, times) -> CheckResult:
    worst = ed_assumption_maxima(l1, l2, n, times)
    worst_static = ed_assumption_maxima(l1, l2, n, np.array([0.0]))
    # the parity-protected expectations vanish at all times; the xy cross
    # term vanishes only for real states, i.e. before the quench
    dev = max(worst[k] for k in ("X", "Y", "XZ", "YZ"))
    dev = max(dev, worst_static["XY+YX"])
    return CheckResult(
        name="ed-assumption-zeros",
        tolerance=1e-9,
        max_deviation=dev,
        passed=dev <= 1e-9,
        detail=(
            "; ".join(f"|<{k}>| <= {v:.1e}" for k, v in worst.items() if k != "XY+YX")
            + f"; |<XY+YX>|(t=0) <= {worst_static['XY+YX']:.1e}"
            + f"; |<XY+YX>| grows to {worst['XY+YX']:.2e} after the quench, the "
            "evolved state is complex and the plane cross term is dropped by the "
            "direction maximization"
        ),
    )


def _check_exact_wick_vs_ed(n: int, l1: float, l2: float, times) -> CheckResult:
    spec = QuenchSpec(n=n, lambda1=l1, lambda2=l2, sector=SECTOR_HALF_INTEGER)
    ed = ed_quench_observables(l1, l2, n, times)
    worst = 0.0
    for i, p in enumerate(ed):
        vx, vy, vz, z_exp = variances_exact(spec, float(times[i]))
        worst = max(
            worst,
            abs(vx - p.vx),
            abs(vy - p.vy),
            abs(vz - p.vz),
            abs(abs(z_exp) - abs(p.z_exp)),
        )
    return CheckResult(
        name="exact-wick-vs-ed",
        tolerance=1e-8,
        max_deviation=worst,
        passed=worst <= 1e-8,
        detail=f"full-Wick pfaffian variances vs dense diagonalization, N={n}",
    )


def oracle_report(quick: bool = False, corrupt_kernel: bool = False) -> OracleReport:
    """Run the oracle-vs-pipeline comparison suite.

    ``corrupt_kernel`` injects a small perturbation into the pipeline
    kernel before the equivalence checks (fault-injection hook for the
    exit-status contract).
    """
    if quick:
        n_cov, times_cov = 21, np.linspace(0.0, 3.0, 5)
        quenches = [(2.0, 0.2), (1.5, 1.0)]
        le_sizes, le_times = (9, 15), np.linspace(0.0, 2.0, 4)
        ed_times = np.linspace(0.0, 2.0, 5)
    else:
        n_cov, times_cov = 51, np.linspace(0.0, 5.0, 20)
        quenches = [(2.0, 0.2), (0.2, 2.0), (1.5, 1.0)]
        le_sizes, le_times = (9, 15, 21), np.linspace(0.0, 3.0, 12)
        ed_times = np.linspace(0.0, 4.0, 12)
    checks = [
        _check_kernel_equivalence(n_cov, quenches, times_cov, corrupt_kernel),
        _check_string_equivalence(n_cov, quenches, times_cov[:: max(len(times_cov) // 6, 1)], corrupt_kernel),
        _check_le(le_sizes, [(1.5, 0.5), (0.2, 2.0)], le_times),
        _check_ed_static(9, (0.0, 0.5, 2.0)),
        _check_ed_dynamics(9, 1.5, 0.5, ed_times),
        _check_ed_assumptions(9, 1.5, 0.5, np.linspace(0.0, 3.0, 7)),
        _check_exact_wick_vs_ed(8, 1.5, 0.5, np.array([0.0, 0.3, 1.1, 2.7])),
    ]
    return OracleReport(checks=checks)

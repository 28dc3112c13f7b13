import numpy as np
import pytest

from tfim_coherence.kernel import (
    eval_kernel,
    eval_kernel_batch,
    eval_kernel_direct,
    static_kernel,
)
from tfim_coherence.spectrum import QuenchSpec, build_modes


def test_free_limit_closed_form():
    # product-state kernel: G_0 = 1, all other offsets vanish
    k = static_kernel(0.0, 9)
    assert k.g(0) == pytest.approx(1.0, abs=1e-14)
    for j in range(1, 9):
        assert abs(k.g(j)) < 1e-14
        assert abs(k.g(-j)) < 1e-14


def test_no_quench_time_independent():
    modes = build_modes(QuenchSpec(33, 0.8, 0.8))
    k0 = eval_kernel(modes, 0.0)
    for t in (0.7, 3.1, 12.0):
        kt = eval_kernel(modes, t)
        assert np.array_equal(kt.values, k0.values)


def test_fast_path_matches_direct_sum():
    modes = build_modes(QuenchSpec(201, 1.5, 1.0))
    kf = eval_kernel(modes, 7.3)
    kd = eval_kernel_direct(modes, 7.3)
    assert np.max(np.abs(kf.values - kd.values)) < 1e-10


def test_fast_path_matches_direct_sum_randomized():
    rng = np.random.default_rng(7)
    for _ in range(12):
        n = int(rng.choice([9, 21, 64, 120, 201]))
        sector = "integer" if n % 2 else "half-integer"
        spec = QuenchSpec(n, float(rng.uniform(0, 3)), float(rng.uniform(0, 3)), sector)
        modes = build_modes(spec)
        t = float(rng.uniform(0, 20))
        kf = eval_kernel(modes, t)
        kd = eval_kernel_direct(modes, t)
        assert np.max(np.abs(kf.values - kd.values)) < 1e-10


def test_kernel_magnitude_bound():
    rng = np.random.default_rng(11)
    for _ in range(10):
        n = int(rng.choice([9, 33, 101]))
        spec = QuenchSpec(n, float(rng.uniform(0, 4)), float(rng.uniform(0, 4)))
        rows = eval_kernel_batch(build_modes(spec), rng.uniform(0, 30, size=5))
        assert np.max(np.abs(rows)) <= 1.0 + 1e-12


def test_zero_slope_at_time_origin():
    # the kernel depends on t only through cos(2 eps t): flat at t = 0
    modes = build_modes(QuenchSpec(33, 1.7, 0.4))
    k0 = eval_kernel(modes, 0.0).values
    bound = (2.0 * np.max(modes.eps2)) ** 2
    for h in (1e-3, 1e-4):
        kh = eval_kernel(modes, h).values
        assert np.max(np.abs(kh - k0)) <= bound * h**2


def test_batch_matches_single():
    modes = build_modes(QuenchSpec(21, 0.3, 2.2))
    times = np.array([0.0, 0.9, 4.4])
    rows = eval_kernel_batch(modes, times)
    for i, t in enumerate(times):
        assert np.array_equal(rows[i], eval_kernel(modes, float(t)).values)


def test_static_kernel_equals_no_quench():
    ks = static_kernel(1.3, 21)
    modes = build_modes(QuenchSpec(21, 1.3, 1.3))
    assert np.array_equal(ks.values, eval_kernel(modes, 0.0).values)


def test_static_kernel_regression_n401():
    # pinned after validation against the direct sum; guards the summation
    # conventions and decays with |j|
    k = static_kernel(1.0, 401)
    expected = {
        0: 0.6366214004660163,
        1: -0.21221147515445046,
        -1: 0.6366214004660166,
        2: 0.12733209531545767,
        5: -0.057892437691495914,
        -7: 0.048991923367459,
        50: 0.0064706569865837825,
        200: 0.002493765586034906,
    }
    for j, value in expected.items():
        assert k.g(j) == pytest.approx(value, abs=1e-13)
    assert abs(k.g(200)) < abs(k.g(50)) < abs(k.g(5)) < abs(k.g(0))


def test_negative_time_rejected():
    modes = build_modes(QuenchSpec(9, 0.3, 0.6))
    with pytest.raises(ValueError):
        eval_kernel(modes, -0.1)
    with pytest.raises(ValueError):
        eval_kernel_direct(modes, -0.1)

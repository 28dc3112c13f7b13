import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfim_coherence.correlators import (
    dense_minor_sequence,
    toeplitz_leading_minors_batch,
    variance_arrays_batch,
    variances,
    xx_minor_sequence,
    yy_minor_sequence,
    zz_sequence,
)
from tfim_coherence.kernel import Kernel, eval_kernel, static_kernel
from tfim_coherence.spectrum import QuenchSpec, build_modes


def _random_kernel(rng, n):
    values = rng.uniform(-1, 1, 2 * n - 1)
    return Kernel(n=n, t=0.0, values=values)


def test_low_order_closed_forms():
    rng = np.random.default_rng(3)
    k = _random_kernel(rng, 6)
    xx = xx_minor_sequence(k)
    yy = yy_minor_sequence(k)
    g = k.g
    assert xx[0] == pytest.approx(g(-1))
    assert xx[1] == pytest.approx(g(-1) ** 2 - g(-2) * g(0), rel=1e-12)
    assert yy[0] == pytest.approx(g(1))
    assert yy[1] == pytest.approx(g(1) ** 2 - g(0) * g(2), rel=1e-12)


def test_minors_match_dense_random():
    rng = np.random.default_rng(42)
    for _ in range(60):
        col = rng.uniform(-1, 1, 41)
        row = rng.uniform(-1, 1, 41)
        row[0] = col[0]
        dets, _ = toeplitz_leading_minors_batch(col[None], row[None])
        ref = dense_minor_sequence(col, row)
        scale = np.maximum.accumulate(np.abs(ref))
        err = np.max(np.abs(dets[0] - ref) / np.maximum(np.abs(ref), 1e-6 * scale + 1e-300))
        assert err < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=13, max_size=13),
       st.lists(st.floats(-1, 1), min_size=13, max_size=13))
def test_minors_match_dense_property(col_vals, row_vals):
    col = np.array(col_vals)
    row = np.array(row_vals)
    row[0] = col[0]
    dets, _ = toeplitz_leading_minors_batch(col[None], row[None])
    ref = dense_minor_sequence(col, row)
    scale = np.maximum.accumulate(np.abs(ref))
    assert np.max(np.abs(dets[0] - ref) / np.maximum(np.abs(ref), 1e-6 * scale + 1e-12)) < 1e-8


def test_minors_match_dense_physical():
    modes = build_modes(QuenchSpec(101, 2.0, 0.2))
    k = eval_kernel(modes, 1.3)
    from tfim_coherence.correlators import _xx_generators, _yy_generators

    for gen, seq in ((_xx_generators, xx_minor_sequence), (_yy_generators, yy_minor_sequence)):
        col, row = gen(k.values[None, :], k.n)
        ref = dense_minor_sequence(col[0], row[0])
        fast = seq(k)
        scale = np.maximum.accumulate(np.abs(ref))
        assert np.max(np.abs(fast - ref) / np.maximum(np.abs(ref), 1e-6 * scale + 1e-300)) < 1e-8


def test_breakdown_falls_back(caplog):
    # the free-limit kernel has a vanishing first column entry: the
    # recursion cannot start and every order must come from the dense path
    k = static_kernel(0.0, 9)
    with caplog.at_level(logging.WARNING):
        xx = xx_minor_sequence(k)
    assert "breakdown" in caplog.text
    assert np.allclose(xx, 0.0, atol=1e-13)


def test_restart_path_matches_dense_on_hard_case():
    # near-singular leading minors occur in equilibrium kernels; the
    # restart path must ride through without losing accuracy
    k = static_kernel(0.54, 301)
    from tfim_coherence.correlators import _yy_generators, _robust_minor_sequence

    col, row = _yy_generators(k.values[None, :], k.n)
    rob = _robust_minor_sequence(col[0], row[0])
    ref = dense_minor_sequence(col[0], row[0])
    scale = np.maximum.accumulate(np.abs(ref))
    assert np.max(np.abs(rob - ref) / np.maximum(np.abs(ref), 1e-6 * scale + 1e-300)) < 1e-8


def test_zz_identities():
    zero = Kernel(n=7, t=0.0, values=np.zeros(13))
    assert np.allclose(zz_sequence(zero), 0.0)
    k = static_kernel(0.0, 9)
    assert np.allclose(zz_sequence(k), 1.0, atol=1e-13)
    rng = np.random.default_rng(5)
    k = _random_kernel(rng, 8)
    expect = [k.g(0) ** 2 - k.g(m) * k.g(-m) for m in range(1, 8)]
    assert np.allclose(zz_sequence(k), expect)


def test_product_state_variances():
    v = variances(static_kernel(0.0, 9))
    assert v.vx == pytest.approx(9.0, abs=1e-12)
    assert v.vy == pytest.approx(9.0, abs=1e-12)
    assert v.vz == pytest.approx(0.0, abs=1e-12)
    assert v.z_exp == pytest.approx(9.0, abs=1e-12)
    assert v.argmax == "X"


def test_deep_coupling_variance_density():
    v = variances(static_kernel(5.0, 201))
    assert v.vx / 201**2 > 0.97


def test_variances_constant_without_quench():
    modes = build_modes(QuenchSpec(21, 1.4, 1.4))
    ref = variances(eval_kernel(modes, 0.0))
    for t in (0.5, 2.0, 9.0):
        v = variances(eval_kernel(modes, t))
        assert v.vx == pytest.approx(ref.vx, abs=1e-12)
        assert v.vy == pytest.approx(ref.vy, abs=1e-12)
        assert v.vz == pytest.approx(ref.vz, abs=1e-12)


def test_negative_variance_clamped():
    n = 9
    values = np.zeros(2 * n - 1)
    values[n - 1] = 1.0 + 1e-12  # z variance lands just below zero
    vx, vy, vz, _, _ = variance_arrays_batch(values[None], n)
    assert vz[0] == 0.0


def test_argmax_tie_breaks():
    rows = np.zeros((1, 17))
    n = 9
    from tfim_coherence.correlators import argmax_labels

    assert argmax_labels(np.array([2.0]), np.array([2.0]), np.array([1.0]))[0] == "X"
    assert argmax_labels(np.array([1.0]), np.array([2.0]), np.array([2.0]))[0] == "Y"
    assert argmax_labels(np.array([1.0]), np.array([1.0]), np.array([3.0]))[0] == "Z"


def test_generator_validation():
    with pytest.raises(ValueError):
        toeplitz_leading_minors_batch(np.array([[1.0, 2.0]]), np.array([[3.0, 4.0]]))
    with pytest.raises(ValueError):
        toeplitz_leading_minors_batch(np.empty((1, 0)), np.empty((1, 0)))

import numpy as np
import pytest
from scipy.linalg import eigh

from tfim_coherence.spectrum import (
    QuenchSpec,
    SectorMismatchError,
    build_modes,
    dispersion,
    dispersion_parts,
    dqpt_critical_times,
    max_group_velocity,
    momentum_grid,
    revival_time_prediction,
)


def test_spec_validation():
    QuenchSpec(9, 0.5, 1.5)
    QuenchSpec(8, 0.5, 1.5, "half-integer")
    with pytest.raises(SectorMismatchError):
        QuenchSpec(8, 0.5, 1.5)  # integer sector needs odd n
    with pytest.raises(SectorMismatchError):
        QuenchSpec(9, 0.5, 1.5, "half-integer")
    with pytest.raises(ValueError):
        QuenchSpec(2, 0.5, 1.5)
    with pytest.raises(ValueError):
        QuenchSpec(9, -0.1, 1.5)
    with pytest.raises(ValueError):
        QuenchSpec(9, 0.5, float("nan"))
    with pytest.raises(ValueError):
        QuenchSpec(9, 0.5, 1.5, "bogus")


def test_momentum_grids():
    k, paired = momentum_grid(9, "integer")
    assert np.allclose(k, 2 * np.pi * np.arange(5) / 9)
    assert not paired[0] and paired[1:].all()
    k, paired = momentum_grid(8, "half-integer")
    assert np.allclose(k, np.pi * (2 * np.arange(4) + 1) / 8)
    assert paired.all()
    assert np.all(k > 0) and np.all(k < np.pi)


def test_free_limit_modes():
    # zero coupling: flat spectrum at 2, zero angles
    modes = build_modes(QuenchSpec(9, 0.0, 0.0))
    assert np.allclose(modes.eps1, 2.0)
    assert np.allclose(modes.eps2, 2.0)
    assert np.allclose(modes.theta1, 0.0)
    assert np.allclose(modes.phi, 0.0)


def test_critical_coupling_dispersion():
    # at the critical coupling the dispersion is 4|cos(k/2)|
    k = momentum_grid(201, "integer")[0]
    assert np.allclose(dispersion(1.0, k), 4.0 * np.abs(np.cos(k / 2)), atol=1e-12)


def test_angle_branch_identity():
    for lam in (0.0, 0.3, 1.0, 2.7):
        for n, sector in ((201, "integer"), (64, "half-integer")):
            modes = build_modes(QuenchSpec(n, lam, lam, sector))
            a, b = dispersion_parts(lam, modes.momenta)
            eps = modes.eps1
            c2, s2 = np.cos(2 * modes.theta1), np.sin(2 * modes.theta1)
            assert np.max(np.abs(c2**2 + s2**2 - 1.0)) < 1e-12
            assert np.max(np.abs(c2 * eps + a)) < 1e-10
            assert np.max(np.abs(s2 * eps - b)) < 1e-10


def test_angles_against_pair_block_diagonalization():
    # the per-mode two-level block fixes |cos phi| through state overlaps
    spec = QuenchSpec(201, 1.5, 1.0)
    modes = build_modes(spec)
    for i in np.linspace(1, len(modes.momenta) - 1, 17, dtype=int):
        k = float(modes.momenta[i])
        blocks = []
        for lam in (spec.lambda1, spec.lambda2):
            a, b = dispersion_parts(lam, np.array([k]))
            h = np.array([[a[0], 1j * b[0]], [-1j * b[0], -a[0]]])
            w, v = eigh(h)
            assert abs(w[1] - modes.eps1[i]) < 1e-10 or abs(w[1] - modes.eps2[i]) < 1e-10
            blocks.append(v[:, 0])
        overlap = abs(np.vdot(blocks[0], blocks[1]))
        assert abs(overlap - abs(np.cos(modes.phi[i]))) < 1e-10


def test_no_quench_phi_zero():
    modes = build_modes(QuenchSpec(201, 1.3, 1.3))
    assert np.all(modes.phi == 0.0)


def test_gap_bound():
    for lam in (0.0, 0.4, 1.0, 1.7, 3.0):
        k = np.linspace(0, np.pi, 2001)
        assert np.all(dispersion(lam, k) >= 2 * abs(1 - lam) - 1e-12)


def test_max_group_velocity_values():
    assert max_group_velocity(0.2) == pytest.approx(0.4)
    assert max_group_velocity(1.0) == pytest.approx(2.0)
    assert max_group_velocity(3.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        max_group_velocity(-0.5)


def test_max_group_velocity_brute_force():
    k = np.linspace(0, np.pi, 100_001)
    for lam in (0.2, 0.8, 1.0, 1.9):
        eps = dispersion(lam, k)
        v_num = np.max(np.abs(np.diff(eps) / np.diff(k)))
        assert abs(v_num - max_group_velocity(lam)) < 1e-4


def test_revival_time_prediction():
    assert revival_time_prediction(QuenchSpec(201, 1.5, 1.0)) == pytest.approx(50.25)
    assert revival_time_prediction(QuenchSpec(100, 1.5, 0.5, "half-integer")) == pytest.approx(50.0)
    assert revival_time_prediction(QuenchSpec(201, 1.5, 2.0)) == pytest.approx(50.25)
    assert revival_time_prediction(QuenchSpec(201, 1.5, 0.0)) == float("inf")


def test_dqpt_critical_times_same_phase():
    assert dqpt_critical_times(QuenchSpec(201, 0.5, 0.5)) is None
    assert dqpt_critical_times(QuenchSpec(201, 0.5, 0.7)) is None
    assert dqpt_critical_times(QuenchSpec(201, 2.0, 1.5)) is None
    assert dqpt_critical_times(QuenchSpec(201, 1.0, 1.0)) is None


def test_dqpt_critical_times_values():
    # frozen from the rate-function cusp locations of the companion series
    # (see test_coherence: detected cusps match these within grid spacing)
    ct = dqpt_critical_times(QuenchSpec(201, 0.2, 2.0))
    assert ct.finite
    assert ct.times[0] == pytest.approx(0.5013, abs=2e-3)
    assert np.allclose(np.diff(ct.times), ct.t_star)
    ct = dqpt_critical_times(QuenchSpec(201, 2.0, 0.2))
    assert ct.times[0] == pytest.approx(0.8862, abs=2e-3)
    assert ct.t_star == pytest.approx(1.7724, abs=2e-3)


def test_dqpt_boundary_couplings():
    # quench from the critical coupling: finite cusp schedule
    ct = dqpt_critical_times(QuenchSpec(201, 1.0, 2.0))
    assert ct is not None and ct.finite
    assert ct.k_star == pytest.approx(np.pi)
    # quench into the critical coupling: mode exists, period infinite
    ct = dqpt_critical_times(QuenchSpec(201, 2.0, 1.0))
    assert ct is not None and not ct.finite
    assert ct.times.size == 0


def test_dqpt_existence_scan():
    lams = (0.1, 0.5, 0.9, 1.1, 1.7, 2.5)
    for l1 in lams:
        for l2 in lams:
            result = dqpt_critical_times(QuenchSpec(201, l1, l2))
            same_side_or_equal = (1 - l1) * (1 - l2) > 0 or l1 == l2
            assert (result is None) == same_side_or_equal


def test_dqpt_nmax():
    ct = dqpt_critical_times(QuenchSpec(201, 0.2, 2.0), n_max=7)
    assert ct.times.size == 7
    with pytest.raises(ValueError):
        dqpt_critical_times(QuenchSpec(201, 0.2, 2.0), n_max=0)


def test_degenerate_angle_guard():
    from tfim_coherence.spectrum import bogoliubov_angle

    # at the critical coupling the angle at k = pi is fixed to its limit
    assert bogoliubov_angle(1.0, np.array([np.pi]))[0] == pytest.approx(np.pi / 4)

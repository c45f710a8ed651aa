"""Hamiltonian assembly, collapse channels, and the dressed ladder."""

import numpy as np
import pytest

from phonoblock.errors import ParameterError
from phonoblock.hilbert import hermiticity_defect, lowering, make_space, number
from phonoblock.model import (
    DetectionParams,
    MqParams,
    _drive_terms,
    build_h_mq,
    build_h_total,
    collapse_ops,
    device_preset,
    dressed_spectrum,
    three_mode_space,
    two_mode_space,
    wrap_phase,
)

RNG = np.random.default_rng(20260809)


def test_h_mq_pure_detuning_spectrum():
    space = two_mode_space()
    h = build_h_mq(MqParams(delta=1.0), space)
    # diag of delta (n_b + n_q): every combination of phonon number and
    # qubit excitation appears once
    expected = sorted(n + e for n in range(9) for e in (0, 1))
    assert np.allclose(np.sort(np.linalg.eigvalsh(h.mat)), expected, atol=1e-12)


def test_h_mq_jaynes_cummings_doublets():
    # resonant undriven ladder at the smallest admissible cutoff: manifolds
    # at 0, +/-J, +/-sqrt(2) J, and the truncated top state at 0
    space = make_space([("m", 2), ("q", "qubit")])
    h = build_h_mq(MqParams(delta=0.0, j=1.0), space)
    expected = sorted([0.0, -1.0, 1.0, -np.sqrt(2), np.sqrt(2), 0.0])
    assert np.allclose(np.sort(np.linalg.eigvalsh(h.mat)), expected, atol=1e-12)


def test_h_mq_hermitian_for_random_params():
    space = two_mode_space(4)
    for _ in range(100):
        p = MqParams(
            delta=float(RNG.uniform(-20, 20)),
            j=float(RNG.uniform(0, 15)),
            eps=float(RNG.uniform(0, 2)),
            omega_drv=float(RNG.uniform(0, 2)),
            phi=float(RNG.uniform(-np.pi, np.pi)),
            kappa=float(RNG.uniform(0.1, 5)),
            gamma=float(RNG.uniform(0.1, 5)),
            n_th=float(RNG.uniform(0, 1)),
        )
        assert hermiticity_defect(build_h_mq(p, space).mat) < 1e-12


def test_h_total_decouples_at_zero_readout_coupling():
    cavity_cutoff, mech_cutoff = 3, 4
    space = three_mode_space(cavity_cutoff, mech_cutoff)
    base = MqParams(delta=0.7, j=1.3, eps=0.2, omega_drv=0.4, phi=0.5)
    h = build_h_total(DetectionParams(base=base, g_om=0.0, gamma_cav=10.0), space)
    mq_space = two_mode_space(mech_cutoff)
    h_mq = build_h_mq(base, mq_space)
    eye_cav = np.eye(cavity_cutoff + 1, dtype=complex)
    n_cav = np.diag(np.arange(cavity_cutoff + 1)).astype(complex)
    expected = np.kron(eye_cav, h_mq.mat) + base.delta * np.kron(
        n_cav, np.eye(mq_space.total_dim)
    )
    assert np.allclose(h.mat, expected, atol=1e-14)


def test_h_total_beam_splitter_doublet():
    # cavity-mechanics exchange alone: single-excitation eigenvalues +/-|G|
    space = three_mode_space(2, 2)
    p = DetectionParams(base=MqParams(delta=0.0, j=0.0), g_om=1.0, gamma_cav=1.0)
    evals = np.linalg.eigvalsh(build_h_total(p, space).mat)
    assert np.isclose(evals.min(), -2.0, atol=1e-12)  # two-excitation manifold
    for target in (-1.0, 1.0):
        assert np.any(np.isclose(evals, target, atol=1e-12))


def test_h_total_hermitian_for_complex_coupling():
    space = three_mode_space(2, 3)
    for _ in range(100):
        g = float(RNG.uniform(0, 2)) * np.exp(1j * float(RNG.uniform(-np.pi, np.pi)))
        p = DetectionParams(
            base=MqParams(
                delta=float(RNG.uniform(-5, 5)),
                j=float(RNG.uniform(0, 5)),
                eps=float(RNG.uniform(0, 1)),
                omega_drv=float(RNG.uniform(0, 1)),
                phi=float(RNG.uniform(-np.pi, np.pi)),
            ),
            g_om=g,
            gamma_cav=float(RNG.uniform(0.5, 20)),
        )
        assert hermiticity_defect(build_h_total(p, space).mat) < 1e-12


def test_collapse_ops_zero_temperature():
    space = two_mode_space(4)
    p = MqParams(kappa=1.0, gamma=1.0, n_th=0.0)
    channels = collapse_ops(p, space)
    assert len(channels) == 2
    assert channels[0][0] == pytest.approx(p.gamma)
    assert channels[1][0] == pytest.approx(p.kappa)


def test_collapse_ops_thermal_rates():
    space = two_mode_space(4)
    channels = collapse_ops(MqParams(kappa=1.0, gamma=1.0, n_th=0.5), space)
    assert [rate for rate, _ in channels] == pytest.approx([1.5, 0.5, 1.5, 0.5])


def test_collapse_ops_three_mode_cavity_channel():
    space = three_mode_space(2, 3)
    p = DetectionParams(base=MqParams(n_th=0.0), g_om=0.1, gamma_cav=7.0)
    channels = collapse_ops(p, space)
    assert len(channels) == 3
    rate, op = channels[-1]
    assert rate == pytest.approx(7.0)
    assert np.array_equal(op.mat, lowering(space, "a").mat)


def test_collapse_rates_nonnegative():
    space = two_mode_space(3)
    for _ in range(50):
        p = MqParams(
            kappa=float(RNG.uniform(0.01, 10)),
            gamma=float(RNG.uniform(0.01, 10)),
            n_th=float(RNG.uniform(0, 3)),
        )
        assert all(rate >= 0 for rate, _ in collapse_ops(p, space))


def test_dressed_spectrum_closed_form():
    rungs = dressed_spectrum(10.0, 10.0, 2)
    assert rungs[0] == (1, pytest.approx(20.0), pytest.approx(0.0))
    n, e_plus, e_minus = rungs[1]
    assert (n, e_plus, e_minus) == (
        2,
        pytest.approx(20 + 10 * np.sqrt(2)),
        pytest.approx(20 - 10 * np.sqrt(2)),
    )
    with pytest.raises(ParameterError):
        dressed_spectrum(1.0, 0.0, 0)


def test_dressed_spectrum_matches_dense_diagonalization():
    j, delta = 3.0, 1.5
    space = two_mode_space(7)
    evals = np.linalg.eigvalsh(build_h_mq(MqParams(delta=delta, j=j), space).mat)
    for n, e_plus, e_minus in dressed_spectrum(j, delta, 4):
        for target in (e_plus, e_minus):
            assert np.min(np.abs(evals - target)) < 1e-10, (n, target)


def test_drive_sign_phase_invariance():
    # (omega, phi) -> (-omega, phi + pi) leaves the drive operator unchanged
    space = two_mode_space(4)
    b = lowering(space, "m")
    sm = lowering(space, "q")
    for _ in range(20):
        eps = float(RNG.uniform(0, 1))
        omega = float(RNG.uniform(0, 1))
        phi = float(RNG.uniform(-np.pi, np.pi))
        direct = _drive_terms(eps, omega, phi, b, sm).mat
        flipped = _drive_terms(eps, -omega, phi + np.pi, b, sm).mat
        assert np.allclose(direct, flipped, atol=1e-14)


def test_total_excitation_conserved_without_drives():
    space = two_mode_space(5)
    h = build_h_mq(MqParams(delta=2.0, j=3.0), space)
    n_tot = (number(space, "m") + number(space, "q")).mat
    assert np.max(np.abs(h.mat @ n_tot - n_tot @ h.mat)) < 1e-12

    space3 = three_mode_space(3, 4)
    h3 = build_h_total(
        DetectionParams(base=MqParams(delta=2.0, j=3.0), g_om=0.3 + 0.4j), space3
    )
    n_tot3 = (
        number(space3, "a") + number(space3, "m") + number(space3, "q")
    ).mat
    assert np.max(np.abs(h3.mat @ n_tot3 - n_tot3 @ h3.mat)) < 1e-12


def test_params_validation():
    with pytest.raises(ParameterError):
        MqParams(j=-0.1)
    with pytest.raises(ParameterError):
        MqParams(kappa=0.0)
    with pytest.raises(ParameterError):
        MqParams(gamma=-1.0)
    with pytest.raises(ParameterError):
        MqParams(n_th=-1e-9)
    with pytest.raises(ParameterError):
        MqParams(delta=float("inf"))
    with pytest.raises(ParameterError):
        DetectionParams(gamma_cav=0.0)


def test_phase_wrapping():
    assert MqParams(phi=3 * np.pi).phi == pytest.approx(np.pi)
    assert MqParams(phi=-np.pi).phi == pytest.approx(np.pi)
    assert wrap_phase(np.pi) == pytest.approx(np.pi)
    assert -np.pi < MqParams(phi=-1.5 * np.pi).phi <= np.pi


def test_space_factor_requirements():
    with pytest.raises(ParameterError):
        build_h_mq(MqParams(), make_space([("m", 3)]))
    with pytest.raises(ParameterError):
        build_h_total(DetectionParams(), two_mode_space(3))


def test_device_preset_matches_reported_numbers():
    lab, mq = device_preset()
    assert lab.temperature == pytest.approx(0.025)
    assert mq.j == pytest.approx(124 / 9, rel=1e-12)
    assert mq.gamma == pytest.approx(26 / 9, rel=1e-12)
    assert 0.9e-5 < mq.n_th < 1.1e-5

"""Grid engine: ordering, determinism, failure markers, and presets."""

import math
from dataclasses import replace

import numpy as np
import pytest

from phonoblock.analytics import optimal_drive_roots
from phonoblock.errors import ParameterError, SweepError
from phonoblock.model import DetectionParams, MqParams
from phonoblock.sweep import (
    SweepSpec,
    figure_panels,
    figure_preset,
    preset_names,
    run_sweep,
)

WEAK = MqParams(eps=0.01)


def test_grid_rows_in_row_major_order():
    spec = SweepSpec(
        axes=(("delta", (0.0, 1.0, 2.0)), ("j", (5.0, 6.0, 7.0))),
        fixed=WEAK,
    )
    result = run_sweep(spec, max_workers=2)
    assert result.n_rows == 9
    assert list(result.columns["delta"]) == [0, 0, 0, 1, 1, 1, 2, 2, 2]
    assert list(result.columns["j"]) == [5, 6, 7, 5, 6, 7, 5, 6, 7]
    assert result.column_order[-1] == "converged"


def test_single_point_reproduces_blockade_value():
    spec = SweepSpec(
        axes=(("delta", (0.0,)),),
        fixed=replace(WEAK, j=1 / math.sqrt(2)),
    )
    result = run_sweep(spec)
    g2 = result.columns["g2_zero"][0]
    assert 0.0015 <= g2 <= 0.006
    assert bool(result.columns["converged"][0])


def test_strong_coupling_minima_at_plus_minus_j():
    spec = SweepSpec(
        axes=(("delta", tuple(np.linspace(-15, 15, 31)),),),
        fixed=replace(WEAK, j=10.0),
    )
    result = run_sweep(spec)
    g2 = result.columns["g2_zero"]
    delta = result.columns["delta"]
    step = delta[1] - delta[0]
    neg = delta < 0
    assert abs(delta[neg][np.argmin(g2[neg])] + 10.0) <= step
    pos = delta > 0
    assert abs(delta[pos][np.argmin(g2[pos])] - 10.0) <= step


def test_identical_specs_give_identical_columns():
    spec = SweepSpec(
        axes=(("delta", (0.0, 0.5)), ("j", (0.5, 1.0))),
        fixed=WEAK,
        outputs=("g2_zero", "n_b"),
    )
    a = run_sweep(spec, max_workers=1)
    b = run_sweep(spec, max_workers=4)
    for name in a.column_order:
        assert np.array_equal(a.columns[name], b.columns[name]), name


def test_failed_point_marked_not_fatal():
    spec = SweepSpec(
        axes=(("gamma", (0.0, 1.0)),),
        fixed=replace(WEAK, j=1.0),
    )
    result = run_sweep(spec)
    assert math.isnan(result.columns["g2_zero"][0])
    assert not result.columns["converged"][0]
    assert math.isfinite(result.columns["g2_zero"][1])
    assert len(result.metadata["failures"]) == 1
    assert result.metadata["failures"][0][0] == 0


def test_all_points_failed_raises():
    spec = SweepSpec(axes=(("gamma", (0.0, -1.0)),), fixed=WEAK)
    with pytest.raises(SweepError):
        run_sweep(spec)


def test_spec_validation():
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("bogus", (1.0,)),), fixed=WEAK)
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("delta", ()),), fixed=WEAK)
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("delta", (1.0,)),), fixed=WEAK, outputs=("nope",))
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("delta", (1.0,)),), fixed=WEAK, outputs=("g2a_zero",))
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("delta", (1.0,)),), fixed=WEAK, outputs=("g2_tau",))
    with pytest.raises(ParameterError):
        SweepSpec(
            axes=(("delta", (1.0,)), ("j", (1.0,)), ("eps", (1.0,))), fixed=WEAK
        )
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("delta", (1.0,)), ("delta", (2.0,))), fixed=WEAK)
    with pytest.raises(ParameterError):
        SweepSpec(
            axes=(("delta_opt", (1.0,)),), fixed=WEAK, delta_opt=2.0
        )
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("g_om", (0.1,)),), fixed=WEAK)
    with pytest.raises(ParameterError):
        SweepSpec(axes=(("delta", (1.0,)),), fixed=WEAK, root_branch="x")


def test_derived_drive_axis_matches_direct_settings():
    spec = SweepSpec(
        axes=(("delta_opt", (3.0,)), ("delta", (3.0,))),
        fixed=replace(WEAK, j=3.0, eps=0.2),
        root_branch="+",
    )
    result = run_sweep(spec)
    g2 = result.columns["g2_zero"][0]
    assert 0.007 <= g2 <= 0.028  # deep two-drive blockade


def test_eta_phi_roots_output_columns():
    spec = SweepSpec(
        axes=(("delta", (-2.0, 1.0)),),
        fixed=MqParams(j=3.0),
        outputs=("eta_phi_roots",),
    )
    result = run_sweep(spec)
    roots = optimal_drive_roots(-2.0, 3.0, 1.0, 1.0)
    assert result.columns["eta_plus"][0] == pytest.approx(roots.eta_plus)
    assert result.columns["phi_minus"][0] == pytest.approx(roots.phi_minus)
    assert all(result.columns["converged"])


def test_g2_tau_output_columns():
    tau_grid = (0.0, 1.0, 2.0)
    spec = SweepSpec(
        axes=(("delta", (0.0,)),),
        fixed=replace(WEAK, j=1 / math.sqrt(2)),
        outputs=("g2_zero", "g2_tau"),
        tau_grid=tau_grid,
    )
    result = run_sweep(spec)
    assert result.columns["g2_tau_000"][0] == pytest.approx(
        result.columns["g2_zero"][0], abs=1e-8
    )
    assert {"g2_tau_000", "g2_tau_001", "g2_tau_002"} <= set(result.column_order)


def test_convergence_flag_detects_undertrunction():
    # strong drive on a decoupled mode at a tiny cutoff: raising the cutoff
    # moves the correlation, so the row must be flagged unconverged
    spec = SweepSpec(
        axes=(("eps", (0.5,)),),
        fixed=MqParams(j=0.0, eps=0.5),
        mech_cutoff=2,
    )
    result = run_sweep(spec)
    assert not result.columns["converged"][0]


def test_metadata_contents():
    spec = SweepSpec(axes=(("delta", (0.0, 1.0)),), fixed=replace(WEAK, j=1.0))
    result = run_sweep(spec)
    meta = result.metadata
    assert meta["rows"] == 2
    assert meta["model"] == "two_mode"
    assert meta["mech_cutoff"] == 8
    assert meta["axes"][0]["name"] == "delta"
    assert meta["max_steady_residual"] >= 0.0
    assert meta["fixed_params"]["j"] == 1.0


def test_three_mode_sweep_point():
    base = MqParams(delta=3.0, j=3.0, eps=0.2, n_th=1e-3)
    spec = SweepSpec(
        axes=(("delta", (3.0,)),),
        fixed=DetectionParams(base=base, g_om=0.1, gamma_cav=10.0),
        outputs=("g2_zero", "g2a_zero", "n_b"),
        delta_opt=3.0,
        mech_cutoff=4,
        cavity_cutoff=2,
    )
    result = run_sweep(spec)
    assert math.isfinite(result.columns["g2a_zero"][0])
    assert result.metadata["model"] == "three_mode"
    assert result.metadata["cavity_cutoff"] == 2


def test_presets_all_constructible_and_figure_mapping():
    names = preset_names()
    assert "fig2" in names and "fig3b" in names and "fig11b" in names
    spec = figure_preset("fig3")
    assert spec is figure_preset("fig3b")
    panels = figure_panels("fig3")
    assert set(panels) == {"fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f"}
    with pytest.raises(ParameterError):
        figure_preset("fig99")
    with pytest.raises(ParameterError):
        figure_panels("nope")


def test_fig7_preset_shape():
    spec = figure_preset("fig7")
    assert spec.outputs == ("eta_phi_roots",)
    assert spec.axes[0][0] == "delta"
    assert spec.fixed.j == 3.0


def test_fig2_preset_symmetric_in_detuning():
    # thinned copy of the landscape preset: the zero-qubit-drive correlation
    # is even in the detuning
    spec = replace(
        figure_preset("fig2"),
        axes=(("delta", (-3.0, -1.0, 1.0, 3.0)), ("j", (0.71, 5.0))),
    )
    result = run_sweep(spec)
    g2 = result.columns["g2_zero"].reshape(4, 2)
    assert np.allclose(g2[0], g2[3], atol=1e-6)
    assert np.allclose(g2[1], g2[2], atol=1e-6)


def test_fig11_preset_parameters():
    spec = figure_preset("fig11b")
    assert isinstance(spec.fixed, DetectionParams)
    assert spec.fixed.g_om == pytest.approx(0.1)
    assert spec.fixed.gamma_cav == pytest.approx(10.0)
    assert spec.fixed.base.n_th == pytest.approx(1e-3)
    assert spec.fixed.base.eps == pytest.approx(0.2)
    assert spec.fixed.base.j == pytest.approx(3.0)
    assert spec.delta_opt == pytest.approx(3.0)
    assert set(spec.outputs) == {"g2a_zero", "g2_zero"}

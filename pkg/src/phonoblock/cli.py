"""Command-line interface: config ingestion, subcommands, CSV and plot output.

Subcommands map onto the library: ``steady`` (steady-state summary),
``g2tau`` (delayed-correlation series), ``sweep`` (grid job from a config
file), ``figure`` (named presets), ``optimal`` (closed-form optima),
``thermal`` (Bose-Einstein helper, SI units), and ``detect`` (three-mode
photon-phonon comparison). All physical inputs are in units of kappa except
``thermal``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.

Config files are INI-style text with sections ``[model]``, ``[task]`` and
``[output]`` and a strict key schema; unknown keys are rejected by name.
Every run echoes its fully resolved configuration into the ``.meta.json``
sidecar, and rerunning from that echo reproduces the output exactly.

CSV schema: one header line of column names, one row per grid point, decimal
text with 13 significant digits, complex quantities split into ``_re`` and
``_im`` columns, and the sentinel ``NA`` for failed points.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .analytics import (
    no_qubit_drive_optimum,
    optimal_drive_roots,
    thermal_occupation,
    two_drive_settings,
)
from .correlations import g2_tau, g2_zero, mean_occupation
from .errors import ConfigError, NumericalError, PhonoblockError, SweepError
from .hilbert import expectation, lowering
from .model import (
    DEFAULT_CAVITY_CUTOFF,
    DEFAULT_MECH_CUTOFF,
    DEFAULT_MECH_CUTOFF_THREE_MODE,
    DetectionParams,
    MqParams,
    build_h_mq,
    build_h_total,
    collapse_ops,
    three_mode_space,
    two_mode_space,
)
from .solver import build_liouvillian, steady_state
from .sweep import SweepResult, SweepSpec, figure_names, figure_panels, run_sweep

log = logging.getLogger("phonoblock")

OUTDIR_ENV_VAR = "PHONOBLOCK_OUTDIR"
DEFAULT_OUTDIR = "phonoblock_out"

_MODEL_KEYS = (
    "delta", "j", "eps", "omega_drv", "phi", "kappa", "gamma", "n_th",
    "g_om_re", "g_om_im", "gamma_cav",
)
_TASK_KEYS = (
    "axis1", "axis1_values", "axis1_range",
    "axis2", "axis2_values", "axis2_range",
    "outputs", "tau_max", "tau_points",
    "mech_cutoff", "cavity_cutoff", "delta_opt", "root_branch",
)
_OUTPUT_KEYS = ("dir", "plot_script")


@dataclass
class RunConfig:
    """Validated configuration: model parameters, task options, output options.

    ``echo`` carries the fully resolved key-value map (defaults applied) that
    reproduces this configuration verbatim.
    """

    model: MqParams | DetectionParams
    task: dict
    output: dict
    echo: dict


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from exc


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from exc


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a config file against the strict schema.

    Raises
    ------
    ConfigError
        On syntax errors (with line numbers), unknown sections or keys, or
        values that fail validation.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep key case so error messages match input
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    for section in parser.sections():
        if section not in ("model", "task", "output"):
            raise ConfigError(f"unknown config section [{section}]")

    model_raw = dict(parser.items("model")) if parser.has_section("model") else {}
    task_raw = dict(parser.items("task")) if parser.has_section("task") else {}
    output_raw = dict(parser.items("output")) if parser.has_section("output") else {}
    for key in model_raw:
        if key not in _MODEL_KEYS:
            raise ConfigError(f"unknown key {key!r} in [model]")
    for key in task_raw:
        if key not in _TASK_KEYS:
            raise ConfigError(f"unknown key {key!r} in [task]")
    for key in output_raw:
        if key not in _OUTPUT_KEYS:
            raise ConfigError(f"unknown key {key!r} in [output]")

    mq_kwargs = {}
    for key in ("delta", "j", "eps", "omega_drv", "phi", "kappa", "gamma", "n_th"):
        if key in model_raw:
            mq_kwargs[key] = _parse_float("model", key, model_raw[key])
    base = MqParams(**mq_kwargs)
    three_mode = any(k in model_raw for k in ("g_om_re", "g_om_im", "gamma_cav"))
    if three_mode:
        g_re = _parse_float("model", "g_om_re", model_raw.get("g_om_re", "0.1"))
        g_im = _parse_float("model", "g_om_im", model_raw.get("g_om_im", "0"))
        gamma_cav = _parse_float("model", "gamma_cav", model_raw.get("gamma_cav", "10"))
        model: MqParams | DetectionParams = DetectionParams(
            base=base, g_om=complex(g_re, g_im), gamma_cav=gamma_cav
        )
    else:
        model = base

    task: dict = {}
    for i in (1, 2):
        name = task_raw.get(f"axis{i}")
        if name is None:
            continue
        values_raw = task_raw.get(f"axis{i}_values")
        range_raw = task_raw.get(f"axis{i}_range")
        if (values_raw is None) == (range_raw is None):
            raise ConfigError(
                f"axis{i} needs exactly one of axis{i}_values or axis{i}_range"
            )
        if values_raw is not None:
            values = tuple(
                _parse_float("task", f"axis{i}_values", v) for v in values_raw.split(",")
            )
        else:
            parts = range_raw.split(":")
            if len(parts) != 3:
                raise ConfigError(f"axis{i}_range must be 'lo:hi:n', got {range_raw!r}")
            lo = _parse_float("task", f"axis{i}_range", parts[0])
            hi = _parse_float("task", f"axis{i}_range", parts[1])
            n = _parse_int("task", f"axis{i}_range", parts[2])
            if n < 1:
                raise ConfigError(f"axis{i}_range point count must be >= 1")
            values = tuple(np.linspace(lo, hi, n))
        task[f"axis{i}"] = (name.strip(), values)
    if "outputs" in task_raw:
        task["outputs"] = tuple(s.strip() for s in task_raw["outputs"].split(","))
    if "tau_max" in task_raw:
        task["tau_max"] = _parse_float("task", "tau_max", task_raw["tau_max"])
    if "tau_points" in task_raw:
        task["tau_points"] = _parse_int("task", "tau_points", task_raw["tau_points"])
    if "mech_cutoff" in task_raw:
        task["mech_cutoff"] = _parse_int("task", "mech_cutoff", task_raw["mech_cutoff"])
    if "cavity_cutoff" in task_raw:
        task["cavity_cutoff"] = _parse_int(
            "task", "cavity_cutoff", task_raw["cavity_cutoff"]
        )
    if "delta_opt" in task_raw:
        task["delta_opt"] = _parse_float("task", "delta_opt", task_raw["delta_opt"])
    if "root_branch" in task_raw:
        branch = task_raw["root_branch"].strip()
        if branch not in ("+", "-"):
            raise ConfigError(f"root_branch must be '+' or '-', got {branch!r}")
        task["root_branch"] = branch

    output = {
        "dir": output_raw.get("dir", DEFAULT_OUTDIR),
        "plot_script": output_raw.get("plot_script", "true").strip().lower()
        in ("1", "true", "yes", "on"),
    }
    echo = _build_echo(model, task_raw, output)
    return RunConfig(model=model, task=task, output=output, echo=echo)


def _build_echo(
    model: MqParams | DetectionParams, task_raw: dict, output: dict
) -> dict:
    base = model.base if isinstance(model, DetectionParams) else model
    model_echo = {
        key: repr(getattr(base, key))
        for key in ("delta", "j", "eps", "omega_drv", "phi", "kappa", "gamma", "n_th")
    }
    if isinstance(model, DetectionParams):
        model_echo["g_om_re"] = repr(model.g_om.real)
        model_echo["g_om_im"] = repr(model.g_om.imag)
        model_echo["gamma_cav"] = repr(model.gamma_cav)
    return {
        "model": model_echo,
        "task": dict(task_raw),
        "output": {
            "dir": str(output["dir"]),
            "plot_script": "true" if output["plot_script"] else "false",
        },
    }


def render_config(echo: dict) -> str:
    """Config-file text reproducing an echoed configuration."""
    lines = []
    for section in ("model", "task", "output"):
        entries = echo.get(section) or {}
        if not entries:
            continue
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {value}" for key, value in entries.items())
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CSV / metadata / plot-script emission
# ---------------------------------------------------------------------------


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    v = float(value)
    if math.isnan(v):
        return "NA"
    return f"{v:.12e}"


def write_csv(result: SweepResult, path: str | Path) -> Path:
    """Write a sweep table using the package CSV schema."""
    path = Path(path)
    names: list[str] = []
    columns: list[np.ndarray] = []
    for name in result.column_order:
        col = result.columns[name]
        if np.iscomplexobj(col):
            names += [f"{name}_re", f"{name}_im"]
            columns += [col.real, col.imag]
        else:
            names.append(name)
            columns.append(col)
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(result.n_rows):
            fh.write(",".join(_format_cell(col[i]) for col in columns) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_metadata(metadata: dict, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(metadata, fh, indent=2, default=_json_default)
        fh.write("\n")
    return path


def write_plot_script(result: SweepResult, csv_name: str, path: str | Path) -> Path:
    """Plain-text gnuplot script for the CSV emitted next to it."""
    path = Path(path)
    order = result.column_order
    axes = [a["name"] for a in result.metadata["axes"]]
    data_cols = [
        (i + 1, name)
        for i, name in enumerate(order)
        if name not in axes and name != "converged" and not name.startswith("g2_tau_")
    ]
    lines = [
        f"# gnuplot script for {csv_name}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set datafile missing 'NA'",
    ]
    if len(axes) == 1:
        lines.append(f"set xlabel '{axes[0]}'")
        plots = [f"'{csv_name}' using 1:{idx} with lines" for idx, _ in data_cols]
        if plots:
            lines.append("plot " + ", \\\n     ".join(plots))
    else:
        lines += [
            f"set xlabel '{axes[0]}'",
            f"set ylabel '{axes[1]}'",
            "set pm3d map",
        ]
        if data_cols:
            idx = data_cols[0][0]
            lines.append(f"splot '{csv_name}' using 1:2:{idx}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_tau_csv(result: SweepResult, path: str | Path) -> Path | None:
    """Long-format companion for delayed-correlation sweeps: one tau column,
    one series column per grid row."""
    tau_grid = result.metadata.get("tau_grid")
    if not tau_grid:
        return None
    path = Path(path)
    axes = [a["name"] for a in result.metadata["axes"]]
    n_tau = len(tau_grid)
    series_names = []
    series = []
    for i in range(result.n_rows):
        label_parts = [f"{ax}_{result.columns[ax][i]:g}" for ax in axes]
        series_names.append("g2__" + "__".join(label_parts))
        series.append(
            [result.columns[f"g2_tau_{k:03d}"][i] for k in range(n_tau)]
        )
    with open(path, "w") as fh:
        fh.write(",".join(["tau"] + series_names) + "\n")
        for k in range(n_tau):
            cells = [_format_cell(tau_grid[k])] + [
                _format_cell(col[k]) for col in series
            ]
            fh.write(",".join(cells) + "\n")
    return path


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse variant that raises instead of exiting, so the CLI can map
    argument problems to exit code 1."""

    def error(self, message):
        raise ConfigError(message)


def _add_model_args(parser: argparse.ArgumentParser, detection: bool = False) -> None:
    group = parser.add_argument_group("model (units of kappa)")
    for name, help_text in (
        ("delta", "detuning from the shared drive frequency"),
        ("j", "resonator-qubit coupling"),
        ("eps", "mechanical drive amplitude"),
        ("omega-drv", "qubit drive amplitude"),
        ("phi", "qubit drive phase (rad)"),
        ("kappa", "qubit damping rate"),
        ("gamma", "resonator damping rate"),
        ("n-th", "thermal bath occupation"),
    ):
        group.add_argument(f"--{name}", type=float, default=None, help=help_text)
    group.add_argument(
        "--delta-opt",
        type=float,
        default=None,
        help="derive the qubit drive from the interference optimum at this detuning",
    )
    group.add_argument(
        "--branch", choices=["+", "-"], default="+", help="optimum root branch"
    )
    group.add_argument("--mech-cutoff", type=int, default=None, help="phonon truncation")
    if detection:
        group.add_argument("--g-om", type=float, default=None, help="readout coupling |G|")
        group.add_argument(
            "--gamma-cav", type=float, default=None, help="cavity damping rate"
        )
        group.add_argument(
            "--cavity-cutoff", type=int, default=None, help="photon truncation"
        )
    parser.add_argument("--config", default=None, help="config file supplying [model]")


def _merge_model(args, detection: bool = False):
    """Defaults < config file < explicit flags."""
    config = load_config(args.config) if args.config else None
    if config is not None:
        base = config.model.base if isinstance(config.model, DetectionParams) else config.model
    else:
        base = MqParams()
    updates = {}
    for field_name, arg_name in (
        ("delta", "delta"), ("j", "j"), ("eps", "eps"), ("omega_drv", "omega_drv"),
        ("phi", "phi"), ("kappa", "kappa"), ("gamma", "gamma"), ("n_th", "n_th"),
    ):
        value = getattr(args, arg_name)
        if value is not None:
            updates[field_name] = value
    base = replace(base, **updates)
    if args.delta_opt is not None:
        omega, phi = two_drive_settings(
            args.delta_opt, base.j, base.kappa, base.gamma, base.eps, args.branch
        )
        base = replace(base, omega_drv=omega, phi=phi)
    if not detection:
        return base, config
    if config is not None and isinstance(config.model, DetectionParams):
        det = replace(config.model, base=base)
    else:
        det = DetectionParams(base=base)
    det_updates = {}
    if args.g_om is not None:
        det_updates["g_om"] = complex(args.g_om)
    if args.gamma_cav is not None:
        det_updates["gamma_cav"] = args.gamma_cav
    return replace(det, **det_updates), config


def _resolve_outdir(args, config: RunConfig | None) -> Path:
    if args.outdir is not None:
        outdir = args.outdir
    elif OUTDIR_ENV_VAR in os.environ:
        outdir = os.environ[OUTDIR_ENV_VAR]
    elif config is not None:
        outdir = config.output["dir"]
    else:
        outdir = DEFAULT_OUTDIR
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _run_metadata(params, extra: dict | None = None) -> dict:
    echo = _build_echo(params, {}, {"dir": DEFAULT_OUTDIR, "plot_script": True})
    meta = {"version": __version__, "config_echo": echo}
    meta.update(extra or {})
    return meta


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_steady(args) -> int:
    params, _ = _merge_model(args)
    space = two_mode_space(args.mech_cutoff or DEFAULT_MECH_CUTOFF)
    liou = build_liouvillian(build_h_mq(params, space), collapse_ops(params, space))
    rho = steady_state(liou)
    b = lowering(space, "m")
    sm = lowering(space, "q")
    print(f"n_b = {mean_occupation(rho, b):.6g}")
    print(f"g2_0 = {g2_zero(rho, b):.6g}")
    print(f"qubit_excitation = {expectation(rho, sm.dag() @ sm).real:.6g}")
    return 0


def _cmd_g2tau(args) -> int:
    params, config = _merge_model(args)
    outdir = _resolve_outdir(args, config)
    space = two_mode_space(args.mech_cutoff or DEFAULT_MECH_CUTOFF)
    liou = build_liouvillian(build_h_mq(params, space), collapse_ops(params, space))
    rho = steady_state(liou)
    b = lowering(space, "m")
    tau_grid = np.linspace(0.0, args.tau_max, args.tau_points)
    series = g2_tau(liou, rho, b, tau_grid)
    path = outdir / "g2tau.csv"
    with open(path, "w") as fh:
        fh.write("tau,g2\n")
        for tau, value in series:
            fh.write(f"{_format_cell(tau)},{_format_cell(value)}\n")
    write_metadata(_run_metadata(params, {"tau_max": args.tau_max,
                                          "tau_points": args.tau_points}),
                   outdir / "g2tau.meta.json")
    print(f"g2_0 = {series[0][1]:.6g}")
    print(f"wrote {path}")
    return 0


def _spec_from_config(config: RunConfig) -> SweepSpec:
    task = config.task
    if "axis1" not in task:
        raise ConfigError("[task] axis1 is required for a sweep")
    axes = [task["axis1"]]
    if "axis2" in task:
        axes.append(task["axis2"])
    outputs = task.get("outputs", ("g2_zero",))
    tau_grid = None
    if "g2_tau" in outputs:
        tau_max = task.get("tau_max", 3.0 * 2.0 * math.pi)
        tau_points = task.get("tau_points", 121)
        tau_grid = tuple(np.linspace(0.0, tau_max, tau_points))
    return SweepSpec(
        axes=tuple(axes),
        fixed=config.model,
        outputs=tuple(outputs),
        tau_grid=tau_grid,
        mech_cutoff=task.get("mech_cutoff"),
        cavity_cutoff=task.get("cavity_cutoff"),
        delta_opt=task.get("delta_opt"),
        root_branch=task.get("root_branch", "+"),
    )


def _emit_sweep(result: SweepResult, outdir: Path, stem: str, plot_script: bool,
                echo: dict | None = None) -> None:
    csv_path = write_csv(result, outdir / f"{stem}.csv")
    metadata = dict(result.metadata)
    metadata["version"] = __version__
    if echo is not None:
        metadata["config_echo"] = echo
    write_metadata(metadata, outdir / f"{stem}.meta.json")
    if result.metadata.get("tau_grid"):
        write_tau_csv(result, outdir / f"{stem}_tau.csv")
    if plot_script:
        write_plot_script(result, csv_path.name, outdir / f"{stem}.gp")
    failures = result.metadata["failures"]
    log.info("%s: %d rows, %d failed, %.2fs", stem, result.n_rows, len(failures),
             result.metadata["wall_time_s"])
    print(f"wrote {csv_path} ({result.n_rows} rows, {len(failures)} failed)")


def _cmd_sweep(args) -> int:
    if not args.config:
        raise ConfigError("sweep requires --config")
    config = load_config(args.config)
    spec = _spec_from_config(config)
    outdir = _resolve_outdir(args, config)
    result = run_sweep(spec, max_workers=args.workers)
    _emit_sweep(result, outdir, "sweep", config.output["plot_script"], config.echo)
    return 0


def _cmd_figure(args) -> int:
    panels = figure_panels(args.name)
    outdir = _resolve_outdir(args, None)
    for name, spec in panels.items():
        log.info("running preset %s (%d points)", name, spec.n_points)
        result = run_sweep(spec, max_workers=args.workers)
        _emit_sweep(result, outdir, name, not args.no_plot_script)
    return 0


def _cmd_optimal(args) -> int:
    kappa = args.kappa if args.kappa is not None else 1.0
    gamma = args.gamma if args.gamma is not None else 1.0
    delta0, j0 = no_qubit_drive_optimum(kappa, gamma)
    print(f"Delta_opt = {delta0:.6g}")
    print(f"J_opt = {j0:.6g}")
    if args.delta_opt is not None:
        j_opt = args.j_opt if args.j_opt is not None else 3.0 * kappa
        roots = optimal_drive_roots(args.delta_opt, j_opt, kappa, gamma)
        print(f"two-drive roots at delta_opt = {args.delta_opt:.6g}, j_opt = {j_opt:.6g}:")
        print(f"eta_plus = {roots.eta_plus:.6g}")
        print(f"phi_plus = {roots.phi_plus:.6g}")
        print(f"eta_minus = {roots.eta_minus:.6g}")
        print(f"phi_minus = {roots.phi_minus:.6g}")
    return 0


def _cmd_thermal(args) -> int:
    n = thermal_occupation(args.freq, args.temp)
    print(f"n_th = {n:.6e}")
    return 0


def _cmd_detect(args) -> int:
    params, _ = _merge_model(args, detection=True)
    mech_cutoff = args.mech_cutoff or DEFAULT_MECH_CUTOFF_THREE_MODE
    cavity_cutoff = args.cavity_cutoff or DEFAULT_CAVITY_CUTOFF
    space = three_mode_space(cavity_cutoff, mech_cutoff)
    liou = build_liouvillian(build_h_total(params, space), collapse_ops(params, space))
    rho = steady_state(liou)
    a = lowering(space, "a")
    b = lowering(space, "m")
    g2_b = g2_zero(rho, b)
    g2_a = g2_zero(rho, a)
    # two-mode reference without the readout cavity
    mq_space = two_mode_space(mech_cutoff + 2)
    mq_liou = build_liouvillian(
        build_h_mq(params.base, mq_space), collapse_ops(params.base, mq_space)
    )
    g2_b_mq = g2_zero(steady_state(mq_liou), lowering(mq_space, "m"))
    print(f"g2_b = {g2_b:.6g}")
    print(f"g2_a = {g2_a:.6g}")
    print(f"relative_difference = {abs(g2_a - g2_b) / g2_b:.6g}")
    print(f"g2_b_two_mode = {g2_b_mq:.6g}")
    print(f"n_b = {mean_occupation(rho, b):.6g}")
    print(f"n_a = {mean_occupation(rho, a):.6g}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="phonoblock",
        description="Phonon-blockade steady states, correlations, optima, "
        "and readout for a resonator-qubit system.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress to stderr (-vv for debug)")
    parser.add_argument("--outdir", default=None,
                        help=f"output directory (env {OUTDIR_ENV_VAR} overrides config)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="steady-state summary (n_b, g2, qubit excitation)")
    _add_model_args(p)
    p.set_defaults(func=_cmd_steady)

    p = sub.add_parser("g2tau", help="delayed correlation series to CSV")
    _add_model_args(p)
    p.add_argument("--tau-max", type=float, default=3.0 * 2.0 * math.pi)
    p.add_argument("--tau-points", type=int, default=121)
    p.set_defaults(func=_cmd_g2tau)

    p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p.add_argument("--config", required=False, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="run a named figure preset")
    p.add_argument("name", help=f"figure ({', '.join(figure_names())}) or panel name")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-plot-script", action="store_true")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("optimal", help="closed-form blockade optima")
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--delta-opt", type=float, default=None)
    p.add_argument("--j-opt", type=float, default=None)
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser("thermal", help="Bose-Einstein occupation (SI units)")
    p.add_argument("--freq", type=float, required=True, help="frequency in Hz")
    p.add_argument("--temp", type=float, required=True, help="temperature in K")
    p.set_defaults(func=_cmd_thermal)

    p = sub.add_parser("detect", help="three-mode photon vs phonon statistics")
    _add_model_args(p, detection=True)
    p.set_defaults(func=_cmd_detect)
    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        level = logging.WARNING
        if args.verbose == 1:
            level = logging.INFO
        elif args.verbose >= 2:
            level = logging.DEBUG
        logging.basicConfig(stream=sys.stderr, level=level,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, SweepError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except PhonoblockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())

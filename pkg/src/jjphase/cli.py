"""Command-line front end: simulate, mms and sweep run modes.

Configuration comes from an INI file (sections [params], [solver],
[output], [mms], [sweep], [physical]) with command-line flags taking
precedence over file values. Outputs are CSV snapshot files plus a JSON
manifest per run; everything is written deterministically (17 significant
digits, sorted JSON keys, no timestamps) so identical runs produce
byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 solver runtime failure.
"""

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .errors import ConfigError, StepFailureError
from .mms import DEFAULT_MESH_SIZES, DEFAULT_TAU_PER_H, convergence_study
from .observables import (josephson_current, magnetic_field, physical_scales,
                          voltage_at_level)
from .params import (DimensionlessParams, PhysicalJunctionParams,
                     derive_constants, validate)
from .solver import SolverConfig, run

DEFAULT_OVERLAY_TOL = 0.005

DEFAULT_SWEEP_GRIDS = {
    "alpha": (0.7, 0.8, 0.9, 1.0),
    "gamma1": (0.02, 0.05, 0.1, 0.2),
    "gamma2": (2.5, 5.0, 7.5, 10.0),
    "lambda": (0.2, 0.4, 0.6, 0.8),
}

# Allowed config keys per section (configparser lowercases option names,
# so the time-horizon key T is listed as "t"); anything else is rejected
# by name.
_SCHEMA = {
    "params": ("alpha", "gamma1", "gamma2", "lambda", "abc", "bbc", "c", "t"),
    "solver": ("n", "m", "newton_tol", "newton_max_iter"),
    "output": ("snapshots", "units", "phase_over_2pi", "workers"),
    "mms": ("mesh_sizes", "tau_per_h", "overlay_tol"),
    "sweep": ("parameters", "alpha", "gamma1", "gamma2", "lambda"),
    "physical": ("d", "t_b", "width", "half_length", "eps", "sigma0", "area",
                 "jc", "jbias", "alpha", "i_total", "b_ext", "eta"),
}

_SWEEP_FIELD = {"alpha": "alpha", "gamma1": "gamma1", "gamma2": "gamma2",
                "lambda": "lam"}


@dataclass
class ResolvedConfig:
    """Fully resolved run configuration (file values merged with flags)."""

    solver: SolverConfig
    out_dir: str
    units: str = "dimensionless"
    phase_over_2pi: bool = False
    workers: int = 1
    mesh_sizes: tuple = DEFAULT_MESH_SIZES
    tau_per_h: float = DEFAULT_TAU_PER_H
    overlay_tol: float = DEFAULT_OVERLAY_TOL
    sweep_parameters: tuple = ("alpha", "gamma1", "gamma2", "lambda")
    sweep_grids: dict = field(default_factory=lambda: dict(DEFAULT_SWEEP_GRIDS))
    physical: PhysicalJunctionParams | None = None


def _parse_float(section, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None


def _parse_int(section, key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from None


def _parse_bool(section, key, raw):
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key} = {raw!r} is not a boolean")


def _parse_floats(section, key, raw):
    return tuple(_parse_float(section, key, tok) for tok in raw.split())


def _read_config_file(path):
    cp = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from None
    except configparser.Error as err:
        raise ConfigError(f"malformed config file {path}: {err}") from None
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key in cp[section]:
            if key.lower() not in _SCHEMA[section]:
                raise ConfigError(f"unknown config key [{section}] {key}")
    return cp


def _physical_from_section(sec):
    required = ("d", "t_b", "width", "half_length", "eps", "sigma0", "area",
                "jc", "jbias", "alpha")
    missing = [k for k in required if k not in sec]
    if missing:
        raise ConfigError(
            "[physical] section missing keys: " + ", ".join(missing))
    kwargs = {k: _parse_float("physical", k, sec[k]) for k in sec}
    try:
        return PhysicalJunctionParams(**kwargs)
    except ValueError as err:
        raise ConfigError(f"[physical] {err}") from None


def parse_config(args):
    """Merge config file and flags into a ResolvedConfig.

    Flags override file values; unknown keys are rejected; the merged
    parameter bundle is validated. Raises ConfigError on any problem.
    """
    cp = _read_config_file(args.config) if args.config else configparser.ConfigParser()

    def section(name):
        return cp[name] if cp.has_section(name) else {}

    par = section("params")
    params = DimensionlessParams(
        alpha=_parse_float("params", "alpha", par["alpha"]) if "alpha" in par else DimensionlessParams.alpha,
        gamma1=_parse_float("params", "gamma1", par["gamma1"]) if "gamma1" in par else DimensionlessParams.gamma1,
        gamma2=_parse_float("params", "gamma2", par["gamma2"]) if "gamma2" in par else DimensionlessParams.gamma2,
        lam=_parse_float("params", "lambda", par["lambda"]) if "lambda" in par else DimensionlessParams.lam,
        abc=_parse_float("params", "abc", par["abc"]) if "abc" in par else DimensionlessParams.abc,
        bbc=_parse_float("params", "bbc", par["bbc"]) if "bbc" in par else DimensionlessParams.bbc,
        c=_parse_float("params", "c", par["c"]) if "c" in par else DimensionlessParams.c,
        t_final=_parse_float("params", "T", par["T"]) if "T" in par else DimensionlessParams.t_final,
    )
    # Flag overrides.
    overrides = {}
    for flag, fieldname in (("alpha", "alpha"), ("gamma1", "gamma1"),
                            ("gamma2", "gamma2"), ("lam", "lam"),
                            ("T", "t_final")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[fieldname] = value
    if overrides:
        params = replace(params, **overrides)

    sol = section("solver")
    n = args.n if args.n is not None else (
        _parse_int("solver", "n", sol["n"]) if "n" in sol else SolverConfig.n)
    m = args.m if args.m is not None else (
        _parse_int("solver", "m", sol["m"]) if "m" in sol else SolverConfig.m)
    newton_tol = _parse_float("solver", "newton_tol", sol["newton_tol"]) \
        if "newton_tol" in sol else SolverConfig.newton_tol
    newton_max_iter = _parse_int("solver", "newton_max_iter", sol["newton_max_iter"]) \
        if "newton_max_iter" in sol else SolverConfig.newton_max_iter

    out = section("output")
    snapshots = args.snapshots if args.snapshots is not None else (
        _parse_int("output", "snapshots", out["snapshots"])
        if "snapshots" in out else SolverConfig.snapshots)
    units = args.units if args.units is not None else out.get("units", "dimensionless")
    if units not in ("dimensionless", "physical"):
        raise ConfigError(f"units = {units!r}: choose dimensionless or physical")
    phase_over_2pi = _parse_bool("output", "phase_over_2pi", out["phase_over_2pi"]) \
        if "phase_over_2pi" in out else False
    workers = args.workers if args.workers is not None else (
        _parse_int("output", "workers", out["workers"]) if "workers" in out else 1)
    if workers < 1:
        raise ConfigError(f"workers = {workers} must be at least 1")

    mms_sec = section("mms")
    mesh_sizes = tuple(int(v) for v in _parse_floats("mms", "mesh_sizes", mms_sec["mesh_sizes"])) \
        if "mesh_sizes" in mms_sec else DEFAULT_MESH_SIZES
    tau_per_h = _parse_float("mms", "tau_per_h", mms_sec["tau_per_h"]) \
        if "tau_per_h" in mms_sec else DEFAULT_TAU_PER_H
    if tau_per_h <= 0.0:
        raise ConfigError(f"tau_per_h = {tau_per_h} must be positive")
    overlay_tol = _parse_float("mms", "overlay_tol", mms_sec["overlay_tol"]) \
        if "overlay_tol" in mms_sec else DEFAULT_OVERLAY_TOL

    sweep_sec = section("sweep")
    if "parameters" in sweep_sec:
        sweep_parameters = tuple(sweep_sec["parameters"].split())
        for p in sweep_parameters:
            if p not in DEFAULT_SWEEP_GRIDS:
                raise ConfigError(f"[sweep] parameters: unknown parameter {p!r}")
    else:
        sweep_parameters = tuple(DEFAULT_SWEEP_GRIDS)
    sweep_grids = {}
    for name in DEFAULT_SWEEP_GRIDS:
        if name in sweep_sec:
            grid = _parse_floats("sweep", name, sweep_sec[name])
            if len(grid) < 2:
                raise ConfigError(f"[sweep] {name} grid needs at least 2 values")
            sweep_grids[name] = grid
        else:
            sweep_grids[name] = DEFAULT_SWEEP_GRIDS[name]

    physical = _physical_from_section(cp["physical"]) if cp.has_section("physical") else None
    if units == "physical" and physical is None:
        raise ConfigError("units = physical requires a [physical] config section")

    problems = validate(params)
    if n < 2:
        problems.append(f"n = {n} must be at least 2")
    if m < 2:
        problems.append(f"m = {m} must be at least 2")
    if newton_tol <= 0.0:
        problems.append(f"newton_tol = {newton_tol} must be positive")
    if newton_max_iter < 1:
        problems.append(f"newton_max_iter = {newton_max_iter} must be >= 1")
    if snapshots < 2:
        problems.append(f"snapshots = {snapshots} must be at least 2")
    if problems:
        raise ConfigError("; ".join(problems))

    solver_cfg = SolverConfig(params=params, n=n, m=m, newton_tol=newton_tol,
                              newton_max_iter=newton_max_iter,
                              snapshots=snapshots)
    out_dir = args.out if args.out is not None else f"{args.mode}_out"
    return ResolvedConfig(solver=solver_cfg, out_dir=out_dir, units=units,
                          phase_over_2pi=phase_over_2pi, workers=workers,
                          mesh_sizes=mesh_sizes, tau_per_h=tau_per_h,
                          overlay_tol=overlay_tol,
                          sweep_parameters=sweep_parameters,
                          sweep_grids=sweep_grids, physical=physical)


def _fmt(x):
    return f"{x:.17g}"


def _write_csv(path, header, columns):
    rows = zip(*columns)
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _config_dict(rc):
    p = rc.solver.params
    return {
        "alpha": p.alpha, "gamma1": p.gamma1, "gamma2": p.gamma2,
        "lambda": p.lam, "abc": p.abc, "bbc": p.bbc, "c": p.c, "T": p.t_final,
        "n": rc.solver.n, "m": rc.solver.m,
        "newton_tol": rc.solver.newton_tol,
        "newton_max_iter": rc.solver.newton_max_iter,
        "snapshots": rc.solver.snapshots,
        "units": rc.units, "phase_over_2pi": rc.phase_over_2pi,
    }


def _scales_dict(rc):
    if rc.units != "physical":
        return None
    scales = physical_scales(rc.physical)
    return {"voltage": scales.voltage, "current_density": scales.current_density,
            "field": scales.field, "length": scales.length, "time": scales.time}


def _diagnostics(traj):
    its = traj.newton_iterations
    res = traj.residual_norms
    return {
        "steps_completed": int(its.shape[0]),
        "newton_iterations_max": int(its.max()) if its.size else 0,
        "newton_iterations_mean": float(its.mean()) if its.size else 0.0,
        "residual_norm_max": float(res.max()) if res.size else 0.0,
        "completed": bool(traj.completed),
    }


def _write_simulate_outputs(traj, rc, out_dir):
    """CSV snapshots plus manifest for one trajectory; returns the manifest."""
    os.makedirs(out_dir, exist_ok=True)
    scales = _scales_dict(rc)
    z = traj.mesh.nodes
    z_mid = traj.mesh.midpoints
    length = scales["length"] if scales else 1.0
    outputs = []
    for idx, level in enumerate(traj.levels):
        tag = f"{idx:04d}"
        phase = traj.phases[idx]
        pval = phase / (2.0 * np.pi) if rc.phase_over_2pi else phase
        cur = josephson_current(phase)
        volt = voltage_at_level(traj, int(level))
        fld = magnetic_field(phase, traj.mesh)
        if scales:
            cur = cur * scales["current_density"]
            volt = volt * scales["voltage"]
            fld = fld * scales["field"]
        for name, axis, vals in (("phase", z, pval), ("current", z, cur),
                                 ("voltage", z, volt), ("field", z_mid, fld)):
            fname = f"{name}_{tag}.csv"
            _write_csv(os.path.join(out_dir, fname), "z,value",
                       (axis * length, vals))
            outputs.append(fname)
    manifest = {
        "mode": "simulate",
        "version": __version__,
        "seed": None,
        "config": _config_dict(rc),
        "physical_scales": scales,
        "diagnostics": _diagnostics(traj),
        "snapshot_levels": [int(v) for v in traj.levels],
        "snapshot_times": [float(t) for t in traj.times],
        "outputs": outputs,
        "partial": not traj.completed,
    }
    _write_json(os.path.join(out_dir, "manifest.json"), manifest)
    return manifest


def cmd_simulate(rc):
    """Run one trajectory and write snapshot CSVs plus the manifest."""
    try:
        traj = run(rc.solver)
    except StepFailureError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        _write_simulate_outputs(err.partial, rc, rc.out_dir)
        return 3
    _write_simulate_outputs(traj, rc, rc.out_dir)
    return 0


def _write_mms_outputs(table, rc, partial):
    os.makedirs(rc.out_dir, exist_ok=True)
    outputs = ["convergence.csv", "slopes.json"]
    table.to_csv(os.path.join(rc.out_dir, "convergence.csv"))
    summary = table.summary()
    summary["tau_per_h"] = rc.tau_per_h
    summary["overlay_tol"] = rc.overlay_tol
    devs = table.max_deviations
    summary["overlay_within_tol"] = bool(devs.size and devs[-1] <= rc.overlay_tol)
    _write_json(os.path.join(rc.out_dir, "slopes.json"), summary)
    for overlay in table.overlays:
        fname = f"overlay_n{overlay.n:04d}.csv"
        dev = np.abs(overlay.approx - overlay.exact)
        maxdev = np.full_like(dev, overlay.max_deviation)
        _write_csv(os.path.join(rc.out_dir, fname),
                   "z,approx,exact,deviation,max_deviation",
                   (overlay.nodes, overlay.approx, overlay.exact, dev, maxdev))
        outputs.append(fname)
    manifest = {
        "mode": "mms",
        "version": __version__,
        "seed": None,
        "config": _config_dict(rc),
        "mesh_sizes": [int(v) for v in rc.mesh_sizes],
        "tau_per_h": rc.tau_per_h,
        "overlay_tol": rc.overlay_tol,
        "outputs": outputs,
        "partial": partial,
    }
    _write_json(os.path.join(rc.out_dir, "manifest.json"), manifest)


def cmd_mms(rc):
    """Run the manufactured-solution study and write table, slopes, overlays."""
    params = rc.solver.params
    coupling = lambda h: rc.tau_per_h * h
    try:
        table = convergence_study(params, mesh_sizes=rc.mesh_sizes,
                                  coupling=coupling,
                                  newton_tol=rc.solver.newton_tol,
                                  newton_max_iter=rc.solver.newton_max_iter)
    except StepFailureError as err:
        print(f"solver failure during study: {err}", file=sys.stderr)
        _write_mms_outputs(err.partial_table, rc, partial=True)
        return 3
    if len(rc.mesh_sizes) < 2:
        print("single mesh size: slope fitting skipped", file=sys.stderr)
    _write_mms_outputs(table, rc, partial=False)
    return 0


def _sweep_job(payload):
    """One sweep run; executed possibly in a worker process."""
    rc = ResolvedConfig(**payload["rc"])
    name, value = payload["name"], payload["value"]
    rc.solver = SolverConfig(
        params=replace(DimensionlessParams(**payload["params"]),
                       **{_SWEEP_FIELD[name]: value}),
        n=payload["n"], m=payload["m"], newton_tol=payload["newton_tol"],
        newton_max_iter=payload["newton_max_iter"],
        snapshots=payload["snapshots"])
    try:
        traj = run(rc.solver)
    except StepFailureError as err:
        _write_simulate_outputs(err.partial, rc, rc.out_dir)
        return {"name": name, "value": value, "error": str(err)}
    _write_simulate_outputs(traj, rc, rc.out_dir)
    final = traj.final_phase
    volt = voltage_at_level(traj, int(traj.grid.m))
    return {
        "name": name, "value": value, "error": None,
        "mean_phase": float(final.mean()),
        "mean_current": float(josephson_current(final).mean()),
        "mean_voltage": float(volt.mean()),
    }


def _grid_tag(value):
    return f"{value:g}"


def _direction(values):
    diffs = np.diff(values)
    if np.all(diffs > 0.0):
        return "increasing"
    if np.all(diffs < 0.0):
        return "decreasing"
    return "mixed"


def cmd_sweep(rc):
    """Fan out one simulate run per grid value of each swept parameter."""
    os.makedirs(rc.out_dir, exist_ok=True)
    base = rc.solver
    jobs = []
    for name in rc.sweep_parameters:
        for value in rc.sweep_grids[name]:
            run_dir = os.path.join(rc.out_dir, name, _grid_tag(value))
            payload = {
                "name": name, "value": value,
                "params": asdict(base.params),
                "n": base.n, "m": base.m,
                "newton_tol": base.newton_tol,
                "newton_max_iter": base.newton_max_iter,
                "snapshots": base.snapshots,
                "rc": {
                    "solver": None, "out_dir": run_dir, "units": rc.units,
                    "phase_over_2pi": rc.phase_over_2pi,
                    "physical": rc.physical,
                },
            }
            jobs.append(payload)

    if rc.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=rc.workers) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(job) for job in jobs]

    by_key = {(r["name"], r["value"]): r for r in results}
    index = {}
    trends = {}
    failures = []
    for name in rc.sweep_parameters:
        index[name] = {}
        rows = []
        for value in rc.sweep_grids[name]:
            res = by_key[(name, value)]
            tag = _grid_tag(value)
            entry = {"dir": f"{name}/{tag}"}
            if res["error"] is not None:
                entry["error"] = res["error"]
                failures.append(f"{name}={tag}: {res['error']}")
            index[name][tag] = entry
            rows.append(res)
        trends[name] = {"values": [r["value"] for r in rows]}
        for quantity in ("mean_phase", "mean_current", "mean_voltage"):
            if any(r["error"] is not None for r in rows):
                trends[name][quantity] = {"values": None,
                                          "direction": "incomplete"}
            else:
                vals = [r[quantity] for r in rows]
                trends[name][quantity] = {"values": vals,
                                          "direction": _direction(vals)}

    _write_json(os.path.join(rc.out_dir, "index.json"), index)
    _write_json(os.path.join(rc.out_dir, "trends.json"), trends)
    manifest = {
        "mode": "sweep",
        "version": __version__,
        "seed": None,
        "config": _config_dict(rc),
        "sweep_parameters": list(rc.sweep_parameters),
        "sweep_grids": {k: list(v) for k, v in rc.sweep_grids.items()
                        if k in rc.sweep_parameters},
        "workers": rc.workers,
        "failures": failures,
        "outputs": ["index.json", "trends.json"],
        "partial": bool(failures),
    }
    _write_json(os.path.join(rc.out_dir, "manifest.json"), manifest)
    return 3 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jjphase",
        description="Fractional sine-Gordon solver for Josephson junction "
                    "phase dynamics")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, helptext in (("simulate", "run one trajectory"),
                           ("mms", "manufactured-solution convergence study"),
                           ("sweep", "parameter sweep of simulate runs")):
        sp = sub.add_parser(mode, help=helptext)
        sp.add_argument("--config", help="INI config file")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--n", type=int, help="element count")
        sp.add_argument("--m", type=int, help="time step count")
        sp.add_argument("--alpha", type=float, help="fractional order")
        sp.add_argument("--gamma1", type=float, help="order-alpha damping")
        sp.add_argument("--gamma2", type=float, help="order-2alpha coefficient")
        sp.add_argument("--lambda", dest="lam", type=float,
                        help="normalized bias current")
        sp.add_argument("--T", type=float, help="final time")
        sp.add_argument("--snapshots", type=int, help="snapshot count")
        sp.add_argument("--workers", type=int, help="sweep worker processes")
        sp.add_argument("--units", choices=("dimensionless", "physical"),
                        help="output units")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        rc = parse_config(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    if args.mode == "simulate":
        return cmd_simulate(rc)
    if args.mode == "mms":
        return cmd_mms(rc)
    return cmd_sweep(rc)


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

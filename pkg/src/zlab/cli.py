"""Command-line front end: config parsing, experiment dispatch, artifacts.

Each invocation runs one experiment, writes CSV tables (plus SVG line plots
where a series is natural), and always writes a JSON manifest, even when the
experiment fails. Exit codes: 0 all checks passed, 1 check failure or
runtime error, 2 usage error.

Configuration comes from an optional JSON file (strict schema: unknown keys
are rejected by name) overridden by command-line flags; the output directory
resolves flag > ZLAB_OUT_DIR > config > current directory.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .blowup import AnsatzSpec, ansatz_norm, blowup_norm_trace
from .counterexamples import (
    counterexample_c1,
    counterexample_c2,
    duhamel_lower_bound_1,
    duhamel_lower_bound_2,
)
from .cutoffs import beta_a_j, dyadic_scales, psi_n
from .grids import FrequencyGrid, SpaceTimeGrid, SpatialField
from .ground_state import ground_state, radial_mass
from .localize import localize_map
from .norms import NormSpec, bourgain_norm
from .report import emit_csv, emit_manifest, emit_svg
from .solver import (
    SolverConfig,
    lifespan_bound,
    reduce_data,
    solve_nls,
    solve_reduced,
    solve_speed,
)
from .trilinear import (
    TileSpec,
    check_bilinear_strichartz,
    check_regime,
    fit_exponent,
    make_dyadic_random_field,
)

__all__ = ["ExperimentConfig", "parse_config", "run", "main"]


@dataclass
class ExperimentConfig:
    command: str
    parameters: dict
    seed: int = 0
    output_dir: str = "."


@dataclass
class RunResult:
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    checks: list = field(default_factory=list)  # (name, value, tolerance, passed)
    plots: list = field(default_factory=list)  # (name, x, y, xlabel, ylabel, logx, logy)

    def check(self, name, value, tolerance, passed):
        self.checks.append((name, float(value), tolerance, bool(passed)))


class UsageError(Exception):
    pass


def _gauss_data(half_period: float, points: int, amplitude: float):
    g = FrequencyGrid(half_period, points)
    x1, x2 = g.x_mesh()
    u0 = SpatialField.from_physical(
        g, amplitude * np.exp(-(x1 ** 2 + x2 ** 2) / 4.0) * (1.0 + 0.3j)
    )
    n0 = SpatialField.from_physical(
        g, 0.5 * amplitude * np.exp(-((x1 - 2.0) ** 2 + x2 ** 2) / 6.0)
    )
    n1 = SpatialField.from_physical(
        g, 0.2 * amplitude * np.exp(-(x1 ** 2 + (x2 + 1.0) ** 2) / 5.0)
    )
    return g, u0, n0, n1


def _cmd_psi_check(p, seed):
    res = RunResult()
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.0, 2.0 ** 16, p["samples"])
    scales = dyadic_scales(2 ** 17)
    total = np.zeros_like(r)
    for n in scales:
        total += psi_n(n, r)
    dev = float(np.max(np.abs(total - 1.0)))
    rows = [("radial", dev)]
    res.check("radial partition of unity", dev, 1e-12, dev <= 1e-12)
    theta = rng.uniform(-np.pi, np.pi, p["samples"])
    for a in (4, 16, 64):
        total = np.zeros_like(theta)
        for j in range(a):
            total += beta_a_j(a, j, theta)
        dev = float(np.max(np.abs(total - 1.0)))
        rows.append((f"angular A={a}", dev))
        res.check(f"angular partition of unity A={a}", dev, 1e-12, dev <= 1e-12)
    res.tables["psi_check"] = (("partition", "max_deviation"), rows)
    return res


def _cmd_norm(p, seed):
    res = RunResult()
    grid = SpaceTimeGrid(
        FrequencyGrid(p["half_period"], p["points"]),
        p["time_window"],
        p["points_in_time"],
    )
    rows = []
    for flavor in ("S", "W+", "W-"):
        w = make_dyadic_random_field(grid, p["n"], p["l"], flavor, seed)
        spec = NormSpec(flavor, p["s"], p["b"], p["p"])
        val = bourgain_norm(w, spec)
        rows.append((flavor, val))
        res.check(f"norm finite ({flavor})", val, math.inf, math.isfinite(val))
    res.tables["norms"] = (("flavor", "value"), rows)
    return res


def _tile_from(p):
    return TileSpec(
        N=p["n"],
        N1=p["n1"],
        N2=p["n2"],
        L=p["l"],
        L1=p["l1"],
        L2=p["l2"],
        A=p["a"] if p["a"] > 0 else None,
        j1=p["j1"],
        j2=p["j2"],
        cube_side=p["cube_side"] if p["cube_side"] > 0 else None,
    )


def _sweep_result(res, sweep, label):
    rows = [(seed, ratio) for seed, ratio in sweep.measured]
    res.tables[label] = (("seed", "ratio"), rows)
    res.check(
        f"{label} max ratio finite",
        sweep.max_ratio,
        math.inf,
        math.isfinite(sweep.max_ratio),
    )
    return res


def _cmd_estimate_sweep(p, seed):
    res = RunResult()
    spec = _tile_from(p)
    seeds = range(seed, seed + p["seeds"])
    sweep = check_bilinear_strichartz(spec, p["case"], seeds, refine=p["refine"])
    return _sweep_result(res, sweep, "estimate_sweep")


def _cmd_trilinear_sweep(p, seed):
    res = RunResult()
    spec = _tile_from(p)
    seeds = range(seed, seed + p["seeds"])
    sweep = check_regime(spec, p["regime"], seeds, refine=p["refine"])
    return _sweep_result(res, sweep, "trilinear_sweep")


def _cmd_counterexample(p, seed):
    res = RunResult()
    fn = {"c1": counterexample_c1, "c2": counterexample_c2}.get(p["lemma"])
    if fn is None:
        raise UsageError(f"unknown lemma {p['lemma']!r} (expected c1 or c2)")
    sigma, k, ell = p["sigma"], p["k"], p["ell"]
    bp = b1 = b2 = 5.0 / 12.0
    if p["lemma"] == "c1":
        predicted = -ell - 0.5 + (1.0 + sigma) * (1.25 - (bp + b1 + b2))
    else:
        predicted = ell - 2.0 * k + 0.5 + (1.0 + sigma) * (1.25 - (bp + b1 + b2))
    sizes = [n for n in dyadic_scales(p["n_max"]) if p["n_min"] <= n <= p["n_max"]]
    points = [(n, fn(n, sigma, k, ell, bp, b1, b2)) for n in sizes]
    slope, _ = fit_exponent(points)
    res.tables["counterexample"] = (("N", "ratio"), points)
    res.check(
        f"slope vs predicted {predicted:+.3f}",
        slope,
        0.15,
        abs(slope - predicted) <= 0.15,
    )
    res.plots.append(
        ("counterexample", [n for n, _ in points], [r for _, r in points],
         "N", "ratio", True, True)
    )
    return res


def _cmd_duhamel_lb(p, seed):
    res = RunResult()
    fn = {1: duhamel_lower_bound_1, 2: duhamel_lower_bound_2}.get(p["prop"])
    if fn is None:
        raise UsageError(f"unknown prop {p['prop']} (expected 1 or 2)")
    sizes = [n for n in dyadic_scales(p["n_max"]) if p["n_min"] <= n <= p["n_max"]]
    points = [(n, fn(n, p["t_max"], p["k"], p["ell"], p["t_eval"])) for n in sizes]
    slope, _ = fit_exponent(points)
    res.tables["duhamel_lb"] = (("N", "normalized_size"), points)
    # values are already divided by the predicted power of N, so sharpness
    # means the remaining slope is bounded below near zero
    res.check("normalized slope lower bound", slope, 0.15, slope >= -0.15)
    res.plots.append(
        ("duhamel_lb", [n for n, _ in points], [r for _, r in points],
         "N", "normalized size", True, True)
    )
    return res


def _cmd_localize_check(p, seed):
    res = RunResult()
    report = localize_map(p["n1"], p["a"], p["k_offset"], p["mesh"])
    res.tables["localize_check"] = (
        ("n1", "a", "violations", "max_multiplicity", "checked_points"),
        [(report.n1, report.a, report.violations, report.max_multiplicity,
          report.checked_points)],
    )
    res.check("containment violations", report.violations, 0, report.violations == 0)
    res.check(
        "interval multiplicity", report.max_multiplicity, 100,
        report.max_multiplicity <= 100,
    )
    return res


def _trajectory_result(res, traj, label, drift_tol):
    table = traj.diagnostics_array()
    res.tables[label] = (
        ("t", "mass", "Hm12_n", "Hm32_dtn"),
        [tuple(row) for row in table],
    )
    drift = float(np.max(np.abs(table[:, 1] - table[0, 1])) / table[0, 1])
    res.check("mass drift", drift, drift_tol, drift <= drift_tol)
    res.plots.append(
        (label + "_mass", table[:, 0].tolist(), table[:, 1].tolist(),
         "t", "mass", False, False)
    )
    return res


def _cmd_solve(p, seed):
    res = RunResult()
    g, u0, n0, n1 = _gauss_data(p["half_period"], p["points"], p["amplitude"])
    cfg = SolverConfig(
        g, dt=p["dt"], integrator=p["integrator"],
        snapshot_every=p["snapshot_every"],
    )
    u0c, v0 = reduce_data(u0, n0, n1)
    traj = solve_reduced(cfg, u0c, v0, p["t_final"])
    return _trajectory_result(res, traj, "solve", 1e-6)


def _cmd_nls(p, seed):
    res = RunResult()
    g, u0, _, _ = _gauss_data(p["half_period"], p["points"], p["amplitude"])
    cfg = SolverConfig(g, dt=p["dt"], snapshot_every=p["snapshot_every"])
    traj = solve_nls(cfg, u0, p["t_final"])
    return _trajectory_result(res, traj, "nls", 1e-10)


def _cmd_subsonic(p, seed):
    res = RunResult()
    g, u0, _, _ = _gauss_data(p["half_period"], p["points"], p["amplitude"])
    cfg = SolverConfig(g, dt=p["dt"])
    u_nls = solve_nls(cfg, u0, p["t_final"]).snapshots[-1].u
    up = u0.to_physical()
    n0 = SpatialField.from_physical(g, -np.abs(up) ** 2)
    n1 = SpatialField(g, np.zeros_like(u0.values))
    rows = []
    for lam in (1, 2, 4, 8):
        cfg_l = SolverConfig(g, dt=p["dt"], wave_speed=float(lam))
        u_lam = solve_speed(cfg_l, u0, n0, n1, p["t_final"]).snapshots[-1].u
        dist = float(
            np.sqrt(np.sum(np.abs(u_lam.values - u_nls.values) ** 2)) * g.dxi
        )
        rows.append((lam, dist))
    res.tables["subsonic"] = (("lambda", "distance_to_nls"), rows)
    dists = [d for _, d in rows]
    monotone = all(dists[i] > dists[i + 1] for i in range(len(dists) - 1))
    res.check("distance strictly decreasing", dists[-1] - dists[0], 0.0, monotone)
    res.plots.append(
        ("subsonic", [l for l, _ in rows], dists, "lambda", "distance", True, True)
    )
    return res


def _cmd_ground_state(p, seed):
    res = RunResult()
    g = FrequencyGrid(p["half_period"], p["points"])
    q = ground_state(g, p["tol"])
    qp = q.to_physical().real
    cube = SpatialField.from_physical(g, qp ** 3)
    resid_vals = -q.values - g.abs_xi() ** 2 * q.values + cube.values
    residual = float(np.sqrt(np.sum(np.abs(resid_vals) ** 2)) * g.dxi)
    mass = q.l2_norm() ** 2
    oracle = radial_mass()
    rows = [
        ("mass", mass),
        ("oracle_mass", oracle),
        ("peak", float(qp.max())),
        ("pde_residual", residual),
    ]
    res.tables["ground_state"] = (("quantity", "value"), rows)
    res.check("PDE residual", residual, 10.0 * p["tol"], residual <= 10.0 * p["tol"])
    rel = abs(mass - oracle) / oracle
    res.check("mass vs shooting oracle", rel, 1e-3, rel <= 1e-3)
    return res


def _cmd_blowup_trace(p, seed):
    res = RunResult()
    g = FrequencyGrid(p["half_period"], p["points"])
    if p["profile"] == "ground":
        q = ground_state(g, 1e-10)
        qp = q.to_physical().real
        prof_p, prof_n = q, SpatialField.from_physical(g, -qp ** 2)
    elif p["profile"] == "gaussian":
        x1, x2 = g.x_mesh()
        r2 = x1 ** 2 + x2 ** 2
        prof_p = SpatialField.from_physical(g, np.exp(-r2))
        prof_n = SpatialField.from_physical(g, -np.exp(-2.0 * r2))
    else:
        raise UsageError(f"unknown profile {p['profile']!r}")
    spec = AnsatzSpec(p["omega"], p["theta"], p["t_blow"], prof_p, prof_n)
    taus = np.geomspace(1e-3, 1e-1, p["num_times"]) * spec.omega
    times = spec.T_blow - taus
    table = blowup_norm_trace(spec, times)
    res.tables["blowup_trace"] = (
        ("t", "Hm12_n", "Hm32_dtn", "mass_u"),
        [tuple(row) for row in table],
    )
    hdot = [ansatz_norm(spec, t, -0.5, "n", homogeneous=True) for t in times]
    slope = float(np.polyfit(np.log(taus), np.log(hdot), 1)[0])
    res.check("concentration rate", slope, 0.05, abs(slope + 0.5) <= 0.05)
    mass_var = float(np.ptp(table[:, 3]) / table[0, 3])
    res.check("mass column constant", mass_var, 1e-6, mass_var <= 1e-6)
    res.plots.append(
        ("blowup_trace", taus.tolist(), hdot, "T - t", "homogeneous norm",
         True, True)
    )
    return res


def _cmd_lifespan(p, seed):
    res = RunResult()
    value = lifespan_bound(p["r_full"], p["r_mass"], p["c0"])
    rows = [(p["r_full"], p["r_mass"], p["c0"], value)]
    res.tables["lifespan"] = (("R", "r", "c0", "T"), rows)
    big_r = np.geomspace(10.0, 1000.0, 7)
    points = [(r, lifespan_bound(r, p["r_mass"], p["c0"])) for r in big_r]
    slope, _ = fit_exponent(points)
    res.tables["lifespan_scaling"] = (("R", "T"), points)
    res.check("large-R decay exponent", slope, 0.05, abs(slope + 2.0) <= 0.05)
    return res


# command -> (handler, {parameter: default})
_COMMANDS = {
    "psi-check": (_cmd_psi_check, {"samples": 100000}),
    "norm": (
        _cmd_norm,
        {
            "half_period": 4.0,
            "points": 16,
            "time_window": 2.0,
            "points_in_time": 16,
            "s": 0.0,
            "b": 5.0 / 12.0,
            "p": 1.0,
            "n": 2,
            "l": 2,
        },
    ),
    "estimate-sweep": (
        _cmd_estimate_sweep,
        {
            "case": "SchSch",
            "n": 1,
            "n1": 4,
            "n2": 4,
            "l": 1,
            "l1": 1,
            "l2": 1,
            "a": 0,
            "j1": 0,
            "j2": 0,
            "cube_side": 0.0,
            "seeds": 5,
            "refine": 1,
        },
    ),
    "trilinear-sweep": (
        _cmd_trilinear_sweep,
        {
            "regime": "HighLow",
            "n": 8,
            "n1": 2,
            "n2": 8,
            "l": 1,
            "l1": 1,
            "l2": 64,
            "a": 0,
            "j1": 0,
            "j2": 0,
            "cube_side": 0.0,
            "seeds": 5,
            "refine": 1,
        },
    ),
    "counterexample": (
        _cmd_counterexample,
        {
            "lemma": "c1",
            "sigma": -1.0,
            "k": 0.0,
            "ell": -0.5,
            "n_min": 16,
            "n_max": 256,
        },
    ),
    "duhamel-lb": (
        _cmd_duhamel_lb,
        {
            "prop": 1,
            "t_max": 1.0,
            "t_eval": 0.5,
            "k": 0.0,
            "ell": -0.5,
            "n_min": 32,
            "n_max": 512,
        },
    ),
    "localize-check": (
        _cmd_localize_check,
        {"n1": 256.0, "a": 8.0, "k_offset": 0.0, "mesh": 1e-3},
    ),
    "solve": (
        _cmd_solve,
        {
            "half_period": 16.0,
            "points": 256,
            "dt": 1e-4,
            "t_final": 0.1,
            "amplitude": 1.0,
            "integrator": "StrangSplit",
            "snapshot_every": 100,
        },
    ),
    "nls": (
        _cmd_nls,
        {
            "half_period": 16.0,
            "points": 256,
            "dt": 1e-4,
            "t_final": 0.1,
            "amplitude": 1.0,
            "snapshot_every": 100,
        },
    ),
    "subsonic": (
        _cmd_subsonic,
        {
            "half_period": 16.0,
            "points": 256,
            "dt": 1e-3,
            "t_final": 0.05,
            "amplitude": 1.0,
        },
    ),
    "ground-state": (
        _cmd_ground_state,
        {"half_period": 4.0, "points": 128, "tol": 1e-10},
    ),
    "blowup-trace": (
        _cmd_blowup_trace,
        {
            "half_period": 4.0,
            "points": 128,
            "omega": 2.0,
            "theta": 0.0,
            "t_blow": 4.0,
            "profile": "ground",
            "num_times": 9,
        },
    ),
    "lifespan": (_cmd_lifespan, {"r_full": 1.0, "r_mass": 1.0, "c0": 1.0}),
}


def _coerce(name, value, default):
    kind = type(default)
    try:
        if kind is bool:
            if isinstance(value, bool):
                return value
            if str(value).lower() in ("true", "1"):
                return True
            if str(value).lower() in ("false", "0"):
                return False
            raise ValueError(value)
        if kind is int:
            if isinstance(value, float) and value != int(value):
                raise ValueError(value)
            return int(value)
        if kind is float:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise UsageError(f"parameter {name!r}: cannot interpret {value!r} as {kind.__name__}")


def parse_config(argv) -> ExperimentConfig:
    parser = argparse.ArgumentParser(
        prog="zlab", description="Zakharov system numerical laboratory"
    )
    sub = parser.add_subparsers(dest="command")
    for name, (_, params) in _COMMANDS.items():
        cp = sub.add_parser(name)
        cp.add_argument("--config", default=None)
        cp.add_argument("--seed", type=int, default=None)
        cp.add_argument("--out", default=None)
        for pname, default in params.items():
            flag = "--" + pname.replace("_", "-")
            cp.add_argument(flag, dest="param_" + pname, default=None)
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("no command given")
    _, schema = _COMMANDS[args.command]
    parameters = dict(schema)
    seed = 0
    out_dir = "."

    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                raw = json.load(handle)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}")
        allowed = {"command", "parameters", "seed", "outputDir"}
        for key in raw:
            if key not in allowed:
                raise UsageError(f"unknown config key {key!r}")
        if "command" in raw and raw["command"] != args.command:
            raise UsageError(
                f"config command {raw['command']!r} does not match {args.command!r}"
            )
        for key, value in raw.get("parameters", {}).items():
            if key not in schema:
                raise UsageError(f"unknown parameter key {key!r}")
            parameters[key] = _coerce(key, value, schema[key])
        if "seed" in raw:
            seed = _coerce("seed", raw["seed"], 0)
        out_dir = raw.get("outputDir", out_dir)

    if "ZLAB_OUT_DIR" in os.environ:
        out_dir = os.environ["ZLAB_OUT_DIR"]
    if args.out is not None:
        out_dir = args.out
    if args.seed is not None:
        seed = args.seed
    if seed < 0 or seed >= 2 ** 64:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {seed}")

    for pname in schema:
        override = getattr(args, "param_" + pname)
        if override is not None:
            parameters[pname] = _coerce(pname, override, schema[pname])

    return ExperimentConfig(args.command, parameters, seed, out_dir)


def run(config: ExperimentConfig) -> int:
    handler, _ = _COMMANDS[config.command]
    started = time.monotonic()
    manifest = {
        "command": config.command,
        "config": {
            "parameters": config.parameters,
            "outputDir": config.output_dir,
        },
        "version": __version__,
        "seed": config.seed,
        "checks": [],
        "elapsed_s": 0.0,
    }
    out = config.output_dir
    code = 0
    try:
        result = handler(config.parameters, config.seed)
        for name, (header, rows) in result.tables.items():
            emit_csv(os.path.join(out, f"{name}.csv"), header, rows)
        for name, x, y, xlabel, ylabel, logx, logy in result.plots:
            emit_svg(os.path.join(out, f"{name}.svg"), x, y, xlabel, ylabel, logx, logy)
        for name, value, tolerance, passed in result.checks:
            manifest["checks"].append(
                {
                    "name": name,
                    "value": value,
                    "tolerance": None if tolerance == math.inf else tolerance,
                    "pass": passed,
                }
            )
            if not passed:
                code = 1
    except UsageError:
        manifest["elapsed_s"] = time.monotonic() - started
        emit_manifest(os.path.join(out, "manifest.json"), manifest)
        raise
    except Exception as exc:
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        code = 1
    manifest["elapsed_s"] = time.monotonic() - started
    emit_manifest(os.path.join(out, "manifest.json"), manifest)
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
        return run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        # argparse exits with 2 on bad flags; normalize
        return 2 if exc.code not in (0, None) else 0


if __name__ == "__main__":
    sys.exit(main())

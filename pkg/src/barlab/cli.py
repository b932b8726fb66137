"""Command-line front end.

Exit codes: 0 success, 2 configuration problems, 3 numerical failures
(including a vanishing-regularization sweep whose deviations fail to
decrease monotonically).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .diagnostics import cns_classify
from .envelope import (TwoWellParams, convex_envelope, envelope_slope_bounds,
                       optimal_theta, raw_energy)
from .errors import ConfigError, NumericalError
from .scenarios import (DEFAULT_MATERIAL, PRESET_NAMES, ScenarioConfig,
                        emit_figures, parse_config, preset_datum,
                        run_scenario_eps, run_scenario_limit, sweep_eps,
                        write_csv)

__all__ = ["main"]

_PRESET_BLURBS = {
    "monotone": "gap grows at unit rate over the whole horizon",
    "constant": "gap clamped at 80% of the jump threshold",
    "loading-unloading": "ramp to the midpoint, then back to zero",
    "high-unload": "overload to twice the threshold, unload but stay above it",
}


def _add_common(sp: argparse.ArgumentParser, out_help: str) -> None:
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--config", metavar="FILE", help="INI parameter file")
    group.add_argument("--preset", choices=PRESET_NAMES, help="built-in loading program")
    sp.add_argument("--steps", type=int, default=None, help="time steps (default 400)")
    sp.add_argument("--cells", type=int, default=None, help="spatial cells (default 64)")
    sp.add_argument("--seed", type=int, default=None, help="seed for randomized studies")
    sp.add_argument("--out", default=None, help=out_help)


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    if getattr(args, "config", None):
        cfg = parse_config(args.config)
    else:
        name = getattr(args, "preset", None) or "monotone"
        cfg = ScenarioConfig(material=DEFAULT_MATERIAL,
                             datum=preset_datum(name, DEFAULT_MATERIAL))
    overrides = {}
    if getattr(args, "steps", None) is not None:
        overrides["steps"] = args.steps
    if getattr(args, "cells", None) is not None:
        overrides["cells"] = args.cells
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


def _prepare_out_file(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _cmd_simulate_limit(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    traj = run_scenario_limit(cfg)
    m = cfg.material
    print(f"horizon T = {traj.times[-1]:g}, steps = {traj.times.size - 1}")
    print(f"sigma(T) = {traj.sigma[-1]:.12g}")
    print(f"l(T)     = {traj.l[-1]:.12g}")
    print(f"E(T)     = {traj.E_closed[-1]:.12g}")
    print(f"t0 = {traj.t0:.12g}, t0* = {traj.t0_star:.12g}")
    if args.out:
        _prepare_out_file(args.out)
        e = traj.sigma / m.a1
        p_total = traj.sigma * traj.l / m.a0
        t0_flag = (traj.l == 0.0).astype(float)
        saturated = (np.abs(traj.sigma) >= m.yield_stress - 1e-9).astype(float)
        write_csv(args.out,
                  ("t", "J", "sigma", "l", "E_closed", "E_integrated",
                   "e", "p_total", "t0_flag", "saturated"),
                  (traj.times, traj.J, traj.sigma, traj.l,
                   traj.E_closed, traj.E_integrated, e, p_total,
                   t0_flag, saturated))
        print(f"wrote {args.out}")
    return 0


def _cmd_simulate_eps(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    try:
        traj = run_scenario_eps(cfg, args.eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"epsilon = {traj.epsilon:g}, cells = {cfg.cells}, "
          f"steps = {traj.times.size - 1}")
    print(f"sigma(T)  = {traj.sigma[-1]:.12g}")
    print(f"l_eps(T)  = {traj.l_eps[-1]:.12g}")
    print(f"energy(T) = {traj.energy[-1]:.12g}")
    print(f"max |energy balance residual| = {np.max(np.abs(traj.eb_residual)):.3e}")
    if args.out:
        _prepare_out_file(args.out)
        write_csv(args.out,
                  ("t", "J", "sigma", "Theta_mean", "l_eps", "energy",
                   "work_cum", "eb_residual"),
                  (traj.times, traj.J, traj.sigma, traj.theta.mean(axis=1),
                   traj.l_eps, traj.energy, traj.work_cum, traj.eb_residual))
        print(f"wrote {args.out}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    result = cns_classify(cfg.datum, cfg.material, steps=cfg.steps)
    payload = {
        "verdict": result.verdict,
        "witness_pair": list(result.witness) if result.witness is not None else None,
        "t0": result.t0,
        "t0_star": result.t0_star,
        "max_eb_residual": result.max_eb_residual,
        "flow_rule_violations": result.flow_rule_violations,
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        _prepare_out_file(args.out)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_sweep_eps(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    if args.eps_list:
        try:
            eps = tuple(float(p) for p in args.eps_list.split(",") if p.strip())
        except ValueError as exc:
            raise ConfigError(f"--eps-list {args.eps_list!r} is not a number list") from exc
        cfg = replace(cfg, eps_list=eps)
    if not cfg.eps_list:
        raise ConfigError("provide eps_list via the config [run] section or --eps-list")
    report = sweep_eps(cfg)
    print(f"{'eps':>10} {'sup|dsigma|':>14} {'sup|dl|':>14} {'sup|dE|':>14}")
    for e, ds, dl, de in zip(report.eps, report.sup_sigma_dev,
                             report.sup_l_dev, report.sup_energy_dev):
        print(f"{e:>10g} {ds:>14.6e} {dl:>14.6e} {de:>14.6e}")
    flags = (report.sigma_monotone, report.l_monotone, report.energy_monotone)
    print(f"monotone decrease: sigma={flags[0]} l={flags[1]} energy={flags[2]}")
    out = args.out or cfg.out_dir
    if out:
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "eps_sweep.csv")
        write_csv(path, ("eps", "sup_sigma_dev", "sup_l_dev", "sup_energy_dev"),
                  (report.eps, report.sup_sigma_dev, report.sup_l_dev,
                   report.sup_energy_dev))
        print(f"wrote {path}")
    if not all(flags):
        print("error: sweep deviations do not decrease monotonically", file=sys.stderr)
        return 3
    return 0


def _cmd_emit_figures(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    for path in emit_figures(cfg, out_dir=args.out):
        print(f"wrote {path}")
    return 0


def _cmd_envelope_table(args: argparse.Namespace) -> int:
    try:
        p = TwoWellParams(a=args.a, b=args.b, K=args.K)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.n < 2 or args.xi_max <= args.xi_min:
        raise ConfigError("need n >= 2 and xi-min < xi-max")
    xi = np.linspace(args.xi_min, args.xi_max, args.n)
    xi1, xi2, slope = envelope_slope_bounds(p)
    cols = (xi, raw_energy(p, xi), convex_envelope(p, xi), optimal_theta(p, xi))
    header = ("xi", "raw", "envelope", "theta_star")
    if args.out:
        _prepare_out_file(args.out)
        write_csv(args.out, header, cols)
        print(f"# kinks: xi1 = {xi1!r}, xi2 = {xi2!r}; affine slope = {slope!r}")
        print(f"wrote {args.out}")
    else:
        print(",".join(header))
        for row in zip(*cols):
            print(",".join(repr(float(v)) for v in row))
    return 0


def _cmd_preset_list(args: argparse.Namespace) -> int:
    for name in PRESET_NAMES:
        print(f"{name:18s} {_PRESET_BLURBS[name]}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barlab",
        description="Quasi-static damage of a 1D bar, its effective threshold "
                    "model, and a plasticity-vs-damage classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate-limit", help="run the effective threshold model")
    _add_common(sp, out_help="CSV file for the trajectory")
    sp.set_defaults(func=_cmd_simulate_limit)

    sp = sub.add_parser("simulate-eps", help="run the regularized bar model")
    _add_common(sp, out_help="CSV file for the trajectory")
    sp.add_argument("--eps", type=float, required=True, help="regularization parameter")
    sp.set_defaults(func=_cmd_simulate_eps)

    sp = sub.add_parser("classify", help="classify the loading path, JSON verdict")
    _add_common(sp, out_help="JSON file for the verdict")
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("sweep-eps", help="compare regularized runs against the limit")
    _add_common(sp, out_help="directory for the sweep CSV")
    sp.add_argument("--eps-list", metavar="E1,E2,...", default=None,
                    help="strictly decreasing epsilon values")
    sp.set_defaults(func=_cmd_sweep_eps)

    sp = sub.add_parser("emit-figures", help="write plot data for one scenario")
    _add_common(sp, out_help="directory for the figure CSVs")
    sp.set_defaults(func=_cmd_emit_figures)

    sp = sub.add_parser("envelope-table", help="tabulate the two-well density and its envelope")
    sp.add_argument("--a", type=float, default=0.1, help="weak-well modulus")
    sp.add_argument("--b", type=float, default=1.0, help="strong-well modulus")
    sp.add_argument("--K", type=float, default=2.0, help="weak-well offset")
    sp.add_argument("--xi-min", dest="xi_min", type=float, default=0.0)
    sp.add_argument("--xi-max", dest="xi_max", type=float, default=6.0)
    sp.add_argument("--n", type=int, default=121, help="number of strain samples")
    sp.add_argument("--out", default=None, help="CSV file (default: stdout)")
    sp.set_defaults(func=_cmd_envelope_table)

    sp = sub.add_parser("preset-list", help="list built-in loading programs")
    sp.set_defaults(func=_cmd_preset_list)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line interface.

Exit codes: 0 success, 2 input or validation error, 3 numerical
non-convergence, 4 oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import config as cfgmod
from . import export, oracle, simulate, trends
from .exceptions import (
    ConfigError,
    GridTooLargeError,
    InvalidParameterError,
    NonConvergenceError,
    UndefinedKappaError,
    UnknownTopicError,
)
from .solver import Action, policy_thresholds, solve

logger = logging.getLogger("informatics_game")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3
EXIT_ORACLE_MISMATCH = 4

ORACLE_ATOL = 1e-8


def _load_run_config(args):
    if args.config and args.preset:
        raise ConfigError("--config/--preset", "give one, not both")
    if args.config:
        cfg = cfgmod.load_config(args.config)
    elif args.preset:
        cfg = cfgmod.preset(args.preset)
    else:
        cfg = cfgmod.preset("fig4a")
    if getattr(args, "grid", None) is not None:
        cfg.model.grid_points = args.grid
    if getattr(args, "tolerance", None) is not None:
        cfg.solver.tolerance = args.tolerance
    if getattr(args, "seed", None) is not None:
        cfg.simulate.seed = args.seed
    if getattr(args, "trials", None) is not None:
        cfg.simulate.trials = args.trials
    if getattr(args, "horizon", None) is not None:
        cfg.simulate.horizon = args.horizon
    if getattr(args, "format", None) is not None:
        cfg.output.format = args.format
    if getattr(args, "out", None) is not None:
        cfg.output.directory = args.out
    return cfgmod.validate(cfg)


def cmd_solve(args):
    cfg = _load_run_config(args)
    model = cfg.build_model()
    result = solve(model, cfg.solver.tolerance, cfg.solver.max_iterations)
    paths = export.write_solve_result(result, cfg.output.directory, cfg, cfg.output.format)
    fractions = result.action_fractions()
    print(f"iterations: {result.iterations}")
    print(f"residual: {result.sup_norm_residual:.3e}")
    print("policy fractions: " + ", ".join(
        f"{a.label}={fractions[a]:.4f}" for a in Action))
    th = policy_thresholds(result)
    print(f"theta_bar: {'absent' if th.theta_bar is None else f'{th.theta_bar:g}'}")
    print(f"wrote {len(paths)} files to {cfg.output.directory}")
    return EXIT_OK


def cmd_simulate(args):
    cfg = _load_run_config(args)
    model = cfg.build_model()
    if args.policy:
        theta, eps, codes = export.read_policy_csv(args.policy)
        if (theta.shape != model.grid.theta_values.shape
                or eps.shape != model.grid.epsilon_values.shape
                or not np.allclose(theta, model.grid.theta_values, atol=1e-12)
                or not np.allclose(eps, model.grid.epsilon_values, atol=1e-12)):
            raise InvalidParameterError(f"{args.policy}: policy grid does not match the config grid")
        optimal = codes
    else:
        optimal = solve(model, cfg.solver.tolerance, cfg.solver.max_iterations).policy

    shape = model.grid.shape
    policies = {
        "optimal": optimal,
        "always_stay": np.full(shape, Action.STAY, dtype=np.int8),
        "always_new_topic": np.full(shape, Action.NEW_TOPIC, dtype=np.int8),
        "always_new_field": np.full(shape, Action.NEW_FIELD, dtype=np.int8),
    }
    sim = cfg.simulate
    summaries = simulate.compare_policies(model, policies, sim.trials, sim.horizon, sim.seed)

    out = cfg.output.directory
    os.makedirs(out, exist_ok=True)
    simulate.summaries_to_csv(summaries, os.path.join(out, "comparison.csv"))
    text = simulate.format_summaries(summaries)
    with open(os.path.join(out, "comparison.txt"), "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    traj = simulate.simulate_career(model, optimal, "draw", sim.horizon, sim.seed, trial=0)
    traj.to_csv(os.path.join(out, "trajectory.csv"))
    print(text)
    return EXIT_OK


def cmd_oracle_check(args):
    cfg = _load_run_config(args)
    model = cfg.build_model()
    if model.grid.n_cells > oracle.ENUMERATE_MAX_CELLS:
        raise ConfigError("model.grid_points", f"oracle check needs at most "
                          f"{oracle.ENUMERATE_MAX_CELLS} cells, grid has {model.grid.n_cells}")
    # solve tighter than the comparison tolerance
    result = solve(model, min(cfg.solver.tolerance, ORACLE_ATOL / 100), cfg.solver.max_iterations)
    best, best_policy = oracle.enumerate_and_maximize(model)
    diff = np.abs(best - result.value)
    theta, eps = model.grid.theta_values, model.grid.epsilon_values
    if np.all(diff < ORACLE_ATOL):
        print(f"oracle check passed: {3 ** model.grid.n_cells} policies, "
              f"max |diff| = {diff.max():.3e}")
        return EXIT_OK
    print("oracle check FAILED", file=sys.stderr)
    print("theta,epsilon,solver_value,oracle_value,abs_diff", file=sys.stderr)
    for i, j in zip(*np.nonzero(diff >= ORACLE_ATOL)):
        print(f"{theta[i]:.17g},{eps[j]:.17g},{result.value[i, j]:.17g},"
              f"{best[i, j]:.17g},{diff[i, j]:.3e}", file=sys.stderr)
    return EXIT_ORACLE_MISMATCH


def cmd_trends(args):
    scheme = trends.read_scheme(args.scheme) if args.scheme else trends.DEFAULT_SCHEME
    ads = trends.read_coded_ads(args.ads)
    calendar = trends.read_scheme(args.calendar) if args.calendar else None
    tm = trends.trend_matrix(ads, scheme)
    os.makedirs(args.out, exist_ok=True)
    tm.to_long_csv(os.path.join(args.out, "trend_long.csv"))
    tm.to_series_csvs(os.path.join(args.out, "series"))
    with open(os.path.join(args.out, "ads_per_issue.csv"), "w", encoding="utf-8") as fh:
        fh.write("issue,count\n")
        for issue, count in trends.ads_per_issue(ads, calendar):
            fh.write(f"{issue},{count}\n")
    for note in tm.warnings:
        print(f"warning: {note}", file=sys.stderr)
    print(f"{len(ads)} ads, {len(tm.years)} years, {len(tm.categories)} categories -> {args.out}")
    return EXIT_OK


def cmd_kappa(args):
    report = trends.cohens_kappa(trends.read_coder_table(args.coders))
    text = json.dumps(report.as_dict(), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _add_model_flags(p, grid_default=None):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="PATH", help="JSON run configuration")
    src.add_argument("--preset", choices=sorted(cfgmod.PRESETS), help="built-in figure preset")
    p.add_argument("--grid", type=int, default=grid_default, metavar="N", help="grid points per axis")
    p.add_argument("--tolerance", type=float, metavar="X", help="value-iteration tolerance")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="informatics-game",
        description="Solve and simulate the research career-choice model; "
                    "compute job-ad trend statistics.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a model and write policy maps")
    _add_model_flags(p)
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--format", choices=cfgmod.OUTPUT_FORMATS)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="Monte Carlo comparison of policies")
    _add_model_flags(p)
    p.add_argument("--policy", metavar="FILE", help="policy.csv written by 'solve'")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--trials", type=int, metavar="N")
    p.add_argument("--horizon", type=int, metavar="N")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle-check", help="compare the solver to brute-force enumeration")
    _add_model_flags(p, grid_default=3)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("trends", help="yearly topic proportions from coded ads")
    p.add_argument("--ads", required=True, metavar="CSV")
    p.add_argument("--scheme", metavar="FILE", help="category codes, one per line")
    p.add_argument("--calendar", metavar="FILE", help="issue identifiers, one per line")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_trends)

    p = sub.add_parser("kappa", help="Cohen's kappa for two coders")
    p.add_argument("--coders", required=True, metavar="CSV")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_kappa)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidParameterError, UnknownTopicError, UndefinedKappaError,
            GridTooLargeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())

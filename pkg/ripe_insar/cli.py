# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import argparse
import sys

from glob import glob
from os import makedirs
from os.path import isdir, join
from typing import List, Optional

import numpy as np
import pandas as pd
from ovos_utils import LOG

from ripe_insar.baselines import direct_phases, emi_phases
from ripe_insar.config import dump_run_config, load_run_config
from ripe_insar.errors import ConfigError, RipeError
from ripe_insar.evaluation import DAYS_PER_YEAR, phase_to_displacement, \
    run_monte_carlo
from ripe_insar.persistence import read_curves, read_stack, read_state, \
    write_curves, write_phase_series, write_stack, write_state
from ripe_insar.ripe import ProgressiveEstimator, WeightVector, \
    joint_optimal_weights, model_weight_inputs, optimal_weights, run_windowed
from ripe_insar.schema.evaluation import METHOD_ALIASES, Method, \
    SENTINEL1_WAVELENGTH_M, parse_method
from ripe_insar.schema.run import RunConfig
from ripe_insar.simulator import derive_trial_seed, sample_coherence, \
    simulate_stack
from ripe_insar.version import __version__

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

PHASES_CSV = "phases.csv"
STATE_FILE = "state.bin"
RUN_METADATA = "run.meta"
SIMULATE_METADATA = "simulate.meta"

DEFAULTS_HELP = """
defaults: preset sicily-c-band, epochs 220, spacing-days 6, looks 200,
trials 500, seed 0, methods ripe,ripe-nocal,emi, beta exp(-spacing/11),
alpha 1, calibration_cadence 1, stable_mode accumulate, snapshot_epoch 10,
emi_floor 0.05, emi_shrinkage 0.05, window 10, wavelength_m 0.05546 (C-band),
workers 1. Config keys may be overridden with RIPE_<KEY> environment
variables; command-line flags take precedence over both.
"""


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="key = value run configuration file")
    parser.add_argument("--preset", help="built-in coherence model name")
    parser.add_argument("--methods", help="comma separated estimators: " +
                        ", ".join(METHOD_ALIASES))
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--looks", type=int)
    parser.add_argument("--spacing-days", type=float)
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--same-seed", action="store_true", default=None,
                        help="use the base seed for every trial (diagnostic)")
    parser.add_argument("--log-level", default="INFO")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="ripe", description="Progressive InSAR phase estimation",
        epilog=DEFAULTS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[common],
                                   help="write simulated stack dumps")
    simulate.add_argument("--count", type=int, default=1,
                          help="number of stacks (trial indices 0..count-1)")

    commands.add_parser("run", parents=[common],
                        help="Monte Carlo bias/std curves")

    estimate = commands.add_parser("estimate", parents=[common],
                                   help="estimate phases of one stack")
    estimate.add_argument("stack", nargs="?",
                          help="stack dump to estimate")
    estimate.add_argument("--method", default="ripe")
    estimate.add_argument("--append", metavar="ACQUISITION_FILE",
                          help="continue a persisted estimation with new "
                               "acquisitions")

    report = commands.add_parser("report", parents=[common],
                                 help="summarize curve CSVs")
    report.add_argument("paths", nargs="*",
                        help="curve CSVs or directories (default: --out)")
    report.add_argument("--start-day", type=float, default=200.0)
    report.add_argument("--end-day", type=float, default=1300.0)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    return {"preset": args.preset, "methods": args.methods,
            "trials": args.trials, "seed": args.seed, "looks": args.looks,
            "spacing_days": args.spacing_days, "epochs": args.epochs,
            "workers": args.workers, "out": args.out,
            "same_seed": args.same_seed}


def cmd_simulate(config: RunConfig, count: int = 1) -> List[str]:
    """
    Write `count` simulated stacks and a metadata sidecar.
    @param config: run configuration
    @param count: number of stacks
    @return: written stack paths
    """
    sim = config.simulation_config()
    makedirs(config.out, exist_ok=True)
    paths, seeds = list(), list()
    for index in range(count):
        seed = sim.base_seed if sim.same_seed else \
            derive_trial_seed(sim.base_seed, index)
        stack = simulate_stack(sim.simulated_model, sim.timeline, sim.looks,
                               seed)
        path = join(config.out, f"stack_{index:04d}.bin")
        write_stack(path, stack)
        paths.append(path)
        seeds.append(seed)
    with open(join(config.out, SIMULATE_METADATA), "w",
              encoding="utf-8") as f:
        f.write(dump_run_config(config, [("seeds", {
            "derivation": "SeedSequence([seed, trial_index])",
            "trial_seeds": seeds})]))
    LOG.info(f"Wrote {count} stack(s) to {config.out}")
    return paths


def cmd_run(config: RunConfig) -> List[str]:
    """
    Run the Monte Carlo study and write one curve CSV per method plus the
    run metadata.
    @param config: run configuration
    @return: written CSV paths
    """
    sim = config.simulation_config()
    curves = run_monte_carlo(sim, config.methods,
                             config.estimator_settings(),
                             config.wavelength_m, config.workers)
    makedirs(config.out, exist_ok=True)
    paths = list()
    for curve in curves:
        path = join(config.out, f"curves_{curve.method.value}.csv")
        write_curves(path, curve)
        paths.append(path)
    seeds = [sim.base_seed if sim.same_seed else
             derive_trial_seed(sim.base_seed, i) for i in range(sim.trials)]
    results = [("result", {"method": c.method, "trials": c.trials,
                           "excluded_trials": c.excluded}) for c in curves]
    results.append(("seeds", {"derivation": "SeedSequence([seed, "
                                            "trial_index])",
                              "trial_seeds": seeds}))
    with open(join(config.out, RUN_METADATA), "w", encoding="utf-8") as f:
        f.write(dump_run_config(config, results))
    LOG.info(f"Wrote {len(paths)} curve file(s) to {config.out}")
    return paths


def _estimate_stack(config: RunConfig, method: Method, stack):
    if method == Method.EMI:
        return emi_phases(sample_coherence(stack), config.emi_config())
    if method == Method.DIRECT:
        return direct_phases(stack)
    if method in (Method.WINDOW, Method.WINDOW_JOINT):
        R, r_y, r_s = model_weight_inputs(config.coherence_model(),
                                          stack.timeline.spacing,
                                          config.window)
        weights: WeightVector = optimal_weights(R, r_y) \
            if method == Method.WINDOW else joint_optimal_weights(R, r_y, r_s)
        return run_windowed(stack, weights)
    raise ValueError(f"Unsupported method: {method}")


def cmd_estimate(config: RunConfig, stack_path: Optional[str] = None,
                 method: str = "ripe",
                 append_path: Optional[str] = None) -> str:
    """
    Estimate the phase series of one stack, or extend a persisted recursive
    estimation with new acquisitions.
    @param config: run configuration (estimator settings, output directory)
    @param stack_path: stack dump for a fresh estimation
    @param method: estimator name
    @param append_path: stack dump holding new acquisitions to append
    @return: path of the phase CSV
    """
    method = parse_method(method)
    recursive = method in (Method.RIPE_CALIBRATED, Method.RIPE_UNCALIBRATED)
    csv_path = join(config.out, PHASES_CSV)
    state_path = join(config.out, STATE_FILE)
    if append_path:
        if not recursive:
            raise ValueError(f"--append needs a recursive method, got "
                             f"{method.value}")
        ripe_config = config.ripe_config(
            calibrate=method == Method.RIPE_CALIBRATED)
        state, last_time = read_state(state_path, ripe_config)
        new = read_stack(append_path)
        if not np.isnan(last_time) and new.times[0] <= last_time:
            raise ValueError(f"appended acquisitions start at day "
                             f"{new.times[0]}, not after day {last_time}")
        estimator = ProgressiveEstimator(ripe_config, state)
        first_epoch = state.epoch + 1
        for y, time in zip(new.samples, new.times):
            estimator.ingest(y, time)
        write_phase_series(csv_path, estimator.series, append=True,
                           first_epoch=first_epoch)
        write_state(state_path, estimator.state, ripe_config, new.times[-1])
        LOG.info(f"Appended {new.epochs} acquisition(s); state at epoch "
                 f"{estimator.state.epoch}")
        return csv_path

    if not stack_path:
        raise ValueError("a stack file is required unless --append is used")
    stack = read_stack(stack_path)
    if stack.epochs < 2:
        raise ValueError("estimation needs at least 2 acquisitions")
    if recursive:
        ripe_config = config.ripe_config(
            calibrate=method == Method.RIPE_CALIBRATED)
        estimator = ProgressiveEstimator(ripe_config)
        for y, time in zip(stack.samples, stack.times):
            estimator.ingest(y, time)
        series = estimator.series
        write_state(state_path, estimator.state, ripe_config,
                    stack.times[-1])
    else:
        series = _estimate_stack(config, method, stack)
        series.times = stack.times
    write_phase_series(csv_path, series)
    LOG.info(f"Wrote {len(series)} phase(s) to {csv_path}")
    return csv_path


def summarize_curves(frame: pd.DataFrame, start_day: float = 200.0,
                     end_day: float = 1300.0,
                     wavelength: float = SENTINEL1_WAVELENGTH_M) -> \
        pd.DataFrame:
    """
    Per-method summary of curve tables. Drift is fitted to the unwrapped
    bias.
    @param frame: concatenated curve CSV rows
    @param start_day: drift fit start and late-bias window start
    @param end_day: drift fit end
    @param wavelength: radar wavelength in meters the curves were made with
    @return: one row per method
    """
    rows = list()
    for method, group in frame.groupby("method", sort=False):
        group = group.sort_values("epoch")
        unwrapped = phase_to_displacement(
            np.unwrap(group.bias_rad.to_numpy()), wavelength)
        fit = ((group.time_days >= start_day) &
               (group.time_days <= end_day)).to_numpy()
        drift = np.nan
        if np.count_nonzero(fit) >= 2:
            drift = np.polyfit(group.time_days.to_numpy()[fit],
                               unwrapped[fit], 1)[0] * DAYS_PER_YEAR
        late = group[group.time_days >= start_day]
        rows.append({"method": method,
                     "epochs": len(group),
                     "final_bias_mm": group.bias_mm.iloc[-1],
                     "drift_mm_per_yr": drift,
                     "max_abs_bias_mm_late": late.bias_mm.abs().max()
                     if len(late) else np.nan,
                     "mean_std_mm": group.std_mm.mean(),
                     "mean_coh_short": group.mean_coh_short.mean(),
                     "mean_coh_long": group.mean_coh_long.mean()})
    return pd.DataFrame(rows)


def cmd_report(paths: List[str], start_day: float = 200.0,
               end_day: float = 1300.0,
               wavelength: float = SENTINEL1_WAVELENGTH_M) -> str:
    """
    Human-readable summary table of curve CSVs.
    @param paths: CSV files or directories containing `curves_*.csv`
    @return: formatted table
    """
    files = list()
    for path in paths:
        if isdir(path):
            files.extend(sorted(glob(join(path, "curves_*.csv"))))
        else:
            files.append(path)
    if not files:
        raise ValueError(f"no curve CSVs found in {paths}")
    summary = summarize_curves(read_curves(files), start_day, end_day,
                               wavelength)
    return summary.to_string(index=False, float_format=lambda v: f"{v:.3f}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    LOG.set_level(args.log_level.upper())
    try:
        config = load_run_config(args.config, _overrides(args))
        if args.command == "simulate":
            for path in cmd_simulate(config, args.count):
                print(path)
        elif args.command == "run":
            for path in cmd_run(config):
                print(path)
        elif args.command == "estimate":
            print(cmd_estimate(config, args.stack, args.method, args.append))
        elif args.command == "report":
            print(cmd_report(args.paths or [config.out], args.start_day,
                             args.end_day, config.wavelength_m))
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RipeError, OSError) as e:
        print(f"{args.command} failed: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

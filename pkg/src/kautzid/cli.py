"""Command line entry point: ``kautzid <command> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .adaptive import fir_identify, lms_identify
from .cost import cost_model
from .experiments import (
    ExperimentConfig,
    load_config,
    run_ensemble_experiment,
    run_monte_carlo,
    run_sdof_experiment,
    write_report,
)
from .kautz import KautzBank, kautz_model_impulse_response
from .prony import estimate_poles, poles_for_order
from .signals import frf_to_impulse_response, normalized_error
from .systems import SdofParams, sdof_impulse_response

log = logging.getLogger("kautzid")


def _config(args, **extra) -> ExperimentConfig:
    overrides = {"seed": args.seed, **extra}
    if args.config:
        return load_config(args.config, **overrides)
    return ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})


def _setup_logging(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(out / "run.log", mode="w")
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.addHandler(handler)
    root.setLevel(logging.INFO)


def cmd_sdof(args):
    report = run_sdof_experiment(_config(args, training=args.training, monte_carlo_trials=None))
    return write_report(report, args.out)


def cmd_montecarlo(args):
    report = run_monte_carlo(_config(args, monte_carlo_trials=args.trials))
    return write_report(report, args.out)


def cmd_ensemble(args):
    if not args.proxy and not args.data_dir and not args.config:
        raise ValueError("ensemble needs --proxy or --data-dir")
    config = _config(args, data_dir=None if args.proxy else args.data_dir, test_index=args.test_index)
    return write_report(run_ensemble_experiment(config), args.out)


def cmd_poles(args):
    ensemble = io.read_ensemble_dir(args.data_dir)
    poles = estimate_poles(ensemble, args.pairs, args.order)
    path = Path(args.out) / "poles.csv"
    io.write_poles_csv(path, poles)
    return [path]


def cmd_identify(args):
    if args.plant:
        plant = io.read_impulse_response_csv(args.plant)
    else:
        plant = sdof_impulse_response(SdofParams(args.f0, args.theta), args.sample_rate, args.length)
    out = Path(args.out)
    if args.kind == "kautz":
        if not args.poles:
            raise ValueError("identify --kind kautz needs --poles")
        poles = io.read_poles_csv(args.poles)
        bank = KautzBank(poles_for_order(poles, args.order) if args.order else poles)
        run = lms_identify(bank, plant, mu=args.mu, steps=args.steps, seed=args.seed or 0)
        weights, history = run.weights, run.error_history
        model = kautz_model_impulse_response(bank, weights, len(plant), plant.sample_rate_hz)
    else:
        fir = fir_identify(plant, args.order or 100, mu=args.mu, steps=args.steps, seed=args.seed or 0)
        weights, history = fir.coefficients, None
        model = fir.impulse_response(len(plant), plant.sample_rate_hz)
    paths = [out / "weights.csv"]
    io.write_weights_csv(paths[0], weights)
    if history is not None:
        paths.append(out / "error_history.csv")
        io.write_error_history_csv(paths[-1], history)
    print(f"normalized error: {normalized_error(plant, model):.6g}")
    return paths


def cmd_cost(args):
    report = cost_model(args.kind, args.order)
    note = "" if report.table_formula else " (section count, not the asymptotic formula)"
    print(f"kind={report.kind} order={report.order}{note}")
    print(f"additions={report.additions}")
    print(f"multiplications={report.multiplications:g}")
    print(f"divisions={report.divisions}")
    print(f"storage={report.storage}")
    return []


def cmd_ingest(args):
    out = Path(args.out)
    paths = []
    for f in sorted(Path(args.frf_dir).glob("*.csv")):
        ir = frf_to_impulse_response(io.read_frf_csv(f), args.lowcut)
        path = out / f.name
        io.write_impulse_response_csv(path, ir)
        paths.append(path)
    if not paths:
        raise ValueError(f"no FRF CSV files in {args.frf_dir}")
    return paths


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value experiment file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--format", default="csv", choices=["csv"])

    parser = argparse.ArgumentParser(prog="kautzid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sdof", parents=[common], help="SDOF study with Kautz and FIR error curves")
    p.add_argument("--training", choices=["fixed", "random"])
    p.set_defaults(func=cmd_sdof)

    p = sub.add_parser("montecarlo", parents=[common], help="Monte-Carlo SDOF sweep")
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("ensemble", parents=[common], help="leave-one-out study over training subsets")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--proxy", action="store_true", help="use the synthetic multi-mode ensemble")
    src.add_argument("--data-dir", help="directory of impulse-response CSVs")
    p.add_argument("--test-index", type=int)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("poles", parents=[common], help="estimate and screen poles from a data directory")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--pairs", type=int, default=6)
    p.add_argument("--order", type=int, help="Prony order (default 2 x pairs)")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("identify", parents=[common], help="single adaptive identification run")
    p.add_argument("--kind", choices=["kautz", "fir"], default="kautz")
    p.add_argument("--plant", help="impulse-response CSV of the plant")
    p.add_argument("--f0", type=float, default=50.0, help="SDOF plant resonance if no --plant")
    p.add_argument("--theta", type=float, default=0.03)
    p.add_argument("--sample-rate", type=float, default=500.0)
    p.add_argument("--length", type=int, default=500)
    p.add_argument("--poles", help="pole CSV (Kautz)")
    p.add_argument("--order", type=int, help="filter order")
    p.add_argument("--mu", type=float)
    p.add_argument("--steps", type=int)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("cost", parents=[common], help="per-sample operation counts")
    p.add_argument("--kind", choices=["kautz", "fir"], required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("ingest", parents=[common], help="FRF CSV directory to impulse-response CSVs")
    p.add_argument("--frf-dir", required=True)
    p.add_argument("--lowcut", type=float, default=10.0)
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command not in ("cost",):
        _setup_logging(Path(args.out))
    try:
        written = args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"kautzid {args.command}: error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

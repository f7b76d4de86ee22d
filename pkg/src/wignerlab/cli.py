"""Command line entry point: ``wignerlab <subcommand> [flags]``.

Exit status is 0 on success, 1 when an experiment misses its threshold
(or too many trials fail) and 2 on a configuration or usage error.
"""
from __future__ import annotations

import argparse
import sys

from . import report
from .config import KINDS, ConfigError, load_config
from .experiments import RUNNERS
from .selftest import run_selftest
from .trials import TrialFailureError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style configuration file")
    common.add_argument("--seed", type=int, help="root seed (64-bit)")
    common.add_argument("--N", dest="N", help="matrix size or comma-separated list")
    common.add_argument("--trials", type=int)
    common.add_argument("--parallelism", type=int)
    common.add_argument("--out", help="write the JSON report here (default: stdout)")
    common.add_argument("--csv", help="stream per-trial observables to this CSV file")
    p = argparse.ArgumentParser(prog="wignerlab", description="Wigner matrix Monte Carlo experiments")
    sub = p.add_subparsers(dest="command", required=True)
    for kind in KINDS + ("selftest",):
        sub.add_parser(kind, parents=[common])
    return p


def _emit(rep: dict, out: str | None) -> None:
    if out:
        report.write_report(out, rep)
    else:
        sys.stdout.write(report.dumps(rep))


def _selftest(args) -> int:
    started = report.now()
    checks = run_selftest()
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.name}: {c.value:.3e} < {c.tol:.0e}", file=sys.stderr)
    passed = all(c.ok for c in checks)
    rep = report.build_report(
        "selftest", {}, passed, {"checks": len(checks)},
        [{"N": 1000, "name": c.name, "error": c.value, "tolerance": c.tol, "ok": c.ok} for c in checks],
        report.metadata(started, report.now(), []))
    if args.out:
        report.write_report(args.out, rep)
    return EXIT_OK if passed else EXIT_FAIL


def cli_run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    if args.command == "selftest":
        return _selftest(args)
    overrides = {"kind": args.command, "seed": args.seed, "N": args.N, "trials": args.trials,
                 "parallelism": args.parallelism, "out": args.out, "csv": args.csv}
    try:
        cfg = load_config(args.config, overrides=overrides)
    except ConfigError as exc:
        print(f"wignerlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    started = report.now()
    try:
        outcome = RUNNERS[cfg.kind](cfg)
    except TrialFailureError as exc:
        print(f"wignerlab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, IndexError, KeyError) as exc:
        print(f"wignerlab: invalid experiment parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    echo = {k: v for k, v in cfg.to_dict().items() if k not in ("out", "csv")}
    meta = report.metadata(started, report.now(), outcome.trial_seconds)
    meta["outputs"] = {"json": cfg.out, "csv": cfg.csv}
    rep = report.build_report(cfg.kind, echo, outcome.passed, outcome.summary, outcome.results, meta)
    try:
        _emit(rep, cfg.out or None)
        if cfg.csv and outcome.csv_columns:
            report.write_csv(cfg.csv, outcome.csv_columns, outcome.csv_rows)
    except OSError as exc:
        print(f"wignerlab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wignerlab {cfg.kind}: {'passed' if outcome.passed else 'FAILED'}", file=sys.stderr)
    return EXIT_OK if outcome.passed else EXIT_FAIL


def main() -> None:
    sys.exit(cli_run())

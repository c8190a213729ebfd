"""
Command-line front end.

Exit codes: 0 success, 1 configuration or I/O error, 2 numerical accuracy
failure.
"""
from __future__ import annotations

import argparse
import sys

from .errors import AccuracyError, ConfigError
from .experiment import ExperimentConfig, load_config, run_experiment
from .output import emit_outputs

EXIT_OK, EXIT_CONFIG, EXIT_ACCURACY = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zenolab",
        description="Survival of the initial level of a doubly driven three-level atom under "
                    "repeated projective measurements. Times are in units of the Poincare time.",
        epilog="'--n 16' means 17 reductions at t_k = k*T/16, k = 0..16, over the window T = tau_max*T_P.",
    )
    p.add_argument("--omega01", type=float, help="Rabi frequency of the 0-1 drive (default 1)")
    p.add_argument("--omega12", type=float, help="Rabi frequency of the 1-2 drive (default sqrt(15))")
    p.add_argument("--phi01", type=float, help="phase of the 0-1 drive (rad)")
    p.add_argument("--phi12", type=float, help="phase of the 1-2 drive (rad)")
    p.add_argument("--projector", choices=("partial", "full"),
                   help="partial: {P01, P2}; full: one projector per level")
    p.add_argument("--n", help="comma-separated measurement counts (default 1,2,4,8,16,64)")
    p.add_argument("--mode", choices=("free", "projective", "lindblad"))
    p.add_argument("--weight", type=float, help="delta-train bump weight (lindblad mode, default 50)")
    p.add_argument("--width", type=float, help="delta-train bump width in tau units (default 1/2000)")
    p.add_argument("--grid", type=int, help="number of tau grid points (default 401)")
    p.add_argument("--tau-max", dest="tau_max", type=float, help="end of the tau window (default 1)")
    p.add_argument("--epsilon", type=float, help="detection margin for Zeno intervals (default 1e-3)")
    p.add_argument("--raw-time", dest="raw_time", action="store_const", const=True,
                   help="append a raw time column t to the CSV files")
    p.add_argument("--config", help="key = value configuration file; flags override it")
    p.add_argument("--csv", help="directory for per-curve CSV files")
    p.add_argument("--svg", help="path of the SVG chart")
    p.add_argument("--report", help="path of the JSON run report")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    if args.config:
        return load_config(args.config, overrides)
    return ExperimentConfig.from_dict(overrides)


def format_summary(report) -> str:
    lines = [f"{'curve':>8}  {'P0(end)':>10}  {'min P0':>10}  verdict"]
    for c in report.curves:
        verdict = ""
        if c.n is not None:
            v = report.verdicts.get(c.n)
            if v is None:
                verdict = "skipped"
            else:
                spans = ", ".join(f"{iv.regime} [{iv.start:.4g}, {iv.end:.4g}]" for iv in v.intervals)
                verdict = f"{v.regime} (margin {v.margin:.4f}) {spans}".rstrip()
        lines.append(f"{c.label:>8}  {c.p0[-1]:>10.6f}  {c.p0.min():>10.6f}  {verdict}")
    lines.append(f"wall time {report.wall_time:.3f} s")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run_experiment(config)
        emit_outputs(report, config.csv, config.svg, config.report, config.raw_time)
    except ConfigError as exc:
        print(f"zenolab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AccuracyError as exc:
        print(f"zenolab: accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except OSError as exc:
        print(f"zenolab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(format_summary(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: theory curves, sweeps, staged runs, fitting, replay.

All behavior is driven by flags or by a flat ``key = value`` configuration
file (``--config``); explicit flags override file values and environment
variables are never consulted, so a command line plus its config file
fully determines every output byte.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import experiment
from .analysis import FrequencyPoint
from .theory import CorpuscularParams
from .xcontrol import PhaseSetting, TWO_PI, parse_schedule

_CONFIG_KEYS = (
    "phi0_start", "phi0_stop", "points", "delta", "alpha", "n", "seed",
    "schedule", "stages", "order", "init", "init_seed",
)


def _add_config_flags(p: argparse.ArgumentParser, stages: bool = False) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--phi0-start", type=float, dest="phi0_start", help="grid start (radians)")
    p.add_argument("--phi0-stop", type=float, dest="phi0_stop", help="grid stop, exclusive (radians)")
    p.add_argument("--points", type=int, help="number of grid points (default 32)")
    p.add_argument("--delta", type=float, help="upper-arm phase for x=-1 (default -pi/2)")
    p.add_argument("--alpha", type=float, help="beam-splitter learning rate (default 0.99)")
    p.add_argument("--n", type=int, help="photons per grid point (default 1000000)")
    p.add_argument("--seed", type=int, help="master seed (default 12345)")
    p.add_argument("--init", choices=("default", "random"), help="beam-splitter init policy")
    p.add_argument("--init-seed", type=int, dest="init_seed", help="seed for the random init policy")
    if stages:
        p.add_argument(
            "--stages",
            help="three comma-separated schedule descriptors "
            "(default fixed:-1,fixed:+1,systematic:1)",
        )
        p.add_argument("--order", help="stage execution order, e.g. 2,0,1 (default 0,1,2)")
    else:
        p.add_argument(
            "--schedule",
            help="setting schedule descriptor: fixed:+1, fixed:-1, "
            "systematic:K or random:K:seed (default fixed:+1)",
        )


def _merged_config(args: argparse.Namespace) -> experiment.ExperimentConfig:
    mapping: dict = {}
    if getattr(args, "config", None):
        mapping.update(experiment.load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            mapping[key] = value
    return experiment.config_from_mapping(mapping)


def _cmd_theory(args: argparse.Namespace) -> int:
    setting = PhaseSetting.from_delta(args.delta)
    params = CorpuscularParams(args.E, args.delta)
    step = (args.phi0_stop - args.phi0_start) / args.points
    grid = args.phi0_start + step * np.arange(args.points)
    text = experiment.theory_csv_text(grid, setting, params)
    if args.csv:
        experiment.write_theory_csv(args.csv, grid, setting, params)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _merged_config(args)
    result = experiment.run_sweep(config, csv_path=args.csv, record_path=args.records)
    if args.csv is None:
        sys.stdout.write(experiment.sweep_csv_text(result.rows))
    if args.fit:
        column = experiment.fit_column_for(config.schedule)
        delta = None if config.schedule.mode == "fixed" else config.delta
        fit = experiment.fit_rows(result.rows, column, delta=delta)
        sys.stdout.write(experiment.format_fit_report(fit, column, config.schedule.describe()))
    if args.plot:
        _plot_rows(result.rows, args.plot)
    return 0


def _cmd_stages(args: argparse.Namespace) -> int:
    config = _merged_config(args)
    result = experiment.run_stages(
        config, csv_path=args.csv, record_path=args.records, report_path=args.report
    )
    if args.csv is None:
        sys.stdout.write(experiment.stages_csv_text(result.rows))
    sys.stdout.write(experiment.format_stage_report(result))
    if args.plot:
        _plot_rows(result.rows, args.plot, staged=True)
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    rows = experiment.read_frequency_csv(args.csv)
    staged = any(r.stage is not None for r in rows)
    if staged:
        if args.stage is None:
            raise SystemExit("fit: staged CSV needs --stage to select one stage")
        rows = [r for r in rows if r.stage == args.stage]
        if not rows:
            raise SystemExit(f"fit: no rows for stage {args.stage}")
    schedule = parse_schedule(rows[0].x_mode)
    column = args.column or experiment.fit_column_for(schedule)
    delta = None if schedule.mode == "fixed" else args.delta
    fit = experiment.fit_rows(rows, column, delta=delta)
    report = experiment.format_fit_report(fit, column, rows[0].x_mode)
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(report)
    sys.stdout.write(report)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    rows = experiment.replay(args.records, csv_path=args.csv)
    staged = any(r.stage is not None for r in rows)
    report = None
    if staged:
        fits, columns, modes, stage_report = experiment.analyze_stage_rows(rows, args.delta)
        report = experiment.format_stage_report(
            fits=fits, columns=columns, modes=modes, report=stage_report, delta=args.delta
        )
    elif len({r.phi0 for r in rows}) >= 4:
        schedule = parse_schedule(rows[0].x_mode)
        column = experiment.fit_column_for(schedule)
        delta = None if schedule.mode == "fixed" else args.delta
        fit = experiment.fit_rows(rows, column, delta=delta)
        report = experiment.format_fit_report(fit, column, rows[0].x_mode)
    if report is not None:
        if args.report:
            with open(args.report, "w", newline="\n") as fh:
                fh.write(report)
        sys.stdout.write(report)
    if args.csv is None and report is None:
        text = (
            experiment.stages_csv_text(rows) if staged else experiment.sweep_csv_text(rows)
        )
        sys.stdout.write(text)
    return 0


def _plot_rows(rows: list[FrequencyPoint], path: str, staged: bool = False) -> None:
    # non-normative convenience output; the CSV is the contract
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    if staged:
        # one panel: stages laid side by side in execution order
        span = max(r.phi0 for r in rows) - min(r.phi0 for r in rows)
        width = span + span / max(len(rows) - 1, 1)
        pos_of = {}
        for r in rows:
            pos_of.setdefault(r.stage, len(pos_of))
        xs = [r.phi0 + pos_of[r.stage] * width for r in rows]
        for pos in pos_of.values():
            ax.axvline(pos * width, color="0.8", lw=0.8)
    else:
        xs = [r.phi0 for r in rows]
    for column, marker in (("f0_plus", "o"), ("f0_minus", "s"), ("f0_ungrouped", "^")):
        ys = [getattr(r, column) for r in rows]
        if all(math.isnan(y) for y in ys):
            continue
        ax.plot(xs, ys, marker, ms=3, lw=0, label=column)
    ax.set_xlabel("phi0 (radians, stages offset)" if staged else "phi0 (radians)")
    ax.set_ylabel("normalized frequency at D0")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzsim",
        description="Event-by-event two-setting Mach-Zehnder interferometer simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory", help="emit oracle curves as CSV")
    p.add_argument("--phi0-start", type=float, dest="phi0_start", default=0.0)
    p.add_argument("--phi0-stop", type=float, dest="phi0_stop", default=TWO_PI)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--delta", type=float, default=-math.pi / 2.0)
    p.add_argument("--E", type=float, default=0.333, help="wrong-association rate for the corpuscular curves")
    p.add_argument("--csv", "-o", help="output path (stdout when omitted)")
    p.set_defaults(func=_cmd_theory)

    p = sub.add_parser("sweep", help="run a phase sweep")
    _add_config_flags(p)
    p.add_argument("--csv", "-o", help="sweep CSV path (stdout when omitted)")
    p.add_argument("--records", help="also stream per-event records to this path")
    p.add_argument("--fit", action="store_true", help="print a fringe fit of the sweep")
    p.add_argument("--plot", help="write a plot of the measured frequencies (non-normative)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("stages", help="run the three-stage protocol in one physical run")
    _add_config_flags(p, stages=True)
    p.add_argument("--csv", "-o", help="stages CSV path (stdout when omitted)")
    p.add_argument("--records", help="also stream per-event records to this path")
    p.add_argument("--report", help="write the stage report to this path")
    p.add_argument("--plot", help="write a plot of the measured frequencies (non-normative)")
    p.set_defaults(func=_cmd_stages)

    p = sub.add_parser("fit", help="fit a fringe to a sweep or stages CSV")
    p.add_argument("csv", help="CSV produced by sweep, stages or replay")
    p.add_argument("--column", choices=("f0_plus", "f0_minus", "f0_ungrouped"),
                   help="frequency column (default chosen from the schedule)")
    p.add_argument("--stage", type=int, help="stage to fit when the CSV is staged")
    p.add_argument("--delta", type=float, default=-math.pi / 2.0)
    p.add_argument("--output", "-o", help="also write the fit report here")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("replay", help="recompute frequencies and fits from an event-record file")
    p.add_argument("records", help="record file produced by sweep/stages --records")
    p.add_argument("--csv", "-o", help="write the recomputed frequency CSV here")
    p.add_argument("--report", help="write the fit/stage report here")
    p.add_argument("--delta", type=float, default=-math.pi / 2.0)
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"mzsim: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line interface.

Subcommands::

    point-loop   integrate the point hysteresis model, write a CSV
    cavity-run   execute a configured cavity run
    validate     run the built-in physics health checks
    report       print the derived quantities of a configuration
    version      print the package version

Exit codes: 0 success, 1 usage error, 2 configuration error,
3 numerical abort (instability detector tripped).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .cavity import NumericalAbort, consistency_report, run
from .config import ConfigError, build_config, load_config, merge_overrides, \
    parse_text
from .point_model import (ChannelParams, ChannelSet, Channel, SineDrive,
                          loop_metrics, run_drive)

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_CONFIG",
           "EXIT_NUMERICAL"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ferrocav",
                     description="Hysteretic media in a PEC cavity.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("point-loop",
                       help="integrate the point hysteresis model")
    p.add_argument("--amplitude", type=float, default=2.0e6,
                   help="drive amplitude [V/m] (default 2e6)")
    p.add_argument("--frequency", type=float, default=250.0,
                   help="drive frequency [Hz] (default 250)")
    p.add_argument("--periods", type=float, default=3.0,
                   help="number of drive periods (default 3)")
    p.add_argument("--steps-per-period", type=int, default=2000,
                   help="integration steps per period (default 2000)")
    p.add_argument("--alpha", type=float, default=3.6e4,
                   help="saturation scale [V/m]")
    p.add_argument("--beta", type=float, default=2.0e-6,
                   help="inverse drive-field scale [m/V]")
    p.add_argument("--xi", type=float, default=1.3e5,
                   help="inverse response scale [m^2/C]")
    p.add_argument("--kappa", type=float, default=0.5,
                   help="branch weight [-]")
    p.add_argument("--theta", type=float, default=0.5,
                   help="branch weight [-]")
    p.add_argument("--output", metavar="CSV",
                   help="trace output path (t,E,P,H,M,s_psi,s_drive)")
    p.add_argument("--metrics", action="store_true",
                   help="print loop metrics of the final cycle")

    p = sub.add_parser("cavity-run", help="execute a configured cavity run")
    p.add_argument("--config", required=True, metavar="CFG",
                   help="run configuration file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VAL",
                   dest="overrides", help="override a configuration key")
    p.add_argument("--output", metavar="DIR",
                   help="output directory (overrides output.dir)")

    p = sub.add_parser("validate",
                       help="run the built-in physics health checks")
    p.add_argument("--fast", action="store_true",
                   help="shorten the long field runs")

    p = sub.add_parser("report",
                       help="print the derived quantities of a config")
    p.add_argument("--config", required=True, metavar="CFG",
                   help="run configuration file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VAL",
                   dest="overrides", help="override a configuration key")

    sub.add_parser("version", help="print the package version")
    return parser


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------

def _load(args) -> "RunConfig":
    with open(args.config, "r", encoding="utf-8") as fh:
        mapping = parse_text(fh.read())
    mapping = merge_overrides(mapping, args.overrides)
    if getattr(args, "output", None):
        mapping["output.dir"] = args.output
    return build_config(mapping)


def _cmd_point_loop(args) -> int:
    params = ChannelParams(Channel.PE, alpha=args.alpha, beta=args.beta,
                           xi=args.xi, kappa=args.kappa, theta=args.theta)
    drive = SineDrive(args.amplitude, args.frequency)
    trace = run_drive(drive, duration=args.periods / args.frequency,
                      dt=1.0 / (args.frequency * args.steps_per_period),
                      channels=ChannelSet.single(params),
                      min_steps_per_period=min(1000, args.steps_per_period))
    if args.output:
        trace.trace.to_csv(args.output)
        print(f"wrote {len(trace.trace)} rows to {args.output}")
    if args.metrics or not args.output:
        for key, value in loop_metrics(trace).items():
            print(f"{key} = {value:.6e}")
    print(f"branch transitions: {len(trace.transitions)}")
    return EXIT_OK


def _cmd_cavity_run(args) -> int:
    config = _load(args)
    result = run(config)
    for key in sorted(result.report):
        print(f"{key} = {result.report[key]}")
    for path in result.written:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .validate import format_results, run_all
    results = run_all(fast=args.fast)
    print(format_results(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


def _cmd_report(args) -> int:
    config = _load(args)
    report = consistency_report(config)
    for key in sorted(report):
        print(f"{key} = {report[key]}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "point-loop": _cmd_point_loop,
        "cavity-run": _cmd_cavity_run,
        "validate": _cmd_validate,
        "report": _cmd_report,
        "version": lambda a: (print(__version__), EXIT_OK)[1],
    }
    try:
        return handlers[args.command](args)
    except NumericalAbort as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

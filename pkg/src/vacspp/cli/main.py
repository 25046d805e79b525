"""Command line entry point.

Exit codes: 0 success, 1 invalid configuration, 2 solver failure, 3 I/O error.
"""

import argparse
import json
import sys

from ..errors import ConfigError, VacSPPError
from .config import build_config, load_config, parse_override
from .output import emit
from .runner import run

_COMMANDS = {
    "dispersion": "DispersionSweep",
    "multilayer": "MultilayerSweep",
    "cavity": "CavityModes",
    "create": "Creation",
    "compare": "Compare",
}

_EPILOG = """\
configuration: a JSON object with sections scenario, c, geometry {R, L, a},
regions {d, layers: [{eps, mu}]}, drive {branch, kappa, chi, periods},
numerics {method, rel_tol, abs_tol, max_steps, digits, steps_per_period},
params, sweep [{name, start, stop, count, scale}] and output {path, format}.
Omitted keys take per-scenario defaults (print them with --show-defaults).
All quantities are SI; set c=1 for dimensionless runs.
"""


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vacspp",
        description="Surface-mode and cavity-photon creation in time-modulated media.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, scenario in _COMMANDS.items():
        p = sub.add_parser(name, help=f"run the {scenario} scenario", epilog=_EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", metavar="PATH", help="JSON configuration file")
        p.add_argument("--out", metavar="PATH", help="output file (default: output.path or stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
        p.add_argument("--threads", type=int, default=1, metavar="N",
                       help="evaluate sweep points on N threads (default 1)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; no component is stochastic")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key by dotted path, value parsed as JSON")
        p.add_argument("--show-defaults", action="store_true",
                       help="print the default configuration and exit")
        p.add_argument("--quiet", action="store_true", help="suppress the summary on stderr")
    return parser


def _summary_text(record):
    lines = [f"{record.scenario}: {len(record.rows)} rows, config {record.config_hash[:12]}"]
    for key, val in record.summary.items():
        lines.append(f"  {key}: {val}")
    for msg in record.warnings:
        lines.append(f"  warning: {msg}")
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    scenario = _COMMANDS[args.command]
    try:
        overrides = [parse_override(s) for s in args.set]
        if args.format:
            overrides.append(("output.format", args.format))
        if args.show_defaults:
            cfg = build_config({}, scenario)
            print(json.dumps(cfg.tree, indent=2))
            return 0
        if args.threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        if args.config:
            cfg = load_config(args.config, scenario, overrides)
        else:
            cfg = build_config({}, scenario, overrides)
    except ConfigError as exc:
        print(f"vacspp: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"vacspp: cannot read config: {exc}", file=sys.stderr)
        return 3

    try:
        record = run(cfg, threads=args.threads)
    except VacSPPError as exc:
        print(f"vacspp: solver failure: {exc}", file=sys.stderr)
        return 2

    fmt = cfg.output.get("format") or "csv"
    path = args.out or cfg.output.get("path")
    try:
        text = emit(record, fmt, path)
    except OSError as exc:
        print(f"vacspp: {exc}", file=sys.stderr)
        return 3
    if path is None:
        sys.stdout.write(text)
    if not args.quiet:
        print(_summary_text(record), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

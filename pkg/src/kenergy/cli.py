"""Command line entry point.

    kenergy <suite> --config <file> [--out <dir>] [--seed <n>]

with <suite> one of geodesic, convexity, chen, bergman, lichnerowicz,
orbit, uniqueness.  Each suite reads one plain-text config (key = value,
'#' comments), writes CSV reports and a summary.txt into the output
directory, and exits nonzero when an asserted property fails.  Usage and
config errors exit with status 2 and a message naming the offending key
or line.
"""

import argparse
import os
import sys

from .experiments import COMMANDS, ExperimentConfig


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kenergy",
        description="numerical checks for K-energy convexity, geodesics, "
                    "Bergman kernels and uniqueness on rotation invariant "
                    "sphere metrics")
    sub = parser.add_subparsers(dest="suite", required=True)
    for name in ("geodesic", "convexity", "chen", "bergman",
                 "lichnerowicz", "orbit", "uniqueness"):
        p = sub.add_parser(name, help="run the %s suite" % name)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override seed")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        config = ExperimentConfig.from_file(args.config, overrides=overrides)
    except (OSError, ValueError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    os.makedirs(config.out, exist_ok=True)
    try:
        code, files = COMMANDS[args.suite](config)
    except ValueError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    for path in files:
        print("wrote %s" % path)
    print("suite %s: %s" % (args.suite, "PASS" if code == 0 else "FAIL"))
    return code


if __name__ == "__main__":
    sys.exit(main())

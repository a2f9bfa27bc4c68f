"""Command line entry point: ``ocens run|report|synth|list-methods``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..classifiers import default_members
from ..combiners import RULES
from ..dataset_io import DataError
from .config import ACTUAL_BEST, ESBE, RANDOM, TUPSO, ConfigError, load_config
from .reports import emit_reports, report_from_files
from .runner import run_experiment
from .synth import KINDS, gen_synthetic

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

DESCRIPTIONS = {
    RANDOM: "baseline: one member picked uniformly at random per dataset",
    ESBE: "member with the best positives-only 5x2 estimate (OCA or OCF)",
    TUPSO: "meta-classifier over eight aggregates of member scores",
    ACTUAL_BEST: "baseline: member with the highest test AUC per dataset",
}


def _cmd_run(args):
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.output_dir:
        config.output_dir = args.output_dir
    report = run_experiment(config)
    emit_reports(report, config.output_dir)
    print(f"{len(report.rows)}/{report.expected_cells} cells written to {config.output_dir}")
    if not report.rows:
        return EXIT_DATA
    return EXIT_PARTIAL if report.partial else EXIT_OK


def _cmd_report(args):
    try:
        report = report_from_files(args.raw)
    except (OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    emit_reports(report, args.outdir)
    return EXIT_OK


def _cmd_synth(args):
    try:
        path = gen_synthetic(args.kind, args.n_pos, args.n_neg, args.dim, args.separation,
                             args.seed, args.out)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(path)
    return EXIT_OK


def _cmd_list(args):
    for spec in default_members():
        print(f"{spec.name:24s} member: {spec.algorithm} {spec.params}")
    for rule in RULES:
        print(f"{rule:24s} fixed combining rule")
    for name in (RANDOM, ESBE, TUPSO, ACTUAL_BEST):
        print(f"{name:24s} {DESCRIPTIONS[name]}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ocens", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("report", help="re-emit tables and stats from a raw results file")
    p.add_argument("raw")
    p.add_argument("outdir")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("synth", help="write a synthetic two-class CSV")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n-pos", type=int, default=300)
    p.add_argument("--n-neg", type=int, default=300)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--separation", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("list-methods", help="list members and ensemble methods")
    p.set_defaults(func=_cmd_list)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

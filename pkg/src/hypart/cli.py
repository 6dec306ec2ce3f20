"""Command-line entry point.

    hypart partition --cdfg app.json --profile counts.json --scenarios grid.json \
        [--report out.tsv] [--history out.csv] [--figures dir] \
        [--dump-ranking ranking.tsv] [--reject-regressions]

Exit codes: 0 when every scenario meets its constraint, 2 when at least one
misses it (reports are still written), 1 on input errors.
"""

from __future__ import annotations

import argparse
import sys

from .analysis import rank_kernels, write_ranking_tsv
from .errors import HypartError
from .ingest import load_cdfg, load_profile
from .report import (
    build_report,
    format_report,
    load_scenarios,
    run_scenarios,
    write_history_csv,
    write_report_tsv,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypart",
        description="Partition an application between fine and coarse-grain reconfigurable fabrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    part = sub.add_parser("partition", help="run the partitioning engine over scenarios")
    part.add_argument("--cdfg", required=True, help="application CDFG (JSON)")
    part.add_argument("--profile", required=True, help="execution counts or trace (JSON)")
    part.add_argument("--scenarios", required=True, help="scenario list (JSON)")
    part.add_argument("--report", help="write the report table to this TSV file")
    part.add_argument("--history", help="write the per-move cost history to this CSV file")
    part.add_argument("--figures", help="render report figures into this directory")
    part.add_argument("--dump-ranking", help="write the kernel ranking to this TSV file")
    part.add_argument(
        "--reject-regressions",
        action="store_true",
        help="undo kernel moves that increase total time instead of keeping them",
    )
    return parser


def _partition(args: argparse.Namespace) -> int:
    cdfg = load_cdfg(args.cdfg)
    profile = load_profile(args.profile, cdfg)
    scenarios = load_scenarios(args.scenarios)

    if args.dump_ranking:
        with open(args.dump_ranking, "w", newline="") as fh:
            write_ranking_tsv(rank_kernels(cdfg, profile), fh)

    results = run_scenarios(
        cdfg, profile, scenarios, reject_regressions=args.reject_regressions
    )
    rows = build_report(results)

    if args.report:
        with open(args.report, "w", newline="") as fh:
            write_report_tsv(rows, fh)
    if args.history:
        with open(args.history, "w", newline="") as fh:
            write_history_csv(results, fh)
    if args.figures:
        from .figures import render_figures

        render_figures(results, rows, args.figures)

    print(format_report(rows))
    return 0 if all(row.constraint_met for row in rows) else 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "partition":
            return _partition(args)
        raise AssertionError(f"unhandled command {args.command}")
    except HypartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

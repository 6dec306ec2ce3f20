"""Scenario execution and report generation.

A scenario bundles a platform model with a timing constraint under one
label. Running a scenario list produces one report row per scenario with
the baseline (all fine-grain) cycle count, the coarse-side cycles of the
final assignment, the moved blocks, the final cycle count, and the percent
cycle reduction. Rows are ordered by label and the emitted files are byte
stable, so identical inputs always produce identical reports.

Percent reductions are truncated to one decimal, matching the precision
the reference result tables print.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import ROUND_DOWN, Decimal
from typing import IO

from .analysis import WeightTable
from .engine import EngineResult, run_engine
from .errors import SchemaError, ZeroBaseline
from .ingest import PlatformModel, ProfileData, _decode, _require_object, parse_platform
from .ir import Cdfg

REPORT_COLUMNS = [
    "label",
    "initial_cycles",
    "cycles_in_cgc",
    "moved_bbs",
    "final_cycles",
    "pct_reduction",
    "constraint_met",
]

HISTORY_COLUMNS = ["label", "step", "moved_bb", "t_fpga", "t_coarse", "t_comm", "t_total"]


@dataclass(frozen=True)
class Scenario:
    label: str
    platform: PlatformModel
    constraint: int


@dataclass(frozen=True)
class ReportRow:
    label: str
    initial_cycles: int
    cycles_in_cgc: int
    moved_bbs: tuple[int, ...]
    final_cycles: int
    pct_reduction: float
    constraint_met: bool


def pct_reduction(initial: int, final: int) -> float:
    """Percent cycle reduction, truncated to one decimal.

    A final above the initial yields a negative value rather than an error;
    a zero baseline raises ZeroBaseline.
    """
    if initial == 0:
        raise ZeroBaseline("initial cycle count is zero")
    exact = Decimal(100 * (initial - final)) / Decimal(initial)
    return float(exact.quantize(Decimal("0.1"), rounding=ROUND_DOWN))


def parse_scenarios(document: bytes | str) -> list[Scenario]:
    """Parse a scenario list: ``{"scenarios": [{label, constraint, platform}]}``."""
    data = _require_object(
        _decode(document), allowed={"version", "scenarios"}, required={"scenarios"}, what="scenarios"
    )
    if not isinstance(data["scenarios"], list) or not data["scenarios"]:
        raise SchemaError("scenarios", "expected a non-empty list")
    out: list[Scenario] = []
    labels: set[str] = set()
    for i, raw in enumerate(data["scenarios"]):
        raw = _require_object(
            raw,
            allowed={"label", "constraint", "platform"},
            required={"label", "constraint", "platform"},
            what=f"scenarios[{i}]",
        )
        label = raw["label"]
        if not isinstance(label, str) or not label:
            raise SchemaError(f"scenarios[{i}].label", "expected a non-empty string")
        if label in labels:
            raise SchemaError(f"scenarios[{i}].label", f"duplicate label {label!r}")
        labels.add(label)
        constraint = raw["constraint"]
        if isinstance(constraint, bool) or not isinstance(constraint, int) or constraint < 0:
            raise SchemaError(f"scenarios[{i}].constraint", "expected a non-negative integer")
        platform = parse_platform(json.dumps(raw["platform"]))
        out.append(Scenario(label=label, platform=platform, constraint=constraint))
    return out


def load_scenarios(path) -> list[Scenario]:
    with open(path, "rb") as fh:
        return parse_scenarios(fh.read())


def run_scenarios(
    cdfg: Cdfg,
    profile: ProfileData,
    scenarios: list[Scenario],
    weights: WeightTable | None = None,
    reject_regressions: bool = False,
) -> list[tuple[Scenario, EngineResult]]:
    """Run the engine once per scenario, ordered by label."""
    results = []
    for scenario in sorted(scenarios, key=lambda s: s.label):
        result = run_engine(
            cdfg,
            profile,
            scenario.platform,
            scenario.constraint,
            weights=weights,
            reject_regressions=reject_regressions,
        )
        results.append((scenario, result))
    return results


def build_report(results: list[tuple[Scenario, EngineResult]]) -> list[ReportRow]:
    """Project engine results into report rows (pure view, label order)."""
    rows = []
    for scenario, result in sorted(results, key=lambda pair: pair[0].label):
        rows.append(
            ReportRow(
                label=scenario.label,
                initial_cycles=result.baseline.t_total,
                cycles_in_cgc=result.cost.t_coarse,
                moved_bbs=result.state.moved_order,
                final_cycles=result.cost.t_total,
                pct_reduction=pct_reduction(result.baseline.t_total, result.cost.t_total),
                constraint_met=result.constraint_met,
            )
        )
    return rows


def write_report_tsv(rows: list[ReportRow], fh: IO[str]) -> None:
    writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.label,
                row.initial_cycles,
                row.cycles_in_cgc,
                ",".join(str(bb) for bb in row.moved_bbs),
                row.final_cycles,
                f"{row.pct_reduction:.1f}",
                "true" if row.constraint_met else "false",
            ]
        )


def write_history_csv(results: list[tuple[Scenario, EngineResult]], fh: IO[str]) -> None:
    """Dump the per-move cost trajectory; step 0 is the all-fine baseline."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(HISTORY_COLUMNS)
    for scenario, result in sorted(results, key=lambda pair: pair[0].label):
        base = result.baseline
        writer.writerow([scenario.label, 0, "", base.t_fpga, base.t_coarse, base.t_comm, base.t_total])
        for step, (bb_id, cost) in enumerate(result.history, start=1):
            writer.writerow(
                [scenario.label, step, bb_id, cost.t_fpga, cost.t_coarse, cost.t_comm, cost.t_total]
            )


def format_report(rows: list[ReportRow]) -> str:
    """Human-readable table for standard output."""
    table = [REPORT_COLUMNS]
    for row in rows:
        table.append(
            [
                row.label,
                str(row.initial_cycles),
                str(row.cycles_in_cgc),
                ",".join(str(bb) for bb in row.moved_bbs) or "-",
                str(row.final_cycles),
                f"{row.pct_reduction:.1f}",
                "yes" if row.constraint_met else "NO",
            ]
        )
    widths = [max(len(line[i]) for line in table) for i in range(len(REPORT_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in table]
    return "\n".join(lines)

"""Temporal partitioning of a DFG onto the fine-grain (FPGA-like) fabric.

A block whose operations do not all fit into the usable area budget is
time-multiplexed: ops are visited level by level (ASAP order, ascending id
within a level) and packed greedily into the current partition; when the
next op would overflow the budget, a fresh partition is opened with that op
as its first occupant. Each partition costs one full fabric reconfiguration
on top of its compute latency.

Latency model: ops sharing an ASAP level inside a partition run in
parallel, and levels execute in sequence, so a partition's latency is the
sum over its occupied levels of the slowest op at that level. A larger
budget therefore buys time only through fewer reconfigurations and more
exposed parallelism.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .errors import OpExceedsFpga
from .ingest import PlatformModel, ProfileData
from .ir import AsapLevels, BasicBlock, Dfg


@dataclass(frozen=True)
class TemporalPartitioning:
    """Result of packing one DFG into area-bounded partitions.

    Partition indices are contiguous from 1 to ``partition_count``; an empty
    DFG produces zero partitions. ``partition_area`` records the area as
    accumulated by the packing order, so the budget bound it was admitted
    under is exactly the bound it reports.
    """

    partition_of: Mapping[int, int]
    partition_count: int
    partition_area: Mapping[int, float]
    partition_latency: Mapping[int, int]


def temporal_partition(
    dfg: Dfg, levels: AsapLevels, platform: PlatformModel
) -> TemporalPartitioning:
    """Greedy level-order packing of ``dfg`` into the area budget.

    Raises OpExceedsFpga if any single op is larger than the budget; such a
    block cannot run on the fine-grain fabric at all.
    """
    budget = platform.a_fpga
    order = sorted((op for op in dfg.ops), key=lambda op: (levels.level[op.id], op.id))

    partition_of: dict[int, int] = {}
    partition_area: dict[int, float] = {}
    current = 1
    area_covered = 0.0
    for op in order:
        size = platform.op_area[op.kind]
        if size > budget:
            raise OpExceedsFpga(op.id, size, budget)
        if area_covered + size <= budget:
            area_covered += size
        else:
            current += 1
            area_covered = size
        partition_of[op.id] = current
        partition_area[current] = area_covered

    count = current if dfg.ops else 0

    # Latency: per partition, sum over occupied ASAP levels of the slowest
    # op at that level.
    slowest: dict[tuple[int, int], int] = {}
    for op in dfg.ops:
        key = (partition_of[op.id], levels.level[op.id])
        lat = platform.fpga_op_latency[op.kind]
        if lat > slowest.get(key, 0):
            slowest[key] = lat
    partition_latency = {p: 0 for p in range(1, count + 1)}
    for (p, _level), lat in slowest.items():
        partition_latency[p] += lat

    return TemporalPartitioning(
        partition_of=partition_of,
        partition_count=count,
        partition_area=partition_area,
        partition_latency=partition_latency,
    )


def fpga_block_time(
    bb: BasicBlock, tp: TemporalPartitioning, platform: PlatformModel
) -> int:
    """Fine-grain cycles for one invocation of ``bb``.

    Every partition pays the full reconfiguration cost, the first included;
    ``tp`` must have been produced from ``bb.dfg``.
    """
    return sum(
        tp.partition_latency[p] + platform.t_reconfig for p in range(1, tp.partition_count + 1)
    )


def fpga_total_time(
    assignment: Iterable[int], per_block: Mapping[int, int], profile: ProfileData
) -> int:
    """Total fine-grain time: per-invocation cycles weighted by visit counts."""
    total = 0
    for bb_id in assignment:
        cycles = per_block[bb_id]
        freq = profile.iter[bb_id]
        if cycles < 0 or freq < 0:
            raise ValueError(f"negative time or count for block {bb_id}")
        total += cycles * freq
    return total


@dataclass(frozen=True)
class FineGrainCost:
    """Fine-side cost of one assignment: per-invocation cycles of every
    fine block (reconfiguration included) and their frequency-weighted sum."""

    t_to_fpga: Mapping[int, int]
    t_fpga_total: int


def fine_grain_cost(
    assignment: Iterable[int], per_block: Mapping[int, int], profile: ProfileData
) -> FineGrainCost:
    assignment = sorted(assignment)
    return FineGrainCost(
        t_to_fpga={bb: per_block[bb] for bb in assignment},
        t_fpga_total=fpga_total_time(assignment, per_block, profile),
    )


def write_partition_tsv(
    tp: TemporalPartitioning, levels: AsapLevels, dfg: Dfg, platform: PlatformModel, fh: IO[str]
) -> None:
    """Dump one partitioning as TSV (op_id, asap_level, partition, area)."""
    writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
    writer.writerow(["op_id", "asap_level", "partition", "area"])
    for op in dfg.ops:
        writer.writerow(
            [op.id, levels.level[op.id], tp.partition_of[op.id], platform.op_area[op.kind]]
        )

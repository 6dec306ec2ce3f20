"""List scheduling of a DFG onto an array of coarse-grain components.

The coarse fabric is ``count`` identical components, each an ``rows x cols``
grid of nodes holding one multiplier and one ALU of which one fires per
clock. Steering logic lets a value produced in one row feed a node in a
strictly later row of the same component within the same clock, which is
how fused templates such as multiply-add come about. Every component
invocation takes one coarse clock regardless of what it computes.

The scheduler is a critical-path-first list scheduler: per coarse cycle it
walks the components and their rows in order, filling each row with up to
``cols`` ops. An op qualifies for a slot when each of its producers either
finished in an earlier cycle or sits in a lower row of the same component
in the current cycle (a chained template). Candidates are always taken in
(longest-path-to-sink descending, id ascending) order, which makes the
schedule deterministic.
"""

from __future__ import annotations

import csv
import heapq
from bisect import insort
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .errors import RangeError
from .ingest import PlatformModel, ProfileData
from .ir import Dfg


@dataclass(frozen=True)
class CgcArray:
    """Shape of the coarse-grain fabric: ``count`` components of rows x cols."""

    count: int
    rows: int
    cols: int

    def __post_init__(self):
        for name, value in (("count", self.count), ("rows", self.rows), ("cols", self.cols)):
            if value < 1:
                raise RangeError(name, value, "must be >= 1")

    @property
    def slots_per_cgc(self) -> int:
        return self.rows * self.cols

    @classmethod
    def from_platform(cls, platform: PlatformModel) -> "CgcArray":
        return cls(count=platform.cgc_count, rows=platform.cgc_rows, cols=platform.cgc_cols)


@dataclass(frozen=True)
class CgcSchedule:
    """Placement of every op into (coarse cycle, component, row, col)."""

    cycle_of: Mapping[int, int]
    cgc_of: Mapping[int, tuple[int, int, int]]
    latency_cgc_cycles: int


def _heights(dfg: Dfg) -> dict[int, int]:
    """Longest path (in nodes) from each op down to any sink."""
    outdeg = {op.id: len(dfg.succs[op.id]) for op in dfg.ops}
    height = {op.id: 1 for op in dfg.ops}
    stack = [u for u, d in outdeg.items() if d == 0]
    while stack:
        u = stack.pop()
        for p in dfg.preds[u]:
            if height[u] + 1 > height[p]:
                height[p] = height[u] + 1
            outdeg[p] -= 1
            if outdeg[p] == 0:
                stack.append(p)
    if any(d != 0 for d in outdeg.values()):
        raise ValueError("DFG contains a dependency cycle")
    return height


def schedule_cgc(dfg: Dfg, array: CgcArray) -> CgcSchedule:
    """Schedule ``dfg`` onto ``array``; any acyclic DFG is schedulable,
    capacity only stretches the latency."""
    if not dfg.ops:
        return CgcSchedule(cycle_of={}, cgc_of={}, latency_cgc_cycles=0)

    height = _heights(dfg)
    preds = dfg.preds
    succs = dfg.succs

    def key(u: int) -> tuple[int, int]:
        return (-height[u], u)

    pred_left = {op.id: len(preds[op.id]) for op in dfg.ops}
    ready = [(key(u), u) for u, d in pred_left.items() if d == 0]
    heapq.heapify(ready)

    cycle_of: dict[int, int] = {}
    cgc_of: dict[int, tuple[int, int, int]] = {}
    remaining = dfg.n
    cycle = 0

    while remaining:
        cycle += 1
        placed_row: dict[int, tuple[int, int]] = {}  # op -> (cgc, row), this cycle only
        # Per component: ops whose producers all completed, the latest of
        # them this cycle inside that component; sorted by priority, each
        # tagged with the first row it may occupy.
        chain_ready: dict[int, list[tuple[tuple[int, int], int, int]]] = {
            g: [] for g in range(1, array.count + 1)
        }
        next_cycle: list[int] = []

        def place(u: int, g: int, r: int, col: int) -> None:
            nonlocal remaining
            cycle_of[u] = cycle
            cgc_of[u] = (g, r, col)
            placed_row[u] = (g, r)
            remaining -= 1
            for s in succs[u]:
                pred_left[s] -= 1
                if pred_left[s] == 0:
                    _classify(s)

        def _classify(s: int) -> None:
            # All producers of s are now scheduled; decide whether s may
            # still chain into this cycle.
            home = None
            min_row = 1
            for p in preds[s]:
                if cycle_of[p] != cycle:
                    continue
                pg, pr = placed_row[p]
                if home is None:
                    home = pg
                elif home != pg:
                    next_cycle.append(s)
                    return
                if pr + 1 > min_row:
                    min_row = pr + 1
            if home is not None and min_row <= array.rows:
                insort(chain_ready[home], (key(s), s, min_row))
            else:
                next_cycle.append(s)

        for g in range(1, array.count + 1):
            chains = chain_ready[g]
            for r in range(1, array.rows + 1):
                col = 0
                while col < array.cols:
                    while ready and ready[0][1] in cycle_of:
                        heapq.heappop(ready)
                    ready_key = ready[0][0] if ready else None

                    chain_pick = None
                    for idx, (ck, u, min_row) in enumerate(chains):
                        if ready_key is not None and ck > ready_key:
                            break
                        if min_row <= r:
                            chain_pick = (idx, u)
                            break

                    if chain_pick is not None:
                        idx, u = chain_pick
                        del chains[idx]
                    elif ready:
                        u = heapq.heappop(ready)[1]
                    else:
                        break
                    col += 1
                    place(u, g, r, col)

        # Anything that became schedulable this cycle but found no slot is
        # plainly ready from the next cycle on.
        for g in range(1, array.count + 1):
            next_cycle.extend(u for _, u, _ in chain_ready[g])
        for u in next_cycle:
            if u not in cycle_of:
                heapq.heappush(ready, (key(u), u))

    return CgcSchedule(cycle_of=cycle_of, cgc_of=cgc_of, latency_cgc_cycles=cycle)


def coarse_block_time(schedule: CgcSchedule, platform: PlatformModel) -> int:
    """Convert a coarse-clock latency to fine-grain cycles (ceiling)."""
    return -(-schedule.latency_cgc_cycles // platform.clock_ratio)


def coarse_total_time(
    assignment: Iterable[int], per_block: Mapping[int, int], profile: ProfileData
) -> int:
    """Total coarse-grain time: per-invocation cycles weighted by visit counts."""
    total = 0
    for bb_id in assignment:
        cycles = per_block[bb_id]
        freq = profile.iter[bb_id]
        if cycles < 0 or freq < 0:
            raise ValueError(f"negative time or count for block {bb_id}")
        total += cycles * freq
    return total


@dataclass(frozen=True)
class CoarseGrainCost:
    """Coarse-side cost of one assignment: per-invocation fine-grain cycles
    of every coarse block and their frequency-weighted sum."""

    t_to_coarse: Mapping[int, int]
    t_coarse_total: int


def coarse_grain_cost(
    assignment: Iterable[int], per_block: Mapping[int, int], profile: ProfileData
) -> CoarseGrainCost:
    assignment = sorted(assignment)
    return CoarseGrainCost(
        t_to_coarse={bb: per_block[bb] for bb in assignment},
        t_coarse_total=coarse_total_time(assignment, per_block, profile),
    )


def write_schedule_tsv(schedule: CgcSchedule, fh: IO[str]) -> None:
    """Dump one schedule as TSV (op_id, cycle, cgc, row, col)."""
    writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
    writer.writerow(["op_id", "cycle", "cgc", "row", "col"])
    for op_id in sorted(
        schedule.cycle_of, key=lambda u: (schedule.cycle_of[u], schedule.cgc_of[u])
    ):
        g, r, c = schedule.cgc_of[op_id]
        writer.writerow([op_id, schedule.cycle_of[op_id], g, r, c])

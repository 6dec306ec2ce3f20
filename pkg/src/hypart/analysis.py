"""Hotspot analysis: per-block operation weights and kernel ranking.

A block's weight is the weighted sum of its operations (ALU ops count 1,
multiplies count 2 by default, reflecting their larger delay). Combining
that static weight with the profiled execution frequency gives the block's
total complexity, and the loop-resident blocks sorted by descending total
complexity are the kernels the engine will consider moving to the
coarse-grain fabric.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO, Mapping

from .errors import RangeError
from .ingest import ProfileData
from .ir import BasicBlock, Cdfg, OpKind


def _default_weights() -> dict[OpKind, int]:
    return {OpKind.ALU: 1, OpKind.MUL: 2}


@dataclass(frozen=True)
class WeightTable:
    """Complexity weight per op kind; every weight is at least 1."""

    weight: Mapping[OpKind, int] = field(default_factory=_default_weights)

    def __post_init__(self):
        object.__setattr__(self, "weight", dict(self.weight))
        for kind in OpKind:
            if kind not in self.weight:
                raise RangeError(f"weight.{kind.value}", None, "missing weight")
            if self.weight[kind] < 1:
                raise RangeError(f"weight.{kind.value}", self.weight[kind], "must be >= 1")


DEFAULT_WEIGHTS = WeightTable()


@dataclass(frozen=True)
class KernelEntry:
    bb_id: int
    exec_freq: int
    bb_weight: int
    total_weight: int


@dataclass(frozen=True)
class KernelRanking:
    """Kernels in descending total-weight order, ties broken by bb_id."""

    entries: tuple[KernelEntry, ...]

    def order(self) -> tuple[int, ...]:
        return tuple(e.bb_id for e in self.entries)


def bb_weight(bb: BasicBlock, weights: WeightTable = DEFAULT_WEIGHTS) -> int:
    """Weighted operation count of one block (0 for an empty block)."""
    return sum(weights.weight[op.kind] for op in bb.dfg.ops)


def total_weight(exec_freq: int, bbw: int) -> int:
    """Total complexity of a block: execution frequency times block weight.

    Arbitrary-precision integers make silent wraparound impossible;
    negative inputs are rejected outright.
    """
    if exec_freq < 0 or bbw < 0:
        raise ValueError(f"weights must be non-negative, got ({exec_freq}, {bbw})")
    return exec_freq * bbw


def rank_kernels(
    cdfg: Cdfg, profile: ProfileData, weights: WeightTable = DEFAULT_WEIGHTS
) -> KernelRanking:
    """Rank loop-resident blocks by descending total weight.

    Blocks outside loops are never kernels, and blocks contributing zero
    total weight are dropped since there is nothing to accelerate.
    """
    entries = []
    for bb in cdfg.blocks:
        if not bb.in_loop:
            continue
        freq = profile.iter.get(bb.bb_id, 0)
        bbw = bb_weight(bb, weights)
        tw = total_weight(freq, bbw)
        if tw > 0:
            entries.append(KernelEntry(bb.bb_id, freq, bbw, tw))
    entries.sort(key=lambda e: (-e.total_weight, e.bb_id))
    return KernelRanking(entries=tuple(entries))


def write_ranking_tsv(ranking: KernelRanking, fh: IO[str]) -> None:
    """Dump a ranking as TSV (bb_id, exec_freq, bb_weight, total_weight)."""
    writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
    writer.writerow(["bb_id", "exec_freq", "bb_weight", "total_weight"])
    for e in ranking.entries:
        writer.writerow([e.bb_id, e.exec_freq, e.bb_weight, e.total_weight])

"""The partitioning engine: move kernels to the coarse fabric until the
timing constraint holds.

The engine first prices an all-fine-grain mapping. If that already meets
the constraint it stops. Otherwise it walks the kernel ranking and moves
kernels to the coarse-grain side one at a time, repricing the whole
application after each move, until the constraint is met or the ranking is
exhausted. Fine and coarse fabrics never run concurrently, so the three
cost components simply add:

    t_total = t_fpga + t_coarse + t_comm

``t_comm`` charges every control edge crossing the fine/coarse boundary
one shared-memory transfer (word count times per-word cost) per invocation
of the destination block.

Per-block mapping costs depend only on the platform, not on the current
assignment, so they are computed once and cached in BlockCosts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .analysis import WeightTable, rank_kernels
from .coarse_grain import CgcArray, coarse_block_time, coarse_grain_cost, schedule_cgc
from .errors import EmptyCdfg, InfeasibleFineGrain, OpExceedsFpga
from .fine_grain import fine_grain_cost, fpga_block_time, temporal_partition
from .ingest import PlatformModel, ProfileData
from .ir import Cdfg, compute_asap


@dataclass(frozen=True)
class CostBreakdown:
    """Application cost split into its three additive components,
    all in fine-grain (FPGA) cycles."""

    t_fpga: int
    t_coarse: int
    t_comm: int
    t_total: int

    def __post_init__(self):
        if self.t_total != self.t_fpga + self.t_coarse + self.t_comm:
            raise ValueError("t_total must equal t_fpga + t_coarse + t_comm")

    @classmethod
    def assemble(cls, t_fpga: int, t_coarse: int, t_comm: int) -> "CostBreakdown":
        return cls(t_fpga, t_coarse, t_comm, t_fpga + t_coarse + t_comm)


@dataclass(frozen=True)
class PartitionState:
    """Which blocks run where. ``moved_order`` lists the coarse blocks in
    the order the engine moved them."""

    coarse_set: frozenset[int]
    fine_set: frozenset[int]
    moved_order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coarse_set", frozenset(self.coarse_set))
        object.__setattr__(self, "fine_set", frozenset(self.fine_set))
        object.__setattr__(self, "moved_order", tuple(self.moved_order))
        if self.coarse_set & self.fine_set:
            raise ValueError("a block cannot be both fine and coarse")
        if len(set(self.moved_order)) != len(self.moved_order) or set(
            self.moved_order
        ) != set(self.coarse_set):
            raise ValueError("moved_order must list coarse_set without repeats")

    @classmethod
    def all_fine(cls, cdfg: Cdfg) -> "PartitionState":
        return cls(
            coarse_set=frozenset(),
            fine_set=frozenset(bb.bb_id for bb in cdfg.blocks),
            moved_order=(),
        )

    def move_to_coarse(self, bb_id: int) -> "PartitionState":
        if bb_id not in self.fine_set:
            raise ValueError(f"block {bb_id} is not on the fine side")
        return PartitionState(
            coarse_set=self.coarse_set | {bb_id},
            fine_set=self.fine_set - {bb_id},
            moved_order=self.moved_order + (bb_id,),
        )


@dataclass(frozen=True)
class EngineResult:
    state: PartitionState
    cost: CostBreakdown
    constraint_met: bool
    history: tuple[tuple[int, CostBreakdown], ...]
    baseline: CostBreakdown


@dataclass(frozen=True)
class BlockCosts:
    """Cached per-invocation mapping costs, in fine-grain cycles."""

    fine_time: Mapping[int, int]
    coarse_time: Mapping[int, int]

    @classmethod
    def compute(cls, cdfg: Cdfg, platform: PlatformModel) -> "BlockCosts":
        array = CgcArray.from_platform(platform)
        fine: dict[int, int] = {}
        coarse: dict[int, int] = {}
        for bb in cdfg.blocks:
            levels = compute_asap(bb.dfg)
            try:
                tp = temporal_partition(bb.dfg, levels, platform)
            except OpExceedsFpga as exc:
                exc.bb_id = bb.bb_id
                raise
            fine[bb.bb_id] = fpga_block_time(bb, tp, platform)
            coarse[bb.bb_id] = coarse_block_time(schedule_cgc(bb.dfg, array), platform)
        return cls(fine_time=fine, coarse_time=coarse)


def comm_time(
    state: PartitionState, cdfg: Cdfg, profile: ProfileData, platform: PlatformModel
) -> int:
    """Shared-memory transfer cost of every boundary-crossing control edge,
    charged once per invocation of the destination block."""
    total = 0
    for a, b in cdfg.control_edges:
        if (a in state.coarse_set) != (b in state.coarse_set):
            total += profile.iter[b] * cdfg.words(a, b) * platform.mem_word_cost
    return total


def evaluate(
    state: PartitionState,
    cdfg: Cdfg,
    profile: ProfileData,
    platform: PlatformModel,
    costs: BlockCosts | None = None,
) -> CostBreakdown:
    """Price one assignment. Propagates OpExceedsFpga if a fine-side block
    cannot be mapped."""
    if costs is None:
        costs = BlockCosts.compute(cdfg, platform)
    fine = fine_grain_cost(state.fine_set, costs.fine_time, profile)
    coarse = coarse_grain_cost(state.coarse_set, costs.coarse_time, profile)
    t_comm = comm_time(state, cdfg, profile, platform)
    return CostBreakdown.assemble(fine.t_fpga_total, coarse.t_coarse_total, t_comm)


def run_engine(
    cdfg: Cdfg,
    profile: ProfileData,
    platform: PlatformModel,
    constraint: int,
    weights: WeightTable | None = None,
    reject_regressions: bool = False,
) -> EngineResult:
    """Run the full partitioning loop against a timing constraint.

    Kernels move strictly in ranking order with no backtracking. By default
    a move is kept even when communication makes it a net loss;
    ``reject_regressions`` undoes such moves instead (the moved kernel is
    skipped and iteration continues).
    """
    if not cdfg.blocks:
        raise EmptyCdfg("cannot partition a CDFG with no blocks")
    weights = weights or WeightTable()

    try:
        costs = BlockCosts.compute(cdfg, platform)
    except OpExceedsFpga as exc:
        raise InfeasibleFineGrain(getattr(exc, "bb_id", -1), exc) from exc

    state = PartitionState.all_fine(cdfg)
    baseline = evaluate(state, cdfg, profile, platform, costs)
    cost = baseline
    history: list[tuple[int, CostBreakdown]] = []
    if baseline.t_total <= constraint:
        return EngineResult(state, baseline, True, tuple(history), baseline)

    for entry in rank_kernels(cdfg, profile, weights).entries:
        candidate = state.move_to_coarse(entry.bb_id)
        candidate_cost = evaluate(candidate, cdfg, profile, platform, costs)
        if reject_regressions and candidate_cost.t_total > cost.t_total:
            continue
        state, cost = candidate, candidate_cost
        history.append((entry.bb_id, cost))
        if cost.t_total <= constraint:
            return EngineResult(state, cost, True, tuple(history), baseline)

    return EngineResult(state, cost, False, tuple(history), baseline)

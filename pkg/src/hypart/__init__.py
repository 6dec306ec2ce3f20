"""Partitioning toolkit for hybrid fine/coarse-grain reconfigurable platforms.

The pipeline: parse a CDFG, a profile, and a platform model; rank the
loop-resident hotspot blocks; price each block on the fine-grain fabric
(temporal partitioning with per-partition reconfiguration) and on the
coarse-grain component array (list scheduling with intra-component
chaining); then move kernels to the coarse side, costliest first, until
the timing constraint is met.
"""

from .analysis import (
    DEFAULT_WEIGHTS,
    KernelEntry,
    KernelRanking,
    WeightTable,
    bb_weight,
    rank_kernels,
    total_weight,
)
from .coarse_grain import (
    CgcArray,
    CgcSchedule,
    CoarseGrainCost,
    coarse_block_time,
    coarse_grain_cost,
    coarse_total_time,
    schedule_cgc,
)
from .engine import (
    BlockCosts,
    CostBreakdown,
    EngineResult,
    PartitionState,
    comm_time,
    evaluate,
    run_engine,
)
from .errors import (
    CyclicGraph,
    EmptyCdfg,
    HypartError,
    IllegalTransition,
    InfeasibleFineGrain,
    OpExceedsFpga,
    ParseError,
    RangeError,
    SchemaError,
    UnknownBlock,
    ValidationError,
    ZeroBaseline,
)
from .fine_grain import (
    FineGrainCost,
    TemporalPartitioning,
    fine_grain_cost,
    fpga_block_time,
    fpga_total_time,
    temporal_partition,
)
from .ingest import (
    PlatformModel,
    ProfileData,
    Trace,
    load_cdfg,
    load_platform,
    load_profile,
    parse_cdfg,
    parse_platform,
    parse_profile,
    replay_trace,
    serialize_cdfg,
)
from .ir import (
    AsapLevels,
    BasicBlock,
    Cdfg,
    Dfg,
    Operation,
    OpKind,
    Violation,
    compute_asap,
    validate_cdfg,
)
from .report import (
    ReportRow,
    Scenario,
    build_report,
    load_scenarios,
    parse_scenarios,
    pct_reduction,
    run_scenarios,
)

__all__ = [name for name in dir() if not name.startswith("_")]

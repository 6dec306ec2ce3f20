"""Graph intermediate representation for the partitioning pipeline.

An application is a control data flow graph (CDFG): basic blocks joined by
control edges, where each block carries an acyclic data flow graph (DFG) of
ALU and multiply operations. Everything downstream (kernel ranking, the
fine-grain temporal partitioner, the coarse-grain scheduler, the engine)
consumes these types, so they are immutable after construction and all
analyses here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping

from .errors import CyclicGraph


class OpKind(str, Enum):
    """Operation kinds. Division never appears in these workloads."""

    ALU = "ALU"
    MUL = "MUL"


@dataclass(frozen=True)
class Operation:
    """A single DFG node. ``bit_width`` is informational and never priced."""

    id: int
    kind: OpKind
    bit_width: int = 32


@dataclass(frozen=True)
class Dfg:
    """Acyclic data flow graph of one basic block.

    ``ops`` is normalized to ascending-id order and ``edges`` to a frozenset
    of ``(producer_id, consumer_id)`` pairs, so structurally equal graphs
    compare equal regardless of construction order.
    """

    ops: tuple[Operation, ...]
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(sorted(self.ops, key=lambda o: o.id)))
        object.__setattr__(
            self, "edges", frozenset((int(a), int(b)) for a, b in self.edges)
        )

    @property
    def n(self) -> int:
        """Node count."""
        return len(self.ops)

    @cached_property
    def op_by_id(self) -> dict[int, Operation]:
        return {op.id: op for op in self.ops}

    @cached_property
    def preds(self) -> dict[int, tuple[int, ...]]:
        """Map op id -> sorted producer ids."""
        acc: dict[int, list[int]] = {op.id: [] for op in self.ops}
        for a, b in self.edges:
            acc[b].append(a)
        return {u: tuple(sorted(ps)) for u, ps in acc.items()}

    @cached_property
    def succs(self) -> dict[int, tuple[int, ...]]:
        """Map op id -> sorted consumer ids."""
        acc: dict[int, list[int]] = {op.id: [] for op in self.ops}
        for a, b in self.edges:
            acc[a].append(b)
        return {u: tuple(sorted(ss)) for u, ss in acc.items()}


@dataclass(frozen=True)
class BasicBlock:
    bb_id: int
    dfg: Dfg
    in_loop: bool = False
    loop_depth: int = 0


@dataclass(frozen=True)
class Cdfg:
    """Whole-application graph.

    ``edge_words`` optionally annotates control edges with the number of
    data words handed over along that edge; unannotated edges transfer one
    word. The shared-memory cost model reads these counts.
    """

    blocks: tuple[BasicBlock, ...]
    control_edges: frozenset[tuple[int, int]]
    entry: int
    edge_words: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(
            self, "control_edges", frozenset((int(a), int(b)) for a, b in self.control_edges)
        )
        object.__setattr__(
            self,
            "edge_words",
            {(int(a), int(b)): int(w) for (a, b), w in dict(self.edge_words).items()},
        )

    @cached_property
    def block_by_id(self) -> dict[int, BasicBlock]:
        return {bb.bb_id: bb for bb in self.blocks}

    def words(self, src: int, dst: int) -> int:
        """Words transferred along one control edge (default 1)."""
        return self.edge_words.get((src, dst), 1)


@dataclass(frozen=True)
class AsapLevels:
    """Earliest schedulable step per op; sources sit at level 1."""

    level: Mapping[int, int]
    max_level: int


# Violation codes emitted by validate_cdfg.
DUPLICATE_BB_ID = "duplicate_bb_id"
BAD_ENTRY = "bad_entry"
DANGLING_CONTROL_EDGE = "dangling_control_edge"
DUPLICATE_OP_ID = "duplicate_op_id"
DANGLING_DFG_EDGE = "dangling_dfg_edge"
CYCLE_IN_DFG = "cycle_in_dfg"
NEGATIVE_LOOP_DEPTH = "negative_loop_depth"
LOOP_FLAG_MISMATCH = "loop_flag_mismatch"
BAD_BIT_WIDTH = "bad_bit_width"
BAD_EDGE_WORDS = "bad_edge_words"


@dataclass(frozen=True)
class Violation:
    """One structural defect found by validate_cdfg.

    ``code`` is machine readable; ``subject`` names the offending id or edge.
    """

    code: str
    subject: object
    message: str

    def __str__(self) -> str:
        return f"{self.code}({self.subject}): {self.message}"


def validate_cdfg(cdfg: Cdfg) -> list[Violation]:
    """Return every invariant violation in ``cdfg``; an empty list means valid.

    Violations are data, not exceptions, and the traversal order is fixed so
    repeated calls return identical lists.
    """
    out: list[Violation] = []

    seen: set[int] = set()
    for bb in cdfg.blocks:
        if bb.bb_id in seen:
            out.append(Violation(DUPLICATE_BB_ID, bb.bb_id, "bb_id used more than once"))
        seen.add(bb.bb_id)

    for bb in cdfg.blocks:
        out.extend(_validate_block(bb))

    if cdfg.entry not in seen:
        out.append(Violation(BAD_ENTRY, cdfg.entry, "entry references no block"))

    for a, b in sorted(cdfg.control_edges):
        for end in (a, b):
            if end not in seen:
                out.append(
                    Violation(DANGLING_CONTROL_EDGE, end, f"edge ({a}, {b}) references no block")
                )

    for (a, b), w in sorted(cdfg.edge_words.items()):
        if (a, b) not in cdfg.control_edges:
            out.append(Violation(BAD_EDGE_WORDS, (a, b), "word count on a nonexistent edge"))
        elif w < 0:
            out.append(Violation(BAD_EDGE_WORDS, (a, b), f"negative word count {w}"))

    return out


def _validate_block(bb: BasicBlock) -> list[Violation]:
    out: list[Violation] = []
    dfg = bb.dfg

    ids: set[int] = set()
    for op in dfg.ops:
        if op.id in ids:
            out.append(Violation(DUPLICATE_OP_ID, (bb.bb_id, op.id), "op id used more than once"))
        ids.add(op.id)
        if op.bit_width <= 0:
            out.append(Violation(BAD_BIT_WIDTH, (bb.bb_id, op.id), f"bit_width {op.bit_width}"))

    clean_edges = []
    for a, b in sorted(dfg.edges):
        dangling = [end for end in (a, b) if end not in ids]
        if dangling:
            out.append(
                Violation(DANGLING_DFG_EDGE, (bb.bb_id, (a, b)), "edge references no op")
            )
        else:
            clean_edges.append((a, b))

    if _has_cycle(ids, clean_edges):
        out.append(Violation(CYCLE_IN_DFG, bb.bb_id, "data flow graph is cyclic"))

    if bb.loop_depth < 0:
        out.append(Violation(NEGATIVE_LOOP_DEPTH, bb.bb_id, f"loop_depth {bb.loop_depth}"))
    if bb.loop_depth > 0 and not bb.in_loop:
        out.append(
            Violation(LOOP_FLAG_MISMATCH, bb.bb_id, "loop_depth > 0 but in_loop is false")
        )

    return out


def _has_cycle(ids: set[int], edges: list[tuple[int, int]]) -> bool:
    indeg = {u: 0 for u in ids}
    succs: dict[int, list[int]] = {u: [] for u in ids}
    for a, b in edges:
        indeg[b] += 1
        succs[a].append(b)
    stack = [u for u in ids if indeg[u] == 0]
    visited = 0
    while stack:
        u = stack.pop()
        visited += 1
        for v in succs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return visited != len(ids)


def compute_asap(dfg: Dfg) -> AsapLevels:
    """Longest-path leveling: sources get level 1, every other op sits one
    past its deepest producer.

    Raises CyclicGraph if the DFG is not acyclic. An empty DFG yields
    ``max_level = 0``.
    """
    for a, b in dfg.edges:
        if a not in dfg.op_by_id or b not in dfg.op_by_id:
            raise ValueError(f"edge ({a}, {b}) references an unknown op")

    indeg = {op.id: len(dfg.preds[op.id]) for op in dfg.ops}
    level: dict[int, int] = {u: 1 for u, d in indeg.items() if d == 0}
    stack = sorted(level, reverse=True)
    visited = 0
    while stack:
        u = stack.pop()
        visited += 1
        for v in dfg.succs[u]:
            cand = level[u] + 1
            if cand > level.get(v, 0):
                level[v] = cand
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    if visited != dfg.n:
        raise CyclicGraph("DFG contains a dependency cycle")
    return AsapLevels(level=level, max_level=max(level.values(), default=0))

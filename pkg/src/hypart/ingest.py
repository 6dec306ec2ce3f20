"""Parsing of the three input documents: CDFG, profile, and platform model.

All three are UTF-8 JSON. Schemas:

* CDFG: ``{"version": 1?, "blocks": [...], "control_edges": [...], "entry": int}``
  where a block is ``{"bb_id": int, "loop_depth": int?, "ops": [...], "edges": [[p, c], ...]}``
  and an op is ``{"id": int, "kind": "ALU"|"MUL", "bit_width": int?}``.
  A control edge is ``[src, dst]`` or ``[src, dst, words]`` to annotate the
  number of words handed through shared memory when the edge crosses the
  fine/coarse boundary.
* Profile: ``{"counts": {"<bb_id>": int, ...}}`` for measured per-block
  execution counts, or ``{"trace": [bb_id, ...]}`` to derive counts by
  replaying one recorded control-flow walk.
* Platform: flat object with the PlatformModel field names.

Parsing is pure and safe to run concurrently on distinct documents.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    IllegalTransition,
    ParseError,
    RangeError,
    SchemaError,
    UnknownBlock,
    ValidationError,
)
from .ir import BasicBlock, Cdfg, Dfg, OpKind, Operation, validate_cdfg


@dataclass(frozen=True)
class ProfileData:
    """Execution count per basic block; covers every block of its CDFG."""

    iter: Mapping[int, int]

    @classmethod
    def for_cdfg(cls, cdfg: Cdfg, counts: Mapping[int, int] | None = None) -> "ProfileData":
        """Build a profile over ``cdfg``, defaulting absent blocks to 0."""
        counts = dict(counts or {})
        for bb_id in counts:
            if bb_id not in cdfg.block_by_id:
                raise UnknownBlock(bb_id)
        return cls(iter={bb.bb_id: int(counts.get(bb.bb_id, 0)) for bb in cdfg.blocks})


@dataclass(frozen=True)
class Trace:
    """Sequence of basic blocks visited during one representative run."""

    steps: tuple[int, ...]


@dataclass(frozen=True)
class PlatformModel:
    """Area/timing parameters of the fine fabric and the CGC data-path.

    ``a_fpga`` (the usable fine-grain area) is the raw fabric area scaled by
    the routability utilization factor. ``clock_ratio`` is the fine-grain
    clock period divided by the coarse-grain one; all engine-level costs are
    expressed in fine-grain (FPGA) cycles.
    """

    a_fpga_total: float
    op_area: Mapping[OpKind, float]
    t_reconfig: int
    fpga_op_latency: Mapping[OpKind, int]
    cgc_count: int
    cgc_rows: int
    cgc_cols: int
    mem_word_cost: int
    utilization: float = 0.7
    clock_ratio: int = 3

    def __post_init__(self):
        object.__setattr__(self, "op_area", dict(self.op_area))
        object.__setattr__(self, "fpga_op_latency", dict(self.fpga_op_latency))
        if not self.a_fpga_total > 0:
            raise RangeError("a_fpga_total", self.a_fpga_total, "must be positive")
        if not 0 < self.utilization <= 1:
            raise RangeError("utilization", self.utilization, "must be in (0, 1]")
        if self.clock_ratio < 1:
            raise RangeError("clock_ratio", self.clock_ratio, "must be >= 1")
        if self.t_reconfig < 0:
            raise RangeError("t_reconfig", self.t_reconfig, "must be >= 0")
        if self.mem_word_cost < 0:
            raise RangeError("mem_word_cost", self.mem_word_cost, "must be >= 0")
        for name, value in (
            ("cgc_count", self.cgc_count),
            ("cgc_rows", self.cgc_rows),
            ("cgc_cols", self.cgc_cols),
        ):
            if value < 1:
                raise RangeError(name, value, "must be >= 1")
        for kind in OpKind:
            if kind not in self.op_area:
                raise SchemaError(f"op_area.{kind.value}", "missing")
            if not self.op_area[kind] > 0:
                raise RangeError(f"op_area.{kind.value}", self.op_area[kind], "must be positive")
            if kind not in self.fpga_op_latency:
                raise SchemaError(f"fpga_op_latency.{kind.value}", "missing")
            if self.fpga_op_latency[kind] < 1:
                raise RangeError(
                    f"fpga_op_latency.{kind.value}", self.fpga_op_latency[kind], "must be >= 1"
                )

    @property
    def a_fpga(self) -> float:
        """Usable fine-grain area budget."""
        return self.a_fpga_total * self.utilization


def _decode(document: bytes | str) -> object:
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc}") from exc
    try:
        return json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc


def _require_object(data: object, allowed: set[str], required: set[str], what: str) -> dict:
    if not isinstance(data, dict):
        raise SchemaError(what, "expected a JSON object")
    for key in data:
        if key not in allowed:
            raise SchemaError(f"{what}.{key}", "unknown field")
    for key in required:
        if key not in data:
            raise SchemaError(f"{what}.{key}", "missing field")
    if "version" in data and data["version"] != 1:
        raise SchemaError(f"{what}.version", "only version 1 is supported")
    return data


def _int_field(container: Mapping, key: str, where: str) -> int:
    value = container[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}.{key}", "expected an integer")
    return value


def _num_field(container: Mapping, key: str, where: str) -> float:
    value = container[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}.{key}", "expected a number")
    return float(value)


def parse_cdfg(document: bytes | str) -> Cdfg:
    """Parse and validate a CDFG document.

    Raises ParseError for malformed JSON, SchemaError for shape problems,
    and ValidationError carrying the violation list when the graph itself
    is inconsistent.
    """
    data = _require_object(
        _decode(document),
        allowed={"version", "blocks", "control_edges", "entry"},
        required={"blocks", "control_edges", "entry"},
        what="cdfg",
    )
    if not isinstance(data["blocks"], list):
        raise SchemaError("blocks", "expected a list")
    blocks = [_parse_block(b, i) for i, b in enumerate(data["blocks"])]

    if not isinstance(data["control_edges"], list):
        raise SchemaError("control_edges", "expected a list")
    edges: set[tuple[int, int]] = set()
    words: dict[tuple[int, int], int] = {}
    for i, e in enumerate(data["control_edges"]):
        if not isinstance(e, list) or len(e) not in (2, 3) or any(
            isinstance(x, bool) or not isinstance(x, int) for x in e
        ):
            raise SchemaError(f"control_edges[{i}]", "expected [src, dst] or [src, dst, words]")
        edges.add((e[0], e[1]))
        if len(e) == 3:
            words[(e[0], e[1])] = e[2]

    entry = _int_field(data, "entry", "cdfg")
    cdfg = Cdfg(blocks=tuple(blocks), control_edges=frozenset(edges), entry=entry, edge_words=words)
    violations = validate_cdfg(cdfg)
    if violations:
        raise ValidationError(violations)
    return cdfg


def _parse_block(data: object, index: int) -> BasicBlock:
    where = f"blocks[{index}]"
    data = _require_object(
        data, allowed={"bb_id", "loop_depth", "ops", "edges"}, required={"bb_id", "ops"}, what=where
    )
    bb_id = _int_field(data, "bb_id", where)
    loop_depth = _int_field(data, "loop_depth", where) if "loop_depth" in data else 0

    if not isinstance(data["ops"], list):
        raise SchemaError(f"{where}.ops", "expected a list")
    ops = []
    for j, o in enumerate(data["ops"]):
        o = _require_object(
            o, allowed={"id", "kind", "bit_width"}, required={"id", "kind"}, what=f"{where}.ops[{j}]"
        )
        kind_raw = o["kind"]
        try:
            kind = OpKind(kind_raw)
        except ValueError:
            raise SchemaError("kind", f"unknown op kind {kind_raw!r}") from None
        bit_width = _int_field(o, "bit_width", f"{where}.ops[{j}]") if "bit_width" in o else 32
        ops.append(Operation(id=_int_field(o, "id", f"{where}.ops[{j}]"), kind=kind, bit_width=bit_width))

    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise SchemaError(f"{where}.edges", "expected a list")
    dfg_edges = set()
    for j, e in enumerate(raw_edges):
        if not isinstance(e, list) or len(e) != 2 or any(
            isinstance(x, bool) or not isinstance(x, int) for x in e
        ):
            raise SchemaError(f"{where}.edges[{j}]", "expected [producer, consumer]")
        dfg_edges.add((e[0], e[1]))

    return BasicBlock(
        bb_id=bb_id,
        dfg=Dfg(ops=tuple(ops), edges=frozenset(dfg_edges)),
        in_loop=loop_depth > 0,
        loop_depth=loop_depth,
    )


def serialize_cdfg(cdfg: Cdfg) -> str:
    """Render a CDFG back to its document form (stable field order)."""
    blocks = []
    for bb in cdfg.blocks:
        blocks.append(
            {
                "bb_id": bb.bb_id,
                "loop_depth": bb.loop_depth,
                "ops": [
                    {"id": op.id, "kind": op.kind.value, "bit_width": op.bit_width}
                    for op in bb.dfg.ops
                ],
                "edges": [list(e) for e in sorted(bb.dfg.edges)],
            }
        )
    control_edges = []
    for a, b in sorted(cdfg.control_edges):
        w = cdfg.words(a, b)
        control_edges.append([a, b] if w == 1 else [a, b, w])
    doc = {
        "version": 1,
        "blocks": blocks,
        "control_edges": control_edges,
        "entry": cdfg.entry,
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_profile(document: bytes | str, cdfg: Cdfg) -> ProfileData:
    """Parse execution counts, or replay an embedded trace into counts."""
    data = _require_object(
        _decode(document), allowed={"version", "counts", "trace"}, required=set(), what="profile"
    )
    has_counts = "counts" in data
    has_trace = "trace" in data
    if has_counts == has_trace:
        raise SchemaError("profile", "exactly one of 'counts' or 'trace' is required")

    if has_trace:
        if not isinstance(data["trace"], list) or any(
            isinstance(x, bool) or not isinstance(x, int) for x in data["trace"]
        ):
            raise SchemaError("trace", "expected a list of block ids")
        return replay_trace(Trace(steps=tuple(data["trace"])), cdfg)

    if not isinstance(data["counts"], dict):
        raise SchemaError("counts", "expected an object")
    counts: dict[int, int] = {}
    for key, value in data["counts"].items():
        try:
            bb_id = int(key)
        except ValueError:
            raise SchemaError("counts", f"non-integer block id {key!r}") from None
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"counts.{key}", "expected an integer")
        if value < 0:
            raise RangeError(f"counts.{key}", value, "must be >= 0")
        counts[bb_id] = value
    return ProfileData.for_cdfg(cdfg, counts)


def replay_trace(trace: Trace | Sequence[int], cdfg: Cdfg) -> ProfileData:
    """Count block visits along ``trace``, checking each transition exists.

    Equivalent to instrumenting every block with a counter and running once.
    """
    steps = tuple(trace.steps if isinstance(trace, Trace) else trace)
    for bb_id in steps:
        if bb_id not in cdfg.block_by_id:
            raise UnknownBlock(bb_id)
    for a, b in zip(steps, steps[1:]):
        if (a, b) not in cdfg.control_edges:
            raise IllegalTransition(a, b)
    return ProfileData.for_cdfg(cdfg, Counter(steps))


def parse_platform(document: bytes | str) -> PlatformModel:
    """Parse a platform model; utilization defaults to 0.7, clock_ratio to 3."""
    data = _require_object(
        _decode(document),
        allowed={
            "version",
            "a_fpga_total",
            "utilization",
            "op_area",
            "t_reconfig",
            "fpga_op_latency",
            "clock_ratio",
            "cgc_count",
            "cgc_rows",
            "cgc_cols",
            "mem_word_cost",
        },
        required={
            "a_fpga_total",
            "op_area",
            "t_reconfig",
            "fpga_op_latency",
            "cgc_count",
            "cgc_rows",
            "cgc_cols",
            "mem_word_cost",
        },
        what="platform",
    )

    def kind_map(key: str, as_int: bool) -> dict[OpKind, float] | dict[OpKind, int]:
        raw = data[key]
        if not isinstance(raw, dict):
            raise SchemaError(key, "expected an object keyed by op kind")
        out = {}
        for k, v in raw.items():
            try:
                kind = OpKind(k)
            except ValueError:
                raise SchemaError(f"{key}.{k}", "unknown op kind") from None
            if isinstance(v, bool) or not isinstance(v, (int, float)) or (as_int and not isinstance(v, int)):
                raise SchemaError(f"{key}.{k}", "expected an integer" if as_int else "expected a number")
            out[kind] = int(v) if as_int else float(v)
        return out

    kwargs = dict(
        a_fpga_total=_num_field(data, "a_fpga_total", "platform"),
        op_area=kind_map("op_area", as_int=False),
        t_reconfig=_int_field(data, "t_reconfig", "platform"),
        fpga_op_latency=kind_map("fpga_op_latency", as_int=True),
        cgc_count=_int_field(data, "cgc_count", "platform"),
        cgc_rows=_int_field(data, "cgc_rows", "platform"),
        cgc_cols=_int_field(data, "cgc_cols", "platform"),
        mem_word_cost=_int_field(data, "mem_word_cost", "platform"),
    )
    if "utilization" in data:
        kwargs["utilization"] = _num_field(data, "utilization", "platform")
    if "clock_ratio" in data:
        kwargs["clock_ratio"] = _int_field(data, "clock_ratio", "platform")
    return PlatformModel(**kwargs)


def load_cdfg(path) -> Cdfg:
    with open(path, "rb") as fh:
        return parse_cdfg(fh.read())


def load_profile(path, cdfg: Cdfg) -> ProfileData:
    with open(path, "rb") as fh:
        return parse_profile(fh.read(), cdfg)


def load_platform(path) -> PlatformModel:
    with open(path, "rb") as fh:
        return parse_platform(fh.read())

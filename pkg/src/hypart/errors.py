"""Exception types shared across the toolkit."""

from __future__ import annotations


class HypartError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HypartError):
    """An input document is not syntactically valid."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaError(HypartError):
    """A document is missing a field or a field holds an invalid value."""

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"invalid field {field!r}" + (f": {message}" if message else ""))


class RangeError(HypartError):
    """A numeric field is outside its permitted range."""

    def __init__(self, field: str, value, message: str = ""):
        self.field = field
        self.value = value
        super().__init__(
            f"value {value!r} out of range for {field!r}" + (f": {message}" if message else "")
        )


class ValidationError(HypartError):
    """A parsed CDFG violates structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        codes = ", ".join(v.code for v in self.violations)
        super().__init__(f"CDFG failed validation: {codes}")


class UnknownBlock(HypartError):
    """A profile or trace references a basic block absent from the CDFG."""

    def __init__(self, bb_id: int):
        self.bb_id = bb_id
        super().__init__(f"unknown basic block {bb_id}")


class IllegalTransition(HypartError):
    """A trace contains a transition with no matching control edge."""

    def __init__(self, src: int, dst: int):
        self.src = src
        self.dst = dst
        super().__init__(f"no control edge {src} -> {dst}")


class CyclicGraph(HypartError):
    """A data flow graph contains a dependency cycle."""


class OpExceedsFpga(HypartError):
    """A single operation is larger than the fine-grain area budget."""

    def __init__(self, op_id: int, area: float, budget: float):
        self.op_id = op_id
        self.area = area
        self.budget = budget
        super().__init__(f"operation {op_id} needs area {area}, budget is {budget}")


class InfeasibleFineGrain(HypartError):
    """A basic block cannot be mapped to the fine-grain fabric at all."""

    def __init__(self, bb_id: int, cause: OpExceedsFpga):
        self.bb_id = bb_id
        self.cause = cause
        super().__init__(f"block {bb_id} is unmappable: {cause}")


class EmptyCdfg(HypartError):
    """The partitioning engine was invoked on a CDFG with no blocks."""


class ZeroBaseline(HypartError):
    """Percent reduction is undefined for a zero-cycle baseline."""

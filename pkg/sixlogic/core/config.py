from dataclasses import dataclass
from enum import IntEnum, StrEnum
from typing import Any

# Exhaustive oracles enumerate |values|^#vars assignments.
DEFAULT_VAR_CAP = 8
DEFAULT_PARTITION_CAP = 100_000
DEFAULT_GSUB_CAP = 12
DEFAULT_MAX_ITERATIONS = 10_000
DEFAULT_MAX_STATES = 200_000
DEFAULT_MAX_METAVARIABLES = 4

# Saturation masks are uint64.
MAX_GSUB_CAP = 64

METAVARIABLES = ("A", "B", "C", "D")


class TruthValue(StrEnum):
    ZERO = "0"
    ONE_THIRD = "1/3"
    N = "n"
    B = "b"
    TWO_THIRDS = "2/3"
    ONE = "1"


# Fixed cell order of 6-sequents and truth-table rows.
T6 = tuple(TruthValue)


class Engine(StrEnum):
    SATURATION = "saturation"
    BACKWARD = "backward"
    SEMANTIC = "semantic"
    CROSS = "cross"


class ExitCode(IntEnum):
    OK = 0
    NO = 1
    USAGE = 2
    RESOURCE = 3
    DISAGREEMENT = 4


@dataclass(frozen=True)
class Caps:
    """
    Resource limits shared by the oracles and the deciders.

    Attributes:
        var_cap: Maximum number of variables for exhaustive enumeration.
        gsub_cap: Maximum size of the generalized-subformula set for saturation.
        partition_cap: Maximum number of partitions enumerated by the translation.
        max_iterations: Saturation round budget.
        max_states: Budget on the number of stored minimal sequents during saturation.
        literal_gsub: Use the literal generalized-subformula definition (no clauses for ∇ over ∨).
    """

    var_cap: int = DEFAULT_VAR_CAP
    gsub_cap: int = DEFAULT_GSUB_CAP
    partition_cap: int = DEFAULT_PARTITION_CAP
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    max_states: int = DEFAULT_MAX_STATES
    literal_gsub: bool = False

    def __post_init__(self):
        for name in ("var_cap", "gsub_cap", "partition_cap", "max_iterations", "max_states"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive. Received {getattr(self, name)}.")
        if self.gsub_cap > MAX_GSUB_CAP:
            raise ValueError(f"gsub_cap cannot exceed {MAX_GSUB_CAP}. Received {self.gsub_cap}.")

    @classmethod
    def default(cls) -> "Caps":
        return cls()


class SixLogicError(Exception):
    pass


class FormulaSyntaxError(SixLogicError, ValueError):
    def __init__(self, message: str, text: str = "", line: int | None = None, column: int | None = None):
        self.text = text
        self.line = line
        self.column = column
        position = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{position}")


class EvaluationError(SixLogicError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ResourceExceeded(SixLogicError):
    def __init__(self, details: str, cap: str = "", limit: Any = None):
        self.details = details
        self.cap = cap
        self.limit = limit
        super().__init__(details)


class IndexMismatchError(SixLogicError):
    pass


class RuleApplicationError(SixLogicError):
    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(f"{reason}: {message}")


class WitnessError(SixLogicError):
    pass


class StreamliningError(SixLogicError):
    pass


class UsageError(SixLogicError):
    pass


class EngineDisagreement(SixLogicError):
    def __init__(self, sequent: Any, verdicts: dict[str, str]):
        self.sequent = sequent
        self.verdicts = verdicts
        listed = ", ".join(f"{engine}={verdict}" for engine, verdict in verdicts.items())
        super().__init__(f"engines disagree on {sequent}: {listed}")

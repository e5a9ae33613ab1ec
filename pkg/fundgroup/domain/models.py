from dataclasses import dataclass, field
from enum import StrEnum
from typing import Tuple


class OutputFormat(StrEnum):
    TEXT = "text"
    JSON = "json"


class ResultStatus(StrEnum):
    FOUND = "found"
    PROVEN_EMPTY = "proven_empty"
    UNKNOWN = "unknown_within_bounds"


@dataclass(frozen=True)
class SearchBounds:
    """
    Exponent and precision limits shared by every bounded search.
    """

    units: int = 8
    primes: int = 16
    depth: int = 64
    max_n: int = 6

    def __post_init__(self) -> None:
        for name in ("units", "primes", "depth", "max_n"):
            if getattr(self, name) <= 0:
                raise ValueError(f"bound '{name}' must be positive")


@dataclass(frozen=True)
class SessionConfig:
    """
    Everything a CLI invocation can tune.
    """

    bounds: SearchBounds = field(default_factory=SearchBounds)
    output_format: OutputFormat = OutputFormat.TEXT
    stages: int = 8
    trace_tolerance: float = 1e-9
    seed: int = 20240229
    cases: int = 1000
    equivariance_cases: int = 60
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.stages <= 0:
            raise ValueError("stages must be positive")
        if self.cases <= 0 or self.equivariance_cases <= 0:
            raise ValueError("case counts must be positive")
        if self.trace_tolerance <= 0:
            raise ValueError("trace tolerance must be positive")


@dataclass
class ComputationNotes:
    """
    Warnings and bound hits collected while a computation runs.
    """

    notes: list[str] = field(default_factory=list)
    unknown: bool = False

    def add(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    def mark_unknown(self, message: str) -> None:
        self.unknown = True
        self.add(message)

    def as_tuple(self) -> Tuple[str, ...]:
        return tuple(self.notes)

from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Callable, Optional, Tuple

from fundgroup.domain.errors import IndexOutOfRange, InvariantViolation
from fundgroup.features.scalars.intervals import Interval, width
from fundgroup.features.scalars.models import ExactScalar

IntMatrix = Tuple[Tuple[int, ...], ...]
StepRule = Callable[[int], IntMatrix]
# stage -> weights[trace][block]: phi_i restricted to stage k is sum_j w_ij tau_j
ClosedForm = Callable[[int], Tuple[Tuple[ExactScalar, ...], ...]]
# stage m -> s with phi_i(1_i) >= 1 - s at stage m
TailBound = Callable[[int], Fraction]


def check_step(matrix: IntMatrix, cols: int, stage: int) -> None:
    if not matrix or any(len(row) != cols for row in matrix):
        raise InvariantViolation(f"step {stage} must have {cols} columns")
    if any(x < 0 for row in matrix for x in row):
        raise InvariantViolation(f"step {stage} has a negative multiplicity")
    if any(not any(row) for row in matrix) or any(not any(row[j] for row in matrix) for j in range(cols)):
        raise InvariantViolation(f"step {stage} has a zero row or column; embeddings must be unital with full support")


@dataclass(frozen=True)
class BratteliDiagram:
    """
    Initial block sizes and multiplicity matrices, dims^(k+1) = M_k · dims^(k).

    Steps past the listed ones come from `rule` when the diagram is an infinite family.
    """

    initial: Tuple[int, ...]
    steps: Tuple[IntMatrix, ...] = ()
    name: str = ""
    rule: Optional[StepRule] = field(default=None, compare=False, repr=False)
    closed_form: Optional[ClosedForm] = field(default=None, compare=False, repr=False)
    tail_bound: Optional[TailBound] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.initial or any(s < 1 for s in self.initial):
            raise InvariantViolation("initial block sizes must be positive")
        cols = len(self.initial)
        for k, m in enumerate(self.steps):
            check_step(m, cols, k)
            cols = len(m)

    @property
    def is_infinite(self) -> bool:
        return self.rule is not None

    @property
    def listed_stages(self) -> int:
        return len(self.steps)

    def step(self, k: int) -> IntMatrix:
        if k < 0:
            raise IndexOutOfRange(f"stage {k} is negative")
        if k < len(self.steps):
            return self.steps[k]
        if self.rule is None:
            raise IndexOutOfRange(f"diagram '{self.name}' lists only {len(self.steps)} steps, step {k} requested")
        m = self.rule(k)
        check_step(m, len(m[0]) if m else 0, k)
        return m

    def stage_limit(self, requested: int) -> int:
        """Number of usable steps: all listed ones, or `requested` for a rule."""
        return requested if self.is_infinite else min(requested, len(self.steps))


class EnclosureSource(StrEnum):
    PULLBACK = "pullback"
    CLOSED_FORM = "closed form"


@dataclass(frozen=True)
class TraceEnclosure:
    """
    Per extreme trace, per block: rational interval around phi_i(1_j) at `stage`.
    """

    stage: int
    horizon: int
    weights: Tuple[Tuple[Interval, ...], ...]
    source: EnclosureSource = EnclosureSource.PULLBACK

    @property
    def width(self) -> Fraction:
        return max((width(iv) for row in self.weights for iv in row), default=Fraction(0))

    def contains(self, values: Tuple[Tuple[Fraction, ...], ...]) -> bool:
        return all(lo <= v <= hi for row, vals in zip(self.weights, values) for (lo, hi), v in zip(row, vals))


class MembershipAnswer(StrEnum):
    YES = "yes"
    UNKNOWN = "unknown"

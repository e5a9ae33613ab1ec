from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Optional, Tuple

from fundgroup.features.lattices.models import DenominatorProfile
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.models import ExactScalar


class AlgebraKind(StrEnum):
    FINITE_DIMENSIONAL = "finite"
    UHF = "uhf"
    DIRECT_SUM = "sum"
    TENSOR = "tensor"
    DIMENSION_GROUP = "dimgroup"
    ROTATION = "rotation"
    CUSTOM = "custom"


@dataclass(frozen=True)
class AlgebraModel:
    """
    Tagged description of an algebra whose pairing group E the builders can produce.

    Only the fields of the model's kind are read: sizes (finite), profile (uhf), parts
    (sum, tensor), module + order_unit (dimgroup), theta (rotation), module (custom).
    """

    kind: AlgebraKind
    name: str = ""
    sizes: Tuple[int, ...] = ()
    profile: Optional[DenominatorProfile] = None
    parts: Tuple["AlgebraModel", ...] = ()
    module: Optional[PairingModule] = None
    order_unit: Tuple[ExactScalar, ...] = ()
    theta: Optional[ExactScalar] = None
    trace_weights: Tuple[Tuple[Fraction, ...], ...] = ()
    realized: Tuple[MonomialMatrix, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"block sizes must be positive, got {list(self.sizes)}")
        if self.kind == AlgebraKind.FINITE_DIMENSIONAL and not self.sizes:
            raise ValueError("a finite-dimensional model needs at least one block")
        if self.kind == AlgebraKind.TENSOR and len(self.parts) != 2:
            raise ValueError("a tensor model takes exactly two factors")

    @property
    def trace_count(self) -> int:
        """Number of extreme traces, without building the module."""
        if self.kind == AlgebraKind.FINITE_DIMENSIONAL:
            return len(self.sizes)
        if self.kind in (AlgebraKind.UHF, AlgebraKind.ROTATION):
            return 1
        if self.kind == AlgebraKind.DIRECT_SUM:
            return sum(p.trace_count for p in self.parts)
        if self.kind == AlgebraKind.TENSOR:
            return self.parts[0].trace_count * self.parts[1].trace_count
        return self.module.n if self.module is not None else 0

    def with_realized(self, generators: Tuple[MonomialMatrix, ...]) -> "AlgebraModel":
        return AlgebraModel(
            self.kind,
            self.name,
            self.sizes,
            self.profile,
            self.parts,
            self.module,
            self.order_unit,
            self.theta,
            self.trace_weights,
            generators,
        )


@dataclass(frozen=True)
class BuiltModel:
    """
    Pairing module of a model plus what the builders learned on the way.
    """

    module: PairingModule
    closed_form: Optional[MonomialGroupDesc] = None
    notes: Tuple[str, ...] = ()
    realized: Tuple[MonomialMatrix, ...] = ()

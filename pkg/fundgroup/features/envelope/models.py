from dataclasses import dataclass, field
from enum import StrEnum
from typing import Optional, Tuple

from fundgroup.domain.models import ComputationNotes, SearchBounds
from fundgroup.features.lattices.models import TransporterResult
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, Permutation


class EnvelopeLabel(StrEnum):
    K_THEORETIC = "K-theoretic bound"
    REALIZED = "realized"


class EnvelopeStatus(StrEnum):
    EXACT = "exact"
    GAP = "gap"


@dataclass(frozen=True)
class PairTransport:
    """
    lam·E_source = E_target for projections (0-based coordinates).
    """

    source: int
    target: int
    result: TransporterResult


@dataclass(frozen=True)
class CandidateCheck:
    matrix: MonomialMatrix
    verified: bool


@dataclass
class EnvelopeReport:
    n: int
    projection_upper: MonomialGroupDesc
    upper: MonomialGroupDesc
    lower: MonomialGroupDesc
    exact: Optional[MonomialGroupDesc]
    admitted: Tuple[Permutation, ...]
    transports: Tuple[PairTransport, ...]
    block_support: Tuple[Tuple[bool, ...], ...]
    coupling_classes: Tuple[Tuple[int, ...], ...]
    bounds: SearchBounds
    notes: ComputationNotes = field(default_factory=ComputationNotes)
    label: EnvelopeLabel = EnvelopeLabel.K_THEORETIC
    rejected: Tuple[CandidateCheck, ...] = ()

    @property
    def status(self) -> EnvelopeStatus:
        return EnvelopeStatus.EXACT if self.exact is not None else EnvelopeStatus.GAP

    @property
    def has_unknowns(self) -> bool:
        return self.notes.unknown

from typing import Dict, List, Optional, Sequence, Tuple

from fundgroup.domain.errors import DimensionTooLarge
from fundgroup.domain.models import ComputationNotes, ResultStatus, SearchBounds
from fundgroup.features.envelope.logic import (
    Classes,
    adjusted_representatives,
    admitted_permutations,
    class_prime_generators,
    coordinate_generators,
    coupling_classes,
    diagonal_candidates,
    permutes_classes,
    projection_rep,
    projections,
    support_matrix,
    unit_class_candidates,
    verify,
)
from fundgroup.features.envelope.models import CandidateCheck, EnvelopeLabel, EnvelopeReport, PairTransport
from fundgroup.features.lattices.models import MultiplicativeGroupDesc, TransporterResult
from fundgroup.features.monomial.logic import diagonal, equal_groups, generate_group
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix
from fundgroup.features.pairing.logic import module_stabilizer, module_transporter
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.logic import maximal_order_unit
from fundgroup.features.scalars.models import ONE, ExactScalar
from fundgroup.kernel.caching.manager import ComputationCache
from fundgroup.kernel.system.config import DEFAULT_BOUNDS
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("envelope")

Diagonal = Tuple[ExactScalar, ...]
Transports = Dict[Tuple[int, int], TransporterResult]


class EnvelopeProcessor:
    """
    Computes {B = D·U(sigma) : E·B = E} as a verified lower group, a projection upper
    group and, when they meet, the exact group.
    """

    def __init__(self, bounds: SearchBounds = DEFAULT_BOUNDS, cache: Optional[ComputationCache] = None):
        self.bounds = bounds
        self.cache = cache if cache is not None else ComputationCache()

    def _stabilizer(self, proj: PairingModule) -> MultiplicativeGroupDesc:
        key = ("stab", proj, self.bounds.units)
        return self.cache.get_or_compute(key, lambda: module_stabilizer(proj, self.bounds.units))

    def _transport(self, source: PairingModule, target: PairingModule) -> TransporterResult:
        key = ("transport", source, target, self.bounds.units, self.bounds.depth)
        return self.cache.get_or_compute(key, lambda: module_transporter(source, target, self.bounds.units, self.bounds.depth))

    def transports(self, projs: Sequence[PairingModule]) -> Transports:
        n = len(projs)
        out: Transports = {}
        for i in range(n):
            for j in range(n):
                if i == j:
                    out[(i, j)] = TransporterResult.found(ONE, self._stabilizer(projs[i]))
                else:
                    out[(i, j)] = self._transport(projs[i], projs[j])
        return out

    def block_support(self, module: PairingModule) -> Tuple[Tuple[bool, ...], ...]:
        self._check_size(module)
        return support_matrix(module.n, self.transports(projections(module)))

    def _check_size(self, module: PairingModule) -> None:
        if module.n > self.bounds.max_n:
            raise DimensionTooLarge(f"{module.n} traces exceed the configured maximum of {self.bounds.max_n}")

    def process(self, module: PairingModule, realized: Sequence[MonomialMatrix] = ()) -> EnvelopeReport:
        self._check_size(module)
        n = module.n
        notes = ComputationNotes()
        field_text = "Q" if module.radicand == 1 else f"Q(sqrt({module.radicand}))"
        notes.add(f"diagonal entries restricted to {field_text}")

        projs = projections(module)
        stabs = [self._stabilizer(p) for p in projs]
        for i, s in enumerate(stabs):
            if not s.complete:
                notes.mark_unknown(f"stabilizer of projection {i + 1} may be incomplete")
        transports = self.transports(projs)
        for (i, j), res in transports.items():
            if res.status == ResultStatus.UNKNOWN:
                notes.mark_unknown(f"transporter E_{i + 1} -> E_{j + 1} undecided: {res.reason}")

        admitted = admitted_permutations(n, transports)
        coord_gens = coordinate_generators(n, stabs)
        projection_reps = []
        for perm in admitted:
            rep = projection_rep(perm, transports)
            if rep is None:
                notes.mark_unknown(f"no representative for admitted permutation {perm.text()}")
            else:
                projection_reps.append(rep)
        projection_upper = self._group(n, coord_gens, projection_reps)

        classes = coupling_classes(module)
        upper_gens, upper_reps, verified_reps = self._refine(module, classes, stabs, coord_gens, projection_reps, notes)
        upper = self._group(n, upper_gens, upper_reps)

        lower, rejected = self._lower(module, classes, coord_gens, upper_gens, verified_reps)
        rejected += [CandidateCheck(rep, False) for rep in upper_reps if rep not in verified_reps]
        exact = lower if not notes.unknown and equal_groups(lower, upper) else None
        if exact is None:
            notes.add("verified lower group is strictly inside the upper bound within the search bounds")
        label = EnvelopeLabel.K_THEORETIC
        if exact is not None and realized and equal_groups(generate_group(n, list(realized)), exact):
            label = EnvelopeLabel.REALIZED

        logger.info("envelope of n=%d: %d admitted permutations, exact=%s", n, len(admitted), exact is not None)
        return EnvelopeReport(
            n=n,
            projection_upper=projection_upper,
            upper=upper,
            lower=lower,
            exact=exact,
            admitted=tuple(admitted),
            transports=tuple(PairTransport(i, j, r) for (i, j), r in sorted(transports.items())),
            block_support=support_matrix(n, transports),
            coupling_classes=classes,
            bounds=self.bounds,
            notes=notes,
            label=label,
            rejected=tuple(rejected),
        )

    @staticmethod
    def _group(n: int, diag_gens: Sequence[Diagonal], reps: Sequence[MonomialMatrix]) -> MonomialGroupDesc:
        return generate_group(n, [diagonal(g) for g in diag_gens] + list(reps))

    def _refine(
        self,
        module: PairingModule,
        classes: Classes,
        stabs: Sequence[MultiplicativeGroupDesc],
        coord_gens: List[Diagonal],
        reps: Sequence[MonomialMatrix],
        notes: ComputationNotes,
    ) -> Tuple[List[Diagonal], List[MonomialMatrix], List[MonomialMatrix]]:
        """
        Upper diagonal generators, upper coset representatives and the verified ones among
        them. Every element with permutation sigma is rep·D with D in the per-coordinate
        stabilizers, so the search adjusts rep by those; an unresolved sigma keeps its
        projection representative and widens the diagonal part back to per coordinate.
        """
        n = module.n
        if module.radicand > 1:
            notes.add("quadratic field: diagonal part of the upper bound is per coordinate")
            gens = coord_gens
        else:
            gens = class_prime_generators(n, classes, stabs)
        upper_reps: List[MonomialMatrix] = []
        verified: List[MonomialMatrix] = []
        unresolved = False
        for rep in reps:
            if rep.perm.is_identity:
                continue
            if not permutes_classes(rep.perm, classes):
                logger.debug("permutation %s breaks the coupling classes", rep.perm.text())
                continue
            found = next((c for c in adjusted_representatives(rep, coord_gens, self.bounds.primes) if verify(module, c)), None)
            if found is None and not coord_gens:
                # rep is the only candidate for sigma
                logger.debug("permutation %s fails the joint test", rep.perm.text())
            elif found is None:
                unresolved = True
                upper_reps.append(rep)
                notes.mark_unknown(f"no verified element for permutation {rep.perm.text()} within prime exponent {self.bounds.primes}")
            else:
                upper_reps.append(found)
                verified.append(found)
        if unresolved:
            gens = coord_gens
        return gens, upper_reps, verified

    def _lower(
        self,
        module: PairingModule,
        classes: Classes,
        coord_gens: List[Diagonal],
        upper_gens: List[Diagonal],
        verified_reps: Sequence[MonomialMatrix],
    ) -> Tuple[MonomialGroupDesc, List[CandidateCheck]]:
        n = module.n
        candidates = diagonal_candidates(n, upper_gens, self.bounds.primes, self.bounds.units)
        if upper_gens is not coord_gens:
            candidates += diagonal_candidates(n, coord_gens, 1, 1)
        if module.radicand > 1:
            candidates += unit_class_candidates(n, classes, maximal_order_unit(module.radicand), self.bounds.units)
        verified: List[MonomialMatrix] = list(verified_reps)
        rejected: List[CandidateCheck] = []
        seen = set()
        for cand in candidates:
            if cand in seen or cand.is_identity:
                continue
            seen.add(cand)
            if verify(module, cand):
                verified.append(cand)
            else:
                rejected.append(CandidateCheck(cand, False))
        return generate_group(n, verified), rejected


def k_envelope(
    module: PairingModule,
    bounds: SearchBounds = DEFAULT_BOUNDS,
    realized: Sequence[MonomialMatrix] = (),
) -> EnvelopeReport:
    return EnvelopeProcessor(bounds).process(module, realized)


def block_support(module: PairingModule, bounds: SearchBounds = DEFAULT_BOUNDS) -> Tuple[Tuple[bool, ...], ...]:
    return EnvelopeProcessor(bounds).block_support(module)

"""
Plain-data views of results. Every value is a string, bool, int or nested list/dict so
the same payload feeds both the text templates and the JSON document.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from fundgroup.domain.models import SearchBounds
from fundgroup.features.algebras.models import AlgebraModel, BuiltModel
from fundgroup.features.bratteli.models import BratteliDiagram, TraceEnclosure
from fundgroup.features.envelope.models import EnvelopeReport
from fundgroup.features.lattices.models import MultiplicativeGroupDesc, TransporterResult
from fundgroup.features.monomial.logic import det_group, equal_groups
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, WeightedIsoResult
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.models import ExactScalar
from fundgroup.features.scalars.parsing import format_scalar

Payload = Dict[str, Any]


def fraction_text(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def scalar_text(x: ExactScalar) -> str:
    return format_scalar(x)


def matrix_payload(m: MonomialMatrix) -> Payload:
    return {"perm": m.perm.text(), "diag": [scalar_text(d) for d in m.diag], "text": m.text()}


def group_payload(group: MonomialGroupDesc) -> Payload:
    return {
        "n": group.n,
        "diag_gens": [[scalar_text(x) for x in gen] for gen in group.diag_gens],
        "cosets": [matrix_payload(r) for r in group.coset_reps],
    }


def multiplicative_payload(group: MultiplicativeGroupDesc) -> Payload:
    return {"generators": [scalar_text(g) for g in group.generators], "complete": group.complete}


def transporter_payload(result: TransporterResult) -> Payload:
    return {
        "status": str(result.status),
        "representative": scalar_text(result.representative) if result.representative is not None else None,
        "stabilizer": multiplicative_payload(result.stabilizer) if result.stabilizer is not None else None,
        "reason": result.reason,
    }


def weighted_iso_payload(result: WeightedIsoResult) -> Payload:
    return {
        "status": str(result.status),
        "matrix": matrix_payload(result.matrix) if result.matrix is not None else None,
        "reason": result.reason,
    }


def bounds_payload(bounds: SearchBounds) -> Payload:
    return {"units": bounds.units, "primes": bounds.primes, "depth": bounds.depth, "max_n": bounds.max_n}


def module_payload(module: PairingModule) -> Payload:
    return {
        "n": module.n,
        "field": "Q" if module.radicand == 1 else f"Q(sqrt({module.radicand}))",
        "traces": list(module.names()),
        "rank": module.rank,
    }


def envelope_payload(model: AlgebraModel, built: BuiltModel, report: EnvelopeReport) -> Payload:
    exact = report.exact
    closed_match: Optional[bool] = None
    if exact is not None and built.closed_form is not None:
        closed_match = equal_groups(exact, built.closed_form)
    return {
        "model": {"name": model.name, "kind": str(model.kind)},
        "module": module_payload(built.module),
        "label": str(report.label),
        "status": str(report.status),
        "exact": group_payload(exact) if exact is not None else None,
        "lower": group_payload(report.lower),
        "upper": group_payload(report.upper),
        "projection_upper": group_payload(report.projection_upper),
        "det_group": multiplicative_payload(det_group(exact if exact is not None else report.lower)),
        "closed_form_match": closed_match,
        "admitted": [p.text() for p in report.admitted],
        "block_support": [["1" if x else "0" for x in row] for row in report.block_support],
        "coupling_classes": [[i + 1 for i in cls] for cls in report.coupling_classes],
        "transports": [
            {"source": t.source + 1, "target": t.target + 1, **transporter_payload(t.result)} for t in report.transports
        ],
        "rejected": [matrix_payload(c.matrix) for c in report.rejected],
        "notes": list(built.notes) + [n for n in report.notes.as_tuple() if n not in built.notes],
        "bounds": bounds_payload(report.bounds),
    }


def enclosure_payload(diagram: BratteliDiagram, enclosure: TraceEnclosure, closed: Optional[Sequence[Sequence[ExactScalar]]]) -> Payload:
    traces: List[Payload] = []
    for i, row in enumerate(enclosure.weights):
        blocks = []
        for j, (lo, hi) in enumerate(row):
            entry: Payload = {"block": j + 1, "lo": fraction_text(lo), "hi": fraction_text(hi), "width": f"{float(hi - lo):.3e}"}
            entry["closed_form"] = scalar_text(closed[i][j]) if closed is not None else None
            blocks.append(entry)
        traces.append({"trace": i + 1, "blocks": blocks})
    return {
        "diagram": diagram.name,
        "stage": enclosure.stage,
        "horizon": enclosure.horizon,
        "source": str(enclosure.source),
        "width": f"{float(enclosure.width):.3e}",
        "traces": traces,
    }

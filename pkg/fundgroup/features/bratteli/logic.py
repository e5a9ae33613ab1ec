from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fundgroup.domain.errors import IndexOutOfRange, NonConvergent, UnsupportedDomain
from fundgroup.features.bratteli.models import (
    BratteliDiagram,
    ClosedForm,
    EnclosureSource,
    MembershipAnswer,
    TraceEnclosure,
)
from fundgroup.features.lattices.models import ZERO_PROFILE
from fundgroup.features.pairing.logic import build_module, member
from fundgroup.features.scalars.intervals import Interval, enclose
from fundgroup.features.scalars.models import ExactScalar, ScalarLike, as_scalar
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("bratteli")

RationalMatrix = List[List[Fraction]]

ENCLOSURE_BITS = 96


def _as_array(matrix: Sequence[Sequence[int]]) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in matrix], dtype=object)


def dims(diagram: BratteliDiagram, k: int) -> Tuple[int, ...]:
    """Exact block sizes at stage k."""
    if k < 0:
        raise IndexOutOfRange(f"stage {k} is negative")
    d = np.array(diagram.initial, dtype=object)
    for s in range(k):
        d = _as_array(diagram.step(s)).dot(d)
    return tuple(int(x) for x in d)


def step_product(diagram: BratteliDiagram, k: int, m: int) -> np.ndarray:
    """M_{m-1} ... M_k, mapping stage-k multiplicities to stage m."""
    if m < k:
        raise IndexOutOfRange(f"horizon {m} before stage {k}")
    n = len(dims(diagram, k))
    product = np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object)
    for s in range(k, m):
        product = _as_array(diagram.step(s)).dot(product)
    return product


def simplicity_check(diagram: BratteliDiagram, window: int, stages: int = 8) -> bool:
    """
    True when every product of `window` consecutive steps is entrywise positive over the
    available stages. Sufficient for simplicity of the limit at this truncation.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    limit = diagram.stage_limit(stages)
    if limit < window:
        return len(diagram.initial) == 1
    for s in range(limit - window + 1):
        product = step_product(diagram, s, s + window)
        if not all(x > 0 for x in product.flat):
            logger.debug("steps %d..%d have a zero entry", s, s + window - 1)
            return False
    return True


def pullback_matrix(diagram: BratteliDiagram, k: int, m: int) -> RationalMatrix:
    """
    L with w^(k) = L w^(m) for normalized block weights w_j = phi(1_j).

    Minimal-projection values pull back through the transpose: t^(k) = P^T t^(m).
    """
    dk, dm = dims(diagram, k), dims(diagram, m)
    product = step_product(diagram, k, m)
    return [[Fraction(dk[j] * int(product[i][j]), dm[i]) for i in range(len(dm))] for j in range(len(dk))]


def _pullback_box(diagram: BratteliDiagram, k: int, m: int) -> Tuple[Tuple[Interval, ...], ...]:
    lmat = pullback_matrix(diagram, k, m)
    n = len(lmat[0])
    tail = diagram.tail_bound(m) if diagram.tail_bound is not None else Fraction(1)
    tail = min(max(tail, Fraction(0)), Fraction(1))
    columns = [[row[i] for row in lmat] for i in range(n)]
    boxes = []
    for i in range(n):
        corners = [columns[i]]
        for j in range(n):
            if j != i:
                corners.append([(1 - tail) * a + tail * b for a, b in zip(columns[i], columns[j])])
        boxes.append(tuple((min(c[b] for c in corners), max(c[b] for c in corners)) for b in range(len(lmat))))
    return tuple(boxes)


def _intersect(a: Interval, b: Interval) -> Optional[Interval]:
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    return (lo, hi) if lo <= hi else None


def trace_weights(
    diagram: BratteliDiagram,
    k: int,
    horizon: int,
    use_closed_form: bool = True,
    shrink: Fraction = Fraction(1),
) -> TraceEnclosure:
    """
    Enclosures of the extreme traces at stage k, trace i taken as the limit of the
    stage-`horizon` state concentrated on vertex i.

    Without a family tail bound the box is the whole pulled-back simplex; a diagram's
    closed form, when declared, is intersected in at ENCLOSURE_BITS precision.
    """
    if horizon < k:
        raise IndexOutOfRange(f"horizon {horizon} before stage {k}")
    if len(dims(diagram, horizon)) != len(dims(diagram, k)):
        raise UnsupportedDomain("vertex count changes between stage and horizon; extreme traces are not identified")
    boxes = _pullback_box(diagram, k, horizon)
    enclosure = TraceEnclosure(k, horizon, boxes)
    if diagram.tail_bound is None and horizon > k + 1:
        first = TraceEnclosure(k, k + 1, _pullback_box(diagram, k, k + 1))
        if first.width > 0 and enclosure.width >= shrink * first.width:
            raise NonConvergent(f"enclosure width {float(enclosure.width):.3g} did not shrink by horizon {horizon}")

    if use_closed_form and diagram.closed_form is not None:
        exact = diagram.closed_form(k)
        refined = []
        for box_row, exact_row in zip(boxes, exact):
            row = []
            for box, value in zip(box_row, exact_row):
                cut = _intersect(box, enclose(value, ENCLOSURE_BITS))
                if cut is None:
                    logger.warning("closed form of '%s' leaves the pullback enclosure at stage %d", diagram.name, k)
                    return enclosure
                row.append(cut)
            refined.append(tuple(row))
        return TraceEnclosure(k, horizon, tuple(refined), EnclosureSource.CLOSED_FORM)
    return enclosure


def _pull_exact(matrix: RationalMatrix, vec: Sequence[ExactScalar]) -> List[ExactScalar]:
    out = []
    for row in matrix:
        acc = ExactScalar()
        for a, b in zip(row, vec):
            if a:
                acc = acc + b * a
        out.append(acc)
    return out


def trace_compatibility_check(diagram: BratteliDiagram, closed_form: ClosedForm, stages: int, tol: float = 1e-9) -> bool:
    """
    phi|A_k = phi|A_(k+1) ∘ psi_k for every k <= stages, and each restriction a state.

    Exact when the scalars are independent; otherwise by enclosure within tol.
    """
    if stages < 1:
        raise ValueError("check at least one stage")
    bound = Fraction(tol)
    upper = closed_form(0)
    for k in range(stages + 1):
        lower, upper = upper, closed_form(k + 1)
        lmat = pullback_matrix(diagram, k, k + 1)
        for i, (w_k, w_next) in enumerate(zip(lower, upper)):
            if sum(w_k, ExactScalar()) != ExactScalar.rational(1):
                logger.info("trace %d at stage %d is not normalized", i + 1, k)
                return False
            pulled = _pull_exact(lmat, w_next)
            for a, b in zip(w_k, pulled):
                diff = a - b
                if diff.is_zero:
                    continue
                if diff.is_rational:
                    return False
                lo, hi = enclose(diff, ENCLOSURE_BITS)
                if lo < -bound or hi > bound:
                    logger.info("trace %d breaks compatibility at stage %d", i + 1, k)
                    return False
    return True


def pairing_samples(diagram: BratteliDiagram, k: int) -> List[Tuple[ExactScalar, ...]]:
    """
    Pairing vectors (phi_1(e_j), ..., phi_n(e_j)) of a minimal projection e_j per block at stage k.
    """
    if diagram.closed_form is None:
        raise UnsupportedDomain(f"diagram '{diagram.name}' has no closed-form trace weights")
    weights = diagram.closed_form(k)
    sizes = dims(diagram, k)
    return [tuple(row[j] / sizes[j] for row in weights) for j in range(len(sizes))]


def membership_oracle(diagram: BratteliDiagram, vector: Sequence[ScalarLike], depth: int) -> MembershipAnswer:
    """
    YES when the vector is an integer combination of the stage-`depth` samples; stage-k
    block classes are combinations of stage-(k+1) ones, so this covers all stages <= depth.
    """
    samples = pairing_samples(diagram, depth)
    vec = [as_scalar(x) for x in vector]
    if len(vec) != len(samples[0]):
        raise UnsupportedDomain(f"vector of length {len(vec)} for {len(samples[0])} traces")
    module = build_module(len(vec), [(ZERO_PROFILE, samples)])
    return MembershipAnswer.YES if member(vec, module) else MembershipAnswer.UNKNOWN

"""
Reference computations on the named algebras whose fundamental groups are known.
Each check returns a one-line summary or raises CheckFailure.
"""

from fractions import Fraction
from typing import Dict, Tuple

from fundgroup.domain.models import SearchBounds
from fundgroup.features.algebras.families import (
    THETA,
    a1theta,
    a11,
    a_sn,
    a_unit,
    ex_prime,
    ex_tensor,
    expected_group,
    irr_pair,
    irratio2,
    matrix_sum,
    simpleaf,
    zid,
    zid_symbols,
)
from fundgroup.features.algebras.logic import build
from fundgroup.features.algebras.models import AlgebraModel, BuiltModel
from fundgroup.features.bratteli import families as diagrams
from fundgroup.features.bratteli.logic import membership_oracle, pairing_samples, trace_compatibility_check, trace_weights
from fundgroup.features.bratteli.models import EnclosureSource, MembershipAnswer
from fundgroup.features.envelope.logic import verify
from fundgroup.features.envelope.models import EnvelopeReport
from fundgroup.features.envelope.processor import k_envelope
from fundgroup.features.lattices.models import MultiplicativeGroupDesc
from fundgroup.features.monomial.logic import (
    antidiagonal,
    conjugate,
    contains,
    det_group,
    diagonal,
    equal_groups,
    group_from_description,
    group_generators,
    inverse,
    kron,
    multiply,
    same_multiplicative_group,
    symmetric_group,
    trivial_group,
    weighted_iso_solver,
)
from fundgroup.features.monomial.models import MonomialGroupDesc
from fundgroup.features.scalars.logic import bracket, fundamental_unit
from fundgroup.features.scalars.models import ExactScalar
from fundgroup.features.scalars.parsing import parse_scalar
from fundgroup.services.selftest.models import require

EnvelopeRun = Tuple[BuiltModel, EnvelopeReport]


class GoldenModels:
    """
    Envelope runs of the named models, computed once per bounds.
    """

    def __init__(self, bounds: SearchBounds):
        self.bounds = bounds
        self._runs: Dict[str, EnvelopeRun] = {}

    def run(self, key: str, model: AlgebraModel) -> EnvelopeRun:
        if key not in self._runs:
            built = build(model)
            self._runs[key] = (built, k_envelope(built.module, self.bounds, built.realized))
        return self._runs[key]

    def exact(self, key: str, model: AlgebraModel) -> MonomialGroupDesc:
        built, report = self.run(key, model)
        require(report.exact is not None, f"{key}: envelope not exact ({'; '.join(report.notes.as_tuple())})")
        assert report.exact is not None
        return report.exact


def _same_det(group: MonomialGroupDesc, *generators: ExactScalar | int) -> bool:
    target = MultiplicativeGroupDesc(tuple(ExactScalar.rational(g) if isinstance(g, int) else g for g in generators))
    return same_multiplicative_group(det_group(group), target)


def check_matrix(models: GoldenModels) -> str:
    exact = models.exact("m2m3", matrix_sum([2, 3]))
    require(equal_groups(exact, expected_group("finite_dimensional", sizes=(2, 3))), "M2+M3 group differs from the closed form")
    require(contains(exact, antidiagonal([Fraction(3, 2), Fraction(2, 3)])), "antidiag(3/2,2/3) missing")
    require(_same_det(exact), "det group of M2+M3 is not trivial")
    c2 = models.exact("c2", matrix_sum([1, 1]))
    result = weighted_iso_solver(c2, exact)
    require(result.matrix is not None, f"no weighted isomorphism C^2 -> M2+M3: {result.reason}")
    assert result.matrix is not None
    require(equal_groups(conjugate(c2, result.matrix), exact), "weighted isomorphism does not conjugate")
    factor = multiply(result.matrix, inverse(diagonal([2, 3])))
    require(equal_groups(conjugate(c2, factor), c2), "solver weight is not diag(2,3) up to a normalizing factor")
    return f"exact, P = {result.matrix.text()}"


def check_prime(models: GoldenModels) -> str:
    exact = models.exact("prime", ex_prime())
    require(equal_groups(exact, expected_group("prime")), "2^inf+2^inf+3^inf group differs from the closed form")
    require(len(exact.permutations) == 2, "expected permutation image {e, (1 2)}")
    require(_same_det(exact, 2, 3), "det group is not <2, 3>")
    return "exact, det <2,3>"


def check_tensor(models: GoldenModels) -> str:
    exact = models.exact("tensor", ex_tensor())
    require(equal_groups(exact, expected_group("tensor")), "2^inf (x) C^2 group differs from the closed form")
    product = kron(group_from_description(1, [[2]]), symmetric_group(2))
    require(all(contains(exact, g) for g in group_generators(product)), "kron group is not inside F")
    witness = diagonal([2, 1])
    require(contains(exact, witness) and not contains(product, witness), "diag(2,1) does not witness strictness")
    require(_same_det(exact, 2) and _same_det(product, 4), "det groups are not <2> and <4>")
    return "exact, kron strictly smaller"


def check_irr(models: GoldenModels) -> str:
    eps = fundamental_unit(5)
    require(eps == parse_scalar("2+sqrt(5)"), f"fundamental_unit(5) = {eps}")
    exact = models.exact("irr", irr_pair(5))
    require(equal_groups(exact, expected_group("irr_pair", d=5)), "A_sqrt5 + A_sqrt5' group differs from the closed form")
    require(_same_det(exact, eps), "det group is not <2+sqrt(5)>")
    return "exact, det <2+sqrt(5)>"


def check_unit_and_symmetric(models: GoldenModels) -> str:
    for n in (2, 3, 4):
        require(equal_groups(models.exact(f"a_unit{n}", a_unit(n)), trivial_group(n)), f"A_unit({n}) not trivial")
        require(equal_groups(models.exact(f"zid{n}", zid(zid_symbols(n))), trivial_group(n)), f"A_zid({n}) not trivial")
        require(equal_groups(models.exact(f"a_sn{n}", a_sn(n)), symmetric_group(n)), f"A_S{n} is not U(S_{n})")
    return "n = 2, 3, 4"


def check_theta_pairs(models: GoldenModels) -> str:
    g11 = models.exact("a11", a11())
    g1t = models.exact("a1theta", a1theta())
    g2 = models.exact("irratio2", irratio2())
    require(equal_groups(g11, expected_group("a11")), "A_(1,1) is not {I, swap}")
    require(equal_groups(g1t, expected_group("a1theta")), "A_(1,theta) is not {I, antidiag(theta, 1/theta)}")
    require(equal_groups(g2, expected_group("irratio2", d=2)), "irratio2 group differs from the closed form")
    require(all(_same_det(g) for g in (g11, g1t, g2)), "det groups are not trivial")
    result = weighted_iso_solver(g11, g1t)
    require(result.matrix is not None, f"no weighted isomorphism: {result.reason}")
    assert result.matrix is not None
    theta = ExactScalar.atom(THETA)
    require(equal_groups(conjugate(g11, diagonal([1, theta])), g1t), "diag(1, theta) does not conjugate")
    return f"P = {result.matrix.text()}"


def check_simpleaf_channel(models: GoldenModels) -> str:
    built, report = models.run("simpleaf", simpleaf())
    exact = models.exact("simpleaf", simpleaf())
    require(equal_groups(exact, expected_group("simpleaf")), "simpleaf group differs from {2^n I, 2^n swap}")
    require(_same_det(exact, 4), "det group is not <4>")
    witness = diagonal([2, 1])
    require(contains(report.projection_upper, witness), "projection bound does not contain diag(2,1)")
    require(not verify(built.module, witness), "diag(2,1) passed verification")
    return "exact, det <4>, projection bound strict"


def check_bratteli_simpleaf(horizon: int = 8, stages: int = 6) -> str:
    diagram = diagrams.simpleaf()
    require(trace_compatibility_check(diagram, diagrams.simpleaf_weights, stages), "closed-form traces are not compatible")
    enclosure = trace_weights(diagram, 0, horizon)
    require(enclosure.source == EnclosureSource.CLOSED_FORM, "closed form not used")
    require(enclosure.width < Fraction(1, 10**9), f"width {float(enclosure.width):.3g} not below 1e-9")
    pulled = trace_weights(diagram, 0, horizon, use_closed_form=False)
    for box_row, row in zip(pulled.weights, diagrams.simpleaf_weights(0)):
        for (lo, hi), value in zip(box_row, row):
            v_lo, v_hi = bracket(value, 128)
            require(lo <= v_lo and v_hi <= hi, "closed form outside the pullback enclosure")
    for n in (1, 2, 3):
        require(tuple(pairing_samples(diagram, n)) == diagrams.simpleaf_generators(n), f"stage {n} samples differ")
    require(membership_oracle(diagram, [1, 1], 0) == MembershipAnswer.YES, "unit class not found")
    return f"width {float(enclosure.width):.2e} at horizon {horizon}"


def check_bratteli_prime2(p: int = 3, stages: int = 5) -> str:
    diagram = diagrams.prime2(p)
    require(diagram.closed_form is not None, "prime2 has no closed form")
    assert diagram.closed_form is not None
    require(trace_compatibility_check(diagram, diagram.closed_form, stages), "prime2 traces are not compatible")
    return f"p = {p}, {stages} stages"

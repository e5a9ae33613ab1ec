from fractions import Fraction

import pytest

from fundgroup.domain.errors import IndexOutOfRange, InvariantViolation, NonConvergent, UnsupportedDomain
from fundgroup.features.bratteli import families
from fundgroup.features.bratteli.logic import (
    dims,
    membership_oracle,
    pairing_samples,
    pullback_matrix,
    simplicity_check,
    trace_compatibility_check,
    trace_weights,
)
from fundgroup.features.bratteli.models import BratteliDiagram, EnclosureSource, MembershipAnswer
from fundgroup.services.selftest import golden

SMALL = BratteliDiagram(
    initial=(1, 1),
    steps=(((2, 1), (1, 2)), ((2, 1), (1, 2)), ((3, 1), (1, 3))),
    name="small",
)
DISCONNECTED = BratteliDiagram(initial=(1, 1), steps=(((1, 0), (0, 1)),) * 3, name="two copies")


def test_dims_per_stage():
    assert [dims(SMALL, k) for k in range(4)] == [(1, 1), (3, 3), (9, 9), (36, 36)]


def test_steps_past_the_listed_ones():
    with pytest.raises(IndexOutOfRange):
        SMALL.step(3)
    assert SMALL.stage_limit(8) == 3
    assert families.simpleaf().stage_limit(8) == 8


@pytest.mark.parametrize(
    "steps",
    [
        (((1, -1), (1, 1)),),
        (((1, 0), (0, 0)),),
        (((1, 1, 1), (1, 1)),),
    ],
)
def test_bad_steps_are_rejected(steps):
    with pytest.raises(InvariantViolation):
        BratteliDiagram(initial=(1, 1), steps=steps)


def test_simplicity_check():
    assert simplicity_check(SMALL, 1)
    assert not simplicity_check(DISCONNECTED, 2)
    with pytest.raises(ValueError):
        simplicity_check(SMALL, 0)


def test_pullback_rows_are_stochastic():
    lmat = pullback_matrix(SMALL, 0, 2)
    for col in range(2):
        assert sum(row[col] for row in lmat) == 1


def test_pullback_enclosure_shrinks():
    enclosure = trace_weights(SMALL, 0, 3)
    assert enclosure.source == EnclosureSource.PULLBACK
    assert enclosure.width == Fraction(1, 18)
    half = Fraction(1, 2)
    assert enclosure.contains(((half, half), (half, half)))


def test_enclosure_that_does_not_shrink():
    with pytest.raises(NonConvergent):
        trace_weights(DISCONNECTED, 0, 2)


def test_simpleaf_closed_form():
    diagram = families.simpleaf()
    assert trace_compatibility_check(diagram, families.simpleaf_weights, 4)
    enclosure = trace_weights(diagram, 0, 6)
    assert enclosure.source == EnclosureSource.CLOSED_FORM
    assert enclosure.width < Fraction(1, 10**9)


def test_simpleaf_samples_and_membership():
    diagram = families.simpleaf()
    assert tuple(pairing_samples(diagram, 2)) == families.simpleaf_generators(2)
    assert membership_oracle(diagram, [1, 1], 1) == MembershipAnswer.YES
    assert membership_oracle(diagram, [Fraction(1, 3), Fraction(1, 3)], 1) == MembershipAnswer.UNKNOWN


def test_wrong_closed_form_is_incompatible():
    diagram = families.simpleaf()
    assert not trace_compatibility_check(diagram, lambda k: families.simpleaf_weights(k + 1), 2)


def test_samples_need_a_closed_form():
    with pytest.raises(UnsupportedDomain):
        pairing_samples(SMALL, 0)


def test_prime2_requires_an_odd_prime():
    with pytest.raises(ValueError):
        families.prime2(2)
    with pytest.raises(ValueError):
        families.prime2(9)


def test_golden_bratteli_checks():
    assert golden.check_bratteli_simpleaf()
    assert golden.check_bratteli_prime2()

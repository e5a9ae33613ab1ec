import unittest
from fractions import Fraction

import pytest

from fundgroup.domain.errors import NotFinitelyGenerated, ParseError
from fundgroup.domain.models import ResultStatus
from fundgroup.features.lattices.logic import (
    add_profiles,
    equal,
    format_profile,
    inclusion,
    is_supernatural,
    lattice_from_generators,
    member,
    parse_profile,
    scale,
    stabilizer,
    transporter,
)
from fundgroup.features.lattices.models import ZERO_PROFILE
from fundgroup.features.scalars.models import ExactScalar
from fundgroup.features.scalars.parsing import parse_scalar

DYADIC = parse_profile("default=0 except 2:inf")


class TestProfiles(unittest.TestCase):
    def test_format_is_canonical(self):
        profile = parse_profile("default=0 except 3:1,2:inf")
        self.assertEqual(format_profile(profile), "default=0 except 2:inf,3:1")

    def test_exceptions_equal_to_default_are_dropped(self):
        self.assertEqual(parse_profile("default=1 except 5:1"), parse_profile("default=1"))

    def test_add_profiles(self):
        total = add_profiles(parse_profile("default=0 except 2:1"), parse_profile("default=0 except 2:2,3:inf"))
        self.assertEqual(format_profile(total), "default=0 except 2:3,3:inf")

    def test_supernatural(self):
        self.assertTrue(is_supernatural(DYADIC))
        self.assertFalse(is_supernatural(parse_profile("default=0 except 2:1")))

    def test_bad_profiles(self):
        for text in ("default=-1", "default=0 except 4:inf", "cap=0", "default=0 except 2"):
            with self.assertRaises(ParseError):
                parse_profile(text)


def test_half_integer_lattice():
    lattice = lattice_from_generators([[Fraction(1, 2)]], ZERO_PROFILE)
    assert member([Fraction(3, 2)], lattice)
    assert not member([Fraction(1, 4)], lattice)


def test_dyadic_membership():
    lattice = lattice_from_generators([[1, 3]], DYADIC)
    assert member([Fraction(1, 1024), Fraction(3, 1024)], lattice)
    assert not member([Fraction(1, 3), 1], lattice)
    assert not member([1, 1], lattice)


def test_inclusion_is_strict_for_a_sublattice():
    whole = lattice_from_generators([[1, 0], [0, 1]], ZERO_PROFILE)
    half = lattice_from_generators([[2, 0], [0, 1]], ZERO_PROFILE)
    assert inclusion(half, whole)
    assert not inclusion(whole, half)
    assert not equal(half, whole)


def test_dyadic_stabilizer():
    group = stabilizer(lattice_from_generators([[1]], DYADIC))
    assert group.generators == (ExactScalar.rational(2),)
    assert group.complete


def test_integer_lattice_has_trivial_stabilizer():
    assert stabilizer(lattice_from_generators([[1, 0], [0, 1]], ZERO_PROFILE)).is_trivial


def test_stabilizer_not_finitely_generated():
    with pytest.raises(NotFinitelyGenerated):
        stabilizer(lattice_from_generators([[1]], parse_profile("default=inf")))


def test_quadratic_stabilizers():
    # Z[sqrt(5)] is fixed by the cube of the golden unit, Z[(1+sqrt(5))/2] by the unit itself
    order = lattice_from_generators([[1, 0], [0, 1]], ZERO_PROFILE, radicand=5)
    assert stabilizer(order).generators == (parse_scalar("2+sqrt(5)"),)
    maximal = lattice_from_generators([[1, 0], [Fraction(1, 2), Fraction(1, 2)]], ZERO_PROFILE, radicand=5)
    assert stabilizer(maximal).generators == (parse_scalar("1/2+1/2*sqrt(5)"),)


def test_rational_transporter():
    source = lattice_from_generators([[1, 0], [0, 1]], ZERO_PROFILE)
    result = transporter(source, scale(Fraction(1, 2), source))
    assert result.status == ResultStatus.FOUND
    assert result.representative == ExactScalar.rational(Fraction(1, 2))
    assert result.stabilizer is not None and result.stabilizer.is_trivial


def test_quadratic_transporter():
    source = lattice_from_generators([[1, 0], [0, 1]], ZERO_PROFILE, radicand=5)
    target = scale(parse_scalar("sqrt(5)"), source)
    result = transporter(source, target)
    assert result.is_found
    assert result.representative is not None
    assert equal(scale(result.representative, source), target)


@pytest.mark.parametrize(
    "first, second, reason",
    [
        ([[1, 0], [0, 1]], [[1, 0]], "ranks differ"),
        ([[1, 0]], [[0, 1]], "rational spans differ"),
    ],
)
def test_transporter_obstructions(first, second, reason):
    result = transporter(lattice_from_generators(first, ZERO_PROFILE, n=2), lattice_from_generators(second, ZERO_PROFILE, n=2))
    assert result.is_empty
    assert reason in result.reason


def test_transporter_between_profile_types():
    result = transporter(lattice_from_generators([[1]], ZERO_PROFILE), lattice_from_generators([[1]], DYADIC))
    assert result.is_empty
    assert "unbounded prime sets" in result.reason

import unittest
from fractions import Fraction

import pytest

from fundgroup.domain.errors import NotInvertibleInClosedForm, ParseError, PrecisionExhausted, ZeroScalarError
from fundgroup.features.scalars.logic import bracket, compare, fundamental_unit, invert, maximal_order_unit, norm, sign
from fundgroup.features.scalars.models import ONE, Atom, ExactScalar, is_squarefree, split_square
from fundgroup.features.scalars.parsing import AtomRegistry, format_scalar, parse_scalar


class TestQuadraticArithmetic(unittest.TestCase):
    def test_unit_of_sqrt5(self):
        eps = fundamental_unit(5)
        self.assertEqual(format_scalar(eps), "2+sqrt(5)")
        self.assertEqual(norm(eps), -1)

    def test_maximal_order_unit_is_cube_root(self):
        golden = maximal_order_unit(5)
        self.assertEqual(golden, ExactScalar.quadratic(Fraction(1, 2), Fraction(1, 2), 5))
        self.assertEqual(golden**3, fundamental_unit(5))

    def test_maximal_order_unit_same_when_d_is_not_1_mod_4(self):
        self.assertEqual(maximal_order_unit(3), fundamental_unit(3))
        self.assertEqual(fundamental_unit(3), parse_scalar("2+sqrt(3)"))

    def test_invert(self):
        x = parse_scalar("3+2*sqrt(2)")
        self.assertEqual(x * invert(x), ONE)
        self.assertEqual(invert(x), parse_scalar("3-2*sqrt(2)"))

    def test_invert_zero(self):
        with self.assertRaises(ZeroScalarError):
            invert(ExactScalar())

    def test_mixed_roots_have_no_closed_inverse(self):
        with self.assertRaises(NotInvertibleInClosedForm):
            invert(parse_scalar("sqrt(2)+sqrt(3)"))


def test_parse_and_format():
    assert format_scalar(parse_scalar("3/2")) == "3/2"
    assert format_scalar(parse_scalar("sqrt(8)")) == "2*sqrt(2)"
    assert parse_scalar("(1+sqrt(5))^2") == parse_scalar("6+2*sqrt(5)")
    assert parse_scalar("2^-2") == ExactScalar.rational(Fraction(1, 4))


@pytest.mark.parametrize("text", ["", "1+", "sqrt(x)", "1/0", "2^x", "sym(theta)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_scalar(text)


def test_symbols_need_a_registry():
    registry = AtomRegistry()
    registry.declare(Atom.symbol("theta", Fraction(2718281, 10**6), Fraction(2718282, 10**6), definition="E"))
    x = parse_scalar("1/2*sym(theta)", registry)
    assert format_scalar(x) == "1/2*sym(theta)"
    assert parse_scalar(format_scalar(x), registry) == x


def test_sign_of_near_cancellation():
    # neighbouring convergents of sqrt(2), one from each side
    assert sign(parse_scalar("sqrt(2) - 577/408")) == -1
    assert sign(parse_scalar("sqrt(2) - 1393/985")) == 1
    assert compare(parse_scalar("sqrt(3)"), parse_scalar("sqrt(2)")) == 1


def test_sign_needs_refinable_symbols():
    frozen = Atom.symbol("t", Fraction(1), Fraction(2))
    x = ExactScalar.atom(frozen) - Fraction(3, 2)
    with pytest.raises(PrecisionExhausted):
        sign(x)


def test_bracket_contains_value():
    lo, hi = bracket(parse_scalar("sqrt(2)"), 64)
    assert lo * lo < 2 < hi * hi
    assert hi - lo <= Fraction(1, 2**60)


def test_squarefree_helpers():
    assert is_squarefree(30)
    assert not is_squarefree(12)
    assert split_square(12) == (2, 3)


def test_squarefree_helpers_on_large_radicands():
    big = 1000003
    assert split_square(4 * big**2 * 7) == (2 * big, 7)
    assert not is_squarefree(big**2)
    assert is_squarefree(2 * 3 * big)
    assert parse_scalar(f"sqrt({5 * big**2})") == parse_scalar(f"{big}*sqrt(5)")

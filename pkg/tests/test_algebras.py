import unittest
from fractions import Fraction

import pytest

from fundgroup.domain.errors import InvalidSupernatural, InvariantViolation, NotInModule, Singular, UnsupportedScalar
from fundgroup.features.algebras.families import FAMILIES, a_unit, ex_tensor, matrix_sum
from fundgroup.features.algebras.logic import (
    TORSION_NOTE,
    build,
    dimension_group,
    direct_sum,
    dual_system,
    finite_dimensional,
    rotation,
    tensor,
    uhf,
)
from fundgroup.features.algebras.models import AlgebraKind, AlgebraModel
from fundgroup.features.lattices.logic import parse_profile
from fundgroup.features.monomial.logic import diagonal
from fundgroup.features.pairing.logic import member
from fundgroup.features.scalars.parsing import parse_scalar

DYADIC = parse_profile("default=0 except 2:inf")


class TestFiniteDimensional(unittest.TestCase):
    def test_module_is_block_reciprocals(self):
        module, _ = finite_dimensional([2, 3])
        self.assertTrue(member([Fraction(1, 2), Fraction(1, 3)], module))
        self.assertFalse(member([Fraction(1, 4), 0], module))

    def test_closed_form_group_order(self):
        _, group = finite_dimensional([1, 2, 3])
        self.assertEqual(len(group.permutations), 6)

    def test_rejects_empty_blocks(self):
        with self.assertRaises(ValueError):
            finite_dimensional([2, 0])

    def test_dual_system_unweighted(self):
        self.assertEqual(dual_system([2, 3]), ((1, 0), (0, 1)))

    def test_dual_system_weighted(self):
        rows = dual_system([1, 2], [[Fraction(2, 3), Fraction(1, 3)], [Fraction(1, 4), Fraction(3, 4)]])
        self.assertEqual(rows, ((Fraction(9, 5), Fraction(-3, 5)), (Fraction(-4, 5), Fraction(8, 5))))

    def test_dual_system_singular(self):
        with self.assertRaises(Singular):
            dual_system([1, 1], [[1, 1], [2, 2]])


def test_uhf_requires_supernatural_profile():
    assert member([Fraction(1, 64)], uhf(DYADIC))
    with pytest.raises(InvalidSupernatural):
        uhf(parse_profile("default=0 except 2:1"))


def test_direct_sum_is_blockwise():
    module = direct_sum([uhf(DYADIC), finite_dimensional([3])[0]])
    assert module.n == 2
    assert member([Fraction(1, 8), Fraction(1, 3)], module)
    assert not member([Fraction(1, 3), 0], module)


def test_tensor_with_c2():
    module = tensor(uhf(DYADIC), finite_dimensional([1, 1])[0])
    assert module.n == 2
    assert member([Fraction(1, 4), 0], module)
    built = build(ex_tensor())
    assert TORSION_NOTE in built.notes


def test_rotation_needs_quadratic_irrational():
    module = rotation(parse_scalar("sqrt(5)"))
    assert member([parse_scalar("1+sqrt(5)")], module)
    with pytest.raises(UnsupportedScalar):
        rotation(parse_scalar("3/2"))


def test_dimension_group_normalizes_by_order_unit():
    raw = finite_dimensional([1, 1])[0]
    normalized = dimension_group(raw, [2, 1])
    assert member([Fraction(1, 2), 1], normalized)
    with pytest.raises(NotInModule):
        dimension_group(raw, [Fraction(1, 2), 1])


def test_trace_count_without_building():
    assert matrix_sum([2, 3]).trace_count == 2
    assert ex_tensor().trace_count == 2
    assert AlgebraModel(AlgebraKind.FINITE_DIMENSIONAL, sizes=(1,) * 7).trace_count == 7


def test_realized_generators_must_fix_e():
    bogus = a_unit(2).with_realized((diagonal([2, 1]),))
    with pytest.raises(InvariantViolation):
        build(bogus)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_named_families_build(name):
    args = (3,) if name in ("a_unit", "a_sn") else ()
    built = build(FAMILIES[name](*args))
    assert built.module.n >= 1

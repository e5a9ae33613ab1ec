from fractions import Fraction

import pytest

from fundgroup.domain.errors import DimensionMismatch, NotFinitelyGenerated, PrecisionExhausted, UnsupportedDomain
from fundgroup.features.algebras.logic import finite_dimensional
from fundgroup.features.monomial.logic import antidiagonal, diagonal, multiply, permutation_matrix
from fundgroup.features.monomial.models import Permutation
from fundgroup.features.pairing.logic import (
    act,
    coordinate_projection,
    equal,
    inclusion,
    member,
    module_stabilizer,
    module_transporter,
    scale_module,
    unit_vector_member,
    zero_module,
)
from fundgroup.features.scalars.models import Atom, ExactScalar
from fundgroup.features.scalars.parsing import AtomRegistry, parse_scalar
from fundgroup.infrastructure.loaders.literals import parse_module

M2M3 = finite_dimensional([2, 3])[0]


@pytest.fixture
def registry():
    reg = AtomRegistry()
    reg.declare(Atom.symbol("theta", Fraction(2718281, 10**6), Fraction(2718282, 10**6), definition="E"))
    return reg


def test_membership_and_dimension():
    assert member([Fraction(1, 2), Fraction(2, 3)], M2M3)
    assert not member([Fraction(1, 3), 0], M2M3)
    with pytest.raises(DimensionMismatch):
        member([1], M2M3)


def test_right_action_composes():
    b1, b2 = diagonal([2, 1]), permutation_matrix(Permutation((1, 0)))
    assert equal(act(multiply(b1, b2), M2M3), act(b2, act(b1, M2M3)))


def test_block_weighted_swap_fixes_m2m3():
    assert equal(act(antidiagonal([Fraction(3, 2), Fraction(2, 3)]), M2M3), M2M3)
    assert not equal(act(diagonal([2, 1]), M2M3), M2M3)


def test_scaling_and_inclusion():
    doubled = scale_module(2, M2M3)
    assert inclusion(doubled, M2M3)
    assert not inclusion(M2M3, doubled)


def test_coordinate_projection():
    second = coordinate_projection(M2M3, 2)
    assert second.n == 1
    assert member([Fraction(1, 3)], second)
    assert not member([Fraction(1, 2)], second)


def test_unit_vector_member():
    assert unit_vector_member(M2M3)
    assert not unit_vector_member(parse_module("[1,2] default=0"))


def test_quadratic_module_stabilizer():
    module = parse_module("[1;sqrt(5)] default=0")
    assert module.radicand == 5
    group = module_stabilizer(module)
    assert group.generators == (parse_scalar("2+sqrt(5)"),)
    assert group.complete


def test_stabilizer_errors():
    with pytest.raises(NotFinitelyGenerated):
        module_stabilizer(parse_module("[1] default=inf"))
    with pytest.raises(UnsupportedDomain):
        module_stabilizer(zero_module(2))


def test_transporter_in_the_field():
    module = parse_module("[1;sqrt(5)] default=0")
    target = scale_module(parse_scalar("sqrt(5)"), module)
    result = module_transporter(module, target)
    assert result.is_found
    assert result.representative is not None
    assert equal(scale_module(result.representative, module), target)


def test_transporter_across_channels(registry):
    result = module_transporter(parse_module("[1] default=0"), parse_module("[sym(theta)] default=0", registry))
    assert result.is_found
    assert result.representative == ExactScalar.atom(registry.symbol("theta"))


def test_transporter_empty_between_profile_types():
    result = module_transporter(parse_module("[1] default=0"), parse_module("[1] default=0 except 2:inf"))
    assert result.is_empty


def test_transporter_respects_refinement_depth():
    module = parse_module("[1;sqrt(5)] default=0")
    target = scale_module(parse_scalar("sqrt(5)"), module)
    with pytest.raises(PrecisionExhausted):
        module_transporter(module, target, depth=0)
    assert module_transporter(module, target, depth=2).is_found

from fractions import Fraction

import numpy as np
import pytest

from fundgroup.domain.errors import NotMonomial, Singular
from fundgroup.domain.models import ResultStatus
from fundgroup.features.monomial.logic import (
    antidiagonal,
    conjugate,
    contains,
    decompose,
    dense_product,
    det_group,
    diagonal,
    equal_groups,
    format_permutation,
    generate_group,
    group_from_description,
    inverse,
    kron,
    multiply,
    parse_permutation,
    permutation_matrix,
    power,
    sample_element,
    same_multiplicative_group,
    symmetric_group,
    to_dense,
    trivial_group,
    weighted_iso_solver,
)
from fundgroup.features.monomial.models import MonomialMatrix, Permutation
from fundgroup.features.lattices.models import MultiplicativeGroupDesc
from fundgroup.features.scalars.models import ExactScalar
from fundgroup.features.scalars.parsing import parse_scalar

SWAP = permutation_matrix(Permutation((1, 0)))


def test_decompose_antidiagonal():
    m = decompose([[0, Fraction(3, 2)], [Fraction(2, 3), 0]])
    assert m.text() == "perm=(1 2) diag=3/2,2/3"
    assert m == antidiagonal([Fraction(3, 2), Fraction(2, 3)])


def test_decompose_quadratic_entries():
    m = decompose([[0, parse_scalar("sqrt(5)-2")], [parse_scalar("2+sqrt(5)"), 0]])
    assert m.perm.image == (1, 0)
    assert multiply(m, m) == diagonal([ExactScalar.rational(1), ExactScalar.rational(1)])


def test_decompose_rejects():
    with pytest.raises(NotMonomial):
        decompose([[1, 1], [0, 1]])
    with pytest.raises(NotMonomial):
        decompose([[-1, 0], [0, 1]])
    with pytest.raises(Singular):
        decompose([[0, 0], [0, 1]])


def test_product_matches_dense():
    a = MonomialMatrix(Permutation((2, 0, 1)), tuple(ExactScalar.rational(x) for x in (2, 3, Fraction(1, 5))))
    b = antidiagonal([Fraction(7, 2), 1, 4])
    dense = dense_product(to_dense(a), to_dense(b))
    assert all(x == y for x, y in zip(to_dense(multiply(a, b)).flat, dense.flat))
    assert multiply(a, inverse(a)).is_identity
    assert power(a, 3) == multiply(a, multiply(a, a))


def test_conjugating_swap_by_block_sizes():
    s2 = generate_group(2, [SWAP])
    moved = conjugate(s2, diagonal([2, 3]))
    assert contains(moved, antidiagonal([Fraction(3, 2), Fraction(2, 3)]))
    assert not contains(moved, SWAP)
    assert equal_groups(moved, s2, up_to_perm=False) is False


def test_equal_groups_up_to_perm():
    g1 = group_from_description(2, [[2, 1]])
    g2 = group_from_description(2, [[1, 2]])
    assert not equal_groups(g1, g2)
    assert equal_groups(g1, g2, up_to_perm=True)


def test_kron_is_strictly_inside_the_tensor_group():
    product = kron(group_from_description(1, [[2]]), symmetric_group(2))
    assert contains(product, diagonal([2, 2]))
    assert contains(product, antidiagonal([2, 2]))
    assert not contains(product, diagonal([2, 1]))
    assert same_multiplicative_group(det_group(product), MultiplicativeGroupDesc((ExactScalar.rational(4),)))


def test_det_group_of_swap_weights_is_trivial():
    g = generate_group(2, [antidiagonal([Fraction(3, 2), Fraction(2, 3)])])
    assert det_group(g).is_trivial


def test_weighted_iso_solver():
    s2 = symmetric_group(2)
    target = conjugate(s2, diagonal([2, 3]))
    result = weighted_iso_solver(s2, target)
    assert result.status == ResultStatus.FOUND
    assert result.matrix is not None
    assert equal_groups(conjugate(s2, result.matrix), target)


def test_weighted_iso_solver_obstruction():
    result = weighted_iso_solver(trivial_group(2), symmetric_group(2))
    assert result.status == ResultStatus.PROVEN_EMPTY
    assert "permutation images" in result.reason


def test_weighted_iso_solver_unknown_when_search_fails():
    g1 = generate_group(2, [diagonal([2, 1]), diagonal([1, 3])])
    g2 = generate_group(2, [diagonal([2, 3]), diagonal([1, 2])])
    assert same_multiplicative_group(det_group(g1), det_group(g2))
    result = weighted_iso_solver(g1, g2)
    assert result.status == ResultStatus.UNKNOWN
    assert result.matrix is None


def test_sample_element_stays_in_group():
    g = group_from_description(2, [[2, 2]], [SWAP])
    rng = np.random.default_rng(7)
    for _ in range(50):
        assert contains(g, sample_element(g, rng))


def test_permutation_text_roundtrip():
    perm = Permutation((1, 2, 0, 3))
    assert format_permutation(perm) == "(1 2 3)"
    assert parse_permutation(format_permutation(perm), 4) == perm
    assert parse_permutation("e", 2).is_identity

from fractions import Fraction

import pytest

from fundgroup.domain.errors import DimensionTooLarge
from fundgroup.domain.models import SearchBounds
from fundgroup.features.algebras.families import ex_prime, irr_pair, matrix_sum, simpleaf
from fundgroup.features.algebras.logic import build
from fundgroup.features.envelope.logic import coupling_classes, verify
from fundgroup.features.envelope.models import EnvelopeLabel, EnvelopeStatus
from fundgroup.features.envelope import processor as processor_module
from fundgroup.features.envelope.processor import EnvelopeProcessor, block_support, k_envelope
from fundgroup.features.monomial.logic import antidiagonal, contains, diagonal, permutation_matrix
from fundgroup.features.monomial.models import MonomialMatrix, Permutation
from fundgroup.features.scalars.models import ExactScalar
from fundgroup.infrastructure.loaders.literals import parse_module
from fundgroup.kernel.system.config import DEFAULT_BOUNDS
from fundgroup.services.selftest import golden
from fundgroup.services.selftest.models import CheckFailure


@pytest.fixture(scope="module")
def models():
    return golden.GoldenModels(DEFAULT_BOUNDS)


@pytest.mark.parametrize(
    "check",
    [
        golden.check_matrix,
        golden.check_prime,
        golden.check_tensor,
        golden.check_irr,
        golden.check_unit_and_symmetric,
        golden.check_theta_pairs,
        golden.check_simpleaf_channel,
    ],
)
def test_golden_envelopes(models, check):
    assert check(models)


def test_exact_raises_check_failure_when_bounds_are_too_small():
    tiny = golden.GoldenModels(SearchBounds(units=1, primes=1, depth=64, max_n=6))
    with pytest.raises(CheckFailure):
        tiny.exact("irr", irr_pair(5))


def test_matrix_sum_is_swap_with_block_weights():
    built = build(matrix_sum([2, 3]))
    report = k_envelope(built.module, DEFAULT_BOUNDS, built.realized)
    assert report.status == EnvelopeStatus.EXACT
    assert report.exact is not None
    assert contains(report.exact, antidiagonal([Fraction(3, 2), Fraction(2, 3)]))
    assert not contains(report.exact, permutation_matrix(Permutation((1, 0))))
    assert report.label == EnvelopeLabel.REALIZED


def test_verify_is_exact_invariance():
    module = build(matrix_sum([2, 3])).module
    assert verify(module, antidiagonal([Fraction(3, 2), Fraction(2, 3)]))
    assert not verify(module, diagonal([2, 1]))


def test_prime_example_block_support():
    support = block_support(build(ex_prime()).module)
    assert support == ((True, True, False), (True, True, False), (False, False, True))


def test_simpleaf_couples_its_traces():
    module = build(simpleaf()).module
    assert coupling_classes(module) == ((0, 1),)
    report = k_envelope(module)
    assert contains(report.projection_upper, diagonal([2, 1]))
    assert report.exact is not None and not contains(report.exact, diagonal([2, 1]))


def test_size_guard():
    processor = EnvelopeProcessor(SearchBounds(units=8, primes=16, depth=64, max_n=1))
    with pytest.raises(DimensionTooLarge):
        processor.process(build(matrix_sum([2, 3])).module)


def test_processor_memoizes_projection_results():
    processor = EnvelopeProcessor()
    processor.process(build(matrix_sum([2, 3])).module)
    # two stabilizers and two transporters
    assert len(processor.cache) == 4


def test_coupled_module_keeps_weighted_swap():
    # one coupling class, and the only symmetry swaps with unequal weights
    module = parse_module("[-1/2,1/4,0;3,0,1] default=0")
    b = MonomialMatrix(Permutation((1, 0, 2)), tuple(ExactScalar.rational(x) for x in (2, Fraction(1, 2), 1)))
    assert coupling_classes(module) == ((0, 1, 2),)
    assert verify(module, b)
    report = k_envelope(module)
    assert contains(report.lower, b)
    assert contains(report.upper, b)
    assert report.exact is not None
    assert contains(report.exact, b)
    assert not report.has_unknowns


def test_prime_exponent_bound_limits_the_adjustment_search():
    # the swap needs diag(2^a, 2^b) with |b - a| = 4 on top of the projection representative
    module = parse_module("[1,4] default=0 except 2:inf")
    narrow = k_envelope(module, SearchBounds(units=8, primes=3, depth=64, max_n=6))
    assert narrow.status == EnvelopeStatus.GAP
    assert narrow.has_unknowns
    assert Permutation((1, 0)) in narrow.upper.permutations
    assert Permutation((1, 0)) not in narrow.lower.permutations

    wide = k_envelope(module, SearchBounds(units=8, primes=4, depth=64, max_n=6))
    assert wide.status == EnvelopeStatus.EXACT
    assert wide.exact is not None
    assert Permutation((1, 0)) in wide.exact.permutations
    for rep in wide.exact.coset_reps:
        assert verify(module, rep)


def test_processor_passes_refinement_depth(monkeypatch):
    seen = []
    original = processor_module.module_transporter

    def spy(source, target, bound_units, depth):
        seen.append(depth)
        return original(source, target, bound_units, depth)

    monkeypatch.setattr(processor_module, "module_transporter", spy)
    k_envelope(build(matrix_sum([2, 3])).module, SearchBounds(units=8, primes=16, depth=5, max_n=6))
    assert seen
    assert set(seen) == {5}

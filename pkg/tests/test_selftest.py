import numpy as np
import pytest

from fundgroup.domain.models import SessionConfig
from fundgroup.features.monomial.logic import power
from fundgroup.kernel.system.config import DEFAULT_BOUNDS
from fundgroup.services.selftest import properties
from fundgroup.services.selftest.models import CheckFailure, require
from fundgroup.services.selftest.runner import SelfTestRunner


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


def test_decompose_roundtrip(rng):
    assert properties.decompose_roundtrip(rng, 1000)


def test_product_rule(rng):
    assert properties.product_rule(rng, 1000)


def test_scalar_ring(rng):
    assert properties.scalar_ring(rng, 1000)


def test_lattice_membership(rng):
    assert properties.lattice_membership(rng, 1000)


def test_stabilizer_transporter(rng):
    assert properties.stabilizer_transporter(rng, 50, DEFAULT_BOUNDS)


def test_envelope_soundness_and_equivariance(rng):
    suite = properties.EnvelopeSuite(DEFAULT_BOUNDS)
    assert suite.soundness(rng, 20)
    assert suite.equivariance(rng, 10)


def test_planted_symmetries_land_in_lower_group(rng):
    assert properties.EnvelopeSuite(DEFAULT_BOUNDS).planted(rng, 25)


def test_planted_symmetry_has_finite_order(rng):
    for _ in range(20):
        b = properties.planted_symmetry(rng)
        assert not b.perm.is_identity
        assert any(power(b, k).is_identity for k in (2, 3))


def test_pell_units():
    assert properties.pell_units(50)


def test_symbol_pairs(rng):
    assert properties.random_symbol_pairs(rng, 20, DEFAULT_BOUNDS)


def test_random_monomials_are_seeded():
    a = properties.random_monomial(np.random.default_rng(3), 3)
    b = properties.random_monomial(np.random.default_rng(3), 3)
    assert a == b


def test_require():
    require(True, "unused")
    with pytest.raises(CheckFailure, match="broken"):
        require(False, "broken")


def test_runner_reports_failures_without_raising():
    runner = SelfTestRunner(SessionConfig(cases=2, equivariance_cases=1))

    def failing():
        raise CheckFailure("expected failure")

    result = runner.run_check(("always fails", failing))
    assert not result.passed
    assert result.detail == "expected failure"
    assert runner.run_check(("passes", lambda: "fine")).passed


def test_runner_check_names_are_unique():
    names = [name for name, _ in SelfTestRunner().checks()]
    assert len(names) == len(set(names)) == 19

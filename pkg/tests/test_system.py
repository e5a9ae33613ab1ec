import logging
import os

from fundgroup.domain.models import SearchBounds, SessionConfig
from fundgroup.kernel.caching.logic import calculate_config_hash
from fundgroup.kernel.caching.manager import ComputationCache
from fundgroup.kernel.system.config import APP_CONFIG, DEFAULT_SESSION_CONFIG
from fundgroup.kernel.system.logging import get_logger, setup_logging
from fundgroup.kernel.system.paths import get_resource_path, resolve_input_path
from fundgroup.kernel.system.version import get_app_version


def test_get_app_version():
    v = get_app_version()
    assert isinstance(v, str)
    assert v


def test_get_resource_path():
    p = get_resource_path("samples/m2m3.alg")
    assert os.path.exists(p)
    assert os.path.isabs(p)


def test_resolve_input_path_prefers_real_files(tmp_path):
    local = tmp_path / "m2m3.alg"
    local.write_text("algebra x { kind=finite; sizes=1 }", encoding="utf-8")
    assert resolve_input_path(str(local)) == str(local)
    assert resolve_input_path("m2m3.alg") == get_resource_path(os.path.join("samples", "m2m3.alg"))


def test_default_session_matches_app_config():
    assert DEFAULT_SESSION_CONFIG.bounds.units == APP_CONFIG.bound_units
    assert DEFAULT_SESSION_CONFIG.bounds.max_n == APP_CONFIG.max_n
    assert DEFAULT_SESSION_CONFIG.cases == APP_CONFIG.property_cases


def test_calculate_config_hash_stability():
    h1 = calculate_config_hash(SessionConfig(bounds=SearchBounds(units=4)))
    h2 = calculate_config_hash(SessionConfig(bounds=SearchBounds(units=4)))
    assert h1 == h2
    assert len(h1) == 32  # MD5 length
    assert h1 != calculate_config_hash(SessionConfig(bounds=SearchBounds(units=5)))


def test_computation_cache_memoizes():
    cache = ComputationCache()
    calls = []

    def compute():
        calls.append(1)
        return 42

    assert cache.get_or_compute(("stab", 1), compute) == 42
    assert cache.get_or_compute(("stab", 1), compute) == 42
    assert len(calls) == 1
    assert len(cache) == 1


def test_setup_logging_is_idempotent():
    logger = setup_logging(logging.INFO)
    count = len(logger.handlers)
    setup_logging(logging.DEBUG)
    assert len(logger.handlers) == count
    assert logger.level == logging.DEBUG
    assert get_logger("envelope").name == "fundgroup.envelope"
    setup_logging(logging.WARNING)

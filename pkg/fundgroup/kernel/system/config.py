from fundgroup.domain.types import AppConfig
from fundgroup.domain.models import SearchBounds, SessionConfig, OutputFormat


APP_CONFIG = AppConfig(
    bound_units=8,
    bound_primes=16,
    refinement_depth=64,
    max_n=6,
    stages=8,
    trace_tolerance=1e-9,
    seed=20240229,
    property_cases=1000,
    equivariance_cases=60,
)


DEFAULT_BOUNDS = SearchBounds(
    units=APP_CONFIG.bound_units,
    primes=APP_CONFIG.bound_primes,
    depth=APP_CONFIG.refinement_depth,
    max_n=APP_CONFIG.max_n,
)


DEFAULT_SESSION_CONFIG = SessionConfig(
    bounds=DEFAULT_BOUNDS,
    output_format=OutputFormat.TEXT,
    stages=APP_CONFIG.stages,
    trace_tolerance=APP_CONFIG.trace_tolerance,
    seed=APP_CONFIG.seed,
    cases=APP_CONFIG.property_cases,
    equivariance_cases=APP_CONFIG.equivariance_cases,
)

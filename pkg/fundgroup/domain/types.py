import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TypeAlias, Tuple

# Cap of a denominator profile: an integer, or math.inf for "any power".
Cap: TypeAlias = int | float
INF: float = math.inf

RationalVector: TypeAlias = Tuple[Fraction, ...]
RationalRows: TypeAlias = Tuple[RationalVector, ...]
IntRows: TypeAlias = Tuple[Tuple[int, ...], ...]

# Zero-based permutation image tuple: perm[i] = sigma(i)
PermWord: TypeAlias = Tuple[int, ...]


@dataclass
class AppConfig:
    bound_units: int
    bound_primes: int
    refinement_depth: int
    max_n: int
    stages: int
    trace_tolerance: float
    seed: int
    property_cases: int
    equivariance_cases: int


def is_inf(cap: Cap) -> bool:
    return isinstance(cap, float) and math.isinf(cap)


def format_cap(cap: Cap) -> str:
    return "inf" if is_inf(cap) else str(int(cap))

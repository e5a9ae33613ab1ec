from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Tuple

from sympy import isprime, prime

from fundgroup.features.bratteli.models import BratteliDiagram, IntMatrix
from fundgroup.features.scalars.models import Atom, ExactScalar

# 1/pi^2 = 0.1013211836...
PIINV2 = Atom.symbol("piinv2", Fraction(101321, 10**6), Fraction(101322, 10**6), definition="1/pi**2")


@lru_cache(maxsize=256)
def _nth_prime(k: int) -> int:
    """k-th prime, 1-based: 2, 3, 5, ..."""
    return int(prime(k))


@lru_cache(maxsize=256)
def _simpleaf_ratio(k: int) -> Fraction:
    """prod_{j<=k} p_j^2 / (p_j^2 - 1)."""
    if k == 0:
        return Fraction(1)
    p = _nth_prime(k)
    return _simpleaf_ratio(k - 1) * Fraction(p * p, p * p - 1)


def simpleaf_step(k: int) -> IntMatrix:
    p = _nth_prime(k + 1)
    a = 4 * p * p - 2
    return ((a, 2), (2, a))


def simpleaf_weights(k: int) -> Tuple[Tuple[ExactScalar, ...], ...]:
    """phi_1|A_k = (1/2 + c_k t) tau_1 + (1/2 - c_k t) tau_2, c_k = 3 prod p^2/(p^2-1), t = 1/pi^2."""
    shift = ExactScalar.atom(PIINV2) * (3 * _simpleaf_ratio(k))
    half = ExactScalar.rational(Fraction(1, 2))
    return ((half + shift, half - shift), (half - shift, half + shift))


def simpleaf_tail(m: int) -> Fraction:
    # 1 - prod_{j>m}(1 - 1/p_j^2) <= sum_{n >= p_(m+1)} 1/n^2 <= 1/(p_(m+1) - 1)
    return Fraction(1, 2 * (_nth_prime(m + 1) - 1))


def simpleaf_generators(n: int) -> Tuple[Tuple[ExactScalar, ExactScalar], Tuple[ExactScalar, ExactScalar]]:
    """
    Stage-n generators of E in the form 1/(2^(2n+1) prod p^2) +- 3/(4^n prod(p^2-1)) t.
    """
    squares = 1
    shifted = 1
    for j in range(1, n + 1):
        p = _nth_prime(j)
        squares *= p * p
        shifted *= p * p - 1
    base = ExactScalar.rational(Fraction(1, 2 ** (2 * n + 1) * squares))
    tail = ExactScalar.atom(PIINV2) * Fraction(3, 4**n * shifted)
    return (base + tail, base - tail), (base - tail, base + tail)


def simpleaf() -> BratteliDiagram:
    """
    A_n = M_d + M_d with d = prod_{k<=n} 4 p_k^2; psi_n repeats a (4p^2 - 2) times and b twice.
    """
    return BratteliDiagram(
        initial=(1, 1),
        name="simpleaf",
        rule=simpleaf_step,
        closed_form=simpleaf_weights,
        tail_bound=simpleaf_tail,
    )


@dataclass(frozen=True)
class TailProductRefiner:
    """
    Rational enclosure of T = prod_{j>=1} (1 - (2/p)^j).

    Partial products are kept in fixed point, rounded outward; the tail after N factors
    loses at most r^(N+1)/(1-r).
    """

    p: int

    def __call__(self, bits: int) -> Tuple[Fraction, Fraction]:
        scale = 1 << (bits + 32)
        r = Fraction(2, self.p)
        target = Fraction(1, 1 << (bits + 2))
        lo = hi = scale
        power = r
        den = num_pow = 1
        while power / (1 - r) >= target:
            den *= self.p
            num_pow *= 2
            f_lo = scale * (den - num_pow) // den
            f_hi = -(-scale * (den - num_pow) // den)
            lo = lo * f_lo // scale
            hi = -(-(hi * f_hi) // scale)
            power *= r
        loss = power / (1 - r)
        low = Fraction(lo, scale) * (1 - loss)
        return (Fraction(low.numerator * scale // low.denominator, scale), Fraction(hi, scale))


def prime2_symbol(p: int) -> Atom:
    refiner = TailProductRefiner(p)
    lo, hi = refiner(24)
    return Atom.symbol(f"T{p}", lo, hi, refiner=refiner)


def _check_odd_prime(p: int) -> None:
    if p <= 2 or not isprime(p):
        raise ValueError(f"prime2 needs an odd prime, got {p}")


def prime2(p: int) -> BratteliDiagram:
    """
    B_n = M_d + M_d, d = prod_{k<=n} p^(k-1); stage s embeds with multiplicities
    p^n - 2^(n-1) and 2^(n-1), n = s + 1.
    """
    _check_odd_prime(p)
    t = ExactScalar.atom(prime2_symbol(p))
    r = Fraction(2, p)

    def step(s: int) -> IntMatrix:
        n = s + 1
        a, b = p**n - 2 ** (n - 1), 2 ** (n - 1)
        return ((a, b), (b, a))

    def weights(s: int) -> Tuple[Tuple[ExactScalar, ...], ...]:
        partial = Fraction(1)
        for j in range(1, s + 1):
            partial *= 1 - r**j
        shift = t * (Fraction(1, 2) / partial)
        half = ExactScalar.rational(Fraction(1, 2))
        return ((half + shift, half - shift), (half - shift, half + shift))

    def tail(m: int) -> Fraction:
        return r ** (m + 1) / (2 * (1 - r))

    return BratteliDiagram(initial=(1, 1), name=f"prime2(p={p})", rule=step, closed_form=weights, tail_bound=tail)


FAMILIES: Dict[str, Callable[..., BratteliDiagram]] = {
    "simpleaf": simpleaf,
    "prime2": prime2,
}

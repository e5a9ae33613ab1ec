from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import mpmath
from sympy import continued_fraction_convergents, continued_fraction_periodic

from fundgroup.domain.errors import NotInvertibleInClosedForm, PrecisionExhausted, UnsupportedScalar, ZeroScalarError
from fundgroup.features.scalars.intervals import contains_zero, enclose, precision_bits, width
from fundgroup.features.scalars.models import (
    ONE,
    ExactScalar,
    Monomial,
    ScalarLike,
    as_scalar,
    is_squarefree,
)
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("scalars")

DEFAULT_DEPTH = 64


def add(x: ScalarLike, y: ScalarLike) -> ExactScalar:
    return as_scalar(x) + as_scalar(y)


def mul(x: ScalarLike, y: ScalarLike) -> ExactScalar:
    return as_scalar(x) * as_scalar(y)


def quadratic_parts(x: ExactScalar) -> Optional[Tuple[int, Fraction, Fraction]]:
    """
    (d, a, b) with x = a + b*sqrt(d) when x has no symbols and at most one root; d = 1 if rational.
    """
    d = 1
    a = b = Fraction(0)
    for m, c in x.terms:
        if m.symbols:
            return None
        if m.radicand == 1:
            a = c
        elif d in (1, m.radicand):
            d = m.radicand
            b = c
        else:
            return None
    return d, a, b


def split_symbol_factor(x: ExactScalar) -> Optional[Tuple[Monomial, ExactScalar]]:
    """x = s * q with s a pure symbol monomial and q symbol-free, if such a split exists."""
    if x.is_zero:
        return None
    sym = x.terms[0][0].symbol_part
    rest: Dict[Monomial, Fraction] = {}
    for m, c in x.terms:
        if m.symbol_part != sym:
            return None
        rest[Monomial(m.radicand)] = c
    return sym, ExactScalar.from_mapping(rest)


def invert(x: ScalarLike) -> ExactScalar:
    """
    Closed-form inverse of a single term or of (symbol monomial) * (element of one Q(sqrt d)).
    """
    x = as_scalar(x)
    if x.is_zero:
        raise ZeroScalarError("inverse of zero")
    if len(x.terms) == 1:
        m, c = x.terms[0]
        g, inv_m = m.inverse()
        return ExactScalar.monomial(inv_m, g / c)

    split = split_symbol_factor(x)
    parts = quadratic_parts(split[1]) if split is not None else None
    if split is None or parts is None:
        raise NotInvertibleInClosedForm(f"no closed-form inverse for {x}")
    sym, q = split
    d, a, b = parts
    nrm = a * a - d * b * b
    conj = ExactScalar.quadratic(a / nrm, -b / nrm, d)
    _, sym_inv = sym.inverse()
    return conj * ExactScalar.monomial(sym_inv)


def sign(x: ScalarLike, depth: int = DEFAULT_DEPTH) -> int:
    """
    Exact sign by shrinking interval enclosures of the atoms.
    """
    x = as_scalar(x)
    if x.is_zero:
        return 0
    if x.is_rational:
        return 1 if x.to_fraction() > 0 else -1

    previous: Optional[Fraction] = None
    for step in range(depth):
        lo, hi = enclose(x, precision_bits(step))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        w = width((lo, hi))
        if previous is not None and w >= previous:
            break
        previous = w
    logger.debug("sign of %s undecided after refinement", x)
    raise PrecisionExhausted(f"cannot separate {x} from zero; are its symbols really independent?")


def is_positive(x: ScalarLike, depth: int = DEFAULT_DEPTH) -> bool:
    return sign(x, depth) > 0


def compare(x: ScalarLike, y: ScalarLike, depth: int = DEFAULT_DEPTH) -> int:
    return sign(as_scalar(x) - as_scalar(y), depth)


def to_mpf(x: ScalarLike, dps: int = 40) -> mpmath.mpf:
    """Numeric value, accurate to roughly dps digits."""
    x = as_scalar(x)
    bits = int(dps * 3.33) + 16
    lo, hi = enclose(x, bits)
    with mpmath.workdps(dps + 10):
        mid = (lo + hi) / 2
        return mpmath.mpf(mid.numerator) / mid.denominator


def bracket(x: ScalarLike, bits: int = 64) -> Tuple[Fraction, Fraction]:
    lo, hi = enclose(as_scalar(x), bits)
    return lo, hi


def conjugate(x: ScalarLike) -> ExactScalar:
    """Galois conjugate a - b*sqrt(d) of a quadratic scalar."""
    x = as_scalar(x)
    parts = quadratic_parts(x)
    if parts is None:
        raise UnsupportedScalar(f"{x} is not in a single quadratic field")
    d, a, b = parts
    return ExactScalar.quadratic(a, -b, d)


def norm(x: ScalarLike) -> Fraction:
    x = as_scalar(x)
    parts = quadratic_parts(x)
    if parts is None:
        raise UnsupportedScalar(f"{x} is not in a single quadratic field")
    d, a, b = parts
    if d == 1:
        return a * a
    return a * a - d * b * b


@lru_cache(maxsize=256)
def _pell_solution(d: int) -> Tuple[int, int]:
    cf = continued_fraction_periodic(0, 1, d)
    a0 = int(cf[0])
    period = [int(t) for t in cf[1]]
    terms = [a0] + period[:-1]
    last = list(continued_fraction_convergents(terms))[-1]
    return int(last.p), int(last.q)


def fundamental_unit(d: int) -> ExactScalar:
    """
    Smallest unit > 1 of Z[sqrt d], from the first period of the continued fraction of sqrt d.
    """
    if d < 2 or not is_squarefree(d):
        raise ValueError(f"fundamental_unit needs a squarefree d >= 2, got {d}")
    x, y = _pell_solution(d)
    return ExactScalar.quadratic(x, y, d)


def maximal_order_unit(d: int) -> ExactScalar:
    """
    Fundamental unit of the full ring of integers of Q(sqrt d).

    For d = 1 mod 4 the unit of Z[sqrt d] may be the cube of a half-integral unit.
    """
    eps = fundamental_unit(d)
    if d % 4 != 1:
        return eps
    x, y = _pell_solution(d)
    n = x * x - d * y * y
    with mpmath.workdps(50):
        e = mpmath.mpf(x) + mpmath.mpf(y) * mpmath.sqrt(d)
        eta = mpmath.cbrt(e)
        eta_conj = n / eta
        a = int(mpmath.nint(eta + eta_conj))
        b = int(mpmath.nint((eta - eta_conj) / mpmath.sqrt(d)))
    if (a - b) % 2 == 0 and b > 0:
        candidate = ExactScalar.quadratic(Fraction(a, 2), Fraction(b, 2), d)
        if candidate**3 == eps:
            return candidate
    return eps


def unit_log(x: ScalarLike) -> mpmath.mpf:
    return mpmath.log(abs(to_mpf(x)))


def power_of(x: ScalarLike, base: ScalarLike, bound: int) -> Optional[int]:
    """k with base**k == x and |k| <= bound, else None."""
    x, base = as_scalar(x), as_scalar(base)
    if x == ONE:
        return 0
    lx, lb = unit_log(x), unit_log(base)
    if lb == 0:
        return None
    k = int(mpmath.nint(lx / lb))
    if abs(k) <= bound and base**k == x:
        return k
    return None

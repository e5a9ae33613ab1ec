import math
from fractions import Fraction
from typing import Tuple

import sympy

from fundgroup.domain.errors import PrecisionExhausted
from fundgroup.features.scalars.models import Atom, ExactScalar, Monomial

Interval = Tuple[Fraction, Fraction]


def width(iv: Interval) -> Fraction:
    return iv[1] - iv[0]


def contains_zero(iv: Interval) -> bool:
    return iv[0] <= 0 <= iv[1]


def iv_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def iv_scale(c: Fraction, a: Interval) -> Interval:
    lo, hi = c * a[0], c * a[1]
    return (lo, hi) if lo <= hi else (hi, lo)


def iv_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def iv_inv(a: Interval) -> Interval:
    if contains_zero(a):
        raise PrecisionExhausted("enclosure of a divisor still contains zero")
    return (1 / a[1], 1 / a[0])


def iv_pow(a: Interval, e: int) -> Interval:
    if e < 0:
        return iv_pow(iv_inv(a), -e)
    out: Interval = (Fraction(1), Fraction(1))
    for _ in range(e):
        out = iv_mul(out, a)
    return out


def sqrt_enclosure(d: int, bits: int) -> Interval:
    scale = 1 << bits
    s = math.isqrt(d * scale * scale)
    return (Fraction(s, scale), Fraction(s + 1, scale))


def _decimal_digits(bits: int) -> int:
    return int(bits * 0.30103) + 12


def symbol_enclosure(atom: Atom, bits: int) -> Interval:
    """
    Enclosure of a symbol at roughly `bits` binary digits.

    Refiner first, then the sympy definition; a bare declared enclosure cannot be refined.
    """
    if atom.refiner is not None:
        lo, hi = atom.refiner(bits)
        return (Fraction(lo), Fraction(hi))
    if atom.definition is not None:
        value = sympy.N(sympy.sympify(atom.definition), _decimal_digits(bits))
        mid = Fraction(str(value))
        pad = Fraction(1, 1 << bits)
        return (mid - pad, mid + pad)
    return (atom.lo, atom.hi)


def monomial_enclosure(m: Monomial, bits: int) -> Interval:
    out: Interval = (Fraction(1), Fraction(1))
    if m.radicand != 1:
        out = sqrt_enclosure(m.radicand, bits)
    for atom, e in m.symbols:
        out = iv_mul(out, iv_pow(symbol_enclosure(atom, bits), e))
    return out


def enclose(x: ExactScalar, bits: int) -> Interval:
    total: Interval = (Fraction(0), Fraction(0))
    for m, c in x.terms:
        total = iv_add(total, iv_scale(c, monomial_enclosure(m, bits)))
    return total


def precision_bits(step: int) -> int:
    """Binary precision used at refinement step `step` (0-based)."""
    return 24 * (step + 1)

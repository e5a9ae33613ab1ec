from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
from sympy import factorint

from fundgroup.domain.errors import UnfactorableEntry
from fundgroup.features.scalars.logic import (
    maximal_order_unit,
    quadratic_parts,
    sign,
    split_symbol_factor,
    to_mpf,
)
from fundgroup.features.scalars.models import ONE, Atom, ExactScalar, Monomial

_KIND_ORDER = {"p": 0, "unit": 1, "sym": 2}


@dataclass(frozen=True)
class Letter:
    """
    One multiplicative coordinate: a prime (exponents counted in halves), the fundamental
    unit of Q(sqrt d), or a declared free symbol.
    """

    kind: str
    key: int = 0
    atom: Optional[Atom] = None

    @staticmethod
    def prime(p: int) -> "Letter":
        return Letter("p", p)

    @staticmethod
    def unit(d: int) -> "Letter":
        return Letter("unit", d)

    @staticmethod
    def symbol(atom: Atom) -> "Letter":
        return Letter("sym", 0, atom)

    @property
    def sort_key(self) -> Tuple[int, int, str]:
        return (_KIND_ORDER[self.kind], self.key, self.atom.name if self.atom else "")

    def text(self) -> str:
        if self.kind == "p":
            return f"sqrt({self.key})"
        if self.kind == "unit":
            return f"eps({self.key})"
        return f"sym({self.atom.name if self.atom else '?'})"


Exponents = Dict[Letter, int]


def _add(out: Exponents, letter: Letter, e: int) -> None:
    total = out.get(letter, 0) + e
    if total:
        out[letter] = total
    else:
        out.pop(letter, None)


def _add_rational(out: Exponents, q: Fraction) -> None:
    if q <= 0:
        raise UnfactorableEntry(f"{q} is not positive")
    for p, e in factorint(q.numerator).items():
        _add(out, Letter.prime(int(p)), 2 * int(e))
    for p, e in factorint(q.denominator).items():
        _add(out, Letter.prime(int(p)), -2 * int(e))


def _add_root(out: Exponents, d: int) -> None:
    for p in factorint(d):
        _add(out, Letter.prime(int(p)), 1)


@lru_cache(maxsize=4096)
def _factor_cached(x: ExactScalar) -> Tuple[Tuple[Letter, int], ...]:
    if x.is_zero or sign(x) <= 0:
        raise UnfactorableEntry(f"{x} is not a positive scalar")
    split = split_symbol_factor(x)
    if split is None:
        raise UnfactorableEntry(f"{x} mixes several symbol monomials")
    sym, q = split
    out: Exponents = {}
    for atom, e in sym.symbols:
        _add(out, Letter.symbol(atom), e)
    parts = quadratic_parts(q)
    if parts is None:
        raise UnfactorableEntry(f"{x} lies in no single quadratic field")
    d, a, b = parts
    if d > 1 and a != 0 and b != 0:
        eps = maximal_order_unit(d)
        conj = ExactScalar.quadratic(a, -b, d)
        with mpmath.workdps(40):
            ratio = mpmath.log(abs(to_mpf(q))) - mpmath.log(abs(to_mpf(conj)))
            k = int(mpmath.nint(ratio / (2 * mpmath.log(to_mpf(eps)))))
        q = q * eps ** (-k)
        _add(out, Letter.unit(d), k)
        parts = quadratic_parts(q)
        assert parts is not None
        d, a, b = parts
        if a != 0 and b != 0:
            raise UnfactorableEntry(f"{x} is neither a product of primes nor of units of Q(sqrt({d}))")
    if d > 1 and b != 0:
        _add_rational(out, b)
        _add_root(out, d)
    else:
        _add_rational(out, a)
    return tuple(sorted(out.items(), key=lambda t: t[0].sort_key))


def factor_scalar(x: ExactScalar) -> Exponents:
    """
    Exponents of a positive scalar over primes, quadratic units and symbols.
    """
    return dict(_factor_cached(x))


def scalar_from_exponents(exps: Exponents) -> ExactScalar:
    rational = Fraction(1)
    radicand = 1
    value = ONE
    symbols: List[Tuple[Atom, int]] = []
    for letter, e in sorted(exps.items(), key=lambda t: t[0].sort_key):
        if e == 0:
            continue
        if letter.kind == "p":
            rational *= Fraction(letter.key) ** (e // 2)
            if e % 2:
                radicand *= letter.key
        elif letter.kind == "unit":
            value = value * maximal_order_unit(letter.key) ** e
        else:
            assert letter.atom is not None
            symbols.append((letter.atom, e))
    mono = Monomial(radicand, tuple(symbols))
    return value * ExactScalar.monomial(mono, rational)


class ExponentSpace:
    """
    Fixed letter order for n-coordinate diagonals; vectors are coordinate-major.
    """

    def __init__(self, n: int, letters: Iterable[Letter]):
        self.n = n
        self.letters: Tuple[Letter, ...] = tuple(sorted(set(letters), key=lambda x: x.sort_key))
        self._index = {letter: i for i, letter in enumerate(self.letters)}

    @staticmethod
    def spanning(n: int, diagonals: Iterable[Sequence[ExactScalar]]) -> "ExponentSpace":
        letters = set()
        for diag in diagonals:
            for value in diag:
                letters.update(factor_scalar(value))
        return ExponentSpace(n, letters)

    @property
    def width(self) -> int:
        return len(self.letters)

    @property
    def dim(self) -> int:
        return self.n * self.width

    def vector(self, diag: Sequence[ExactScalar]) -> List[int]:
        out = [0] * self.dim
        for i, value in enumerate(diag):
            for letter, e in factor_scalar(value).items():
                if letter not in self._index:
                    raise UnfactorableEntry(f"{value} uses {letter.text()}, which no generator involves")
                out[i * self.width + self._index[letter]] = e
        return out

    def diagonal(self, vec: Sequence[int]) -> Tuple[ExactScalar, ...]:
        out = []
        for i in range(self.n):
            block = vec[i * self.width : (i + 1) * self.width]
            out.append(scalar_from_exponents({letter: int(e) for letter, e in zip(self.letters, block) if e}))
        return tuple(out)

    def covers(self, diag: Sequence[ExactScalar]) -> bool:
        return all(letter in self._index for value in diag for letter in factor_scalar(value))

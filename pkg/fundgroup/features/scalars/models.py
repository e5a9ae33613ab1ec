import math
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from sympy import factorint

from fundgroup.domain.interfaces import IRefiner


class AtomKind(StrEnum):
    SQRT = "sqrt"
    SYMBOL = "sym"


@dataclass(frozen=True)
class Atom:
    """
    Square root of a squarefree integer, or a declared free real symbol.

    Only kind/name/radicand take part in equality; the enclosure, definition and
    refiner describe how to approximate the atom numerically.
    """

    kind: AtomKind
    name: str
    radicand: int = 0
    lo: Fraction = field(default=Fraction(0), compare=False)
    hi: Fraction = field(default=Fraction(0), compare=False)
    definition: Optional[str] = field(default=None, compare=False)
    refiner: Optional[IRefiner] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind == AtomKind.SQRT:
            if self.radicand < 2 or not is_squarefree(self.radicand):
                raise ValueError(f"sqrt atom needs a squarefree radicand >= 2, got {self.radicand}")
        elif self.lo > self.hi:
            raise ValueError(f"empty enclosure for symbol '{self.name}'")

    @staticmethod
    def sqrt(d: int) -> "Atom":
        return Atom(AtomKind.SQRT, f"sqrt{d}", radicand=d)

    @staticmethod
    def symbol(
        name: str,
        lo: Fraction,
        hi: Fraction,
        definition: Optional[str] = None,
        refiner: Optional[IRefiner] = None,
    ) -> "Atom":
        return Atom(AtomKind.SYMBOL, name, lo=Fraction(lo), hi=Fraction(hi), definition=definition, refiner=refiner)

    @property
    def sort_key(self) -> Tuple[int, int, str]:
        return (0 if self.kind == AtomKind.SQRT else 1, self.radicand, self.name)


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorint(n).values())


def split_square(n: int) -> Tuple[int, int]:
    """n = s^2 * r with r squarefree; returns (s, r)."""
    s, r = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        r *= p ** (e % 2)
    return s, r


SymbolPower = Tuple[Atom, int]


@dataclass(frozen=True, order=False)
class Monomial:
    """
    sqrt(radicand) times a product of symbol powers. radicand 1 means no root.
    """

    radicand: int = 1
    symbols: Tuple[SymbolPower, ...] = ()

    @property
    def is_one(self) -> bool:
        return self.radicand == 1 and not self.symbols

    @property
    def sort_key(self) -> Tuple[Tuple[Tuple[str, int], ...], int]:
        return (tuple((a.name, e) for a, e in self.symbols), self.radicand)

    @property
    def symbol_part(self) -> "Monomial":
        return Monomial(1, self.symbols)

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        return tuple(a for a, _ in self.symbols)

    def times(self, other: "Monomial") -> Tuple[Fraction, "Monomial"]:
        g = math.gcd(self.radicand, other.radicand)
        radicand = (self.radicand // g) * (other.radicand // g)
        powers: Dict[Atom, int] = {a: e for a, e in self.symbols}
        for a, e in other.symbols:
            powers[a] = powers.get(a, 0) + e
        symbols = tuple(sorted(((a, e) for a, e in powers.items() if e != 0), key=lambda t: t[0].sort_key))
        return Fraction(g), Monomial(radicand, symbols)

    def inverse(self) -> Tuple[Fraction, "Monomial"]:
        # 1/sqrt(r) = sqrt(r)/r
        return Fraction(1, self.radicand), Monomial(self.radicand, tuple((a, -e) for a, e in self.symbols))

    def text(self) -> str:
        parts = []
        if self.radicand != 1:
            parts.append(f"sqrt({self.radicand})")
        for a, e in self.symbols:
            parts.append(f"sym({a.name})" if e == 1 else f"sym({a.name})^{e}")
        return "*".join(parts)


ONE_MONOMIAL = Monomial()

Term = Tuple[Monomial, Fraction]
ScalarLike = Union["ExactScalar", int, Fraction]


@dataclass(frozen=True)
class ExactScalar:
    """
    Canonical Q-linear combination of monomials; zero is the empty combination.
    """

    terms: Tuple[Term, ...] = ()

    @staticmethod
    def from_mapping(mapping: Dict[Monomial, Fraction]) -> "ExactScalar":
        kept = [(m, Fraction(c)) for m, c in mapping.items() if c != 0]
        kept.sort(key=lambda t: t[0].sort_key)
        return ExactScalar(tuple(kept))

    @staticmethod
    def rational(value: int | Fraction) -> "ExactScalar":
        value = Fraction(value)
        return ExactScalar(((ONE_MONOMIAL, value),)) if value != 0 else ExactScalar()

    @staticmethod
    def quadratic(a: int | Fraction, b: int | Fraction, d: int) -> "ExactScalar":
        """a + b*sqrt(d), d squarefree (d == 1 folds into the rational part)."""
        if d == 1:
            return ExactScalar.rational(Fraction(a) + Fraction(b))
        return ExactScalar.from_mapping({ONE_MONOMIAL: Fraction(a), Monomial(d): Fraction(b)})

    @staticmethod
    def monomial(m: Monomial, coefficient: int | Fraction = 1) -> "ExactScalar":
        return ExactScalar.from_mapping({m: Fraction(coefficient)})

    @staticmethod
    def atom(a: Atom, exponent: int = 1) -> "ExactScalar":
        if a.kind == AtomKind.SQRT:
            result = ExactScalar.monomial(Monomial(a.radicand))
            return result**exponent
        return ExactScalar.monomial(Monomial(1, ((a, exponent),)))

    def as_mapping(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_rational(self) -> bool:
        return all(m.is_one for m, _ in self.terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.terms[0][1] if self.terms else Fraction(0)

    def coefficient(self, m: Monomial) -> Fraction:
        for mono, c in self.terms:
            if mono == m:
                return c
        return Fraction(0)

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        seen: Dict[Atom, None] = {}
        for m, _ in self.terms:
            if m.radicand != 1:
                seen[Atom.sqrt(m.radicand)] = None
            for a in m.atoms:
                seen[a] = None
        return tuple(sorted(seen, key=lambda a: a.sort_key))

    def __add__(self, other: ScalarLike) -> "ExactScalar":
        o = as_scalar(other)
        acc = self.as_mapping()
        for m, c in o.terms:
            acc[m] = acc.get(m, Fraction(0)) + c
        return ExactScalar.from_mapping(acc)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: ScalarLike) -> "ExactScalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: ScalarLike) -> "ExactScalar":
        return as_scalar(other) - self

    def __mul__(self, other: ScalarLike) -> "ExactScalar":
        o = as_scalar(other)
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in o.terms:
                g, m = m1.times(m2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2 * g
        return ExactScalar.from_mapping(acc)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "ExactScalar":
        from fundgroup.features.scalars.logic import invert

        return self * invert(as_scalar(other))

    def __rtruediv__(self, other: ScalarLike) -> "ExactScalar":
        return as_scalar(other) / self

    def __pow__(self, exponent: int) -> "ExactScalar":
        if exponent < 0:
            from fundgroup.features.scalars.logic import invert

            return invert(self) ** (-exponent)
        result = ExactScalar.rational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.rational(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __str__(self) -> str:
        from fundgroup.features.scalars.parsing import format_scalar

        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ExactScalar({str(self)!r})"


def as_scalar(value: ScalarLike) -> ExactScalar:
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactScalar.rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


ZERO = ExactScalar()
ONE = ExactScalar.rational(1)

import re
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from fundgroup.domain.errors import ParseError
from fundgroup.features.scalars.models import Atom, AtomKind, ExactScalar, Monomial, split_square


def format_fraction(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(x: ExactScalar) -> str:
    """
    Canonical text, e.g. '3/2', '2+sqrt(5)', '1/2-3/2*sym(piinv2)'.
    """
    if x.is_zero:
        return "0"
    pieces: List[str] = []
    for m, c in x.terms:
        body = m.text()
        if not body:
            text = format_fraction(c)
        elif c == 1:
            text = body
        elif c == -1:
            text = f"-{body}"
        else:
            text = f"{format_fraction(c)}*{body}"
        if pieces and not text.startswith("-"):
            text = "+" + text
        pieces.append(text)
    return "".join(pieces)


class AtomRegistry:
    """
    Session-wide table of declared symbols; names are unique.
    """

    def __init__(self) -> None:
        self._symbols: Dict[str, Atom] = {}

    def declare(self, atom: Atom) -> Atom:
        if atom.kind != AtomKind.SYMBOL:
            return atom
        existing = self._symbols.get(atom.name)
        if existing is not None and (existing.definition, existing.lo, existing.hi) != (atom.definition, atom.lo, atom.hi):
            raise ParseError(f"symbol '{atom.name}' declared twice with different data")
        self._symbols[atom.name] = atom
        return atom

    def symbol(self, name: str) -> Atom:
        try:
            return self._symbols[name]
        except KeyError:
            raise ParseError(f"undeclared symbol '{name}'") from None

    def __contains__(self, name: object) -> bool:
        return name in self._symbols

    def names(self) -> Tuple[str, ...]:
        return tuple(sorted(self._symbols))

    def merged(self, other: "AtomRegistry") -> "AtomRegistry":
        out = AtomRegistry()
        for reg in (self, other):
            for atom in reg._symbols.values():
                out.declare(atom)
        return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> Iterator[Tuple[str, str]]:
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        pos = match.end()
        number, name, op = match.groups()
        if number is not None:
            yield ("num", number)
        elif name is not None:
            yield ("name", name)
        elif op is not None and not op.isspace():
            yield ("op", op)
    yield ("end", "")


class _Parser:
    def __init__(self, text: str, registry: Optional[AtomRegistry]):
        self.text = text
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.registry = registry

    def peek(self) -> Tuple[str, str]:
        return self.tokens[self.pos]

    def take(self) -> Tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, tok = self.take()
        if tok != value:
            raise ParseError(f"expected '{value}' in scalar '{self.text}', got '{tok or 'end of input'}'")

    def parse(self) -> ExactScalar:
        if self.peek()[0] == "end":
            raise ParseError("empty scalar")
        value = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input in scalar '{self.text}'")
        return value

    def expr(self) -> ExactScalar:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> ExactScalar:
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero:
                    raise ParseError(f"division by zero in '{self.text}'")
                value = value / rhs
        return value

    def unary(self) -> ExactScalar:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> ExactScalar:
        base = self.primary()
        if self.peek() == ("op", "^"):
            self.take()
            negative = False
            if self.peek() == ("op", "-"):
                self.take()
                negative = True
            kind, tok = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer in '{self.text}'")
            exponent = -int(tok) if negative else int(tok)
            if exponent < 0 and base.is_zero:
                raise ParseError(f"zero raised to a negative power in '{self.text}'")
            return base**exponent
        return base

    def primary(self) -> ExactScalar:
        kind, tok = self.take()
        if kind == "num":
            return ExactScalar.rational(int(tok))
        if kind == "op" and tok == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind == "name" and tok == "sqrt":
            self.expect("(")
            kind, num = self.take()
            if kind != "num":
                raise ParseError(f"sqrt() takes a nonnegative integer in '{self.text}'")
            self.expect(")")
            s, r = split_square(int(num))
            if int(num) == 0:
                return ExactScalar()
            return ExactScalar.monomial(Monomial(r), s)
        if kind == "name" and tok == "sym":
            self.expect("(")
            kind, name = self.take()
            if kind != "name":
                raise ParseError(f"sym() takes a symbol name in '{self.text}'")
            self.expect(")")
            if self.registry is None:
                raise ParseError(f"symbol '{name}' used without declarations")
            return ExactScalar.atom(self.registry.symbol(name))
        raise ParseError(f"unexpected '{tok or 'end of input'}' in scalar '{self.text}'")


def parse_scalar(text: str, registry: Optional[AtomRegistry] = None) -> ExactScalar:
    """
    Parses canonical scalar text (and any +,-,*,/,^ expression over it).
    """
    return _Parser(text, registry).parse()


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: '{text}'") from None

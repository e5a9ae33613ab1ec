import re
from typing import List, Optional, Sequence, Tuple

from fundgroup.domain.errors import DimensionMismatch, FundGroupError, ParseError
from fundgroup.features.lattices.logic import parse_profile
from fundgroup.features.monomial.logic import decompose, generate_group, symmetric_group, trivial_group
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, Permutation
from fundgroup.features.pairing.logic import GeneratorGroup, build_module
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.models import ExactScalar
from fundgroup.features.scalars.parsing import AtomRegistry, parse_scalar

_OPEN = "([{"
_CLOSE = ")]}"


def split_top(text: str, sep: str) -> List[str]:
    """
    Splits on `sep` outside any bracket pair; pieces are stripped.
    """
    depth = 0
    out: List[str] = []
    start = 0
    for pos, ch in enumerate(text):
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced '{ch}' in '{text}'")
        elif depth == 0 and text.startswith(sep, pos):
            out.append(text[start:pos].strip())
            start = pos + len(sep)
    if depth != 0:
        raise ParseError(f"unbalanced brackets in '{text}'")
    out.append(text[start:].strip())
    return out


def _unwrap(text: str, opening: str = "[", closing: str = "]") -> str:
    text = text.strip()
    if not (text.startswith(opening) and text.endswith(closing)):
        raise ParseError(f"expected {opening}...{closing}, got '{text}'")
    return text[1:-1]


def parse_vector(text: str, registry: Optional[AtomRegistry] = None) -> List[ExactScalar]:
    """'a,b,c' or '[a,b,c]'."""
    body = text.strip()
    if body.startswith("["):
        body = _unwrap(body)
    items = split_top(body, ",")
    if items == [""]:
        raise ParseError("empty vector")
    return [parse_scalar(x, registry) for x in items]


def parse_matrix(text: str, registry: Optional[AtomRegistry] = None) -> List[List[ExactScalar]]:
    """
    '[[a,b],[c,d]]' or the row form '[a,b;c,d]'.
    """
    body = _unwrap(text)
    if body.lstrip().startswith("["):
        rows = [parse_vector(r, registry) for r in split_top(body, ",")]
    else:
        rows = [parse_vector(r, registry) for r in split_top(body, ";")]
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"ragged matrix '{text}'")
    return rows


_MONOMIAL_TEXT = re.compile(r"\s*perm\s*=\s*(\([^=]*\)|e|id)\s+diag\s*=\s*(.+)")


def parse_monomial(text: str, registry: Optional[AtomRegistry] = None) -> MonomialMatrix:
    """
    A dense literal, or the display form 'perm=(1 2) diag=3/2,2/3'.
    """
    match = _MONOMIAL_TEXT.fullmatch(text)
    try:
        if match is None:
            return decompose(parse_matrix(text, registry))
        diag = tuple(parse_vector(match.group(2), registry))
        return MonomialMatrix(Permutation.parse(match.group(1), len(diag)), diag)
    except ParseError:
        raise
    except (FundGroupError, ValueError) as exc:
        raise ParseError(f"'{text}' is not a monomial matrix: {exc}") from None


_NAMED_GROUP = re.compile(r"\s*([IS])(\d+)\s*")


def parse_group(text: str, registry: Optional[AtomRegistry] = None) -> MonomialGroupDesc:
    """
    'I<n>', 'S<n>', or generators separated by ';' (each a monomial literal).
    """
    named = _NAMED_GROUP.fullmatch(text)
    if named is not None:
        n = int(named.group(2))
        if n < 1:
            raise ParseError("group dimension must be positive")
        return trivial_group(n) if named.group(1) == "I" else symmetric_group(n)
    gens = [parse_monomial(g, registry) for g in split_top(text, ";") if g]
    if not gens:
        raise ParseError(f"no generators in group '{text}'")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ParseError(f"generators of different sizes in '{text}'")
    return generate_group(n, gens)


def parse_component(text: str, registry: Optional[AtomRegistry] = None) -> Tuple[int, GeneratorGroup]:
    """
    '[v1;v2;...] <profile>' in the lattice display form, vectors over any scalars.
    """
    text = text.strip()
    end = text.find("]")
    if not text.startswith("[") or end < 0:
        raise ParseError(f"component '{text}' must start with a bracketed vector list")
    rows = [parse_vector(r, registry) for r in split_top(text[1:end], ";")]
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"vectors of different lengths in '{text}'")
    rest = text[end + 1 :].strip() or "default=0"
    return len(rows[0]), (parse_profile(rest), rows)


def parse_module(
    text: str | Sequence[str],
    registry: Optional[AtomRegistry] = None,
    names: Sequence[str] = (),
) -> PairingModule:
    """
    Components joined by ' + ' (or given as a list), each in the component form.
    """
    pieces = split_top(text, " + ") if isinstance(text, str) else list(text)
    parsed = [parse_component(p, registry) for p in pieces if p.strip()]
    if not parsed:
        raise ParseError("module without components")
    n = parsed[0][0]
    if any(m != n for m, _ in parsed):
        raise ParseError("module components live in different dimensions")
    try:
        return build_module(n, [g for _, g in parsed], names=names)
    except DimensionMismatch as exc:
        raise ParseError(f"bad module: {exc}") from None

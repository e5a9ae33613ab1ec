import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from fundgroup.domain.errors import FundGroupError, ParseError
from fundgroup.features.algebras.families import FAMILIES
from fundgroup.features.algebras.models import AlgebraKind, AlgebraModel
from fundgroup.features.lattices.logic import parse_profile
from fundgroup.features.scalars.models import Atom, split_square
from fundgroup.features.scalars.parsing import AtomRegistry, parse_fraction, parse_scalar
from fundgroup.infrastructure.loaders.constants import MODEL_EXTENSIONS
from fundgroup.infrastructure.loaders.helpers import logical_lines, parse_key_values, read_text
from fundgroup.infrastructure.loaders.literals import parse_matrix, parse_module, parse_monomial, parse_vector, split_top
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("loaders")

Fields = Dict[str, List[str]]

_HEADER = re.compile(r"algebra\s+([A-Za-z_][A-Za-z_0-9.]*)\s*\{(.*)")
_REPEATABLE = {"component", "realized"}


@dataclass
class ModelFile:
    """
    Parsed .alg file: declared atoms and named algebra models in file order.
    """

    source: str
    registry: AtomRegistry = field(default_factory=AtomRegistry)
    radicands: List[int] = field(default_factory=list)
    algebras: Dict[str, AlgebraModel] = field(default_factory=dict)
    main_name: Optional[str] = None

    def algebra_names(self) -> Tuple[str, ...]:
        return tuple(self.algebras)

    def get(self, name: str) -> AlgebraModel:
        try:
            return self.algebras[name]
        except KeyError:
            raise ParseError(f"{self.source}: no algebra named '{name}'") from None

    def main(self) -> AlgebraModel:
        """The `main` algebra, or the last one defined."""
        if not self.algebras:
            raise ParseError(f"{self.source}: no algebra defined")
        return self.get(self.main_name) if self.main_name else list(self.algebras.values())[-1]


def _atom_statement(model_file: ModelFile, words: List[str], where: str) -> None:
    if len(words) == 3 and words[1] == "sqrt":
        try:
            d = int(words[2])
        except ValueError:
            raise ParseError(f"{where}: sqrt atom needs an integer") from None
        square, radicand = split_square(d)
        if d < 2 or square != 1:
            raise ParseError(f"{where}: sqrt atom needs a squarefree integer >= 2, got {d}")
        model_file.radicands.append(radicand)
        return
    if len(words) >= 4 and words[1] == "sym":
        params = dict(parse_key_values(" ".join(words[3:]), where))
        if "enclosure" not in params:
            raise ParseError(f"{where}: symbol '{words[2]}' needs enclosure=lo,hi")
        try:
            lo_text, hi_text = params["enclosure"].split(",")
        except ValueError:
            raise ParseError(f"{where}: enclosure takes two numbers") from None
        try:
            atom = Atom.symbol(words[2], parse_fraction(lo_text), parse_fraction(hi_text), definition=params.get("definition"))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from None
        model_file.registry.declare(atom)
        return
    raise ParseError(f"{where}: expected 'atom sqrt <d>' or 'atom sym <name> enclosure=lo,hi'")


def _split_fields(body: str, where: str) -> Fields:
    fields: Fields = {}
    items = [piece for line in body.split("\n") for piece in split_top(line, ";")]
    for item in items:
        if not item:
            continue
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(f"{where}: expected key=value, got '{item}'")
        if key in fields and key not in _REPEATABLE:
            raise ParseError(f"{where}: field '{key}' given twice")
        fields.setdefault(key, []).append(value)
    return fields


def _one(fields: Fields, key: str, where: str) -> str:
    if key not in fields:
        raise ParseError(f"{where}: missing field '{key}'")
    return fields[key][0]


def _ints(text: str, where: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"{where}: expected integers, got '{text}'") from None


def _family_argument(value: str, registry: AtomRegistry) -> Any:
    if value in ("true", "false"):
        return value == "true"
    try:
        return int(value)
    except ValueError:
        return registry.symbol(value)


def _family_model(fields: Fields, model_file: ModelFile, where: str) -> AlgebraModel:
    family = _one(fields, "family", where)
    if family not in FAMILIES:
        raise ParseError(f"{where}: unknown family '{family}' (known: {', '.join(sorted(FAMILIES))})")
    kwargs = {k: _family_argument(v[0], model_file.registry) for k, v in fields.items() if k not in ("family", "realized")}
    try:
        model = FAMILIES[family](**kwargs)
    except TypeError as exc:
        raise ParseError(f"{where}: bad parameters for family '{family}': {exc}") from None
    return model


def _part(model_file: ModelFile, name: str, where: str) -> AlgebraModel:
    if name not in model_file.algebras:
        raise ParseError(f"{where}: part '{name}' must be defined earlier in the file")
    return model_file.algebras[name]


def _kind_model(name: str, fields: Fields, model_file: ModelFile, where: str) -> AlgebraModel:
    kind_text = _one(fields, "kind", where)
    try:
        kind = AlgebraKind(kind_text)
    except ValueError:
        raise ParseError(f"{where}: unknown kind '{kind_text}' (known: {', '.join(k.value for k in AlgebraKind)})") from None
    registry = model_file.registry
    names = tuple(fields["names"][0].split(",")) if "names" in fields else ()

    if kind == AlgebraKind.FINITE_DIMENSIONAL:
        weights: Tuple[Tuple[Fraction, ...], ...] = ()
        if "weights" in fields:
            rows = parse_matrix(fields["weights"][0], registry)
            if any(not x.is_rational for row in rows for x in row):
                raise ParseError(f"{where}: trace weights must be rational")
            weights = tuple(tuple(x.to_fraction() for x in row) for row in rows)
        return AlgebraModel(kind, name, sizes=_ints(_one(fields, "sizes", where), where), trace_weights=weights)
    if kind == AlgebraKind.UHF:
        return AlgebraModel(kind, name, profile=parse_profile(_one(fields, "profile", where)))
    if kind in (AlgebraKind.DIRECT_SUM, AlgebraKind.TENSOR):
        parts = tuple(_part(model_file, p.strip(), where) for p in _one(fields, "parts", where).split(","))
        return AlgebraModel(kind, name, parts=parts)
    if kind == AlgebraKind.ROTATION:
        return AlgebraModel(kind, name, theta=parse_scalar(_one(fields, "theta", where), registry))
    if "component" not in fields:
        raise ParseError(f"{where}: '{kind}' model needs at least one component=[...] <profile>")
    module = parse_module(fields["component"], registry, names)
    if kind == AlgebraKind.DIMENSION_GROUP:
        unit = tuple(parse_vector(_one(fields, "unit", where), registry))
        return AlgebraModel(kind, name, module=module, order_unit=unit)
    return AlgebraModel(kind, name, module=module)


def _algebra(model_file: ModelFile, name: str, body: str, where: str) -> AlgebraModel:
    fields = _split_fields(body, where)
    try:
        if "family" in fields:
            model = _family_model(fields, model_file, where)
        else:
            model = _kind_model(name, fields, model_file, where)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None
    extra = tuple(parse_monomial(text, model_file.registry) for text in fields.get("realized", ()))
    if extra:
        model = model.with_realized(model.realized + extra)
    return model


def parse_model_text(text: str, source: str = "<text>") -> ModelFile:
    """
    Statements: 'atom sqrt <d>', 'atom sym <name> enclosure=lo,hi [definition=...]',
    'algebra <name> { key=value; ... }' (blocks may span lines) and 'main <name>'.
    """
    model_file = ModelFile(source)
    pending: Optional[Tuple[str, int, List[str]]] = None
    for number, line in logical_lines(text):
        where = f"{source}:{number}"
        if pending is not None:
            name, start, body = pending
            head, closed, tail = line.partition("}")
            body.append(head)
            if closed:
                if tail.strip():
                    raise ParseError(f"{where}: unexpected text after '}}'")
                _register(model_file, name, "\n".join(body), f"{source}:{start}")
                pending = None
            continue
        if not line:
            continue
        words = line.split()
        if words[0] == "atom":
            _atom_statement(model_file, words, where)
        elif words[0] == "main" and len(words) == 2:
            model_file.main_name = words[1]
        elif words[0] == "algebra":
            match = _HEADER.fullmatch(line)
            if match is None:
                raise ParseError(f"{where}: expected 'algebra <name> {{ ... }}'")
            head, closed, tail = match.group(2).partition("}")
            if closed:
                if tail.strip():
                    raise ParseError(f"{where}: unexpected text after '}}'")
                _register(model_file, match.group(1), head, where)
            else:
                pending = (match.group(1), number, [head])
        else:
            raise ParseError(f"{where}: unknown statement '{words[0]}'")
    if pending is not None:
        raise ParseError(f"{source}:{pending[1]}: algebra '{pending[0]}' is never closed")
    if model_file.main_name is not None:
        model_file.get(model_file.main_name)
    logger.debug("%s: %d algebras, symbols %s", source, len(model_file.algebras), ",".join(model_file.registry.names()) or "-")
    return model_file


def _register(model_file: ModelFile, name: str, body: str, where: str) -> None:
    if name in model_file.algebras:
        raise ParseError(f"{where}: algebra '{name}' defined twice")
    try:
        model_file.algebras[name] = _algebra(model_file, name, body, where)
    except ParseError:
        raise
    except FundGroupError as exc:
        exc.args = (f"{where}: {exc}",)
        raise


class AlgebraFileLoader:
    """
    Loader for .alg model files.
    """

    def load(self, file_path: str) -> ModelFile:
        return parse_model_text(read_text(file_path, MODEL_EXTENSIONS), file_path)

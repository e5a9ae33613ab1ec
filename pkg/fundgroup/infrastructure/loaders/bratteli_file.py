from typing import List, Tuple

from fundgroup.domain.errors import InvariantViolation, ParseError
from fundgroup.features.bratteli.families import FAMILIES
from fundgroup.features.bratteli.models import BratteliDiagram, IntMatrix
from fundgroup.infrastructure.loaders.constants import BRATTELI_EXTENSIONS
from fundgroup.infrastructure.loaders.helpers import logical_lines, parse_key_values, read_text


def _int_row(line: str, where: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in line.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"{where}: expected integers, got '{line}'") from None


def _family(words: List[str], where: str) -> BratteliDiagram:
    if len(words) < 2 or words[1] not in FAMILIES:
        raise ParseError(f"{where}: expected 'family <{'|'.join(sorted(FAMILIES))}> [key=value ...]'")
    params = {}
    for key, value in parse_key_values(" ".join(words[2:]), where):
        try:
            params[key] = int(value)
        except ValueError:
            raise ParseError(f"{where}: parameter '{key}' must be an integer") from None
    try:
        return FAMILIES[words[1]](**params)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_bratteli_text(text: str, source: str = "<text>") -> BratteliDiagram:
    """
    Either 'family simpleaf' / 'family prime2 p=<prime>', or an optional 'name <name>'
    line, the initial block sizes ('initial 1 1' or just '1 1') and one multiplicity
    matrix per blank-line separated block.
    """
    name = ""
    initial: Tuple[int, ...] = ()
    steps: List[IntMatrix] = []
    block: List[Tuple[int, ...]] = []

    def close_block() -> None:
        if block:
            steps.append(tuple(block))
            block.clear()

    for number, line in logical_lines(text):
        where = f"{source}:{number}"
        if not line:
            close_block()
            continue
        words = line.split()
        if words[0] == "family":
            if initial or name:
                raise ParseError(f"{where}: a family selector must be the only statement")
            diagram = _family(words, where)
            rest = [ln for _, ln in logical_lines(text) if ln][1:]
            if rest:
                raise ParseError(f"{where}: nothing may follow a family selector")
            return diagram
        if words[0] == "name":
            name = " ".join(words[1:])
            continue
        if not initial:
            initial = _int_row(" ".join(words[1:]) if words[0] == "initial" else line, where)
            continue
        block.append(_int_row(line, where))
    close_block()
    if not initial:
        raise ParseError(f"{source}: no initial block sizes")
    try:
        return BratteliDiagram(initial=initial, steps=tuple(steps), name=name or source)
    except InvariantViolation as exc:
        raise ParseError(f"{source}: {exc}") from None


class BratteliFileLoader:
    """
    Loader for .brt diagram files.
    """

    def load(self, file_path: str) -> BratteliDiagram:
        return parse_bratteli_text(read_text(file_path, BRATTELI_EXTENSIONS), file_path)

import os
from typing import Iterator, Set, Tuple

from fundgroup.domain.errors import ParseError
from fundgroup.infrastructure.loaders.constants import COMMENT_PREFIX


def logical_lines(text: str) -> Iterator[Tuple[int, str]]:
    """
    (1-based line number, content) with comments and surrounding blanks removed.
    Blank lines are kept as '' since they separate blocks in some formats.
    """
    for number, raw in enumerate(text.splitlines(), start=1):
        cut = raw.find(COMMENT_PREFIX)
        yield number, (raw if cut < 0 else raw[:cut]).strip()


def read_text(file_path: str, extensions: Set[str]) -> str:
    ext = os.path.splitext(file_path)[1].lower()
    if ext not in extensions:
        raise ParseError(f"'{os.path.basename(file_path)}' is not one of {', '.join(sorted(extensions))}")
    try:
        with open(file_path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read '{file_path}': {exc.strerror}") from None


def parse_key_values(items: str, where: str) -> Tuple[Tuple[str, str], ...]:
    """'k1=v1 k2=v2' (values without spaces) into pairs."""
    out = []
    for item in items.split():
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise ParseError(f"{where}: expected key=value, got '{item}'")
        out.append((key, value))
    return tuple(out)

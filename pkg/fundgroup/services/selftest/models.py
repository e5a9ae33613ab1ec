from dataclasses import dataclass
from typing import Callable, Tuple


class CheckFailure(Exception):
    """A self-test expectation that did not hold."""


def require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


Check = Tuple[str, Callable[[], str]]

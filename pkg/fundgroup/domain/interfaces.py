from fractions import Fraction
from typing import Protocol, Tuple


class IRefiner(Protocol):
    """
    Produces a rational enclosure (lo, hi) of a real constant at the given binary precision.
    """

    def __call__(self, bits: int) -> Tuple[Fraction, Fraction]: ...

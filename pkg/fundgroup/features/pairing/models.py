from dataclasses import dataclass, field
from typing import Tuple

from fundgroup.features.lattices.models import LocalizedLattice
from fundgroup.features.scalars.models import Monomial


@dataclass(frozen=True)
class PairingModule:
    """
    Joint pairing group E inside R^n.

    Every coordinate value is a sum over channel keys (symbol monomials, the empty one
    being the rational channel) of field elements. Values are flattened so that
    (key k, coordinate i, part j) sits at index (k*n + i)*w + j, where w = 2 for a
    quadratic field (parts: rational, sqrt(d)) and 1 otherwise. E is the sum of the
    component lattices, whose rational spans are independent.
    """

    n: int
    radicand: int
    keys: Tuple[Monomial, ...]
    components: Tuple[LocalizedLattice, ...]
    trace_names: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def width(self) -> int:
        return 2 if self.radicand > 1 else 1

    @property
    def flat_dim(self) -> int:
        return len(self.keys) * self.n * self.width

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def is_zero(self) -> bool:
        return not self.components

    def flat_index(self, key_pos: int, coord: int, part: int = 0) -> int:
        return (key_pos * self.n + coord) * self.width + part

    def names(self) -> Tuple[str, ...]:
        if len(self.trace_names) == self.n:
            return self.trace_names
        return tuple(f"phi{i + 1}" for i in range(self.n))

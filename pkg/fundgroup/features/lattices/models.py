from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from fundgroup.domain.errors import InvalidProfile
from fundgroup.domain.models import ResultStatus
from fundgroup.domain.types import INF, Cap, IntRows, format_cap, is_inf
from fundgroup.features.scalars.models import ExactScalar


def shift_cap(cap: Cap, delta: int) -> Cap:
    return cap if is_inf(cap) else int(cap) + delta


@dataclass(frozen=True)
class DenominatorProfile:
    """
    Per-prime caps on coordinate denominators: v_p(z) >= -cap(p).
    """

    default_cap: Cap = 0
    exceptions: Tuple[Tuple[int, Cap], ...] = ()

    def __post_init__(self) -> None:
        if not is_inf(self.default_cap) and int(self.default_cap) < 0:
            raise InvalidProfile("default cap must be a nonnegative integer or inf")
        primes = [p for p, _ in self.exceptions]
        if len(set(primes)) != len(primes):
            raise InvalidProfile("prime listed twice in profile exceptions")
        for p, c in self.exceptions:
            if p < 2:
                raise InvalidProfile(f"exception key {p} is not a prime")
            if c == self.default_cap:
                raise InvalidProfile(f"exception {p}:{format_cap(c)} repeats the default cap")
        if list(self.exceptions) != sorted(self.exceptions, key=lambda t: t[0]):
            raise InvalidProfile("profile exceptions must be sorted by prime")

    @staticmethod
    def build(default_cap: Cap, caps: Optional[Dict[int, Cap]] = None) -> "DenominatorProfile":
        """Canonical profile, dropping exceptions equal to the default."""
        default = INF if is_inf(default_cap) else int(default_cap)
        items = tuple(sorted((p, INF if is_inf(c) else int(c)) for p, c in (caps or {}).items() if c != default))
        return DenominatorProfile(default, items)

    def cap(self, p: int) -> Cap:
        for q, c in self.exceptions:
            if q == p:
                return c
        return self.default_cap

    @property
    def exception_primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.exceptions)

    @property
    def infinite_primes(self) -> Tuple[int, ...]:
        """Primes with cap inf; only meaningful when the default is finite."""
        return tuple(p for p, c in self.exceptions if is_inf(c))

    @property
    def default_is_inf(self) -> bool:
        return is_inf(self.default_cap)

    def as_dict(self) -> Dict[int, Cap]:
        return dict(self.exceptions)

    def shifted(self, deltas: Dict[int, int]) -> "DenominatorProfile":
        caps = self.as_dict()
        for p, d in deltas.items():
            caps[p] = shift_cap(self.cap(p), d)
        return DenominatorProfile.build(self.default_cap, caps)

    def kind_key(self) -> Tuple[str, Tuple[int, ...]]:
        """
        Profile type. Two profiles of one type differ at finitely many finite caps only,
        so their groups can be rescaled onto a common profile.
        """
        if self.default_is_inf:
            return ("inf", tuple(p for p, c in self.exceptions if not is_inf(c)))
        return (str(self.default_cap), self.infinite_primes)


ZERO_PROFILE = DenominatorProfile()


@dataclass(frozen=True)
class LocalizedLattice:
    """
    { z·basis : z rational, v_p(z_i) >= -cap(p) } inside Q^n.

    Quadratic lattices (radicand d > 1) store each K-coordinate a + b*sqrt(d) as the flat
    pair (a, b), so n is twice the number of K-coordinates.
    """

    n: int
    basis: IntRows
    profile: DenominatorProfile = ZERO_PROFILE
    radicand: int = 1

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @property
    def is_quadratic(self) -> bool:
        return self.radicand > 1


@dataclass(frozen=True)
class MultiplicativeGroupDesc:
    """
    Subgroup of positive reals generated by the listed scalars.

    `complete` is False when the generators are known to be only part of the group
    (for instance S-units of a quadratic field that the search does not produce).
    """

    generators: Tuple[ExactScalar, ...] = ()
    complete: bool = field(default=True, compare=False)

    @property
    def is_trivial(self) -> bool:
        return not self.generators


TRIVIAL_GROUP = MultiplicativeGroupDesc()


@dataclass(frozen=True)
class TransporterResult:
    status: ResultStatus
    representative: Optional[ExactScalar] = None
    stabilizer: Optional[MultiplicativeGroupDesc] = None
    reason: str = ""

    @staticmethod
    def found(lam: ExactScalar, stabilizer: MultiplicativeGroupDesc) -> "TransporterResult":
        return TransporterResult(ResultStatus.FOUND, lam, stabilizer)

    @staticmethod
    def empty(reason: str) -> "TransporterResult":
        return TransporterResult(ResultStatus.PROVEN_EMPTY, reason=reason)

    @staticmethod
    def unknown(reason: str) -> "TransporterResult":
        return TransporterResult(ResultStatus.UNKNOWN, reason=reason)

    @property
    def is_found(self) -> bool:
        return self.status == ResultStatus.FOUND

    @property
    def is_empty(self) -> bool:
        return self.status == ResultStatus.PROVEN_EMPTY


RationalBasis = Tuple[Tuple[Fraction, ...], ...]

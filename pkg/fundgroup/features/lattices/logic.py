import itertools
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from sympy import factorint

from fundgroup.domain.errors import (
    BoundExhausted,
    DimensionMismatch,
    InvalidProfile,
    NotFinitelyGenerated,
    ParseError,
    UnsupportedDomain,
    UnsupportedScalar,
)
from fundgroup.domain.types import INF, Cap, format_cap, is_inf
from fundgroup.features.lattices.models import (
    TRIVIAL_GROUP,
    DenominatorProfile,
    LocalizedLattice,
    MultiplicativeGroupDesc,
    RationalBasis,
    TransporterResult,
    shift_cap,
)
from fundgroup.features.scalars.logic import DEFAULT_DEPTH, maximal_order_unit, quadratic_parts, sign
from fundgroup.features.scalars.models import ONE, ExactScalar, as_scalar
from fundgroup.kernel.integer.logic import (
    denominator_lcm,
    hnf_rows,
    integer_content,
    invert_rational,
    rational_rank,
    snf_decomp,
    solve_rational,
    valuation,
)
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("lattices")


# --- profiles -----------------------------------------------------------------


def _parse_cap(text: str) -> Cap:
    text = text.strip()
    if text in ("inf", "oo", "∞"):
        return INF
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"bad cap '{text}'") from None


def parse_profile(text: str) -> DenominatorProfile:
    """
    'default=<cap> except p1:c1,p2:c2' with caps integers or 'inf'.
    """
    match = re.fullmatch(r"\s*default\s*=\s*(\S+)(?:\s+except\s+(.*))?\s*", text)
    if match is None:
        raise ParseError(f"bad profile '{text}'")
    default = _parse_cap(match.group(1))
    caps: Dict[int, Cap] = {}
    if match.group(2):
        for item in match.group(2).split(","):
            if not item.strip():
                continue
            try:
                p_text, c_text = item.split(":")
                p = int(p_text)
            except ValueError:
                raise ParseError(f"bad profile exception '{item}'") from None
            if len(factorint(p)) != 1 or sum(factorint(p).values()) != 1:
                raise ParseError(f"profile exception key {p} is not a prime")
            caps[p] = _parse_cap(c_text)
    try:
        return DenominatorProfile.build(default, caps)
    except InvalidProfile as exc:
        raise ParseError(str(exc)) from None


def format_profile(profile: DenominatorProfile) -> str:
    head = f"default={format_cap(profile.default_cap)}"
    if not profile.exceptions:
        return head
    return head + " except " + ",".join(f"{p}:{format_cap(c)}" for p, c in profile.exceptions)


def uniform_profile(cap: Cap) -> DenominatorProfile:
    return DenominatorProfile.build(cap)


def _sum_cap(a: Cap, b: Cap) -> Cap:
    if is_inf(a) or is_inf(b):
        return INF
    return int(a) + int(b)


def add_profiles(a: DenominatorProfile, b: DenominatorProfile) -> DenominatorProfile:
    """Profile of the products z1*z2: caps add prime by prime."""
    primes = set(a.exception_primes) | set(b.exception_primes)
    caps = {p: _sum_cap(a.cap(p), b.cap(p)) for p in primes}
    return DenominatorProfile.build(_sum_cap(a.default_cap, b.default_cap), caps)


def is_supernatural(profile: DenominatorProfile) -> bool:
    """Every cap is 0 or inf."""
    caps = [profile.default_cap] + [c for _, c in profile.exceptions]
    return all(is_inf(c) or int(c) == 0 for c in caps)


# --- canonical form -------------------------------------------------------------


def _prime_factors(n: int) -> Dict[int, int]:
    n = abs(int(n))
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in factorint(n).items()}


def zero_lattice(n: int, radicand: int = 1) -> LocalizedLattice:
    return LocalizedLattice(n, (), DenominatorProfile(), radicand)


def lattice_from_generators(
    rows: Iterable[Sequence[Fraction | int]],
    profile: DenominatorProfile,
    n: Optional[int] = None,
    radicand: int = 1,
) -> LocalizedLattice:
    """
    Canonical LocalizedLattice generated by the rational rows over the profile's coefficient group.
    """
    frows = [[Fraction(x) for x in row] for row in rows]
    width = n if n is not None else (len(frows[0]) if frows else 0)
    for row in frows:
        if len(row) != width:
            raise DimensionMismatch(f"generator of length {len(row)} in dimension {width}")
    frows = [r for r in frows if any(x != 0 for x in r)]
    if not frows:
        return zero_lattice(width, radicand)

    caps = profile.as_dict()
    # 1. clear denominators; coefficients may then carry extra denominators
    den = denominator_lcm([x for r in frows for x in r])
    for p, e in _prime_factors(den).items():
        caps[p] = shift_cap(profile.cap(p), e)
    irows = [[int(x * den) for x in r] for r in frows]

    # 2-3. HNF and content absorption
    basis = hnf_rows(irows, width)
    g = integer_content([x for r in basis for x in r])
    for p, e in _prime_factors(g).items():
        caps[p] = shift_cap(caps.get(p, profile.default_cap), -e)
    basis = [[x // g for x in r] for r in basis]
    work = DenominatorProfile.build(profile.default_cap, caps)

    # 4. saturate at primes without a denominator limit
    diag, _, t = snf_decomp(basis, width)
    t_inv = _unimodular_inverse(t)
    saturated: List[List[int]] = []
    for i, d in enumerate(diag):
        if d == 0:
            continue
        d_new = _strip_unbounded(abs(d), work)
        saturated.append([d_new * x for x in t_inv[i]])
    basis = hnf_rows(saturated, width)
    return LocalizedLattice(width, tuple(tuple(r) for r in basis), work, radicand)


def _strip_unbounded(d: int, profile: DenominatorProfile) -> int:
    out = 1
    for p, e in _prime_factors(d).items():
        if not is_inf(profile.cap(p)):
            out *= p**e
    return out


def _unimodular_inverse(t: List[List[int]]) -> List[List[int]]:
    inv = invert_rational([[Fraction(x) for x in row] for row in t])
    return [[int(x) for x in row] for row in inv]


def rational_basis(lattice: LocalizedLattice) -> RationalBasis:
    return tuple(tuple(Fraction(x) for x in row) for row in lattice.basis)


# --- membership and comparison -------------------------------------------------


def _check_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension {a} vs {b}")


def coefficients_admissible(coeffs: Sequence[Fraction], profile: DenominatorProfile) -> bool:
    """True iff every coefficient satisfies the profile's caps."""
    for z in coeffs:
        if z == 0:
            continue
        primes = set(_prime_factors(z.denominator)) | set(profile.exception_primes)
        for p in primes:
            cap = profile.cap(p)
            if is_inf(cap):
                continue
            if valuation(z, p) < -cap:
                return False
    return True


def member(v: Sequence[Fraction | int], lattice: LocalizedLattice) -> bool:
    _check_dim(len(v), lattice.n)
    target = [Fraction(x) for x in v]
    if lattice.is_zero:
        return all(x == 0 for x in target)
    z = solve_rational(rational_basis(lattice), target)
    if z is None:
        return False
    return coefficients_admissible(z, lattice.profile)


def _critical_primes(profile_a: DenominatorProfile, profile_b: DenominatorProfile, entries: Iterable[Fraction]) -> Set[int]:
    primes = set(profile_a.exception_primes) | set(profile_b.exception_primes)
    for x in entries:
        if x != 0:
            primes |= set(_prime_factors(x.numerator)) | set(_prime_factors(x.denominator))
    return primes


def _cap_allows(c1: Cap, c2: Cap, v: int | float) -> bool:
    """Z_{c1}·t ⊆ Z_{c2} locally, for an entry t of valuation v."""
    if is_inf(c2):
        return True
    if is_inf(c1):
        return False
    return v >= int(c1) - int(c2)


def inclusion(l1: LocalizedLattice, l2: LocalizedLattice) -> bool:
    _check_dim(l1.n, l2.n)
    if l1.is_zero:
        return True
    if l2.is_zero:
        return False
    b2 = rational_basis(l2)
    transfer: List[List[Fraction]] = []
    for row in rational_basis(l1):
        t = solve_rational(b2, row)
        if t is None:
            return False
        transfer.append(t)
    entries = [x for row in transfer for x in row if x != 0]
    p1, p2 = l1.profile, l2.profile
    # all but finitely many primes see unit entries and the default caps
    if entries and not _cap_allows(p1.default_cap, p2.default_cap, 0):
        return False
    for p in _critical_primes(p1, p2, entries):
        c1, c2 = p1.cap(p), p2.cap(p)
        for x in entries:
            if not _cap_allows(c1, c2, valuation(x, p)):
                return False
    return True


def equal(l1: LocalizedLattice, l2: LocalizedLattice) -> bool:
    _check_dim(l1.n, l2.n)
    if (l1.basis, l1.profile) == (l2.basis, l2.profile):
        return True
    return inclusion(l1, l2) and inclusion(l2, l1)


# --- scaling ----------------------------------------------------------------------


def multiplication_matrix(lam: ExactScalar, radicand: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """
    2x2 matrix of x -> lam*x on flat pairs (a, b) = a + b*sqrt(d), acting on row vectors.
    """
    parts = quadratic_parts(lam)
    if parts is None:
        raise UnsupportedScalar(f"{lam} mixes free symbols; only field elements act on lattices")
    d, x, y = parts
    if d not in (1, radicand):
        raise UnsupportedScalar(f"{lam} does not lie in Q(sqrt({radicand}))")
    return ((x, y), (radicand * y, x))


def scale_rows(rows: Sequence[Sequence[Fraction]], lam: ExactScalar, radicand: int) -> List[List[Fraction]]:
    if radicand == 1:
        parts = quadratic_parts(lam)
        if parts is None or parts[0] != 1:
            raise UnsupportedScalar(f"{lam} is not rational; the lattice has no quadratic structure")
        q = parts[1]
        return [[q * x for x in row] for row in rows]
    m = multiplication_matrix(lam, radicand)
    out = []
    for row in rows:
        new: List[Fraction] = []
        for j in range(0, len(row), 2):
            a, b = row[j], row[j + 1]
            new.extend((a * m[0][0] + b * m[1][0], a * m[0][1] + b * m[1][1]))
        out.append(new)
    return out


def scale(lam: ExactScalar | int | Fraction, lattice: LocalizedLattice, depth: int = DEFAULT_DEPTH) -> LocalizedLattice:
    """
    Canonical form of lam·L for positive lam in L's field.
    """
    lam = as_scalar(lam)
    if lam.is_zero or sign(lam, depth) < 0:
        raise UnsupportedScalar(f"scaling factor {lam} must be positive")
    if lattice.is_zero:
        return lattice
    rows = scale_rows(rational_basis(lattice), lam, lattice.radicand)
    return lattice_from_generators(rows, lattice.profile, lattice.n, lattice.radicand)


def span_is_field_stable(lattice: LocalizedLattice) -> bool:
    """Whether the rational span is closed under multiplication by sqrt(d)."""
    if not lattice.is_quadratic:
        return True
    basis = rational_basis(lattice)
    root = ExactScalar.quadratic(0, 1, lattice.radicand)
    return all(solve_rational(basis, row) is not None for row in scale_rows(basis, root, lattice.radicand))


# --- stabilizers and transporters -----------------------------------------------


def _domain_radicand(lattice: LocalizedLattice, radicand: Optional[int]) -> int:
    if radicand is None:
        return lattice.radicand
    if radicand not in (1, lattice.radicand):
        raise UnsupportedDomain(f"Q(sqrt({radicand})) does not act on a lattice structured by sqrt({lattice.radicand})")
    return radicand


def prime_stabilizer(lattice: LocalizedLattice) -> Tuple[int, ...]:
    if lattice.profile.default_is_inf:
        raise NotFinitelyGenerated("every prime but finitely many divides freely; the stabilizer is not finitely generated")
    return lattice.profile.infinite_primes


def unit_stabilizer_power(lattice: LocalizedLattice, bound_units: int, depth: int = DEFAULT_DEPTH) -> Optional[ExactScalar]:
    """
    Smallest power eta^k (k <= bound) of the field's fundamental unit that fixes L.
    """
    if not lattice.is_quadratic or not span_is_field_stable(lattice):
        return None
    eta = maximal_order_unit(lattice.radicand)
    power = ONE
    for _ in range(bound_units):
        power = power * eta
        if equal(scale(power, lattice, depth), lattice):
            return power
    raise BoundExhausted(f"no power of {eta} up to {bound_units} fixes the lattice")


def stabilizer(
    lattice: LocalizedLattice,
    radicand: Optional[int] = None,
    bound_units: int = 8,
    depth: int = DEFAULT_DEPTH,
) -> MultiplicativeGroupDesc:
    """
    Generators of { lam > 0 in the domain : lam·L = L }.
    """
    if lattice.is_zero:
        raise UnsupportedDomain("stabilizer of the zero lattice is every scalar")
    domain = _domain_radicand(lattice, radicand)
    gens: List[ExactScalar] = [ExactScalar.rational(p) for p in prime_stabilizer(lattice)]
    complete = True
    if domain > 1:
        unit = unit_stabilizer_power(lattice, bound_units, depth)
        if unit is not None:
            gens.append(unit)
        if gens and lattice.profile.infinite_primes:
            # S-units above split or ramified primes are not searched
            complete = False
    for g in gens:
        if not equal(scale(g, lattice, depth), lattice):
            raise UnsupportedDomain(f"stabilizer candidate {g} failed exact verification")
    return MultiplicativeGroupDesc(tuple(gens), complete=complete)


def _unbounded_signature(profile: DenominatorProfile) -> Tuple[str, Tuple[int, ...]]:
    return profile.kind_key() if profile.default_is_inf else ("fin", profile.infinite_primes)


def _invariant_obstruction(l1: LocalizedLattice, l2: LocalizedLattice) -> Optional[str]:
    if l1.rank != l2.rank:
        return f"ranks differ ({l1.rank} vs {l2.rank})"
    s1, s2 = _unbounded_signature(l1.profile), _unbounded_signature(l2.profile)
    if s1 != s2:
        return f"unbounded prime sets differ ({s1[1]} vs {s2[1]})"
    if l1.profile.default_cap != l2.profile.default_cap:
        return "default caps differ"
    return None


def rational_ratio(l1: LocalizedLattice, l2: LocalizedLattice) -> Optional[Fraction]:
    """Rational q with q·L1 = L2 when the canonical bases agree; None otherwise."""
    if l1.basis != l2.basis:
        return None
    p1, p2 = l1.profile, l2.profile
    q = Fraction(1)
    for p in sorted(set(p1.exception_primes) | set(p2.exception_primes)):
        c1, c2 = p1.cap(p), p2.cap(p)
        if is_inf(c1) or is_inf(c2):
            if is_inf(c1) != is_inf(c2):
                return None
            continue
        # cap(q·L) = cap(L) - v_p(q)
        q *= Fraction(p) ** (int(c1) - int(c2))
    return q


def _small_combinations(rows: Sequence[Sequence[Fraction]], reach: int = 2) -> Iterable[List[Fraction]]:
    k = len(rows)
    width = len(rows[0]) if rows else 0
    for coeffs in itertools.product(range(-reach, reach + 1), repeat=k):
        if not any(coeffs):
            continue
        yield [sum((c * rows[i][j] for i, c in enumerate(coeffs)), Fraction(0)) for j in range(width)]


def _leading_field_entry(row: Sequence[Fraction], radicand: int) -> Tuple[int, ExactScalar]:
    for j in range(0, len(row), 2):
        value = ExactScalar.quadratic(row[j], row[j + 1], radicand)
        if not value.is_zero:
            return j, value
    return -1, ExactScalar()


def quadratic_candidates(l1: LocalizedLattice, l2: LocalizedLattice, depth: int = DEFAULT_DEPTH) -> List[ExactScalar]:
    """Field ratios beta/alpha pairing a basis vector of L1 with small vectors of L2."""
    d = l1.radicand
    b1, b2 = rational_basis(l1), rational_basis(l2)
    j, alpha = _leading_field_entry(b1[0], d)
    seen: Dict[ExactScalar, None] = {ONE: None}
    for w in _small_combinations(b2):
        beta = ExactScalar.quadratic(w[j], w[j + 1], d)
        if beta.is_zero:
            continue
        ratio = beta / alpha
        if sign(ratio, depth) < 0:
            ratio = -ratio
        seen.setdefault(ratio, None)
    return list(seen)


def transporter(
    l1: LocalizedLattice,
    l2: LocalizedLattice,
    radicand: Optional[int] = None,
    bound_units: int = 8,
    depth: int = DEFAULT_DEPTH,
) -> TransporterResult:
    """
    Some lam0 with lam0·L1 = L2 together with stab(L1), or a proof that none exists.
    """
    _check_dim(l1.n, l2.n)
    if l1.radicand != l2.radicand:
        raise UnsupportedDomain("lattices carry different quadratic structures")
    if l1.is_zero or l2.is_zero:
        if l1.is_zero and l2.is_zero:
            return TransporterResult.found(ONE, TRIVIAL_GROUP)
        return TransporterResult.empty("exactly one lattice is zero")
    domain = _domain_radicand(l1, radicand)
    obstruction = _invariant_obstruction(l1, l2)
    if obstruction is not None:
        return TransporterResult.empty(obstruction)

    q = rational_ratio(l1, l2)
    if q is not None:
        lam = ExactScalar.rational(q)
        if equal(scale(lam, l1, depth), l2):
            return TransporterResult.found(lam, stabilizer(l1, domain, bound_units, depth))

    if domain == 1:
        if rational_rank([*rational_basis(l1), *rational_basis(l2)], l1.n) != l1.rank:
            return TransporterResult.empty("rational spans differ")
        return TransporterResult.empty("canonical bases differ beyond a rational factor")

    for candidate in quadratic_candidates(l1, l2, depth):
        moved = scale(candidate, l1, depth)
        if _invariant_obstruction(moved, l2) is not None:
            continue
        correction = rational_ratio(moved, l2)
        if correction is None:
            continue
        lam = candidate * correction
        if equal(scale(lam, l1, depth), l2):
            return TransporterResult.found(lam, stabilizer(l1, domain, bound_units, depth))
    logger.debug("quadratic transporter search exhausted for rank %d lattices", l1.rank)
    return TransporterResult.unknown("no field ratio among small basis combinations works")


def merge_same_kind(lattices: Sequence[LocalizedLattice]) -> LocalizedLattice:
    """
    Sum of lattices whose profiles share a type, rescaled onto the pointwise largest caps.
    """
    if not lattices:
        raise ValueError("nothing to merge")
    kinds = {lat.profile.kind_key() for lat in lattices if not lat.is_zero}
    if len(kinds) > 1:
        raise UnsupportedDomain("cannot merge lattices of different profile types")
    live = [lat for lat in lattices if not lat.is_zero]
    if not live:
        return lattices[0]
    primes = sorted({p for lat in live for p in lat.profile.exception_primes})
    target: Dict[int, Cap] = {}
    for p in primes:
        caps = [lat.profile.cap(p) for lat in live]
        target[p] = INF if any(is_inf(c) for c in caps) else max(int(c) for c in caps)
    profile = DenominatorProfile.build(live[0].profile.default_cap, target)
    rows: List[List[Fraction]] = []
    for lat in live:
        factor = Fraction(1)
        for p in primes:
            c, t = lat.profile.cap(p), profile.cap(p)
            if not is_inf(t):
                factor *= Fraction(p) ** (int(t) - int(c))
        rows.extend([factor * x for x in row] for row in rational_basis(lat))
    return lattice_from_generators(rows, profile, live[0].n, live[0].radicand)


def _max_cap(a: Cap, b: Cap) -> Cap:
    if is_inf(a) or is_inf(b):
        return INF
    return max(int(a), int(b))


def merge_rank_one(l1: LocalizedLattice, l2: LocalizedLattice) -> LocalizedLattice:
    """
    Sum of two rank-one lattices spanning the same line; locally the larger of the two.
    """
    _check_dim(l1.n, l2.n)
    if l1.rank != 1 or l2.rank != 1:
        raise UnsupportedDomain("only rank-one lattices on a common line can be merged across profile types")
    b1, b2 = rational_basis(l1)[0], rational_basis(l2)[0]
    j = next(i for i, x in enumerate(b2) if x != 0)
    r = b1[j] / b2[j]
    if any(x != r * y for x, y in zip(b1, b2)):
        raise UnsupportedDomain("rank-one lattices span different lines")
    p1, p2 = l1.profile, l2.profile
    primes = set(p1.exception_primes) | set(p2.exception_primes)
    primes |= set(_prime_factors(r.numerator)) | set(_prime_factors(r.denominator))
    caps = {p: _max_cap(shift_cap(p1.cap(p), -int(valuation(r, p))), p2.cap(p)) for p in primes}
    profile = DenominatorProfile.build(_max_cap(p1.default_cap, p2.default_cap), caps)
    return lattice_from_generators([b2], profile, l2.n, l2.radicand)

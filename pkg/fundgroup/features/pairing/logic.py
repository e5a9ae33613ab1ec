from collections import Counter
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from fundgroup.domain.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotFinitelyGenerated,
    UnsupportedDomain,
    UnsupportedScalar,
)
from fundgroup.features.lattices.logic import (
    coefficients_admissible,
    format_profile,
    lattice_from_generators,
    merge_rank_one,
    merge_same_kind,
    quadratic_candidates,
    rational_ratio,
    span_is_field_stable,
)
from fundgroup.features.lattices.logic import inclusion as lattice_inclusion
from fundgroup.features.lattices.logic import transporter as lattice_transporter
from fundgroup.features.lattices.models import (
    TRIVIAL_GROUP,
    DenominatorProfile,
    LocalizedLattice,
    MultiplicativeGroupDesc,
    TransporterResult,
)
from fundgroup.features.monomial.logic import diagonal, inverse
from fundgroup.features.monomial.models import MonomialMatrix
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.logic import DEFAULT_DEPTH, maximal_order_unit, sign
from fundgroup.features.scalars.models import ONE, ONE_MONOMIAL, ExactScalar, Monomial, ScalarLike, as_scalar
from fundgroup.kernel.integer.logic import rational_rank, solve_rational
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("pairing")

GeneratorGroup = Tuple[DenominatorProfile, Sequence[Sequence[ScalarLike]]]


# --- layout -------------------------------------------------------------------


def _radicand_of(vectors: Sequence[Sequence[ExactScalar]]) -> int:
    found = {m.radicand for vec in vectors for x in vec for m, _ in x.terms if m.radicand != 1}
    if len(found) > 1:
        raise UnsupportedScalar(f"pairing values mix square roots {sorted(found)}")
    return found.pop() if found else 1


def flatten_vector(
    vec: Sequence[ExactScalar],
    keys: Sequence[Monomial],
    n: int,
    radicand: int,
) -> Optional[List[Fraction]]:
    """
    Flat rational coordinates of a value vector; None when a monomial has no slot.
    """
    width = 2 if radicand > 1 else 1
    index = {k: i for i, k in enumerate(keys)}
    out = [Fraction(0)] * (len(keys) * n * width)
    for i, x in enumerate(vec):
        for m, c in x.terms:
            pos = index.get(m.symbol_part)
            if pos is None:
                return None
            if m.radicand == 1:
                part = 0
            elif m.radicand == radicand:
                part = 1
            else:
                return None
            out[(pos * n + i) * width + part] += c
    return out


def _unflatten(row: Sequence[Fraction], keys: Sequence[Monomial], n: int, radicand: int) -> Tuple[ExactScalar, ...]:
    width = 2 if radicand > 1 else 1
    out = []
    for i in range(n):
        mapping: Dict[Monomial, Fraction] = {}
        for pos, key in enumerate(keys):
            base = (pos * n + i) * width
            if row[base]:
                mapping[key] = mapping.get(key, Fraction(0)) + row[base]
            if width == 2 and row[base + 1]:
                mono = Monomial(radicand, key.symbols)
                mapping[mono] = mapping.get(mono, Fraction(0)) + row[base + 1]
        out.append(ExactScalar.from_mapping(mapping))
    return tuple(out)


def component_vectors(module: PairingModule, index: int) -> List[Tuple[ExactScalar, ...]]:
    """Basis of one component as vectors of scalars."""
    comp = module.components[index]
    return [_unflatten([Fraction(x) for x in row], module.keys, module.n, module.radicand) for row in comp.basis]


def _relayout(module: PairingModule, keys: Sequence[Monomial], radicand: int) -> PairingModule:
    if tuple(keys) == module.keys and radicand == module.radicand:
        return module
    if module.radicand not in (1, radicand):
        raise UnsupportedScalar(f"sqrt({module.radicand}) values cannot live in Q(sqrt({radicand}))")
    comps = []
    dim = len(keys) * module.n * (2 if radicand > 1 else 1)
    for idx, comp in enumerate(module.components):
        rows = []
        for vec in component_vectors(module, idx):
            flat = flatten_vector(vec, keys, module.n, radicand)
            if flat is None:
                raise UnsupportedDomain("relayout dropped a channel that carries values")
            rows.append(flat)
        comps.append(lattice_from_generators(rows, comp.profile, dim, radicand))
    return PairingModule(module.n, radicand, tuple(keys), tuple(comps), module.trace_names)


def _common_layout(a: PairingModule, b: PairingModule) -> Tuple[PairingModule, PairingModule]:
    if a.n != b.n:
        raise DimensionMismatch(f"pairing modules in R^{a.n} and R^{b.n}")
    radicands = {a.radicand, b.radicand} - {1}
    if len(radicands) > 1:
        raise UnsupportedScalar("pairing modules over different quadratic fields")
    radicand = radicands.pop() if radicands else 1
    keys = tuple(sorted(set(a.keys) | set(b.keys), key=lambda m: m.sort_key))
    return _relayout(a, keys, radicand), _relayout(b, keys, radicand)


# --- construction ---------------------------------------------------------------


def build_module(
    n: int,
    groups: Sequence[GeneratorGroup],
    radicand: Optional[int] = None,
    names: Sequence[str] = (),
) -> PairingModule:
    """
    Sum over groups of the Z_P-span of the group's vectors, P the group's coefficient profile.
    """
    vectors = [[as_scalar(x) for x in vec] for _, vecs in groups for vec in vecs]
    for vec in vectors:
        if len(vec) != n:
            raise DimensionMismatch(f"pairing vector of length {len(vec)} in R^{n}")
    found = _radicand_of(vectors)
    if radicand is None or radicand == 1:
        radicand = found
    elif found not in (1, radicand):
        raise UnsupportedScalar(f"sqrt({found}) values in a module over Q(sqrt({radicand}))")
    keys = sorted({m.symbol_part for vec in vectors for x in vec for m, _ in x.terms}, key=lambda m: m.sort_key)
    if not keys:
        keys = [ONE_MONOMIAL]
    dim = len(keys) * n * (2 if radicand > 1 else 1)
    comps = []
    for profile, vecs in groups:
        rows = []
        for vec in vecs:
            flat = flatten_vector([as_scalar(x) for x in vec], keys, n, radicand)
            assert flat is not None
            rows.append(flat)
        comps.append(lattice_from_generators(rows, profile, dim, radicand))
    return canonicalize(PairingModule(n, radicand, tuple(keys), tuple(comps), tuple(names)))


def _merge_overlapping(comps: List[LocalizedLattice], dim: int) -> List[LocalizedLattice]:
    total = sum(c.rank for c in comps)
    stacked = [[Fraction(x) for x in row] for c in comps for row in c.basis]
    if rational_rank(stacked, dim) == total:
        return comps
    if all(c.rank == 1 for c in comps) and rational_rank(stacked, dim) == 1:
        merged = comps[0]
        for c in comps[1:]:
            merged = merge_rank_one(merged, c)
        return [merged]
    raise UnsupportedDomain("pairing components of different profile types have overlapping spans")


def canonicalize(module: PairingModule) -> PairingModule:
    """
    Unused channels dropped, one component per profile type, components sorted.
    """
    live = [c for c in module.components if not c.is_zero]
    used = [
        pos
        for pos in range(len(module.keys))
        if any(
            row[module.flat_index(pos, i, part)] != 0
            for c in live
            for row in c.basis
            for i in range(module.n)
            for part in range(module.width)
        )
    ]
    if len(used) != len(module.keys) and used:
        trimmed = PairingModule(module.n, module.radicand, module.keys, tuple(live), module.trace_names)
        module = _relayout(trimmed, [module.keys[p] for p in used], module.radicand)
        live = list(module.components)
    by_kind: Dict[Tuple[str, Tuple[int, ...]], List[LocalizedLattice]] = {}
    for c in live:
        by_kind.setdefault(c.profile.kind_key(), []).append(c)
    merged = [merge_same_kind(group) for group in by_kind.values()]
    merged = [c for c in merged if not c.is_zero]
    merged = _merge_overlapping(merged, module.flat_dim)
    merged.sort(key=lambda c: (c.profile.kind_key(), c.basis))
    return PairingModule(module.n, module.radicand, module.keys, tuple(merged), module.trace_names)


def zero_module(n: int, radicand: int = 1) -> PairingModule:
    return PairingModule(n, radicand, (ONE_MONOMIAL,), ())


# --- membership and comparison ---------------------------------------------------


def _stacked(module: PairingModule) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for c in module.components for row in c.basis]


def _split(coeffs: Sequence[Fraction], module: PairingModule) -> List[List[Fraction]]:
    out, start = [], 0
    for c in module.components:
        out.append(list(coeffs[start : start + c.rank]))
        start += c.rank
    return out


def member(v: Sequence[ScalarLike], module: PairingModule) -> bool:
    if len(v) != module.n:
        raise DimensionMismatch(f"vector of length {len(v)} against a module in R^{module.n}")
    vec = [as_scalar(x) for x in v]
    flat = flatten_vector(vec, module.keys, module.n, module.radicand)
    if flat is None:
        return False
    if module.is_zero:
        return all(x == 0 for x in flat)
    coeffs = solve_rational(_stacked(module), flat)
    if coeffs is None:
        return False
    return all(coefficients_admissible(z, c.profile) for z, c in zip(_split(coeffs, module), module.components))


def inclusion(e1: PairingModule, e2: PairingModule) -> bool:
    a, b = _common_layout(e1, e2)
    if a.is_zero:
        return True
    if b.is_zero:
        return False
    stacked = _stacked(b)
    for comp in a.components:
        transfer = []
        for row in comp.basis:
            coeffs = solve_rational(stacked, [Fraction(x) for x in row])
            if coeffs is None:
                return False
            transfer.append(_split(coeffs, b))
        for k, target in enumerate(b.components):
            images = []
            for t in transfer:
                coeff = t[k]
                images.append([sum((z * target.basis[r][j] for r, z in enumerate(coeff)), Fraction(0)) for j in range(b.flat_dim)])
            pulled = lattice_from_generators(images, comp.profile, b.flat_dim, b.radicand)
            if not lattice_inclusion(pulled, target):
                return False
    return True


def equal(e1: PairingModule, e2: PairingModule) -> bool:
    if e1.n != e2.n:
        raise DimensionMismatch(f"pairing modules in R^{e1.n} and R^{e2.n}")
    if (e1.radicand, e1.keys, e1.components) == (e2.radicand, e2.keys, e2.components):
        return True
    return inclusion(e1, e2) and inclusion(e2, e1)


# --- monomial action -------------------------------------------------------------


def generator_groups(module: PairingModule) -> List[GeneratorGroup]:
    return [(c.profile, component_vectors(module, i)) for i, c in enumerate(module.components)]


def apply_map(m: MonomialMatrix, module: PairingModule) -> PairingModule:
    """
    Image {M e : e in E}: (M e)_i = d_i * e_{sigma(i)}.
    """
    if m.n != module.n:
        raise DimensionMismatch(f"{m.n}x{m.n} matrix on a module in R^{module.n}")
    groups = []
    for profile, vecs in generator_groups(module):
        moved = [[m.diag[i] * vec[m.perm(i)] for i in range(m.n)] for vec in vecs]
        groups.append((profile, moved))
    if not groups:
        return module
    return build_module(module.n, groups, module.radicand, module.trace_names)


def act(b: MonomialMatrix, module: PairingModule) -> PairingModule:
    """
    Right action E·B = {B^-1 e}; act(B1·B2, E) = act(B2, act(B1, E)).
    """
    return apply_map(inverse(b), module)


def scale_module(lam: ScalarLike, module: PairingModule) -> PairingModule:
    lam = as_scalar(lam)
    if lam.is_zero:
        raise UnsupportedScalar("cannot scale a pairing module by zero")
    return apply_map(diagonal([lam] * module.n), module)


def coordinate_projection(module: PairingModule, i: int) -> PairingModule:
    """
    E_i, the image of E under the i-th coordinate (1-based), as a module in R^1.
    """
    if not 1 <= i <= module.n:
        raise IndexOutOfRange(f"coordinate {i} outside 1..{module.n}")
    groups = [(profile, [[vec[i - 1]] for vec in vecs]) for profile, vecs in generator_groups(module)]
    names = (module.names()[i - 1],)
    if not groups:
        return zero_module(1, module.radicand)
    return build_module(1, groups, module.radicand, names)


def unit_vector_member(module: PairingModule) -> bool:
    """Whether (1, ..., 1) lies in E; a miss is logged, not raised."""
    ok = member([ONE] * module.n, module)
    if not ok:
        logger.warning("(1,...,1) is not in the pairing module; data may be unnormalised")
    return ok


# --- stabilizers and transporters ---------------------------------------------------


def _prime_stabilizer(module: PairingModule) -> Tuple[int, ...]:
    finite = [c.profile for c in module.components if not c.profile.default_is_inf]
    unbounded = [c.profile for c in module.components if c.profile.default_is_inf]
    if not finite:
        raise NotFinitelyGenerated("every component lets almost every prime divide freely")
    primes = set(finite[0].infinite_primes)
    for profile in finite[1:]:
        primes &= set(profile.infinite_primes)
    for profile in unbounded:
        primes -= set(profile.exception_primes)
    return tuple(sorted(primes))


def module_stabilizer(module: PairingModule, bound_units: int = 8) -> MultiplicativeGroupDesc:
    """
    Generators of { lam > 0 in the module's field : lam·E = E }.
    """
    if module.is_zero:
        raise UnsupportedDomain("stabilizer of the zero module is every scalar")
    gens: List[ExactScalar] = [ExactScalar.rational(p) for p in _prime_stabilizer(module)]
    complete = True
    if module.radicand > 1 and all(span_is_field_stable(c) for c in module.components):
        eta = maximal_order_unit(module.radicand)
        power = ONE
        for _ in range(bound_units):
            power = power * eta
            if equal(scale_module(power, module), module):
                gens.append(power)
                break
        else:
            complete = False
            logger.info("no unit power up to %d stabilizes the module", bound_units)
        if any(c.profile.infinite_primes for c in module.components):
            complete = False
    for g in gens:
        if not equal(scale_module(g, module), module):
            raise UnsupportedDomain(f"stabilizer candidate {g} failed exact verification")
    return MultiplicativeGroupDesc(tuple(gens), complete=complete)


def _channel_shift(e1: PairingModule, e2: PairingModule) -> Optional[Monomial]:
    if len(e1.keys) != len(e2.keys):
        return None
    _, inv = e1.keys[0].inverse()
    _, kappa = e2.keys[0].times(inv)
    shifted = {k.times(kappa)[1] for k in e1.keys}
    return kappa if shifted == set(e2.keys) else None


def _kind_signature(module: PairingModule) -> Counter:
    return Counter((c.profile.kind_key(), c.profile.default_cap, c.rank) for c in module.components)


def _stabilizer_or_trivial(module: PairingModule, bound_units: int) -> MultiplicativeGroupDesc:
    try:
        return module_stabilizer(module, bound_units)
    except NotFinitelyGenerated:
        return MultiplicativeGroupDesc((), complete=False)


def module_transporter(
    e1: PairingModule,
    e2: PairingModule,
    bound_units: int = 8,
    depth: int = DEFAULT_DEPTH,
) -> TransporterResult:
    """
    Some lam > 0 with lam·E1 = E2, lam a symbol monomial times a field element.
    """
    if e1.n != e2.n:
        raise DimensionMismatch(f"pairing modules in R^{e1.n} and R^{e2.n}")
    if e1.is_zero or e2.is_zero:
        if e1.is_zero and e2.is_zero:
            return TransporterResult.found(ONE, TRIVIAL_GROUP)
        return TransporterResult.empty("exactly one module is zero")
    kappa = _channel_shift(e1, e2)
    if kappa is None:
        return TransporterResult.empty("channel monomials do not match up to a common factor")
    shift = ExactScalar.monomial(kappa)
    if sign(shift, depth) < 0:
        shift = -shift
    a, b = _common_layout(scale_module(shift, e1) if not kappa.is_one else e1, e2)
    if _kind_signature(a) != _kind_signature(b):
        return TransporterResult.empty("component profile types or ranks differ")
    stab = _stabilizer_or_trivial(a, bound_units)

    if len(a.components) == 1 and a.keys == b.keys:
        res = lattice_transporter(a.components[0], b.components[0], None, bound_units, depth)
        if res.is_found and res.representative is not None:
            return TransporterResult.found(shift * res.representative, stab)
        return res

    candidates: List[ExactScalar] = []
    for c1, c2 in zip(a.components, b.components):
        q = rational_ratio(c1, c2)
        if q is not None:
            candidates.append(ExactScalar.rational(q))
    if a.radicand > 1:
        for candidate in quadratic_candidates(a.components[0], b.components[0], depth):
            candidates.append(candidate)
    seen = set()
    for lam in candidates:
        if lam in seen:
            continue
        seen.add(lam)
        moved = scale_module(lam, a)
        if equal(moved, b):
            return TransporterResult.found(shift * lam, stab)
        if a.radicand > 1 and not lam.is_rational:
            for c1, c2 in zip(moved.components, b.components):
                q = rational_ratio(c1, c2)
                if q is not None and equal(scale_module(q, moved), b):
                    return TransporterResult.found(shift * lam * q, stab)
    if a.radicand == 1 and rational_rank(_stacked(a) + _stacked(b), a.flat_dim) != a.rank:
        return TransporterResult.empty("rational spans differ")
    return TransporterResult.unknown("no candidate ratio maps the components onto each other")


# --- text ----------------------------------------------------------------------------


def module_text(module: PairingModule) -> str:
    field_text = "Q" if module.radicand == 1 else f"Q(sqrt({module.radicand}))"
    lines = [f"pairing n={module.n} field={field_text} traces={','.join(module.names())}"]
    for idx, comp in enumerate(module.components):
        vecs = "; ".join("(" + ", ".join(str(x) for x in vec) + ")" for vec in component_vectors(module, idx))
        lines.append(f"component {format_profile(comp.profile)}: [{vecs}]")
    return "\n".join(lines)

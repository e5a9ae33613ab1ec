from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from fundgroup.domain.errors import (
    DimensionMismatch,
    InvalidSupernatural,
    InvariantViolation,
    NotInModule,
    Singular,
    UnsupportedDomain,
    UnsupportedScalar,
)
from fundgroup.domain.types import RationalRows
from fundgroup.features.algebras.models import AlgebraKind, AlgebraModel, BuiltModel
from fundgroup.features.envelope.logic import verify
from fundgroup.features.lattices.logic import add_profiles, format_profile, is_supernatural
from fundgroup.features.lattices.models import ZERO_PROFILE, DenominatorProfile
from fundgroup.features.monomial.logic import diagonal, generate_group
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, Permutation
from fundgroup.features.pairing.logic import GeneratorGroup, act, build_module, canonicalize, generator_groups, member
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.logic import invert, quadratic_parts, sign
from fundgroup.features.scalars.models import ONE, ZERO, ExactScalar, ScalarLike, as_scalar
from fundgroup.kernel.integer.logic import invert_rational, rational_rank
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("algebras")

TORSION_NOTE = "tensor product: E generated by products of generators, Kunneth torsion ignored"


def finite_dimensional(sizes: Sequence[int]) -> Tuple[PairingModule, MonomialGroupDesc]:
    """
    E = (1/n_1)Z + ... + (1/n_m)Z for the normalized block traces, and the closed-form
    group {D·U(sigma) : d_i = n(sigma(i))/n(i)}.
    """
    m = len(sizes)
    if m == 0 or any(s < 1 for s in sizes):
        raise ValueError(f"block sizes must be positive, got {list(sizes)}")
    rows = [[Fraction(1, s) if j == i else Fraction(0) for j in range(m)] for i, s in enumerate(sizes)]
    module = build_module(m, [(ZERO_PROFILE, rows)], names=[f"tau{i + 1}" for i in range(m)])

    # adjacent transpositions generate S_m, and the weights compose multiplicatively
    gens = []
    for i in range(m - 1):
        image = list(range(m))
        image[i], image[i + 1] = i + 1, i
        perm = Permutation(tuple(image))
        gens.append(MonomialMatrix(perm, tuple(ExactScalar.rational(Fraction(sizes[perm(k)], sizes[k])) for k in range(m))))
    return module, generate_group(m, gens)


def uhf(profile: DenominatorProfile) -> PairingModule:
    """
    E = Z_P in R^1 for the supernatural number P.
    """
    if not is_supernatural(profile):
        raise InvalidSupernatural(f"'{format_profile(profile)}' has finite nonzero caps")
    return build_module(1, [(profile, [[ONE]])], names=["tau"])


def _common_radicand(modules: Sequence[PairingModule]) -> int:
    found = {m.radicand for m in modules} - {1}
    if len(found) > 1:
        raise UnsupportedScalar(f"summands over different quadratic fields: {sorted(found)}")
    return found.pop() if found else 1


def direct_sum(modules: Sequence[PairingModule]) -> PairingModule:
    """
    Block product: K_0 of a direct sum is the product, so E is E_1 x ... x E_k.
    """
    if not modules:
        raise ValueError("direct sum of no summands")
    if len(modules) == 1:
        return modules[0]
    radicand = _common_radicand(modules)
    total = sum(m.n for m in modules)
    groups: List[GeneratorGroup] = []
    names: List[str] = []
    offset = 0
    for idx, mod in enumerate(modules):
        for profile, vecs in generator_groups(mod):
            padded = [[ZERO] * offset + list(v) + [ZERO] * (total - offset - mod.n) for v in vecs]
            groups.append((profile, padded))
        names.extend(f"{name}.{idx + 1}" if len(modules) > 1 else name for name in mod.names())
        offset += mod.n
    if not groups:
        raise UnsupportedDomain("direct sum of zero modules")
    return build_module(total, groups, radicand, names)


def tensor(m1: PairingModule, m2: PairingModule) -> PairingModule:
    """
    Coordinates (i, j) -> i*n2 + j with (e ⊠ f)_(i,j) = e_i * f_j, profiles adding.
    """
    radicand = _common_radicand([m1, m2])
    groups: List[GeneratorGroup] = []
    for p1, vecs1 in generator_groups(m1):
        for p2, vecs2 in generator_groups(m2):
            products = [[e[i] * f[j] for i in range(m1.n) for j in range(m2.n)] for e in vecs1 for f in vecs2]
            groups.append((add_profiles(p1, p2), products))
    names = [f"{a}*{b}" for a in m1.names() for b in m2.names()]
    logger.info(TORSION_NOTE)
    if not groups:
        raise UnsupportedDomain("tensor product with a zero module")
    return build_module(m1.n * m2.n, groups, radicand, names)


def dimension_group(raw: PairingModule, u: Sequence[ScalarLike]) -> PairingModule:
    """
    Normalizes (G, G+, u): coordinate i is divided by u_i, i.e. act(diag(u), raw).
    """
    unit = [as_scalar(x) for x in u]
    if len(unit) != raw.n:
        raise DimensionMismatch(f"order unit of length {len(unit)} for a module in R^{raw.n}")
    if any(sign(x) <= 0 for x in unit):
        raise NotInModule("order unit coordinates must be positive")
    if not member(unit, raw):
        raise NotInModule(f"order unit ({', '.join(str(x) for x in unit)}) is not in the module")
    for x in unit:
        invert(x)
    if all(x == ONE for x in unit):
        return raw
    return act(diagonal(unit), raw)


def rotation(theta: ScalarLike) -> PairingModule:
    """E(A_theta) = Z + theta*Z for a real quadratic theta."""
    theta = as_scalar(theta)
    parts = quadratic_parts(theta)
    if parts is None or parts[0] == 1 or parts[2] == 0:
        raise UnsupportedScalar(f"rotation needs a quadratic irrational, got {theta}; use a custom module for free symbols")
    return build_module(1, [(ZERO_PROFILE, [[ONE], [theta]])], names=["tau"])


def custom(module: PairingModule) -> PairingModule:
    return canonicalize(module)


def dual_system(sizes: Sequence[int], weights: Optional[Sequence[Sequence[Fraction]]] = None) -> RationalRows:
    """
    Row j holds c_jk with u_j = sum_k c_jk * 1_k and phi_i(u_j) = delta_ij.

    phi_i = sum_k W_ik tau_k over the normalized block traces tau_k, so C = (W^T)^-1.
    """
    m = len(sizes)
    w = [[Fraction(x) for x in row] for row in weights] if weights else [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    if len(w) != m or any(len(row) != m for row in w):
        raise DimensionMismatch(f"trace weight matrix must be {m}x{m}")
    transposed = [[w[j][i] for j in range(m)] for i in range(m)]
    if rational_rank(transposed, m) < m:
        raise Singular("trace weights are linearly dependent; no dual system exists")
    inv = invert_rational(transposed)
    return tuple(tuple(row) for row in inv)


def model_dual_system(model: AlgebraModel) -> RationalRows:
    if model.kind != AlgebraKind.FINITE_DIMENSIONAL:
        raise UnsupportedDomain(f"dual systems are computed for finite-dimensional models, not '{model.kind}'")
    return dual_system(model.sizes, model.trace_weights or None)


def _module_of(model: AlgebraModel) -> Tuple[PairingModule, Optional[MonomialGroupDesc], List[str]]:
    kind = model.kind
    if kind == AlgebraKind.FINITE_DIMENSIONAL:
        module, group = finite_dimensional(model.sizes)
        return module, group, []
    if kind == AlgebraKind.UHF:
        if model.profile is None:
            raise UnsupportedDomain("uhf model without a supernatural profile")
        return uhf(model.profile), None, []
    if kind in (AlgebraKind.DIRECT_SUM, AlgebraKind.TENSOR):
        children = [_module_of(part) for part in model.parts]
        notes = [note for _, _, child_notes in children for note in child_notes]
        modules = [mod for mod, _, _ in children]
        if kind == AlgebraKind.DIRECT_SUM:
            closed = children[0][1] if len(children) == 1 else None
            return direct_sum(modules), closed, notes
        return tensor(modules[0], modules[1]), None, notes + [TORSION_NOTE]
    if kind == AlgebraKind.ROTATION:
        if model.theta is None:
            raise UnsupportedDomain("rotation model without theta")
        return rotation(model.theta), None, []
    if model.module is None:
        raise UnsupportedDomain(f"'{kind}' model without a module")
    if kind == AlgebraKind.DIMENSION_GROUP:
        return dimension_group(model.module, model.order_unit), None, []
    return custom(model.module), None, []


def build(model: AlgebraModel) -> BuiltModel:
    """
    Evaluates a model description. Declared realized generators must fix E.
    """
    module, closed, notes = _module_of(model)
    for g in model.realized:
        if g.n != module.n or not verify(module, g):
            raise InvariantViolation(f"declared realized generator {g.text()} does not fix E of '{model.name or model.kind}'")
    logger.debug("built '%s': n=%d, rank %d", model.name or model.kind, module.n, module.rank)
    return BuiltModel(module=module, closed_form=closed, notes=tuple(notes), realized=model.realized)

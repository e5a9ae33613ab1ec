"""
Named algebra instances with known fundamental groups, and those groups in closed form.
"""

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from fundgroup.domain.errors import UnsupportedDomain
from fundgroup.domain.types import INF
from fundgroup.features.algebras.logic import finite_dimensional, rotation, uhf
from fundgroup.features.algebras.models import AlgebraKind, AlgebraModel
from fundgroup.features.bratteli.families import PIINV2, prime2_symbol
from fundgroup.features.lattices.logic import parse_profile, uniform_profile
from fundgroup.features.lattices.models import ZERO_PROFILE, DenominatorProfile
from fundgroup.features.monomial.logic import (
    antidiagonal,
    diagonal,
    group_from_description,
    permutation_matrix,
    symmetric_group,
    trivial_group,
)
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, Permutation
from fundgroup.features.pairing.logic import build_module
from fundgroup.features.scalars.intervals import symbol_enclosure
from fundgroup.features.scalars.logic import fundamental_unit, invert, sign
from fundgroup.features.scalars.models import ONE, ZERO, Atom, ExactScalar

THETA = Atom.symbol("theta", Fraction(2718281, 10**6), Fraction(2718282, 10**6), definition="E")
PI = Atom.symbol("pi", Fraction(314159, 10**5), Fraction(314160, 10**5), definition="pi")

ZID_DEFINITIONS = ("E", "pi", "log(2)", "log(3)", "exp(pi)", "2**sqrt(2)")


def _swap(n: int, i: int = 0, j: int = 1) -> Permutation:
    image = list(range(n))
    image[i], image[j] = j, i
    return Permutation(tuple(image))


def _unit_rows(n: int, values: Sequence[ExactScalar]) -> List[List[ExactScalar]]:
    """value * e_i for every coordinate i and value."""
    return [[v if k == i else ZERO for k in range(n)] for i in range(n) for v in values]


# --- finite-dimensional and UHF examples -------------------------------------------


def matrix_sum(sizes: Sequence[int]) -> AlgebraModel:
    _, group = finite_dimensional(sizes)
    realized = tuple(r for r in group.coset_reps if not r.is_identity)
    name = "+".join(f"M{s}" for s in sizes)
    return AlgebraModel(AlgebraKind.FINITE_DIMENSIONAL, name=name, sizes=tuple(sizes), realized=realized)


def uhf_model(profile: DenominatorProfile, name: str = "") -> AlgebraModel:
    uhf(profile)
    return AlgebraModel(AlgebraKind.UHF, name=name, profile=profile)


def ex_prime() -> AlgebraModel:
    """M_{2^inf} + M_{2^inf} + M_{3^inf}."""
    two = uhf_model(parse_profile("default=0 except 2:inf"), "M2inf")
    three = uhf_model(parse_profile("default=0 except 3:inf"), "M3inf")
    realized = (
        diagonal([2, 1, 1]),
        diagonal([1, 2, 1]),
        diagonal([1, 1, 3]),
        permutation_matrix(_swap(3)),
    )
    return AlgebraModel(AlgebraKind.DIRECT_SUM, name="prime", parts=(two, two, three), realized=realized)


def ex_tensor() -> AlgebraModel:
    """M_{2^inf} (x) C^2."""
    two = uhf_model(parse_profile("default=0 except 2:inf"), "M2inf")
    realized = (diagonal([2, 1]), diagonal([1, 2]), permutation_matrix(_swap(2)))
    return AlgebraModel(AlgebraKind.TENSOR, name="tensor", parts=(two, matrix_sum([1, 1])), realized=realized)


# --- the G_j families ---------------------------------------------------------------


def a_unit(n: int) -> AlgebraModel:
    """G_1 + G_2 + ... + G_n with G_j carrying cap j at every prime: no symmetry survives."""
    groups = [(uniform_profile(j + 1), [[ONE if k == j else ZERO for k in range(n)]]) for j in range(n)]
    return AlgebraModel(AlgebraKind.CUSTOM, name=f"A_unit({n})", module=build_module(n, groups))


def a_sn(n: int) -> AlgebraModel:
    module = build_module(n, [(uniform_profile(1), _unit_rows(n, [ONE]))])
    realized = tuple(permutation_matrix(_swap(n, i, i + 1)) for i in range(n - 1))
    return AlgebraModel(AlgebraKind.CUSTOM, name=f"A_S{n}", module=module, realized=realized)


def _g_theta_pair(extra: Sequence[ExactScalar]) -> AlgebraModel:
    values = [ONE, *extra]
    return AlgebraModel(AlgebraKind.CUSTOM, module=build_module(2, [(uniform_profile(1), _unit_rows(2, values))]))


def _twisted(raw: AlgebraModel, name: str, theta: ExactScalar, twist: bool) -> AlgebraModel:
    assert raw.module is not None
    if twist:
        unit = (ONE, theta)
        realized: tuple[MonomialMatrix, ...] = (antidiagonal([theta, invert(theta)]),)
    else:
        unit = (ONE, ONE)
        realized = (permutation_matrix(_swap(2)),)
    return AlgebraModel(AlgebraKind.DIMENSION_GROUP, name=name, module=raw.module, order_unit=unit, realized=realized)


def a11(theta: Optional[Atom] = None) -> AlgebraModel:
    """(G_1 + theta G_1)^2 at order unit (1, 1), theta non-quadratic."""
    t = ExactScalar.atom(theta or THETA)
    return _twisted(_g_theta_pair([t]), "A_(1,1)", t, twist=False)


def a1theta(theta: Optional[Atom] = None) -> AlgebraModel:
    """(G_1 + theta G_1)^2 at order unit (1, theta)."""
    t = ExactScalar.atom(theta or THETA)
    return _twisted(_g_theta_pair([t]), "A_(1,theta)", t, twist=True)


def irratio2(d: int = 2, twist: bool = True) -> AlgebraModel:
    """(G_1 + sqrt(d) G_1 + pi G_1)^2 at (1, sqrt d), or at (1, 1) without the twist."""
    theta = ExactScalar.atom(Atom.sqrt(d))
    raw = _g_theta_pair([theta, ExactScalar.atom(PI)])
    return _twisted(raw, f"B_(1,sqrt{d})" if twist else "B_(1,1)", theta, twist)


def zid_symbols(n: int) -> List[Atom]:
    if not 1 <= n <= len(ZID_DEFINITIONS):
        raise UnsupportedDomain(f"default zid symbols exist for n <= {len(ZID_DEFINITIONS)}")
    out = []
    for i, definition in enumerate(ZID_DEFINITIONS[:n]):
        atom = Atom.symbol(f"theta{i + 1}", Fraction(0), Fraction(0), definition=definition)
        lo, hi = symbol_enclosure(atom, 32)
        out.append(Atom.symbol(f"theta{i + 1}", lo, hi, definition=definition))
    return out


def zid(symbols: Sequence[Atom]) -> AlgebraModel:
    """(Z + theta_1 Z) + ... + (Z + theta_n Z) for mutually independent theta_i."""
    n = len(symbols)
    rows = []
    for i, atom in enumerate(symbols):
        for value in (ONE, ExactScalar.atom(atom)):
            rows.append([value if k == i else ZERO for k in range(n)])
    return AlgebraModel(AlgebraKind.CUSTOM, name=f"A_zid({n})", module=build_module(n, [(ZERO_PROFILE, rows)]))


# --- rotation algebras ------------------------------------------------------------------


def irr_morita(d: int = 5, a: int = 0, b: int = 1, c: int = 1, e: int = 0) -> AlgebraModel:
    """
    A_theta + A_eta with theta = sqrt d and eta = (a theta + b)/(c theta + e) for an
    integer matrix of determinant +-1; E(A_eta) = |c theta + e|^-1 (Z + theta Z).
    """
    if a * e - b * c not in (1, -1):
        raise UnsupportedDomain(f"[[{a},{b}],[{c},{e}]] is not in GL2(Z)")
    theta = ExactScalar.atom(Atom.sqrt(d))
    scale = theta * c + e
    if sign(scale) < 0:
        scale = -scale
    inv = invert(scale)
    first = AlgebraModel(AlgebraKind.ROTATION, name=f"A_sqrt{d}", theta=theta)
    second = AlgebraModel(
        AlgebraKind.CUSTOM,
        name="A_eta",
        module=build_module(1, [(ZERO_PROFILE, [[inv], [theta * inv]])]),
    )
    eps = fundamental_unit(d)
    realized = (diagonal([eps, ONE]), diagonal([ONE, eps]), antidiagonal([scale, inv]))
    return AlgebraModel(AlgebraKind.DIRECT_SUM, name=f"irr(sqrt{d})", parts=(first, second), realized=realized)


def irr_pair(d: int = 5) -> AlgebraModel:
    """A_theta + A_(1/theta) for theta = sqrt d."""
    return irr_morita(d, 0, 1, 1, 0)


def rotation_model(d: int) -> AlgebraModel:
    theta = ExactScalar.atom(Atom.sqrt(d))
    rotation(theta)
    return AlgebraModel(AlgebraKind.ROTATION, name=f"A_sqrt{d}", theta=theta, realized=(diagonal([fundamental_unit(d)]),))


# --- two-trace AF families ----------------------------------------------------------------


def simpleaf() -> AlgebraModel:
    """
    Channel model of E: (1,1) Z_P with P = 2^inf and p^2 elsewhere, plus (t, -t) Q for t = 1/pi^2.
    """
    t = ExactScalar.atom(PIINV2)
    rational = DenominatorProfile.build(2, {2: INF})
    module = build_module(2, [(rational, [[ONE, ONE]]), (uniform_profile(INF), [[t, -t]])], names=["phi1", "phi2"])
    realized = (diagonal([2, 2]), permutation_matrix(_swap(2)))
    return AlgebraModel(AlgebraKind.CUSTOM, name="simpleaf", module=module, realized=realized)


def prime2(p: int = 3) -> AlgebraModel:
    """Channel model of M_{p^inf} (x) B: (1,1) Z[1/p]/2 plus (T, -T) Q."""
    t = ExactScalar.atom(prime2_symbol(p))
    rational = DenominatorProfile.build(0, {2: 1, p: INF})
    module = build_module(2, [(rational, [[ONE, ONE]]), (uniform_profile(INF), [[t, -t]])], names=["phi1", "phi2"])
    realized = (diagonal([p, p]), permutation_matrix(_swap(2)))
    return AlgebraModel(AlgebraKind.CUSTOM, name=f"prime2(p={p})", module=module, realized=realized)


FAMILIES: Dict[str, Callable[..., AlgebraModel]] = {
    "simpleaf": simpleaf,
    "prime2": prime2,
    "a_unit": a_unit,
    "a_sn": a_sn,
    "a11": a11,
    "a1theta": a1theta,
    "irratio2": irratio2,
    "zid": lambda n=2: zid(zid_symbols(n)),
    "irr_pair": irr_pair,
    "irr_morita": irr_morita,
    "prime": ex_prime,
    "tensor": ex_tensor,
}


# --- closed forms --------------------------------------------------------------------------


def _swap_group(weight: ExactScalar, diag_gens: Sequence[Sequence[ExactScalar]] = ()) -> MonomialGroupDesc:
    return group_from_description(2, diag_gens, [antidiagonal([weight, invert(weight)])])


def expected_group(
    name: str,
    n: int = 2,
    d: Optional[int] = None,
    p: int = 3,
    c: int = 1,
    e: int = 0,
    sizes: Sequence[int] = (1,),
) -> MonomialGroupDesc:
    """
    Groups stated for the named instances, in the pairing convention used throughout
    (d_i E_sigma(i) = E_i).
    """
    two = ExactScalar.rational(2)
    swap = permutation_matrix(_swap(2))
    if name == "finite_dimensional":
        return finite_dimensional(sizes)[1]
    if name == "prime":
        return group_from_description(3, [[2, 1, 1], [1, 2, 1], [1, 1, 3]], [permutation_matrix(_swap(3))])
    if name == "tensor":
        return group_from_description(2, [[2, 1], [1, 2]], [swap])
    if name == "simpleaf":
        return group_from_description(2, [[two, two]], [swap])
    if name == "prime2":
        return group_from_description(2, [[p, p]], [swap])
    if name in ("irr_pair", "irr_morita"):
        radicand = d or 5
        scale = ExactScalar.atom(Atom.sqrt(radicand)) * c + e
        if sign(scale) < 0:
            scale = -scale
        eps = fundamental_unit(radicand)
        return _swap_group(scale, [[eps, ONE], [ONE, eps]])
    if name == "rotation":
        return group_from_description(1, [[fundamental_unit(d or 5)]])
    if name in ("a_unit", "zid"):
        return trivial_group(n)
    if name == "a_sn":
        return symmetric_group(n)
    if name == "a11":
        return _swap_group(ONE)
    if name == "a1theta":
        return _swap_group(ExactScalar.atom(THETA))
    if name == "irratio2":
        return _swap_group(ExactScalar.atom(Atom.sqrt(d or 2)))
    raise UnsupportedDomain(f"no closed-form group for '{name}'")

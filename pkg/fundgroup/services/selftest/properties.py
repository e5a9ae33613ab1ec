"""
Seeded randomized property suites. Every suite takes a numpy Generator and a case count
and returns a summary line, raising CheckFailure on the first counterexample.
"""

from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, primerange

from fundgroup.domain.models import SearchBounds
from fundgroup.domain.types import is_inf
from fundgroup.features.algebras.families import a1theta, a11, a_sn, a_unit, ex_prime, ex_tensor, irr_pair, matrix_sum, simpleaf, zid
from fundgroup.features.algebras.logic import build
from fundgroup.features.algebras.models import AlgebraModel
from fundgroup.features.envelope.logic import verify
from fundgroup.features.envelope.processor import k_envelope
from fundgroup.features.lattices.logic import equal, lattice_from_generators, member, scale, stabilizer, transporter
from fundgroup.features.lattices.models import ZERO_PROFILE, DenominatorProfile
from fundgroup.features.monomial.logic import (
    conjugate,
    contains,
    decompose,
    dense_product,
    equal_groups,
    group_generators,
    multiply,
    sample_element,
    to_dense,
    trivial_group,
)
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, Permutation
from fundgroup.features.pairing.logic import act, build_module
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.intervals import symbol_enclosure
from fundgroup.features.scalars.logic import fundamental_unit, invert, norm, quadratic_parts
from fundgroup.features.scalars.models import ONE, Atom, ExactScalar, is_squarefree
from fundgroup.kernel.integer.logic import rational_rank
from fundgroup.services.selftest.models import require

PROFILES = (
    ZERO_PROFILE,
    DenominatorProfile.build(1),
    DenominatorProfile.build(0, {2: float("inf")}),
    DenominatorProfile.build(1, {3: 0, 5: float("inf")}),
    DenominatorProfile.build(2, {2: 0}),
)
RADICANDS = (2, 3, 5, 7, 13)
# finite profiles without free primes: projection stabilizers are trivial
PLANTED_PROFILES = (ZERO_PROFILE, DenominatorProfile.build(1))


def random_fraction(rng: np.random.Generator, top: int = 40, den: int = 12, positive: bool = False) -> Fraction:
    num = int(rng.integers(1, top)) if positive else int(rng.integers(-top, top))
    return Fraction(num, int(rng.integers(1, den)))


def random_quadratic(rng: np.random.Generator, d: int) -> ExactScalar:
    return ExactScalar.quadratic(random_fraction(rng), random_fraction(rng), d)


def random_monomial(rng: np.random.Generator, n: int, d: Optional[int] = None) -> MonomialMatrix:
    """Random permutation times positive diagonal; with d, entries are rationals times powers of the unit of Q(sqrt d)."""
    perm = Permutation(tuple(int(i) for i in rng.permutation(n)))
    diag = []
    for _ in range(n):
        x = ExactScalar.rational(random_fraction(rng, positive=True))
        if d is not None:
            x = x * fundamental_unit(d) ** int(rng.integers(-2, 3))
        diag.append(x)
    return MonomialMatrix(perm, tuple(diag))


def decompose_roundtrip(rng: np.random.Generator, cases: int) -> str:
    for _ in range(cases):
        n = int(rng.integers(1, 7))
        d = RADICANDS[int(rng.integers(len(RADICANDS)))] if rng.random() < 0.5 else None
        m = random_monomial(rng, n, d)
        require(decompose(to_dense(m)) == m, f"decompose(to_dense(M)) != M for {m.text()}")
    return f"{cases} cases"


def product_rule(rng: np.random.Generator, cases: int) -> str:
    for _ in range(cases):
        n = int(rng.integers(1, 7))
        d = RADICANDS[int(rng.integers(len(RADICANDS)))] if rng.random() < 0.5 else None
        a, b = random_monomial(rng, n, d), random_monomial(rng, n, d)
        dense = dense_product(to_dense(a), to_dense(b))
        require(all(x == y for x, y in zip(to_dense(multiply(a, b)).flat, dense.flat)), f"product rule fails for {a.text()} * {b.text()}")
    return f"{cases} cases"


def scalar_ring(rng: np.random.Generator, cases: int) -> str:
    for _ in range(cases):
        d = RADICANDS[int(rng.integers(len(RADICANDS)))]
        x, y, z = (random_quadratic(rng, d) for _ in range(3))
        require((x + y) + z == x + (y + z), "addition is not associative")
        require(x * (y + z) == x * y + x * z, "multiplication does not distribute")
        require(x * y == y * x and (x * y) * z == x * (y * z), "multiplication is not commutative and associative")
        if not x.is_zero:
            require(x * invert(x) == ONE, f"invert({x}) is wrong")
    return f"{cases} cases"


def _random_lattice(rng: np.random.Generator) -> Tuple[List[List[int]], DenominatorProfile]:
    while True:
        n = int(rng.integers(1, 4))
        k = int(rng.integers(1, n + 1))
        rows = [[int(x) for x in rng.integers(-5, 6, size=n)] for _ in range(k)]
        if rational_rank([[Fraction(x) for x in r] for r in rows], n) == k:
            return rows, PROFILES[int(rng.integers(len(PROFILES)))]


def _admissible(coeffs: Sequence[Fraction], profile: DenominatorProfile) -> bool:
    for c in coeffs:
        if c == 0:
            continue
        for p, e in factorint(c.denominator).items():
            cap = profile.cap(int(p))
            if not is_inf(cap) and e > cap:
                return False
    return True


def lattice_membership(rng: np.random.Generator, cases: int) -> str:
    for _ in range(cases):
        rows, profile = _random_lattice(rng)
        lattice = lattice_from_generators(rows, profile)
        coeffs = [Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 1001))) for _ in rows]
        v = [sum((c * r[j] for c, r in zip(coeffs, rows)), Fraction(0)) for j in range(len(rows[0]))]
        require(member(v, lattice) == _admissible(coeffs, profile), f"membership of {v} disagrees with the coefficient oracle")
    return f"{cases} cases"


def stabilizer_transporter(rng: np.random.Generator, cases: int, bounds: SearchBounds) -> str:
    for _ in range(cases):
        rows, profile = _random_lattice(rng)
        lattice = lattice_from_generators(rows, profile)
        lam = ExactScalar.rational(random_fraction(rng, positive=True))
        target = scale(lam, lattice)
        result = transporter(lattice, target, bound_units=bounds.units)
        require(result.representative is not None, f"no transporter found for a scaled lattice (lambda = {lam})")
        assert result.representative is not None
        require(equal(scale(result.representative, lattice), target), "transporter representative fails equal(scale(...))")
        for g in stabilizer(lattice, bound_units=bounds.units).generators:
            require(equal(scale(g, lattice), lattice), f"stabilizer generator {g} does not fix the lattice")
    return f"{cases} cases"


def planted_symmetry(rng: np.random.Generator, n: int = 3) -> MonomialMatrix:
    """B = D·U(sigma), sigma != e, with the weights along every cycle multiplying to 1, so B^ord(sigma) = I."""
    while True:
        perm = Permutation(tuple(int(i) for i in rng.permutation(n)))
        if not perm.is_identity:
            break
    diag = [Fraction(1)] * n
    seen: set[int] = set()
    for start in range(n):
        if start in seen:
            continue
        cycle = [start]
        while perm(cycle[-1]) != start:
            cycle.append(perm(cycle[-1]))
        seen.update(cycle)
        product = Fraction(1)
        for i in cycle[:-1]:
            diag[i] = random_fraction(rng, top=9, den=5, positive=True)
            product *= diag[i]
        diag[cycle[-1]] = 1 / product
    return MonomialMatrix(perm, tuple(ExactScalar.rational(x) for x in diag))


def orbit_module(rng: np.random.Generator, b: MonomialMatrix) -> PairingModule:
    """Z_P-span of v, Bv, B^2v, ... for a random v without zero entries."""
    n = b.n
    v = [ExactScalar.rational(int(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]))) for _ in range(n)]
    orbit = [v]
    for _ in range(n):
        w = orbit[-1]
        image = [b.diag[i] * w[b.perm(i)] for i in range(n)]
        if image == v:
            break
        orbit.append(image)
    profile = PLANTED_PROFILES[int(rng.integers(len(PLANTED_PROFILES)))]
    return build_module(n, [(profile, orbit)])


def golden_models() -> List[AlgebraModel]:
    return [matrix_sum([2, 3]), ex_prime(), ex_tensor(), irr_pair(5), a_unit(3), a_sn(3), a11(), a1theta(), simpleaf()]


class EnvelopeSuite:
    """
    Envelope soundness and conjugation equivariance over the golden models.
    """

    def __init__(self, bounds: SearchBounds):
        self.bounds = bounds
        self._exact: Dict[str, Tuple[PairingModule, MonomialGroupDesc]] = {}

    def exact(self, model: AlgebraModel) -> Tuple[PairingModule, MonomialGroupDesc]:
        if model.name not in self._exact:
            built = build(model)
            report = k_envelope(built.module, self.bounds, built.realized)
            require(report.exact is not None, f"{model.name}: envelope not exact")
            assert report.exact is not None
            self._exact[model.name] = (built.module, report.exact)
        return self._exact[model.name]

    def soundness(self, rng: np.random.Generator, cases: int) -> str:
        models = golden_models()
        for model in models:
            module, group = self.exact(model)
            for g in group_generators(group):
                require(verify(module, g), f"{model.name}: generator {g.text()} fails verify")
        for i in range(cases):
            model = models[i % len(models)]
            module, group = self.exact(model)
            g = sample_element(group, rng)
            require(verify(module, g), f"{model.name}: sampled element {g.text()} fails verify")
        return f"{len(models)} models, {cases} samples"

    def equivariance(self, rng: np.random.Generator, cases: int) -> str:
        models = golden_models()
        for i in range(cases):
            model = models[i % len(models)]
            module, group = self.exact(model)
            p = random_monomial(rng, module.n)
            report = k_envelope(act(p, module), self.bounds)
            require(report.exact is not None, f"{model.name}: envelope of E.P not exact for P = {p.text()}")
            assert report.exact is not None
            require(equal_groups(report.exact, conjugate(group, p)), f"{model.name}: equivariance fails for P = {p.text()}")
        return f"{cases} conjugations"

    def planted(self, rng: np.random.Generator, cases: int) -> str:
        """
        Small coupled modules built as the orbit of one vector under a random B: B must land in
        the verified lower group, and the upper group must contain the lower one.
        """
        for _ in range(cases):
            b = planted_symmetry(rng)
            module = orbit_module(rng, b)
            require(verify(module, b), f"planted {b.text()} does not fix its own orbit module")
            report = k_envelope(module, self.bounds)
            require(contains(report.lower, b), f"planted {b.text()} missing from the verified lower group")
            for g in group_generators(report.lower):
                require(contains(report.upper, g), f"lower generator {g.text()} outside the upper group")
            if report.exact is not None:
                require(contains(report.exact, b), f"planted {b.text()} missing from an exact envelope")
        return f"{cases} planted symmetries"


def _pell_oracle(d: int) -> Tuple[int, int]:
    y = 1
    while True:
        for target in (d * y * y - 1, d * y * y + 1):
            x = isqrt(target)
            if x > 0 and x * x == target:
                return x, y
        y += 1


def pell_units(limit: int = 50) -> str:
    checked = 0
    for d in range(2, limit + 1):
        if not is_squarefree(d):
            continue
        u = fundamental_unit(d)
        parts = quadratic_parts(u)
        require(parts is not None and parts[0] == d, f"fundamental_unit({d}) = {u} is not in Z[sqrt {d}]")
        assert parts is not None
        require((parts[1], parts[2]) == _pell_oracle(d), f"fundamental_unit({d}) = {u} is not minimal")
        require(norm(u) in (1, -1), f"fundamental_unit({d}) has norm {norm(u)}")
        checked += 1
    return f"{checked} radicands"


def random_symbol_pairs(rng: np.random.Generator, pairs: int, bounds: SearchBounds) -> str:
    """Pairs of logarithms of distinct primes: E = (Z + theta_1 Z) + (Z + theta_2 Z) has only I."""
    primes = [int(p) for p in primerange(2, 60)]
    for _ in range(pairs):
        p, q = (primes[int(i)] for i in rng.choice(len(primes), size=2, replace=False))
        symbols = []
        for r in (p, q):
            atom = Atom.symbol(f"log{r}", Fraction(0), Fraction(0), definition=f"log({r})")
            lo, hi = symbol_enclosure(atom, 32)
            symbols.append(Atom.symbol(f"log{r}", lo, hi, definition=f"log({r})"))
        built = build(zid(symbols))
        report = k_envelope(built.module, bounds)
        require(report.exact is not None and equal_groups(report.exact, trivial_group(2)), f"log {p}, log {q}: envelope is not {{I}}")
    return f"{pairs} pairs"

import itertools
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from fundgroup.features.lattices.models import MultiplicativeGroupDesc, TransporterResult
from fundgroup.features.monomial.logic import diagonal, multiply, power
from fundgroup.features.monomial.models import MonomialMatrix, Permutation
from fundgroup.features.pairing.logic import act, coordinate_projection, equal
from fundgroup.features.pairing.models import PairingModule
from fundgroup.features.scalars.models import ONE, ExactScalar
from fundgroup.kernel.integer.logic import rref_rows

Classes = Tuple[Tuple[int, ...], ...]


def verify(module: PairingModule, m: MonomialMatrix) -> bool:
    """Exact test E·M = E."""
    if m.is_identity:
        return True
    return equal(act(m, module), module)


def projections(module: PairingModule) -> List[PairingModule]:
    return [coordinate_projection(module, i + 1) for i in range(module.n)]


def coupling_classes(module: PairingModule) -> Classes:
    """
    Coordinates linked by the rational span of E: the finest split of the span along
    coordinate blocks. A positive diagonal fixing E is constant on each rational class.
    """
    n = module.n
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rows = [[Fraction(x) for x in row] for c in module.components for row in c.basis]
    if rows:
        reduced, _ = rref_rows(rows, module.flat_dim)
        for row in reduced:
            nodes = sorted({(f // module.width) % n for f, x in enumerate(row) if x != 0})
            for other in nodes[1:]:
                parent[find(other)] = find(nodes[0])
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(sorted(tuple(g) for g in groups.values()))


def permutes_classes(perm: Permutation, classes: Classes) -> bool:
    blocks = {frozenset(c) for c in classes}
    return all(frozenset(perm(i) for i in c) in blocks for c in classes)


def admitted_permutations(n: int, transports: Dict[Tuple[int, int], TransporterResult]) -> List[Permutation]:
    """
    sigma with E_{sigma(i)} carried onto E_i for every i, in lexicographic order.
    """
    out = []
    for image in itertools.permutations(range(n)):
        if all(not transports[(image[i], i)].is_empty for i in range(n)):
            out.append(Permutation(image))
    return out


def support_matrix(n: int, transports: Dict[Tuple[int, int], TransporterResult]) -> Tuple[Tuple[bool, ...], ...]:
    return tuple(tuple(not transports[(i, j)].is_empty for j in range(n)) for i in range(n))


def coordinate_generators(n: int, stabs: Sequence[MultiplicativeGroupDesc]) -> List[Tuple[ExactScalar, ...]]:
    """Diagonal generators of the product of projection stabilizers."""
    out = []
    for i, stab in enumerate(stabs):
        for g in stab.generators:
            out.append(tuple(g if k == i else ONE for k in range(n)))
    return out


def projection_rep(perm: Permutation, transports: Dict[Tuple[int, int], TransporterResult]) -> Optional[MonomialMatrix]:
    """d_i = lam with lam·E_{sigma(i)} = E_i; None while any transporter is undecided."""
    diag = []
    for i in range(perm.n):
        res = transports[(perm(i), i)]
        if not res.is_found or res.representative is None:
            return None
        diag.append(res.representative)
    return MonomialMatrix(perm, tuple(diag))


def _prime_set(stab: MultiplicativeGroupDesc) -> Optional[Set[int]]:
    primes = set()
    for g in stab.generators:
        if not g.is_rational:
            return None
        q = g.to_fraction()
        if q.denominator != 1:
            return None
        primes.add(int(q.numerator))
    return primes


def class_prime_generators(n: int, classes: Classes, stabs: Sequence[MultiplicativeGroupDesc]) -> List[Tuple[ExactScalar, ...]]:
    """
    Upper generators for the diagonals fixing E: primes free in every projection of a class,
    spread over the class. A class with a non-prime stabilizer generator keeps its
    per-coordinate generators.
    """
    out = []
    for cls in classes:
        sets = [_prime_set(stabs[i]) for i in cls]
        if any(s is None for s in sets):
            for i in cls:
                for g in stabs[i].generators:
                    out.append(tuple(g if k == i else ONE for k in range(n)))
            continue
        common = set.intersection(*[s for s in sets if s is not None])
        for p in sorted(common):
            value = ExactScalar.rational(p)
            out.append(tuple(value if k in cls else ONE for k in range(n)))
    return out


def _is_rational_diagonal(g: Sequence[ExactScalar]) -> bool:
    return all(x.is_rational for x in g)


def diagonal_candidates(
    n: int,
    generators: Sequence[Tuple[ExactScalar, ...]],
    prime_reach: int,
    unit_reach: int,
) -> List[MonomialMatrix]:
    """
    Generators, their pairwise products and quotients, then powers: up to prime_reach for
    rational generators, unit_reach for the rest.
    """
    base = [diagonal(g) for g in generators]
    out = list(base)
    if len(base) <= 12:
        for a, b in itertools.combinations(base, 2):
            out.append(multiply(a, b))
            out.append(multiply(a, power(b, -1)))
    for g, m in zip(generators, base):
        reach = prime_reach if _is_rational_diagonal(g) else unit_reach
        for k in range(2, reach + 1):
            out.append(power(m, k))
    return out


def exponent_vectors(k: int, radius: int) -> Iterator[Tuple[int, ...]]:
    """Nonzero integer k-vectors by increasing L1 norm, up to radius."""
    for r in range(1, radius + 1):
        yield from _vectors_of_norm(k, r)


def _vectors_of_norm(k: int, r: int) -> Iterator[Tuple[int, ...]]:
    if k == 0:
        if r == 0:
            yield ()
        return
    for a in range(-r, r + 1):
        for rest in _vectors_of_norm(k - 1, r - abs(a)):
            yield (a,) + rest


def adjusted_representatives(rep: MonomialMatrix, generators: Sequence[Tuple[ExactScalar, ...]], radius: int) -> Iterator[MonomialMatrix]:
    """
    rep, then rep·D for D a product of diagonal generators with total exponent at most
    radius, nearest first.
    """
    yield rep
    gens = [diagonal(g) for g in generators]
    for exps in exponent_vectors(len(gens), radius):
        m = rep
        for g, e in zip(gens, exps):
            if e:
                m = multiply(m, power(g, e))
        yield m


def unit_class_candidates(n: int, classes: Classes, unit: ExactScalar, bound: int) -> List[MonomialMatrix]:
    out = []
    for cls in classes:
        value = ONE
        for _ in range(bound):
            value = value * unit
            out.append(diagonal([value if k in cls else ONE for k in range(n)]))
    return out

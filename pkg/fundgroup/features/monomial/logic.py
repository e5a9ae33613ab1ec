import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from fundgroup.domain.errors import DimensionMismatch, NotMonomial, Singular
from fundgroup.domain.models import ResultStatus
from fundgroup.features.lattices.models import MultiplicativeGroupDesc
from fundgroup.features.monomial.exponents import ExponentSpace, Letter, factor_scalar, scalar_from_exponents
from fundgroup.features.monomial.models import MonomialGroupDesc, MonomialMatrix, Permutation, WeightedIsoResult
from fundgroup.features.scalars.logic import DEFAULT_DEPTH, sign
from fundgroup.features.scalars.models import ONE, ZERO, ExactScalar, ScalarLike, as_scalar
from fundgroup.kernel.integer.logic import hnf_rows, reduce_mod_hnf, solve_integer
from fundgroup.kernel.system.logging import get_logger

logger = get_logger("monomial")


def _check_same_n(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"{a}x{a} vs {b}x{b}")


# --- matrices -----------------------------------------------------------------


def identity(n: int) -> MonomialMatrix:
    return MonomialMatrix(Permutation.identity(n), (ONE,) * n)


def diagonal(values: Sequence[ScalarLike]) -> MonomialMatrix:
    return MonomialMatrix(Permutation.identity(len(values)), tuple(as_scalar(v) for v in values))


def permutation_matrix(perm: Permutation) -> MonomialMatrix:
    return MonomialMatrix(perm, (ONE,) * perm.n)


def antidiagonal(values: Sequence[ScalarLike]) -> MonomialMatrix:
    n = len(values)
    return MonomialMatrix(Permutation(tuple(n - 1 - i for i in range(n))), tuple(as_scalar(v) for v in values))


def multiply(a: MonomialMatrix, b: MonomialMatrix) -> MonomialMatrix:
    """(d1, s1)(d2, s2) = (i -> d1_i * d2_{s1(i)}, s1 then s2)."""
    _check_same_n(a.n, b.n)
    diag = tuple(a.diag[i] * b.diag[a.perm(i)] for i in range(a.n))
    return MonomialMatrix(a.perm.then(b.perm), diag)


def inverse(a: MonomialMatrix) -> MonomialMatrix:
    inv = a.perm.inverse()
    return MonomialMatrix(inv, tuple(ONE / a.diag[inv(j)] for j in range(a.n)))


def power(a: MonomialMatrix, k: int) -> MonomialMatrix:
    base = a if k >= 0 else inverse(a)
    out = identity(a.n)
    for _ in range(abs(k)):
        out = multiply(out, base)
    return out


def kron_matrix(a: MonomialMatrix, b: MonomialMatrix) -> MonomialMatrix:
    """Block Kronecker product; index (i, j) -> i*n_b + j."""
    nb = b.n
    image = tuple(a.perm(i) * nb + b.perm(j) for i in range(a.n) for j in range(nb))
    diag = tuple(a.diag[i] * b.diag[j] for i in range(a.n) for j in range(nb))
    return MonomialMatrix(Permutation(image), diag)


def to_dense(a: MonomialMatrix) -> np.ndarray:
    out = np.full((a.n, a.n), ZERO, dtype=object)
    for i in range(a.n):
        out[i, a.perm(i)] = a.diag[i]
    return out


def decompose(matrix: Sequence[Sequence[ScalarLike]] | np.ndarray, depth: int = DEFAULT_DEPTH) -> MonomialMatrix:
    """
    (sigma, d) with M = D·U(sigma) for a nonnegative matrix with one positive entry per row and column.
    """
    rows = [[as_scalar(x) for x in row] for row in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("decompose needs a square matrix")
    signs = [[sign(x, depth) for x in r] for r in rows]
    if any(s < 0 for r in signs for s in r):
        raise NotMonomial("matrix has a negative entry")
    for i, r in enumerate(signs):
        if not any(r):
            raise Singular(f"row {i + 1} is zero")
    for j in range(n):
        if not any(signs[i][j] for i in range(n)):
            raise Singular(f"column {j + 1} is zero")
    image: List[int] = []
    for i, r in enumerate(signs):
        positive = [j for j, s in enumerate(r) if s > 0]
        if len(positive) > 1:
            raise NotMonomial(f"row {i + 1} has {len(positive)} positive entries")
        image.append(positive[0])
    if len(set(image)) != n:
        raise NotMonomial("two rows share their positive column")
    return MonomialMatrix(Permutation(tuple(image)), tuple(rows[i][image[i]] for i in range(n)))


def dense_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b)


# --- group descriptions -----------------------------------------------------------


def _space_for(n: int, groups: Iterable[MonomialGroupDesc], extra: Iterable[Sequence[ExactScalar]] = ()) -> ExponentSpace:
    diagonals: List[Sequence[ExactScalar]] = list(extra)
    for g in groups:
        diagonals.extend(g.diag_gens)
        diagonals.extend(r.diag for r in g.coset_reps)
    return ExponentSpace.spanning(n, diagonals)


def _lattice_rows(group: MonomialGroupDesc, space: ExponentSpace) -> List[List[int]]:
    return hnf_rows([space.vector(d) for d in group.diag_gens], space.dim)


def generate_group(n: int, generators: Sequence[MonomialMatrix]) -> MonomialGroupDesc:
    """
    Canonical description of the group generated by monomial matrices.

    Coset representatives come from a breadth-first walk of the permutation image; the
    diagonal subgroup is generated by the Schreier elements rep(a)·g·rep(a·g)^-1.
    """
    for g in generators:
        _check_same_n(n, g.n)
    ident = Permutation.identity(n)
    reps: Dict[Permutation, MonomialMatrix] = {ident: identity(n)}
    queue = [ident]
    schreier: List[Tuple[ExactScalar, ...]] = []
    while queue:
        perm = queue.pop(0)
        for g in generators:
            prod = multiply(reps[perm], g)
            if prod.perm not in reps:
                reps[prod.perm] = prod
                queue.append(prod.perm)
                continue
            diag = multiply(prod, inverse(reps[prod.perm]))
            if not diag.is_identity:
                schreier.append(diag.diag)
    return _canonical(n, schreier, list(reps.values()))


def _canonical(n: int, diag_gens: Sequence[Sequence[ExactScalar]], reps: Sequence[MonomialMatrix]) -> MonomialGroupDesc:
    space = ExponentSpace.spanning(n, [*diag_gens, *(r.diag for r in reps)])
    basis = hnf_rows([space.vector(d) for d in diag_gens], space.dim)
    canon_reps = []
    for rep in sorted(reps, key=lambda r: r.perm.image):
        reduced = reduce_mod_hnf(space.vector(rep.diag), basis)
        canon_reps.append(MonomialMatrix(rep.perm, space.diagonal(reduced)))
    gens = tuple(space.diagonal(row) for row in basis)
    return MonomialGroupDesc(n, gens, tuple(canon_reps))


def group_from_description(
    n: int,
    diag_gens: Sequence[Sequence[ScalarLike]],
    coset_reps: Sequence[MonomialMatrix] = (),
) -> MonomialGroupDesc:
    """Closes a loose description (generators of N plus monomial generators) into canonical form."""
    gens = [diagonal(d) for d in diag_gens] + list(coset_reps)
    return generate_group(n, gens)


def trivial_group(n: int) -> MonomialGroupDesc:
    return MonomialGroupDesc(n, (), (identity(n),))


def symmetric_group(n: int) -> MonomialGroupDesc:
    """U(S_n)."""
    reps = [permutation_matrix(Permutation(p)) for p in itertools.permutations(range(n))]
    return MonomialGroupDesc(n, (), tuple(sorted(reps, key=lambda r: r.perm.image)))


def group_generators(group: MonomialGroupDesc) -> List[MonomialMatrix]:
    return [diagonal(d) for d in group.diag_gens] + [r for r in group.coset_reps if not r.is_identity]


def contains(group: MonomialGroupDesc, matrix: MonomialMatrix) -> bool:
    _check_same_n(group.n, matrix.n)
    rep = group.rep_for(matrix.perm)
    if rep is None:
        return False
    x = multiply(matrix, inverse(rep))
    space = _space_for(group.n, [group], [x.diag])
    return solve_integer(_lattice_rows(group, space), space.vector(x.diag)) is not None


def kron(g1: MonomialGroupDesc, g2: MonomialGroupDesc) -> MonomialGroupDesc:
    """
    Group generated by the Kronecker products of elements of g1 and g2.
    """
    i1, i2 = identity(g1.n), identity(g2.n)
    gens = [kron_matrix(x, i2) for x in group_generators(g1)]
    gens += [kron_matrix(i1, y) for y in group_generators(g2)]
    return generate_group(g1.n * g2.n, gens)


def conjugate_matrix(m: MonomialMatrix, p: MonomialMatrix) -> MonomialMatrix:
    return multiply(multiply(inverse(p), m), p)


def conjugate(group: MonomialGroupDesc, p: MonomialMatrix) -> MonomialGroupDesc:
    """P^-1 G P."""
    _check_same_n(group.n, p.n)
    if p.is_identity:
        return group
    gens = [conjugate_matrix(x, p) for x in group_generators(group)]
    return generate_group(group.n, gens)


def _determinant(m: MonomialMatrix) -> ExactScalar:
    out = ONE
    for d in m.diag:
        out = out * d
    return out


def _multiplicative_hnf(values: Sequence[ExactScalar]) -> Tuple[List[Letter], List[List[int]]]:
    letters = sorted({letter for v in values for letter in factor_scalar(v)}, key=lambda x: x.sort_key)
    rows = []
    for v in values:
        exps = factor_scalar(v)
        rows.append([exps.get(letter, 0) for letter in letters])
    return letters, hnf_rows(rows, len(letters))


def multiplicative_span(values: Sequence[ExactScalar]) -> MultiplicativeGroupDesc:
    """Reduced generators of the subgroup of positive reals generated by the values."""
    letters, basis = _multiplicative_hnf(values)
    gens = tuple(scalar_from_exponents(dict(zip(letters, row))) for row in basis)
    return MultiplicativeGroupDesc(gens)


def det_group(group: MonomialGroupDesc) -> MultiplicativeGroupDesc:
    """|det| of G: generated by the products of diagonal generators and of representatives."""
    values = [_determinant(diagonal(d)) for d in group.diag_gens]
    values += [_determinant(r) for r in group.coset_reps]
    return multiplicative_span(values)


def same_multiplicative_group(a: MultiplicativeGroupDesc, b: MultiplicativeGroupDesc) -> bool:
    values = [*a.generators, *b.generators]
    letters = sorted({letter for v in values for letter in factor_scalar(v)}, key=lambda x: x.sort_key)

    def basis(gens: Sequence[ExactScalar]) -> List[List[int]]:
        rows = [[factor_scalar(v).get(letter, 0) for letter in letters] for v in gens]
        return hnf_rows(rows, len(letters))

    return basis(a.generators) == basis(b.generators)


def multiplicative_contains(group: MultiplicativeGroupDesc, value: ExactScalar) -> bool:
    letters = sorted(
        {letter for v in (*group.generators, value) for letter in factor_scalar(v)},
        key=lambda x: x.sort_key,
    )
    rows = [[factor_scalar(v).get(letter, 0) for letter in letters] for v in group.generators]
    target = [factor_scalar(value).get(letter, 0) for letter in letters]
    return solve_integer(rows, target) is not None


def diagonal_rank(group: MonomialGroupDesc) -> int:
    space = _space_for(group.n, [group])
    return len(_lattice_rows(group, space))


def _same_diagonal_lattice(g1: MonomialGroupDesc, g2: MonomialGroupDesc, space: ExponentSpace) -> bool:
    return _lattice_rows(g1, space) == _lattice_rows(g2, space)


def _equal_exact(g1: MonomialGroupDesc, g2: MonomialGroupDesc) -> bool:
    if g1.permutations != g2.permutations:
        return False
    space = _space_for(g1.n, [g1, g2])
    if not _same_diagonal_lattice(g1, g2, space):
        return False
    basis = _lattice_rows(g1, space)
    for r1, r2 in zip(g1.coset_reps, g2.coset_reps):
        gap = multiply(r1, inverse(r2))
        if solve_integer(basis, space.vector(gap.diag)) is None:
            return False
    return True


def equal_groups(g1: MonomialGroupDesc, g2: MonomialGroupDesc, up_to_perm: bool = False) -> bool:
    """
    Equality of described groups; with up_to_perm, equality after relabelling coordinates.
    """
    if g1.n != g2.n:
        return False
    if _equal_exact(g1, g2):
        return True
    if not up_to_perm:
        return False
    for image in itertools.permutations(range(g1.n)):
        p = permutation_matrix(Permutation(image))
        if p.is_identity:
            continue
        if _equal_exact(conjugate(g1, p), g2):
            return True
    return False


# --- weighted isomorphism ---------------------------------------------------------


def _iso_obstruction(g1: MonomialGroupDesc, g2: MonomialGroupDesc) -> Optional[str]:
    if g1.n != g2.n:
        return f"sizes differ ({g1.n} vs {g2.n})"
    if g1.order_of_permutation_image != g2.order_of_permutation_image:
        return f"permutation images have different orders ({g1.order_of_permutation_image} vs {g2.order_of_permutation_image})"
    if diagonal_rank(g1) != diagonal_rank(g2):
        return "diagonal subgroups have different ranks"
    if not same_multiplicative_group(det_group(g1), det_group(g2)):
        return "|det| groups differ"
    return None


def _solve_diagonal(g1: MonomialGroupDesc, g2: MonomialGroupDesc) -> Optional[MonomialMatrix]:
    """
    Positive diagonal D with D^-1 g1 D = g2, assuming equal permutation images and N.

    Unknowns are the exponent vectors X_i of D plus, per representative, a vector in N:
    E1_i + X_{sigma(i)} - X_i + N = E2_i for every coordinate i.
    """
    n = g1.n
    space = _space_for(n, [g1, g2])
    basis = _lattice_rows(g2, space)
    moving = [(r1, r2) for r1, r2 in zip(g1.coset_reps, g2.coset_reps) if not r1.perm.is_identity]
    if not moving:
        return identity(n)
    w = space.width
    block = space.dim
    cols = block * len(moving)
    rows: List[List[int]] = []
    for j in range(n):
        for letter in range(w):
            row = [0] * cols
            for b, (r1, _) in enumerate(moving):
                for i in range(n):
                    if r1.perm(i) == j:
                        row[b * block + i * w + letter] += 1
                    if i == j:
                        row[b * block + i * w + letter] -= 1
            rows.append(row)
    for b in range(len(moving)):
        for nrow in basis:
            row = [0] * cols
            row[b * block : (b + 1) * block] = nrow
            rows.append(row)
    target: List[int] = []
    for r1, r2 in moving:
        e1, e2 = space.vector(r1.diag), space.vector(r2.diag)
        target.extend(b - a for a, b in zip(e1, e2))
    solution = solve_integer(rows, target)
    if solution is None:
        return None
    return diagonal(space.diagonal(solution[: n * w]))


def weighted_iso_solver(g1: MonomialGroupDesc, g2: MonomialGroupDesc) -> WeightedIsoResult:
    """
    Some P = D·U(tau) with P^-1 g1 P = g2. PROVEN_EMPTY only when an invariant separates the
    groups; a failed search is UNKNOWN.
    """
    reason = _iso_obstruction(g1, g2)
    if reason is not None:
        return WeightedIsoResult(ResultStatus.PROVEN_EMPTY, reason=reason)
    for image in itertools.permutations(range(g1.n)):
        u = permutation_matrix(Permutation(image))
        moved = conjugate(g1, u)
        if moved.permutations != g2.permutations:
            continue
        space = _space_for(g1.n, [moved, g2])
        if not _same_diagonal_lattice(moved, g2, space):
            continue
        d = _solve_diagonal(moved, g2)
        if d is None:
            continue
        p = multiply(u, d)
        if equal_groups(conjugate(g1, p), g2):
            logger.debug("weighted isomorphism found with permutation %s", u.perm.text())
            return WeightedIsoResult(ResultStatus.FOUND, p)
        logger.warning("diagonal solution for %s failed verification", u.perm.text())
    return WeightedIsoResult(ResultStatus.UNKNOWN, reason="no relabelling admits a diagonal solution in the exponent space of the given entries")


def sample_element(group: MonomialGroupDesc, rng: np.random.Generator, reach: int = 2) -> MonomialMatrix:
    """Random element rep·Π gen^k with |k| <= reach."""
    rep = group.coset_reps[int(rng.integers(len(group.coset_reps)))]
    out = rep
    for gen in group.diag_gens:
        k = int(rng.integers(-reach, reach + 1))
        if k:
            out = multiply(out, power(diagonal(gen), k))
    return out


def format_permutation(perm: Permutation) -> str:
    return perm.text()


def parse_permutation(text: str, n: int) -> Permutation:
    return Permutation.parse(text, n)

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from fundgroup.domain.errors import DimensionMismatch

IntMatrix = List[List[int]]
RatMatrix = List[List[Fraction]]


def _zz(rows: Sequence[Sequence[int]], ncols: int) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), ncols), ZZ)


def _qq(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    return DomainMatrix(
        [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows],
        (len(rows), ncols),
        QQ,
    )


def _from_qq(x: object) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))  # type: ignore[attr-defined]


def _check_width(rows: Sequence[Sequence[object]], ncols: int) -> None:
    for row in rows:
        if len(row) != ncols:
            raise DimensionMismatch(f"row of length {len(row)} in a {ncols}-column matrix")


def pivot_index(row: Sequence[int | Fraction]) -> int:
    """Position of the last nonzero entry, -1 for a zero row."""
    for j in range(len(row) - 1, -1, -1):
        if row[j] != 0:
            return j
    return -1


def hnf_rows(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """
    Canonical basis of the row lattice spanned by integer rows.

    Each row's pivot is its last nonzero entry (positive); entries sitting above another
    row's pivot are reduced into [0, pivot). Rows are ordered by pivot column.
    """
    _check_width(rows, ncols)
    nonzero = [list(r) for r in rows if any(x != 0 for x in r)]
    if not nonzero:
        return []
    # sympy reduces columns, so feed it the transpose
    h = hermite_normal_form(_zz(nonzero, ncols).transpose())
    cols = h.transpose().to_list()
    out = [[int(x) for x in col] for col in cols if any(x != 0 for x in col)]
    for row in out:
        if row[pivot_index(row)] < 0:
            row[:] = [-x for x in row]
    out.sort(key=pivot_index)
    return out


def reduce_mod_hnf(vec: Sequence[int], basis: IntMatrix) -> List[int]:
    """Canonical representative of vec modulo the lattice given by hnf_rows."""
    v = list(vec)
    for row in sorted(basis, key=pivot_index, reverse=True):
        c = pivot_index(row)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v


def snf_decomp(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[List[int], IntMatrix, IntMatrix]:
    """
    Smith form of an integer matrix M: returns (diagonal, S, T) with S*M*T diagonal.
    """
    _check_width(rows, ncols)
    if not rows or ncols == 0:
        n = len(rows)
        eye_s = [[int(i == j) for j in range(n)] for i in range(n)]
        eye_t = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        return [], eye_s, eye_t
    smf, s, t = smith_normal_decomp(_zz(rows, ncols))
    smf_list = smf.to_list()
    diag = [int(smf_list[i][i]) for i in range(min(len(rows), ncols))]
    return diag, [[int(x) for x in r] for r in s.to_list()], [[int(x) for x in r] for r in t.to_list()]


def solve_integer(rows: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[List[int]]:
    """
    Integer x with x·A = target (A given by rows), or None.
    """
    k = len(rows)
    m = len(target)
    if k == 0:
        return [] if all(t == 0 for t in target) else None
    _check_width(rows, m)
    # x·A = b  <=>  A^T x = b ; S A^T T = D
    a_t = [[rows[i][j] for i in range(k)] for j in range(m)]
    diag, s, t = snf_decomp(a_t, k)
    c = [sum(s[i][j] * target[j] for j in range(m)) for i in range(m)]
    y = [0] * k
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
            continue
        if c[i] % d:
            return None
        y[i] = c[i] // d
    return [sum(t[i][j] * y[j] for j in range(k)) for i in range(k)]


def rref_rows(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[RatMatrix, Tuple[int, ...]]:
    """Reduced row echelon form over QQ, zero rows dropped."""
    _check_width(rows, ncols)
    if not rows:
        return [], ()
    r, pivots = _qq(rows, ncols).rref()
    out = [[_from_qq(x) for x in row] for row in r.to_list()[: len(pivots)]]
    return out, tuple(int(p) for p in pivots)


def rational_rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref_rows(rows, ncols)[1])


def solve_rational(rows: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """
    Some rational x with x·A = target, free variables set to zero, or None.
    """
    k = len(rows)
    m = len(target)
    if k == 0:
        return [] if all(t == 0 for t in target) else None
    _check_width(rows, m)
    aug = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(m)]
    red, pivots = rref_rows(aug, k + 1)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        x[p] = row[k]
    return x


def invert_rational(matrix: Sequence[Sequence[Fraction]]) -> RatMatrix:
    n = len(matrix)
    inv = _qq(matrix, n).inv()
    return [[_from_qq(x) for x in row] for row in inv.to_list()]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RatMatrix:
    if not a:
        return []
    inner = len(b)
    width = len(b[0]) if b else 0
    return [[sum((Fraction(a[i][t]) * b[t][j] for t in range(inner)), Fraction(0)) for j in range(width)] for i in range(len(a))]


def denominator_lcm(values: Sequence[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def integer_content(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, int(v))
    return g


def valuation(x: int | Fraction, p: int) -> int | float:
    """p-adic valuation; math.inf for zero."""
    f = Fraction(x)
    if f == 0:
        return math.inf
    v = 0
    num, den = f.numerator, f.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v

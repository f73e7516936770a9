"""Small exact linear algebra over the package's scalar fields.

Vectors are tuples of :class:`~conformal.fields.Scalar`, matrices are
tuples of row tuples.  Everything works by fraction-free-enough Gaussian
elimination with the field's own zero test, so the same code serves the
rationals, F_p, F_2/F_4 and (tolerance-aware) floats.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Optional, Sequence

from .fields import Field, Scalar

Vector = tuple
Matrix = tuple


def vector(field: Field, entries) -> Vector:
    return tuple(field.scalar(e) for e in entries)


def zero_vector(field: Field, n: int) -> Vector:
    return tuple(field.zero() for _ in range(n))


def unit_vector(field: Field, n: int, i: int) -> Vector:
    return tuple(field.one() if j == i else field.zero() for j in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Scalar, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def is_zero_vector(v: Vector) -> bool:
    return all(a.is_zero() for a in v)


def identity_matrix(field: Field, n: int) -> Matrix:
    return tuple(unit_vector(field, n, i) for i in range(n))


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)),
                     start=row[0].field.zero()) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)),
                           start=row[0].field.zero()) for col in bt)
                 for row in a)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def rref(rows: Sequence[Vector], field: Field):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [inv * x for x in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in m), pivots


def rank(rows: Sequence[Vector], field: Field) -> int:
    if not rows:
        return 0
    _, pivots = rref(rows, field)
    return len(pivots)


def kernel_basis(rows: Sequence[Vector], field: Field, ncols: int):
    """Basis of {v : M v = 0} for the matrix with the given rows."""
    if not rows:
        return tuple(unit_vector(field, ncols, i) for i in range(ncols))
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return tuple(basis)


def solve(rows: Sequence[Vector], rhs: Vector, field: Field) -> Optional[Vector]:
    """One solution x of M x = rhs, or None."""
    ncols = len(rows[0]) if rows else len(rhs)
    aug = [tuple(row) + (b,) for row, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero()] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return tuple(x)


def inverse(m: Matrix, field: Field) -> Optional[Matrix]:
    n = len(m)
    aug = [tuple(m[i]) + unit_vector(field, n, i) for i in range(n)]
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        return None
    return tuple(tuple(red[i][n:]) for i in range(n))


def det(m: Matrix, field: Field) -> Scalar:
    n = len(m)
    a = [list(row) for row in m]
    result = field.one()
    for c in range(n):
        pivot = None
        for r in range(c, n):
            if not a[r][c].is_zero():
                pivot = r
                break
        if pivot is None:
            return field.zero()
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = -result
        result = result * a[c][c]
        inv = a[c][c].inverse()
        for r in range(c + 1, n):
            if not a[r][c].is_zero():
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return result


def independent(vectors: Sequence[Vector], field: Field) -> bool:
    return rank(vectors, field) == len(vectors)


def in_span(v: Vector, basis: Sequence[Vector], field: Field) -> bool:
    if not basis:
        return is_zero_vector(v)
    return rank(list(basis) + [v], field) == rank(basis, field)


def coordinates(v: Vector, basis: Sequence[Vector], field: Field) -> Optional[Vector]:
    """Coefficients x with sum x_i basis_i = v, or None if v is outside."""
    cols = tuple(zip(*basis))  # matrix whose columns are the basis vectors
    return solve(cols, v, field)


def all_vectors(field: Field, n: int) -> Iterator[Vector]:
    """Every vector of K^n over a finite field, in sorted order."""
    elems = list(field.elements())
    for combo in product(elems, repeat=n):
        yield tuple(combo)


def projective_points(field: Field, n: int) -> Iterator[Vector]:
    """Canonical representatives (first nonzero coordinate 1) of P(K^n)."""
    elems = list(field.elements())
    one = field.one()
    zero = field.zero()
    for lead in range(n):
        prefix = (zero,) * lead + (one,)
        for tail in product(elems, repeat=n - lead - 1):
            yield prefix + tail

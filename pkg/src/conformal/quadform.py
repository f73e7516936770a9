"""Quadratic and bilinear forms over exact fields.

A form is stored as an upper-triangular coefficient table, so the
diagonal x_i^2 coefficients survive independently of the cross terms;
that distinction is what keeps characteristic 2 honest.  Two bilinear
forms are derived from Q:

* ``b_full``: B(u,v) = Q(u+v) - Q(u) - Q(v), no 1/2 factor, valid in all
  characteristics.  All orthogonality, radical, and incidence predicates
  use this one.
* ``b_half``: the classical convention with B(v,v) = Q(v), characteristic
  != 2 only.  Only the numeric separation/power values use it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .fields import (CharTwo, ConformalError, Field, PrimeField, Rational,
                     Scalar, SquareClass, UnsupportedFieldError,
                     sqrt_if_square, square_class)
from . import linalg
from .linalg import Vector, vec_add, vec_scale, vec_sub


class DegenerateFormError(ConformalError):
    """A non-degenerate form was required."""


class InvalidInputError(ConformalError):
    """Structurally invalid input (bad orthogonal set, rank defect, ...)."""


class WitnessSearchError(ConformalError):
    """The value is representable but no exact witness was constructed."""


class QuadraticForm:
    """Q(v) = sum_{i<=j} c_ij v_i v_j with an upper-triangular table."""

    __slots__ = ("field", "dim", "_items", "_coeffs", "_bil")

    def __init__(self, field: Field, dim: int, coeffs):
        if dim < 1:
            raise InvalidInputError("form dimension must be positive")
        self.field = field
        self.dim = dim
        table = {}
        for (i, j), value in (coeffs.items() if isinstance(coeffs, dict)
                              else coeffs):
            if not 0 <= i <= j < dim:
                raise InvalidInputError(f"bad coefficient index ({i},{j})")
            s = field.scalar(value)
            if not s.is_zero():
                table[(i, j)] = s
        self._items = tuple(sorted(table.items()))
        self._coeffs = table
        self._bil = None

    # -- construction ---------------------------------------------------
    @classmethod
    def diagonal(cls, field: Field, entries) -> "QuadraticForm":
        """[a_1, ..., a_n]: the form sum a_i x_i^2."""
        entries = [field.scalar(e) for e in entries]
        return cls(field, len(entries),
                   {(i, i): a for i, a in enumerate(entries)})

    @classmethod
    def symplectic(cls, field: Field, planes: int) -> "QuadraticForm":
        """sum x_{2i} x_{2i+1} on 2*planes coordinates."""
        return cls(field, 2 * planes,
                   {(2 * i, 2 * i + 1): field.one() for i in range(planes)})

    def coeff(self, i: int, j: int) -> Scalar:
        return self._coeffs.get((i, j), self.field.zero())

    def coeff_items(self):
        return self._items

    # -- evaluation -----------------------------------------------------
    def __call__(self, v: Vector) -> Scalar:
        total = self.field.zero()
        for (i, j), c in self._items:
            total = total + c * v[i] * v[j]
        return total

    def b_full(self, u: Vector, v: Vector) -> Scalar:
        """B(u,v) = Q(u+v) - Q(u) - Q(v); works in every characteristic."""
        total = self.field.zero()
        for (i, j), c in self._items:
            if i == j:
                total = total + (c + c) * u[i] * v[i]
            else:
                total = total + c * (u[i] * v[j] + u[j] * v[i])
        return total

    def b_half(self, u: Vector, v: Vector) -> Scalar:
        """The 1/2-scaled bilinear form; satisfies B(v,v) = Q(v)."""
        if self.field.char == 2:
            raise UnsupportedFieldError(
                "the half bilinear form needs characteristic != 2")
        half = self.field.one() / self.field.scalar(2)
        return half * self.b_full(u, v)

    # -- derived data ----------------------------------------------------
    def bilinear_matrix(self):
        """Gram matrix of b_full (rows of Scalars, cached)."""
        if self._bil is None:
            n = self.dim
            zero = self.field.zero()
            rows = [[zero] * n for _ in range(n)]
            for (i, j), c in self._items:
                if i == j:
                    rows[i][i] = rows[i][i] + c + c
                else:
                    rows[i][j] = rows[i][j] + c
                    rows[j][i] = rows[j][i] + c
            self._bil = tuple(tuple(r) for r in rows)
        return self._bil

    def restrict(self, basis: Sequence[Vector]) -> "QuadraticForm":
        """The form in the coordinates of the given (ambient) basis."""
        coeffs = {}
        for i, bi in enumerate(basis):
            q = self(bi)
            if not q.is_zero():
                coeffs[(i, i)] = q
            for j in range(i + 1, len(basis)):
                b = self.b_full(bi, basis[j])
                if not b.is_zero():
                    coeffs[(i, j)] = b
        return QuadraticForm(self.field, len(basis), coeffs)

    def scaled(self, c) -> "QuadraticForm":
        c = self.field.scalar(c)
        return QuadraticForm(self.field, self.dim,
                             {ij: c * v for ij, v in self._items})

    def direct_sum(self, other: "QuadraticForm") -> "QuadraticForm":
        if other.field != self.field:
            raise InvalidInputError("direct sum over mismatched fields")
        coeffs = dict(self._items)
        for (i, j), c in other._items:
            coeffs[(i + self.dim, j + self.dim)] = c
        return QuadraticForm(self.field, self.dim + other.dim, coeffs)

    def __eq__(self, other):
        return (isinstance(other, QuadraticForm)
                and self.field == other.field
                and self.dim == other.dim
                and self._items == other._items)

    def __hash__(self):
        return hash((self.field.token(), self.dim, self._items))

    def __repr__(self):
        if all(i == j for (i, j), _ in self._items):
            diag = [self.coeff(i, i) for i in range(self.dim)]
            return f"[{', '.join(map(repr, diag))}]"
        terms = []
        for (i, j), c in self._items:
            mono = f"x{i}^2" if i == j else f"x{i}*x{j}"
            terms.append(f"{c!r}*{mono}")
        return " + ".join(terms) if terms else "0"


class BilinearForm:
    """A symmetric bilinear form given by its Gram matrix."""

    __slots__ = ("field", "dim", "matrix")

    def __init__(self, field: Field, matrix):
        self.field = field
        self.matrix = tuple(tuple(field.scalar(x) for x in row)
                            for row in matrix)
        self.dim = len(self.matrix)

    def __call__(self, u: Vector, v: Vector) -> Scalar:
        total = self.field.zero()
        for i, row in enumerate(self.matrix):
            if u[i].is_zero():
                continue
            for j, m in enumerate(row):
                total = total + u[i] * m * v[j]
        return total

    def __eq__(self, other):
        return (isinstance(other, BilinearForm)
                and self.field == other.field and self.matrix == other.matrix)

    def __repr__(self):
        return f"BilinearForm({self.matrix!r})"


def assoc_bilinear(q: QuadraticForm) -> BilinearForm:
    """B(u,v) = Q(u+v) - Q(u) - Q(v): B_ii = 2 c_ii, B_ij = c_ij."""
    return BilinearForm(q.field, q.bilinear_matrix())


def half_bilinear(q: QuadraticForm) -> BilinearForm:
    """assoc_bilinear scaled by 1/2, so B(v,v) = Q(v); char != 2 only."""
    if q.field.char == 2:
        raise UnsupportedFieldError("no half bilinear form in characteristic 2")
    half = q.field.one() / q.field.scalar(2)
    return BilinearForm(q.field,
                        [[half * x for x in row] for row in q.bilinear_matrix()])


def bilinear_radical(q: QuadraticForm):
    """Basis of {v : B(v,u) = 0 for all u} (kernel of the Gram matrix)."""
    return linalg.kernel_basis(q.bilinear_matrix(), q.field, q.dim)


def is_nondegenerate_form(q: QuadraticForm) -> bool:
    """No nonzero vector of the bilinear radical has Q = 0.

    For characteristic != 2 this reduces to a trivial radical.  Over a
    perfect field of characteristic 2 the square root of Q is additive
    on the radical, so the test is the kernel of that linear functional.
    """
    rad = bilinear_radical(q)
    if not rad:
        return True
    if q.field.char != 2:
        return False
    row = []
    for r in rad:
        root = sqrt_if_square(q(r))
        assert root is not None  # the field is perfect
        row.append(root)
    kern = linalg.kernel_basis((tuple(row),), q.field, len(rad))
    return not kern


@dataclass(frozen=True)
class Diagonalization:
    """Entries [a_1,...,a_n] and the basis realizing them.

    ``basis[i]`` is a vector in the original coordinates with
    Q(sum y_i basis[i]) = sum a_i y_i^2.
    """
    entries: tuple
    basis: tuple


def diagonalize(q: QuadraticForm) -> Diagonalization:
    """Orthogonal basis in characteristic != 2.

    Pivot rule: first remaining basis vector with Q != 0; if all are
    isotropic, polarize the first non-orthogonal pair (v, u+v); zero
    entries are emitted only for a degenerate form.
    """
    if q.field.char == 2:
        raise UnsupportedFieldError(
            "diagonalization needs characteristic != 2; "
            "use generalized_orthogonal_basis")
    field = q.field
    n = q.dim
    basis = [linalg.unit_vector(field, n, i) for i in range(n)]
    entries = []
    two = field.scalar(2)
    for i in range(n):
        pivot = None
        for j in range(i, n):
            if not q(basis[j]).is_zero():
                pivot = j
                break
        if pivot is None:
            hyper = None
            for j in range(i, n):
                for k in range(j + 1, n):
                    if not q.b_full(basis[j], basis[k]).is_zero():
                        hyper = (j, k)
                        break
                if hyper:
                    break
            if hyper is None:
                # remaining block is identically zero (radical part)
                entries.extend(field.zero() for _ in range(i, n))
                break
            j, k = hyper
            basis[j] = vec_add(basis[j], basis[k])
            pivot = j
        basis[i], basis[pivot] = basis[pivot], basis[i]
        a = q(basis[i])
        entries.append(a)
        for j in range(i + 1, n):
            c = q.b_full(basis[i], basis[j]) / (two * a)
            if not c.is_zero():
                basis[j] = vec_sub(basis[j], vec_scale(c, basis[i]))
    return Diagonalization(tuple(entries), tuple(basis))


def signature(q: QuadraticForm):
    """(positives, negatives, zeros) of a diagonalization; rationals only."""
    if not isinstance(q.field, Rational):
        raise UnsupportedFieldError("signatures are a real-field notion")
    pos = neg = zero = 0
    for a in diagonalize(q).entries:
        cls = square_class(a)
        if cls is SquareClass.ZERO:
            zero += 1
        elif cls is SquareClass.UNIT:
            pos += 1
        else:
            neg += 1
    return pos, neg, zero


def det_class(q: QuadraticForm) -> SquareClass:
    """Square class of det Q (product of the diagonalized entries)."""
    cls = SquareClass.UNIT
    for a in diagonalize(q).entries:
        cls = cls * square_class(a)
    return cls


@dataclass(frozen=True)
class GenOrthoBasis:
    """A generalized orthogonal basis: marked symplectic couples, all
    other pairs orthogonal."""
    vectors: tuple
    couples: frozenset  # of index pairs (i, j), i < j


def _couples_of(q: QuadraticForm, vectors: Sequence[Vector]):
    """Validate a generalized orthogonal set; return its couple index pairs."""
    if vectors and not linalg.independent(vectors, q.field):
        raise InvalidInputError("generalized orthogonal set must be independent")
    partner = {}
    couples = set()
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            b = q.b_full(vectors[i], vectors[j])
            if b.is_zero():
                continue
            if i in partner or j in partner:
                raise InvalidInputError(
                    "a vector participates in two non-orthogonal pairs")
            if b != q.field.one():
                raise InvalidInputError("couple pairing must equal 1")
            if not (q.b_full(vectors[i], vectors[i]).is_zero()
                    and q.b_full(vectors[j], vectors[j]).is_zero()):
                raise InvalidInputError("couple members must be symplectic")
            partner[i] = j
            partner[j] = i
            couples.add((i, j))
    return couples


def _subspace_orthogonal_to(q: QuadraticForm, space: Sequence[Vector],
                            against: Sequence[Vector]):
    """Basis of {w in span(space) : B(w, a) = 0 for all a in against}."""
    if not against:
        return tuple(space)
    rows = tuple(tuple(q.b_full(a, w) for w in space) for a in against)
    kern = linalg.kernel_basis(rows, q.field, len(space))
    out = []
    for combo in kern:
        v = linalg.zero_vector(q.field, q.dim)
        for c, w in zip(combo, space):
            v = vec_add(v, vec_scale(c, w))
        out.append(v)
    return tuple(out)


def generalized_orthogonal_basis(q: QuadraticForm,
                                 s: Sequence[Vector] = ()) -> GenOrthoBasis:
    """Embed the generalized orthogonal set ``s`` into a full basis.

    Follows the inductive construction: strip a non-symplectic vector,
    strip a symplectic couple, or complete a lone symplectic vector v by
    some u orthogonal to the rest with B(u,v) = 1.
    """
    if bilinear_radical(q):
        raise DegenerateFormError(
            "generalized orthogonal bases need a form without degenerate vectors")
    s = [tuple(q.field.scalar(x) for x in v) for v in s]
    start_couples = _couples_of(q, s)
    field = q.field
    one = field.one()

    out_vectors = []
    out_couples = set()

    def emit(v) -> int:
        out_vectors.append(v)
        return len(out_vectors) - 1

    def extend(space, todo, todo_couples):
        if not space:
            if todo:
                raise InvalidInputError("set does not fit in the space")
            return
        if not todo:
            todo = [space[0]]
        nonsymp = next((k for k, v in enumerate(todo)
                        if not q.b_full(v, v).is_zero()), None)
        if nonsymp is not None:
            v = todo[nonsymp]
            emit(v)
            rest = [w for k, w in enumerate(todo) if k != nonsymp]
            rest_couples = {tuple(k - (k > nonsymp) for k in pair)
                            for pair in todo_couples}
            extend(_subspace_orthogonal_to(q, space, [v]), rest, rest_couples)
            return
        if todo_couples:
            i, j = min(todo_couples)
            u, v = todo[i], todo[j]
            out_couples.add((emit(u), emit(v)))
            rest = [w for k, w in enumerate(todo) if k not in (i, j)]
            rest_couples = {tuple(k - (k > i) - (k > j) for k in pair)
                            for pair in todo_couples - {(i, j)}}
            extend(_subspace_orthogonal_to(q, space, [u, v]), rest, rest_couples)
            return
        # Only pairwise-orthogonal lone symplectic vectors remain.
        v = todo[0]
        rest = todo[1:]
        candidates = _subspace_orthogonal_to(q, space, rest) if rest else space
        w = next((c for c in candidates if not q.b_full(v, c).is_zero()), None)
        if w is None:
            raise InvalidInputError(
                "no pairing partner found; not a generalized orthogonal set "
                "of this form")
        u = vec_scale(one / q.b_full(v, w), w)
        u = vec_sub(u, vec_scale(q(u), v))  # Q(u - Q(u)v) = 0, pairing kept
        out_couples.add((emit(v), emit(u)))
        extend(_subspace_orthogonal_to(q, space, [v, u]), rest, set())

    space = [linalg.unit_vector(field, q.dim, i) for i in range(q.dim)]
    extend(space, list(s), start_couples)
    basis = GenOrthoBasis(tuple(out_vectors), frozenset(out_couples))
    assert len(basis.vectors) == q.dim
    return basis


def witt_index(q: QuadraticForm) -> int:
    """Half the dimension of a maximal symplectic (hyperbolic) subspace.

    Closed forms: min of the signature over the rationals; over F_p,
    (n-1)/2 for odd n, and for even n, n/2 when det Q lies in the class
    of (-1)^(n/2), else n/2 - 1.  Characteristic 2 goes through the Arf
    invariant.  `witt_index_bruteforce` is the independent oracle these
    formulas are tested against.
    """
    if not is_nondegenerate_form(q):
        raise DegenerateFormError("witt index of a degenerate form")
    field = q.field
    if isinstance(field, Rational):
        pos, neg, _ = signature(q)
        return min(pos, neg)
    if isinstance(field, PrimeField):
        n = q.dim
        if n % 2 == 1:
            return (n - 1) // 2
        target = square_class(field.scalar(-1)) if (n // 2) % 2 == 1 \
            else SquareClass.UNIT
        return n // 2 if det_class(q) == target else n // 2 - 1
    if isinstance(field, CharTwo):
        rad = bilinear_radical(q)
        if rad:
            comp = _complement_of_radical(q, rad)
            return witt_index(q.restrict(comp))
        n = q.dim
        return n // 2 if arf_invariant(q).is_zero() else n // 2 - 1
    raise UnsupportedFieldError(f"witt index over {field}")


def _complement_of_radical(q: QuadraticForm, rad):
    """A direct complement of the radical, as ambient vectors."""
    field = q.field
    basis = list(rad)
    comp = []
    for i in range(q.dim):
        e = linalg.unit_vector(field, q.dim, i)
        if not linalg.in_span(e, basis, field):
            basis.append(e)
            comp.append(e)
    return comp


def subspaces(field: Field, n: int, k: int):
    """All k-dimensional subspaces of K^n (finite K), as RREF bases."""
    elems = list(field.elements())
    zero, one = field.zero(), field.one()
    for pivots in itertools.combinations(range(n), k):
        free_positions = []
        for r, p in enumerate(pivots):
            for c in range(p + 1, n):
                if c not in pivots:
                    free_positions.append((r, c))
        for values in itertools.product(elems, repeat=len(free_positions)):
            rows = [[zero] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = one
            for (r, c), v in zip(free_positions, values):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


def _subspace_vectors(field: Field, basis):
    """All vectors of the span of ``basis`` over a finite field."""
    vecs = []
    for combo in linalg.all_vectors(field, len(basis)):
        v = linalg.zero_vector(field, len(basis[0]))
        for c, b in zip(combo, basis):
            v = vec_add(v, vec_scale(c, b))
        vecs.append(v)
    return vecs


def _is_hyperbolic_space(q: QuadraticForm, basis) -> bool:
    """Search a basis of pairwise-orthogonal symplectic couples."""
    if not basis:
        return True
    if len(basis) % 2 == 1:
        return False
    field = q.field
    one = field.one()
    vectors = [v for v in _subspace_vectors(field, basis)
               if not linalg.is_zero_vector(v)]
    for u in vectors:
        if not q(u).is_zero():
            continue
        for v in vectors:
            if q.b_full(u, v) != one or not q(v).is_zero():
                continue
            sub = _subspace_orthogonal_to(q, basis, [u, v])
            if len(sub) != len(basis) - 2:
                continue
            if _is_hyperbolic_space(q, sub):
                return True
        return False  # an isotropic u extends iff the space is hyperbolic
    return False


def witt_index_bruteforce(q: QuadraticForm) -> int:
    """Exhaustive maximal-symplectic-subspace search (the oracle)."""
    if not q.field.is_finite:
        raise UnsupportedFieldError(
            "the brute-force oracle enumerates a finite field")
    for m in range(q.dim // 2, 0, -1):
        for basis in subspaces(q.field, q.dim, 2 * m):
            if _is_hyperbolic_space(q, basis):
                return m
    return 0


def isometric(q1: QuadraticForm, q2: QuadraticForm) -> bool:
    """Equality of signatures (rationals) or det square classes (F_p)."""
    if q1.field != q2.field:
        raise InvalidInputError("isometry comparison needs one field")
    if q1.dim != q2.dim:
        raise InvalidInputError("isometry comparison needs equal dimensions")
    if q1.field.char == 2:
        raise UnsupportedFieldError("use arf_invariant in characteristic 2")
    if not (is_nondegenerate_form(q1) and is_nondegenerate_form(q2)):
        raise DegenerateFormError("isometry test expects non-degenerate forms")
    if isinstance(q1.field, Rational):
        return signature(q1) == signature(q2)
    if isinstance(q1.field, PrimeField):
        return det_class(q1) == det_class(q2)
    raise UnsupportedFieldError(f"isometry test over {q1.field}")


def char2_arf_rep(field: CharTwo) -> Scalar:
    """The fixed class representative e with K = {t^2+t} u {e + t^2+t}."""
    return field.scalar(1) if field.q == 2 else field.scalar(2)  # t over F_4


def arf_invariant(q: QuadraticForm) -> Scalar:
    """The Arf class, canonically 0 or the fixed representative e.

    Splits the space into symplectic couples (u_i, v_i) and reduces
    sum Q(u_i)Q(v_i) modulo the additive image of t^2 + t: {0} for F_2,
    {0, 1} for F_4.
    """
    field = q.field
    if field.char != 2:
        raise UnsupportedFieldError("the Arf invariant lives in characteristic 2")
    if q.dim % 2 == 1:
        raise InvalidInputError("the Arf invariant needs an even dimension")
    if bilinear_radical(q):
        raise DegenerateFormError(
            "the Arf invariant needs a non-degenerate bilinear form")
    space = [linalg.unit_vector(field, q.dim, i) for i in range(q.dim)]
    total = field.zero()
    while space:
        u = space[0]
        w = next(c for c in space if not q.b_full(u, c).is_zero())
        v = vec_scale(q.b_full(u, w).inverse(), w)
        total = total + q(u) * q(v)
        space = list(_subspace_orthogonal_to(q, space, [u, v]))
    image = {(t * t + t).value for t in field.elements()}
    return field.zero() if total.value in image else char2_arf_rep(field)


def represents(q: QuadraticForm, lam) -> Optional[Vector]:
    """A nonzero witness v with Q(v) = lam, or None.

    Finite fields enumerate; the rationals decide by signature (the
    real-field question) and construct a witness from a scaled basis
    vector or an opposite-sign pair.
    """
    field = q.field
    lam = field.scalar(lam)
    if field.is_finite:
        for v in linalg.all_vectors(field, q.dim):
            if linalg.is_zero_vector(v):
                continue
            if q(v) == lam:
                return v
        return None
    if not isinstance(field, Rational):
        raise UnsupportedFieldError(f"represents over {field}")
    diag = diagonalize(q)
    entries = diag.entries

    def witness(coeffs) -> Vector:
        v = linalg.zero_vector(field, q.dim)
        for c, b in zip(coeffs, diag.basis):
            v = vec_add(v, vec_scale(field.scalar(c), b))
        return v

    if lam.is_zero():
        for i, a in enumerate(entries):
            if a.is_zero():
                return witness([1 if k == i else 0 for k in range(q.dim)])
        for i, a in enumerate(entries):
            for j in range(i + 1, q.dim):
                b = entries[j]
                if square_class(a) * square_class(b) is not SquareClass.NON_RESIDUE:
                    continue
                ratio = sqrt_if_square(-b / a)
                if ratio is not None:
                    co = [field.zero()] * q.dim
                    co[i], co[j] = ratio, field.one()
                    return witness(co)
        if any(square_class(a) is SquareClass.UNIT for a in entries) and \
           any(square_class(a) is SquareClass.NON_RESIDUE for a in entries):
            raise WitnessSearchError(
                "isotropic over the reals, but no exact rational witness found")
        return None
    want = square_class(lam)
    for i, a in enumerate(entries):
        if square_class(a) is not want:
            continue
        root = sqrt_if_square(lam / a)
        if root is not None:
            return witness([root if k == i else 0 for k in range(q.dim)])
    for i, a in enumerate(entries):
        for j in range(i + 1, q.dim):
            b = entries[j]
            if square_class(a) * square_class(b) is not SquareClass.NON_RESIDUE:
                continue
            s = sqrt_if_square(-b / a)
            if s is None:
                continue
            # a(x - sy)(x + sy) = lam via x - sy = lam/a, x + sy = 1
            t = lam / a
            x = (t + 1) / field.scalar(2)
            y = (field.one() - t) / (field.scalar(2) * s)
            co = [field.zero()] * q.dim
            co[i], co[j] = x, y
            out = witness(co)
            assert q(out) == lam
            return out
    if any(square_class(a) is want for a in entries):
        raise WitnessSearchError(
            f"{lam} is representable over the reals, but no exact rational "
            "witness was found")
    return None


# ---------------------------------------------------------------------------
# Isometry construction: reflections, Eichler maps, Witt extension.
# ---------------------------------------------------------------------------

def _matrix_from_images(field: Field, images):
    """Matrix M with M e_i = images[i] under mat_vec."""
    return tuple(zip(*images))


def reflection_matrix(q: QuadraticForm, w: Vector):
    """The reflection x -> x - (B(x,w)/Q(w)) w; needs Q(w) != 0."""
    qw = q(w)
    if qw.is_zero():
        raise InvalidInputError("reflections need an anisotropic mirror")
    field = q.field
    n = q.dim
    images = []
    for i in range(n):
        e = linalg.unit_vector(field, n, i)
        images.append(vec_sub(e, vec_scale(q.b_full(e, w) / qw, w)))
    return _matrix_from_images(field, images)


def eichler_matrix(q: QuadraticForm, p0: Vector, u: Vector):
    """x -> x + B(x,p0)u - (B(x,u) + Q(u)B(x,p0))p0 for isotropic p0 and
    u orthogonal to p0; an isometry fixing p0 and everything orthogonal
    to both p0 and u."""
    if not q(p0).is_zero() or not q.b_full(p0, u).is_zero():
        raise InvalidInputError("Eichler map needs Q(p0)=0 and u orthogonal to p0")
    field = q.field
    n = q.dim
    qu = q(u)
    images = []
    for i in range(n):
        e = linalg.unit_vector(field, n, i)
        a = q.b_full(e, p0)
        b = q.b_full(e, u)
        img = vec_add(e, vec_scale(a, u))
        img = vec_sub(img, vec_scale(b + qu * a, p0))
        images.append(img)
    return _matrix_from_images(field, images)


def hyperbolic_scaling_matrix(q: QuadraticForm, p: Vector, w: Vector, mu: Scalar):
    """p -> mu p, w -> mu^-1 w on a hyperbolic pair (Q(p)=Q(w)=0,
    B(p,w)=1), identity on the orthogonal complement."""
    field = q.field
    one = field.one()
    images = []
    for i in range(q.dim):
        e = linalg.unit_vector(field, q.dim, i)
        img = vec_add(e, vec_scale((mu - one) * q.b_full(e, w), p))
        img = vec_add(img, vec_scale((mu.inverse() - one) * q.b_full(e, p), w))
        images.append(img)
    return _matrix_from_images(field, images)


def is_isometry(q: QuadraticForm, m) -> bool:
    n = q.dim
    basis = [linalg.mat_vec(m, linalg.unit_vector(q.field, n, i))
             for i in range(n)]
    for i in range(n):
        if q(basis[i]) != q(linalg.unit_vector(q.field, n, i)):
            return False
        for j in range(i + 1, n):
            expected = q.coeff(i, j)
            if q.b_full(basis[i], basis[j]) != expected:
                return False
    return True


class _Extender:
    """Witt extension over a finite field of odd characteristic.

    The pair list is recombined into mutually orthogonal pieces
    (anisotropic vectors and symplectic couples); each piece is then
    matched by explicit isometries: reflections for anisotropic vectors
    and for isotropic vectors that pair non-trivially, a hyperbolic
    scaling for collinear isotropic vectors, and an Eichler map for the
    second member of a couple.
    """

    def __init__(self, q: QuadraticForm):
        if not q.field.is_finite or q.field.char == 2:
            raise UnsupportedFieldError(
                "isometry extension is implemented for odd finite fields")
        if bilinear_radical(q):
            raise DegenerateFormError("isometry extension needs a "
                                      "non-degenerate ambient form")
        self.q = q
        self.field = q.field
        self.n = q.dim
        self._iso = None

    def _iso_list(self):
        if self._iso is None:
            self._iso = [v for v in linalg.projective_points(self.field, self.n)
                         if self.q(v).is_zero()]
        return self._iso

    # -- elementary moves -------------------------------------------------
    def _move_anisotropic(self, a: Vector, b: Vector):
        """Isometry with g(a) = b; Q(a) = Q(b) != 0, b orthogonal to the
        processed targets and B(a,f) = B(b,f) for each of them."""
        q = self.q
        if a == b:
            return None
        d = vec_sub(a, b)
        if not q(d).is_zero():
            return reflection_matrix(q, d)
        s = vec_add(a, b)  # Q(s) = 4Q(a) - Q(d) != 0 here
        return linalg.mat_mul(reflection_matrix(q, b), reflection_matrix(q, s))

    def _move_isotropic(self, p: Vector, t: Vector, fixed):
        """Isometry with g(p) = t (both isotropic, nonzero), fixing every
        vector of ``fixed``; assumes B(p,f) = B(t,f) = 0 for f in fixed."""
        q = self.q
        field = self.field
        if p == t:
            return None
        if not q.b_full(p, t).is_zero():
            return reflection_matrix(q, vec_sub(p, t))
        co = linalg.coordinates(t, [p], field)
        if co is not None:  # t = lam p: scale the hyperbolic plane of t
            lam = co[0]
            w = self._partner(t, fixed)
            g = hyperbolic_scaling_matrix(q, t, w, lam)
            assert linalg.mat_vec(g, p) == t
            return g
        for r in self._iso_list():
            if q.b_full(p, r).is_zero() or q.b_full(t, r).is_zero():
                continue
            if any(not q.b_full(r, f).is_zero() for f in fixed):
                continue
            g = linalg.mat_mul(reflection_matrix(q, vec_sub(r, t)),
                               reflection_matrix(q, vec_sub(p, r)))
            assert linalg.mat_vec(g, p) == t
            return g
        raise InvalidInputError("no isotropic path found (internal)")

    def _partner(self, p: Vector, fixed):
        """Isotropic w with B(p,w) = 1, orthogonal to ``fixed``."""
        q = self.q
        for r in self._iso_list():
            b = q.b_full(p, r)
            if b.is_zero():
                continue
            if any(not q.b_full(r, f).is_zero() for f in fixed):
                continue
            return vec_scale(b.inverse(), r)
        raise InvalidInputError("no hyperbolic partner found (internal)")

    # -- the extension proper ----------------------------------------------
    def extend(self, u_vecs, v_vecs):
        q = self.q
        field = self.field
        u_vecs = [tuple(field.scalar(x) for x in v) for v in u_vecs]
        v_vecs = [tuple(field.scalar(x) for x in v) for v in v_vecs]
        if len(u_vecs) != len(v_vecs):
            raise InvalidInputError("subspace bases differ in length")
        if not linalg.independent(u_vecs, field) or \
           not linalg.independent(v_vecs, field):
            raise InvalidInputError("subspace bases must be independent")
        for i in range(len(u_vecs)):
            if q(u_vecs[i]) != q(v_vecs[i]):
                raise InvalidInputError("the given map is not an isometry")
            for j in range(i + 1, len(u_vecs)):
                if q.b_full(u_vecs[i], u_vecs[j]) != q.b_full(v_vecs[i], v_vecs[j]):
                    raise InvalidInputError("the given map is not an isometry")
        u_orig, v_orig = list(u_vecs), list(v_vecs)
        u_vecs, v_vecs = self._complete_radical(u_vecs, v_vecs)
        pieces = self._adapted_pieces(u_vecs, v_vecs)
        g = linalg.identity_matrix(field, self.n)
        fixed = []
        for piece in pieces:
            if piece[0] == "aniso":
                _, u, v = piece
                h = self._move_anisotropic(linalg.mat_vec(g, u), v)
                if h is not None:
                    g = linalg.mat_mul(h, g)
                fixed.append(v)
            else:
                _, (u1, v1), (u2, v2) = piece
                h = self._move_isotropic(linalg.mat_vec(g, u1), v1, fixed)
                if h is not None:
                    g = linalg.mat_mul(h, g)
                cur2 = linalg.mat_vec(g, u2)
                if cur2 != v2:
                    # Eichler map based at v1 sends cur2 to v2 and fixes
                    # v1 and all earlier (orthogonal) pieces.
                    h = eichler_matrix(q, v1, vec_sub(v2, cur2))
                    g = linalg.mat_mul(h, g)
                fixed.extend([v1, v2])
        for u, v in zip(u_orig, v_orig):
            assert linalg.mat_vec(g, u) == v, "extension failed (internal)"
        assert is_isometry(q, g), "extension is not an isometry (internal)"
        return g

    def _complete_radical(self, u_vecs, v_vecs):
        """Hyperbolically complete the radical of B restricted to span(u)."""
        q = self.q
        field = self.field
        gram = tuple(tuple(q.b_full(a, b) for b in u_vecs) for a in u_vecs)
        rad = linalg.kernel_basis(gram, field, len(u_vecs))
        if not rad:
            return list(u_vecs), list(v_vecs)

        def combine(vectors, combo):
            out = linalg.zero_vector(field, self.n)
            for c, w in zip(combo, vectors):
                out = vec_add(out, vec_scale(c, w))
            return out

        rad_u = [combine(u_vecs, c) for c in rad]
        rad_v = [combine(v_vecs, c) for c in rad]
        # complement of the radical inside the given span
        comp_idx = []
        span_so_far = list(rad)
        k = len(u_vecs)
        for i in range(k):
            e = linalg.unit_vector(field, k, i)
            if not linalg.in_span(e, span_so_far, field):
                span_so_far.append(e)
                comp_idx.append(i)
        u_list = rad_u + [u_vecs[i] for i in comp_idx]
        v_list = rad_v + [v_vecs[i] for i in comp_idx]
        for j in range(len(rad_u)):
            pu = self._radical_partner(rad_u[j], u_list)
            pv = self._radical_partner(rad_v[j], v_list)
            u_list.append(pu)
            v_list.append(pv)
        return u_list, v_list

    def _radical_partner(self, r: Vector, current):
        """Isotropic w with B(r,w) = 1, orthogonal to the rest of ``current``."""
        q = self.q
        field = self.field
        rows = []
        rhs = []
        for s in current:
            rows.append(tuple(q.b_full(s, linalg.unit_vector(field, self.n, i))
                              for i in range(self.n)))
            rhs.append(field.one() if s == r else field.zero())
        sol = linalg.solve(rows, tuple(rhs), field)
        if sol is None:
            raise InvalidInputError("radical completion failed (internal)")
        w = vec_sub(sol, vec_scale(q(sol), r))
        assert q(w).is_zero() and q.b_full(r, w) == field.one()
        return w

    def _adapted_pieces(self, u_vecs, v_vecs):
        """Recombine the pair lists into mutually orthogonal pieces via the
        generalized-orthogonal construction on the restricted form."""
        field = self.field
        sub = self.q.restrict(u_vecs)
        gob = generalized_orthogonal_basis(sub)

        def combine(vectors, combo):
            out = linalg.zero_vector(field, self.n)
            for c, w in zip(combo, vectors):
                out = vec_add(out, vec_scale(c, w))
            return out

        pairs = [(combine(u_vecs, combo), combine(v_vecs, combo))
                 for combo in gob.vectors]
        second = {j: i for i, j in gob.couples}
        first = {i: j for i, j in gob.couples}
        pieces = []
        for idx in range(len(pairs)):
            if idx in second:
                continue
            if idx in first:
                pieces.append(("couple", pairs[idx], pairs[first[idx]]))
            else:
                pieces.append(("aniso",) + pairs[idx])
        return pieces


def extend_isometry(q: QuadraticForm, u_basis, v_basis):
    """Extend the isometry u_basis[i] -> v_basis[i] to the whole space.

    Returns a matrix g with g u_i = v_i preserving Q, built from
    reflections, hyperbolic scalings and Eichler maps, after a
    hyperbolic completion of any radical of the restricted pairing.
    """
    return _Extender(q).extend(u_basis, v_basis)


class IsometrySampler:
    """Random isometries of (K^n, Q) fixing a list of vectors.

    Buckets every vector of the space by norm and pairings against the
    fixed vectors, then extends (fixed + r) -> (fixed + r') for a random
    compatible r'.
    """

    def __init__(self, q: QuadraticForm, fixed):
        self.q = q
        self.field = q.field
        self.fixed = [tuple(q.field.scalar(x) for x in v) for v in fixed]
        self.buckets = {}
        for v in linalg.all_vectors(q.field, q.dim):
            if linalg.is_zero_vector(v):
                continue
            # vectors inside span(fixed) stay in the buckets; extend()
            # rejects dependent choices and sample() retries
            key = (q(v).value,) + tuple(q.b_full(f, v).value for f in self.fixed)
            self.buckets.setdefault(key, []).append(v)
        self._keys = sorted(self.buckets)
        self._ext = _Extender(q)

    def sample(self, rng):
        while True:
            key = self._keys[rng.randrange(len(self._keys))]
            pool = self.buckets[key]
            r = pool[rng.randrange(len(pool))]
            r2 = pool[rng.randrange(len(pool))]
            try:
                return self._ext.extend(self.fixed + [r], self.fixed + [r2])
            except InvalidInputError:
                continue

"""Universal conformal geometries: the tuple (V, Q, P, L) and its
incidence structure.

A geometry is a non-degenerate quadratic form of dimension n+3 together
with two fixed orthogonal representative vectors P and L.  Elements of
the projective quadric are oriented hypercycles; the ones orthogonal to
P are points, the ones orthogonal to L are hyperplanes, and incidence
is the vanishing of the (no-1/2) bilinear form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .fields import ConformalError, Field, Scalar, UnsupportedFieldError
from . import linalg
from .linalg import Vector, vec_add, vec_scale, vec_sub
from .quadform import QuadraticForm, bilinear_radical, witt_index
from enum import Enum


class InvalidGeometryError(ConformalError):
    """The (Q, P, L) data does not form a geometry."""


class NotAHypercycleError(ConformalError):
    """A vector off the quadric was passed where a hypercycle is required."""


class RoleError(ConformalError):
    """A hypercycle of the wrong role was passed."""


class IdealDenominatorError(ConformalError):
    """A pairing against P or L vanished where a nonzero value is needed."""


class NoCanonicalProjectionError(ConformalError):
    """Projection through P needs B(P,P) != 0."""


class EnumerationUnsupportedError(ConformalError):
    """Enumeration requested over an infinite field or past the size caps."""


class RankError(ConformalError):
    """Inputs were linearly dependent where independence is required."""


# Desk-scale defaults; callers may lift them explicitly.
MAX_ENUM_Q = 7
MAX_ENUM_DIM = 7


class ProjPoint:
    """A projective point, normalized so the first nonzero coordinate is 1."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[Scalar]):
        coords = tuple(coords)
        lead = next((c for c in coords if not c.is_zero()), None)
        if lead is None:
            raise ValueError("projective points need a nonzero vector")
        inv = lead.inverse()
        self.coords = tuple(inv * c for c in coords)

    @property
    def field(self) -> Field:
        return self.coords[0].field

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def sort_key(self):
        return tuple(c.sort_key() for c in self.coords)

    def __repr__(self):
        return "(" + " : ".join(repr(c) for c in self.coords) + ")"


class Role(Enum):
    POINT = "point"
    HYPERPLANE = "hyperplane"
    IDEAL = "ideal"
    GENERIC_CYCLE = "cycle"


class Geometry:
    """A non-degenerate form with fixed orthogonal representatives P, L.

    The representatives are fixed at construction: relative power and
    inversive separation depend on them (rescaling P changes those
    values by a square factor).
    """

    def __init__(self, form: QuadraticForm, p_rep, l_rep):
        field = form.field
        p_rep = tuple(field.scalar(x) for x in p_rep)
        l_rep = tuple(field.scalar(x) for x in l_rep)
        if form.dim < 4:
            raise InvalidGeometryError("a geometry needs dimension >= 4 (n >= 1)")
        if len(p_rep) != form.dim or len(l_rep) != form.dim:
            raise InvalidGeometryError("representative length mismatch")
        if linalg.is_zero_vector(p_rep) or linalg.is_zero_vector(l_rep):
            raise InvalidGeometryError("P and L must be nonzero")
        if field.is_exact and bilinear_radical(form):
            raise InvalidGeometryError("the bilinear form must be non-degenerate")
        if not form.b_full(p_rep, l_rep).is_zero():
            raise InvalidGeometryError("P and L must be orthogonal")
        self.form = form
        self.field = field
        self.p_rep = p_rep
        self.l_rep = l_rep
        self._quadric = None

    @property
    def n(self) -> int:
        """Dimension of the geometry (the form has dimension n+3)."""
        return self.form.dim - 3

    def qp(self) -> Scalar:
        return self.form(self.p_rep)

    def ql(self) -> Scalar:
        return self.form(self.l_rep)

    def dual(self) -> "Geometry":
        return Geometry(self.form, self.l_rep, self.p_rep)

    def __repr__(self):
        return (f"Geometry(n={self.n}, Q={self.form!r}, "
                f"P={self.p_rep}, L={self.l_rep})")


def new_geometry(form: QuadraticForm, p_rep, l_rep) -> Geometry:
    return Geometry(form, p_rep, l_rep)


def dual_geometry(g: Geometry) -> Geometry:
    return g.dual()


def _as_vector(g: Geometry, c) -> Vector:
    if isinstance(c, ProjPoint):
        return c.coords
    return tuple(g.field.scalar(x) for x in c)


def _require_hypercycle(g: Geometry, c) -> Vector:
    v = _as_vector(g, c)
    if not g.form(v).is_zero():
        raise NotAHypercycleError(f"Q({v}) != 0: not on the Lie quadric")
    return v


def role(g: Geometry, c) -> Role:
    """Point iff orthogonal to P, hyperplane iff orthogonal to L."""
    v = _require_hypercycle(g, c)
    is_point = g.form.b_full(g.p_rep, v).is_zero()
    is_plane = g.form.b_full(g.l_rep, v).is_zero()
    if is_point and is_plane:
        return Role.IDEAL
    if is_point:
        return Role.POINT
    if is_plane:
        return Role.HYPERPLANE
    return Role.GENERIC_CYCLE


def incident(g: Geometry, c1, c2) -> bool:
    """Oriented tangency: B(c1,c2) = 0 (representative independent)."""
    v1 = _require_hypercycle(g, c1)
    v2 = _require_hypercycle(g, c2)
    return g.form.b_full(v1, v2).is_zero()


def non_degenerate_geometry(g: Geometry) -> bool:
    """Witt index >= 2: the form has a 4-dimensional symplectic subspace."""
    return witt_index(g.form) >= 2


def non_empty(g: Geometry) -> bool:
    """Does the geometry have a point (an isotropic direction in P^perp
    independent of P)?

    Decided by the embedding criterion: [Q(P), +1, -1] for anisotropic P,
    [+1, +1, -1, -1] for isotropic P; over the rationals by signature
    counting, over F_p by determinant classes.  The finite-field answer
    is cross-checked against direct search in the tests.
    """
    from .fields import PrimeField, Rational, SquareClass, square_class
    field = g.field
    if field.char == 2:
        raise UnsupportedFieldError("the emptiness criterion needs char != 2")
    qp = g.qp()
    if isinstance(field, Rational):
        from .quadform import signature
        k, l, _ = signature(g.form)
        cls = square_class(qp)
        if cls is SquareClass.UNIT:
            return k >= 2 and l >= 1
        if cls is SquareClass.NON_RESIDUE:
            return k >= 1 and l >= 2
        return k >= 2 and l >= 2
    if isinstance(field, PrimeField):
        from .quadform import det_class
        if not qp.is_zero():
            return True  # any 3-dim form embeds once dim >= 4
        if g.form.dim >= 5:
            return True
        return det_class(g.form) is SquareClass.UNIT
    raise UnsupportedFieldError(f"emptiness over {field}")


def has_point_search(g: Geometry, max_q: int = MAX_ENUM_Q) -> bool:
    """Direct search for a point: an isotropic projective direction in
    P^perp other than [P] itself (the oracle for `non_empty`)."""
    p_proj = ProjPoint(g.p_rep) if g.form(g.p_rep).is_zero() else None
    for pt in lie_quadric_points(g, max_q=max_q):
        if not g.form.b_full(g.p_rep, pt.coords).is_zero():
            continue
        if p_proj is not None and pt == p_proj:
            continue
        return True
    return False


def relative_power(g: Geometry, c1, c2) -> Scalar:
    """B_half(c1,c2) / (B_half(c1,P) B_half(c2,P)) with the fixed P."""
    return _power_with(g, c1, c2, g.p_rep)


def inversive_separation(g: Geometry, c1, c2) -> Scalar:
    """B_half(c1,c2) / (B_half(c1,L) B_half(c2,L)) with the fixed L."""
    return _power_with(g, c1, c2, g.l_rep)


def _power_with(g: Geometry, c1, c2, base: Vector) -> Scalar:
    if g.field.char == 2:
        raise UnsupportedFieldError("powers and separations need char != 2")
    v1 = _as_vector(g, c1)
    v2 = _as_vector(g, c2)
    d1 = g.form.b_half(v1, base)
    d2 = g.form.b_half(v2, base)
    if d1.is_zero() or d2.is_zero():
        raise IdealDenominatorError(
            "cycle pairs ideally with the reference vector")
    return g.form.b_half(v1, v2) / (d1 * d2)


def _check_enum(g: Geometry, max_q: int, max_dim: int = MAX_ENUM_DIM):
    field = g.field
    if not field.is_finite:
        raise EnumerationUnsupportedError(f"cannot enumerate over {field}")
    if field.order > max_q:
        raise EnumerationUnsupportedError(
            f"field size {field.order} exceeds the cap {max_q}")
    if g.form.dim > max_dim:
        raise EnumerationUnsupportedError(
            f"dimension {g.form.dim} exceeds the cap {max_dim}")


def lie_quadric_points(g: Geometry, max_q: int = MAX_ENUM_Q):
    """All projective points with Q = 0, canonically normalized, sorted."""
    _check_enum(g, max_q)
    if g._quadric is None:
        pts = [ProjPoint(v) for v in linalg.projective_points(g.field, g.form.dim)
               if g.form(v).is_zero()]
        pts.sort(key=ProjPoint.sort_key)
        g._quadric = tuple(pts)
    return g._quadric


@dataclass(frozen=True)
class Pointspace:
    """P^perp with its restricted form and the image of L.

    ``basis`` spans P^perp in ambient coordinates, ``form`` is Q
    restricted to that basis, and ``l_coords`` places L in it.
    """
    basis: tuple
    form: QuadraticForm
    l_coords: tuple

    def to_ambient(self, coords) -> Vector:
        field = self.form.field
        out = linalg.zero_vector(field, len(self.basis[0]))
        for c, b in zip(coords, self.basis):
            out = vec_add(out, vec_scale(field.scalar(c), b))
        return out

    def from_ambient(self, v) -> Optional[Vector]:
        return linalg.coordinates(v, self.basis, self.form.field)


def pointspace(g: Geometry) -> Pointspace:
    """The orthogonal complement of P carrying Q^P, with L's coordinates."""
    rows = (tuple(g.form.b_full(g.p_rep, linalg.unit_vector(g.field, g.form.dim, i))
                  for i in range(g.form.dim)),)
    basis = linalg.kernel_basis(rows, g.field, g.form.dim)
    restricted = g.form.restrict(basis)
    l_coords = linalg.coordinates(g.l_rep, basis, g.field)
    assert l_coords is not None  # L is orthogonal to P
    return Pointspace(tuple(basis), restricted, tuple(l_coords))


def poincare_model(g: Geometry) -> Pointspace:
    """The inversive model: the pointspace with its quadric."""
    return pointspace(g)


def project_cycle_raw(g: Geometry, c) -> Vector:
    """c - (B(P,c)/B(P,P)) P, unnormalized (the representative on which
    the projected-norm identity holds exactly)."""
    bpp = g.form.b_full(g.p_rep, g.p_rep)
    if bpp.is_zero():
        raise NoCanonicalProjectionError(
            "projection through P needs B(P,P) != 0")
    v = _as_vector(g, c)
    coef = g.form.b_full(g.p_rep, v) / bpp
    return vec_sub(v, vec_scale(coef, g.p_rep))


def project_cycle(g: Geometry, c) -> ProjPoint:
    """The projection of c into P^perp, as a normalized projective point."""
    return ProjPoint(project_cycle_raw(g, c))


def points_of(g: Geometry, c, max_q: int = MAX_ENUM_Q):
    """[[Q]] intersected with P^perp and c^perp: the points of a cycle."""
    v = _require_hypercycle(g, c)
    out = []
    for pt in lie_quadric_points(g, max_q=max_q):
        w = pt.coords
        if g.form.b_full(g.p_rep, w).is_zero() and \
           g.form.b_full(v, w).is_zero():
            out.append(pt)
    return tuple(out)


def pointspace_points_of(g: Geometry, ps: Pointspace, c_proj,
                         max_q: int = MAX_ENUM_Q):
    """Points of a projected cycle computed inside the pointspace, mapped
    back to ambient projective points (the other side of the projection
    identity)."""
    _check_enum(g, max_q)
    coords = c_proj if not isinstance(c_proj, ProjPoint) else \
        ps.from_ambient(c_proj.coords)
    if coords is None:
        raise RoleError("cycle does not lie in the pointspace")
    out = []
    for v in linalg.projective_points(g.field, ps.form.dim):
        if not ps.form(v).is_zero():
            continue
        if not ps.form.b_full(coords, v).is_zero():
            continue
        out.append(ProjPoint(ps.to_ambient(v)))
    return tuple(sorted(out, key=ProjPoint.sort_key))


def is_point(g: Geometry, c) -> bool:
    return role(g, c) in (Role.POINT, Role.IDEAL)


def antipodal(g: Geometry, p, q) -> bool:
    """Two points collinear with L (they lie on the same hyperplanes)."""
    vp = _as_vector(g, p)
    vq = _as_vector(g, q)
    for v in (vp, vq):
        if not g.form(v).is_zero() or not g.form.b_full(g.p_rep, v).is_zero():
            raise RoleError("antipodality is defined for points of the geometry")
    return linalg.rank([vp, vq, g.l_rep], g.field) <= 2


@dataclass(frozen=True)
class Subcycle:
    """A subspace of P^perp spanned by ``basis``; subcycle dimension is
    (vector dimension) - 2.  ``is_actual`` is None when undetermined
    (infinite fields)."""
    basis: tuple
    is_subplane: bool
    is_actual: Optional[bool]

    @property
    def dim(self) -> int:
        return len(self.basis) - 2


def _subcycle_from_span(g: Geometry, span: Sequence[Vector]) -> Subcycle:
    is_subplane = linalg.in_span(g.l_rep, span, g.field)
    return Subcycle(tuple(ProjPoint(v) for v in span), is_subplane,
                    _is_actual(g, span))


def _is_actual(g: Geometry, span: Sequence[Vector]) -> Optional[bool]:
    """Is the span cut out by P together with isotropic vectors of its
    orthogonal complement?  Searchable over finite fields only."""
    if not g.field.is_finite or g.field.order > MAX_ENUM_Q:
        return None
    n = g.form.dim
    rows = tuple(tuple(g.form.b_full(s, linalg.unit_vector(g.field, n, i))
                       for i in range(n)) for s in span)
    perp = linalg.kernel_basis(rows, g.field, n)
    vectors = [g.p_rep]
    for combo in linalg.projective_points(g.field, len(perp)):
        v = linalg.zero_vector(g.field, n)
        for c, b in zip(combo, perp):
            v = vec_add(v, vec_scale(c, b))
        if g.form(v).is_zero():
            vectors.append(v)
    return linalg.rank(vectors, g.field) == len(perp)


def span_subcycle(g: Geometry, *points) -> Subcycle:
    """The virtual subcycle spanned by k independent points (dim k-2)."""
    vecs = []
    for p in points:
        v = _as_vector(g, p)
        if not g.form(v).is_zero() or not g.form.b_full(g.p_rep, v).is_zero():
            raise RoleError("subcycles are spanned by points of the geometry")
        vecs.append(v)
    if not linalg.independent(vecs, g.field):
        raise RankError("points must be independent")
    return _subcycle_from_span(g, vecs)


def intersect_hyperplanes(g: Geometry, *hyperplanes) -> Subcycle:
    """The subplane <P, l_1, ..., l_k>^perp (dimension n-k).

    Accepts virtual hyperplanes: vectors in P^perp with B(L, l) = 0; an
    oriented hyperplanecycle is the special case Q(l) = 0.
    """
    vecs = [g.p_rep]
    for l in hyperplanes:
        v = _as_vector(g, l)
        if not g.form.b_full(g.l_rep, v).is_zero():
            raise RoleError("hyperplane inputs must be orthogonal to L")
        vecs.append(v)
    if not linalg.independent(vecs, g.field):
        raise RankError("hyperplanes must be independent (and not P)")
    n = g.form.dim
    rows = tuple(tuple(g.form.b_full(s, linalg.unit_vector(g.field, n, i))
                       for i in range(n)) for s in vecs)
    span = linalg.kernel_basis(rows, g.field, n)
    return _subcycle_from_span(g, span)


def hyperplane_through(g: Geometry, *points) -> Optional[ProjPoint]:
    """The oriented hyperplane through the given pairwise non-antipodal
    points: solve B(l, p_i) = 0, B(l, L) = 0, Q(l) = 0.

    Returns a canonical orientation of the unique unoriented solution,
    or None when the line does not lift; raises if the isotropic
    solutions span more than one unoriented hyperplane.
    """
    vecs = []
    for p in points:
        v = _as_vector(g, p)
        if not g.form(v).is_zero() or not g.form.b_full(g.p_rep, v).is_zero():
            raise RoleError("inputs must be points of the geometry")
        vecs.append(v)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if linalg.rank([vecs[i], vecs[j], g.l_rep], g.field) <= 2:
                raise RoleError("an antipodal pair admits no unique hyperplane")
    n = g.form.dim
    rows = [tuple(g.form.b_full(v, linalg.unit_vector(g.field, n, i))
                  for i in range(n)) for v in vecs + [g.l_rep]]
    sol = linalg.kernel_basis(tuple(rows), g.field, n)
    if not sol:
        return None
    isotropic = []
    if len(sol) == 1:
        if g.form(sol[0]).is_zero():
            isotropic.append(sol[0])
    else:
        if not g.field.is_finite:
            raise EnumerationUnsupportedError(
                "cannot search an isotropic solution over an infinite field")
        for combo in linalg.projective_points(g.field, len(sol)):
            v = linalg.zero_vector(g.field, n)
            for c, b in zip(combo, sol):
                v = vec_add(v, vec_scale(c, b))
            if g.form(v).is_zero():
                isotropic.append(v)
    # [P] solves the constraints whenever it is isotropic, but it has no
    # image in V/P and is incident to every point: not a hyperplane.
    isotropic = [v for v in isotropic
                 if linalg.rank([v, g.p_rep], g.field) == 2]
    if not isotropic:
        return None
    # all solutions must project to a single unoriented hyperplane
    if len({_mod_p_key(g, v) for v in isotropic}) > 1:
        raise RoleError("multiple distinct hyperplanes satisfy the constraints")
    pts = sorted((ProjPoint(v) for v in isotropic), key=ProjPoint.sort_key)
    return pts[0]


def _mod_p_key(g: Geometry, v: Vector):
    """Canonical key for the image of v in V/P (projectively)."""
    red, _ = linalg.rref((v, g.p_rep), g.field)
    rows = tuple(r for r in red if not linalg.is_zero_vector(r))
    return ("modP",) + rows


def quasi_ideal(g: Geometry, s: Subcycle) -> bool:
    """Is the restriction of Q to the subcycle's span degenerate?"""
    basis = [p.coords for p in s.basis]
    restricted = g.form.restrict(basis)
    return bool(bilinear_radical(restricted))


def cayley_klein_points(g: Geometry, max_q: int = MAX_ENUM_Q):
    """Points grouped into antipodal classes (the projective model
    P^perp/L); classes and members are canonically sorted."""
    groups = {}
    for pt in lie_quadric_points(g, max_q=max_q):
        if not g.form.b_full(g.p_rep, pt.coords).is_zero():
            continue
        red, _ = linalg.rref((pt.coords, g.l_rep), g.field)
        key = tuple(r for r in red if not linalg.is_zero_vector(r))
        groups.setdefault(key, []).append(pt)
    classes = [tuple(sorted(v, key=ProjPoint.sort_key)) for v in groups.values()]
    classes.sort(key=lambda cls: cls[0].sort_key())
    return tuple(classes)

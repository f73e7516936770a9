"""Distance as a group element: translation groups of lines.

For a two-dimensional geometry, every non-ideal line carries a group
of determinant-1 isometries of its three-dimensional span that fix the
vector L; that group acts freely transitively on the non-ideal points
of the line, so the motion from one point to another *is* the oriented
distance.  The group is a split torus (order q-1), the additive group
(order q), or a non-split torus (order q+1), according to the square
class of Q(L).
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Optional

from .fields import (ConformalError, Scalar, SquareClass,
                     UnsupportedFieldError, canonical_nonresidue,
                     sqrt_if_square, square_class)
from . import linalg
from .linalg import vec_add, vec_scale, vec_sub
from .geometry import Geometry, ProjPoint, non_degenerate_geometry
from .quadform import QuadraticForm, det_class


class DegenerateLineError(ConformalError):
    """The hyperplane is ideal: its line is quasi-ideal."""


class IdealPointError(ConformalError):
    """Translations are defined between non-ideal points only."""


class NotOnLineError(ConformalError):
    """The point does not lie on the given line."""


class IncompatibleChartsError(ConformalError):
    """Motion elements from incomparable charts."""


class ExactChartUnavailableError(ConformalError):
    """The chart needs a square root that does not exist in this exact
    field; use the ApproxReal twin of the geometry."""


MAX_METRIC_Q = 13


class LineGroupClass(Enum):
    NON_SPLIT_TORUS = "non-split-torus"   # order q+1; SO(2)-like
    ADDITIVE = "additive"                 # order q;   translations
    SPLIT_TORUS = "split-torus"           # order q-1; SO(1,1)-like

    def order(self, q: int) -> int:
        if self is LineGroupClass.NON_SPLIT_TORUS:
            return q + 1
        if self is LineGroupClass.ADDITIVE:
            return q
        return q - 1


def _sign_class(x: Scalar) -> SquareClass:
    """Square class with a sign fallback for ApproxReal."""
    if x.field.is_exact:
        return square_class(x)
    if x.is_zero():
        return SquareClass.ZERO
    return SquareClass.UNIT if x.value > 0 else SquareClass.NON_RESIDUE


def _sqrt_any(x: Scalar) -> Optional[Scalar]:
    if x.field.is_exact:
        return sqrt_if_square(x)
    if x.value < 0 and not x.is_zero():
        return None
    return x.field.scalar(math.sqrt(max(x.value, 0.0)))


def gamma_class(g: Geometry) -> LineGroupClass:
    """Translation-group class of a 2-dimensional geometry.

    Determined by the square class of Q(L) against the form's
    determinant class (so the answer is invariant under rescaling Q):
    zero gives the additive group, det*Q(L) square gives the split
    torus, otherwise the non-split torus.  Rotations are the same
    computation on the dual geometry.
    """
    if g.n != 2:
        raise UnsupportedFieldError("translation groups are classified for n=2")
    if g.field.char == 2:
        raise UnsupportedFieldError("translation groups need char != 2")
    if g.field.is_exact and not non_degenerate_geometry(g):
        raise DegenerateLineError("the geometry must be non-degenerate")
    ql = g.ql()
    cls = _sign_class(ql)
    if cls is SquareClass.ZERO:
        return LineGroupClass.ADDITIVE
    if g.field.is_exact:
        combined = det_class(g.form) * cls
    else:
        from .quadform import diagonalize
        prod = g.field.one()
        for a in diagonalize(g.form).entries:
            prod = prod * a
        combined = _sign_class(prod * ql)
    return (LineGroupClass.SPLIT_TORUS if combined is SquareClass.UNIT
            else LineGroupClass.NON_SPLIT_TORUS)


class LineSpace:
    """The 3-dimensional span <P,l>^perp with its restricted form."""

    def __init__(self, geometry: Geometry, basis, form: QuadraticForm,
                 l_coords):
        self.geometry = geometry
        self.basis = tuple(basis)
        self.form = form
        self.l_coords = tuple(l_coords)

    def to_ambient(self, coords):
        field = self.form.field
        out = linalg.zero_vector(field, len(self.basis[0]))
        for c, b in zip(coords, self.basis):
            out = vec_add(out, vec_scale(field.scalar(c), b))
        return out

    def from_ambient(self, v):
        return linalg.coordinates(v, self.basis, self.form.field)

    def line_key(self):
        g = self.geometry
        red, _ = linalg.rref(self.basis, g.field)
        return (g.field.token(),
                tuple((ij, c.value) for ij, c in g.form.coeff_items()),
                tuple(x.value for x in g.p_rep),
                tuple(x.value for x in g.l_rep),
                tuple(tuple(x.value for x in row) for row in red))


def line_space(g: Geometry, l) -> LineSpace:
    """Basis of <P,l>^perp, the restricted (non-degenerate) form, and
    the coordinates of L; l must be a non-ideal hyperplane."""
    if g.field.char == 2:
        raise UnsupportedFieldError("line spaces are built for char != 2")
    if g.n != 2:
        raise UnsupportedFieldError("line spaces are 3-dimensional only for n=2")
    lv = l.coords if isinstance(l, ProjPoint) else \
        tuple(g.field.scalar(x) for x in l)
    if not g.form(lv).is_zero():
        raise DegenerateLineError("l must lie on the Lie quadric")
    if not g.form.b_full(g.l_rep, lv).is_zero():
        raise DegenerateLineError("l must be a hyperplane (orthogonal to L)")
    if g.form.b_full(g.p_rep, lv).is_zero():
        raise DegenerateLineError("ideal hyperplane: its line is quasi-ideal")
    n = g.form.dim
    rows = tuple(tuple(g.form.b_full(w, linalg.unit_vector(g.field, n, i))
                       for i in range(n)) for w in (g.p_rep, lv))
    basis = linalg.kernel_basis(rows, g.field, n)
    assert len(basis) == 3
    form = g.form.restrict(basis)
    l_coords = linalg.coordinates(g.l_rep, basis, g.field)
    assert l_coords is not None
    return LineSpace(g, basis, form, l_coords)


class Chart:
    """Canonical coordinates on a line space.

    ``basis`` is (L, b1, b2) in line-space coordinates: for the split
    torus b1, b2 are the isotropic directions of L^perp (lexicographic
    smallest first, pairing 1); for the non-split torus an orthogonal
    pair with Q(b2) = -eps Q(b1); for the additive group an anisotropic
    u of canonical norm and the isotropic partner v of L.
    """

    def __init__(self, kind: LineGroupClass, space: LineSpace, basis,
                 norm_token):
        self.kind = kind
        self.space = space
        self.basis = tuple(basis)
        cols = tuple(zip(*self.basis))
        self.to_line = tuple(cols)  # matrix: chart coords -> line coords
        inv = linalg.inverse(self.to_line, space.form.field)
        assert inv is not None
        self.from_line = inv
        self.norm_token = norm_token

    def metric_key(self):
        g = self.space.geometry
        return (self.kind.value, g.field.token(),
                tuple((ij, c.value) for ij, c in g.form.coeff_items()),
                tuple(x.value for x in g.p_rep),
                tuple(x.value for x in g.l_rep),
                self.norm_token)

    def line_key(self):
        return self.space.line_key()

    def chart_coords(self, line_coords):
        return linalg.mat_vec(self.from_line, tuple(line_coords))


def _orth_complement_in_line(form: QuadraticForm, vec):
    rows = (tuple(form.b_full(vec, linalg.unit_vector(form.field, 3, i))
                  for i in range(3)),)
    return linalg.kernel_basis(rows, form.field, 3)


def build_chart(space: LineSpace) -> Chart:
    """Classify the line and construct its canonical chart."""
    form = space.form
    field = form.field
    lc = space.l_coords
    ql = form(lc)
    if _sign_class(ql) is SquareClass.ZERO:
        return _build_additive_chart(space)
    comp = _orth_complement_in_line(form, lc)
    assert len(comp) == 2
    c1, c2 = comp
    a = form(c1)
    bb = form.b_full(c1, c2)
    c = form(c2)
    disc = bb * bb - field.scalar(4) * a * c
    if _sign_class(disc) in (SquareClass.UNIT,) and not disc.is_zero():
        root = _sqrt_any(disc)
        if root is None:
            raise ExactChartUnavailableError(
                "split chart needs an exact square root of the discriminant")
        if not a.is_zero():
            two_a = field.scalar(2) * a
            d1 = vec_add(vec_scale((-bb + root) / two_a, c1), c2)
            d2 = vec_add(vec_scale((-bb - root) / two_a, c1), c2)
        else:
            d1 = c1
            d2 = vec_add(vec_scale(-c / bb, c1), c2)
        d1 = ProjPoint(d1)
        d2 = ProjPoint(d2)
        if d2.sort_key() < d1.sort_key():
            d1, d2 = d2, d1
        d1, d2 = d1.coords, d2.coords
        pairing = form.b_full(d1, d2)
        assert not pairing.is_zero()
        d2 = vec_scale(pairing.inverse(), d2)
        return Chart(LineGroupClass.SPLIT_TORUS, space, (lc, d1, d2),
                     ("split",))
    # non-split torus: orthogonal pair with Q(b2) = -eps Q(b1)
    eps = canonical_nonresidue(field)
    if not a.is_zero():
        b1 = c1
        b2p = vec_sub(c2, vec_scale(bb / (field.scalar(2) * a), c1))
    else:
        b1 = c2
        b2p = vec_sub(c1, vec_scale(bb / (field.scalar(2) * c), c2))
    target = -eps * form(b1)
    ratio = form(b2p) / target
    s = _sqrt_any(ratio)
    if s is None:
        raise ExactChartUnavailableError(
            "non-split chart needs an exact square root for normalization")
    b2 = vec_scale(s.inverse(), b2p)
    assert form(b2) == target
    return Chart(LineGroupClass.NON_SPLIT_TORUS, space, (lc, b1, b2),
                 ("non-split", eps.value))


def _build_additive_chart(space: LineSpace) -> Chart:
    form = space.form
    field = space.form.field
    lc = space.l_coords
    perp = _orth_complement_in_line(form, lc)
    u0 = next(w for w in perp
              if not linalg.in_span(w, [lc], field))
    qu = form(u0)
    assert not qu.is_zero()
    cls = _sign_class(qu)
    canon = field.one() if cls is SquareClass.UNIT else \
        canonical_nonresidue(field)
    s = _sqrt_any(qu / canon)
    if s is not None:
        u = vec_scale(s.inverse(), u0)
        norm_token = ("additive", canon.value)
    else:
        u = u0
        norm_token = ("additive-unscaled", qu.value)
    v0 = next(linalg.unit_vector(field, 3, i) for i in range(3)
              if not form.b_full(lc, linalg.unit_vector(field, 3, i)).is_zero())
    v0 = vec_scale(form.b_full(lc, v0).inverse(), v0)
    v1 = vec_sub(v0, vec_scale(form.b_full(u, v0) / form.b_full(u, u), u))
    v = vec_sub(v1, vec_scale(form(v1), lc))
    assert form(v).is_zero() and form.b_full(lc, v) == field.one()
    assert form.b_full(u, v).is_zero()
    return Chart(LineGroupClass.ADDITIVE, space, (lc, u, v), norm_token)


class MotionElement:
    """An element of a line's translation group Gamma.

    ``normal_form``: (mu,) for the split torus, (tau,) for the additive
    group, (a, b) with a^2 - eps b^2 = 1 for the non-split torus.
    ``matrix`` acts on line-space coordinates, fixes L, and has
    determinant 1.
    """

    def __init__(self, chart: Chart, normal_form, matrix):
        self.chart = chart
        self.normal_form = tuple(normal_form)
        self.matrix = matrix

    @property
    def group_class(self) -> LineGroupClass:
        return self.chart.kind

    def nf_values(self):
        return tuple(x.value for x in self.normal_form)

    def is_identity(self) -> bool:
        field = self.chart.space.form.field
        if self.chart.kind is LineGroupClass.ADDITIVE:
            return self.normal_form[0].is_zero()
        if self.chart.kind is LineGroupClass.SPLIT_TORUS:
            return self.normal_form[0] == field.one()
        return (self.normal_form[0] == field.one()
                and self.normal_form[1].is_zero())

    def __repr__(self):
        return (f"MotionElement({self.chart.kind.value}, "
                f"normal_form={self.normal_form})")


def _chart_matrix(chart: Chart, nf):
    """Line-space matrix of the normal-form element."""
    field = chart.space.form.field
    zero, one = field.zero(), field.one()
    if chart.kind is LineGroupClass.ADDITIVE:
        tau = nf[0]
        qu = chart.space.form(chart.basis[1])
        m = ((one, tau, -(tau * tau) / (field.scalar(4) * qu)),
             (zero, one, -tau / (field.scalar(2) * qu)),
             (zero, zero, one))
    elif chart.kind is LineGroupClass.SPLIT_TORUS:
        mu = nf[0]
        m = ((one, zero, zero),
             (zero, mu, zero),
             (zero, zero, mu.inverse()))
    else:
        a, b = nf
        eps = field.scalar(chart.norm_token[1])
        m = ((one, zero, zero),
             (zero, a, eps * b),
             (zero, b, a))
    return linalg.mat_mul(linalg.mat_mul(chart.to_line, m), chart.from_line)


def motion_from_normal_form(chart: Chart, nf) -> MotionElement:
    nf = tuple(chart.space.form.field.scalar(x) for x in nf)
    return MotionElement(chart, nf, _chart_matrix(chart, nf))


def identity_motion(chart: Chart) -> MotionElement:
    field = chart.space.form.field
    if chart.kind is LineGroupClass.ADDITIVE:
        return motion_from_normal_form(chart, (field.zero(),))
    if chart.kind is LineGroupClass.SPLIT_TORUS:
        return motion_from_normal_form(chart, (field.one(),))
    return motion_from_normal_form(chart, (field.one(), field.zero()))


def _point_chart_coords(chart: Chart, g: Geometry, p):
    pv = p.coords if isinstance(p, ProjPoint) else \
        tuple(g.field.scalar(x) for x in p)
    if not g.form(pv).is_zero():
        raise NotOnLineError("points of a line lie on the Lie quadric")
    lc = chart.space.from_ambient(pv)
    if lc is None:
        raise NotOnLineError("the point is not on the given line")
    cc = chart.chart_coords(lc)
    # Non-ideality (B(L, p) != 0) shows up in the L-coefficient for the
    # torus charts (Q(L) != 0) and in the v-coefficient for the additive
    # chart (v is the isotropic partner of L).
    lead = cc[2] if chart.kind is LineGroupClass.ADDITIVE else cc[0]
    if lead.is_zero():
        raise IdealPointError("the point is ideal on this line")
    inv = lead.inverse()
    return tuple(inv * x for x in cc)


def translation_between(g: Geometry, l, p1, p2) -> MotionElement:
    """The unique gamma in Gamma with gamma p1 = p2 (projectively)."""
    space = line_space(g, l)
    chart = build_chart(space)
    return _translation_in_chart(chart, g, p1, p2)


def _translation_in_chart(chart: Chart, g: Geometry, p1, p2) -> MotionElement:
    field = chart.space.form.field
    c1 = _point_chart_coords(chart, g, p1)
    c2 = _point_chart_coords(chart, g, p2)
    if chart.kind is LineGroupClass.ADDITIVE:
        # points (alpha, beta, 1) with alpha = -beta^2 Q(u); action
        # beta -> beta - tau/(2Q(u))
        qu = chart.space.form(chart.basis[1])
        tau = field.scalar(2) * qu * (c1[1] - c2[1])
        out = motion_from_normal_form(chart, (tau,))
    elif chart.kind is LineGroupClass.SPLIT_TORUS:
        if c1[1].is_zero() or c2[1].is_zero():
            raise IdealPointError("split-line point has a vanishing coordinate")
        out = motion_from_normal_form(chart, (c2[1] / c1[1],))
    else:
        eps = field.scalar(chart.norm_token[1])
        x1, y1 = c1[1], c1[2]
        x2, y2 = c2[1], c2[2]
        norm1 = x1 * x1 - eps * y1 * y1
        if norm1.is_zero():
            raise IdealPointError("non-split point with vanishing norm")
        # (x2 + y2 s)(x1 - y1 s) / N(x1 + y1 s) in K[s], s^2 = eps
        a = (x2 * x1 - eps * y2 * y1) / norm1
        b = (y2 * x1 - x2 * y1) / norm1
        out = motion_from_normal_form(chart, (a, b))
    moved = linalg.mat_vec(out.matrix, chart.space.from_ambient(
        p1.coords if isinstance(p1, ProjPoint) else
        tuple(g.field.scalar(x) for x in p1)))
    target = chart.space.from_ambient(
        p2.coords if isinstance(p2, ProjPoint) else
        tuple(g.field.scalar(x) for x in p2))
    assert ProjPoint(moved) == ProjPoint(target), "translation mismatch (internal)"
    return out


def compose(g1: MotionElement, g2: MotionElement) -> MotionElement:
    """The group operation (g1 after g2) in normal form."""
    if g1.chart.kind is not g2.chart.kind or \
       g1.chart.line_key() != g2.chart.line_key():
        raise IncompatibleChartsError("compose needs one line and one chart")
    chart = g1.chart
    field = chart.space.form.field
    if chart.kind is LineGroupClass.ADDITIVE:
        nf = (g1.normal_form[0] + g2.normal_form[0],)
    elif chart.kind is LineGroupClass.SPLIT_TORUS:
        nf = (g1.normal_form[0] * g2.normal_form[0],)
    else:
        eps = field.scalar(chart.norm_token[1])
        a1, b1 = g1.normal_form
        a2, b2 = g2.normal_form
        nf = (a1 * a2 + eps * b1 * b2, a1 * b2 + b1 * a2)
    return motion_from_normal_form(chart, nf)


def invert(m: MotionElement) -> MotionElement:
    chart = m.chart
    if chart.kind is LineGroupClass.ADDITIVE:
        nf = (-m.normal_form[0],)
    elif chart.kind is LineGroupClass.SPLIT_TORUS:
        nf = (m.normal_form[0].inverse(),)
    else:
        nf = (m.normal_form[0], -m.normal_form[1])
    return motion_from_normal_form(chart, nf)


def same_distance(g1: MotionElement, g2: MotionElement) -> bool:
    """gamma1 in {gamma2, gamma2^-1}; comparable across lines of one
    geometry whose charts share class and normalization."""
    if g1.chart.metric_key() != g2.chart.metric_key():
        raise IncompatibleChartsError(
            "distances along non-isometric charts are not comparable")
    if g1.normal_form == g2.normal_form:
        return True
    return g1.normal_form == invert(g2).normal_form


def stabilizer_matrices(g: Geometry, l, max_q: int = MAX_METRIC_Q):
    """All isometries of the line space fixing the vector L (det +-1)."""
    if not g.field.is_finite:
        raise UnsupportedFieldError("stabilizer enumeration needs a finite field")
    if g.field.order > max_q:
        raise UnsupportedFieldError(
            f"field size {g.field.order} exceeds the cap {max_q}")
    space = line_space(g, l)
    chart = build_chart(space)
    form = space.form
    field = form.field
    lc = space.l_coords
    b1, b2 = chart.basis[1], chart.basis[2]
    cands1 = [y for y in linalg.all_vectors(field, 3)
              if form(y) == form(b1)
              and form.b_full(lc, y) == form.b_full(lc, b1)]
    out = []
    for y in cands1:
        target_cross = form.b_full(b1, b2)
        for z in linalg.all_vectors(field, 3):
            if form(z) != form(b2):
                continue
            if form.b_full(lc, z) != form.b_full(lc, b2):
                continue
            if form.b_full(y, z) != target_cross:
                continue
            # images of the chart basis determine the map
            images_chart = (lc, y, z)
            m_cols = tuple(zip(*images_chart))  # chart coords -> line coords
            m = linalg.mat_mul(m_cols, chart.from_line)
            if linalg.det(m, field).is_zero():
                continue
            out.append(m)
    return space, chart, out


def stabilizer_group(g: Geometry, l, max_q: int = MAX_METRIC_Q):
    """The determinant-1 stabilizer as MotionElements, sorted by normal
    form; its cardinality is the gamma_class order."""
    space, chart, mats = stabilizer_matrices(g, l, max_q=max_q)
    field = space.form.field
    one = field.one()
    out = []
    for m in mats:
        if linalg.det(m, field) != one:
            continue
        out.append(MotionElement(chart, _normal_form_of_matrix(chart, m), m))
    out.sort(key=lambda el: tuple(x.sort_key() for x in el.normal_form))
    return tuple(out)


def _normal_form_of_matrix(chart: Chart, m):
    """Read the normal form off a line-space stabilizer matrix."""
    field = chart.space.form.field
    mc = linalg.mat_mul(linalg.mat_mul(chart.from_line, m), chart.to_line)
    if chart.kind is LineGroupClass.ADDITIVE:
        assert mc[1][1] == field.one()
        return (mc[0][1],)
    if chart.kind is LineGroupClass.SPLIT_TORUS:
        return (mc[1][1],)
    return (mc[1][1], mc[2][1])


def find_nonideal_line(g: Geometry, max_q: int = MAX_METRIC_Q) -> ProjPoint:
    """First hyperplanecycle with B(P, l) != 0, in canonical order."""
    if not g.field.is_finite:
        raise UnsupportedFieldError("line search needs a finite field")
    for v in linalg.projective_points(g.field, g.form.dim):
        if not g.form(v).is_zero():
            continue
        if not g.form.b_full(g.l_rep, v).is_zero():
            continue
        if g.form.b_full(g.p_rep, v).is_zero():
            continue
        return ProjPoint(v)
    raise DegenerateLineError("the geometry has no non-ideal hyperplane")


def line_points(g: Geometry, l, max_q: int = MAX_METRIC_Q):
    """Non-ideal points of the line of l: isotropic directions of the
    line space that pair non-trivially with L."""
    space = line_space(g, l)
    field = g.field
    if not field.is_finite:
        raise UnsupportedFieldError("point enumeration needs a finite field")
    pts = []
    for coords in linalg.projective_points(field, 3):
        if not space.form(coords).is_zero():
            continue
        if space.form.b_full(space.l_coords, coords).is_zero():
            continue
        pts.append(ProjPoint(space.to_ambient(coords)))
    pts.sort(key=ProjPoint.sort_key)
    return space, tuple(pts)

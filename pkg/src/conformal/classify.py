"""Classification of geometries: invariants, atlases, the 3x3 table of
plane geometries, and cycle equivalence.

A geometry is determined by its form up to a scalar together with the
norm classes of P and L, so the class records a normalized form
invariant (signature, determinant class, or Arf class) plus the pair
(Q(P), Q(L)) canonicalized under the scalar-rescaling identifications:
form negation over the reals when the signature is balanced, and
multiplication by the non-residue over F_q in even vector dimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .fields import (CharTwo, Field, PrimeField, Rational, Scalar,
                     SquareClass, UnsupportedFieldError, canonical_nonresidue,
                     sqrt_if_square, square_class)
from . import linalg
from .linalg import vec_add, vec_scale
from .quadform import (QuadraticForm, arf_invariant, bilinear_radical,
                       det_class, diagonalize, extend_isometry, isometric,
                       signature, InvalidInputError)
from .geometry import Geometry, pointspace

QUADRATICALLY_CLOSED = "qclosed"

_CLS_ORDER = {SquareClass.ZERO: 0, SquareClass.UNIT: 1,
              SquareClass.NON_RESIDUE: 2}

_CK_NAMES = {
    (SquareClass.NON_RESIDUE, SquareClass.NON_RESIDUE): "elliptic",
    (SquareClass.NON_RESIDUE, SquareClass.ZERO): "parabolic",
    (SquareClass.NON_RESIDUE, SquareClass.UNIT): "hyperbolic",
    (SquareClass.ZERO, SquareClass.NON_RESIDUE): "dual parabolic",
    (SquareClass.ZERO, SquareClass.ZERO): "Laguerre/Galilei",
    (SquareClass.ZERO, SquareClass.UNIT): "dual Minkowski",
    (SquareClass.UNIT, SquareClass.NON_RESIDUE): "dual hyperbolic",
    (SquareClass.UNIT, SquareClass.ZERO): "Minkowski",
    (SquareClass.UNIT, SquareClass.UNIT): "anti-de Sitter",
}


def _flip(c: SquareClass) -> SquareClass:
    return SquareClass.NON_RESIDUE * c


def _pair_key(pair):
    return tuple(_CLS_ORDER[c] for c in pair)


@dataclass(frozen=True)
class GeometryClass:
    """Isomorphism class of a geometry.

    ``form_invariant`` is ("sig", k, l) over the rationals, ("det", cls)
    over F_q, ("arf", 0|1) in characteristic 2, and ("unique",) for a
    quadratically closed field.
    """
    field_token: str
    geom_dim: int
    form_invariant: tuple
    qp: SquareClass
    ql: SquareClass
    name: Optional[str] = None
    field: Optional[Field] = dc_field(default=None, compare=False, repr=False)

    def sort_key(self):
        return (self.field_token, self.geom_dim, self.form_invariant,
                _CLS_ORDER[self.qp], _CLS_ORDER[self.ql])

    def label(self) -> str:
        sym = {SquareClass.ZERO: "0", SquareClass.UNIT: "1",
               SquareClass.NON_RESIDUE:
                   "-1" if self.field_token == "rational" else "e"}
        base = (f"{self.field_token} d={self.geom_dim} "
                f"{self.form_invariant} qP={sym[self.qp]} qL={sym[self.ql]}")
        return f"{base} [{self.name}]" if self.name else base


def classify(g: Geometry) -> GeometryClass:
    """The invariant tuple of a geometry, canonicalized under rescaling."""
    field = g.field
    d = g.n
    qp = square_class(g.qp())
    ql = square_class(g.ql())
    if isinstance(field, Rational):
        k, l, zeros = signature(g.form)
        assert zeros == 0
        if k < l:
            k, l = l, k
            qp, ql = _flip(qp), _flip(ql)
        if k == l:
            qp, ql = min((qp, ql), (_flip(qp), _flip(ql)), key=_pair_key)
        name = _CK_NAMES.get((qp, ql)) if d == 2 and (k, l) == (3, 2) else None
        return GeometryClass("rational", d, ("sig", k, l), qp, ql, name, field)
    if isinstance(field, PrimeField):
        dim = g.form.dim
        det = det_class(g.form)
        if dim % 2 == 1:
            if det is SquareClass.NON_RESIDUE:
                qp, ql = _flip(qp), _flip(ql)
                det = SquareClass.UNIT
            inv = ("det", det.name)
        else:
            qp, ql = min((qp, ql), (_flip(qp), _flip(ql)), key=_pair_key)
            inv = ("det", det.name)
        name = _CK_NAMES.get((qp, ql)) if d == 2 else None
        return GeometryClass(field.token(), d, inv, qp, ql, name, field)
    if isinstance(field, CharTwo):
        arf = arf_invariant(g.form)
        inv = ("arf", 0 if arf.is_zero() else 1)
        return GeometryClass(field.token(), d, inv, qp, ql, None, field)
    raise UnsupportedFieldError(f"classification over {field}")


def enumerate_classes(field, geom_dim: int):
    """The duplicate-free atlas of non-degenerate geometry classes.

    ``field`` is a field object or the token "qclosed".  Counts:
    4 for a quadratically closed field; 9d/2 (d even) or the stated
    (9d-1)/2 (d odd) over the reals; 9 / 5 / 10 over F_q for d = 2 / 1 /
    odd d >= 3; 4 in characteristic 2 (d = 3).
    """
    d = geom_dim
    if d < 1:
        raise UnsupportedFieldError("geometries need dimension >= 1")
    if field == QUADRATICALLY_CLOSED:
        out = [GeometryClass(QUADRATICALLY_CLOSED, d, ("unique",), qp, ql)
               for qp in (SquareClass.ZERO, SquareClass.UNIT)
               for ql in (SquareClass.ZERO, SquareClass.UNIT)]
        return tuple(sorted(out, key=GeometryClass.sort_key))
    if isinstance(field, Rational):
        out = []
        classes = (SquareClass.ZERO, SquareClass.UNIT, SquareClass.NON_RESIDUE)
        for l in range(2, (d + 3) // 2 + 1):
            k = d + 3 - l
            if k < l:
                continue
            for qp in classes:
                for ql in classes:
                    if k == l:
                        if (qp, ql) == (SquareClass.ZERO, SquareClass.ZERO):
                            continue  # identified away in the stated count
                        if (qp, ql) != min((qp, ql), (_flip(qp), _flip(ql)),
                                           key=_pair_key):
                            continue
                    name = _CK_NAMES.get((qp, ql)) \
                        if d == 2 and (k, l) == (3, 2) else None
                    out.append(GeometryClass("rational", d, ("sig", k, l),
                                             qp, ql, name, field))
        return tuple(sorted(out, key=GeometryClass.sort_key))
    if isinstance(field, PrimeField):
        dim = d + 3
        classes = (SquareClass.ZERO, SquareClass.UNIT, SquareClass.NON_RESIDUE)
        out = []
        if dim % 2 == 1:
            for qp in classes:
                for ql in classes:
                    name = _CK_NAMES.get((qp, ql)) if d == 2 else None
                    out.append(GeometryClass(field.token(), d,
                                             ("det", "UNIT"), qp, ql, name,
                                             field))
        else:
            det_opts = ["UNIT"] if d == 1 else ["UNIT", "NON_RESIDUE"]
            for det in det_opts:
                for qp in classes:
                    for ql in classes:
                        if (qp, ql) != min((qp, ql), (_flip(qp), _flip(ql)),
                                           key=_pair_key):
                            continue
                        out.append(GeometryClass(field.token(), d,
                                                 ("det", det), qp, ql, None,
                                                 field))
        return tuple(sorted(out, key=GeometryClass.sort_key))
    if isinstance(field, CharTwo):
        if d != 3:
            raise UnsupportedFieldError(
                "characteristic-2 enumeration is implemented for geometry "
                "dimension 3 (even vector dimension 6)")
        out = [GeometryClass(field.token(), d, ("arf", 0), qp, ql, None, field)
               for qp in (SquareClass.ZERO, SquareClass.UNIT)
               for ql in (SquareClass.ZERO, SquareClass.UNIT)]
        return tuple(sorted(out, key=GeometryClass.sort_key))
    raise UnsupportedFieldError(f"enumeration over {field}")


def ck_table(field):
    """The 3x3 table of plane geometries; rows by Q(P), columns by Q(L),
    each in the order (-1 or e, 0, +1)."""
    if isinstance(field, Rational):
        headers = ("-1", "0", "1")
    elif isinstance(field, PrimeField):
        headers = ("e", "0", "1")
    else:
        raise UnsupportedFieldError(
            "the table is stated for the reals and odd finite fields")
    order = (SquareClass.NON_RESIDUE, SquareClass.ZERO, SquareClass.UNIT)
    rows = tuple(tuple(_CK_NAMES[(qp, ql)] for ql in order) for qp in order)
    return headers, rows


# ---------------------------------------------------------------------------
# Canonical representatives
# ---------------------------------------------------------------------------

def canonical_form(field: Field, geom_dim: int, form_invariant) -> QuadraticForm:
    dim = geom_dim + 3
    if isinstance(field, Rational):
        _, k, l = form_invariant
        return QuadraticForm.diagonal(field, [1] * k + [-1] * l)
    if isinstance(field, PrimeField):
        det = form_invariant[1]
        e = canonical_nonresidue(field)
        entries = [field.one()] * (dim - 2) + [field.scalar(-1)]
        entries.append(field.scalar(-1) if det == "UNIT" else -e)
        return QuadraticForm.diagonal(field, entries)
    if isinstance(field, CharTwo):
        base = QuadraticForm.symplectic(field, dim // 2)
        if form_invariant[1] == 0:
            return base
        coeffs = dict(base.coeff_items())
        from .quadform import char2_arf_rep
        coeffs[(dim - 2, dim - 2)] = field.one()
        coeffs[(dim - 1, dim - 1)] = char2_arf_rep(field)
        return QuadraticForm(field, dim, coeffs)
    raise UnsupportedFieldError(f"canonical forms over {field}")


def _candidate_vectors(field: Field, dim: int):
    if field.is_finite:
        yield from linalg.projective_points(field, dim)
        return
    for coords in itertools.product((0, 1, -1), repeat=dim):
        if any(coords):
            yield tuple(field.scalar(c) for c in coords)


def representative_geometry(cls: GeometryClass) -> Geometry:
    """A concrete geometry in the class: canonical form, P and L found
    by a deterministic lexicographic search."""
    if cls.field is None:
        raise UnsupportedFieldError(
            "no concrete representatives over a symbolic field")
    field = cls.field
    form = canonical_form(field, cls.geom_dim, cls.form_invariant)
    p_rep = None
    for v in _candidate_vectors(field, form.dim):
        if square_class(form(v)) is cls.qp:
            p_rep = v
            break
    assert p_rep is not None, "no representative for Q(P)"
    for v in _candidate_vectors(field, form.dim):
        if square_class(form(v)) is not cls.ql:
            continue
        if not form.b_full(p_rep, v).is_zero():
            continue
        if not linalg.independent([p_rep, v], field):
            continue
        g = Geometry(form, p_rep, v)
        got = classify(g)
        if (got.qp, got.ql) == (cls.qp, cls.ql):
            return g
    raise InvalidInputError(f"no representative pair found for {cls}")


# ---------------------------------------------------------------------------
# Cycle equivalence
# ---------------------------------------------------------------------------

def _scaling_options(field: Field):
    if isinstance(field, Rational):
        return (field.one(), field.scalar(-1))
    if isinstance(field, PrimeField):
        return (field.one(), canonical_nonresidue(field))
    raise UnsupportedFieldError("cycle equivalence needs char != 2")


def _pointspace_token(g: Geometry, lam: Scalar):
    """Isomorphism invariants of (P^perp, lam Q^P, L)."""
    ps = pointspace(g)
    form = ps.form.scaled(lam)
    rad = bilinear_radical(form)
    l_coords = ps.l_coords
    ql_cls = square_class(form(l_coords))
    l_in_rad = bool(rad) and linalg.in_span(l_coords, rad, g.field)
    if rad:
        comp = []
        span = list(rad)
        for i in range(form.dim):
            e = linalg.unit_vector(g.field, form.dim, i)
            if not linalg.in_span(e, span, g.field):
                span.append(e)
                comp.append(e)
        core = form.restrict(comp)
    else:
        core = form
    if isinstance(g.field, Rational):
        inv = ("sig",) + signature(core)
    else:
        inv = ("det", core.dim, det_class(core).name)
    return (len(rad), inv, ql_cls.name, l_in_rad)


def cycle_equivalent(g1: Geometry, g2: Geometry) -> bool:
    """Are the pointspace tuples (P^perp, Q^P, L) isomorphic up to the
    overall scalar a geometry is defined modulo?"""
    if g1.field != g2.field:
        raise InvalidInputError("cycle equivalence needs one field")
    if g1.form.dim != g2.form.dim:
        raise InvalidInputError("cycle equivalence needs equal dimensions")
    if g1.field.char == 2:
        raise UnsupportedFieldError("cycle equivalence is stated for char != 2")
    base = _pointspace_token(g2, g2.field.one())
    return any(_pointspace_token(g1, lam) == base
               for lam in _scaling_options(g1.field))


def cycle_equivalence_partners(cls: GeometryClass):
    """Classes cycle equivalent to ``cls`` in the plane atlas.

    Returns [] when the geometry determines its oriented-cycle structure
    uniquely, [partner] for the non-trivially paired classes, and [cls]
    itself when Q(L) = 0 (the two non-isomorphic models of one class).
    """
    if cls.geom_dim != 2:
        raise UnsupportedFieldError("partners are computed for the plane atlas")
    if cls.field_token == "rational":
        if cls.qp is not SquareClass.UNIT:
            return ()
        if cls.ql is SquareClass.ZERO:
            return (cls,)
        partner = GeometryClass(cls.field_token, cls.geom_dim,
                                cls.form_invariant, cls.qp, _flip(cls.ql),
                                _CK_NAMES.get((cls.qp, _flip(cls.ql))),
                                cls.field)
        return (partner,)
    if cls.field_token.startswith("fp:"):
        if cls.qp is SquareClass.ZERO:
            return ()
        if cls.ql is SquareClass.ZERO:
            return (cls,)
        partner = GeometryClass(cls.field_token, cls.geom_dim,
                                cls.form_invariant, cls.qp, _flip(cls.ql),
                                _CK_NAMES.get((cls.qp, _flip(cls.ql))),
                                cls.field)
        return (partner,)
    raise UnsupportedFieldError(
        "partners are stated for the reals and odd finite fields")


def second_model(g: Geometry) -> Geometry:
    """The other extension of g's pointspace: same Q^P, the norm of P
    multiplied by the non-residue (sign-flipped over the rationals).

    Cycle equivalent to g by construction; for Q(L) != 0 it lands in the
    partner class, for Q(L) = 0 in the same class (the two models)."""
    if g.field.char == 2:
        raise UnsupportedFieldError("model doubling is stated for char != 2")
    if g.qp().is_zero():
        raise InvalidInputError("the extension of an isotropic P is unique")
    ps = pointspace(g)
    e = _scaling_options(g.field)[1]
    coeffs = {(0, 0): e * g.qp()}
    for (i, j), c in ps.form.coeff_items():
        coeffs[(i + 1, j + 1)] = c
    form2 = QuadraticForm(g.field, g.form.dim, coeffs)
    p2 = linalg.unit_vector(g.field, g.form.dim, 0)
    l2 = (g.field.zero(),) + tuple(ps.l_coords)
    return Geometry(form2, p2, l2)


# ---------------------------------------------------------------------------
# Explicit pointspace isometries (the finite-field certificate)
# ---------------------------------------------------------------------------

def _canonical_diag_basis(form: QuadraticForm):
    """Orthogonal basis with Q values [1,...,1,delta], delta in {1,e};
    odd finite fields, non-degenerate forms."""
    field = form.field
    e = canonical_nonresidue(field)
    diag = diagonalize(form)
    basis = []
    entries = []
    for a, b in zip(diag.entries, diag.basis):
        target = field.one() if square_class(a) is SquareClass.UNIT else e
        s = sqrt_if_square(a / target)
        basis.append(vec_scale(s.inverse(), b))
        entries.append(target)
    # convert non-residue pairs [e,e] into [1,1]
    while entries.count(e) >= 2:
        i = entries.index(e)
        j = entries.index(e, i + 1)
        pair = (basis[i], basis[j])
        sub = form.restrict(pair)
        w_co = None
        for co in linalg.all_vectors(field, 2):
            if sub(co) == field.one():
                w_co = co
                break
        assert w_co is not None  # every value is a sum of two squares
        w = vec_add(vec_scale(w_co[0], pair[0]), vec_scale(w_co[1], pair[1]))
        rows = (tuple(sub.b_full(w_co, u) for u in
                      (linalg.unit_vector(field, 2, 0),
                       linalg.unit_vector(field, 2, 1))),)
        kern = linalg.kernel_basis(rows, field, 2)
        assert len(kern) == 1
        w2 = vec_add(vec_scale(kern[0][0], pair[0]),
                     vec_scale(kern[0][1], pair[1]))
        s = sqrt_if_square(form(w2))
        assert s is not None  # Q(w2) ~ det [e,e] ~ 1
        w2 = vec_scale(s.inverse(), w2)
        basis[i], basis[j] = w, w2
        entries[i] = entries[j] = field.one()
    order = sorted(range(len(entries)),
                   key=lambda k: 0 if entries[k] == field.one() else 1)
    return [basis[k] for k in order], [entries[k] for k in order]


def isometry_between(q1: QuadraticForm, q2: QuadraticForm):
    """An explicit matrix T with Q2(T v) = Q1(v); odd finite fields."""
    if not isometric(q1, q2):
        raise InvalidInputError("the forms are not isometric")
    b1, e1 = _canonical_diag_basis(q1)
    b2, e2 = _canonical_diag_basis(q2)
    assert e1 == e2
    m1 = tuple(zip(*b1))  # columns are the basis vectors
    m2 = tuple(zip(*b2))
    inv1 = linalg.inverse(m1, q1.field)
    return linalg.mat_mul(m2, inv1)


def pointspace_isometry(g1: Geometry, g2: Geometry):
    """Explicit certificate of cycle equivalence for anisotropic P over
    an odd finite field: a scalar lam and a matrix h with
    Q2^P(h v) = lam Q1^P(v) and h(L1) parallel to L2; None if there is
    no such pair."""
    if not (isinstance(g1.field, PrimeField) and g1.field == g2.field):
        raise UnsupportedFieldError(
            "the certificate search runs over odd finite fields")
    if g1.qp().is_zero() or g2.qp().is_zero():
        raise UnsupportedFieldError(
            "the certificate search needs anisotropic P")
    ps1, ps2 = pointspace(g1), pointspace(g2)
    field = g1.field
    l1, l2 = ps1.l_coords, ps2.l_coords
    for lam in _scaling_options(field):
        f1 = ps1.form.scaled(lam)
        if not isometric(f1, ps2.form):
            continue
        if square_class(f1(l1)) is not square_class(ps2.form(l2)):
            continue
        t = isometry_between(f1, ps2.form)
        h0 = linalg.mat_vec(t, l1)
        ql2 = ps2.form(l2)
        if not ql2.is_zero():
            s = sqrt_if_square(ql2 / ps2.form(h0))
            assert s is not None
            h0 = vec_scale(s, h0)
        adjust = extend_isometry(ps2.form, [h0], [l2])
        h = linalg.mat_mul(adjust, t)
        image = linalg.mat_vec(h, l1)
        assert linalg.in_span(image, [l2], field)
        return lam, h
    return None

"""Line translation groups, charts, oriented distance."""

import itertools
import math
import random

import pytest

from conformal import linalg
from conformal.fields import PrimeField, Rational, SquareClass
from conformal.classify import enumerate_classes, representative_geometry
from conformal.geometry import ProjPoint, dual_geometry
from conformal.metric import (DegenerateLineError, IdealPointError,
                              IncompatibleChartsError, LineGroupClass,
                              NotOnLineError, build_chart, compose,
                              find_nonideal_line, gamma_class, invert,
                              line_points, line_space, same_distance,
                              stabilizer_group, stabilizer_matrices,
                              translation_between)

QQ = Rational()
F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)


def _rep(field, qp, ql):
    cls = next(c for c in enumerate_classes(field, 2)
               if c.qp is qp and c.ql is ql)
    return representative_geometry(cls)


def test_gamma_class_real():
    from conformal.models import ModelKind, exact_model_geometry
    elliptic = exact_model_geometry(ModelKind.ELLIPTIC)
    parabolic = exact_model_geometry(ModelKind.PARABOLIC)
    hyperbolic = exact_model_geometry(ModelKind.HYPERBOLIC)
    assert gamma_class(elliptic) is LineGroupClass.NON_SPLIT_TORUS  # SO(2)
    assert gamma_class(parabolic) is LineGroupClass.ADDITIVE       # R^+
    assert gamma_class(hyperbolic) is LineGroupClass.SPLIT_TORUS   # SO(1,1)
    # rotations via the dual: elliptic angles are also SO(2)
    assert gamma_class(dual_geometry(elliptic)) is \
        LineGroupClass.NON_SPLIT_TORUS
    # scaling the form must not change the answer
    from conformal.geometry import Geometry
    scaled = Geometry(elliptic.form.scaled(-2), elliptic.p_rep,
                      elliptic.l_rep)
    assert gamma_class(scaled) is LineGroupClass.NON_SPLIT_TORUS


def test_gamma_class_f7_nonresidue():
    g = _rep(F7, SquareClass.UNIT, SquareClass.NON_RESIDUE)
    gc = gamma_class(g)
    assert gc is LineGroupClass.NON_SPLIT_TORUS
    assert gc.order(7) == 8
    l = find_nonideal_line(g)
    assert len(stabilizer_group(g, l)) == 8


def test_line_space_structure():
    from conformal.fields import square_class
    from conformal.geometry import lie_quadric_points
    from conformal.quadform import bilinear_radical, det_class
    g = _rep(F5, SquareClass.UNIT, SquareClass.UNIT)
    l = find_nonideal_line(g)
    space = line_space(g, l)
    assert space.form.dim == 3
    assert not bilinear_radical(space.form)
    # <P, l> is symplectic, so det(Q) ~ -det(restriction)
    assert det_class(g.form) == \
        det_class(space.form) * square_class(F5.scalar(-1))
    ideal = next(p for p in lie_quadric_points(g)
                 if g.form.b_full(g.l_rep, p.coords).is_zero()
                 and g.form.b_full(g.p_rep, p.coords).is_zero())
    with pytest.raises(DegenerateLineError):
        line_space(g, ideal)


def test_stabilizer_additive_is_translation_group():
    g = _rep(F3, SquareClass.UNIT, SquareClass.ZERO)
    l = find_nonideal_line(g)
    group = stabilizer_group(g, l)
    assert len(group) == 3
    taus = sorted(el.normal_form[0].value for el in group)
    assert taus == [0, 1, 2]
    by_tau = {el.normal_form[0].value: el for el in group}
    for t1 in range(3):
        for t2 in range(3):
            composed = compose(by_tau[t1], by_tau[t2])
            assert composed.normal_form[0].value == (t1 + t2) % 3


def test_stabilizer_split_f5():
    g = _rep(F5, SquareClass.UNIT, SquareClass.UNIT)
    l = find_nonideal_line(g)
    group = stabilizer_group(g, l)
    assert len(group) == 4
    assert any(el.is_identity() for el in group)
    mus = sorted(el.normal_form[0].value for el in group)
    assert mus == [1, 2, 3, 4]  # the full multiplicative group


def test_full_stabilizer_has_index_two():
    for field in (F3, F5, F7):
        for ql in (SquareClass.UNIT, SquareClass.ZERO,
                   SquareClass.NON_RESIDUE):
            g = _rep(field, SquareClass.NON_RESIDUE, ql)
            l = find_nonideal_line(g)
            group = stabilizer_group(g, l)
            _, _, full = stabilizer_matrices(g, l)
            assert len(full) == 2 * len(group)


def test_translation_identity_and_swap():
    g = _rep(F5, SquareClass.UNIT, SquareClass.NON_RESIDUE)
    l = find_nonideal_line(g)
    _, pts = line_points(g, l)
    t_same = translation_between(g, l, pts[0], pts[0])
    assert t_same.is_identity()
    t_ab = translation_between(g, l, pts[0], pts[1])
    t_ba = translation_between(g, l, pts[1], pts[0])
    assert invert(t_ab).normal_form == t_ba.normal_form
    assert same_distance(t_ab, t_ba)
    assert compose(t_ab, t_ba).is_identity()


def test_translation_matches_stabilizer_enumeration():
    g = _rep(F5, SquareClass.UNIT, SquareClass.UNIT)  # split line
    l = find_nonideal_line(g)
    space, pts = line_points(g, l)
    group = stabilizer_group(g, l)
    for p1, p2 in itertools.product(pts, repeat=2):
        t = translation_between(g, l, p1, p2)
        matches = [el for el in group if el.normal_form == t.normal_form]
        assert len(matches) == 1
        assert matches[0].matrix == t.matrix


def test_free_transitivity_all_classes():
    """|Gamma| equals the number of non-ideal points and the action is
    simply transitive, for every Q(L) class over F_3, F_5, F_7."""
    for field in (F3, F5, F7):
        q = field.p
        for ql, order in ((SquareClass.NON_RESIDUE, q + 1),
                          (SquareClass.ZERO, q),
                          (SquareClass.UNIT, q - 1)):
            g = _rep(field, SquareClass.UNIT, ql)
            l = find_nonideal_line(g)
            space, pts = line_points(g, l)
            group = stabilizer_group(g, l)
            assert len(group) == order == len(pts)
            start = pts[0]
            start_lc = space.from_ambient(start.coords)
            images = {ProjPoint(linalg.mat_vec(el.matrix, start_lc)).sort_key()
                      for el in group}
            lifted = {ProjPoint(space.to_ambient(
                linalg.mat_vec(el.matrix, start_lc))).sort_key()
                for el in group}
            assert len(images) == order  # trivial stabilizers
            assert lifted == {p.sort_key() for p in pts}  # transitive


def test_ideal_point_rejected():
    g = _rep(F3, SquareClass.UNIT, SquareClass.ZERO)
    l = find_nonideal_line(g)
    space, pts = line_points(g, l)
    # find the ideal point of the line: isotropic, orthogonal to L
    ideal = None
    for coords in linalg.projective_points(F3, 3):
        if space.form(coords).is_zero() and \
           space.form.b_full(space.l_coords, coords).is_zero():
            ideal = ProjPoint(space.to_ambient(coords))
            break
    assert ideal is not None
    with pytest.raises(IdealPointError):
        translation_between(g, l, pts[0], ideal)
    other = _rep(F3, SquareClass.UNIT, SquareClass.UNIT)
    with pytest.raises(NotOnLineError):
        translation_between(g, l, pts[0],
                            next(iter(line_points(other,
                                 find_nonideal_line(other))[1])))


def test_compose_requires_one_line():
    g = _rep(F5, SquareClass.UNIT, SquareClass.UNIT)
    lines = []
    spans = set()
    from conformal.geometry import lie_quadric_points
    for l in lie_quadric_points(g):
        if g.form.b_full(g.l_rep, l.coords).is_zero() and \
           not g.form.b_full(g.p_rep, l.coords).is_zero():
            red, _ = linalg.rref((l.coords, g.p_rep), F5)
            key = tuple(red)
            if key in spans:
                continue  # the other orientation of a line already taken
            spans.add(key)
            lines.append(l)
        if len(lines) == 2:
            break
    _, pts1 = line_points(g, lines[0])
    _, pts2 = line_points(g, lines[1])
    t1 = translation_between(g, lines[0], pts1[0], pts1[1])
    t2 = translation_between(g, lines[1], pts2[0], pts2[1])
    with pytest.raises(IncompatibleChartsError):
        compose(t1, t2)
    # but distances along the two lines are comparable (same chart class)
    assert same_distance(t1, t1)
    same_distance(t1, t2)  # must not raise


def test_gamma_uniqueness_across_lines_f5():
    """All non-ideal lines of one geometry carry isomorphic groups."""
    from conformal.geometry import lie_quadric_points
    for ql in (SquareClass.UNIT, SquareClass.ZERO, SquareClass.NON_RESIDUE):
        g = _rep(F5, SquareClass.NON_RESIDUE, ql)
        orders = set()
        kinds = set()
        for l in lie_quadric_points(g):
            if not g.form.b_full(g.l_rep, l.coords).is_zero():
                continue
            if g.form.b_full(g.p_rep, l.coords).is_zero():
                continue
            space = line_space(g, l)
            chart = build_chart(space)
            kinds.add(chart.kind)
            orders.add(len(stabilizer_group(g, l)))
        assert len(kinds) == 1 and len(orders) == 1
        assert next(iter(kinds)) is gamma_class(g)


def test_hyperbolic_split_parameter_is_exp_distance():
    """On the real hyperbolic line, the split-torus parameter of the
    translation between points at distance d is exp(+-d)."""
    from conformal.models import ModelKind, lift_line, lift_point, \
        model_geometry
    g = model_geometry(ModelKind.HYPERBOLIC)
    line = lift_line(ModelKind.HYPERBOLIC, (0.0, 1.0, 0.0))
    for t1, t2 in ((0.0, 0.7), (-0.3, 1.1), (0.5, 0.5)):
        p1 = lift_point(ModelKind.HYPERBOLIC,
                        (math.sinh(t1), 0.0, math.cosh(t1)))
        p2 = lift_point(ModelKind.HYPERBOLIC,
                        (math.sinh(t2), 0.0, math.cosh(t2)))
        motion = translation_between(g, line.lift, p1.lift, p2.lift)
        assert motion.group_class is LineGroupClass.SPLIT_TORUS
        mu = motion.normal_form[0].value
        assert abs(abs(math.log(abs(mu))) - abs(t2 - t1)) < 1e-7


def test_distance_invariance_sampled():
    from conformal.quadform import IsometrySampler
    rng = random.Random(2)
    g = _rep(F5, SquareClass.UNIT, SquareClass.NON_RESIDUE)
    l = find_nonideal_line(g)
    _, pts = line_points(g, l)
    sampler = IsometrySampler(g.form, [g.p_rep, g.l_rep])
    for _ in range(25):
        m = sampler.sample(rng)
        p1, p2 = rng.choice(pts), rng.choice(pts)
        d = translation_between(g, l, p1, p2)
        l2 = ProjPoint(linalg.mat_vec(m, l.coords))
        d2 = translation_between(g, l2,
                                 ProjPoint(linalg.mat_vec(m, p1.coords)),
                                 ProjPoint(linalg.mat_vec(m, p2.coords)))
        assert same_distance(d, d2)


def test_additive_distance_invariance_across_lines():
    """Parabolic-type geometry: tau survives transport to another line
    (the additive chart normalizes the anisotropic direction)."""
    from conformal.quadform import IsometrySampler
    rng = random.Random(6)
    g = _rep(F5, SquareClass.UNIT, SquareClass.ZERO)
    l = find_nonideal_line(g)
    _, pts = line_points(g, l)
    sampler = IsometrySampler(g.form, [g.p_rep, g.l_rep])
    for _ in range(25):
        m = sampler.sample(rng)
        p1, p2 = rng.choice(pts), rng.choice(pts)
        d = translation_between(g, l, p1, p2)
        assert d.group_class is LineGroupClass.ADDITIVE
        d2 = translation_between(
            g, ProjPoint(linalg.mat_vec(m, l.coords)),
            ProjPoint(linalg.mat_vec(m, p1.coords)),
            ProjPoint(linalg.mat_vec(m, p2.coords)))
        assert same_distance(d, d2)


def test_distances_of_different_geometries_incomparable():
    g1 = _rep(F5, SquareClass.UNIT, SquareClass.UNIT)
    g2 = _rep(F5, SquareClass.NON_RESIDUE, SquareClass.UNIT)
    t1 = translation_between(g1, find_nonideal_line(g1),
                             *line_points(g1, find_nonideal_line(g1))[1][:2])
    t2 = translation_between(g2, find_nonideal_line(g2),
                             *line_points(g2, find_nonideal_line(g2))[1][:2])
    with pytest.raises(IncompatibleChartsError):
        same_distance(t1, t2)

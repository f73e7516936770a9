"""Forms, bilinear forms, diagonalization, Witt machinery."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conformal import linalg
from conformal.fields import (CharTwo, PrimeField, Rational,
                              UnsupportedFieldError, canonical_nonresidue,
                              square_class)
from conformal.quadform import (DegenerateFormError, QuadraticForm,
                                arf_invariant, assoc_bilinear,
                                bilinear_radical, det_class, diagonalize,
                                extend_isometry, generalized_orthogonal_basis,
                                half_bilinear, is_isometry,
                                is_nondegenerate_form, isometric,
                                reflection_matrix, represents, signature,
                                witt_index, witt_index_bruteforce)

F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)
QQ = Rational()
F2, F4 = CharTwo(2), CharTwo(4)


# -- associated bilinear forms ------------------------------------------------

def test_assoc_bilinear_one_dim():
    q = QuadraticForm.diagonal(F5, [1])
    b = assoc_bilinear(q)
    assert b.matrix[0][0] == F5.scalar(2)  # B(v,v) = 2Q(v)


def test_assoc_bilinear_product():
    q = QuadraticForm(QQ, 2, {(0, 1): 1})  # xy
    b = assoc_bilinear(q)
    assert [[x.value for x in row] for row in b.matrix] == [[0, 1], [1, 0]]


def test_char2_degenerate_vector():
    # x^2 + yz over F_2: (1,0,0) pairs to zero with everything
    q = QuadraticForm(F2, 3, {(0, 0): 1, (1, 2): 1})
    e0 = linalg.unit_vector(F2, 3, 0)
    for v in linalg.all_vectors(F2, 3):
        assert q.b_full(e0, v).is_zero()
    rad = bilinear_radical(q)
    assert len(rad) == 1 and linalg.in_span(e0, rad, F2)
    # yet the form is non-degenerate: Q is 1 on the radical vector
    assert is_nondegenerate_form(q)


def test_half_bilinear():
    q = QuadraticForm.diagonal(QQ, [1, -1])
    b = half_bilinear(q)
    assert b((QQ.one(), QQ.zero()), (QQ.one(), QQ.zero())) == QQ.one()
    q2 = QuadraticForm(QQ, 4, {(0, 0): 1, (1, 1): 1, (2, 3): -1})
    e3, e4 = linalg.unit_vector(QQ, 4, 2), linalg.unit_vector(QQ, 4, 3)
    assert half_bilinear(q2)(e3, e4).value == Fraction(-1, 2)
    q3 = QuadraticForm.diagonal(QQ, [1, 1, -1])
    u = linalg.vector(QQ, [1, 1, 1])
    v = linalg.vector(QQ, [1, 0, 0])
    assert q3.b_half(u, v) == QQ.one()
    with pytest.raises(UnsupportedFieldError):
        half_bilinear(QuadraticForm.symplectic(F2, 1))


@pytest.mark.parametrize("field", [QQ, F3, F5, F7, F2, F4],
                         ids=lambda f: f.token())
@given(data=st.data())
@settings(max_examples=50, deadline=None)
def test_polarization_identity(field, data):
    dim = data.draw(st.integers(2, 5))
    if field.is_finite:
        pool = [x.value for x in field.elements()]
        entry = st.sampled_from(pool)
    else:
        entry = st.integers(-5, 5)
    coeffs = {}
    for i in range(dim):
        for j in range(i, dim):
            coeffs[(i, j)] = data.draw(entry)
    q = QuadraticForm(field, dim, coeffs)
    u = tuple(field.scalar(data.draw(entry)) for _ in range(dim))
    v = tuple(field.scalar(data.draw(entry)) for _ in range(dim))
    assert q.b_full(u, v) == q(linalg.vec_add(u, v)) - q(u) - q(v)
    lam = field.scalar(data.draw(entry))
    assert q(linalg.vec_scale(lam, u)) == lam * lam * q(u)


# -- radicals and non-degeneracy ---------------------------------------------

def test_radical_examples():
    assert bilinear_radical(QuadraticForm.diagonal(F5, [1, 1, -1])) == ()
    q = QuadraticForm.diagonal(F5, [1, 0])  # x^2 plus a zero summand
    rad = bilinear_radical(q)
    assert len(rad) == 1
    assert rad[0] == linalg.unit_vector(F5, 2, 1)
    assert not is_nondegenerate_form(q)
    assert is_nondegenerate_form(QuadraticForm.diagonal(F7, [1, 1, -1]))


def test_char2_nondegeneracy_needs_q_on_radical():
    # x^2 + y^2 over F_2 = (x+y)^2: radical is 2-dimensional
    q = QuadraticForm.diagonal(F2, [1, 1])
    assert len(bilinear_radical(q)) == 2
    assert not is_nondegenerate_form(q)


# -- diagonalization ----------------------------------------------------------

def _transport_is_diagonal(q, diag):
    for i, bi in enumerate(diag.basis):
        if q(bi) != diag.entries[i]:
            return False
        for j in range(i + 1, len(diag.basis)):
            if not q.b_full(bi, diag.basis[j]).is_zero():
                return False
    return True


def test_diagonalize_conformal_unification_forms():
    # the three classical conformal forms all have signature (3,1)
    spherical = QuadraticForm(QQ, 4, {(0, 0): 1, (1, 1): 1, (2, 2): 1,
                                      (3, 3): -1})
    euclidean = QuadraticForm(QQ, 4, {(0, 0): 1, (1, 1): 1, (2, 3): -1})
    hyperbolic = QuadraticForm(QQ, 4, {(0, 0): -1, (1, 1): 1, (2, 2): 1,
                                       (3, 3): 1})
    for q in (spherical, euclidean, hyperbolic):
        diag = diagonalize(q)
        assert _transport_is_diagonal(q, diag)
        k, l, z = signature(q)
        assert (k, l, z) == (3, 1, 0)


def test_diagonalize_identity_basis_for_diagonal_input():
    q = QuadraticForm.diagonal(F5, [2, 3])
    diag = diagonalize(q)
    assert [e.value for e in diag.entries] == [2, 3]
    assert diag.basis == (linalg.unit_vector(F5, 2, 0),
                          linalg.unit_vector(F5, 2, 1))


def test_diagonalize_hyperbolic_product():
    q = QuadraticForm(F7, 2, {(0, 1): 1})  # xy
    diag = diagonalize(q)
    assert _transport_is_diagonal(q, diag)
    cls = square_class(diag.entries[0]) * square_class(diag.entries[1])
    assert cls == square_class(F7.scalar(-1))


def test_diagonalize_preserves_det_class():
    rng = random.Random(5)
    for field in (F3, F5, F7):
        for _ in range(20):
            dim = rng.randint(2, 5)
            coeffs = {(i, j): rng.randrange(field.p)
                      for i in range(dim) for j in range(i, dim)}
            q = QuadraticForm(field, dim, coeffs)
            diag = diagonalize(q)
            assert _transport_is_diagonal(q, diag)
            assert linalg.independent(diag.basis, field)
            if is_nondegenerate_form(q):
                assert isometric(q, QuadraticForm.diagonal(field, diag.entries))


# -- generalized orthogonal bases ----------------------------------------------

def test_gen_ortho_empty_extension():
    q = QuadraticForm.diagonal(F5, [1, -1])
    gob = generalized_orthogonal_basis(q)
    assert len(gob.vectors) == 2


def test_gen_ortho_lone_symplectic_becomes_couple():
    q = QuadraticForm.diagonal(F7, [1, -1, 1])
    s = [linalg.vector(F7, [1, 1, 0])]  # isotropic
    gob = generalized_orthogonal_basis(q, s)
    idx = gob.vectors.index(tuple(s[0]))
    assert any(idx in pair for pair in gob.couples)
    partner = next(pair for pair in gob.couples if idx in pair)
    other = gob.vectors[partner[0] if partner[1] == idx else partner[1]]
    assert q.b_full(s[0], other) == F7.one()
    assert q(other).is_zero()


def test_gen_ortho_char2_couple():
    q = QuadraticForm(F2, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    s = [linalg.vector(F2, [1, 0])]
    gob = generalized_orthogonal_basis(q, s)
    assert gob.couples  # B((1,0),(0,1)) = 1 by polarization over F_2
    assert q.b_full(linalg.vector(F2, [1, 0]),
                    linalg.vector(F2, [0, 1])) == F2.one()


def test_gen_ortho_rejects_degenerate_form():
    q = QuadraticForm.diagonal(F5, [1, 0])
    with pytest.raises(DegenerateFormError):
        generalized_orthogonal_basis(q)


# -- Witt index ----------------------------------------------------------------

def test_witt_examples():
    assert witt_index(QuadraticForm.diagonal(QQ, [1, 1, 1, -1, -1])) == 2
    assert witt_index(QuadraticForm.diagonal(F5, [1, 1, 1, -1, -1])) == 2
    e = canonical_nonresidue(F7)
    assert witt_index(QuadraticForm.diagonal(F7, [1, -e.value])) == 0
    # [1,-e] has no nontrivial isotropic vector: oracle by enumeration
    q = QuadraticForm.diagonal(F7, [1, -e.value])
    zeros = [v for v in linalg.all_vectors(F7, 2)
             if q(v).is_zero() and not linalg.is_zero_vector(v)]
    assert zeros == []


def test_witt_closed_form_vs_bruteforce_sample():
    # dims 2..4 exhaustive over square-class patterns; the full dim-5
    # sweep lives in the witt-oracle verification suite
    for field in (F3, F5):
        e = canonical_nonresidue(field)
        for dim in (2, 3, 4):
            for pattern in itertools.product((field.one(), e), repeat=dim):
                q = QuadraticForm.diagonal(field, pattern)
                assert witt_index(q) == witt_index_bruteforce(q), pattern


def test_witt_requires_nondegenerate():
    with pytest.raises(DegenerateFormError):
        witt_index(QuadraticForm.diagonal(F3, [1, 0]))


# -- isometry invariants ---------------------------------------------------------

def test_isometric_examples():
    e = canonical_nonresidue(F7)
    assert not isometric(QuadraticForm.diagonal(F7, [1, 1]),
                         QuadraticForm.diagonal(F7, [1, e.value]))
    assert isometric(QuadraticForm.diagonal(F5, [1, -1]),
                     QuadraticForm.diagonal(F5, [2, -2]))
    q = QuadraticForm.diagonal(F5, [1, 2, 3])
    assert isometric(q, q)
    assert isometric(QuadraticForm.diagonal(QQ, [1, -1, 2]),
                     QuadraticForm.diagonal(QQ, [5, -3, 7]))
    assert not isometric(QuadraticForm.diagonal(QQ, [1, 1, -1]),
                         QuadraticForm.diagonal(QQ, [1, -1, -1]))


def test_det_class_well_defined():
    q1 = QuadraticForm.diagonal(F5, [1, -1])
    q2 = QuadraticForm.diagonal(F5, [2, -2])
    assert det_class(q1) == det_class(q2) == square_class(F5.scalar(-1))


# -- Arf invariant ----------------------------------------------------------------

def test_arf_examples():
    xy = QuadraticForm.symplectic(F2, 1)
    plane = QuadraticForm(F2, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    assert arf_invariant(xy).is_zero()
    assert arf_invariant(plane) == F2.one()
    # zero-count oracle: xy has 2 nonzero zeros, x^2+xy+y^2 has none
    assert sum(1 for v in linalg.all_vectors(F2, 2)
               if xy(v).is_zero()) == 3
    assert sum(1 for v in linalg.all_vectors(F2, 2)
               if plane(v).is_zero()) == 1
    four = xy.direct_sum(plane)
    assert not arf_invariant(four).is_zero()
    assert arf_invariant(plane.direct_sum(plane)).is_zero()  # e + e = 0


def test_arf_over_f4():
    plane = QuadraticForm(F4, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    # over F_4 the same polynomial splits: 1 lies in the image of t^2+t
    assert arf_invariant(plane).is_zero()
    t = F4.scalar(2)
    nontrivial = QuadraticForm(F4, 2, {(0, 0): 1, (0, 1): 1, (1, 1): t.value})
    assert arf_invariant(nontrivial) == t


def test_arf_preconditions():
    with pytest.raises(UnsupportedFieldError):
        arf_invariant(QuadraticForm.diagonal(F5, [1, 1]))
    from conformal.quadform import InvalidInputError
    with pytest.raises(InvalidInputError):
        arf_invariant(QuadraticForm(F2, 3, {(0, 1): 1, (2, 2): 1}))


# -- represents -------------------------------------------------------------------

def test_represents_symplectic_plane():
    q = QuadraticForm(F7, 2, {(0, 1): 1})
    v = represents(q, 5)
    assert v is not None and q(v) == F7.scalar(5)


def test_represents_no_witness():
    e = canonical_nonresidue(F7)
    q = QuadraticForm.diagonal(F7, [1, -e.value])
    assert represents(q, 0) is None
    assert represents(QuadraticForm.diagonal(QQ, [1]), -1) is None


def test_represents_rational_witnesses():
    q = QuadraticForm.diagonal(QQ, [1, 1, -1])
    for lam in (5, -3, 0, Fraction(7, 2)):
        v = represents(q, lam)
        assert v is not None and q(v) == QQ.scalar(lam)
    assert represents(QuadraticForm.diagonal(QQ, [1, 1]), 9) is not None


# -- Witt extension ---------------------------------------------------------------

def test_extend_identity():
    q = QuadraticForm.diagonal(F3, [1, 1, -1, -1])
    u = [linalg.unit_vector(F3, 4, 0)]
    g = extend_isometry(q, u, u)
    assert g == linalg.identity_matrix(F3, 4)


def test_extend_basis_swap():
    q = QuadraticForm.diagonal(F3, [1, 1, -1, -1])
    e1 = linalg.unit_vector(F3, 4, 0)
    e2 = linalg.unit_vector(F3, 4, 1)
    g = extend_isometry(q, [e1], [e2])
    assert linalg.mat_vec(g, e1) == e2
    assert is_isometry(q, g)


def test_extend_isotropic_orbit():
    q = QuadraticForm.diagonal(F3, [1, 1, 1, -1, -1])
    iso = [v for v in linalg.projective_points(F3, 5) if q(v).is_zero()]
    rng = random.Random(3)
    for _ in range(40):
        a, b = rng.choice(iso), rng.choice(iso)
        g = extend_isometry(q, [a], [b])
        assert linalg.mat_vec(g, a) == b
        assert is_isometry(q, g)


def test_norm_orbits_under_reflections():
    """Nonzero vectors of a fixed norm form a single orbit of the group
    generated by reflections (F_3, the 5-dimensional standard form)."""
    q = QuadraticForm.diagonal(F3, [1, 1, 1, -1, -1])
    vectors = [v for v in linalg.all_vectors(F3, 5)
               if not linalg.is_zero_vector(v)]
    mirrors = [reflection_matrix(q, w)
               for w in linalg.projective_points(F3, 5)
               if not q(w).is_zero()]
    by_norm = {}
    for v in vectors:
        by_norm.setdefault(q(v).value, []).append(v)
    for norm, members in sorted(by_norm.items()):
        start = members[0]
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for m in mirrors:
                    w = linalg.mat_vec(m, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        assert seen == set(members), f"norm {norm}: orbit incomplete"


def test_char2_witt_index_with_radical():
    # x^2 + yz over F_2: the radical line carries Q = 1, the complement
    # is a symplectic plane
    q = QuadraticForm(F2, 3, {(0, 0): 1, (1, 2): 1})
    assert witt_index(q) == 1 == witt_index_bruteforce(q)
    five = q.direct_sum(QuadraticForm.symplectic(F2, 1))
    assert witt_index(five) == 2 == witt_index_bruteforce(five)
    # even dimension: the Arf class decides between m and m-1
    assert witt_index(QuadraticForm.symplectic(F4, 2)) == 2
    aniso = QuadraticForm(F4, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 2})
    four = QuadraticForm.symplectic(F4, 1).direct_sum(aniso)
    assert witt_index(four) == 1 == witt_index_bruteforce(four)


def test_nondegeneracy_matches_radical_enumeration():
    """is_nondegenerate_form against the direct oracle: some nonzero
    radical vector with Q = 0 exists iff the form is degenerate."""
    rng = random.Random(12)
    for field in (F2, F4, F3):
        elems = [x.value for x in field.elements()]
        for _ in range(300):
            dim = rng.randint(1, 4)
            coeffs = {(i, j): rng.choice(elems)
                      for i in range(dim) for j in range(i, dim)}
            q = QuadraticForm(field, dim, coeffs)
            rad = bilinear_radical(q)
            witness = False
            if rad:
                for combo in linalg.all_vectors(field, len(rad)):
                    v = linalg.zero_vector(field, dim)
                    for c, b in zip(combo, rad):
                        v = linalg.vec_add(v, linalg.vec_scale(c, b))
                    if linalg.is_zero_vector(v):
                        continue
                    if q(v).is_zero():
                        witness = True
                        break
            assert is_nondegenerate_form(q) == (not witness)

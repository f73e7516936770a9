"""JSON round-trips and the command-line surface."""

import json
import subprocess
import sys

from conformal import serialize as ser
from conformal.classify import enumerate_classes, representative_geometry
from conformal.fields import CharTwo, PrimeField, Rational
from conformal.metric import find_nonideal_line, line_points, \
    translation_between
from conformal.quadform import QuadraticForm

F3, F5 = PrimeField(3), PrimeField(5)


def test_form_round_trip():
    q = QuadraticForm(F5, 4, {(0, 0): 1, (1, 3): 2, (2, 2): 4})
    blob = ser.form_to_json(q)
    assert ser.form_from_json(F5, blob) == q
    # diagonal shorthand
    assert ser.form_from_json(F5, [1, 2, 3]) == \
        QuadraticForm.diagonal(F5, [1, 2, 3])
    rational = Rational()
    from fractions import Fraction
    qq = QuadraticForm.diagonal(rational, [Fraction(1, 2), -2])
    assert ser.form_from_json(rational, ser.form_to_json(qq)) == qq


def test_f4_scalar_round_trip():
    f4 = CharTwo(4)
    q = QuadraticForm(f4, 2, {(0, 0): 2, (0, 1): 1, (1, 1): 3})
    assert ser.form_from_json(f4, ser.form_to_json(q)) == q


def test_geometry_round_trip():
    for cls in enumerate_classes(F5, 2)[:4]:
        g = representative_geometry(cls)
        blob = json.loads(json.dumps(ser.geometry_to_json(g)))
        g2 = ser.geometry_from_json(blob)
        assert g2.form == g.form
        assert g2.p_rep == g.p_rep and g2.l_rep == g.l_rep


def test_motion_serialization():
    g = representative_geometry(enumerate_classes(F5, 2)[0])
    l = find_nonideal_line(g)
    _, pts = line_points(g, l)
    motion = translation_between(g, l, pts[0], pts[1])
    blob = ser.motion_to_json(motion)
    assert set(blob) == {"class", "normal_form", "matrix"}
    assert len(blob["matrix"]) == 3


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "conformal.cli", *argv],
                          capture_output=True, text=True)


def test_cli_deterministic_output():
    a = _cli("classify", "atlas", "--field", "fp:5", "--dim", "2",
             "--out", "json", "--seed", "7")
    b = _cli("classify", "atlas", "--field", "fp:5", "--dim", "2",
             "--out", "json", "--seed", "7")
    assert a.returncode == 0 and a.stdout == b.stdout
    rows = json.loads(a.stdout)
    assert len(rows) == 9
    names = {r["name"] for r in rows}
    assert "elliptic" in names and "Minkowski" in names


def test_cli_table_and_incident(tmp_path):
    r = _cli("classify", "table", "--field", "rational")
    assert r.returncode == 0 and "Laguerre/Galilei" in r.stdout
    g = representative_geometry(
        next(c for c in enumerate_classes(F3, 2) if c.name == "elliptic"))
    path = tmp_path / "g.json"
    path.write_text(json.dumps(ser.geometry_to_json(g)))
    from conformal.geometry import lie_quadric_points
    pts = lie_quadric_points(g)
    point = next(p for p in pts
                 if g.form.b_full(g.p_rep, p.coords).is_zero())
    polar = next(l for l in pts
                 if g.form.b_full(g.l_rep, l.coords).is_zero()
                 and g.form.b_full(l.coords, point.coords).is_zero())
    fmt = lambda v: ",".join(str(x.value) for x in v)
    r = _cli("geom", "incident", "--geom", str(path),
             "--c1", fmt(point.coords), "--c2", fmt(polar.coords))
    assert r.returncode == 0
    assert r.stdout.strip() == "incident: true"


def test_cli_exit_codes(tmp_path):
    assert _cli("classify", "atlas", "--field", "fp:9",
                "--dim", "2").returncode == 3
    assert _cli("classify", "atlas", "--field", "f2",
                "--dim", "2").returncode == 3
    assert _cli("--bogus-flag").returncode == 64
    assert _cli("classify", "bogus").returncode == 64
    g = representative_geometry(
        next(c for c in enumerate_classes(F3, 2) if c.name == "elliptic"))
    blob = ser.geometry_to_json(g)
    blob["L"] = blob["P"]  # anisotropic P: B(P, P) != 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(blob))
    r = _cli("geom", "describe", "--geom", str(bad))
    assert r.returncode == 2
    assert "orthogonal" in r.stderr


def test_cli_verify_single_suite():
    r = _cli("verify", "--suite", "separations")
    assert r.returncode == 0
    assert r.stdout.startswith("[pass] separations")

"""JSON (de)serialization for forms, geometries and motion elements.

Forms travel as ``{"dim": n, "coeffs": [[i, j, value], ...]}`` with the
diagonal shorthand ``[a1, ..., an]`` accepted wherever a form is parsed;
geometries as ``{"field": token, "form": ..., "P": [...], "L": [...]}``.
Scalars are JSON numbers, fraction strings ("2/3"), or the F_4 names
("t", "t+1").
"""

from __future__ import annotations

import json
from fractions import Fraction

from .fields import CharTwo, Field, Scalar, field_from_token
from .geometry import Geometry
from .metric import MotionElement
from .quadform import QuadraticForm


def scalar_to_json(s: Scalar):
    v = s.value
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(s.field, CharTwo):
        return s.field.format_value(v)
    return v


def scalar_from_json(field: Field, obj) -> Scalar:
    if isinstance(obj, str):
        return field.parse(obj)
    return field.scalar(obj)


def form_to_json(q: QuadraticForm) -> dict:
    return {"dim": q.dim,
            "coeffs": [[i, j, scalar_to_json(c)]
                       for (i, j), c in q.coeff_items()]}


def form_from_json(field: Field, obj) -> QuadraticForm:
    if isinstance(obj, list):  # diagonal shorthand
        return QuadraticForm.diagonal(
            field, [scalar_from_json(field, x) for x in obj])
    coeffs = {(int(i), int(j)): scalar_from_json(field, v)
              for i, j, v in obj["coeffs"]}
    return QuadraticForm(field, int(obj["dim"]), coeffs)


def parse_form_text(field: Field, text: str) -> QuadraticForm:
    """A JSON form object or the diagonal shorthand `[a1,...,an]`."""
    return form_from_json(field, json.loads(text))


def vector_to_json(v) -> list:
    return [scalar_to_json(x) for x in v]


def vector_from_json(field: Field, obj):
    return tuple(scalar_from_json(field, x) for x in obj)


def parse_vector_text(field: Field, text: str):
    """Comma-separated or JSON-array coordinates."""
    text = text.strip()
    if text.startswith("["):
        return vector_from_json(field, json.loads(text))
    return tuple(field.parse(part.strip()) for part in text.split(","))


def geometry_to_json(g: Geometry) -> dict:
    return {"field": g.field.token(),
            "form": form_to_json(g.form),
            "P": vector_to_json(g.p_rep),
            "L": vector_to_json(g.l_rep)}


def geometry_from_json(obj, eps: float = 1e-9) -> Geometry:
    field = field_from_token(obj["field"], eps)
    form = form_from_json(field, obj["form"])
    return Geometry(form,
                    vector_from_json(field, obj["P"]),
                    vector_from_json(field, obj["L"]))


def motion_to_json(m: MotionElement) -> dict:
    return {"class": m.group_class.value,
            "normal_form": [scalar_to_json(x) for x in m.normal_form],
            "matrix": [[scalar_to_json(x) for x in row] for row in m.matrix]}


def class_to_json(cls) -> dict:
    sym = {"ZERO": "0", "UNIT": "1", "NON_RESIDUE": "e"}
    if cls.field_token == "rational":
        sym["NON_RESIDUE"] = "-1"
    return {"field": cls.field_token,
            "dim": cls.geom_dim,
            "form": list(cls.form_invariant),
            "qP": sym[cls.qp.name],
            "qL": sym[cls.ql.name],
            "name": cls.name}

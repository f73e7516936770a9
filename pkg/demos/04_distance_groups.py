#!/usr/bin/env python3
"""Distance as a group element.

Every non-ideal line of a plane geometry carries a translation group
acting freely transitively on its non-ideal points: a non-split torus
(order q+1), the additive group (order q), or a split torus (order q-1),
decided by the norm class of the line-marker L.  The motion taking one
point to another *is* the oriented distance; swapping the points inverts
it, and composing along a line adds.
"""

from conformal import (PrimeField, SquareClass, compose, enumerate_classes,
                       gamma_class, invert, representative_geometry,
                       same_distance, stabilizer_group, translation_between)
from conformal.metric import find_nonideal_line, line_points

for p in (3, 5, 7, 11):
    field = PrimeField(p)
    print(f"=== F_{p} ===")
    for ql, label in ((SquareClass.NON_RESIDUE, "Q(L) ~ e"),
                      (SquareClass.ZERO, "Q(L) = 0"),
                      (SquareClass.UNIT, "Q(L) ~ 1")):
        cls = next(c for c in enumerate_classes(field, 2)
                   if c.qp is SquareClass.UNIT and c.ql is ql)
        g = representative_geometry(cls)
        l = find_nonideal_line(g)
        group = stabilizer_group(g, l)
        _, pts = line_points(g, l)
        print(f"  {label}: {gamma_class(g).value:16s} |Gamma| = "
              f"{len(group):2d} = #line points = {len(pts)}")
print()

field = PrimeField(7)
cls = next(c for c in enumerate_classes(field, 2)
           if c.qp is SquareClass.UNIT and c.ql is SquareClass.UNIT)
g = representative_geometry(cls)
l = find_nonideal_line(g)
_, pts = line_points(g, l)
a, b, c = pts[0], pts[2], pts[4]
t_ab = translation_between(g, l, a, b)
t_bc = translation_between(g, l, b, c)
t_ac = translation_between(g, l, a, c)
print("additivity along a split line over F_7:")
print(f"  d({a} -> {b}) has parameter {t_ab.normal_form[0]}")
print(f"  d({b} -> {c}) has parameter {t_bc.normal_form[0]}")
print(f"  composed parameter {compose(t_bc, t_ab).normal_form[0]} "
      f"= direct {t_ac.normal_form[0]}")
t_ba = translation_between(g, l, b, a)
print(f"  swapping the endpoints inverts: {t_ba.normal_form[0]} "
      f"= inverse of {t_ab.normal_form[0]}: "
      f"{invert(t_ab).normal_form[0]}")
print(f"  unoriented distance identifies the two: "
      f"{same_distance(t_ab, t_ba)}")

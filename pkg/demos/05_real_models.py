#!/usr/bin/env python3
"""The classical real models, numerically.

Lifts spherical, hyperbolic-plane and Euclidean points and circles onto
their quadrics and compares the separation/power pairings with the
classical closed forms: cos(d)-1 on the sphere, 1-cosh(d) in the
hyperbolic plane, -d^2/2 in the Euclidean plane, and cos(angle)-1 for
intersecting circles everywhere.
"""

import math

from conformal import ModelKind, check_separation, incident, model_geometry
from conformal.metric import LineGroupClass, translation_between
from conformal.models import (cycles_at_angle, lift_cycle, lift_line,
                              lift_point, points_at_distance)

print("=== point separations against the closed forms ===")
for kind in (ModelKind.ELLIPTIC, ModelKind.HYPERBOLIC, ModelKind.PARABOLIC):
    print(f"{kind.value}:")
    for d in (0.1, 0.5, 1.0, 2.0):
        value, closed = check_separation(kind, *points_at_distance(kind, d))
        print(f"  d = {d}: lift pairing {value.value:+.9f}   "
              f"closed form {closed:+.9f}")

print()
print("=== circle angles ===")
for theta in (0.25, 1.0, 2.0):
    value, closed = check_separation(
        ModelKind.PARABOLIC,
        *cycles_at_angle(ModelKind.PARABOLIC, theta, 0.8, 0.6))
    print(f"  theta = {theta}: power {value.value:+.9f} "
          f"= cos(theta)-1 = {closed:+.9f}")

print()
print("=== oriented tangency ===")
g = model_geometry(ModelKind.PARABOLIC)
c0 = lift_cycle(ModelKind.PARABOLIC, (0.0, 0.0), 1.0)
for r2, d, label in ((2.0, 3.0, "externally tangent"),
                     (2.0, 1.0, "internally tangent")):
    same = lift_cycle(ModelKind.PARABOLIC, (d, 0.0), r2)
    opp = lift_cycle(ModelKind.PARABOLIC, (d, 0.0), -r2)
    print(f"  {label}: same orientation touches: "
          f"{incident(g, c0.lift, same.lift)}, opposite: "
          f"{incident(g, c0.lift, opp.lift)}")

print()
print("=== hyperbolic distance through the split torus ===")
g = model_geometry(ModelKind.HYPERBOLIC)
line = lift_line(ModelKind.HYPERBOLIC, (0.0, 1.0, 0.0))
for t in (0.4, 1.3):
    p1 = lift_point(ModelKind.HYPERBOLIC, (0.0, 0.0, 1.0))
    p2 = lift_point(ModelKind.HYPERBOLIC,
                    (math.sinh(t), 0.0, math.cosh(t)))
    motion = translation_between(g, line.lift, p1.lift, p2.lift)
    assert motion.group_class is LineGroupClass.SPLIT_TORUS
    mu = motion.normal_form[0].value
    print(f"  points at distance {t}: torus parameter {mu:.6f}, "
          f"|log| = {abs(math.log(abs(mu))):.6f}")

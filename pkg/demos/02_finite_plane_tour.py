#!/usr/bin/env python3
"""A finite conformal plane from the inside.

Builds the elliptic-analog plane over F_3 (the standard 5-dimensional
form with both marked vectors of non-residue norm) and walks through its
quadric: roles, incidence, the pointspace, antipodal classes.
"""

from conformal import (Geometry, PrimeField, QuadraticForm, Role,
                       cayley_klein_points, hyperplane_through, incident,
                       lie_quadric_points, pointspace, points_of, role)
from conformal.geometry import antipodal

f3 = PrimeField(3)
form = QuadraticForm.diagonal(f3, [1, 1, 1, -1, -1])
g = Geometry(form, (0, 0, 0, 0, 1), (0, 0, 0, 1, 0))

cycles = lie_quadric_points(g)
by_role = {}
for c in cycles:
    by_role.setdefault(role(g, c), []).append(c)

print(f"quadric points over F_3: {len(cycles)}")
for r in Role:
    print(f"  {r.value:10s}: {len(by_role.get(r, []))}")

points = by_role[Role.POINT]
lines = by_role[Role.HYPERPLANE]

print()
print("a point and the lines through it:")
p = points[0]
through = [l for l in lines if incident(g, p, l)]
print(f"  point {p}")
for l in through:
    print(f"    touches line {l}  (its points: "
          f"{[str(x) for x in points_of(g, l)]})")

print()
print("two non-antipodal points determine at most one line:")
q = next(x for x in points if not antipodal(g, p, x))
line = hyperplane_through(g, p, q)
print(f"  through {p} and {q}: {line}")

print()
print("antipodal classes (the projective model identifies them):")
classes = cayley_klein_points(g)
n_pointcycles = len(points) + len(by_role.get(Role.IDEAL, []))
print(f"  {n_pointcycles} pointcycles ({len(points)} plain + "
      f"{n_pointcycles - len(points)} ideal) fall into {len(classes)} "
      f"classes of sizes {sorted(len(c) for c in classes)}")

print()
ps = pointspace(g)
print(f"pointspace: a {ps.form.dim}-dimensional restricted form "
      f"{ps.form!r} with the line-marker at {ps.l_coords}")

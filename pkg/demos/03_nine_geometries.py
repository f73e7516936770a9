#!/usr/bin/env python3
"""The atlas of plane geometries and its cycle-equivalence structure.

Over the reals (and, with the non-residue standing in for -1, over any
odd finite field) the norms of the two marked vectors cut the
non-degenerate planes into nine classes -- the classical elliptic,
parabolic, hyperbolic row, their duals, and the Lorentzian family.
"""

from conformal import (PrimeField, Rational, ck_table,
                       cycle_equivalence_partners, cycle_equivalent,
                       enumerate_classes, representative_geometry)

for field in (Rational(), PrimeField(5)):
    headers, rows = ck_table(field)
    print(f"=== plane geometries over {field} ===")
    width = max(len(name) for row in rows for name in row)
    print("  Q(P) \\ Q(L) " + "  ".join(h.rjust(width) for h in headers))
    for h, row in zip(headers, rows):
        print(f"  {h:>11s} " + "  ".join(name.rjust(width) for name in row))
    print()

print("=== atlas sizes ===")
for field, dims in ((Rational(), (1, 2, 3, 4)), (PrimeField(5), (1, 2, 3))):
    counts = {d: len(enumerate_classes(field, d)) for d in dims}
    print(f"  {field}: " + ", ".join(f"d={d}: {n}" for d, n in counts.items()))
print(f"  quadratically closed: 4 in every dimension")

print()
print("=== cycle equivalence (same unoriented plane, different "
      "orientable cycles) ===")
for field in (Rational(), PrimeField(3)):
    atlas = enumerate_classes(field, 2)
    reps = {c: representative_geometry(c) for c in atlas}
    print(f"over {field}:")
    seen = set()
    for cls in atlas:
        partners = cycle_equivalence_partners(cls)
        if not partners:
            continue
        tag = cls.name or cls.label()
        if partners[0] == cls:
            print(f"  {tag}: two non-isomorphic models over one pointspace")
        else:
            key = frozenset((cls, partners[0]))
            if key in seen:
                continue
            seen.add(key)
            other = partners[0].name or partners[0].label()
            both = cycle_equivalent(reps[cls], reps[partners[0]])
            print(f"  {tag} ~ {other}  (verified: {both})")

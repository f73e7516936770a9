#!/usr/bin/env python3
"""Tour of the exact coefficient fields and quadratic-form basics.

Everything in this library runs over one of four scalar domains:
rationals (standing in for the reals -- classification only ever needs
signs), odd prime fields, the perfect fields F_2 and F_4, and a
tolerance-based float field for the classical models.
"""

from conformal import (CharTwo, PrimeField, QuadraticForm, Rational,
                       SquareClass, canonical_nonresidue, diagonalize,
                       signature, sqrt_if_square, square_class, witt_index,
                       witt_index_bruteforce)

print("=== square classes ===")
f7 = PrimeField(7)
squares = sorted({(x * x).value for x in f7.elements() if not x.is_zero()})
print(f"nonzero squares mod 7: {squares}")
for v in (1, 2, 3, 4, 5, 6):
    print(f"  class of {v} mod 7: {square_class(f7.scalar(v)).name}")
print(f"canonical non-residue mod 7: {canonical_nonresidue(f7)}")
print(f"sqrt(4) mod 7 = {sqrt_if_square(f7.scalar(4))}, "
      f"sqrt(3) mod 7 = {sqrt_if_square(f7.scalar(3))}")

print()
print("=== F_4 = F_2[t]/(t^2+t+1) ===")
f4 = CharTwo(4)
t = f4.scalar(2)
print(f"t * t = {t * t},  t * (t+1) = {t * (t + 1)},  t + t = {t + t}")
print("every nonzero element is a square in a perfect field:")
for x in f4.elements():
    print(f"  sqrt({x}) = {sqrt_if_square(x)}")

print()
print("=== diagonalization and signatures ===")
rational = Rational()
# the three classical conformal forms: sphere, plane, hyperboloid
forms = {
    "spherical  x^2+y^2+z^2-t^2": QuadraticForm(
        rational, 4, {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): -1}),
    "euclidean  x^2+y^2-zt": QuadraticForm(
        rational, 4, {(0, 0): 1, (1, 1): 1, (2, 3): -1}),
    "hyperbolic -x^2+y^2+z^2+t^2": QuadraticForm(
        rational, 4, {(0, 0): -1, (1, 1): 1, (2, 2): 1, (3, 3): 1}),
}
for name, q in forms.items():
    k, l, _ = signature(q)
    entries = [str(e) for e in diagonalize(q).entries]
    print(f"  {name}: diagonal [{', '.join(entries)}], signature ({k},{l})")

print()
print("=== Witt index: closed form against brute force ===")
f5 = PrimeField(5)
for entries in ([1, 1, 1, -1, -1], [1, 1, -1, -1], [1, -2], [1, 2, 3, 4]):
    q = QuadraticForm.diagonal(f5, entries)
    fast = witt_index(q)
    slow = witt_index_bruteforce(q)
    print(f"  {q!r} over F_5: witt index {fast} "
          f"(subspace search agrees: {slow})")

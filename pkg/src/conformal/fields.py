"""Exact field arithmetic with square-class computation.

Four coefficient domains are supported:

* ``Rational`` -- exact rationals standing in for the reals.  Everything
  the classification needs from the reals is a sign, and signs are exact
  over Q.
* ``PrimeField(p)`` -- Z/pZ for an odd prime p.
* ``CharTwo(q)`` -- the perfect fields F_2 and F_4 = F_2[t]/(t^2+t+1).
* ``ApproxReal(eps)`` -- double precision with an absolute tolerance,
  used only by the floating-point model constructors.

A :class:`Scalar` is a canonical value tagged with its field; mixing
fields in arithmetic raises :class:`FieldMismatchError`.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional


class ConformalError(Exception):
    """Base class for all domain errors raised by this package."""


class FieldMismatchError(ConformalError):
    """Arithmetic attempted between scalars of different fields."""


class UnsupportedFieldError(ConformalError):
    """Operation not defined for this field (e.g. square classes of floats)."""


class SquareClass(Enum):
    """Value of x in K^x/(K^x)^2 together with 0.

    Over the rationals-as-reals UNIT means positive and NON_RESIDUE means
    negative; over F_p the split is by quadratic residues; over a perfect
    field of characteristic 2 every nonzero element is UNIT.
    """

    ZERO = 0
    UNIT = 1
    NON_RESIDUE = 2

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self is SquareClass.ZERO or other is SquareClass.ZERO:
            return SquareClass.ZERO
        if self is other:
            return SquareClass.UNIT
        return SquareClass.NON_RESIDUE

    def __repr__(self) -> str:  # pragma: no cover
        return self.name


class Scalar:
    """A canonical field element; immutable and structurally comparable."""

    __slots__ = ("value", "field")

    def __init__(self, value, field: "Field"):
        self.value = value
        self.field = field

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"mixed fields: {self.field} and {other.field}")
            return other
        if isinstance(other, int):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field._add(self.value, o.value), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field._sub(self.value, o.value), self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field._sub(o.value, self.value), self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field._mul(self.value, o.value), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by field zero")
        return Scalar(self.field._mul(self.value, self.field._inv(o.value)),
                      self.field)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return Scalar(self.field._neg(self.value), self.field)

    def __pow__(self, n: int):
        if n < 0:
            return (self.field.one() / self) ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.field != self.field:
            return False
        return self.field._eq(self.value, other.value)

    def __hash__(self):
        if not self.field.is_exact:
            raise TypeError("approximate scalars are not hashable")
        return hash((self.field.token(), self.value))

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.field._is_zero(self.value)

    def inverse(self) -> "Scalar":
        return self.field.one() / self

    def sort_key(self):
        return self.field._sort_key(self.value)

    def __repr__(self):
        return self.field.format_value(self.value)


class Field:
    """Abstract field; concrete subclasses provide raw-value arithmetic."""

    char: int = 0
    is_exact: bool = True
    is_finite: bool = False

    def scalar(self, x) -> Scalar:
        raise NotImplementedError

    def zero(self) -> Scalar:
        return self.scalar(0)

    def one(self) -> Scalar:
        return self.scalar(1)

    def elements(self) -> Iterator[Scalar]:
        raise UnsupportedFieldError(f"{self} is not finite")

    @property
    def order(self) -> int:
        raise UnsupportedFieldError(f"{self} is not finite")

    def token(self) -> str:
        """Stable string identifying the field (used on the CLI and in JSON)."""
        raise NotImplementedError

    def format_value(self, value) -> str:
        return str(value)

    def parse(self, text: str) -> Scalar:
        raise NotImplementedError

    # raw-value hooks -------------------------------------------------
    def _add(self, a, b):
        raise NotImplementedError

    def _sub(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def _eq(self, a, b) -> bool:
        raise NotImplementedError

    def _is_zero(self, a) -> bool:
        raise NotImplementedError

    def _sort_key(self, a):
        raise NotImplementedError

    # derived ----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Field) and self.token() == other.token()

    def __hash__(self):
        return hash(self.token())

    def __repr__(self):
        return self.token()


class Rational(Field):
    """The rationals, used as an exact stand-in for the reals."""

    char = 0

    def scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"cannot coerce {x.field} into {self}")
            return x
        return Scalar(Fraction(x), self)

    def token(self) -> str:
        return "rational"

    def parse(self, text: str) -> Scalar:
        return Scalar(Fraction(text), self)

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _inv(self, a):
        return 1 / a

    def _eq(self, a, b):
        return a == b

    def _is_zero(self, a):
        return a == 0

    def _sort_key(self, a):
        return a


class PrimeField(Field):
    """Z/pZ for an odd prime p; residues canonically in [0, p)."""

    is_finite = True

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0 or not _is_prime(p):
            raise UnsupportedFieldError(f"p={p} is not an odd prime")
        self.p = p
        self.char = p

    def scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"cannot coerce {x.field} into {self}")
            return x
        return Scalar(x % self.p, self)

    @property
    def order(self) -> int:
        return self.p

    def elements(self) -> Iterator[Scalar]:
        for v in range(self.p):
            yield Scalar(v, self)

    def token(self) -> str:
        return f"fp:{self.p}"

    def parse(self, text: str) -> Scalar:
        return self.scalar(int(text))

    def _add(self, a, b):
        return (a + b) % self.p

    def _sub(self, a, b):
        return (a - b) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _inv(self, a):
        return pow(a, self.p - 2, self.p)

    def _eq(self, a, b):
        return a == b

    def _is_zero(self, a):
        return a == 0

    def _sort_key(self, a):
        return a


# F_4 multiplication: values encode a*t + b as 2a + b, t^2 = t + 1.
_GF4_MUL = [[0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2]]
_GF4_INV = {1: 1, 2: 3, 3: 2}
_GF4_NAMES = {0: "0", 1: "1", 2: "t", 3: "t+1"}
_GF4_PARSE = {"0": 0, "1": 1, "t": 2, "t+1": 3, "2": 2, "3": 3}


class CharTwo(Field):
    """F_2 or F_4 (as F_2[t]/(t^2+t+1)); both are perfect."""

    char = 2
    is_finite = True

    def __init__(self, q: int):
        if q not in (2, 4):
            raise UnsupportedFieldError(f"characteristic-2 field of size {q}")
        self.q = q

    def scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"cannot coerce {x.field} into {self}")
            return x
        if self.q == 2:
            return Scalar(x % 2, self)
        if isinstance(x, int) and not 0 <= x < 4:
            x %= 2  # integers reduce through the prime subfield
        return Scalar(x, self)

    @property
    def order(self) -> int:
        return self.q

    def elements(self) -> Iterator[Scalar]:
        for v in range(self.q):
            yield Scalar(v, self)

    def token(self) -> str:
        return f"f{self.q}"

    def parse(self, text: str) -> Scalar:
        if self.q == 4:
            if text not in _GF4_PARSE:
                raise ValueError(f"not an F_4 element: {text!r}")
            return Scalar(_GF4_PARSE[text], self)
        return self.scalar(int(text))

    def format_value(self, value) -> str:
        if self.q == 4:
            return _GF4_NAMES[value]
        return str(value)

    def _add(self, a, b):
        return a ^ b

    _sub = _add

    def _mul(self, a, b):
        if self.q == 2:
            return a & b
        return _GF4_MUL[a][b]

    def _neg(self, a):
        return a

    def _inv(self, a):
        if self.q == 2:
            return a
        return _GF4_INV[a]

    def _eq(self, a, b):
        return a == b

    def _is_zero(self, a):
        return a == 0

    def _sort_key(self, a):
        return a


class ApproxReal(Field):
    """Double precision with a single absolute comparison tolerance.

    Accepted only by the floating-point model constructors; the exact
    algorithms reject it.
    """

    char = 0
    is_exact = False

    def __init__(self, eps: float = 1e-9):
        self.eps = eps

    def scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"cannot coerce {x.field} into {self}")
            return x
        return Scalar(float(x), self)

    def token(self) -> str:
        return "approx"

    def parse(self, text: str) -> Scalar:
        return Scalar(float(text), self)

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _inv(self, a):
        return 1.0 / a

    def _eq(self, a, b):
        return abs(a - b) < self.eps

    def _is_zero(self, a):
        return abs(a) < self.eps

    def _sort_key(self, a):
        return a


def square_class(x: Scalar) -> SquareClass:
    """Class of x in K^x/(K^x)^2 together with {0}.

    Signs over the rationals, Euler's criterion over F_p; in a perfect
    field of characteristic 2 squaring is onto, so every nonzero element
    is UNIT.
    """
    field = x.field
    if not field.is_exact:
        raise UnsupportedFieldError("square classes need an exact field")
    if x.is_zero():
        return SquareClass.ZERO
    if isinstance(field, Rational):
        return SquareClass.UNIT if x.value > 0 else SquareClass.NON_RESIDUE
    if isinstance(field, CharTwo):
        return SquareClass.UNIT
    if isinstance(field, PrimeField):
        p = field.p
        return (SquareClass.UNIT
                if pow(x.value, (p - 1) // 2, p) == 1
                else SquareClass.NON_RESIDUE)
    raise UnsupportedFieldError(f"square classes over {field}")


def canonical_nonresidue(field: Field) -> Scalar:
    """The canonical non-square: -1 over the rationals (and ApproxReal,
    where it plays the same role in chart normalisation), the smallest
    positive non-residue over F_p.  Unsupported in characteristic 2,
    where every element is a square."""
    if isinstance(field, (Rational, ApproxReal)):
        return field.scalar(-1)
    if isinstance(field, CharTwo):
        raise UnsupportedFieldError(
            "every element of a perfect characteristic-2 field is a square")
    if isinstance(field, PrimeField):
        for v in range(2, field.p):
            s = field.scalar(v)
            if square_class(s) is SquareClass.NON_RESIDUE:
                return s
    raise UnsupportedFieldError(f"no canonical non-residue over {field}")


def sqrt_if_square(x: Scalar) -> Optional[Scalar]:
    """A canonical root r with r*r == x, or None.

    Over F_p the smaller residue is returned; over F_2/F_4 the unique
    root; over the rationals the positive root when it is exactly
    rational.
    """
    field = x.field
    if not field.is_exact:
        raise UnsupportedFieldError("exact square roots need an exact field")
    if x.is_zero():
        return field.zero()
    if isinstance(field, Rational):
        frac: Fraction = x.value
        if frac < 0:
            return None
        num = math.isqrt(frac.numerator)
        den = math.isqrt(frac.denominator)
        if num * num == frac.numerator and den * den == frac.denominator:
            return field.scalar(Fraction(num, den))
        return None
    if isinstance(field, CharTwo):
        # Squaring is the Frobenius bijection: x -> x^(q/2) inverts it.
        if field.q == 2:
            return x
        return x * x  # over F_4, (x^2)^2 = x^4 = x
    if isinstance(field, PrimeField):
        p = field.p
        for r in range(0, p // 2 + 1):
            if (r * r) % p == x.value:
                return field.scalar(r)
        return None
    raise UnsupportedFieldError(f"square roots over {field}")


def field_from_token(token: str, eps: float = 1e-9) -> Field:
    """Parse a field descriptor: rational | fp:<p> | f2 | f4 | approx."""
    if token == "rational":
        return Rational()
    if token == "approx":
        return ApproxReal(eps)
    if token == "f2":
        return CharTwo(2)
    if token == "f4":
        return CharTwo(4)
    if token.startswith("fp:"):
        return PrimeField(int(token[3:]))
    raise UnsupportedFieldError(f"unknown field token {token!r}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True

"""Exact arithmetic in the field Q(sqrt 2).

Values are stored as ``(a + b*sqrt(2)) / d`` with integers ``a, b`` and a
positive integer ``d``.  Comparisons are decided exactly by sign tests on
integers, so floors, orderings and equalities never depend on rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

import mpmath

__all__ = ["QuadraticValue", "SQRT2", "SILVER", "as_exact", "exact_floor", "to_mpf"]


def _sign_ab(a: int, b: int) -> int:
    """Sign of a + b*sqrt(2) for integers a, b."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2 (never equal unless both zero)
    if a > 0:
        return 1 if a * a > 2 * b * b else -1
    return 1 if 2 * b * b > a * a else -1


@total_ordering
class QuadraticValue:
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0, d: int = 1) -> None:
        a = Fraction(a)
        b = Fraction(b)
        if d == 0:
            raise ZeroDivisionError("denominator must be nonzero")
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        na = a.numerator * (den // a.denominator)
        nb = b.numerator * (den // b.denominator)
        self._set(na, nb, den * d)

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> QuadraticValue:
        obj = cls.__new__(cls)
        obj._set(a, b, d)
        return obj

    def _set(self, a: int, b: int, d: int) -> None:
        if d < 0:
            a, b, d = -a, -b, -d
        if d != 1:
            g = math.gcd(math.gcd(a, b), d)
            if g > 1:
                a, b, d = a // g, b // g, d // g
        self._a, self._b, self._d = a, b, d

    # -- accessors -----------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def sqrt2_part(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_rational(self) -> bool:
        return self._b == 0

    def conjugate(self) -> QuadraticValue:
        return QuadraticValue._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """Field norm x * conj(x), a rational."""
        return Fraction(self._a * self._a - 2 * self._b * self._b, self._d * self._d)

    def sign(self) -> int:
        return _sign_ab(self._a, self._b)

    def __floor__(self) -> int:
        a, b, d = self._a, self._b, self._d
        s = math.isqrt(2 * b * b)
        # a + b*sqrt2 lies in [lo, lo + 1]
        lo = a + s if b >= 0 else a - s - 1
        m = (lo + 1) // d
        if self < m:
            m -= 1
        return m

    def __ceil__(self) -> int:
        return -math.floor(-self)

    # -- conversions -----------------------------------------------------------
    def __float__(self) -> float:
        if self._b == 0:
            return float(Fraction(self._a, self._d))
        return float(to_mpf(self, 80))

    def __repr__(self) -> str:
        return f"QuadraticValue({self.rational_part!s}, {self.sqrt2_part!s})"

    def __str__(self) -> str:
        r, s = self.rational_part, self.sqrt2_part
        if s == 0:
            return str(r)
        if r == 0:
            return f"{s}*sqrt2"
        return f"{r}{'+' if s > 0 else '-'}{abs(s)}*sqrt2"

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other: object) -> QuadraticValue | None:
        if isinstance(other, QuadraticValue):
            return other
        if isinstance(other, int):
            return QuadraticValue._raw(other, 0, 1)
        if isinstance(other, Rational):
            return QuadraticValue._raw(other.numerator, 0, other.denominator)
        if isinstance(other, float):
            f = Fraction(other)
            return QuadraticValue._raw(f.numerator, 0, f.denominator)
        return None

    def __add__(self, other: object) -> QuadraticValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QuadraticValue._raw(self._a + o._a, self._b + o._b, self._d)
        return QuadraticValue._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __neg__(self) -> QuadraticValue:
        return QuadraticValue._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> QuadraticValue:
        return self

    def __abs__(self) -> QuadraticValue:
        return -self if self.sign() < 0 else self

    def __sub__(self, other: object) -> QuadraticValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> QuadraticValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> QuadraticValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._a, self._b
        c, e = o._a, o._b
        return QuadraticValue._raw(a * c + 2 * b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QuadraticValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        # x / y = x * conj(y) / N(y), with N(y) = (c^2 - 2 e^2) / d^2
        c, e, d = o._a, o._b, o._d
        n = c * c - 2 * e * e
        num = self * QuadraticValue._raw(c, -e, 1)
        return QuadraticValue._raw(num._a * d, num._b * d, num._d * n)

    def __rtruediv__(self, other: object) -> QuadraticValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> QuadraticValue:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadraticValue._raw(1, 0, 1) / (self**-k)
        result = QuadraticValue._raw(1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __lt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0


SQRT2 = QuadraticValue(0, 1)
SILVER = QuadraticValue(1, 1)


def as_exact(x: object) -> Fraction | QuadraticValue:
    """Convert ``x`` to an exact Fraction or QuadraticValue.

    Floats convert to the exact binary rational they hold.  Strings accept
    ``"silver"``, integers, decimals and ``"a/b"``.
    """
    if isinstance(x, QuadraticValue):
        return x.rational_part if x.is_rational() else x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("silver", "1+sqrt2", "1+sqrt(2)"):
            return SILVER
        return Fraction(s)
    raise TypeError(f"cannot represent {x!r} exactly")


def exact_floor(x: Fraction | QuadraticValue | int) -> int:
    return math.floor(x)


def to_mpf(x: Fraction | QuadraticValue | int, prec: int = 113) -> mpmath.mpf:
    """High-precision approximation of an exact value."""
    if isinstance(x, QuadraticValue):
        # guard against cancellation between the two parts
        prec += 2 * max(x._a.bit_length(), x._b.bit_length())
    with mpmath.workprec(prec + 20):
        if isinstance(x, QuadraticValue):
            val = (mpmath.mpf(x._a) + mpmath.mpf(x._b) * mpmath.sqrt(2)) / x._d
        else:
            f = Fraction(x)
            val = mpmath.mpf(f.numerator) / f.denominator
    return +val

"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt(d)).

Rational values are plain :class:`fractions.Fraction` objects.  Irrational
values are :class:`Scalar` instances; arithmetic that cancels the irrational
part demotes back to ``Fraction`` so rational computations stay fast.
Mixing two different square roots raises :class:`FieldTowerError`.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Union


class FieldTowerError(ValueError):
    """Raised when an operation would need two different square roots."""


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s * f**2`` and ``s`` square-free."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    s, f = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return s * n, f


class Scalar:
    """a + b*sqrt(d) with rational a, b and square-free d > 1, b != 0."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d <= 1 or squarefree_decomposition(d)[1] != 1:
            raise ValueError(f"d must be square-free and > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    # construction helpers -------------------------------------------------
    @staticmethod
    def make(a, b, d: int) -> Number:
        if b == 0 or d == 1:
            return Fraction(a) + (Fraction(b) if d == 1 else 0)
        return Scalar(a, b, d)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.d != self.d:
                raise FieldTowerError(
                    f"cannot combine sqrt({self.d}) and sqrt({other.d}); nested or mixed towers unsupported"
                )
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Scalar.make(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Scalar.make(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Scalar.make(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        x, y = c
        return Scalar.make(self.a * x + self.b * y * self.d, self.a * y + self.b * x, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def inverse(self) -> Number:
        norm = self.a * self.a - self.d * self.b * self.b
        return Scalar.make(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            self._coerce(other)
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return Scalar.make(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def conjugate(self) -> "Scalar":
        return Scalar(self.a, -self.b, self.d)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 by construction
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    __str__ = lambda self: format_scalar(self)


Number = Union[Fraction, Scalar]


def sqrt_rational(x) -> Number:
    """Exact square root of a non-negative rational, in Q or Q(sqrt(d))."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational is not real")
    if x == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q
    s, f = squarefree_decomposition(x.numerator * x.denominator)
    return Scalar.make(0, Fraction(f, x.denominator), s) if s > 1 else Fraction(f, x.denominator)


def is_rational_square(x) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    if x == 0:
        return True
    return squarefree_decomposition(x.numerator * x.denominator)[0] == 1


def squarefree_part(x) -> int:
    """Square class representative of a positive rational."""
    x = Fraction(x)
    return squarefree_decomposition(x.numerator * x.denominator)[0]


def extension_degree(x) -> int:
    """d of the field the value lives in (1 for rationals)."""
    return x.d if isinstance(x, Scalar) else 1


def _fmt_frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    if isinstance(x, Scalar):
        sign = "+" if x.b > 0 else "-"
        return f"{_fmt_frac(x.a)}{sign}{_fmt_frac(abs(x.b))}*sqrt({x.d})"
    return _fmt_frac(Fraction(x))


_SCALAR_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)\s*(?:(?P<sign>[+-])\s*(?P<b>\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


def parse_scalar(text: str) -> Number:
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"malformed scalar {text!r}")
    a = Fraction(m.group("a"))
    if m.group("b") is None:
        return a
    b = Fraction(m.group("b"))
    if m.group("sign") == "-":
        b = -b
    d = int(m.group("d"))
    s, f = squarefree_decomposition(d)
    return Scalar.make(a, b * f, s)


def to_scalar(x) -> Number:
    if isinstance(x, (Scalar, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")

"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

A :class:`Surd` is ``a + b*sqrt(d)`` with rational ``a``, ``b`` and a squarefree
``d > 1``.  Arithmetic that cancels the irrational part collapses back to a
plain :class:`fractions.Fraction`, so rational code paths never see a Surd.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import sympy


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree (n > 0)."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    s, d = 1, 1
    for p, e in sympy.factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


def make(a, b=0, d: int = 1):
    a, b = Fraction(a), Fraction(b)
    if b == 0 or d == 1:
        return a + b if d == 1 else a
    return Surd(a, b, d)


def sqrt_rational(q) -> Fraction | Surd:
    """Exact square root of a non-negative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational is not real")
    if q == 0:
        return Fraction(0)
    # sqrt(p/r) = sqrt(p*r)/r
    s, d = squarefree_split(q.numerator * q.denominator)
    return make(0, Fraction(s, q.denominator), d) if d > 1 else Fraction(s, q.denominator)


class Surd:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    # -- coercion -----------------------------------------------------------
    def _parts(self, other):
        if isinstance(other, Surd):
            if other.d != self.d:
                raise FieldMismatch(f"cannot combine sqrt({self.d}) and sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make(self.a + p[0], self.b + p[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make(self.a - p[0], self.b - p[1], self.d)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make(p[0] - self.a, p[1] - self.b, self.d)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        return make(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        return make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.inverse()
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make(self.a / p[0], self.b / p[0], self.d)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.inverse() * p[0]

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        # opposite signs: compare a^2 with b^2 d
        cmp = self.a * self.a - self.b * self.b * self.d
        return sa if cmp > 0 else sb

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 by construction
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self))

    def conjugate(self):
        """Galois conjugate ``a - b*sqrt(d)`` (not complex conjugation)."""
        return Surd(self.a, -self.b, self.d)

    def to_sympy(self):
        return sympy.Rational(self.a.numerator, self.a.denominator) + sympy.Rational(
            self.b.numerator, self.b.denominator
        ) * sympy.sqrt(self.d)

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_number(self)


class FieldMismatch(ValueError):
    """Two numbers live in different quadratic fields."""


def sign(x) -> int:
    if isinstance(x, Surd):
        return x.sign()
    return (x > 0) - (x < 0)


def field_of(values) -> int:
    """The common ``d`` of a collection of Fraction/Surd values (1 if all rational)."""
    d = 1
    for v in values:
        if isinstance(v, Surd):
            if d != 1 and v.d != d:
                raise FieldMismatch(f"values span sqrt({d}) and sqrt({v.d})")
            d = v.d
    return d


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Surd))


def format_number(x) -> str:
    """Render an exact number as a string such as ``"1/2"`` or ``"1/2+sqrt(2)/4"``."""
    if isinstance(x, Surd):
        b = x.b
        mag = abs(b)
        if mag == 1:
            rad = f"sqrt({x.d})"
        elif mag.denominator == 1:
            rad = f"{mag.numerator}*sqrt({x.d})"
        elif mag.numerator == 1:
            rad = f"sqrt({x.d})/{mag.denominator}"
        else:
            rad = f"{mag.numerator}*sqrt({x.d})/{mag.denominator}"
        if x.a == 0:
            return rad if b > 0 else "-" + rad
        return f"{x.a}{'+' if b > 0 else '-'}{rad}"
    return str(Fraction(x))


def from_sympy(expr) -> Fraction | Surd:
    """Convert a sympy number lying in some Q(sqrt(d)) to Fraction/Surd.

    Raises ``ValueError`` when the number is not of that shape.
    """
    expr = sympy.sympify(expr)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    expr = sympy.expand(sympy.radsimp(sympy.expand(expr)))
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    a = Fraction(0)
    out = None
    for term, coeff in expr.as_coefficients_dict().items():
        if term == 1:
            a += Fraction(int(coeff.p), int(coeff.q))
            continue
        base = term
        if not (isinstance(base, sympy.Pow) and base.exp == sympy.Rational(1, 2) and base.base.is_Integer):
            raise ValueError(f"{expr} is not in a real quadratic field")
        s, d = squarefree_split(int(base.base))
        piece = make(0, Fraction(int(coeff.p), int(coeff.q)) * s, d)
        out = piece if out is None else out + piece
    return a if out is None else out + a


def to_sympy(x):
    if isinstance(x, Surd):
        return x.to_sympy()
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def parse_number(text: str) -> Fraction | Surd:
    """Parse ``"-1/2"``, ``"sqrt(2)/4"`` or ``"0.25"`` into an exact value."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    return from_sympy(sympy.sympify(text, rational=True))

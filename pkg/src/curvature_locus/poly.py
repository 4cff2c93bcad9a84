"""Exact polynomials in (x, y, z) and binary forms.

Coefficients are :class:`fractions.Fraction` or :class:`~curvature_locus.surd.Surd`
values; floats are tolerated for numeric side paths but the algebraic
operations (gcd, resultant, factorization) require exact input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np
import sympy

from . import surd
from .surd import Surd

X, Y, Z = sympy.symbols("x y z")
GENS = (X, Y, Z)
VARS = ("x", "y", "z")
DEFAULT_TOL = 1e-9


class AllZero(ValueError):
    """Every input polynomial is zero."""


class NoElimination(ValueError):
    """A resultant was requested in a variable one input does not involve."""


def _coerce(c):
    if isinstance(c, (Fraction, Surd, float, complex)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return surd.parse_number(c)
    return surd.from_sympy(c)


def _grlex_key(exp):
    return (sum(exp), exp)


class TernaryPoly:
    """Immutable sparse polynomial in x, y, z.

    ``terms`` maps exponent triples to nonzero coefficients.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int, int], object] | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            c = _coerce(c)
            if c != 0:
                clean[tuple(exp)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "TernaryPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> "TernaryPoly":
        i = VARS.index(name)
        exp = [0, 0, 0]
        exp[i] = 1
        return cls({tuple(exp): 1})

    @classmethod
    def parse(cls, text: str) -> "TernaryPoly":
        """Parse a polynomial written with x, y, z, e.g. ``"2*x*z + y**2"``."""
        expr = sympy.sympify(text, locals={"x": X, "y": Y, "z": Z}, rational=True)
        return cls.from_sympy(expr)

    @classmethod
    def from_sympy(cls, expr) -> "TernaryPoly":
        if isinstance(expr, sympy.Poly):
            d = expr.as_dict(native=False)
        else:
            d = sympy.Poly(sympy.expand(expr), *GENS).as_dict(native=False)
        return cls({exp: surd.from_sympy(c) for exp, c in d.items()})

    # -- basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = VARS.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return d is None or degs == {d}

    def coeff(self, exp) -> object:
        return self.terms.get(tuple(exp), Fraction(0))

    def leading_term(self):
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def field(self) -> int:
        return surd.field_of(self.terms.values())

    def is_exact(self) -> bool:
        return all(surd.is_exact(c) for c in self.terms.values())

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TernaryPoly):
            other = TernaryPoly.const(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TernaryPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TernaryPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TernaryPoly):
            other = TernaryPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TernaryPoly):
            other = _coerce(other)
            if other == 0:
                return TernaryPoly()
            return TernaryPoly({e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return TernaryPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TernaryPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TernaryPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus / evaluation ---------------------------------------------
    def diff(self, var: str) -> "TernaryPoly":
        i = VARS.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return TernaryPoly(out)

    def __call__(self, x, y, z):
        total = 0
        for (i, j, k), c in self.terms.items():
            total = total + c * (x ** i) * (y ** j) * (z ** k)
        return total

    def evaluate(self, point: Sequence) -> object:
        return self(*point)

    def compose_linear(self, m: Sequence[Sequence]) -> "TernaryPoly":
        """Substitute (x, y, z) -> m @ (x, y, z), i.e. return ``p(m u)``."""
        lin = [sum((TernaryPoly.var(v) * m[r][c] for c, v in enumerate(VARS)), TernaryPoly()) for r in range(3)]
        powers = [[TernaryPoly.const(1)] for _ in range(3)]
        deg = self.degree()
        for r in range(3):
            for _ in range(deg):
                powers[r].append(powers[r][-1] * lin[r])
        out = TernaryPoly()
        for (i, j, k), c in self.terms.items():
            out = out + powers[0][i] * powers[1][j] * powers[2][k] * c
        return out

    def map_coeffs(self, f) -> "TernaryPoly":
        return TernaryPoly({e: f(c) for e, c in self.terms.items()})

    # -- sympy bridge -------------------------------------------------------
    def _sympy_coeff(self, c):
        if isinstance(c, Surd):
            return c.to_sympy()
        if isinstance(c, Fraction):
            return sympy.Rational(c.numerator, c.denominator)
        raise TypeError("exact coefficients required for symbolic operations")

    def to_sympy_poly(self, d: int | None = None) -> sympy.Poly:
        d = self.field() if d is None else d
        dom = sympy.QQ if d == 1 else sympy.QQ.algebraic_field(sympy.sqrt(d))
        data = {e: self._sympy_coeff(c) for e, c in self.terms.items()} or {(0, 0, 0): 0}
        return sympy.Poly.from_dict(data, *GENS, domain=dom)

    def to_sympy(self):
        return sum((self._sympy_coeff(c) * X ** e[0] * Y ** e[1] * Z ** e[2] for e, c in self.terms.items()), sympy.Integer(0))

    def normalized(self) -> "TernaryPoly":
        """Scale to the canonical representative (content 1, positive grlex-leading coefficient)."""
        if self.is_zero():
            return self
        _, lc = self.leading_term()
        if self.field() == 1 and all(isinstance(c, Fraction) for c in self.terms.values()):
            den = reduce(math.lcm, (c.denominator for c in self.terms.values()), 1)
            ints = [int(c * den) for c in self.terms.values()]
            g = reduce(math.gcd, ints, 0)
            scale = Fraction(den, g) * (1 if lc > 0 else -1)
            return self * scale
        return self * (1 / lc)

    def __repr__(self):
        return f"TernaryPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip(VARS, e) if p
            )
            cs = surd.format_number(c) if surd.is_exact(c) else repr(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if isinstance(c, Surd) else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


x = TernaryPoly.var("x")
y = TernaryPoly.var("y")
z = TernaryPoly.var("z")


def differentiate(p: TernaryPoly, var: str) -> TernaryPoly:
    return p.diff(var)


def det3(m: Sequence[Sequence]) -> TernaryPoly:
    """Laplace expansion of a 3x3 determinant with polynomial (or scalar) entries."""
    def e(i, j):
        v = m[i][j]
        return v if isinstance(v, TernaryPoly) else TernaryPoly.const(v)

    return (
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
        - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    )


def common_field(polys: Iterable[TernaryPoly]) -> int:
    return surd.field_of(c for p in polys for c in p.terms.values())


def gcd_poly(ps: Sequence[TernaryPoly]) -> TernaryPoly:
    """Normalized greatest common divisor over the coefficient field."""
    nonzero = [p for p in ps if not p.is_zero()]
    if not nonzero:
        raise AllZero("gcd of zero polynomials")
    d = common_field(nonzero)
    g = nonzero[0].to_sympy_poly(d)
    for p in nonzero[1:]:
        if g.total_degree() == 0:
            break
        g = g.gcd(p.to_sympy_poly(d))
    if g.total_degree() == 0:
        return TernaryPoly.const(1)
    return TernaryPoly.from_sympy(g).normalized()


def exact_divide(p: TernaryPoly, q: TernaryPoly) -> TernaryPoly:
    d = common_field([p, q])
    quo, rem = p.to_sympy_poly(d).div(q.to_sympy_poly(d))
    if not rem.is_zero:
        raise ValueError(f"{q} does not divide {p}")
    return TernaryPoly.from_sympy(quo)


def factor_poly(p: TernaryPoly) -> list[tuple[TernaryPoly, int]]:
    """Irreducible factors (normalized) with multiplicities; constants dropped."""
    d = p.field()
    kw = {} if d == 1 else {"extension": sympy.sqrt(d)}
    _, facs = sympy.factor_list(p.to_sympy(), *GENS, **kw)
    out = []
    for f, mult in facs:
        tp = TernaryPoly.from_sympy(f)
        if tp.degree() > 0:
            out.append((tp.normalized(), mult))
    return out


def resultant(f: TernaryPoly, g: TernaryPoly, var: str) -> TernaryPoly:
    """Sylvester resultant eliminating ``var``."""
    if f.is_zero() or g.is_zero():
        raise NoElimination("resultant of a zero polynomial")
    if f.degree_in(var) <= 0 or g.degree_in(var) <= 0:
        raise NoElimination(f"both inputs must involve {var}")
    d = common_field([f, g])
    gen = GENS[VARS.index(var)]
    r = sympy.resultant(f.to_sympy_poly(d), g.to_sympy_poly(d), gen)
    if isinstance(r, sympy.Poly):
        r = r.as_expr()
    return TernaryPoly.from_sympy(r)


# ---------------------------------------------------------------------------
# binary forms


@dataclass(frozen=True)
class ComplexApprox:
    re: float
    im: float
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    @property
    def is_real(self) -> bool:
        return abs(self.im) <= self.tolerance * max(1.0, abs(self.re))

    def __complex__(self):
        return complex(self.re, self.im)

    def conjugate(self) -> "ComplexApprox":
        return ComplexApprox(self.re, -self.im, self.tolerance)


@dataclass(frozen=True)
class BinaryForm:
    """``sum coeffs[k] * x^(degree-k) * y^k``."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need degree+1 coefficients")

    @classmethod
    def from_ternary(cls, p: TernaryPoly, first: str = "x", second: str = "y") -> "BinaryForm":
        i, j = VARS.index(first), VARS.index(second)
        if not p.is_homogeneous():
            raise ValueError("binary forms must be homogeneous")
        rest = [k for k in range(3) if k not in (i, j)][0]
        if any(e[rest] for e in p.terms):
            raise ValueError(f"form involves {VARS[rest]}")
        d = p.degree()
        co = [Fraction(0)] * (d + 1)
        for e, c in p.terms.items():
            co[e[j]] = c
        return cls(d, tuple(co))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


@dataclass(frozen=True)
class BinaryRoot:
    point: tuple  # projective (a, b): form vanishes at x=a, y=b
    multiplicity: int
    real: bool


def roots_binary(f: BinaryForm, tol: float = DEFAULT_TOL) -> list[BinaryRoot]:
    """Projective roots of a binary form, exact where the factorization allows.

    Linear factors give rational roots, quadratic factors give surd or
    conjugate complex roots; anything larger is solved numerically.
    """
    if f.is_zero():
        raise ValueError("zero form has no isolated roots")
    t = sympy.Symbol("t")
    d_field = surd.field_of(f.coeffs)
    # f(t, 1) drops degree by the multiplicity of the root at y = 0, i.e. (1, 0)
    expr = sum(
surd.to_sympy(c) * t ** (f.degree - k)
        for k, c in enumerate(f.coeffs)
    )
    kw = {} if d_field == 1 else {"extension": sympy.sqrt(d_field)}
    out: list[BinaryRoot] = []
    lead = next(k for k, c in enumerate(f.coeffs) if c != 0)
    if lead:
        out.append(BinaryRoot((Fraction(1), Fraction(0)), lead, True))
    if sympy.Poly(expr, t).degree() <= 0:
        return out
    _, facs = sympy.factor_list(expr, t, **kw)
    for fac, mult in facs:
        poly = sympy.Poly(fac, t)
        deg = poly.degree()
        if deg <= 0:
            continue
        cs = [surd.from_sympy(c) for c in poly.all_coeffs()]
        if deg == 1:
            out.append(BinaryRoot((-cs[1] / cs[0], Fraction(1)), mult, True))
            continue
        if deg == 2 and d_field == 1:
            a, b, c = cs
            disc = b * b - 4 * a * c
            if disc > 0:
                s = surd.sqrt_rational(disc)
                for sg in (1, -1):
                    out.append(BinaryRoot(((-b + sg * s) / (2 * a), Fraction(1)), mult, True))
                continue
        for r in np.roots([complex(float(c)) for c in cs]):
            ca = ComplexApprox(r.real, r.imag, tol)
            if ca.is_real:
                out.append(BinaryRoot((ca.re, 1.0), mult, True))
            else:
                out.append(BinaryRoot((ca, 1.0), mult, False))
    return out

"""Nets of quadrics, their Monge-form jets, discriminants and the orbit atlas."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from . import surd
from .poly import TernaryPoly, det3

MONOMIALS = ((2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2))
MONOMIAL_NAMES = ("xx", "xy", "yy", "xz", "yz", "zz")


class NetParseError(ValueError):
    """Malformed net JSON; the message names the offending field."""


class CorruptAtlas(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadraticTernaryForm:
    """Coefficients of x^2, xy, y^2, xz, yz, z^2 (as written, no doubling)."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 6:
            raise ValueError("a ternary quadratic form has six coefficients")
        object.__setattr__(self, "coeffs", tuple(_exact(c) for c in self.coeffs))

    @classmethod
    def from_poly(cls, p: TernaryPoly) -> "QuadraticTernaryForm":
        if not p.is_homogeneous(2) and not p.is_zero():
            raise ValueError(f"{p} is not a homogeneous quadratic")
        return cls(tuple(p.coeff(m) for m in MONOMIALS))

    @classmethod
    def parse(cls, text: str) -> "QuadraticTernaryForm":
        return cls.from_poly(TernaryPoly.parse(text))

    def to_poly(self) -> TernaryPoly:
        return TernaryPoly(dict(zip(MONOMIALS, self.coeffs)))

    def sym_matrix(self):
        """Symmetric matrix S with q(u) = u^T S u."""
        a, b, c, d, e, f = self.coeffs
        h = Fraction(1, 2)
        return [[a, b * h, d * h], [b * h, c, e * h], [d * h, e * h, f]]

    def hessian_entries(self):
        """(f_xx, f_yy, f_zz, f_xy, f_xz, f_yz) of the form."""
        a, b, c, d, e, f = self.coeffs
        return (2 * a, 2 * c, 2 * f, b, d, e)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def _exact(c):
    if isinstance(c, (Fraction, surd.Surd, float)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return surd.parse_number(c)
    return surd.from_sympy(c)


@dataclass(frozen=True)
class NetOfQuadrics:
    q1: QuadraticTernaryForm
    q2: QuadraticTernaryForm
    q3: QuadraticTernaryForm

    @classmethod
    def parse(cls, *texts: str) -> "NetOfQuadrics":
        """Build from three polynomial strings, e.g. ``parse("2*x*y", "2*x*z", "z**2")``."""
        if len(texts) != 3:
            raise ValueError("a net needs three quadrics")
        return cls(*(QuadraticTernaryForm.parse(t) for t in texts))

    @classmethod
    def from_polys(cls, polys: Sequence[TernaryPoly]) -> "NetOfQuadrics":
        return cls(*(QuadraticTernaryForm.from_poly(p) for p in polys))

    @classmethod
    def zero(cls) -> "NetOfQuadrics":
        zf = QuadraticTernaryForm((0,) * 6)
        return cls(zf, zf, zf)

    @property
    def forms(self) -> tuple:
        return (self.q1, self.q2, self.q3)

    @property
    def polys(self) -> tuple:
        return tuple(q.to_poly() for q in self.forms)

    def combination(self, lam, mu, nu) -> TernaryPoly:
        p1, p2, p3 = self.polys
        return p1 * lam + p2 * mu + p3 * nu

    def compose(self, m) -> "NetOfQuadrics":
        """Source change: the net u -> Q(m u)."""
        return NetOfQuadrics.from_polys([p.compose_linear(m) for p in self.polys])

    def mix(self, g) -> "NetOfQuadrics":
        """Target change: component i becomes sum_j g[i][j] q_j."""
        ps = self.polys
        return NetOfQuadrics.from_polys(
            [sum((ps[j] * g[i][j] for j in range(3)), TernaryPoly()) for i in range(3)]
        )

    def evaluate(self, u) -> tuple:
        return tuple(p(*u) for p in self.polys)

    def field(self) -> int:
        return surd.field_of(c for q in self.forms for c in q.coeffs)

    def is_exact(self) -> bool:
        return all(surd.is_exact(c) for q in self.forms for c in q.coeffs)

    def to_json(self) -> dict:
        return {f"q{i + 1}": [_fmt(c) for c in q.coeffs] for i, q in enumerate(self.forms)}

    @classmethod
    def from_json(cls, data) -> "NetOfQuadrics":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise NetParseError(f"net JSON is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise NetParseError("net JSON must be an object with keys q1, q2, q3")
        forms = []
        for key in ("q1", "q2", "q3"):
            if key not in data:
                raise NetParseError(f"missing field {key!r}")
            vals = data[key]
            if isinstance(vals, str):
                try:
                    forms.append(QuadraticTernaryForm.parse(vals))
                except Exception as exc:
                    raise NetParseError(f"field {key!r}: cannot parse polynomial {vals!r} ({exc})") from None
                continue
            if not isinstance(vals, list) or len(vals) != 6:
                raise NetParseError(f"field {key!r} must be a list of six coefficients [xx, xy, yy, xz, yz, zz]")
            coeffs = []
            for name, v in zip(MONOMIAL_NAMES, vals):
                try:
                    coeffs.append(_exact(str(v) if isinstance(v, (int, str)) else v))
                except Exception:
                    raise NetParseError(f"field {key!r}, coefficient {name}: cannot parse {v!r}") from None
            forms.append(QuadraticTernaryForm(tuple(coeffs)))
        return cls(*forms)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.polys) + ")"


def _fmt(c) -> str:
    return surd.format_number(c) if surd.is_exact(c) else repr(float(c))


@dataclass(frozen=True)
class SingularJet:
    """2-jet coefficients (l, m, n, p, q, r) of each of the three normal components.

    Component i of the corank-1 parametrization is
    ``(l x^2 + 2m xy + n y^2 + p z^2 + 2q xz + 2r yz) / 2``.
    """

    components: tuple  # three 6-tuples

    @classmethod
    def from_net(cls, net: NetOfQuadrics) -> "SingularJet":
        comps = []
        for q in net.forms:
            a, b, c, d, e, f = q.coeffs
            comps.append((2 * a, b, 2 * c, 2 * f, d, e))
        return cls(tuple(comps))

    def to_net(self) -> NetOfQuadrics:
        forms = []
        h = Fraction(1, 2)
        for l, m, n, p, q, r in self.components:
            forms.append(QuadraticTernaryForm((l * h, m, n * h, q, r, p * h)))
        return NetOfQuadrics(*forms)

    def linear_part(self) -> tuple:
        # the jet (x, y, f3, f4, f5) carries no linear terms in the normal slots
        return ((0, 0, 0),) * 3

    def z_coefficients_vanish(self) -> bool:
        return all(p == 0 and q == 0 and r == 0 for (_, _, _, p, q, r) in self.components)


@dataclass(frozen=True)
class MongeJet:
    """The regular 2-jet (x, y, z, q1, q2, q3) of a 3-manifold in R^6."""

    net: NetOfQuadrics

    @property
    def components(self) -> tuple:
        x, y, z = (TernaryPoly.var(v) for v in "xyz")
        return (x, y, z) + self.net.polys

    def is_totally_geodesic(self) -> bool:
        return all(q.is_zero() for q in self.net.forms)


def monge_embed(net: NetOfQuadrics) -> MongeJet:
    return MongeJet(net)


def net_discriminant(net: NetOfQuadrics) -> TernaryPoly:
    """det of the symmetric matrix of lam*q1 + mu*q2 + nu*q3.

    The result is returned as a cubic in (x, y, z) standing for (lam, mu, nu).
    """
    lam, mu, nu = (TernaryPoly.var(v) for v in "xyz")
    mats = [q.sym_matrix() for q in net.forms]
    m = [[lam * mats[0][i][j] + mu * mats[1][i][j] + nu * mats[2][i][j] for j in range(3)] for i in range(3)]
    return det3(m)


def same_up_to_unit(p: TernaryPoly, q: TernaryPoly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return p.normalized() == q.normalized()


def abc_family(c, g) -> NetOfQuadrics:
    """Net (2xz + y^2, 2yz, -x^2 - 2g y^2 + c z^2 + 2g xz)."""
    c, g = Fraction(c), Fraction(g)
    if c * (c + 9 * g * g) == 0:
        warnings.warn(f"(c, g) = ({c}, {g}) is outside the general-net region c(c+9g^2) != 0", stacklevel=2)
    return NetOfQuadrics(
        QuadraticTernaryForm((0, 0, 1, 2, 0, 0)),
        QuadraticTernaryForm((0, 0, 0, 0, 2, 0)),
        QuadraticTernaryForm((-1, 0, -2 * g, 2 * g, 0, c)),
    )


def abc_orbit_label(c, g) -> str:
    """Orbit name of the (c, g) member of the A/B/C family."""
    c, g = Fraction(c), Fraction(g)
    if c == 0 and g == 0:
        return "C"
    if g == 0:
        return "A_b" if c < 0 else "A_d"
    edge = -9 * g * g
    if c < edge:
        return "A_b"
    if c > 0:
        return "A_d"
    if g > 0:
        return "B_c" if c == edge else "A_c" if c < 0 else "B_a*"
    return "B_a" if c == edge else "A_a" if c < 0 else "B_c*"


# ---------------------------------------------------------------------------
# orbit atlas


@dataclass(frozen=True)
class GenericForm:
    label: str  # the locus kind the form realizes
    net: NetOfQuadrics


@dataclass(frozen=True)
class OrbitRecord:
    name: str
    codimension: int
    normal_form: NetOfQuadrics
    discriminant: TernaryPoly | None
    family: tuple | None = None  # (c, g) when the record is an A/B/C representative
    generic_forms: tuple = ()
    regular_kinds: frozenset = field(default_factory=frozenset)
    singular_kinds: frozenset = field(default_factory=frozenset)

    def generic_normal_form(self, label: str | None = None) -> NetOfQuadrics | None:
        for gf in self.generic_forms:
            if label is None or gf.label == label:
                return gf.net
        return None


def _parse_disc(text: str) -> TernaryPoly:
    return TernaryPoly.parse(text.replace("lam", "x").replace("mu", "y").replace("nu", "z"))


def load_atlas(data: dict) -> list[OrbitRecord]:
    """Build and validate records from the atlas JSON document."""
    if data.get("schema") != "orbit-atlas/1":
        raise CorruptAtlas(f"unknown atlas schema {data.get('schema')!r}")
    out = []
    for row in data["orbits"]:
        try:
            net = NetOfQuadrics.from_json(row["normal_form"])
            disc = _parse_disc(row["discriminant"]) if row.get("discriminant") is not None else None
            fam = tuple(Fraction(v) for v in row["family"]) if row.get("family") else None
            gens = tuple(GenericForm(g["label"], NetOfQuadrics.from_json(g["net"])) for g in row.get("generic_forms", []))
        except (KeyError, NetParseError) as exc:
            raise CorruptAtlas(f"row {row.get('name')!r}: {exc}") from None
        rec = OrbitRecord(
            name=row["name"],
            codimension=int(row["codimension"]),
            normal_form=net,
            discriminant=disc,
            family=fam,
            generic_forms=gens,
            regular_kinds=frozenset(row["regular"]),
            singular_kinds=frozenset(row["singular"]),
        )
        if disc is not None and not same_up_to_unit(net_discriminant(net), disc):
            raise CorruptAtlas(f"row {rec.name}: stored discriminant {disc} does not match the normal form")
        if fam is not None and abc_orbit_label(*fam) != rec.name:
            raise CorruptAtlas(f"row {rec.name}: family parameters {fam} lie in {abc_orbit_label(*fam)}")
        out.append(rec)
    return out


@lru_cache(maxsize=1)
def orbit_table() -> tuple[OrbitRecord, ...]:
    text = resources.files("curvature_locus").joinpath("data/orbits.json").read_text()
    return tuple(load_atlas(json.loads(text)))


def orbit(name: str) -> OrbitRecord:
    for rec in orbit_table():
        if rec.name == name:
            return rec
    raise KeyError(f"unknown orbit {name!r}")

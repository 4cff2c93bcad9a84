"""Projection of a regular 3-manifold jet along a tangent direction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg, surd
from .classifier import SingularLocusReport, classify_regular, classify_singular
from .determinantal import delta, jacobian
from .net_model import NetOfQuadrics
from .poly import DEFAULT_TOL


@dataclass(frozen=True)
class TangentDirection:
    v: tuple

    def __post_init__(self):
        vals = tuple(Fraction(c) if isinstance(c, int) else c for c in self.v)
        object.__setattr__(self, "v", vals)
        if len(vals) != 3:
            raise ValueError("a tangent direction has three components")
        if self.exact:
            try:
                n = sum((c * c for c in vals), Fraction(0))
            except surd.FieldMismatch:
                n = None
            if n is not None:
                if n != 1:
                    raise ValueError(f"direction {self} is not a unit vector")
                return
        if abs(sum(float(c) ** 2 for c in vals) - 1) > 1e-9:
            raise ValueError(f"direction {self} is not a unit vector")

    @property
    def exact(self) -> bool:
        return all(surd.is_exact(c) for c in self.v)

    @classmethod
    def parse(cls, text: str) -> "TangentDirection":
        """Comma separated components: ``"sqrt(2)/4,sqrt(2)/4,sqrt(3)/2"`` or decimals."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated components, got {text!r}")
        vals = []
        for p in parts:
            try:
                vals.append(surd.parse_number(p))
            except Exception:
                raise ValueError(f"cannot parse direction component {p!r}") from None
        return cls(tuple(vals))

    def projective(self) -> tuple:
        """A nonzero multiple of v whose coordinates share one quadratic field (floats if none exists)."""
        if not self.exact:
            return tuple(float(c) for c in self.v)
        try:
            surd.field_of(self.v)
            return self.v
        except surd.FieldMismatch:
            pass
        # divide by a Surd coordinate, e.g. (sqrt2/4, sqrt2/4, sqrt3/2) -> (1, 1, sqrt6)
        for c in self.v:
            if isinstance(c, surd.Surd) and c.a == 0:
                try:
                    w = tuple(_div_pure(x, c) for x in self.v)
                    surd.field_of(w)
                    return w
                except (surd.FieldMismatch, ValueError):
                    continue
        return tuple(float(c) for c in self.v)

    def __str__(self):
        return "(" + ", ".join(surd.format_number(c) if surd.is_exact(c) else repr(c) for c in self.v) + ")"


def _div_pure(x, c):
    """x / (b sqrt(d)) for x = a' + b' sqrt(d') with a' = 0 or d' handled exactly."""
    if not isinstance(x, surd.Surd):
        return x / c
    if x.d == c.d:
        return x / c
    if x.a != 0:
        raise ValueError("mixed irrational part")
    # (b1 sqrt d1) / (b2 sqrt d2) = (b1 / (b2 d2)) sqrt(d1 d2)
    s, d = surd.squarefree_split(x.d * c.d)
    return surd.make(0, x.b / (c.b * c.d) * s, d)


def is_asymptotic(net: NetOfQuadrics, v: TangentDirection, tol: float = DEFAULT_TOL) -> bool:
    w = v.projective()
    val = delta(net)(*w)
    if surd.is_exact(val):
        return val == 0
    return abs(float(val)) <= tol * max(1.0, float(np.linalg.norm([float(c) for c in w]))) ** 3


def rotate_to_pole(v: TangentDirection):
    """Orthogonal T with T v = (0, 0, 1) (rotation about v x e3).

    Exact when the entries share one quadratic field, floats otherwise.
    """
    a = list(v.v)
    if all(c == 0 for c in a[:2]):
        if a[2] > 0:
            return linalg.identity(3)
        return [[Fraction(1), 0, 0], [0, Fraction(-1), 0], [0, 0, Fraction(-1)]]
    try:
        surd.field_of(a)
        exact = v.exact
    except surd.FieldMismatch:
        exact = False
    if not exact:
        a = [float(c) for c in a]
    cx, cy = a[1], -a[0]  # v x e3 = (v_y, -v_x, 0)
    k = [[0, 0, cy], [0, 0, -cx], [-cy, cx, 0]]
    k2 = linalg.matmul(k, k) if exact else (np.array(k, dtype=float) @ np.array(k, dtype=float)).tolist()
    f = 1 / (1 + a[2])
    out = [[(1 if i == j else 0) + k[i][j] + k2[i][j] * f for j in range(3)] for i in range(3)]
    if exact:
        return [[Fraction(c) if isinstance(c, int) else c for c in row] for row in out]
    return out


def transpose(m):
    return [list(r) for r in zip(*m)]


@dataclass(frozen=True)
class ProjectionReport:
    direction: TangentDirection
    asymptotic: bool
    rotated_net: NetOfQuadrics
    rotation: tuple
    alpha_prime: tuple
    singular_report: SingularLocusReport
    isomorphic_to_regular: bool


def project_direction(net: NetOfQuadrics, w, seed: int = 0, tol: float = DEFAULT_TOL) -> SingularLocusReport:
    """Singular census of the projection along the (not necessarily unit) direction w."""
    return classify_singular(net, seed, null_direction=tuple(w), tol=tol)


def project_along(net: NetOfQuadrics, v: TangentDirection, seed: int = 0, tol: float = DEFAULT_TOL) -> ProjectionReport:
    """Rotate v to the pole, record the projected jet and compare its census with the sphere's."""
    rot = rotate_to_pole(v)
    exact_rot = all(surd.is_exact(c) for row in rot for c in row)
    if exact_rot:
        try:
            rotated = net.compose(transpose(rot))
        except surd.FieldMismatch:
            exact_rot = False
    if not exact_rot:
        fnet = NetOfQuadrics.from_polys([p.map_coeffs(float) for p in net.polys])
        rotated = fnet.compose(transpose([[float(c) for c in row] for row in rot]))
    alpha = tuple(tuple(p(0, 0, 1) for p in row) for row in jacobian(rotated))
    w = v.projective()
    report = project_direction(net, w, seed, tol)
    asym = is_asymptotic(net, v)
    regular = classify_regular(net, seed, tol=tol)
    iso = regular.evidence is not None and report.evidence is not None and regular.evidence.census() == report.evidence.census()
    return ProjectionReport(v, asym, rotated, tuple(map(tuple, rot)), alpha, report, iso)


def alpha_determinant(alpha) -> float:
    m = np.array([[float(c) for c in row] for row in alpha])
    return float(np.linalg.det(m))

"""The 4x3 determinantal matrix of a net plus a constraint quadric, and its cubic minors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, surd
from .net_model import NetOfQuadrics, QuadraticTernaryForm
from .poly import TernaryPoly, det3

SPHERE = QuadraticTernaryForm((1, 0, 1, 0, 0, 1))
CYLINDER = QuadraticTernaryForm((1, 0, 1, 0, 0, 0))


class NotPositiveDefinite(ValueError):
    pass


def leading_minors(form: QuadraticTernaryForm) -> list:
    s = form.sym_matrix()
    m1 = s[0][0]
    m2 = s[0][0] * s[1][1] - s[0][1] * s[1][0]
    m3 = det3(s)
    return [m1, m2, m3.coeff((0, 0, 0))]


def is_positive_definite(form: QuadraticTernaryForm) -> bool:
    return all(surd.sign(m) > 0 for m in leading_minors(form))


@dataclass(frozen=True)
class ConstraintQuadric:
    kind: str  # "sphere" | "cylinder" | "generic"
    form: QuadraticTernaryForm

    @classmethod
    def sphere(cls):
        return cls("sphere", SPHERE)

    @classmethod
    def cylinder(cls):
        return cls("cylinder", CYLINDER)

    @classmethod
    def generic(cls, form):
        if not isinstance(form, QuadraticTernaryForm):
            form = QuadraticTernaryForm(tuple(form))
        if not is_positive_definite(form):
            raise NotPositiveDefinite(f"{form.to_poly()} is not positive definite")
        return cls("generic", form)

    def gradient(self) -> list:
        p = self.form.to_poly()
        return [p.diff(v) for v in "xyz"]


@dataclass(frozen=True)
class DeterminantalMatrix:
    rows: tuple  # four rows of three degree-1 TernaryPoly entries


@dataclass(frozen=True)
class CubicSystem:
    delta: TernaryPoly
    delta1: TernaryPoly
    delta2: TernaryPoly
    delta3: TernaryPoly

    @property
    def cubics(self) -> tuple:
        return (self.delta, self.delta1, self.delta2, self.delta3)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.cubics)


def jacobian(net: NetOfQuadrics) -> list:
    return [[p.diff(v) for v in "xyz"] for p in net.polys]


def build_matrix(net: NetOfQuadrics, constraint: ConstraintQuadric | None = None) -> DeterminantalMatrix:
    constraint = constraint or ConstraintQuadric.sphere()
    if constraint.kind == "generic" and not is_positive_definite(constraint.form):
        raise NotPositiveDefinite("generic constraint must be positive definite")
    rows = jacobian(net) + [constraint.gradient()]
    return DeterminantalMatrix(tuple(tuple(r) for r in rows))


def minors(m: DeterminantalMatrix) -> CubicSystem:
    """delta = rows 1-3; delta_i drops net row i, remaining rows kept in order."""
    r = m.rows
    delta = det3([r[0], r[1], r[2]])
    d1 = det3([r[1], r[2], r[3]])
    d2 = det3([r[0], r[2], r[3]])
    d3 = det3([r[0], r[1], r[3]])
    return CubicSystem(delta, d1, d2, d3)


def cubic_system(net: NetOfQuadrics, constraint: ConstraintQuadric | None = None) -> CubicSystem:
    return minors(build_matrix(net, constraint))


def delta(net: NetOfQuadrics) -> TernaryPoly:
    """Jacobian determinant of the net."""
    return det3(jacobian(net))


# -- substantiality -------------------------------------------------------------


@dataclass(frozen=True)
class SubstantialityReport:
    first_normal_rank: int
    augmented_rank: int
    substantial: bool
    planar_functional: tuple | None = None  # (a, b, c, d): a q1 + b q2 + c q3 = d (x^2+y^2+z^2)


def substantiality(net: NetOfQuadrics, constraint: ConstraintQuadric | None = None) -> SubstantialityReport:
    base = (constraint or ConstraintQuadric.sphere()).form
    vecs = [list(q.coeffs) for q in net.forms]
    r1 = linalg.rank(vecs)
    aug = vecs + [list(base.coeffs)]
    r = linalg.rank(aug)
    witness = None
    if r < 4:
        # columns are the four generators; a kernel vector (a, b, c, -d)
        cols = [[aug[j][i] for j in range(4)] for i in range(6)]
        kernel = [v for v in linalg.nullspace(cols, 4) if any(c != 0 for c in v[:3])]
        # prefer a functional that sees the sphere (an honest affine plane)
        kernel.sort(key=lambda v: v[3] == 0)
        if kernel:
            v = kernel[0]
            s = -1 / v[3] if v[3] != 0 else 1
            witness = (v[0] * s, v[1] * s, v[2] * s, -v[3] * s)
    return SubstantialityReport(r1, r, r == 4, witness)


# -- basis of the regular curvature-locus parametrization ----------------------------


def eta_basis(net: NetOfQuadrics) -> dict:
    """H and B1..B5 from the second derivatives of the Monge-form components."""
    hs = [q.hessian_entries() for q in net.forms]  # (fxx, fyy, fzz, fxy, fxz, fyz)

    def vec(fn):
        return tuple(fn(*h) for h in hs)

    third, twelfth, half = Fraction(1, 3), Fraction(1, 12), Fraction(1, 2)
    return {
        "H": vec(lambda a, b, c, d, e, f: third * (a + b + c)),
        "B1": vec(lambda a, b, c, d, e, f: twelfth * (-a - b + 2 * c)),
        "B2": vec(lambda a, b, c, d, e, f: half * (a - b)),
        "B3": vec(lambda a, b, c, d, e, f: d),
        "B4": vec(lambda a, b, c, d, e, f: e),
        "B5": vec(lambda a, b, c, d, e, f: f),
    }

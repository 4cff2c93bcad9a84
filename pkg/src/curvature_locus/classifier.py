"""Turn a variety decomposition into a curvature-locus type."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, surd
from .determinantal import ConstraintQuadric, cubic_system, delta, eta_basis, substantiality
from .net_model import NetOfQuadrics, SingularJet, orbit
from .poly import DEFAULT_TOL
from .variety import DegenerateSystem, VarietyDecomposition, decompose

KINDS = ("RomanSteiner", "CrossCapSurface", "Type5", "Type6", "TruncatedCone", "Ellipsoid", "Planar", "Degenerate")
SINGULARITY_BY_MULTIPLICITY = {1: "CC", 2: "TCC", 3: "DTCC"}


class TableViolation(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


@dataclass(frozen=True)
class LocusClassification:
    kind: str
    evidence: VarietyDecomposition | None
    substantial: bool
    notes: tuple = ()


def kind_from_evidence(dec: VarietyDecomposition) -> str:
    """The decision table: census of lines and planes to surface type."""
    real = dec.real_lines
    cplx = dec.complex_pairs
    if dec.planes:
        # only the real off-plane lines matter here; complex ones ride along
        if len(dec.planes) == 1 and len(real) == 1:
            return "TruncatedCone"
        if len(dec.planes) == 1 and not real:
            return "Ellipsoid"
        return "Degenerate"
    mults = sorted(l.multiplicity for l in real)
    if not cplx and mults == [1] * 6:
        return "RomanSteiner"
    if mults == [1, 1] and len(cplx) == 2 and all(c.multiplicity == 1 for c in cplx):
        return "CrossCapSurface"
    if not cplx and mults == [1, 1, 2, 2]:
        return "Type5"
    if not cplx and mults == [3, 3]:
        return "Type6"
    return "Degenerate"


def classify_regular(
    net: NetOfQuadrics, seed: int = 0, constraint: ConstraintQuadric | None = None, tol: float = DEFAULT_TOL
) -> LocusClassification:
    constraint = constraint or ConstraintQuadric.sphere()
    sub = substantiality(net, constraint)
    if not sub.substantial:
        note = f"locus lies in an affine plane (functional {sub.planar_functional})" if sub.planar_functional else "first normal space has rank < 3"
        return LocusClassification("Planar", None, False, (note,))
    try:
        dec = decompose(cubic_system(net, constraint), seed, tol)
    except DegenerateSystem as exc:
        return LocusClassification("Degenerate", None, True, (str(exc),))
    kind = kind_from_evidence(dec)
    notes = ()
    if kind == "Degenerate":
        notes = (f"census {dec.census()} with {len(dec.planes)} plane(s) matches no row",)
    return LocusClassification(kind, dec, True, notes)


def check_mixed_terms_criterion(net: NetOfQuadrics, seed: int = 0):
    """Vanishing H, B1, B2 with independent B3, B4, B5 forces a Roman Steiner locus."""
    b = eta_basis(net)
    zero = all(v == 0 for key in ("H", "B1", "B2") for v in b[key])
    holds = zero and linalg.rank([list(b["B3"]), list(b["B4"]), list(b["B5"])]) == 3
    cls = classify_regular(net, seed)
    if holds:
        assert cls.kind == "RomanSteiner", f"hypothesis holds but locus is {cls.kind}"
    return holds, cls


check_prop36 = check_mixed_terms_criterion  # name used by the operations list


# -- singular (cylinder) case --------------------------------------------------------


@dataclass(frozen=True)
class SingularLocusReport:
    finite_singularities: tuple  # (type, line record)
    at_infinity: tuple
    planar_kind: str | None
    asymptotic_projection: bool
    evidence: VarietyDecomposition | None = None
    notes: tuple = ()

    def counts(self) -> Counter:
        return Counter(t for t, _ in self.finite_singularities)

    @property
    def label(self) -> str:
        """Short census label such as ``"2 CC and 2 TCC"`` or the planar kind."""
        if self.planar_kind:
            return self.planar_kind
        c = self.counts()
        parts = [f"{c[t]} {t}" for t in ("CC", "TCC", "DTCC") if c[t]]
        return " and ".join(parts) if parts else "no finite singularities"


def _parallel(line, w) -> bool:
    if not line.is_real:
        return False
    d = line.direction
    if line.exact:
        try:
            cross = (d[1] * w[2] - d[2] * w[1], d[2] * w[0] - d[0] * w[2], d[0] * w[1] - d[1] * w[0])
            return all(c == 0 for c in cross)
        except surd.FieldMismatch:
            pass
    import numpy as np

    a = line.unit_direction()
    b = np.array([float(c) for c in w])
    return float(np.linalg.norm(np.cross(a, b / np.linalg.norm(b)))) < 1e-9


def _planar_kind(net: NetOfQuadrics, w) -> str:
    """Bounded and conic, unbounded, or neither, for a locus with non-isolated singularities."""
    # the locus is bounded on the cylinder iff the net is blind to the null direction w
    polys = net.polys
    grads_w = [sum((p.diff(v) * c for v, c in zip("xyz", w)), start=polys[0] * 0) for p in polys]
    if any(not g.is_zero() for g in grads_w):
        return "Paraboloid"
    # net factors through the plane orthogonal to w; pick a basis (e1, e2) of it
    e1, e2 = _orthogonal_pair(w)
    # on u = a e1 + b e2 each q is A a^2 + B ab + C b^2 up to the scale of e1, e2
    rows_u, rows_v = [], []
    for p in polys:
        a_ = p(*e1)
        c_ = p(*e2)
        b_ = p(*(e1[i] + e2[i] for i in range(3))) - a_ - c_
        rows_u.append(a_ - c_)
        rows_v.append(b_)
    import numpy as np

    m = np.array([[float(v) for v in rows_u], [float(v) for v in rows_v]])
    sv = np.linalg.svd(m, compute_uv=False)
    return "Ellipse" if sv[-1] > 1e-9 * max(sv[0], 1.0) else "PlanarOther"


def _orthogonal_pair(w):
    w = [c for c in w]
    # a vector not parallel to w, then Gram-Schmidt without normalization (scales cancel in the rank test)
    idx = min(range(3), key=lambda i: abs(float(w[i])))
    e = [Fraction(0)] * 3
    e[idx] = Fraction(1)
    ww = sum((c * c for c in w), Fraction(0))
    ew = sum((a * b for a, b in zip(e, w)), Fraction(0))
    e1 = [a * ww - b * ew for a, b in zip(e, w)]
    e2 = [w[1] * e1[2] - w[2] * e1[1], w[2] * e1[0] - w[0] * e1[2], w[0] * e1[1] - w[1] * e1[0]]
    # e1 and e2 are orthogonal; equalize their lengths so a e1 + b e2 traces a round circle
    n1 = sum((c * c for c in e1), Fraction(0))
    n2 = sum((c * c for c in e2), Fraction(0))
    try:
        scale = surd.sqrt_rational(n1 / n2) if surd.field_of([n1, n2]) == 1 else (float(n1) / float(n2)) ** 0.5
    except (TypeError, surd.FieldMismatch):
        scale = (float(n1) / float(n2)) ** 0.5
    e2 = [c * scale for c in e2]
    return e1, e2


def cylinder_constraint(w) -> ConstraintQuadric:
    """|u|^2 |w|^2 - (w.u)^2, whose zero-one level set is the cylinder around w (up to scale)."""
    from .net_model import QuadraticTernaryForm

    ww = sum((c * c for c in w), Fraction(0))
    a, b, c = w
    form = QuadraticTernaryForm(
        (ww - a * a, -2 * a * b, ww - b * b, -2 * a * c, -2 * b * c, ww - c * c)
    )
    return ConstraintQuadric("cylinder", form)


def classify_singular(obj, seed: int = 0, null_direction=(0, 0, 1), tol: float = DEFAULT_TOL) -> SingularLocusReport:
    """Singularities of the locus on the cylinder around ``null_direction``.

    ``obj`` is a :class:`SingularJet` or a net; with the default direction the
    cylinder is x^2 + y^2 = 1.
    """
    net = obj.to_net() if isinstance(obj, SingularJet) else obj
    w = tuple(Fraction(c) if isinstance(c, int) else c for c in null_direction)
    constraint = ConstraintQuadric.cylinder() if w == (0, 0, 1) else cylinder_constraint(w)
    asym = delta(net)(*w) == 0 if all(surd.is_exact(c) for c in w) else abs(float(delta(net)(*w))) < 1e-9
    try:
        dec = decompose(cubic_system(net, constraint), seed, tol)
    except DegenerateSystem as exc:
        return SingularLocusReport((), (), _planar_kind(net, w), asym, None, (str(exc),))
    finite, infinite = [], []
    for line in dec.real_lines:
        if _parallel(line, w):
            infinite.append(line)
        else:
            finite.append((SINGULARITY_BY_MULTIPLICITY.get(line.multiplicity, f"m{line.multiplicity}"), line))
    planar = _planar_kind(net, w) if dec.planes else None
    return SingularLocusReport(tuple(finite), tuple(infinite), planar, asym, dec)


# -- census over random generic constraints ---------------------------------------------


def random_upper_triangular(rng: random.Random):
    """Rational upper-triangular matrix with positive diagonal and nonzero off-diagonal entries.

    Zero or repeated entries make special constraints (and special loci) far too likely.
    """
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        m[i][i] = Fraction(rng.randint(1, 20), rng.randint(1, 7))
        for j in range(i + 1, 3):
            m[i][j] = Fraction(rng.choice((-1, 1)) * rng.randint(1, 12), rng.randint(1, 7))
    return m


def random_unit_direction(rng: random.Random):
    """Rational point on the unit sphere (inverse stereographic projection)."""
    a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    b = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    n = 1 + a * a + b * b
    return (2 * a / n, 2 * b / n, (1 - a * a - b * b) / n)


def generic_census(name: str, trials: int = 20, seed: int = 0, mode: str = "regular") -> set:
    """Locus kinds seen over random positive-definite constraints for one orbit.

    Raises :class:`TableViolation` when a kind falls outside the orbit's table row.
    """
    from .generic_orbits import GenericTransform, apply_generic
    from .projection import project_direction

    if mode not in ("regular", "singular"):
        raise ValueError(f"unknown mode {mode!r}")
    rec = orbit(name)
    allowed = rec.regular_kinds if mode == "regular" else rec.singular_kinds
    rng = random.Random(f"census:{name}:{mode}:{seed}")
    seen = set()
    for trial in range(trials):
        s = random_upper_triangular(rng)
        t = GenericTransform.from_matrix(s)
        net = apply_generic(rec.normal_form, t)
        witness = {"orbit": name, "trial": trial, "T": [[str(v) for v in row] for row in s]}
        if mode == "regular":
            kind = classify_regular(net, seed + trial).kind
        else:
            if name == "I":
                # every direction is asymptotic; project along the kernel of the net
                w = tuple(s[i][2] for i in range(3))
            else:
                d = delta(net)
                while True:
                    w = random_unit_direction(rng)
                    if d(*w) != 0:
                        break
            witness["direction"] = [str(v) for v in w]
            kind = project_direction(net, w, seed + trial).label
        if kind not in allowed:
            raise TableViolation(f"orbit {name} ({mode}) produced {kind}, table allows {sorted(allowed)}", witness)
        seen.add(kind)
    return seen

"""Generic positive-definite constraints, the A/B/C region analysis and table checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import linalg, surd
from .classifier import TableViolation, classify_regular, generic_census
from .determinantal import ConstraintQuadric, NotPositiveDefinite, cubic_system, is_positive_definite
from .net_model import NetOfQuadrics, QuadraticTernaryForm, abc_family, abc_orbit_label, orbit_table
from .variety import DegenerateSystem, decompose

FLOAT_TOL = 1e-12


def _form_of(m) -> QuadraticTernaryForm:
    """The quadratic form |m u|^2."""
    a = linalg.matmul([list(r) for r in zip(*m)], m)  # m^T m
    return QuadraticTernaryForm((a[0][0], 2 * a[0][1], a[1][1], 2 * a[0][2], 2 * a[1][2], a[2][2]))


@dataclass(frozen=True)
class GenericTransform:
    """T with |T u|^2 = p(u); ``T_inv`` carries a net to its normal form on the round sphere."""

    p: ConstraintQuadric
    T: tuple
    T_inv: tuple
    exact: bool

    def __post_init__(self):
        rho_t = _form_of([list(r) for r in self.T])
        if self.exact:
            if tuple(rho_t.coeffs) != tuple(self.p.form.coeffs):
                raise ValueError("T does not pull the sphere back to p")
        else:
            err = max(abs(float(a) - float(b)) for a, b in zip(rho_t.coeffs, self.p.form.coeffs))
            if err > 1e-9:
                raise ValueError(f"T misses p by {err:.3g}")

    @classmethod
    def from_matrix(cls, s) -> "GenericTransform":
        """Wrap an invertible matrix S; the constraint becomes |S u|^2."""
        s = [[Fraction(c) if isinstance(c, int) else c for c in row] for row in s]
        exact = all(surd.is_exact(c) for row in s for c in row)
        form = _form_of(s) if exact else _form_of(np.array(s, dtype=float).tolist())
        if exact:
            inv = linalg.inverse(s)
        else:
            inv = np.linalg.inv(np.array(s, dtype=float)).tolist()
        return cls(ConstraintQuadric("generic", form), tuple(map(tuple, s)), tuple(map(tuple, inv)), exact)

    def is_identity(self) -> bool:
        return all(self.T[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))


def _ldl(a):
    """a = L D L^T with unit lower-triangular L, exact."""
    n = 3
    lo = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        d[j] = a[j][j] - sum((lo[j][k] * lo[j][k] * d[k] for k in range(j)), Fraction(0))
        if surd.sign(d[j]) <= 0:
            raise NotPositiveDefinite("pivot is not positive")
        for i in range(j + 1, n):
            lo[i][j] = (a[i][j] - sum((lo[i][k] * lo[j][k] * d[k] for k in range(j)), Fraction(0))) / d[j]
    return lo, d


def generic_transform(p) -> GenericTransform:
    """Upper-triangular T with positive diagonal and |T u|^2 = p(u).

    Exact when the pivots' square roots live in one quadratic field, floats otherwise.
    """
    if not isinstance(p, ConstraintQuadric):
        p = ConstraintQuadric.generic(p)
    if not is_positive_definite(p.form):
        raise NotPositiveDefinite(f"{p.form.to_poly()} is not positive definite")
    a = p.form.sym_matrix()
    lo, d = _ldl(a)
    try:
        roots = [surd.sqrt_rational(v) for v in d]
        surd.field_of(roots + [c for row in lo for c in row])
        t = [[roots[i] * lo[j][i] for j in range(3)] for i in range(3)]
        return GenericTransform.from_matrix(t)
    except (TypeError, ValueError, surd.FieldMismatch):
        pass
    chol = np.linalg.cholesky(np.array([[float(c) for c in row] for row in a]))
    t = chol.T
    inv = np.linalg.inv(t)
    form = QuadraticTernaryForm(tuple(float(c) for c in p.form.coeffs))
    return GenericTransform(
        ConstraintQuadric("generic", form), tuple(map(tuple, t.tolist())), tuple(map(tuple, inv.tolist())), False
    )


def apply_generic(net: NetOfQuadrics, t: GenericTransform, check: bool = False) -> NetOfQuadrics:
    """Net whose sphere locus equals the locus of ``net`` on {p = 1}."""
    if t.exact:
        out = net.compose([list(r) for r in t.T_inv])
    else:
        fnet = NetOfQuadrics.from_polys([q.map_coeffs(float) for q in net.polys])
        out = fnet.compose([list(r) for r in t.T_inv])
    if check and t.exact:
        a = classify_regular(net, 0, t.p)
        b = classify_regular(out, 0)
        if a.kind != b.kind or (a.evidence and b.evidence and a.evidence.census() != b.evidence.census()):
            raise AssertionError(f"constraint {t.p.form.to_poly()} gives {a.kind}, transformed net gives {b.kind}")
    return out


# -- the A/B/C family ---------------------------------------------------------------------


@dataclass(frozen=True)
class ABCRegionReport:
    c: Fraction
    g: Fraction
    orbit: str
    sigma: Fraction
    delta_xi: Fraction  # the closed form as usually printed
    xi_discriminant: Fraction  # discriminant of xi recomputed from its coefficients
    xi: str | None
    predicted_real_solution_count: int | None
    boundary: bool

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "g": str(self.g),
            "orbit": self.orbit,
            "sigma": str(self.sigma),
            "delta_xi": str(self.delta_xi),
            "xi_discriminant": str(self.xi_discriminant),
            "xi": self.xi,
            "predicted_real_solution_count": self.predicted_real_solution_count,
            "boundary": self.boundary,
        }


def abc_region(c, g) -> ABCRegionReport:
    """Predicted number of real singular directions for the (c, g) family member.

    z = 0 always contributes two lines; the cone (c+1) z^2 + (3g-1) y^2 = 0 is real
    only for sigma < 0 and then meets xi in 4 (or 2, tangentially) more.
    """
    c, g = Fraction(c), Fraction(g)
    sigma = (c + 1) * (3 * g - 1)
    printed = c * c + 2 * c + 1 + 36 * g * g + 12 * g + 12 * g * c - 4 * c
    disc = (c + 6 * g - 1) ** 2
    xi = None
    if 3 * g != 1:
        x, z = sympy.symbols("x z")
        k1 = sympy.Rational((c + 1) / (3 * g - 1))
        k2 = sympy.Rational((3 * g + c) / (3 * g - 1))
        xi = str(sympy.expand(x**2 + k1 * x * z - k2 * z**2))
    boundary = sigma == 0 or c * (c + 9 * g * g) == 0
    if 3 * g == 1 or c == -1:
        pred = None
    elif sigma > 0:
        pred = 2
    else:
        pred = 2 + (4 if disc > 0 else 2)
    return ABCRegionReport(c, g, abc_orbit_label(c, g), sigma, printed, disc, xi, pred, boundary)


def abc_grid(width: int = 21):
    """Rational grid points (c, g) in [-2, 2]^2 off the boundary curves."""
    step = Fraction(4, width - 1)
    for i in range(width):
        for j in range(width):
            g = -2 + i * step
            c = -2 + j * step
            r = abc_region(c, g)
            if r.boundary or r.predicted_real_solution_count is None or r.delta_xi == 0 or r.xi_discriminant == 0:
                continue
            yield c, g


def check_abc_point(c, g, seed: int = 0) -> tuple[int, int | None]:
    """(observed, predicted) real-line counts for one family member."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        net = abc_family(c, g)
    dec = decompose(cubic_system(net), seed)
    return len(dec.real_lines), abc_region(c, g).predicted_real_solution_count


# -- table verification ------------------------------------------------------------------------

_SINGULAR_OF = {
    "RomanSteiner": "6 CC",
    "CrossCapSurface": "2 CC",
    "Type5": "2 CC and 2 TCC",
    "Type6": "2 DTCC",
    "TruncatedCone": "Ellipse",
    "Ellipsoid": "Paraboloid",
}


def _stored_form_kind(rec, gf, mode: str, seed: int) -> str:
    from .classifier import random_unit_direction
    from .determinantal import delta
    from .projection import project_direction

    if mode == "regular":
        return classify_regular(gf.net, seed).kind
    if rec.name == "I":
        # the net ignores z entirely; project along its kernel
        return project_direction(gf.net, (0, 0, 1), seed).label
    rng = random.Random(f"stored:{rec.name}:{gf.label}:{seed}")
    d = delta(gf.net)
    while True:
        w = random_unit_direction(rng)
        if d(*w) != 0:
            break
    return project_direction(gf.net, w, seed).label


def verify_tables(mode: str = "regular", seed: int = 0, grid: int = 0, trials: int = 20, orbits=None) -> dict:
    """Check every orbit row against its stored forms and a random census.

    All rows are examined; if anything falls outside its row a single
    :class:`TableViolation` is raised whose witness lists every offence and
    carries the partial report.
    """
    if mode not in ("regular", "singular"):
        raise ValueError(f"unknown mode {mode!r}")
    rows, violations = [], []
    for rec in orbit_table():
        if orbits is not None and rec.name not in orbits:
            continue
        stored = []
        for gf in rec.generic_forms:
            want = gf.label if mode == "regular" else _SINGULAR_OF[gf.label]
            got = _stored_form_kind(rec, gf, mode, seed)
            if got != want:
                violations.append(
                    {"orbit": rec.name, "stored_form": gf.label, "net": gf.net.to_json(), "expected": want, "got": got}
                )
            stored.append({"label": want, "observed": got})
        seen = set()
        if trials:
            try:
                seen = generic_census(rec.name, trials, seed, mode)
            except TableViolation as exc:
                violations.append(dict(exc.witness, message=str(exc)))
        rows.append({"orbit": rec.name, "stored_forms": stored, "census": sorted(seen)})
    report = {"mode": mode, "seed": seed, "trials": trials, "rows": rows}
    if grid:
        checked = 0
        for c, g in abc_grid(grid):
            try:
                obs, pred = check_abc_point(c, g, seed)
            except DegenerateSystem as exc:
                violations.append({"c": str(c), "g": str(g), "message": f"degenerate: {exc}"})
                continue
            if obs != pred:
                violations.append({"c": str(c), "g": str(g), "observed": obs, "predicted": pred})
            checked += 1
        report["abc_grid"] = {"width": grid, "points_checked": checked}
    report["violations"] = violations
    if violations:
        first = violations[0]
        raise TableViolation(
            f"{len(violations)} table violation(s); first: {first.get('message') or first}",
            {"violations": violations, "report": report},
        )
    return report

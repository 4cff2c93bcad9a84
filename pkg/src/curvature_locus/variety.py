"""Decomposition of the common zero set of four ternary cubics.

The projective solutions are found with a multiplication-matrix method:
in a degree ``t`` where the quotient ring has stabilized, multiplication by
``l/h`` (two random linear forms) is a linear operator whose eigenvalues are
the values of ``l/h`` at the solutions, with algebraic multiplicity equal to
the local multiplicity.  The characteristic polynomial is factored exactly and
each irreducible factor is turned into exact coordinate polynomials, which are
verified against the cubics modulo the factor.  Local multiplicities are
confirmed independently with a Macaulay dual-space computation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
import sympy

from . import linalg, surd
from .determinantal import CubicSystem
from .linalg import pdivmod, pmod, pmul, ptrim
from .poly import DEFAULT_TOL, ComplexApprox, TernaryPoly, factor_poly, gcd_poly, exact_divide


class DegenerateSystem(ValueError):
    """All four cubics vanish identically."""


class NonPlanarComponent(ValueError):
    """The common factor of the cubics has a non-linear irreducible part."""


class UnstableElimination(RuntimeError):
    """Two independently seeded eliminations disagree."""


class NotZeroDimensional(RuntimeError):
    pass


class MultiplicityOverflow(RuntimeError):
    pass


class MultiplicityMismatch(RuntimeError):
    pass


MAX_DEGREE = 8
MAX_DUAL_ORDER = 6


@dataclass(frozen=True)
class ProjectiveLineSolution:
    direction: tuple
    reality: str  # "real" | "complex-pair"
    multiplicity: int = 0
    exact: bool = True

    @property
    def is_real(self) -> bool:
        return self.reality == "real"

    def float_direction(self) -> np.ndarray:
        return np.array([complex(c) if isinstance(c, ComplexApprox) else float(c) for c in self.direction])

    def unit_direction(self) -> np.ndarray:
        v = self.float_direction().real
        return v / np.linalg.norm(v)

    def with_multiplicity(self, m: int) -> "ProjectiveLineSolution":
        return ProjectiveLineSolution(self.direction, self.reality, m, self.exact)


@dataclass(frozen=True)
class VarietyDecomposition:
    planes: tuple
    lines: tuple
    total_multiplicity: int
    zero_dimensional: bool
    off_plane: tuple = field(default=())  # complex or real points dropped because they lie on a plane

    @property
    def real_lines(self) -> list:
        return [l for l in self.lines if l.is_real]

    @property
    def complex_pairs(self) -> list:
        return [l for l in self.lines if not l.is_real]

    def census(self) -> list:
        """Sorted (multiplicity, reality) pairs."""
        return sorted((l.multiplicity, l.reality) for l in self.lines)


# -- planes ----------------------------------------------------------------------------


def plane_components(sys: CubicSystem):
    """Linear factors of the gcd of the cubics and the residual system."""
    cubics = sys.cubics
    if all(c.is_zero() for c in cubics):
        raise DegenerateSystem("all four minors vanish identically")
    g = gcd_poly(cubics)
    if g.degree() <= 0:
        return [], cubics
    planes = []
    for fac, _mult in factor_poly(g):
        if fac.degree() != 1:
            raise NonPlanarComponent(f"common factor {fac} is not a plane")
        planes.append(fac)
    residual = tuple(TernaryPoly() if c.is_zero() else exact_divide(c, g) for c in cubics)
    return planes, residual


def _fast(c):
    # gmpy2 rationals are an order of magnitude faster than Fraction in the dense loops
    return gmpy2.mpq(c.numerator, c.denominator) if isinstance(c, Fraction) else c


def _slow(c):
    return Fraction(int(c.numerator), int(c.denominator)) if isinstance(c, type(gmpy2.mpq())) else c


# -- quotient ring in a fixed degree ------------------------------------------------------


def monomials(deg: int) -> list:
    return [(i, j, deg - i - j) for i in range(deg, -1, -1) for j in range(deg - i, -1, -1)]


class _GradedPiece:
    """(R/J)_t for J generated by homogeneous polys of a common degree."""

    def __init__(self, gens, t, fast: bool = True):
        self.t = t
        self.fast = fast
        self.monos = monomials(t)
        self.index = {m: i for i, m in enumerate(self.monos)}
        rows = []
        e = gens[0].degree()
        if t >= e:
            for m in monomials(t - e):
                mono = TernaryPoly({m: 1})
                for g in gens:
                    rows.append(self.vector(mono * g))
        self.rows, self.pivots = linalg.rref(rows, len(self.monos)) if rows else ([], [])
        piv = set(self.pivots)
        self.standard = [i for i in range(len(self.monos)) if i not in piv]

    @property
    def dim(self) -> int:
        return len(self.standard)

    def vector(self, p: TernaryPoly) -> list:
        if not self.fast:
            v = [Fraction(0)] * len(self.monos)
            for e, c in p.terms.items():
                v[self.index[e]] = c
            return v
        v = [gmpy2.mpq(0)] * len(self.monos)
        for e, c in p.terms.items():
            v[self.index[e]] = _fast(c)
        return v

    def reduce(self, p: TernaryPoly) -> list:
        v = self.vector(p)
        for row, c in zip(self.rows, self.pivots):
            if v[c] != 0:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return [v[i] for i in self.standard]


def _mult_matrix(lin: TernaryPoly, src: _GradedPiece, dst: _GradedPiece):
    """Columns: images of the standard monomials of src under multiplication by lin."""
    cols = [dst.reduce(TernaryPoly({src.monos[i]: 1}) * lin) for i in src.standard]
    return [list(r) for r in zip(*cols)]


def _random_linear(rng: random.Random) -> TernaryPoly:
    while True:
        co = [rng.randint(-9, 9) for _ in range(3)]
        if any(co):
            return TernaryPoly({(1, 0, 0): co[0], (0, 1, 0): co[1], (0, 0, 1): co[2]})


# -- exact univariate factorization over the coefficient field -------------------------------


def _factor_univariate(p, d: int):
    t = sympy.Symbol("t")
    if d == 1:
        dom = sympy.QQ
        cs = [dom(int(c.numerator), int(c.denominator)) for c in reversed(p)]
    else:
        dom = sympy.QQ.algebraic_field(sympy.sqrt(d))
        cs = [dom.from_sympy(surd.to_sympy(c)) for c in reversed(p)]
    _, facs = sympy.Poly(cs, t, domain=dom).factor_list()
    out = []
    for f, e in facs:
        co = [surd.from_sympy(c) for c in reversed(f.all_coeffs())]
        if len(co) > 1:
            out.append((linalg.pmonic(co), e))
    return out


def _poly_mod_eval(f: TernaryPoly, coords, phi, fast: bool = False):
    """f(coords) reduced modulo phi, coords being univariate polys."""
    conv = _fast if fast else (lambda c: c)
    deg = f.degree()
    powers = []
    for c in coords:
        ps = [[conv(Fraction(1))]]
        for _ in range(deg):
            ps.append(pmod(pmul(ps[-1], c), phi))
        powers.append(ps)
    acc = []
    for (i, j, k), c in f.terms.items():
        term = pmul(pmul(powers[0][i], powers[1][j]), powers[2][k])
        acc = linalg.padd(acc, linalg.pscale(term, conv(c)))
    return pmod(acc, phi) if acc else acc


@dataclass
class _Cluster:
    """All solutions sharing one irreducible factor of the eigen polynomial."""

    phi: list
    mult: int
    coords: tuple  # three univariate polys r_x, r_y, r_z
    n_real: int


def _clusters(gens, t: int, rng: random.Random):
    d = surd.field_of(c for g in gens for c in g.terms.values())
    src = _GradedPiece(gens, t, d == 1)
    dst = _GradedPiece(gens, t + 1, d == 1)
    if src.dim != dst.dim:
        return None
    n = src.dim
    if n == 0:
        return []
    for _ in range(6):
        h = _random_linear(rng)
        a_h = _mult_matrix(h, src, dst)
        try:
            a_h_inv = linalg.inverse(a_h)
        except ZeroDivisionError:
            continue
        ell = _random_linear(rng)
        probe = sum((g * Fraction(rng.randint(1, 10**6)) for g in gens), TernaryPoly())
        m_l = linalg.matmul(a_h_inv, _mult_matrix(ell, src, dst))
        m_xyz = [linalg.matmul(a_h_inv, _mult_matrix(TernaryPoly.var(v), src, dst)) for v in "xyz"]
        # powers of M_l and the traces every later step is assembled from
        powers = [linalg.identity(n), m_l]
        for _j in range(2, n):
            powers.append(linalg.matmul(m_l, powers[-1]))
        p_sums = [linalg.trace(p) for p in powers] + [linalg.trace_product(m_l, powers[-1])]
        x_sums = [[linalg.trace_product(mx, p) for p in powers] for mx in m_xyz]
        chi = linalg.charpoly_from_power_sums(p_sums[1:], n)

        def tr_poly(q, sums):
            return sum((c * s for c, s in zip(q, sums)), Fraction(0))

        out = []
        ok = True
        for phi, e in _factor_univariate(chi, d):
            k = len(phi) - 1
            phi_e = linalg.ppow(phi, e)
            rest, r = pdivmod(chi, phi_e)
            assert not r
            _, _s, tt = linalg.pxgcd(phi_e, rest)
            proj = pmod(pmul(tt, rest), chi)
            shifted = [proj]
            for _j in range(2 * k):
                shifted.append(pmod([Fraction(0)] + shifted[-1], chi))
            hankel = [[tr_poly(shifted[i + j], p_sums) for j in range(k)] for i in range(k)]
            coords = []
            for sums in x_sums:
                rhs = [tr_poly(shifted[j], sums) for j in range(k)]
                try:
                    coords.append(ptrim(linalg.solve(hankel, rhs)))
                except ZeroDivisionError:
                    ok = False
                    break
            if not ok:
                break
            # one random combination of the generators stands in for all of them
            if _poly_mod_eval(probe, coords, phi, d == 1):
                ok = False
                break
            phi = [_slow(c) for c in phi]
            coords = tuple([_slow(c) for c in r] for r in coords)
            out.append(_Cluster(phi, e, coords, linalg.sturm_real_root_count(phi)))
        if ok:
            return out
    return None


def _signature(clusters):
    return sorted((len(c.phi) - 1, c.mult, c.n_real) for c in clusters)


def _normalize(vec, exact: bool, tol: float = DEFAULT_TOL):
    vals = list(vec)
    if exact:
        idx = max(i for i, v in enumerate(vals) if v != 0)
        piv = vals[idx]
        return tuple(v / piv for v in vals)
    arr = np.array([complex(v) for v in vals])
    scale = np.max(np.abs(arr))
    idx = max(i for i, v in enumerate(arr) if abs(v) > tol * scale)
    return tuple(arr / arr[idx])


def _mp(c):
    if isinstance(c, surd.Surd):
        return mpmath.mpf(c.a.numerator) / c.a.denominator + mpmath.mpf(c.b.numerator) / c.b.denominator * mpmath.sqrt(c.d)
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _records(cluster: _Cluster, tol: float) -> list:
    phi = cluster.phi
    k = len(phi) - 1
    d = surd.field_of(phi)
    roots_exact = None
    if k == 1:
        roots_exact = [-phi[0] / phi[1]]
    elif k == 2 and d == 1:
        c0, c1, c2 = phi
        disc = c1 * c1 - 4 * c0 * c2
        if disc > 0:
            s = surd.sqrt_rational(disc)
            roots_exact = [(-c1 + s) / (2 * c2), (-c1 - s) / (2 * c2)]
    out = []
    if roots_exact is not None:
        for lam in roots_exact:
            vec = [linalg.peval(r, lam) if r else Fraction(0) for r in cluster.coords]
            out.append(ProjectiveLineSolution(_normalize(vec, True), "real", cluster.mult, True))
        return out
    # high-precision roots: phi and the coordinate polynomials can carry large rationals
    with mpmath.workdps(60):
        coeffs = [_mp(c) for c in reversed(phi)]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=400)
        mcoords = [[_mp(c) for c in reversed(r)] for r in cluster.coords]
        vals = [[complex(mpmath.polyval(r, lam)) if r else 0.0 for r in mcoords] for lam in roots]
    roots = np.array([complex(r) for r in roots])
    order = np.argsort(np.abs(roots.imag))
    real_idx = set(order[: cluster.n_real].tolist())
    for i, lam in enumerate(roots):
        vec = vals[i]
        if i in real_idx:
            v = _normalize([complex(x).real for x in vec], False, tol)
            out.append(ProjectiveLineSolution(tuple(float(np.real(x)) for x in v), "real", cluster.mult, False))
        elif lam.imag > 0:
            v = _normalize(vec, False, tol)
            out.append(
                ProjectiveLineSolution(
                    tuple(ComplexApprox(float(x.real), float(x.imag), tol) for x in v), "complex-pair", cluster.mult, False
                )
            )
    return out


def _solve(gens, seed: int):
    """Clusters for a homogeneous system of equal-degree polys; None if no degree works."""
    e = gens[0].degree()
    rng = random.Random(seed)
    for t in range(max(e - 1, 1), MAX_DEGREE + 1):
        clusters = _clusters(gens, t, rng)
        if clusters is not None:
            return clusters
    return None


def _points(clusters) -> int:
    return sum(len(c.phi) - 1 for c in clusters)


def _agreed(gens, seed: int, first, tries: int = 6):
    """A cluster list that two seeded eliminations agree on.

    An unlucky linear form can only merge distinct points, so among the runs the
    finest signature seen twice wins.
    """
    runs = [first]
    for k in range(tries):
        new = _solve(gens, seed * 2 + 2 + 2 * k)
        if new is not None:
            runs.append(new)
        sigs = [_signature(r) for r in runs]
        agreed = [r for r, sg in zip(runs, sigs) if sigs.count(sg) > 1]
        if agreed:
            best = max(_points(r) for r in runs)
            agreed = [r for r in agreed if _points(r) == best]
            if agreed:
                return agreed[0]
    raise UnstableElimination(f"seeded eliminations disagree (seed {seed})")


def line_solutions(residual, seed: int = 0, tol: float = DEFAULT_TOL, with_multiplicity: bool = False) -> list:
    """Projective solutions of a system with finitely many common zeros.

    The returned records carry the eigen multiplicity when ``with_multiplicity``.
    """
    if isinstance(residual, CubicSystem):
        residual = residual.cubics
    gens = [g for g in residual if not g.is_zero()]
    if not gens:
        raise NotZeroDimensional("no nonzero equations")
    if any(g.degree() == 0 for g in gens):
        return []
    first = _solve(gens, seed * 2 + 1)
    if first is None:
        raise NotZeroDimensional("quotient ring did not stabilize; the solution set is not finite")
    first = _agreed(gens, seed, first)
    out = []
    for cl in first:
        for rec in _records(cl, tol):
            out.append(rec if with_multiplicity else rec.with_multiplicity(0))
    return out


# -- local multiplicity ----------------------------------------------------------------------


def _bmul(p, q):
    out: dict = {}
    for (a, b), c in p.items():
        for (e, f), g in q.items():
            key = (a + e, b + f)
            out[key] = out.get(key, 0) + c * g
    return out


def _local_chart(f: TernaryPoly, direction, w: int, conv=lambda c: c):
    """Bivariate expansion of f around direction in the chart coordinate w = 1."""
    others = [i for i in range(3) if i != w]
    lin = []
    for i in range(3):
        term = {(0, 0): conv(direction[i])}
        if i in others:
            term[(1, 0) if i == others[0] else (0, 1)] = 1
        lin.append(term)
    deg = f.degree()
    powers = []
    for term in lin:
        ps = [{(0, 0): 1}]
        for _ in range(deg):
            ps.append(_bmul(ps[-1], term))
        powers.append(ps)
    out: dict = {}
    for (i, j, k), c in f.terms.items():
        c = conv(c)
        for key, v in _bmul(_bmul(powers[0][i], powers[1][j]), powers[2][k]).items():
            out[key] = out.get(key, 0) + c * v
    return out


def _dual_dimension(charts, k: int, exact: bool, tol: float):
    cols = [(a, s - a) for s in range(k + 1) for a in range(s, -1, -1)]
    cidx = {c: i for i, c in enumerate(cols)}
    rows = []
    for f in charts:
        for s in range(k):
            for a in range(s + 1):
                beta = (a, s - a)
                row = [0] * len(cols)
                for (i, j), c in f.items():
                    key = (i + beta[0], j + beta[1])
                    if key in cidx:
                        row[cidx[key]] = c
                if any(v != 0 for v in row):
                    rows.append(row)
    if not rows:
        return len(cols)
    if exact:
        if any(isinstance(v, surd.Surd) for r in rows for v in r):
            rows = [[Fraction(v) if isinstance(v, int) else v for v in r] for r in rows]
        else:
            rows = [[gmpy2.mpq(v) for v in r] for r in rows]
        return len(cols) - linalg.rank(rows)
    arr = np.array(rows, dtype=complex)
    sv = np.linalg.svd(arr, compute_uv=False)
    scale = sv[0] if sv.size else 1.0
    rk = int(np.sum(sv > tol * max(scale, 1.0)))
    return len(cols) - rk


def local_multiplicity(sys, line: ProjectiveLineSolution, tol: float = 1e-8) -> int:
    """Dimension of the local algebra at a solution, via the Macaulay dual space."""
    polys = sys.cubics if isinstance(sys, CubicSystem) else tuple(sys)
    polys = [p for p in polys if not p.is_zero()]
    direction = list(line.direction)
    exact = line.exact
    if exact:
        try:
            surd.field_of(list(direction) + [c for p in polys for c in p.terms.values()])
        except surd.FieldMismatch:
            exact = False
    if not exact:
        direction = [complex(c) if isinstance(c, ComplexApprox) else complex(float(c)) for c in direction]
        polys = [p.map_coeffs(lambda c: complex(float(c))) for p in polys]
        w = int(np.argmax([abs(c) for c in direction]))
    else:
        w = max(range(3), key=lambda i: abs(float(direction[i])))
    piv = direction[w]
    direction = [c / piv for c in direction]
    conv = _fast if exact and surd.field_of(list(direction) + [c for p in polys for c in p.terms.values()]) == 1 else (lambda c: c)
    charts = [_local_chart(p, direction, w, conv) for p in polys]
    if exact:
        charts = [{k: v for k, v in ch.items() if v != 0} for ch in charts]
    else:
        charts = [{k: v for k, v in ch.items() if abs(v) > 1e-14} for ch in charts]
    prev = None
    for k in range(1, MAX_DUAL_ORDER + 1):
        dim = _dual_dimension(charts, k, exact, tol)
        if prev is not None and dim == prev:
            return dim
        prev = dim
    raise MultiplicityOverflow(f"dual space did not stabilize by order {MAX_DUAL_ORDER} at {line.direction}")


# -- full decomposition ------------------------------------------------------------------------


def _on_plane(line: ProjectiveLineSolution, plane: TernaryPoly, tol: float) -> bool:
    if line.exact:
        try:
            return plane(*line.direction) == 0
        except surd.FieldMismatch:
            pass
    v = line.float_direction()
    co = [complex(float(plane.coeff(e))) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    val = sum(c * x for c, x in zip(co, v))
    return abs(val) <= 1e-7 * np.linalg.norm(v) * max(1.0, np.linalg.norm(co))


def decompose(sys: CubicSystem, seed: int = 0, tol: float = DEFAULT_TOL) -> VarietyDecomposition:
    planes, residual = plane_components(sys)
    lines = line_solutions(residual, seed, tol, with_multiplicity=True) if _has_equations(residual) else []
    kept, dropped = [], []
    for rec in lines:
        (dropped if any(_on_plane(rec, p, tol) for p in planes) else kept).append(rec)
    checked = []
    for rec in kept:
        m = local_multiplicity(residual, rec)
        if m != rec.multiplicity:
            raise MultiplicityMismatch(
                f"line {rec.direction}: eigen multiplicity {rec.multiplicity}, dual-space multiplicity {m}"
            )
        if rec.reality == "complex-pair" and m == 2:
            raise MultiplicityMismatch(f"complex line {rec.direction} with multiplicity 2")
        checked.append(rec)
    checked.sort(key=_line_key)
    total = sum(r.multiplicity * (1 if r.is_real else 2) for r in checked)
    zero_dim = not planes
    if zero_dim and total != 6:
        raise MultiplicityMismatch(f"zero-dimensional system with total multiplicity {total} (expected 6)")
    return VarietyDecomposition(tuple(planes), tuple(checked), total, zero_dim, tuple(dropped))


def _has_equations(residual) -> bool:
    gens = [g for g in residual if not g.is_zero()]
    return bool(gens) and all(g.degree() > 0 for g in gens)


def _line_key(rec: ProjectiveLineSolution):
    v = rec.float_direction()
    return (rec.reality != "real", -rec.multiplicity, tuple(np.round(v.real, 9)), tuple(np.round(v.imag, 9)))

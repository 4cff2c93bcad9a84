"""Numerical side of the curvature locus: evaluation, a singular-point detector, meshes.

Everything here works in floating point and is deliberately independent of the
exact solver, so it can serve as a cross-check.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.optimize import least_squares

from .determinantal import eta_basis
from .net_model import NetOfQuadrics, SingularJet

DEFAULT_HEIGHT = 4.0


def _net_of(obj) -> NetOfQuadrics:
    return obj.to_net() if isinstance(obj, SingularJet) else obj


def _coeff_arrays(net: NetOfQuadrics):
    """Symmetric matrices A_i with q_i(u) = u^T A_i u, as a (3, 3, 3) float array."""
    return np.array([[[float(c) for c in row] for row in q.sym_matrix()] for q in net.forms])


def sphere_point(theta, phi):
    return np.array([math.cos(theta) * math.sin(phi), math.sin(theta) * math.sin(phi), math.cos(phi)])


def eta_regular(net: NetOfQuadrics, theta: float, phi: float, check: bool = True) -> np.ndarray:
    """II(u, u) = 2 Q(u) at u(theta, phi) on the unit sphere.

    With ``check`` the value is compared against the H/B expansion.
    """
    a = _coeff_arrays(net)
    u = sphere_point(theta, phi)
    val = 2 * np.einsum("kij,i,j->k", a, u, u)
    if check:
        exp = eta_expansion(net, theta, phi)
        if not np.allclose(val, exp, atol=1e-9 * max(1.0, float(np.abs(a).max()))):
            raise AssertionError(f"basis expansion {exp} disagrees with direct value {val}")
    return val


def eta_expansion(net: NetOfQuadrics, theta: float, phi: float) -> np.ndarray:
    """H + (1 + 3cos 2phi) B1 + cos 2theta sin^2 phi B2 + sin 2theta sin^2 phi B3
    + cos theta sin 2phi B4 + sin theta sin 2phi B5."""
    b = {k: np.array([float(c) for c in v]) for k, v in eta_basis(net).items()}
    s2 = math.sin(phi) ** 2
    return (
        b["H"]
        + (1 + 3 * math.cos(2 * phi)) * b["B1"]
        + math.cos(2 * theta) * s2 * b["B2"]
        + math.sin(2 * theta) * s2 * b["B3"]
        + math.cos(theta) * math.sin(2 * phi) * b["B4"]
        + math.sin(theta) * math.sin(2 * phi) * b["B5"]
    )


def eta_singular(obj, theta: float, c: float) -> np.ndarray:
    """sum (a^2 l + 2ab m + b^2 n + c^2 p + 2ac q + 2bc r) over the components, a = cos, b = sin."""
    jet = obj if isinstance(obj, SingularJet) else SingularJet.from_net(obj)
    a, b = math.cos(theta), math.sin(theta)
    out = []
    for l, m, n, p, q, r in jet.components:
        l, m, n, p, q, r = (float(v) for v in (l, m, n, p, q, r))
        out.append(a * a * l + 2 * a * b * m + b * b * n + c * c * p + 2 * a * c * q + 2 * b * c * r)
    return np.array(out)


# -- numeric singular points ---------------------------------------------------------------


@dataclass(frozen=True)
class NumericSingularities:
    directions: tuple  # unit vectors, one per antipodal pair
    parameters: tuple  # (theta, phi) or (theta, c) of each direction
    is_curve: bool  # a whole curve of rank-deficient points was detected
    residuals: tuple = ()

    def __len__(self):
        return len(self.directions)


def _tangent_frames(u):
    """Orthonormal (e1, e2) spanning u-perp for a batch of unit vectors u (n, 3)."""
    helper = np.where(np.abs(u[:, [2]]) < 0.9, np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
    e1 = np.cross(u, helper)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(u, e1)
    return e1, e2


def _jac(a, u):
    """Jacobian of u -> Q(u) (up to the factor 2), batch (n, 3, 3)."""
    return np.einsum("kij,nj->nki", a, u)


def _canonical(v):
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v if v[k] > 0 else -v


def _cluster(dirs, tol=1e-4):
    out = []
    for v in dirs:
        if not any(min(np.linalg.norm(v - w), np.linalg.norm(v + w)) < tol for w in out):
            out.append(v)
    return out


def _sphere_scan(a, grid: int):
    nt, nphi = grid, grid // 2
    th = np.arange(nt) * (2 * math.pi / nt)
    ph = (np.arange(nphi) + 0.5) * (math.pi / nphi)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    u = np.stack([np.cos(tt) * np.sin(pp), np.sin(tt) * np.sin(pp), np.cos(pp)], -1).reshape(-1, 3)
    e1, e2 = _tangent_frames(u)
    j = _jac(a, u)
    m = np.stack([np.einsum("nki,ni->nk", j, e1), np.einsum("nki,ni->nk", j, e2)], -1)
    sv = np.linalg.svd(m, compute_uv=False)
    return u.reshape(nt, nphi, 3), sv[:, -1].reshape(nt, nphi), sv[:, 0].reshape(nt, nphi)


def _cylinder_scan(a, grid: int, height: float):
    nt, nc = grid, grid
    th = np.arange(nt) * (2 * math.pi / nt)
    cs = np.linspace(-height, height, nc)
    tt, cc = np.meshgrid(th, cs, indexing="ij")
    u = np.stack([np.cos(tt), np.sin(tt), cc], -1).reshape(-1, 3)
    e1 = np.stack([-np.sin(tt), np.cos(tt), np.zeros_like(tt)], -1).reshape(-1, 3)
    e2 = np.tile([0.0, 0.0, 1.0], (u.shape[0], 1))
    j = _jac(a, u)
    m = np.stack([np.einsum("nki,ni->nk", j, e1), np.einsum("nki,ni->nk", j, e2)], -1)
    sv = np.linalg.svd(m, compute_uv=False)
    return u.reshape(nt, nc, 3), sv[:, -1].reshape(nt, nc), sv[:, 0].reshape(nt, nc)


def _local_minima(s, periodic_rows=True):
    n0, n1 = s.shape
    pad = np.pad(s, 1, mode="edge")
    if periodic_rows:
        pad[0, 1:-1] = s[-1]
        pad[-1, 1:-1] = s[0]
    centre = pad[1:-1, 1:-1]
    ok = np.ones_like(s, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            ok &= centre <= pad[1 + di : 1 + di + n0, 1 + dj : 1 + dj + n1]
    return np.argwhere(ok)


def _refine(a, u0, t0, cons):
    """Solve dQ_u(t) = 0 with u on the constraint surface and t a unit tangent, by Levenberg-Marquardt."""

    def res(x):
        u, t = x[:3], x[3:]
        return np.concatenate([np.einsum("kij,i,j->k", a, t, u), [cons.value(u) - 1, cons.grad(u) @ t, t @ t - 1]])

    sol = least_squares(res, np.concatenate([u0, t0]), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    return sol.x, float(np.linalg.norm(sol.fun)), res


def _polish(a, x0, cons, steps: int = 80):
    """Newton in extended precision; converges (linearly) even at multiple roots."""
    cyl = isinstance(cons, _CylinderConstraint)
    with mpmath.workdps(50):
        am = [[[mpmath.mpf(float(a[k, i, j])) for j in range(3)] for i in range(3)] for k in range(3)]
        x = mpmath.matrix([mpmath.mpf(float(v)) for v in x0])

        def f(x):
            u, t = x[0:3], x[3:6]
            rows = [sum(am[k][i][j] * t[i] * u[j] for i in range(3) for j in range(3)) for k in range(3)]
            if cyl:
                rows += [u[0] ** 2 + u[1] ** 2 - 1, 2 * u[0] * t[0] + 2 * u[1] * t[1]]
            else:
                rows += [u[0] ** 2 + u[1] ** 2 + u[2] ** 2 - 1, 2 * (u[0] * t[0] + u[1] * t[1] + u[2] * t[2])]
            rows.append(t[0] ** 2 + t[1] ** 2 + t[2] ** 2 - 1)
            return mpmath.matrix(rows)

        def jac(x):
            u, t = x[0:3], x[3:6]
            j = mpmath.zeros(6, 6)
            for k in range(3):
                for m in range(3):
                    j[k, m] = sum(am[k][i][m] * t[i] for i in range(3))
                    j[k, 3 + m] = sum(am[k][m][jj] * u[jj] for jj in range(3))
            for m in range(3 if not cyl else 2):
                j[3, m] = 2 * u[m]
                j[4, m] = 2 * t[m]
                j[4, 3 + m] = 2 * u[m]
            for m in range(3):
                j[5, 3 + m] = 2 * t[m]
            return j

        for _ in range(steps):
            fx = f(x)
            if mpmath.norm(fx) < mpmath.mpf(10) ** -40:
                break
            try:
                dx = mpmath.lu_solve(jac(x), fx)
            except ZeroDivisionError:
                break
            x = x - dx
        return np.array([float(v) for v in x])


class _SphereConstraint:
    @staticmethod
    def grad(u):
        return 2 * u

    @staticmethod
    def value(u):
        return float(u @ u)


class _CylinderConstraint:
    @staticmethod
    def grad(u):
        return np.array([2 * u[0], 2 * u[1], 0.0])

    @staticmethod
    def value(u):
        return float(u[0] ** 2 + u[1] ** 2)


def numeric_singular_points(obj, grid: int = 256, tol: float = 1e-6, case: str = "sphere", height: float = DEFAULT_HEIGHT) -> NumericSingularities:
    """Rank-deficient points of the locus parametrization, found by scanning and refining.

    The scan looks at the smallest singular value of the differential restricted to
    the tangent plane (normalized by the largest); grid minima are polished with a
    Levenberg-Marquardt solve for (u, t) with dQ_u(t) = 0.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64")
    net = _net_of(obj)
    a = _coeff_arrays(net)
    scale = max(float(np.abs(a).max()), 1e-300)
    a = a / scale
    if case == "sphere":
        u, smin, smax = _sphere_scan(a, grid)
        cons = _SphereConstraint()
    elif case == "cylinder":
        u, smin, smax = _cylinder_scan(a, grid, height)
        cons = _CylinderConstraint()
    else:
        raise ValueError(f"unknown case {case!r}")
    ratio = smin / np.maximum(smax, 1e-300)
    cand = _local_minima(ratio, periodic_rows=True)
    cand = [tuple(ix) for ix in cand if ratio[tuple(ix)] < 0.5]
    rough = []
    for ix in cand:
        u0 = u[ix]
        if case == "sphere":
            e1, e2 = (f[0] for f in _tangent_frames(u0[None, :]))
        else:
            e1, e2 = np.array([-u0[1], u0[0], 0.0]), np.array([0.0, 0.0, 1.0])
        ju = np.einsum("kij,j->ki", a, u0)
        _, _, vt = np.linalg.svd(np.stack([ju @ e1, ju @ e2], -1))
        t0 = vt[-1, 0] * e1 + vt[-1, 1] * e2
        x, r, res = _refine(a, u0, t0, cons)
        if r < 1e-4:
            rough.append((x, res))
    # merge near-duplicates before the expensive polish
    reps = []
    for x, res in rough:
        v = _canonical(x[:3])
        if not any(min(np.linalg.norm(v - w), np.linalg.norm(v + w)) < 1e-3 for w, _, _ in reps):
            reps.append((v, x, res))
    found, resid = [], []
    for _, x, res in reps:
        if len(reps) <= 6:
            x = _polish(a, x, cons)
        r = float(np.linalg.norm(res(x)))
        if r > tol:
            continue
        if case == "cylinder" and abs(x[2]) > height:
            continue
        found.append(x[:3])
        resid.append(r)
    dirs = _cluster([_canonical(v) for v in found])
    # at most six isolated singular directions exist; more means a curve of them
    is_curve = len(dirs) > 6
    params = []
    for v in dirs:
        if case == "sphere":
            params.append((math.atan2(v[1], v[0]) % (2 * math.pi), math.acos(max(-1.0, min(1.0, v[2])))))
        else:
            w = v / math.hypot(v[0], v[1]) if math.hypot(v[0], v[1]) > 0 else v
            params.append((math.atan2(w[1], w[0]) % (2 * math.pi), float(w[2])))
    return NumericSingularities(tuple(dirs), tuple(params), bool(is_curve), tuple(resid))


def angular_distance(a, b) -> float:
    """Angle between the lines spanned by a and b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = abs(float(a @ b)) / (np.linalg.norm(a) * np.linalg.norm(b))
    return math.acos(min(1.0, c))


# -- mesh export ----------------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.9g}"
    return "0" if s == "-0" else s


def mesh_arrays(obj, case: str = "sphere", samples: int = 64, cylinder_height: float = DEFAULT_HEIGHT):
    """Vertices ((n+1)^2, 3) and 1-based triangle faces of the locus over a samples x samples grid."""
    if samples < 8:
        raise ValueError("samples must be at least 8")
    net = _net_of(obj)
    a = _coeff_arrays(net)
    n = samples
    # (n + 1) x (n + 1) vertices, n x n cells; the theta seam is duplicated, not welded
    th = np.linspace(0.0, 2 * math.pi, n + 1)
    if case == "sphere":
        ph = np.linspace(0.0, math.pi, n + 1)
        tt, pp = np.meshgrid(th, ph, indexing="ij")
        u = np.stack([np.cos(tt) * np.sin(pp), np.sin(tt) * np.sin(pp), np.cos(pp)], -1)
    elif case == "cylinder":
        cs = np.linspace(-cylinder_height, cylinder_height, n + 1)
        tt, cc = np.meshgrid(th, cs, indexing="ij")
        u = np.stack([np.cos(tt), np.sin(tt), cc], -1)
    else:
        raise ValueError(f"unknown case {case!r}")
    verts = 2 * np.einsum("kij,abi,abj->abk", a, u, u)
    faces = []
    m = n + 1
    for i in range(n):
        for j in range(n):
            v00 = i * m + j + 1
            v10 = v00 + m
            faces.append((v00, v10, v10 + 1))
            faces.append((v00, v10 + 1, v00 + 1))
    return verts.reshape(-1, 3), faces


def export_mesh(obj, case: str = "sphere", samples: int = 64, cylinder_height: float = DEFAULT_HEIGHT, path=None) -> str:
    """Write "v x y z" / "f i j k" records; returns the text (written to ``path`` when given)."""
    verts, faces = mesh_arrays(obj, case, samples, cylinder_height)
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in verts]
    lines += [f"f {i} {j} {k}" for i, j, k in faces]
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    return text

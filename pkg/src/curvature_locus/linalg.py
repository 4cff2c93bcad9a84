"""Small exact linear algebra and univariate polynomial helpers.

Entries may be Fraction or Surd (any exact field with ``==0`` tests).
Matrices are lists of row lists. Univariate polynomials are coefficient
lists in ascending degree.
"""

from __future__ import annotations

from fractions import Fraction

from .surd import sign

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows, ncols):
    """Basis of {v : rows @ v = 0}."""
    red, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(piv):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), ZERO) for row in a]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def solve(a, b):
    """Solve the square system a @ x = b (b a vector); raises on singular a."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(a):
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def trace(a):
    return sum((a[i][i] for i in range(len(a))), ZERO)


def charpoly(a):
    """Characteristic polynomial det(tI - a), ascending coefficients (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    m = [[ZERO] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        m = matmul(a, m) if k > 1 else [row[:] for row in identity(n)]
        if k > 1:
            for i in range(n):
                m[i][i] = m[i][i] + coeffs[n - k + 1]
        am = matmul(a, m)
        coeffs[n - k] = -trace(am) / k
    return coeffs


def poly_eval_matrix(p, a):
    """p(a) for ascending coefficient list p (Horner)."""
    n = len(a)
    out = [[ZERO] * n for _ in range(n)]
    for c in reversed(p):
        out = matmul(out, a)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


# -- univariate polynomials ----------------------------------------------------


def ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def pdeg(p):
    return len(ptrim(p)) - 1


def padd(p, q):
    n = max(len(p), len(q))
    return ptrim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n)])


def pscale(p, c):
    return ptrim([v * c for v in p])


def pmul(p, q):
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return ptrim(out)


def pdivmod(p, q):
    p, q = ptrim(p), ptrim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [ZERO] * max(len(p) - len(q) + 1, 1)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        f = rem[-1] / lead
        quo[shift] = f
        for i, c in enumerate(q):
            rem[i + shift] = rem[i + shift] - f * c
        rem = ptrim(rem)
    return ptrim(quo), rem


def pmod(p, q):
    return pdivmod(p, q)[1]


def pderiv(p):
    return ptrim([p[i] * i for i in range(1, len(p))])


def peval(p, t):
    out = 0
    for c in reversed(p):
        out = out * t + c
    return out


def sturm_real_root_count(p) -> int:
    """Number of distinct real roots of p (exact coefficients)."""
    p = ptrim(p)
    if len(p) <= 1:
        return 0
    seq = [p, pderiv(p)]
    while True:
        r = pmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(pscale(r, -1))

    def changes(vals):
        s = [v for v in vals if v != 0]
        return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))

    # signs at +inf / -inf from leading coefficients
    at_pos = [sign(q[-1]) for q in seq]
    at_neg = [sign(q[-1]) * (-1) ** (len(q) - 1) for q in seq]
    return changes(at_neg) - changes(at_pos)


def pmonic(p):
    p = ptrim(p)
    return [c / p[-1] for c in p] if p else p


def pxgcd(a, b):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = ptrim(a), ptrim(b)
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, padd(s0, pscale(pmul(q, s1), -1))
        t0, t1 = t1, padd(t0, pscale(pmul(q, t1), -1))
    lead = r0[-1]
    return pscale(r0, 1 / lead), pscale(s0, 1 / lead), pscale(t0, 1 / lead)


def ppow(p, n):
    out = [ONE]
    for _ in range(n):
        out = pmul(out, p)
    return out


def trace_product(a, b):
    """tr(a @ b) without forming the product."""
    n = len(a)
    return sum((a[i][j] * b[j][i] for i in range(n) for j in range(n)), ZERO)


def charpoly_from_power_sums(p, n):
    """Monic degree-n polynomial (ascending) whose roots have power sums p[0]=p_1, ..., p[n-1]=p_n."""
    e = [ONE]
    for k in range(1, n + 1):
        acc = ZERO
        for i in range(1, k + 1):
            term = e[k - i] * p[i - 1]
            acc = acc + term if i % 2 else acc - term
        e.append(acc / k)
    return [e[n - j] * (-1) ** (n - j) for j in range(n)] + [ONE]

"""Exact linear algebra over gaussian rationals, plus generic ring matrices.

Matrices are plain lists of lists.  Row reduction, kernels and solves are only
defined over the GaussRat field; products, transposes and identity checks work
for any scalar ring (GaussRat or Poly) by duck typing.
"""

from __future__ import annotations

from .scalars import GaussRat, ONE, ZERO, as_gauss


def zeros(r, c):
    return [[ZERO for _ in range(c)] for _ in range(r)]


def identity(n, one=ONE, zero=ZERO):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rb = len(b)
    cb = len(b[0]) if rb else 0
    out = []
    for row in a:
        acc = [None] * cb
        for k in range(rb):
            x = row[k]
            if not x:
                continue
            brow = b[k]
            for j in range(cb):
                y = brow[j]
                if not y:
                    continue
                t = x * y
                acc[j] = t if acc[j] is None else acc[j] + t
        out.append([ZERO if v is None else v for v in acc])
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        s = None
        for x, y in zip(row, v):
            if not x or not y:
                continue
            t = x * y
            s = t if s is None else s + t
        out.append(ZERO if s is None else s)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_eq(a, b) -> bool:
    if len(a) != len(b):
        return False
    return all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
        for ra, rb in zip(a, b)
    )


def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)


def is_antisymmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == -a[j][i] for i in range(n) for j in range(i, n))


def conj_matrix(a):
    return [[x.conj() for x in row] for row in a]


# ---------------------------------------------------------------------------
# field operations (GaussRat entries only)
# ---------------------------------------------------------------------------

def rref(m):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    a = [[as_gauss(x) for x in row] for row in m]
    nrow = len(a)
    ncol = len(a[0]) if nrow else 0
    piv_cols = []
    r = 0
    for c in range(ncol):
        pr = None
        for i in range(r, nrow):
            if a[i][c]:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        for i in range(nrow):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == nrow:
            break
    return a, piv_cols


def rank(m) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def kernel(m):
    """Basis of the right kernel of m, as a list of vectors."""
    nrow = len(m)
    ncol = len(m[0]) if nrow else 0
    if nrow == 0:
        return [ [ONE if i == j else ZERO for j in range(ncol)] for i in range(ncol) ]
    red, piv = rref(m)
    free = [c for c in range(ncol) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncol
        v[f] = ONE
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def solve(m, b):
    """One exact solution of m x = b, or None if inconsistent."""
    nrow = len(m)
    ncol = len(m[0]) if nrow else 0
    aug = [list(row) + [bb] for row, bb in zip(m, b)]
    red, piv = rref(aug)
    if ncol in piv:
        return None
    x = [ZERO] * ncol
    for r, c in enumerate(piv):
        x[c] = red[r][ncol]
    return x


def inverse(m):
    n = len(m)
    aug = [list(row) + list(identity(n)[i]) for i, row in enumerate(m)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def det(m) -> GaussRat:
    a = [[as_gauss(x) for x in row] for row in m]
    n = len(a)
    sign = ONE
    acc = ONE
    for c in range(n):
        pr = None
        for r in range(c, n):
            if a[r][c]:
                pr = r
                break
        if pr is None:
            return ZERO
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            sign = -sign
        acc = acc * a[c][c]
        inv = ONE / a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * acc


def row_space_basis(rows):
    """Pivot-row basis for the span of the given vectors."""
    red, piv = rref(rows)
    return [red[i] for i in range(len(piv))]


def span_contains(rows, v) -> bool:
    if not rows:
        return all(not x for x in v)
    return rank(rows) == rank(rows + [v])


def span_equal(rows_a, rows_b) -> bool:
    ra = rank(rows_a) if rows_a else 0
    rb = rank(rows_b) if rows_b else 0
    if ra != rb:
        return False
    return rank(list(rows_a) + list(rows_b)) == ra


# ---------------------------------------------------------------------------
# ring operations (Poly entries allowed)
# ---------------------------------------------------------------------------

def ring_det(m):
    """Determinant by Laplace expansion; fine for the small sizes used here."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    acc = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        t = m[0][j] * ring_det(minor)
        if j % 2:
            t = -t
        acc = t if acc is None else acc + t
    if acc is None:
        return ZERO
    return acc


def adjugate_inverse(m):
    """Inverse of a ring matrix whose determinant is a nonzero constant."""
    d = ring_det(m)
    dg = as_gauss(d)
    if not dg:
        raise ValueError("matrix is singular")
    n = len(m)
    inv_d = ONE / dg
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [m[r][c] for c in range(n) if c != i] for r in range(n) if r != j
            ]
            cof = ring_det(minor) if n > 1 else ONE
            if (i + j) % 2:
                cof = -cof
            row.append(inv_d * cof)
        out.append(row)
    return out


def eval_matrix(m, point: dict):
    """Evaluate a polynomial matrix at a chart point, yielding GaussRat entries."""
    out = []
    for row in m:
        new = []
        for x in row:
            new.append(x.eval(point) if hasattr(x, "eval") else as_gauss(x))
        out.append(new)
    return out

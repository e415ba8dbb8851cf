"""Exact integer matrix routines.

Matrices are lists of rows of Python ints.  The routines skip zero
entries wherever that is cheap, because the matrices met here are
permutation-like and mostly sparse.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def copy(A):
    return [list(row) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def ncols(A, default=0):
    return len(A[0]) if A else default


def matmul(A, B):
    if not A:
        return []
    m = ncols(B)
    sparse = [[(j, b) for j, b in enumerate(row) if b] for row in B]
    out = []
    for row in A:
        acc = [0] * m
        for k, a in enumerate(row):
            if a:
                if a == 1:
                    for j, b in sparse[k]:
                        acc[j] += b
                else:
                    for j, b in sparse[k]:
                        acc[j] += a * b
        out.append(acc)
    return out


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def is_identity(A):
    return all(x == (1 if i == j else 0) for i, row in enumerate(A) for j, x in enumerate(row))


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[off + i][off:off + len(row)] = row
        off += len(b)
    return out


def column_dicts(A):
    """Sparse columns {row: value} of A."""
    cols = [dict() for _ in range(ncols(A))]
    for i, row in enumerate(A):
        for j, x in enumerate(row):
            if x:
                cols[j][i] = x
    return cols


def det(A):
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = copy(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - a * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]


def _row_reduce(M, T=None, full=False):
    """Unimodular integer row reduction of M in place to echelon form.

    T (if given) receives the same row operations.  Pivots are made positive;
    with full=True entries above pivots are reduced into [0, pivot).
    Returns the pivot columns.
    """
    rows = len(M)
    cols = ncols(M)
    r = 0
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        while True:
            live = [i for i in range(r, rows) if M[i][c]]
            if not live:
                break
            p = min(live, key=lambda i: abs(M[i][c]))
            if p != r:
                M[r], M[p] = M[p], M[r]
                if T is not None:
                    T[r], T[p] = T[p], T[r]
            pr = M[r]
            pv = pr[c]
            done = True
            for i in range(r + 1, rows):
                if not M[i][c]:
                    continue
                q = M[i][c] // pv
                ri = M[i]
                for j in range(c, cols):
                    if pr[j]:
                        ri[j] -= q * pr[j]
                if T is not None:
                    ti, tr = T[i], T[r]
                    for j, x in enumerate(tr):
                        if x:
                            ti[j] -= q * x
                if ri[c]:
                    done = False
            if done:
                break
        if r < rows and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-x for x in M[r]]
                if T is not None:
                    T[r] = [-x for x in T[r]]
            if full:
                pv = M[r][c]
                for i in range(r):
                    q = M[i][c] // pv
                    if q:
                        M[i] = [x - q * y for x, y in zip(M[i], M[r])]
                        if T is not None:
                            T[i] = [x - q * y for x, y in zip(T[i], T[r])]
            pivots.append(c)
            r += 1
    return pivots


def hnf_rows(A):
    """Row Hermite normal form: a canonical basis (as rows) of the row lattice of A."""
    M = copy(A)
    piv = _row_reduce(M, full=True)
    return M[:len(piv)]


def inverse_unimodular(A):
    """The integral inverse of A, or None when A is not unimodular."""
    n = len(A)
    M = copy(A)
    T = identity(n)
    piv = _row_reduce(M, T, full=True)
    if len(piv) != n or any(M[i][i] != 1 for i in range(n)):
        return None
    return T


def rank_profile(A):
    """Rank over Q with pivot rows and pivot columns of a nonzero maximal minor.

    Fraction-free: rows are combined as p*r_i - a*r_k and divided by their content.
    """
    rows = len(A)
    if rows == 0:
        return 0, [], []
    cols = ncols(A)
    M = [list(row) for row in A]
    order = list(range(rows))
    pr, pc = [], []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        order[r], order[p] = order[p], order[r]
        top = M[r]
        pv = top[c]
        for i in range(r + 1, rows):
            row = M[i]
            x = row[c]
            if x:
                row = [pv * y - x * z for y, z in zip(row, top)]
                g = 0
                for y in row:
                    if y:
                        g = gcd(g, y)
                        if g == 1:
                            break
                M[i] = [y // g for y in row] if g > 1 else row
        pr.append(order[r])
        pc.append(c)
        r += 1
        if r == rows:
            break
    return r, sorted(pr), pc


def rank(A):
    return rank_profile(A)[0]


def snf_diagonal(A):
    """Nonzero Smith normal form invariants d_1 | d_2 | ... of an integer matrix."""
    M = [list(row) for row in A if any(row)]
    diag = []
    while M:
        cols = len(M[0])
        # drop zero columns
        keep = [j for j in range(cols) if any(row[j] for row in M)]
        if not keep:
            break
        if len(keep) < cols:
            M = [[row[j] for j in keep] for row in M]
            cols = len(keep)
        while True:
            best = None
            for i, row in enumerate(M):
                for j, x in enumerate(row):
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            _, pi, pj = best
            M[0], M[pi] = M[pi], M[0]
            if pj:
                for row in M:
                    row[0], row[pj] = row[pj], row[0]
            top = M[0]
            pv = top[0]
            clean = True
            for row in M[1:]:
                x = row[0]
                if x:
                    q = x // pv
                    for j, y in enumerate(top):
                        if y:
                            row[j] -= q * y
                    if row[0]:
                        clean = False
            for j in range(1, cols):
                x = top[j]
                if x:
                    q = x // pv
                    for row in M:
                        if row[0]:
                            row[j] -= q * row[0]
                    if top[j]:
                        clean = False
            if not clean:
                continue
            if abs(pv) != 1:
                bad = next((row for row in M[1:] if any(x % pv for x in row)), None)
                if bad is not None:
                    for j in range(cols):
                        top[j] += bad[j]
                    continue
            break
        diag.append(abs(M[0][0]))
        M = [row[1:] for row in M[1:] if any(row[1:])]
    return diag


def solve_rational(A, b):
    """One solution x of A x = b over Q, or None if inconsistent."""
    rows = len(A)
    cols = ncols(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    if any(M[i][cols] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = M[i][cols]
    return x


def _poly_mul_lin(p, a):
    # p * (t - a), coefficient lists lowest first
    out = [0] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i + 1] += c
        out[i] -= a * c
    return out


def charpoly(A):
    """Coefficients (lowest first) of det(tI - A) via Hessenberg reduction over Q."""
    n = len(A)
    H = [list(row) for row in A]
    for m in range(1, n - 1):
        col = m - 1
        live = [i for i in range(m, n) if H[i][col]]
        if not live:
            continue
        unit = [i for i in live if H[i][col] in (1, -1)]
        i0 = unit[0] if unit else min(live, key=lambda i: abs(H[i][col]))
        if i0 != m:
            H[i0], H[m] = H[m], H[i0]
            for row in H:
                row[i0], row[m] = row[m], row[i0]
        pv = H[m][col]
        rm = H[m]
        for i in range(m + 1, n):
            x = H[i][col]
            if not x:
                continue
            u = x // pv if x % pv == 0 else Fraction(x, pv)
            ri = H[i]
            for j in range(col, n):
                y = rm[j]
                if y:
                    ri[j] -= u * y
            for row in H:
                y = row[i]
                if y:
                    row[m] += u * y
    polys = [[1]]
    for m in range(n):
        p = _poly_mul_lin(polys[m], H[m][m])
        prod = 1
        for i in range(1, m + 1):
            prod *= H[m - i + 1][m - i]
            if not prod:
                break
            h = H[m - i][m]
            if h:
                f = prod * h
                for k, c in enumerate(polys[m - i]):
                    if c:
                        p[k] -= f * c
        polys.append(p)
    out = []
    for c in polys[n]:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ArithmeticError("non-integral characteristic polynomial")
            c = c.numerator
        out.append(int(c))
    return out

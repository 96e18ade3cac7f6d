"""Exact rational linear algebra.

Matrices are lists of lists of ``fractions.Fraction``.  Small systems go
through a plain Gauss-Jordan elimination over Q.  Large systems (hom-space
and presentation matrices can reach ~650x650 during fan enumeration) go
through a certified modular path:

 * eliminate mod a 31-bit prime (numba-compiled when available, vectorized
   numpy otherwise); pivots found mod p certify an exact *lower* bound on
   the rank,
 * candidate kernel vectors are lifted by CRT + rational reconstruction and
   then verified exactly over the integers; verified vectors certify the
   matching *upper* bound,
 * on any failure more primes are added, and as a last resort the exact
   Fraction elimination runs.

So every returned rank/kernel is exact, never "probably correct".
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import numpy as np

Matrix = "list[list[Fraction]]"

# Primes just below 2^31 so products of two residues fit in int64.
_PRIMES = [
    2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423,
    2147483399, 2147483353, 2147483323, 2147483269, 2147483249,
    2147483237, 2147483179, 2147483171, 2147483137, 2147483123,
]

# Cost threshold separating the Fraction path from the modular path.
_SMALL_COST = 250_000


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(rows: int, cols: int):
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int):
    mat = zeros(n, n)
    for i in range(n):
        mat[i][i] = Fraction(1)
    return mat


def mat_mul(a, b):
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    c = frac(c)
    return [[c * x for x in row] for row in a]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)


def mat_vec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def rref(mat):
    """Reduced row echelon form over Q. Returns (rows, pivot column list)."""
    m = [[frac(x) for x in row] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = None
        for i in range(r, rows):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                mr = m[r]
                mi = m[i]
                for j in range(c, cols):
                    if mr[j]:
                        mi[j] -= f * mr[j]
        pivots.append(c)
        r += 1
    return m, pivots


def _kernel_from_rref(red, pivots, cols):
    basis = []
    pivot_set = set(pivots)
    for c in range(cols):
        if c in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][c]
        basis.append(v)
    return basis


# --- modular path ------------------------------------------------------

_NUMBA_RREF = None
_NUMBA_TRIED = False


def _get_numba_rref():
    global _NUMBA_RREF, _NUMBA_TRIED
    if _NUMBA_TRIED:
        return _NUMBA_RREF
    _NUMBA_TRIED = True
    try:
        from numba import njit

        @njit(cache=True)
        def _rref_modp_jit(a, p):  # pragma: no cover - compiled
            rows, cols = a.shape
            piv = np.empty(min(rows, cols), dtype=np.int64)
            npiv = 0
            r = 0
            for c in range(cols):
                if r == rows:
                    break
                pr = -1
                for i in range(r, rows):
                    if a[i, c] != 0:
                        pr = i
                        break
                if pr < 0:
                    continue
                if pr != r:
                    for j in range(cols):
                        tmp = a[r, j]
                        a[r, j] = a[pr, j]
                        a[pr, j] = tmp
                # inverse mod p by Fermat
                inv = 1
                base = a[r, c] % p
                e = p - 2
                while e > 0:
                    if e & 1:
                        inv = (inv * base) % p
                    base = (base * base) % p
                    e >>= 1
                for j in range(c, cols):
                    a[r, j] = (a[r, j] * inv) % p
                for i in range(rows):
                    if i != r and a[i, c] != 0:
                        f = a[i, c]
                        for j in range(c, cols):
                            if a[r, j] != 0:
                                a[i, j] = (a[i, j] - f * a[r, j]) % p
                piv[npiv] = c
                npiv += 1
                r += 1
            return a, piv[:npiv]

        _NUMBA_RREF = _rref_modp_jit
    except Exception:
        _NUMBA_RREF = None
    return _NUMBA_RREF


def _rref_modp_numpy(a, p):
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        colv = a[:, c].copy()
        colv[r] = 0
        mask = colv != 0
        if mask.any():
            a[mask, c:] = (a[mask, c:] - np.outer(colv[mask], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def _rref_modp(a, p):
    jit = _get_numba_rref()
    if jit is not None:
        red, piv = jit(a, p)
        return red, [int(x) for x in piv]
    red, piv = _rref_modp_numpy(a, p)
    return red, [int(x) for x in piv]


def _int_rows(mat):
    """Clear denominators per row; returns rows of python ints."""
    out = []
    for row in mat:
        mult = lcm(*[frac(x).denominator for x in row]) if row else 1
        out.append([int(frac(x) * mult) for x in row])
    return out


def _mod_matrix(int_rows, cols, p):
    a = np.zeros((len(int_rows), cols), dtype=np.int64)
    for i, row in enumerate(int_rows):
        for j, x in enumerate(row):
            if x:
                a[i, j] = x % p
    return a


def _crt_pair(r1, m1, r2, m2):
    inv = pow(m1 % m2, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def _rat_reconstruct(r, m):
    """Wang rational reconstruction of r mod m; None when out of range."""
    r %= m
    a0, a1 = m, r
    b0, b1 = 0, 1
    bound = int(m // 2) ** 0.5
    while a1 > bound:
        q = a0 // a1
        a0, a1 = a1, a0 - q * a1
        b0, b1 = b1, b0 - q * b1
    if b1 == 0 or abs(b1) > bound:
        return None
    if gcd(a1, abs(b1)) != 1:
        return None
    return Fraction(a1, b1)


def _verify_kernel_vec(int_rows, vec):
    """Exact check A v == 0 for integer rows and a Fraction vector."""
    mult = lcm(*[x.denominator for x in vec]) if vec else 1
    iv = [int(x * mult) for x in vec]
    for row in int_rows:
        s = 0
        for a, b in zip(row, iv):
            if a and b:
                s += a * b
        if s != 0:
            return False
    return True


def _kernel_modular(mat, rows, cols):
    int_rows = _int_rows(mat)
    collected = {}  # pivot tuple -> (res_matrix, modulus, pivots)
    for attempt, p in enumerate(_PRIMES):
        a = _mod_matrix(int_rows, cols, p)
        red, pivots = _rref_modp(a, p)
        key = tuple(pivots)
        if key in collected:
            res, mod, _ = collected[key]
            newres = [[0] * cols for _ in range(len(pivots))]
            for i in range(len(pivots)):
                for j in range(cols):
                    newres[i][j], _m = _crt_pair(res[i][j], mod, int(red[i, j]), p)
            collected[key] = (newres, mod * p, pivots)
        else:
            collected[key] = (
                [[int(red[i, j]) for j in range(cols)] for i in range(len(pivots))],
                p,
                pivots,
            )
        # the true pivot pattern has maximal rank and lex-smallest pivots
        # (a bad prime can only lose pivots or push them rightward)
        best = max(
            collected.values(),
            key=lambda t: (len(t[2]), [-x for x in t[2]], t[1]),
        )
        res, mod, pivots = best
        rank_lower = len(pivots)
        if rank_lower == cols:
            return [], cols  # full column rank is certified by pivots alone
        lifted = []
        ok = True
        for i in range(rank_lower):
            row = []
            for j in range(cols):
                if res[i][j] == 0:
                    row.append(Fraction(0))
                    continue
                q = _rat_reconstruct(res[i][j], mod)
                if q is None:
                    ok = False
                    break
                row.append(q)
            if not ok:
                break
            lifted.append(row)
        if ok:
            basis = _kernel_from_rref(lifted, list(pivots), cols)
            if all(_verify_kernel_vec(int_rows, v) for v in basis):
                # len(basis) independent exact kernel vectors and
                # rank >= rank_lower pin the kernel dimension exactly.
                return basis, rank_lower
        if attempt >= 7:
            break
    red, pivots = rref(mat)  # exact fallback
    return _kernel_from_rref(red, pivots, cols), len(pivots)


def kernel_basis(mat):
    """Exact basis of the right kernel {v : mat v = 0}."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [list(col) for col in identity(cols)]
    if rows * cols * min(rows, cols) <= _SMALL_COST:
        red, pivots = rref(mat)
        return _kernel_from_rref(red, pivots, cols)
    basis, _rank = _kernel_modular(mat, rows, cols)
    return basis


def rank(mat) -> int:
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows == 0 or cols == 0:
        return 0
    if rows * cols * min(rows, cols) <= _SMALL_COST:
        return len(rref(mat)[1])
    if cols <= rows:
        _basis, r = _kernel_modular(mat, rows, cols)
        return r
    _basis, r = _kernel_modular(transpose(mat), cols, rows)
    return r


def nullity(mat) -> int:
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    return cols - rank(mat) if rows and cols else cols


def solve(mat, rhs):
    """One exact solution of mat x = rhs, or None. Small systems only."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [list(mat[i]) + [frac(rhs[i])] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def inverse(mat):
    n = len(mat)
    aug = [list(mat[i]) + list(identity(n)[i]) for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def row_space_basis(mat):
    red, pivots = rref(mat)
    return [red[i] for i in range(len(pivots))]


def in_span(basis_rows, vec) -> bool:
    """Is vec in the row span of basis_rows (both exact)?"""
    if not basis_rows:
        return all(not x for x in vec)
    return rank(basis_rows) == rank(basis_rows + [list(vec)])


def column_space_basis(mat):
    """Columns of mat spanning its column space (as column vectors)."""
    if not mat or not mat[0]:
        return []
    _red, pivots = rref(mat)
    return [[row[c] for row in mat] for c in pivots]

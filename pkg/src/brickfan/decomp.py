"""Krull-Schmidt decomposition and isomorphism testing over Q.

Idempotents are found in End(M)/rad by factoring minimal polynomials of
seeded random elements (bounded retries), lifted to exact idempotents by
Newton iteration, and every split is certified by the inclusion/projection
pair it produces.  A summand whose top End/rad stays without idempotents
through the search budget is reported indecomposable with a
geometric-split warning when that top has dimension > 1 (over the
algebraic closure it would split further).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import ZeroModule
from .modules import (
    MorphismMatrix,
    Representation,
    end_algebra,
    hom_space,
    image_of_morphism,
)

_SEARCH_ROUNDS = 60


@dataclass
class Summand:
    rep: Representation
    multiplicity: int
    geometric_split_warning: bool


# -- small dense polynomial helpers (coeff lists, low degree first) ---------


def _poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] -= c * y
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_xgcd(a, b):
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _poly_trim([x - y for x, y in _zip_pad(t0, _poly_mul(q, t1))])
    return r0, s0, t0


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _factor_rational_poly(coeffs):
    """Distinct irreducible factors of a Q[t] polynomial via sympy."""
    import sympy

    t = sympy.Symbol("t")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * t**i
        for i, c in enumerate(coeffs)
    )
    _const, factors = sympy.factor_list(sympy.Poly(expr, t))
    out = []
    for poly, _mult in factors:
        cs = poly.all_coeffs()[::-1]
        out.append([Fraction(c.p, c.q) for c in map(sympy.Rational, cs)])
    return out


# -- the endomorphism-algebra workbench --------------------------------------


class _EndData:
    def __init__(self, M):
        self.M = M
        end = end_algebra(M)
        self.basis = end.basis
        self.e = len(self.basis)
        self.top_dim = end.top_dimension
        # vectorized basis for coordinate solves
        self._cols = [_vectorize(f) for f in self.basis]
        self._coord_mat = [list(col) for col in zip(*self._cols)]
        rad_vecs = [_vectorize(f) for f in end.radical_basis]
        self.rad_coords = [self.coords(vec=v) for v in rad_vecs]
        self.rad_rows = linalg.row_space_basis(self.rad_coords) if self.rad_coords else []

    def coords(self, f=None, vec=None):
        if vec is None:
            vec = _vectorize(f)
        sol = linalg.solve(self._coord_mat, vec)
        if sol is None:
            raise RuntimeError("endomorphism escaped its own basis")
        return sol

    def in_radical(self, f):
        c = self.coords(f)
        if not any(c):
            return True
        if not self.rad_rows:
            return False
        return linalg.in_span(self.rad_rows, c)

    def combo(self, coeffs):
        out = None
        for f, c in zip(self.basis, coeffs):
            if c:
                term = f.scale(c)
                out = term if out is None else out.add(term)
        return out if out is not None else self.basis[0].scale(0)

    def identity(self):
        return MorphismMatrix.identity(self.M)


def _vectorize(f):
    vec = []
    for v in f.source.algebra.vertices:
        for row in f.blocks[v]:
            vec.extend(row)
    return vec


def _end_data(M) -> _EndData:
    cached = getattr(M, "_end_data_cache", None)
    if cached is None:
        cached = _EndData(M)
        M._end_data_cache = cached
    return cached


def _min_poly_mod_rad(end: _EndData, x):
    """Minimal polynomial of the image of x in End/rad."""
    # coordinates taken modulo the radical span
    rad = end.rad_rows
    dim = end.e

    def reduce_mod_rad(c):
        # rad rows are in reduced echelon form: one elimination pass
        c = list(c)
        for r in rad:
            lead = next(i for i, x in enumerate(r) if x)
            if c[lead]:
                f = c[lead] / r[lead]
                for i in range(dim):
                    c[i] -= f * r[i]
        return c

    powers = [end.identity()]
    coords = [reduce_mod_rad(end.coords(powers[0]))]
    cur = powers[0]
    while True:
        cur = x.compose(cur)
        powers.append(cur)
        coords.append(reduce_mod_rad(end.coords(cur)))
        # look for a dependency among the reduced coordinate vectors
        mat = [list(col) for col in zip(*coords)]
        ker = linalg.kernel_basis(mat)
        if ker:
            vec = ker[0]
            # normalize so the highest power has coefficient 1
            top = max(i for i, c in enumerate(vec) if c)
            inv = 1 / vec[top]
            return _poly_trim([c * inv for c in vec[: top + 1]])
        if len(powers) > end.e + 1:
            raise RuntimeError("minimal polynomial search overran End")


def _idempotent_from_poly(end: _EndData, x, mu):
    """Nontrivial idempotent of End/rad from a factorization of mu."""
    factors = _factor_rational_poly(mu)
    if len(factors) < 2:
        return None
    f1 = factors[0]
    # split mu = f * g with f the full f1-primary part, so gcd(f, g) = 1
    f = [Fraction(1)]
    g = list(mu)
    while True:
        q, r = _poly_divmod(g, f1)
        if r:
            break
        f = _poly_mul(f, f1)
        g = q
    gc, s, _t = _poly_xgcd(f, g)
    if len(gc) != 1:
        return None
    inv_lead = 1 / gc[0]
    u = _poly_mul([c * inv_lead for c in s], f)  # 0 mod f, 1 mod g
    u = _poly_divmod(u, mu)[1]
    return _poly_eval_at(end, u, x)


def _poly_eval_at(end: _EndData, poly, x):
    out = None
    power = end.identity()
    for c in poly:
        if c:
            term = power.scale(c)
            out = term if out is None else out.add(term)
        power = x.compose(power)
    return out if out is not None else end.identity().scale(0)


def _newton_lift_idempotent(e):
    """Lift e with e^2 = e mod rad to an exact idempotent."""
    for _ in range(16):
        sq = e.compose(e)
        if _morph_eq(sq, e):
            return e
        cube = sq.compose(e)
        e = sq.scale(3).add(cube.scale(-2))
    raise RuntimeError("idempotent lifting did not converge")


def _morph_eq(f, g):
    return all(f.blocks[v] == g.blocks[v] for v in f.blocks)


def _split_by_idempotent(M, e):
    one_minus = MorphismMatrix.identity(M).add(e.scale(-1))
    pieces = []
    for proj in (e, one_minus):
        sub, surj = image_of_morphism(proj)
        pieces.append((sub.rep, sub.morphism, surj))
    return pieces


def _indecomposable_pieces(M, rng, depth=0):
    """Split M into (rep, inclusion, projection, warning) with each rep
    having local endomorphism ring over Q."""
    if M.total_dim == 0:
        return []
    end = _end_data(M)
    ident = end.identity()
    if end.e == 1 or end.top_dim == 1:
        return [(M, ident, ident, False)]
    # deterministic pre-pass: basis elements, then seeded random combos
    candidates = []
    for f in end.basis:
        candidates.append(f)
    for _ in range(_SEARCH_ROUNDS):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(end.e)]
        candidates.append(end.combo(coeffs))
    for x in candidates:
        mu = _min_poly_mod_rad(end, x)
        if len(mu) <= 2:
            continue  # scalar image: useless
        e0 = _idempotent_from_poly(end, x, mu)
        if e0 is None or e0.is_zero():
            continue
        if _morph_eq(e0, ident):
            continue
        e_exact = _newton_lift_idempotent(e0)
        if e_exact.is_zero() or _morph_eq(e_exact, ident):
            continue
        out = []
        for rep, incl, proj in _split_by_idempotent(M, e_exact):
            for (r, i2, p2, w) in _indecomposable_pieces(rep, rng, depth + 1):
                out.append((r, incl.compose(i2), p2.compose(proj), w))
        return out
    # no idempotent found: local with a top that is a division
    # algebra of dimension top_dim over Q
    return [(M, ident, ident, end.top_dim > 1)]


def indecomposable_summands(M, seed=0):
    rng = random.Random(seed)
    return _indecomposable_pieces(M, rng)


def decompose(M, seed=0):
    """Indecomposable summands with multiplicities (Krull-Schmidt)."""
    pieces = indecomposable_summands(M, seed)
    groups = []
    for rep, _incl, _proj, warn in pieces:
        placed = False
        for g in groups:
            if _quick_indec_iso(g.rep, rep):
                g.multiplicity += 1
                g.geometric_split_warning = g.geometric_split_warning or warn
                placed = True
                break
        if not placed:
            groups.append(Summand(rep, 1, warn))
    return groups


# -- isomorphism testing ------------------------------------------------------


@dataclass
class IsoResult:
    isomorphic: bool
    certificate: MorphismMatrix | None
    reason: str

    def __bool__(self):
        return self.isomorphic


def _random_invertible_combo(homs, rng, tries=10):
    if not homs:
        return None
    for _ in range(tries):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in homs]
        f = None
        for h, c in zip(homs, coeffs):
            if c:
                term = h.scale(c)
                f = term if f is None else f.add(term)
        if f is not None and f.is_invertible():
            return f
    return None


def _grid_invertible_combo(homs):
    if not homs or len(homs) > 4:
        return None
    from itertools import product

    for coeffs in product(range(-3, 4), repeat=len(homs)):
        if not any(coeffs):
            continue
        f = None
        for h, c in zip(homs, coeffs):
            if c:
                term = h.scale(Fraction(c))
                f = term if f is None else f.add(term)
        if f is not None and f.is_invertible():
            return f
    return None


def _indec_iso(X, Y, certificate=True):
    """Exact iso decision for modules with local End (indecomposables):
    X ~ Y iff some basis pair composes to a unit of End(X)."""
    if X.dim_vector != Y.dim_vector:
        return None
    h_xy = hom_space(X, Y)
    if not h_xy:
        return None
    h_yx = hom_space(Y, X)
    if not h_yx:
        return None
    end = _end_data(X)
    for f in h_xy:
        for g in h_yx:
            if not end.in_radical(g.compose(f)):
                # g f is a unit in the local algebra End(X), so f is a
                # split mono; Y indecomposable makes it an isomorphism
                if f.is_invertible():
                    return f
                raise RuntimeError("pairing criterion produced a non-iso")
    return None


def _quick_indec_iso(X, Y):
    if X.dim_vector != Y.dim_vector:
        return False
    rng = random.Random(7)
    homs = hom_space(X, Y)
    f = _random_invertible_combo(homs, rng, tries=4)
    if f is not None:
        return True
    return _indec_iso(X, Y) is not None


def is_isomorphic(M, N, seed=0) -> IsoResult:
    """Exact isomorphism decision with a certificate on success."""
    if not M.algebra.same_algebra(N.algebra):
        return IsoResult(False, None, "different algebras")
    if M.is_zero() and N.is_zero():
        return IsoResult(True, MorphismMatrix.identity(M), "both zero")
    if M.dim_vector != N.dim_vector:
        return IsoResult(False, None, "dimension vectors differ")
    rng = random.Random(seed)
    homs = hom_space(M, N)
    if homs:
        f = _random_invertible_combo(homs, rng)
        if f is None:
            f = _grid_invertible_combo(homs)
        if f is not None:
            return IsoResult(True, f, "invertible hom combination")
    # invariant screen before the full Krull-Schmidt match
    if hom_space(N, M) == [] or not homs:
        return IsoResult(False, None, "hom space vanishes")
    d_end_m = len(hom_space(M, M))
    d_end_n = len(hom_space(N, N))
    if d_end_m != d_end_n:
        return IsoResult(False, None, "endomorphism dimensions differ")
    # Krull-Schmidt matching with exact pairwise decisions
    left = indecomposable_summands(M, seed)
    right = list(indecomposable_summands(N, seed))
    pieces = []
    for rep, _incl, proj, _w in left:
        match = None
        for idx, (rep2, incl2, _proj2, _w2) in enumerate(right):
            f = _indec_iso(rep, rep2)
            if f is not None:
                match = (idx, f, incl2)
                break
        if match is None:
            return IsoResult(False, None, "Krull-Schmidt types differ")
        idx, f, incl2 = match
        right.pop(idx)
        pieces.append(incl2.compose(f).compose(proj))
    if right:
        return IsoResult(False, None, "Krull-Schmidt types differ")
    total = pieces[0]
    for p in pieces[1:]:
        total = total.add(p)
    if not total.is_invertible():
        raise RuntimeError("Krull-Schmidt certificate failed invertibility")
    return IsoResult(True, total, "Krull-Schmidt matching")

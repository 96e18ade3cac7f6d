"""Representations of a bound quiver as exact-rational matrix tuples.

A representation assigns a dimension to every vertex and a (d_target x
d_source) matrix of rationals to every arrow; the constructor checks that
every defining relation of the algebra acts as zero.  Morphisms are
per-vertex block matrices satisfying the intertwining equations.

Everything here is a pure value: representations and morphisms are never
mutated after construction.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import linalg
from .algebra import BoundQuiverAlgebra, TwoSidedIdeal, parse_rational
from .errors import (
    AlgebraMismatch,
    NotSubrepresentation,
    ZeroModule,
)


def _freeze(mat):
    return tuple(tuple(Fraction(x) for x in row) for row in mat)


def _mmul(a, b, m, k, n):
    """a (m x k) times b (k x n) with explicit shapes (handles 0 dims)."""
    out = [[Fraction(0)] * n for _ in range(m)]
    for i in range(m):
        for t in range(k):
            x = a[i][t]
            if x:
                bt = b[t]
                row = out[i]
                for j in range(n):
                    if bt[j]:
                        row[j] += x * bt[j]
    return out


def _zero_mat(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def _ident(n):
    return [
        [Fraction(1) if i == j else Fraction(0) for j in range(n)]
        for i in range(n)
    ]


class Representation:
    """One exact-rational matrix per arrow over fixed per-vertex dims."""

    def __init__(self, algebra, dim_vector, matrices, _check=True):
        self.algebra = algebra
        dims = tuple(int(d) for d in dim_vector)
        if len(dims) != algebra.n or any(d < 0 for d in dims):
            raise ValueError("dim_vector must list one size per vertex")
        self.dim_vector = dims
        mats = {}
        for a in algebra.quiver.arrows:
            ds = dims[algebra.vindex[a.source]]
            dt = dims[algebra.vindex[a.target]]
            m = matrices.get(a.name)
            if m is None:
                m = _zero_mat(dt, ds)
            m = _freeze(m)
            if len(m) != dt or any(len(row) != ds for row in m):
                raise ValueError(
                    f"matrix for arrow {a.name!r} must be {dt}x{ds}"
                )
            mats[a.name] = m
        self.matrices = mats
        if _check:
            bad = self._violated_relation()
            if bad is not None:
                raise ValueError(
                    f"relation {bad!r} does not vanish on the representation"
                )

    # -- structure --------------------------------------------------------

    def _violated_relation(self):
        for rel in self.algebra.relations:
            src, tgt = rel.validate(self.algebra.quiver)
            m = self.dim_vector[self.algebra.vindex[tgt]]
            n = self.dim_vector[self.algebra.vindex[src]]
            acc = _zero_mat(m, n)
            for coeff, path in rel.terms:
                mat = self.act_path((src, tuple(path)))
                for i in range(m):
                    for j in range(n):
                        acc[i][j] += coeff * mat[i][j]
            if any(x for row in acc for x in row):
                return rel
        return None

    @property
    def total_dim(self):
        return sum(self.dim_vector)

    def is_zero(self):
        return self.total_dim == 0

    def vdim(self, v):
        return self.dim_vector[self.algebra.vindex[v]]

    def act_path(self, pk):
        """Action matrix of a traversal-order path (d_tgt x d_src)."""
        src, arrows = pk
        cur_dim = self.vdim(src)
        cur = _ident(cur_dim)
        at = src
        for name in arrows:
            a = self.algebra.quiver.arrow_by_name[name]
            m = self.matrices[name]
            nxt = self.vdim(a.target)
            cur = _mmul(m, cur, nxt, self.vdim(at), self.vdim(src))
            at = a.target
        return cur

    def act_pair_element(self, elem, src, tgt):
        """Action of an element of e_tgt A e_src given as {path key: coeff}."""
        m, n = self.vdim(tgt), self.vdim(src)
        acc = _zero_mat(m, n)
        for pk, coeff in elem.items():
            mat = self.act_path(pk)
            for i in range(m):
                for j in range(n):
                    if mat[i][j]:
                        acc[i][j] += coeff * mat[i][j]
        return acc

    def structurally_equal(self, other):
        return (
            self.algebra.same_algebra(other.algebra)
            and self.dim_vector == other.dim_vector
            and self.matrices == other.matrices
        )

    def to_file_dict(self):
        return {
            "dim_vector": list(self.dim_vector),
            "matrices": {
                name: [[str(x) for x in row] for row in mat]
                for name, mat in sorted(self.matrices.items())
            },
        }

    def __repr__(self):
        return f"Representation(dim_vector={list(self.dim_vector)})"


def rep_from_dict(algebra, data):
    mats = {
        name: [[parse_rational(x) for x in row] for row in rows]
        for name, rows in data.get("matrices", {}).items()
    }
    return Representation(algebra, data["dim_vector"], mats)


def load_representation(algebra, path):
    with open(path, "r", encoding="utf-8") as fh:
        return rep_from_dict(algebra, json.load(fh))


def save_representation(rep, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rep.to_file_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- standard modules ------------------------------------------------------


def zero_module(algebra):
    return Representation(algebra, [0] * algebra.n, {}, _check=False)


def simple(algebra, v):
    dims = [0] * algebra.n
    dims[algebra.vindex[str(v)]] = 1
    # loops at v act by zero; admissibility makes this a module
    return Representation(algebra, dims, {})


def projective(algebra, v):
    """P_v = A e_v with basis the residue paths starting at v."""
    v = str(v)
    paths = {
        w: algebra.pair_basis(v, w) for w in algebra.vertices
    }
    dims = [len(paths[w]) for w in algebra.vertices]
    index = {w: {pk: i for i, pk in enumerate(paths[w])} for w in paths}
    mats = {}
    for a in algebra.quiver.arrows:
        src, tgt = a.source, a.target
        m = _zero_mat(len(paths[tgt]), len(paths[src]))
        for j, pk in enumerate(paths[src]):
            nf = algebra.nf_path((pk[0], pk[1] + (a.name,)))
            for out_pk, c in nf.items():
                m[index[tgt][out_pk]][j] = c
        mats[a.name] = m
    rep = Representation(algebra, dims, mats, _check=False)
    rep._proj_vertex = v
    rep._proj_paths = paths
    return rep


def injective(algebra, v):
    """I_v = D(e_v A); at vertex j it is the dual of span(paths j -> v)."""
    v = str(v)
    paths = {w: algebra.pair_basis(w, v) for w in algebra.vertices}
    dims = [len(paths[w]) for w in algebra.vertices]
    index = {w: {pk: i for i, pk in enumerate(paths[w])} for w in paths}
    mats = {}
    for a in algebra.quiver.arrows:
        src, tgt = a.source, a.target
        # dual of right multiplication e_v A e_tgt -> e_v A e_src
        m = _zero_mat(len(paths[tgt]), len(paths[src]))
        for j, pk in enumerate(paths[tgt]):
            nf = algebra.nf_path((a.source, (a.name,) + pk[1]))
            for out_pk, c in nf.items():
                m[index[tgt][pk]][index[src][out_pk]] = c
        mats[a.name] = m
    return Representation(algebra, dims, mats, _check=False)


def direct_sum(reps):
    if not reps:
        raise ValueError("direct_sum of nothing")
    algebra = reps[0].algebra
    for r in reps:
        if not algebra.same_algebra(r.algebra):
            raise AlgebraMismatch("summands over different algebras")
    dims = [
        sum(r.dim_vector[i] for r in reps) for i in range(algebra.n)
    ]
    mats = {}
    for a in algebra.quiver.arrows:
        si, ti = algebra.vindex[a.source], algebra.vindex[a.target]
        m = _zero_mat(dims[ti], dims[si])
        ro = co = 0
        for r in reps:
            block = r.matrices[a.name]
            for i in range(r.dim_vector[ti]):
                for j in range(r.dim_vector[si]):
                    m[ro + i][co + j] = block[i][j]
            ro += r.dim_vector[ti]
            co += r.dim_vector[si]
        mats[a.name] = m
    return Representation(algebra, dims, mats, _check=False)


def regular_module(algebra):
    return direct_sum([projective(algebra, v) for v in algebra.vertices])


def dual_representation(rep):
    """D(M) as a module over the opposite algebra (matrices transposed)."""
    op = rep.algebra.opposite()
    mats = {}
    for a in rep.algebra.quiver.arrows:
        m = rep.matrices[a.name]
        mats[a.name] = [list(col) for col in zip(*m)] if m else []
    return Representation(op, rep.dim_vector, mats, _check=False)


# -- morphisms --------------------------------------------------------------


class MorphismMatrix:
    """Morphism of representations: one block per vertex, intertwining."""

    def __init__(self, source, target, blocks, _check=True):
        self.source = source
        self.target = target
        self.blocks = {
            v: _freeze(blocks.get(v, _zero_mat(target.vdim(v), source.vdim(v))))
            for v in source.algebra.vertices
        }
        if _check and not self.intertwines():
            raise ValueError("blocks do not satisfy intertwining equations")

    def intertwines(self):
        M, N = self.source, self.target
        for a in M.algebra.quiver.arrows:
            i, j = a.source, a.target
            lhs = _mmul(
                self.blocks[j], M.matrices[a.name],
                N.vdim(j), M.vdim(j), M.vdim(i),
            )
            rhs = _mmul(
                N.matrices[a.name], self.blocks[i],
                N.vdim(j), N.vdim(i), M.vdim(i),
            )
            if lhs != rhs:
                return False
        return True

    def block(self, v):
        return self.blocks[v]

    def is_zero(self):
        return all(
            not x for b in self.blocks.values() for row in b for x in row
        )

    def compose(self, other):
        """self after other (other: X -> Y, self: Y -> Z)."""
        X, Z = other.source, self.target
        blocks = {}
        for v in X.algebra.vertices:
            blocks[v] = _mmul(
                self.blocks[v], other.blocks[v],
                Z.vdim(v), self.source.vdim(v), X.vdim(v),
            )
        return MorphismMatrix(X, Z, blocks, _check=False)

    def add(self, other):
        blocks = {
            v: [
                [x + y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.blocks[v], other.blocks[v])
            ]
            for v in self.blocks
        }
        return MorphismMatrix(self.source, self.target, blocks, _check=False)

    def scale(self, c):
        c = Fraction(c)
        blocks = {
            v: [[c * x for x in row] for row in self.blocks[v]]
            for v in self.blocks
        }
        return MorphismMatrix(self.source, self.target, blocks, _check=False)

    def total_rank(self):
        return sum(
            linalg.rank([list(r) for r in b]) for b in self.blocks.values()
        )

    def is_invertible(self):
        M, N = self.source, self.target
        for v in M.algebra.vertices:
            if M.vdim(v) != N.vdim(v):
                return False
            b = self.blocks[v]
            if M.vdim(v) and linalg.rank([list(r) for r in b]) != M.vdim(v):
                return False
        return True

    @staticmethod
    def identity(rep):
        return MorphismMatrix(
            rep, rep, {v: _ident(rep.vdim(v)) for v in rep.algebra.vertices},
            _check=False,
        )


def _hom_system(M, N):
    """Intertwining system, per-arrow stacking.  Unknown layout: for each
    vertex v the block f_v is vectorized row-major at offset off[v]."""
    A = M.algebra
    off = {}
    total = 0
    for v in A.vertices:
        off[v] = total
        total += N.vdim(v) * M.vdim(v)
    rows = []
    for a in A.quiver.arrows:
        i, j = a.source, a.target
        Ma = M.matrices[a.name]
        Na = N.matrices[a.name]
        for r in range(N.vdim(j)):
            for c in range(M.vdim(i)):
                row = [Fraction(0)] * total
                for k in range(M.vdim(j)):
                    if Ma[k][c]:
                        row[off[j] + r * M.vdim(j) + k] += Ma[k][c]
                for k in range(N.vdim(i)):
                    if Na[r][k]:
                        row[off[i] + k * M.vdim(i) + c] -= Na[r][k]
                rows.append(row)
    return rows, off, total


def hom_space(M, N):
    """Basis of Hom(M, N) as MorphismMatrix objects (exact)."""
    if not M.algebra.same_algebra(N.algebra):
        raise AlgebraMismatch("hom between modules over different algebras")
    if M.is_zero() or N.is_zero():
        return []
    rows, off, total = _hom_system(M, N)
    if total == 0:
        return []
    basis = linalg.kernel_basis(rows) if rows else [
        list(col) for col in linalg.identity(total)
    ]
    out = []
    for vec in basis:
        blocks = {}
        for v in M.algebra.vertices:
            dn, dm = N.vdim(v), M.vdim(v)
            blocks[v] = [
                [vec[off[v] + r * dm + c] for c in range(dm)]
                for r in range(dn)
            ]
        out.append(MorphismMatrix(M, N, blocks, _check=False))
    return out


def hom_dim(M, N):
    """dim Hom(M, N), via the nullity of the intertwining system."""
    if not M.algebra.same_algebra(N.algebra):
        raise AlgebraMismatch("hom between modules over different algebras")
    if M.is_zero() or N.is_zero():
        return 0
    rows, _off, total = _hom_system(M, N)
    if not rows:
        return total
    return linalg.nullity(rows)


# -- endomorphism algebras ---------------------------------------------------


class EndAlgebra:
    def __init__(self, module, basis, radical_basis):
        self.module = module
        self.basis = basis
        self.radical_basis = radical_basis
        self.top_dimension = len(basis) - len(radical_basis)

    @property
    def dimension(self):
        return len(self.basis)


def end_algebra(M):
    """End(M) with its radical (kernel of the trace form; char 0)."""
    if M.is_zero():
        raise ZeroModule("end_algebra of the zero module")
    basis = hom_space(M, M)
    e = len(basis)
    # Gram matrix of the trace form tr(f g) on M; its kernel is rad End
    # (the form is associative, its radical is a nil ideal, and in char 0
    # nondegeneracy on the semisimple quotient is classical)
    gram = _zero_mat(e, e)
    for i in range(e):
        for j in range(i, e):
            t = Fraction(0)
            for v in M.algebra.vertices:
                fi, fj = basis[i].blocks[v], basis[j].blocks[v]
                d = M.vdim(v)
                for r in range(d):
                    for c in range(d):
                        if fi[r][c] and fj[c][r]:
                            t += fi[r][c] * fj[c][r]
            gram[i][j] = t
            gram[j][i] = t
    rad_coeffs = linalg.kernel_basis(gram) if e else []
    radical = [_combine(basis, vec) for vec in rad_coeffs]
    return EndAlgebra(M, basis, radical)


def _combine(morphisms, coeffs):
    out = None
    for f, c in zip(morphisms, coeffs):
        if not c:
            continue
        term = f.scale(c)
        out = term if out is None else out.add(term)
    if out is None:
        out = morphisms[0].scale(0)
    return out


def is_brick(M):
    if M.is_zero():
        raise ZeroModule("is_brick of the zero module")
    return hom_dim(M, M) == 1


# -- subquotients ------------------------------------------------------------


class SubQuotient:
    """A subrepresentation (rep + inclusion) or quotient (rep + projection)."""

    def __init__(self, rep, morphism):
        self.rep = rep
        self.morphism = morphism


def _column_basis(columns, dim):
    """Echelonized basis of the span of column vectors of length dim."""
    if not columns:
        return []
    rows = linalg.row_space_basis([list(c) for c in columns])
    return rows  # each row is a vector of length dim


def subrep_from_bases(M, vertex_bases, check=True):
    """Subrepresentation with given per-vertex spanning sets (as vectors)."""
    A = M.algebra
    bases = {}
    for v in A.vertices:
        vecs = vertex_bases.get(v, [])
        bases[v] = _column_basis(vecs, M.vdim(v))
    # closure check / arrow maps: M(a) B_src must lie in span(B_tgt)
    dims = [len(bases[v]) for v in A.vertices]
    mats = {}
    for a in A.quiver.arrows:
        src, tgt = a.source, a.target
        cols = []
        for b in bases[src]:
            img = [
                sum(
                    (M.matrices[a.name][r][c] * b[c] for c in range(M.vdim(src))),
                    Fraction(0),
                )
                for r in range(M.vdim(tgt))
            ]
            coords = _coords_in_basis(bases[tgt], img)
            if coords is None:
                raise NotSubrepresentation(
                    f"not closed under arrow {a.name!r}"
                )
            cols.append(coords)
        k_src, k_tgt = len(bases[src]), len(bases[tgt])
        m = _zero_mat(k_tgt, k_src)
        for j, coords in enumerate(cols):
            for i in range(k_tgt):
                m[i][j] = coords[i]
        mats[a.name] = m
    sub = Representation(M.algebra, dims, mats, _check=False)
    incl_blocks = {
        v: [
            [bases[v][j][i] for j in range(len(bases[v]))]
            for i in range(M.vdim(v))
        ]
        for v in A.vertices
    }
    incl = MorphismMatrix(sub, M, incl_blocks, _check=check)
    return SubQuotient(sub, incl)


def _coords_in_basis(basis_rows, vec):
    if not basis_rows:
        return [] if all(not x for x in vec) else None
    cols = [list(b) for b in zip(*basis_rows)]  # dim x k
    return linalg.solve(cols, list(vec))


def submodule_generated(M, vertex_vectors):
    """Smallest subrepresentation containing the given graded vectors."""
    A = M.algebra
    spans = {v: [list(x) for x in vertex_vectors.get(v, [])] for v in A.vertices}
    changed = True
    while changed:
        changed = False
        for a in A.quiver.arrows:
            src, tgt = a.source, a.target
            cur = spans[tgt]
            cur_rows = _column_basis(cur, M.vdim(tgt))
            for b in spans[src]:
                img = [
                    sum(
                        (
                            M.matrices[a.name][r][c] * b[c]
                            for c in range(M.vdim(src))
                        ),
                        Fraction(0),
                    )
                    for r in range(M.vdim(tgt))
                ]
                if any(img) and not linalg.in_span(cur_rows, img):
                    spans[tgt].append(img)
                    cur_rows = _column_basis(spans[tgt], M.vdim(tgt))
                    changed = True
    return subrep_from_bases(M, spans, check=False)


def kernel_of_morphism(f):
    M = f.source
    bases = {}
    for v in M.algebra.vertices:
        block = [list(r) for r in f.blocks[v]]
        if M.vdim(v) == 0:
            bases[v] = []
        elif not block or f.target.vdim(v) == 0:
            bases[v] = [list(e) for e in linalg.identity(M.vdim(v))]
        else:
            bases[v] = linalg.kernel_basis(block)
    return subrep_from_bases(M, bases, check=False)


def image_of_morphism(f):
    """Image as a subrepresentation of the target, plus the coimage map."""
    N = f.target
    bases = {}
    for v in N.algebra.vertices:
        cols = [
            [f.blocks[v][r][c] for r in range(N.vdim(v))]
            for c in range(f.source.vdim(v))
        ]
        bases[v] = [c for c in cols if any(c)]
    sub = subrep_from_bases(N, bases, check=False)
    # factorization f = incl . surj
    surj_blocks = {}
    for v in N.algebra.vertices:
        ib = sub.morphism.blocks[v]  # N.vdim x k
        basis_rows = [
            [ib[i][j] for i in range(N.vdim(v))] for j in range(len(ib[0]) if ib else 0)
        ]
        cols = []
        for c in range(f.source.vdim(v)):
            col = [f.blocks[v][r][c] for r in range(N.vdim(v))]
            coords = _coords_in_basis(basis_rows, col)
            if coords is None:
                raise RuntimeError("image column escaped its own span")
            cols.append(coords)
        k = sub.rep.vdim(v)
        m = _zero_mat(k, f.source.vdim(v))
        for j, coords in enumerate(cols):
            for i in range(k):
                m[i][j] = coords[i]
        surj_blocks[v] = m
    surj = MorphismMatrix(f.source, sub.rep, surj_blocks, _check=False)
    return sub, surj


def quotient_module(M, sub: SubQuotient):
    """M / sub with the projection morphism."""
    A = M.algebra
    proj_blocks = {}
    dims = []
    for v in A.vertices:
        d = M.vdim(v)
        ib = sub.morphism.blocks[v]
        k = sub.rep.vdim(v)
        sub_rows = [[ib[i][j] for i in range(d)] for j in range(k)]
        red, pivots = linalg.rref(sub_rows) if sub_rows else ([], [])
        if len(pivots) != k:
            raise NotSubrepresentation("inclusion blocks are not injective")
        free = [c for c in range(d) if c not in set(pivots)]
        dims.append(len(free))
        # full change of basis F = [sub basis | complement unit vectors]
        F = [[Fraction(0)] * d for _ in range(d)]
        for j in range(k):
            for i in range(d):
                F[i][j] = ib[i][j]
        for t, c in enumerate(free):
            F[c][k + t] = Fraction(1)
        Finv = linalg.inverse(F) if d else []
        proj_blocks[v] = [Finv[k + t] for t in range(len(free))] if d else []
    mats = {}
    for a in A.quiver.arrows:
        src, tgt = a.source, a.target
        # Q(a) = proj_tgt . M(a) . section_src, section = complement embed
        d_s, d_t = M.vdim(src), M.vdim(tgt)
        q_s, q_t = dims[A.vindex[src]], dims[A.vindex[tgt]]
        sec = _section_from_proj(proj_blocks[src], d_s, q_s)
        tmp = _mmul(M.matrices[a.name], sec, d_t, d_s, q_s)
        mats[a.name] = _mmul(proj_blocks[tgt], tmp, q_t, d_t, q_s)
    quot = Representation(A, dims, mats, _check=False)
    proj = MorphismMatrix(M, quot, proj_blocks, _check=False)
    return SubQuotient(quot, proj)


def _section_from_proj(proj, d, q):
    """Right inverse of the projection block (solve proj . s = id)."""
    if q == 0:
        return [[] for _ in range(d)]
    cols = []
    for j in range(q):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(q)]
        sol = linalg.solve([list(r) for r in proj], rhs)
        cols.append(sol)
    return [[cols[j][i] for j in range(q)] for i in range(d)]


# -- annihilator -------------------------------------------------------------


def annihilator(M) -> TwoSidedIdeal:
    """Basis of {a in A : aM = 0} as a two-sided ideal (per-pair kernels)."""
    A = M.algebra
    gens = []
    for (src, tgt), paths in A.basis_by_pair.items():
        ds, dt = M.vdim(src), M.vdim(tgt)
        if not paths:
            continue
        if ds == 0 or dt == 0:
            for pk in paths:
                gens.append({A.basis_index[pk]: Fraction(1)})
            continue
        rows = []  # one row per matrix entry, one column per path
        acts = [M.act_path(pk) for pk in paths]
        for r in range(dt):
            for c in range(ds):
                rows.append([acts[k][r][c] for k in range(len(paths))])
        for vec in linalg.kernel_basis(rows):
            gens.append(
                {
                    A.basis_index[pk]: vec[k]
                    for k, pk in enumerate(paths)
                    if vec[k]
                }
            )
    return TwoSidedIdeal(A, [RawElement(g) for g in gens])


class RawElement:
    """Wrapper letting TwoSidedIdeal accept arbitrary algebra elements."""

    def __init__(self, vector):
        self.vector = dict(vector)


def is_faithful(M) -> bool:
    return annihilator(M).is_zero()

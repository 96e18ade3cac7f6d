"""Minimal projective presentations, Nakayama functor, AR translates,
g-vectors, homological dimensions, the brick-label map and the
non-tau-rigid brick quotient construction.

A presentation is stored in path-coefficient form: the map P1 -> P0 with
P1 = +Ae_{w_t}, P0 = +Ae_{v_s} is the block matrix F[t][s] with entries in
e_{w_t} A e_{v_s} (spans of paths v_s -> w_t).  The Nakayama functor is
applied blockwise: nu sends Ae_v to D(e_v A) and a block a to the dual of
left multiplication by a, so tau(M) is the kernel of an explicit morphism
between injective representations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .decomp import decompose, indecomposable_summands
from .errors import (
    InputIsBrick,
    NotIndecomposable,
    NotTauRigid,
    SearchExhausted,
)
from .modules import (
    MorphismMatrix,
    Representation,
    dual_representation,
    hom_dim,
    image_of_morphism,
    is_brick,
    kernel_of_morphism,
    quotient_module,
    submodule_generated,
    zero_module,
)


@dataclass(frozen=True)
class AboveBound:
    bound: int

    def __repr__(self):
        return f"AboveBound({self.bound})"


@dataclass(frozen=True)
class GVector:
    """Integer vector in the basis [P_1 .. P_n] of K_0(proj A)."""

    coords: tuple

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __add__(self, other):
        return GVector([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return GVector([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return GVector([-a for a in self.coords])

    def is_zero(self):
        return not any(self.coords)

    def plus(self):
        return GVector([max(0, c) for c in self.coords])

    def minus(self):
        return GVector([-min(0, c) for c in self.coords])

    def one_norm(self):
        return sum(abs(c) for c in self.coords)

    def normalized(self):
        """v-bar: rational coordinates with sum of absolute values 1."""
        s = self.one_norm()
        if s == 0:
            raise ValueError("zero g-vector has no normalization")
        return tuple(Fraction(c, s) for c in self.coords)

    def primitive(self):
        g = 0
        for c in self.coords:
            g = gcd(g, abs(c))
        if g <= 1:
            return self
        return GVector([c // g for c in self.coords])

    def __repr__(self):
        return f"GVector({list(self.coords)})"


class ProjectivePresentation:
    """Minimal presentation P1 -> P0 -> M -> 0 in path-coefficient form."""

    def __init__(self, algebra, p0_vertices, p1_vertices, blocks, module):
        self.algebra = algebra
        self.p0_vertices = tuple(p0_vertices)
        self.p1_vertices = tuple(p1_vertices)
        self.blocks = blocks  # blocks[t][s]: element of e_{w_t} A e_{v_s}
        self.module = module

    def g_vector(self) -> GVector:
        n = self.algebra.n
        g = [0] * n
        for v in self.p0_vertices:
            g[self.algebra.vindex[v]] += 1
        for w in self.p1_vertices:
            g[self.algebra.vindex[w]] -= 1
        return GVector(g)

    def p0_module(self):
        return _proj_sum(self.algebra, self.p0_vertices)

    def p1_module(self):
        return _proj_sum(self.algebra, self.p1_vertices)

    def map_morphism(self):
        """The map P1 -> P0 as an explicit morphism of representations."""
        P1, lay1 = self.p1_module()
        P0, lay0 = self.p0_module()
        A = self.algebra
        blocks = {}
        for v in A.vertices:
            rows, cols = len(lay0[v]), len(lay1[v])
            m = [[Fraction(0)] * cols for _ in range(rows)]
            for cj, (t, q) in enumerate(lay1[v]):
                # image of basis path q in summand t: q acting on f(e_{w_t})
                for s in range(len(self.p0_vertices)):
                    elem = self.blocks[t][s]
                    for pk, c in elem.items():
                        prod = A.nf_path((pk[0], pk[1] + q[1]))
                        for out_pk, c2 in prod.items():
                            ri = lay0[v].index((s, out_pk))
                            m[ri][cj] += c * c2
            blocks[v] = m
        return MorphismMatrix(P1, P0, blocks, _check=False), P1, P0


def _proj_sum(algebra, vertices):
    """Direct sum of indecomposable projectives with a coordinate layout:
    layout[v] = ordered list of (summand index, path key)."""
    layout = {v: [] for v in algebra.vertices}
    for s, pv in enumerate(vertices):
        for w in algebra.vertices:
            for pk in algebra.pair_basis(pv, w):
                layout[w].append((s, pk))
    dims = [len(layout[v]) for v in algebra.vertices]
    pos = {v: {key: i for i, key in enumerate(layout[v])} for v in layout}
    mats = {}
    for a in algebra.quiver.arrows:
        src, tgt = a.source, a.target
        m = [[Fraction(0)] * dims[algebra.vindex[src]] for _ in range(dims[algebra.vindex[tgt]])]
        for j, (s, pk) in enumerate(layout[src]):
            for out_pk, c in algebra.nf_path((pk[0], pk[1] + (a.name,))).items():
                m[pos[tgt][(s, out_pk)]][j] = c
        mats[a.name] = m
    rep = Representation(algebra, dims, mats, _check=False)
    return rep, layout


def _inj_sum(algebra, vertices):
    """Direct sum of indecomposable injectives with coordinate layout:
    layout[v] = ordered list of (summand index, path key v -> w_summand)."""
    layout = {v: [] for v in algebra.vertices}
    for s, iv in enumerate(vertices):
        for w in algebra.vertices:
            for pk in algebra.pair_basis(w, iv):
                layout[w].append((s, pk))
    dims = [len(layout[v]) for v in algebra.vertices]
    pos = {v: {key: i for i, key in enumerate(layout[v])} for v in layout}
    mats = {}
    for a in algebra.quiver.arrows:
        src, tgt = a.source, a.target
        m = [[Fraction(0)] * dims[algebra.vindex[src]] for _ in range(dims[algebra.vindex[tgt]])]
        # dual of right multiplication; entry[x][y] = coeff of y in a.x
        for i, (s, pk) in enumerate(layout[tgt]):
            for out_pk, c in algebra.nf_path((a.source, (a.name,) + pk[1])).items():
                m[i][pos[src][(s, out_pk)]] = c
        mats[a.name] = m
    rep = Representation(algebra, dims, mats, _check=False)
    return rep, layout


def top_generators(M):
    """One generator per top composition factor: list of (vertex, vector)."""
    A = M.algebra
    gens = []
    for v in A.vertices:
        d = M.vdim(v)
        if d == 0:
            continue
        rad_cols = []
        for a in A.quiver.arrows_into[v]:
            mat = M.matrices[a.name]
            for c in range(M.vdim(a.source)):
                col = [mat[r][c] for r in range(d)]
                if any(col):
                    rad_cols.append(col)
        rad_rows = linalg.row_space_basis(rad_cols) if rad_cols else []
        # complement of the radical at v via pivot columns
        pivots = set()
        for row in rad_rows:
            pivots.add(next(i for i, x in enumerate(row) if x))
        for i in range(d):
            if i not in pivots:
                vec = [Fraction(0)] * d
                vec[i] = Fraction(1)
                gens.append((v, vec))
    return gens


def projective_cover_map(M):
    """Minimal cover P0 -> M (P0 from top multiplicities)."""
    A = M.algebra
    gens = top_generators(M)
    p0_vertices = [v for v, _vec in gens]
    P0, layout = _proj_sum(A, p0_vertices)
    blocks = {}
    for v in A.vertices:
        d = M.vdim(v)
        cols = len(layout[v])
        m = [[Fraction(0)] * cols for _ in range(d)]
        for j, (s, pk) in enumerate(layout[v]):
            gv, gvec = gens[s]
            act = M.act_path(pk)
            for r in range(d):
                val = sum(
                    (act[r][c] * gvec[c] for c in range(M.vdim(gv))),
                    Fraction(0),
                )
                m[r][j] = val
        blocks[v] = m
    cover = MorphismMatrix(P0, M, blocks, _check=False)
    return cover, P0, layout, p0_vertices


def minimal_presentation(M) -> ProjectivePresentation:
    cached = getattr(M, "_min_pres_cache", None)
    if cached is not None:
        return cached
    A = M.algebra
    if M.is_zero():
        pres = ProjectivePresentation(A, [], [], [], M)
        M._min_pres_cache = pres
        return pres
    cover, P0, layout, p0_vertices = projective_cover_map(M)
    syz = kernel_of_morphism(cover)  # subrep of P0 with inclusion
    K = syz.rep
    kgens = top_generators(K)
    p1_vertices = [w for w, _vec in kgens]
    blocks = []
    for w, kvec in kgens:
        # lift generator into P0 coordinates at vertex w
        incl = syz.morphism.blocks[w]
        d = P0.vdim(w)
        lifted = [
            sum((incl[r][c] * kvec[c] for c in range(K.vdim(w))), Fraction(0))
            for r in range(d)
        ]
        row = []
        for s in range(len(p0_vertices)):
            elem = {}
            for i, (s2, pk) in enumerate(layout[w]):
                if s2 == s and lifted[i]:
                    elem[pk] = lifted[i]
            row.append(elem)
        blocks.append(row)
    pres = ProjectivePresentation(A, p0_vertices, p1_vertices, blocks, M)
    M._min_pres_cache = pres
    return pres


def syzygy(M):
    if M.is_zero():
        return M
    cover, _P0, _layout, _p0 = projective_cover_map(M)
    return kernel_of_morphism(cover).rep


def is_projective(M) -> bool:
    return M.is_zero() or not minimal_presentation(M).p1_vertices


def g_vector(M) -> GVector:
    return minimal_presentation(M).g_vector()


def nakayama_morphism(pres: ProjectivePresentation):
    """nu applied to the presentation map: nu(P1) -> nu(P0)."""
    A = pres.algebra
    I1, lay1 = _inj_sum(A, pres.p1_vertices)
    I0, lay0 = _inj_sum(A, pres.p0_vertices)
    pos0 = {v: {key: i for i, key in enumerate(lay0[v])} for v in lay0}
    blocks = {}
    for v in A.vertices:
        rows, cols = len(lay0[v]), len(lay1[v])
        m = [[Fraction(0)] * cols for _ in range(rows)]
        # column (t, x: v -> w_t); block (s,t) is the dual of left
        # multiplication by a_{ts} mapping e_{v_s}Ae_v -> e_{w_t}Ae_v
        for cj, (t, x) in enumerate(lay1[v]):
            for s in range(len(pres.p0_vertices)):
                elem = pres.blocks[t][s]
                for y, i in pos0[v].items():
                    s2, ypk = y
                    if s2 != s:
                        continue
                    # entry = coefficient of x in nf(y . a_{ts})
                    for pk, c in elem.items():
                        prod = A.nf_path((ypk[0], ypk[1] + pk[1]))
                        coeff = prod.get(x)
                        if coeff:
                            m[i][cj] += c * coeff
        blocks[v] = m
    return MorphismMatrix(I1, I0, blocks, _check=False), I1, I0


def tau(M) -> Representation:
    """Auslander-Reiten translate via the Nakayama functor."""
    cached = getattr(M, "_tau_cache", None)
    if cached is not None:
        return cached
    pres = minimal_presentation(M)
    if not pres.p1_vertices:
        t = zero_module(M.algebra)
    else:
        nu, _I1, _I0 = nakayama_morphism(pres)
        t = kernel_of_morphism(nu).rep
    M._tau_cache = t
    return t


def tau_minus(M) -> Representation:
    """Inverse translate via the opposite algebra: Tr D, i.e. tau over op."""
    op_tau = tau(dual_representation(M))
    return dual_representation(op_tau)


def transpose_module(M) -> Representation:
    """Tr M over the opposite algebra (cokernel of the dualized
    presentation); zero for projective M."""
    pres = minimal_presentation(M)
    A = M.algebra
    op = A.opposite()
    if not pres.p1_vertices:
        return zero_module(op)
    # dualized map:  +P^op_{v_s}  ->  +P^op_{w_t}, block (t,s) = reversed
    # paths of blocks[t][s]
    src_rep, src_lay = _proj_sum(op, pres.p0_vertices)
    tgt_rep, tgt_lay = _proj_sum(op, pres.p1_vertices)
    pos_t = {v: {key: i for i, key in enumerate(tgt_lay[v])} for v in tgt_lay}
    blocks = {}
    for v in op.vertices:
        rows, cols = len(tgt_lay[v]), len(src_lay[v])
        m = [[Fraction(0)] * cols for _ in range(rows)]
        for cj, (s, q) in enumerate(src_lay[v]):
            for t in range(len(pres.p1_vertices)):
                elem = pres.blocks[t][s]
                for pk, c in elem.items():
                    rev = (pres.p1_vertices[t], tuple(reversed(pk[1])))
                    for out_pk, c2 in op.nf_path(
                        (rev[0], rev[1] + q[1])
                    ).items():
                        m[pos_t[v][(t, out_pk)]][cj] += c * c2
        blocks[v] = m
    f = MorphismMatrix(src_rep, tgt_rep, blocks, _check=False)
    img, _surj = image_of_morphism(f)
    return quotient_module(tgt_rep, img).rep


# -- hom/tau dimensions through presentations --------------------------------


def presentation_action_matrix(pres: ProjectivePresentation, M):
    """Matrix of Hom(P0, M) -> Hom(P1, M): kernel is Hom(N, M), cokernel
    is dual to Hom(M, tau N) for N = presented module."""
    A = pres.algebra
    row_dims = [M.vdim(w) for w in pres.p1_vertices]
    col_dims = [M.vdim(v) for v in pres.p0_vertices]
    total_rows = sum(row_dims)
    total_cols = sum(col_dims)
    mat = [[Fraction(0)] * total_cols for _ in range(total_rows)]
    ro = 0
    for t, w in enumerate(pres.p1_vertices):
        co = 0
        for s, v in enumerate(pres.p0_vertices):
            elem = pres.blocks[t][s]
            if elem:
                act = M.act_pair_element(elem, v, w)
                for i in range(row_dims[t]):
                    for j in range(col_dims[s]):
                        mat[ro + i][co + j] = act[i][j]
            co += col_dims[s]
        ro += row_dims[t]
    return mat, total_rows, total_cols


def hom_and_tau_hom(N, M):
    """(dim Hom(N, M), dim Hom(M, tau N)) from one exact rank."""
    if N.is_zero() or M.is_zero():
        return 0, 0
    pres = minimal_presentation(N)
    mat, nrows, ncols = presentation_action_matrix(pres, M)
    r = linalg.rank(mat) if (nrows and ncols) else 0
    return ncols - r, nrows - r


def hom_tau_dim(M, N) -> int:
    """dim Hom(M, tau N)."""
    return hom_and_tau_hom(N, M)[1]


def hom_dim_fast(N, M) -> int:
    """dim Hom(N, M) via N's presentation (cheaper than the intertwining
    system for large modules)."""
    return hom_and_tau_hom(N, M)[0]


def is_tau_rigid(M) -> bool:
    return hom_tau_dim(M, M) == 0


def proj_dimension(M, bound=12):
    if M.is_zero():
        return 0
    cur = M
    for k in range(bound + 1):
        if is_projective(cur):
            return k
        cur = syzygy(cur)
    return AboveBound(bound)


def inj_dimension(M, bound=12):
    if M.is_zero():
        return 0
    return proj_dimension(dual_representation(M), bound)


def global_dimension(algebra, bound=12):
    worst = 0
    for v in algebra.vertices:
        from .modules import simple

        pd = proj_dimension(simple(algebra, v), bound)
        if isinstance(pd, AboveBound):
            return pd
        worst = max(worst, pd)
    return worst


# -- brick-label map Psi ------------------------------------------------------


def brick_label(X) -> Representation:
    """Psi(X) = X / rad(End X) . X for indecomposable tau-rigid X."""
    if hom_tau_dim(X, X) != 0:
        raise NotTauRigid("brick_label needs a tau-rigid module")
    if hom_dim(X, X) == 1:
        return X  # brick already; radical of End is zero
    summands = decompose(X)
    if len(summands) != 1 or summands[0].multiplicity != 1:
        raise NotIndecomposable("brick_label needs an indecomposable module")
    from .decomp import _end_data

    end = _end_data(X)
    rad_vertex_vectors = {v: [] for v in X.algebra.vertices}
    for coeffs in end.rad_coords:
        f = end.combo(coeffs)
        for v in X.algebra.vertices:
            block = f.blocks[v]
            for c in range(X.vdim(v)):
                col = [block[r][c] for r in range(X.vdim(v))]
                if any(col):
                    rad_vertex_vectors[v].append(col)
    sub = submodule_generated(X, rad_vertex_vectors)
    B = quotient_module(X, sub).rep
    if not is_brick(B):
        raise RuntimeError("label of a tau-rigid module failed brick check")
    return B


def nontaurigid_brick_quotient(X, seed=0, budget=200) -> Representation:
    """A proper quotient of a non-brick indecomposable X that is a brick
    and not tau-rigid (existence per the constructive quotient argument);
    the postcondition is re-verified, never trusted."""
    if hom_dim(X, X) == 1:
        raise InputIsBrick("input is a brick")
    summands = decompose(X, seed)
    if len(summands) != 1 or summands[0].multiplicity != 1:
        raise NotIndecomposable("input must be indecomposable")
    rng = random.Random(seed)
    result = _brick_quotient_search(X, rng, budget=[budget])
    if result is None:
        raise SearchExhausted(
            "no candidate endomorphism produced a verified brick quotient"
        )
    return result


def _brick_quotient_search(X, rng, budget):
    from .decomp import _end_data

    end = _end_data(X)
    candidates = []
    for coeffs in end.rad_coords:
        f = end.combo(coeffs)
        if not f.is_zero():
            candidates.append(f)
    for _ in range(24):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in end.rad_coords]
        f = None
        for c, rc in zip(coeffs, end.rad_coords):
            if c:
                term = end.combo(rc).scale(c)
                f = term if f is None else f.add(term)
        if f is not None and not f.is_zero():
            candidates.append(f)
    candidates.sort(key=lambda f: f.total_rank())
    seen = set()
    for phi in candidates:
        if budget[0] <= 0:
            return None
        key = tuple(
            tuple(map(tuple, phi.blocks[v])) for v in X.algebra.vertices
        )
        if key in seen:
            continue
        seen.add(key)
        budget[0] -= 1
        img, _surj = image_of_morphism(phi)
        if img.rep.total_dim == 0 or img.rep.total_dim == X.total_dim:
            continue
        quot = quotient_module(X, img)
        # phi-bar: X/im -> im, induced on each indecomposable summand
        pieces = indecomposable_summands(quot.rep, seed=0)
        for C, incl, _proj, _warn in pieces:
            # induced map C -> im(phi): phi . section, nonzero check via
            # composition phi-bar . incl with phi-bar(x + im) = phi(x)
            lift = _lift_through_projection(quot.morphism, incl)
            composed = phi.compose(lift)
            if composed.is_zero():
                continue
            Y = _verify_or_recurse(C, rng, budget)
            if Y is not None:
                return Y
    return None


def _lift_through_projection(proj, incl):
    """Some lift s: C -> X with proj . s = incl (exists by surjectivity)."""
    X = proj.source
    C = incl.source
    blocks = {}
    for v in X.algebra.vertices:
        pv = [list(r) for r in proj.blocks[v]]
        dq, dx = proj.target.vdim(v), X.vdim(v)
        dc = C.vdim(v)
        m = [[Fraction(0)] * dc for _ in range(dx)]
        for j in range(dc):
            rhs = [incl.blocks[v][r][j] for r in range(dq)]
            sol = linalg.solve(pv, rhs) if dq else [Fraction(0)] * dx
            if sol is None:
                raise RuntimeError("projection is not surjective")
            for i in range(dx):
                m[i][j] = sol[i]
        blocks[v] = m
    return MorphismMatrix(C, X, blocks, _check=False)


def _verify_or_recurse(C, rng, budget):
    if C.total_dim == 0:
        return None
    if hom_dim(C, C) == 1:
        if hom_tau_dim(C, C) > 0:
            return C
        return None
    return _brick_quotient_search(C, rng, budget)

"""Bound quiver algebras kQ/I in explicit finite-dimensional form.

Paths are tuples of arrow names in *traversal* order: ``(a, b)`` means
"traverse a, then b" and corresponds to the composition written ``ba`` in
the right-to-left convention.  A basis element is ``(source_vertex,
arrow_tuple)``; the trivial path at v is ``(v, ())``.

``build_algebra`` reduces kQ/I to a residue path basis by closing the
relation span under arrow multiplication inside the length-truncated
algebra kQ/(I + rad^(l+1)), deepening l until every path of length l dies
(so rad^l is contained in the ideal and the truncation is exact).  For an
admissible ideal whose nilpotency degree fits the bound this constructs
kQ/I on the nose; otherwise RadicalBoundExceeded is raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .errors import ImproperIdeal, NonAdmissibleRelation, RadicalBoundExceeded

DEFAULT_MAX_PATH_LEN = 30


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


class Quiver:
    """Finite quiver with named vertices and arrows (loops and multiple
    arrows allowed)."""

    def __init__(self, vertices, arrows):
        vertices = [str(v) for v in vertices]
        if not vertices:
            raise ValueError("vertex list nonempty")
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex ids")
        self.vertices = tuple(vertices)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        arrs = []
        names = set()
        for a in arrows:
            if isinstance(a, Arrow):
                arr = a
            else:
                name, src, tgt = a
                arr = Arrow(str(name), str(src), str(tgt))
            if arr.name in names:
                raise ValueError(f"duplicate arrow name {arr.name!r}")
            if arr.source not in self.vindex or arr.target not in self.vindex:
                raise ValueError(f"arrow {arr.name!r} uses undeclared vertex")
            names.add(arr.name)
            arrs.append(arr)
        self.arrows = tuple(arrs)
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.arrows_from = {v: [] for v in self.vertices}
        self.arrows_into = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.arrows_from[a.source].append(a)
            self.arrows_into[a.target].append(a)

    @property
    def n(self):
        return len(self.vertices)

    def path_endpoints(self, src, arrows):
        """Validate composability of a traversal-order path; return target."""
        at = src
        for name in arrows:
            a = self.arrow_by_name.get(name)
            if a is None:
                raise ValueError(f"unknown arrow {name!r}")
            if a.source != at:
                raise ValueError(f"path {arrows} not composable at {name!r}")
            at = a.target
        return at

    def is_sink(self, v):
        return not self.arrows_from[v]

    def is_source(self, v):
        return not self.arrows_into[v]


class RelationElement:
    """Linear combination of parallel paths of length >= 2 (admissible)."""

    def __init__(self, terms):
        norm = []
        for coeff, path in terms:
            coeff = Fraction(coeff)
            if coeff:
                norm.append((coeff, tuple(str(a) for a in path)))
        if not norm:
            raise NonAdmissibleRelation("relation with no nonzero terms")
        self.terms = tuple(norm)

    def validate(self, quiver: Quiver):
        src = tgt = None
        for _coeff, path in self.terms:
            if len(path) < 2:
                raise NonAdmissibleRelation(
                    f"relation term {path} has length < 2"
                )
            first = quiver.arrow_by_name.get(path[0])
            if first is None:
                raise ValueError(f"unknown arrow {path[0]!r}")
            s = first.source
            t = quiver.path_endpoints(s, path)
            if src is None:
                src, tgt = s, t
            elif (s, t) != (src, tgt):
                raise NonAdmissibleRelation(
                    "relation terms do not share source and target"
                )
        return src, tgt

    def max_len(self):
        return max(len(p) for _c, p in self.terms)

    def __repr__(self):
        return "RelationElement(%s)" % " + ".join(
            f"{c}*{'.'.join(p)}" for c, p in self.terms
        )


def _order_key(pk):
    # graded order on paths inside one bucket: longer is larger
    return (len(pk[1]), pk[1])


class _IdealEchelon:
    """Per-(source,target) echelonized span of the ideal on raw paths."""

    def __init__(self, quiver, bound):
        self.quiver = quiver
        self.bound = bound
        self.rows = {}  # bucket -> {leading path_key -> {path_key: coeff}}

    def bucket_of(self, pk):
        src, arrows = pk
        return (src, self.quiver.path_endpoints(src, arrows))

    def reduce(self, el):
        el = {k: v for k, v in el.items() if v}
        while el:
            target = None
            for k in sorted(el, key=_order_key, reverse=True):
                if k in self.rows.get(self.bucket_of(k), {}):
                    target = k
                    break
            if target is None:
                break
            row = self.rows[self.bucket_of(target)][target]
            coef = el[target]
            for pk, c in row.items():
                nv = el.get(pk, Fraction(0)) - coef * c
                if nv:
                    el[pk] = nv
                else:
                    el.pop(pk, None)
        return el

    def insert(self, el):
        """Reduce and insert; returns the element's leading key or None."""
        el = self.reduce(el)
        if not el:
            return None
        lead = max(el, key=_order_key)
        inv = 1 / el[lead]
        el = {k: v * inv for k, v in el.items()}
        self.rows.setdefault(self.bucket_of(lead), {})[lead] = el
        return lead

    def close(self, generators):
        """Close the span of generators under arrow multiplication,
        truncating every product at the length bound (exact in the
        truncated algebra)."""
        pending = list(generators)
        quiver = self.quiver
        while pending:
            el = pending.pop()
            lead = self.insert(el)
            if lead is None:
                continue
            el = self.rows[self.bucket_of(lead)][lead]
            src, tgt = self.bucket_of(lead)
            for a in quiver.arrows_into[src]:
                ext = {}
                for (s, arrows), c in el.items():
                    if len(arrows) + 1 <= self.bound:
                        ext[(a.source, (a.name,) + arrows)] = c
                if ext:
                    pending.append(ext)
            for b in quiver.arrows_from[tgt]:
                ext = {}
                for (s, arrows), c in el.items():
                    if len(arrows) + 1 <= self.bound:
                        ext[(s, arrows + (b.name,))] = c
                if ext:
                    pending.append(ext)


class BoundQuiverAlgebra:
    """kQ/I with explicit path basis, multiplication and Cartan matrix."""

    def __init__(self, quiver, relations, basis, echelon, nilp, max_path_len):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.basis = tuple(basis)  # ordered path keys
        self.basis_index = {pk: i for i, pk in enumerate(self.basis)}
        self._echelon = echelon
        self._nilp = nilp  # paths of length >= nilp vanish
        self.max_path_len = max_path_len
        self.vertices = quiver.vertices
        self.vindex = quiver.vindex
        self.n = quiver.n
        self.dim = len(self.basis)
        by_pair = {}
        for pk in self.basis:
            by_pair.setdefault(self._bucket(pk), []).append(pk)
        self.basis_by_pair = by_pair
        self._mult_cache = {}
        self._nf_cache = {}
        self._op = None
        self.cartan = [
            [
                len(by_pair.get((self.vertices[j], self.vertices[i]), ()))
                for j in range(self.n)
            ]
            for i in range(self.n)
        ]

    # -- basic structure -------------------------------------------------

    def _bucket(self, pk):
        src, arrows = pk
        return (src, self.quiver.path_endpoints(src, arrows))

    def signature(self):
        return (
            self.vertices,
            tuple((a.name, a.source, a.target) for a in self.quiver.arrows),
            self.basis,
        )

    def same_algebra(self, other):
        return self is other or self.signature() == other.signature()

    def pair_basis(self, src, tgt):
        """Basis paths src -> tgt (spanning e_tgt A e_src)."""
        return self.basis_by_pair.get((src, tgt), [])

    def idempotent_key(self, v):
        return (v, ())

    def path_source(self, pk):
        return pk[0]

    def path_target(self, pk):
        return self.quiver.path_endpoints(*pk)

    # -- normal forms and multiplication ---------------------------------

    def nf_path(self, pk):
        """Normal form of a raw path as {basis path key: coeff}."""
        if pk in self._nf_cache:
            return self._nf_cache[pk]
        if len(pk[1]) >= self._nilp:
            res = {}
        else:
            red = self._echelon.reduce({pk: Fraction(1)})
            res = {k: v for k, v in red.items()}
        self._nf_cache[pk] = res
        return res

    def mult_basis(self, i, j):
        """Product basis[i] * basis[j] (traverse i then j) as {index: coeff}."""
        key = (i, j)
        cached = self._mult_cache.get(key)
        if cached is not None:
            return cached
        pi, pj = self.basis[i], self.basis[j]
        if self.path_target(pi) != self.path_source(pj):
            out = {}
        else:
            raw = (pi[0], pi[1] + pj[1])
            out = {
                self.basis_index[pk]: c for pk, c in self.nf_path(raw).items()
            }
        self._mult_cache[key] = out
        return out

    def elem_mult(self, x, y):
        """Product of elements given as {basis index: coeff}."""
        out = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, ck in self.mult_basis(i, j).items():
                    nv = out.get(k, Fraction(0)) + ci * cj * ck
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def idempotent_vector(self, v):
        return {self.basis_index[(v, ())]: Fraction(1)}

    def identity_vector(self):
        out = {}
        for v in self.vertices:
            out[self.basis_index[(v, ())]] = Fraction(1)
        return out

    def relation_vector(self, rel: RelationElement):
        out = {}
        for coeff, path in rel.terms:
            a = self.quiver.arrow_by_name[path[0]]
            for pk, c in self.nf_path((a.source, tuple(path))).items():
                idx = self.basis_index[pk]
                nv = out.get(idx, Fraction(0)) + coeff * c
                if nv:
                    out[idx] = nv
                else:
                    out.pop(idx, None)
        return out

    # -- opposite algebra -------------------------------------------------

    def opposite(self):
        """The opposite algebra (arrows and relation words reversed)."""
        if self._op is None:
            q = Quiver(
                self.vertices,
                [(a.name, a.target, a.source) for a in self.quiver.arrows],
            )
            rels = [
                RelationElement(
                    [(c, tuple(reversed(p))) for c, p in r.terms]
                )
                for r in self.relations
            ]
            self._op = build_algebra(q, rels, self.max_path_len)
            self._op._op = self
        return self._op

    # -- serialization ----------------------------------------------------

    def to_file_dict(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [
                {"name": a.name, "from": a.source, "to": a.target}
                for a in self.quiver.arrows
            ],
            "relations": [
                [
                    {"coeff": str(c), "path": list(p)}
                    for c, p in rel.terms
                ]
                for rel in self.relations
            ],
        }

    def __repr__(self):
        return (
            f"BoundQuiverAlgebra(rank={self.n}, dim={self.dim}, "
            f"vertices={list(self.vertices)})"
        )


def build_algebra(quiver, relations, max_path_len=DEFAULT_MAX_PATH_LEN):
    """Construct kQ/I as an explicit finite-dimensional algebra.

    Raises NonAdmissibleRelation when a relation term is shorter than 2 and
    RadicalBoundExceeded when paths of the maximal allowed length survive
    modulo the ideal (infinite-dimensional quotient, or bound too small).
    """
    if max_path_len < 1:
        raise ValueError("max_path_len must be positive")
    relations = [
        r if isinstance(r, RelationElement) else RelationElement(r)
        for r in relations
    ]
    for r in relations:
        r.validate(quiver)
    rel_len = max((r.max_len() for r in relations), default=2)
    if rel_len > max_path_len:
        raise RadicalBoundExceeded(
            f"relation of length {rel_len} exceeds max_path_len={max_path_len}"
        )

    start = max(2, rel_len)
    for bound in range(start, max_path_len + 1):
        result = _try_build(quiver, relations, bound, max_path_len)
        if result is not None:
            return result
    raise RadicalBoundExceeded(
        f"paths of length {max_path_len} are not contained in the ideal"
    )


def _try_build(quiver, relations, bound, max_path_len):
    ech = _IdealEchelon(quiver, bound)
    gens = []
    for r in relations:
        el = {}
        for coeff, path in r.terms:
            a = quiver.arrow_by_name[path[0]]
            pk = (a.source, tuple(path))
            el[pk] = el.get(pk, Fraction(0)) + coeff
        gens.append(el)
    ech.close(gens)

    # enumerate surviving paths level by level
    basis = []
    level = [(v, ()) for v in quiver.vertices]
    nilp = None
    length = 0
    while True:
        leading = set()
        for bucket_rows in ech.rows.values():
            leading.update(bucket_rows.keys())
        survivors = [pk for pk in level if pk not in leading]
        # a path is in the quotient basis iff it is not a leading term
        basis.extend(survivors)
        # does anything of this length survive modulo the ideal at all?
        any_nonzero = any(ech.reduce({pk: Fraction(1)}) for pk in level)
        if not any_nonzero:
            nilp = length
            break
        nxt = []
        for pk in level:
            src, arrows = pk
            tgt = quiver.path_endpoints(src, arrows)
            for a in quiver.arrows_from[tgt]:
                nxt.append((src, arrows + (a.name,)))
        if not nxt:
            nilp = length + 1
            break
        if length + 1 > bound:
            return None  # survivors extend beyond the bound: deepen
        level = nxt
        length += 1

    basis.sort(key=lambda pk: (len(pk[1]), quiver.vindex[pk[0]], pk[1]))
    return BoundQuiverAlgebra(
        quiver, relations, basis, ech, nilp, max_path_len
    )


def cartan_matrix(algebra: BoundQuiverAlgebra):
    """c_ij = dim e_i A e_j (number of basis paths j -> i)."""
    return [list(row) for row in algebra.cartan]


class TwoSidedIdeal:
    """Two-sided ideal of a built algebra, given by generators that are
    RelationElements or vertex idempotents; carries an echelonized closure
    basis on the algebra's path basis."""

    def __init__(self, algebra, generators):
        self.algebra = algebra
        self.generators = tuple(generators)
        self.closure_basis = self._close()

    def _generator_vectors(self):
        vecs = []
        for g in self.generators:
            if isinstance(g, RelationElement):
                g.validate(self.algebra.quiver)
                vecs.append(self.algebra.relation_vector(g))
            elif hasattr(g, "vector"):  # raw algebra element
                vecs.append(dict(g.vector))
            else:
                v = str(g)
                if v not in self.algebra.vindex:
                    raise ValueError(f"unknown vertex idempotent {g!r}")
                vecs.append(self.algebra.idempotent_vector(v))
        return [v for v in vecs if v]

    def _close(self):
        A = self.algebra
        # order basis indices so that longer paths lead
        weight = {
            idx: pos
            for pos, idx in enumerate(
                sorted(
                    range(A.dim),
                    key=lambda i: (len(A.basis[i][1]), A.basis[i]),
                )
            )
        }
        rows = {}  # leading index -> vector dict

        def reduce_vec(vec):
            vec = {k: v for k, v in vec.items() if v}
            while vec:
                lead = max(vec, key=lambda i: weight[i])
                if lead not in rows:
                    break
                coef = vec[lead]
                for k, c in rows[lead].items():
                    nv = vec.get(k, Fraction(0)) - coef * c
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
            return vec

        arrow_vecs = []
        for a in A.quiver.arrows:
            pk = (a.source, (a.name,))
            if pk in A.basis_index:
                arrow_vecs.append(A.basis_index[pk])

        pending = self._generator_vectors()
        while pending:
            vec = reduce_vec(pending.pop())
            if not vec:
                continue
            lead = max(vec, key=lambda i: weight[i])
            inv = 1 / vec[lead]
            vec = {k: v * inv for k, v in vec.items()}
            rows[lead] = vec
            for ai in arrow_vecs:
                left = A.elem_mult({ai: Fraction(1)}, vec)
                if left:
                    pending.append(left)
                right = A.elem_mult(vec, {ai: Fraction(1)})
                if right:
                    pending.append(right)
        return [rows[k] for k in sorted(rows)]

    def contains(self, vec):
        A = self.algebra
        weight = {
            idx: pos
            for pos, idx in enumerate(
                sorted(
                    range(A.dim),
                    key=lambda i: (len(A.basis[i][1]), A.basis[i]),
                )
            )
        }
        rows = {max(r, key=lambda i: weight[i]): r for r in self.closure_basis}
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            lead = max(vec, key=lambda i: weight[i])
            if lead not in rows:
                return False
            coef = vec[lead]
            for k, c in rows[lead].items():
                nv = vec.get(k, Fraction(0)) - coef * c
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return True

    @property
    def dimension(self):
        return len(self.closure_basis)

    def is_zero(self):
        return not self.closure_basis

    def dead_vertices(self):
        return [
            v
            for v in self.algebra.vertices
            if self.contains(self.algebra.idempotent_vector(v))
        ]


def quotient_algebra(algebra: BoundQuiverAlgebra, ideal: TwoSidedIdeal):
    """A/J as a bound quiver algebra on the surviving subquiver."""
    if ideal.algebra is not algebra and not ideal.algebra.same_algebra(algebra):
        raise ValueError("ideal does not live in the given algebra")
    if ideal.contains(algebra.identity_vector()):
        raise ImproperIdeal("ideal contains the identity")
    dead = set(ideal.dead_vertices())
    vertices = [v for v in algebra.vertices if v not in dead]
    if not vertices:
        raise ImproperIdeal("ideal contains all idempotents")
    arrows = [
        a
        for a in algebra.quiver.arrows
        if a.source not in dead and a.target not in dead
    ]
    quiver = Quiver(vertices, arrows)
    alive = {a.name for a in arrows}

    def surviving(rel: RelationElement):
        terms = [
            (c, p) for c, p in rel.terms if all(x in alive for x in p)
        ]
        return RelationElement(terms) if terms else None

    rels = []
    for rel in algebra.relations:
        r = surviving(rel)
        if r is not None:
            rels.append(r)
    for g in ideal.generators:
        if isinstance(g, RelationElement):
            r = surviving(g)
            if r is not None:
                rels.append(r)
    quotient = build_algebra(quiver, rels, algebra.max_path_len)
    expected = algebra.dim - ideal.dimension
    if quotient.dim != expected:
        raise RuntimeError(
            "quotient dimension mismatch: got "
            f"{quotient.dim}, expected {expected}"
        )
    return quotient


# -- file format ---------------------------------------------------------


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).replace("−", "-").strip())


def algebra_from_dict(data, max_path_len=DEFAULT_MAX_PATH_LEN):
    quiver = Quiver(
        data["vertices"],
        [(a["name"], a["from"], a["to"]) for a in data.get("arrows", [])],
    )
    relations = [
        RelationElement(
            [(parse_rational(t["coeff"]), tuple(t["path"])) for t in rel]
        )
        for rel in data.get("relations", [])
    ]
    return build_algebra(quiver, relations, max_path_len)


def load_algebra(path, max_path_len=DEFAULT_MAX_PATH_LEN):
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_dict(json.load(fh), max_path_len)


def save_algebra(algebra, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(algebra.to_file_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

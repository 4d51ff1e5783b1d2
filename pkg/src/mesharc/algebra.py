"""Mesh algebras as based algebras, with their Frobenius data.

A basis element is a path class: it records its source, target, length and a
representative word of arrows.  Multiplication is stored as the action of
each arrow from the right, so the product of two basis elements is obtained
by walking the word of the second one.  Elements are sparse dicts from basis
indices to field values.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .fields import FieldError, FieldSpec, QQ, SpanSolver, kernel_of, rank_of, solve_in_span, vec_axpy
from .quiver import TranslationQuiver, arrow_label, vertex_label

__all__ = [
    "FieldSpec", "FieldError", "BasisElement", "MeshAlgebra", "TruncationError",
    "DegenerateFormError", "DualBasisPair", "AlgebraAutomorphism", "mesh_algebra",
    "cartan_matrix", "loewy_length", "socle_and_dual_basis", "simple_resolution_start",
]


class TruncationError(RuntimeError):
    pass


class DegenerateFormError(RuntimeError):
    pass


@dataclass(frozen=True)
class BasisElement:
    source: object
    target: object
    length: int
    word: tuple  # arrow names


class MeshAlgebra:
    """A finite dimensional based algebra kQ/I with path-class basis."""

    def __init__(self, quiver: TranslationQuiver, F: FieldSpec, basis: list, right: dict,
                 label: str = ""):
        self.quiver = quiver
        self.field = F
        self.basis = list(basis)
        self.right = right          # (basis index, arrow name) -> vector
        self.label = label or quiver.label
        self.idem = {}
        self.arrow_basis = {}
        for i, b in enumerate(self.basis):
            if b.length == 0:
                self.idem[b.source] = i
            elif b.length == 1:
                self.arrow_basis[b.word[0]] = i
        self.by_source = {v: [] for v in quiver.vertices}
        self.by_target = {v: [] for v in quiver.vertices}
        for i, b in enumerate(self.basis):
            self.by_source[b.source].append(i)
            self.by_target[b.target].append(i)
        self._prod: dict = {}

    # sizes and generators

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple:
        return self.quiver.vertices

    def generators(self) -> list:
        """Basis indices of the idempotents followed by the arrows."""
        return [self.idem[v] for v in self.vertices] + \
            [self.arrow_basis[a.name] for a in self.quiver.arrows]

    def e(self, v) -> dict:
        return {self.idem[v]: 1}

    def arrow(self, name) -> dict:
        return {self.arrow_basis[name]: 1}

    def one(self) -> dict:
        return {self.idem[v]: 1 for v in self.vertices}

    def word_element(self, word) -> dict:
        """The element given by a word of arrow names (empty words are not allowed)."""
        word = tuple(word)
        if not word:
            raise ValueError("use e(v) for idempotents")
        v = self.arrow(word[0])
        for a in word[1:]:
            v = self.mul_arrow(v, a)
        return v

    def block(self, u, v) -> list:
        """Basis indices of e_u A e_v."""
        return [i for i in self.by_source[u] if self.basis[i].target == v]

    # multiplication

    def mul_arrow(self, x: dict, a) -> dict:
        F = self.field
        out: dict = {}
        for i, c in x.items():
            r = self.right.get((i, a))
            if r:
                vec_axpy(F, out, c, r)
        return out

    def mul_basis(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        bi, bj = self.basis[i], self.basis[j]
        if bi.target != bj.source:
            res: dict = {}
        elif bj.length == 0:
            res = {i: 1}
        else:
            res = {i: 1}
            for a in bj.word:
                res = self.mul_arrow(res, a)
                if not res:
                    break
        self._prod[key] = res
        return res

    def mul(self, x: dict, y: dict) -> dict:
        F = self.field
        out: dict = {}
        for i, a in x.items():
            ti = self.basis[i].target
            for j, b in y.items():
                if self.basis[j].source != ti:
                    continue
                p = self.mul_basis(i, j)
                if p:
                    vec_axpy(F, out, F(a * b), p)
        return out

    def prod(self, *xs: dict) -> dict:
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    # sanity checks

    def associativity_violations(self, limit: int | None = None) -> list:
        bad = []
        n = self.dim
        F = self.field
        for i in range(n):
            for j in self.by_source[self.basis[i].target]:
                ij = self.mul_basis(i, j)
                for k in self.by_source[self.basis[j].target]:
                    left = self.mul(ij, {k: 1})
                    right = self.mul({i: 1}, self.mul_basis(j, k))
                    d = dict(left)
                    vec_axpy(F, d, -1, right)
                    if d:
                        bad.append((i, j, k))
                        if limit and len(bad) >= limit:
                            return bad
        return bad

    def mesh_relation(self, v) -> dict:
        q = self.quiver
        out: dict = {}
        for a in q.in_arrows(v):
            s = q.sigma[a.name]
            vec_axpy(self.field, out, 1, self.mul(self.arrow(s), self.arrow(a.name)))
        return out

    def cartan(self) -> list:
        return cartan_matrix(self)

    # serialization

    def to_dict(self) -> dict:
        q = self.quiver
        basis = [
            {"source": vertex_label(b.source), "target": vertex_label(b.target),
             "length": b.length, "word": [arrow_label(a) for a in b.word]}
            for b in self.basis
        ]
        consts = []
        for i in range(self.dim):
            for j in self.by_source[self.basis[i].target]:
                for k, c in sorted(self.mul_basis(i, j).items()):
                    consts.append([i, j, k, self.field.fmt(c)])
        return {
            "schema": "mesharc.algebra/1",
            "label": self.label,
            "field": str(self.field),
            "dimension": self.dim,
            "vertices": [vertex_label(v) for v in q.vertices],
            "basis": basis,
            "structure_constants": consts,
            "cartan": cartan_matrix(self),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


# construction ------------------------------------------------------------------

def mesh_algebra(q: TranslationQuiver, F: FieldSpec = QQ, max_len: int | None = None) -> MeshAlgebra:
    """k(Γ) built one path length at a time.

    Layer l is (layer l-1) x arrows modulo the relations c * mesh_j for c in
    layer l-2.  Pivots go to the largest candidate word, so the surviving
    basis words are lexicographically small.
    """
    if not isinstance(F, FieldSpec):
        raise FieldError(f"not a field: {F!r}")
    if max_len is None:
        max_len = q.default_max_len
    arrow_key = {a.name: q.arrow_index(a.name) for a in q.arrows}
    out_by_vertex = {v: [a for a in q.arrows if a.source == v] for v in q.vertices}
    in_by_vertex = {v: [a for a in q.arrows if a.target == v] for v in q.vertices}
    tau_pre: dict = {}
    for v in q.vertices:
        tau_pre.setdefault(q.tau[v], []).append(v)

    basis: list = [BasisElement(v, v, 0, ()) for v in q.vertices]
    layers: list = [list(range(len(basis)))]
    right: dict = {}
    length = 0
    while True:
        length += 1
        prev = layers[-1]
        cands = []
        for b in prev:
            for a in out_by_vertex[basis[b].target]:
                cands.append((tuple(arrow_key[x] for x in basis[b].word) + (arrow_key[a.name],), b, a.name))
        cands.sort()
        if not cands:
            layers.append([])
            break
        cidx = {(b, a): k for k, (_, b, a) in enumerate(cands)}
        solver = SpanSolver(F)
        if length >= 2:
            for c in layers[-2]:
                for j in tau_pre.get(basis[c].target, ()):
                    rel: dict = {}
                    for a in in_by_vertex[j]:
                        cs = right.get((c, q.sigma[a.name]), {})
                        for b2, coef in cs.items():
                            vec_axpy(F, rel, coef, {cidx[(b2, a.name)]: 1})
                    if rel:
                        solver.add(rel, None)
        pivots = solver.rows
        new_index = {}
        layer = []
        for k, (_, b, a) in enumerate(cands):
            if k in pivots:
                continue
            idx = len(basis)
            basis.append(BasisElement(basis[b].source, q.arrow(a).target, length, basis[b].word + (a,)))
            new_index[k] = idx
            layer.append(idx)
        for k, (_, b, a) in enumerate(cands):
            if k in new_index:
                right[(b, a)] = {new_index[k]: 1}
            else:
                row = solver.residual({k: 1})
                # residual expresses the candidate through surviving candidates
                right[(b, a)] = {new_index[kk]: c for kk, c in row.items()}
                if not right[(b, a)]:
                    del right[(b, a)]
        layers.append(layer)
        if not layer:
            break
        if length >= max_len:
            raise TruncationError(f"layer {length} of {q.label} is nonzero (max_len={max_len})")
    return MeshAlgebra(q, F, basis, right)


def cartan_matrix(A: MeshAlgebra) -> list:
    vs = A.vertices
    pos = {v: i for i, v in enumerate(vs)}
    C = [[0] * len(vs) for _ in vs]
    for b in A.basis:
        C[pos[b.source]][pos[b.target]] += 1
    return C


def loewy_length(A: MeshAlgebra) -> int:
    """Longest surviving path length plus one (path length grading makes this exact)."""
    return max(b.length for b in A.basis) + 1


# Frobenius data ---------------------------------------------------------------

@dataclass
class DualBasisPair:
    """A basis B, its dual B* under (a, b) = λ(ab), and the Nakayama data.

    λ takes the value 1 on the chosen socle element of each e_iA and vanishes
    on the other basis elements of that socle's support.  The Nakayama
    automorphism ν satisfies λ(z a) = λ(ν(a) z), so DA ≅ _νA_1 and
    ν(e_i) = e_{π^{-1}(i)}.
    """

    algebra: MeshAlgebra
    socle: dict          # vertex -> socle vector of e_iA
    functional: dict     # basis index -> value of λ
    pi: dict             # vertex -> end vertex of the socle of e_iA
    dual: list           # dual[j] = b_j* as a vector
    nakayama: "AlgebraAutomorphism" = None
    gram: dict = field(default_factory=dict)

    def lam(self, x: dict):
        F = self.algebra.field
        s = 0
        for k, c in x.items():
            w = self.functional.get(k)
            if w is not None:
                s += c * w
        return F(s)

    def pair(self, x: dict, y: dict):
        return self.lam(self.algebra.mul(x, y))

    def pairing_matrix_is_identity(self) -> bool:
        A = self.algebra
        for i in range(A.dim):
            for j in range(A.dim):
                v = self.pair({i: 1}, self.dual[j])
                if v != (1 if i == j else 0):
                    return False
        return True


def _socle(A: MeshAlgebra, v) -> dict:
    F = A.field
    idx = A.by_source[v]
    cols = {}
    for i in idx:
        col = {}
        for a in A.quiver.arrows:
            for k, c in A.right.get((i, a.name), {}).items():
                col[(A.quiver.arrow_index(a.name), k)] = c
        cols[i] = col
    ker = kernel_of(F, cols)
    if len(ker) != 1:
        raise DegenerateFormError(f"socle of e_{vertex_label(v)}A has dimension {len(ker)}")
    return ker[0]


def socle_and_dual_basis(A: MeshAlgebra) -> DualBasisPair:
    F = A.field
    socle, functional, pi = {}, {}, {}
    for v in A.vertices:
        s = _socle(A, v)
        lead = max(s)
        socle[v] = s
        functional[lead] = F.inv(s[lead])
        targets = {A.basis[k].target for k in s}
        if len(targets) != 1:
            raise DegenerateFormError("socle element is not a single path class block")
        pi[v] = targets.pop()
    if sorted(map(repr, pi.values())) != sorted(map(repr, A.vertices)):
        raise DegenerateFormError("Nakayama permutation is not a bijection")
    lam = DualBasisPair(A, socle, functional, pi, [])
    # Gram matrix G[a][b] = λ(b_a b_b), stored by rows
    G: dict = {}
    for a in range(A.dim):
        row = {}
        for b in A.by_source[A.basis[a].target]:
            val = lam.lam(A.mul_basis(a, b))
            if val != 0:
                row[b] = val
        G[a] = row
    lam.gram = G
    cols = {k: {} for k in range(A.dim)}
    for a, row in G.items():
        for b, val in row.items():
            cols[b][a] = val
    try:
        sol = solve_in_span(F, cols, {j: {j: 1} for j in range(A.dim)})
    except FieldError as exc:
        raise DegenerateFormError("the bilinear form is degenerate") from exc
    lam.dual = [sol[j] for j in range(A.dim)]
    lam.nakayama = _nakayama(A, lam)
    return lam


def _nakayama(A: MeshAlgebra, D: DualBasisPair) -> "AlgebraAutomorphism":
    # ν(a) = y with Σ_k y_k λ(b_k z) = λ(z a) for all z; rows of G are the columns here
    F = A.field
    cols = {k: dict(D.gram[k]) for k in range(A.dim)}
    targets = {}
    for g in A.generators():
        r = {}
        for z in A.by_target[A.basis[g].source]:
            val = D.lam(A.mul_basis(z, g))
            if val != 0:
                r[z] = val
        targets[g] = r
    sol = solve_in_span(F, cols, targets)
    return AlgebraAutomorphism.from_generators(A, sol, name="nu")


# automorphisms -------------------------------------------------------------------

class AlgebraAutomorphism:
    """A linear map given by images of basis elements, built from generator images."""

    def __init__(self, A: MeshAlgebra, images: list, name: str = ""):
        self.A = A
        self.images = images
        self.name = name

    @classmethod
    def from_generators(cls, A: MeshAlgebra, gen_images: dict, name: str = "") -> "AlgebraAutomorphism":
        images: list = [None] * A.dim
        for v in A.vertices:
            images[A.idem[v]] = dict(gen_images[A.idem[v]])
        for i, b in enumerate(A.basis):
            if b.length == 0:
                continue
            img = dict(gen_images[A.arrow_basis[b.word[0]]])
            for a in b.word[1:]:
                img = A.mul(img, gen_images[A.arrow_basis[a]])
            images[i] = img
        return cls(A, images, name)

    @classmethod
    def identity(cls, A: MeshAlgebra) -> "AlgebraAutomorphism":
        return cls(A, [{i: 1} for i in range(A.dim)], "id")

    @classmethod
    def from_arrow_scalars(cls, A: MeshAlgebra, vertex_map: dict, arrow_map: dict,
                           name: str = "") -> "AlgebraAutomorphism":
        """Automorphism sending e_v to e_{vertex_map[v]} and arrow a to c * b for arrow_map[a] = (b, c)."""
        gens = {A.idem[v]: {A.idem[vertex_map[v]]: 1} for v in A.vertices}
        for a, (b, c) in arrow_map.items():
            gens[A.arrow_basis[a]] = {A.arrow_basis[b]: A.field(c)} if A.field(c) != 0 else {}
        return cls.from_generators(A, gens, name)

    def __call__(self, x: dict) -> dict:
        F = self.A.field
        out: dict = {}
        for k, c in x.items():
            vec_axpy(F, out, c, self.images[k])
        return out

    def compose(self, other: "AlgebraAutomorphism") -> "AlgebraAutomorphism":
        """self ∘ other."""
        return AlgebraAutomorphism(self.A, [self(img) for img in other.images],
                                   f"{self.name}*{other.name}")

    def __mul__(self, other):
        return self.compose(other)

    def power(self, k: int) -> "AlgebraAutomorphism":
        base = self if k >= 0 else self.inverse()
        out = AlgebraAutomorphism.identity(self.A)
        for _ in range(abs(k)):
            out = base.compose(out)
        out.name = f"{self.name}^{k}"
        return out

    def inverse(self) -> "AlgebraAutomorphism":
        A = self.A
        cols = {k: self.images[k] for k in range(A.dim)}
        sol = solve_in_span(A.field, cols, {j: {j: 1} for j in range(A.dim)})
        return AlgebraAutomorphism(A, [sol[j] for j in range(A.dim)], f"{self.name}^-1")

    def vertex_perm(self) -> dict:
        A = self.A
        idem_of = {i: v for v, i in A.idem.items()}
        perm = {}
        for v in A.vertices:
            img = self.images[A.idem[v]]
            tops = [idem_of[k] for k, c in img.items() if k in idem_of]
            if len(tops) != 1:
                raise ValueError(f"image of e_{vertex_label(v)} is not a primitive idempotent class")
            perm[v] = tops[0]
        return perm

    def is_multiplicative(self) -> bool:
        A = self.A
        F = A.field
        for i in range(A.dim):
            for j in A.by_source[A.basis[i].target]:
                lhs = self(A.mul_basis(i, j))
                rhs = A.mul(self.images[i], self.images[j])
                d = dict(lhs)
                vec_axpy(F, d, -1, rhs)
                if d:
                    return False
        return True

    def is_bijective(self) -> bool:
        return rank_of(self.A.field, self.images) == self.A.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraAutomorphism) or other.A is not self.A:
            return NotImplemented
        return all(a == b for a, b in zip(self.images, other.images))

    def describe(self) -> dict:
        A = self.A
        F = A.field
        arrows = {}
        for a in A.quiver.arrows:
            img = self.images[A.arrow_basis[a.name]]
            arrows[arrow_label(a.name)] = {
                ";".join(arrow_label(x) for x in A.basis[k].word) or "e": F.fmt(c)
                for k, c in sorted(img.items())
            }
        return {
            "vertex_permutation": {vertex_label(v): vertex_label(w) for v, w in self.vertex_perm().items()},
            "arrows": arrows,
        }


# simple modules -----------------------------------------------------------------

def simple_resolution_start(A: MeshAlgebra, i) -> dict:
    """Check exactness of e_{τ^{-1}i}A -> ⊕_{iα=i} e_{tα}A -> e_iA -> S_i -> 0 by rank counts."""
    q = A.quiver
    F = A.field
    ti = q.tau_inv[i]
    outs = q.out_arrows(i)
    # second map: (α, x) -> α x
    cols2 = {}
    for a in outs:
        for x in A.by_source[a.target]:
            cols2[(a.name, x)] = A.mul(A.arrow(a.name), {x: 1})
    # first map: e_{τ^{-1} i} y -> Σ_{tβ = τ^{-1}i} (σβ component) β y
    cols1 = {}
    for y in A.by_source[ti]:
        img: dict = {}
        for b in q.in_arrows(ti):
            s = q.sigma[b.name]      # an arrow i -> iβ
            for k, c in A.mul(A.arrow(b.name), {y: 1}).items():
                vec_axpy(F, img, c, {(q.arrow_index(s), k): 1})
        cols1[y] = img
    cols2_keyed = {(q.arrow_index(a), x): v for (a, x), v in cols2.items()}
    rank2 = rank_of(F, cols2_keyed.values())
    rank1 = rank_of(F, cols1.values())
    d_i = len(A.by_source[i])
    middle = sum(len(A.by_source[a.target]) for a in outs)
    ker2 = middle - rank2
    # image of the first map must lie in the kernel of the second
    comp_zero = True
    for y, img in cols1.items():
        tot: dict = {}
        for (ai, x), c in img.items():
            vec_axpy(F, tot, c, cols2_keyed[(ai, x)])
        if tot:
            comp_zero = False
    return {
        "vertex": vertex_label(i),
        "terms": [f"e_{vertex_label(ti)}A",
                  " + ".join(f"e_{vertex_label(a.target)}A" for a in outs) or "0",
                  f"e_{vertex_label(i)}A"],
        "dims": [len(A.by_source[ti]), middle, d_i],
        "dim_omega1": d_i - 1,
        "dim_omega2": ker2,
        "exact_at_e_iA": rank2 == d_i - 1,
        "exact_at_middle": comp_zero and rank1 == ker2,
        "subadditivity": 2 * d_i - sum(len(A.by_source[a.target]) for a in outs),
    }

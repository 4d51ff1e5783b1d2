"""Z/m-gradings, smash products and lifting along Galois coverings.

For a grading of A by G = Z/m the smash product B = A#k[G]* has basis
a p_g (a a basis path class, g in G) and multiplication
a p_g * b p_h = a b_{g-h} p_h.  The element a p_g runs from the vertex
(s(a), g + deg a) to (t(a), g), so B is again a path algebra of a
translation quiver and is stored as a MeshAlgebra.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import (AlgebraAutomorphism, BasisElement, DualBasisPair, MeshAlgebra,
                      mesh_algebra, socle_and_dual_basis)
from .fields import rank_of, vec_axpy
from .quiver import (Arrow, QuotientSpec, TranslationQuiver, _ZDelta, arrow_label,
                     build_dynkin, generalized_preprojective_quiver,
                     translation_quiver_isomorphism, vertex_label)
from .resolution import is_inner


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedStructure:
    """Degrees in Z/m on the arrows of a translation quiver.

    `lift` keeps the integer representatives the degrees were given with;
    it is what integer-graded computations (syzygy shifts) use.
    """

    quiver: TranslationQuiver
    m: int
    lift: dict          # arrow name -> int

    def __post_init__(self):
        if self.m < 1:
            raise GradingError("m must be positive")
        names = {a.name for a in self.quiver.arrows}
        if set(self.lift) != names:
            raise GradingError("grading must assign a degree to every arrow")

    def deg(self, arrow) -> int:
        return self.lift[arrow] % self.m

    def word_degree(self, word) -> int:
        return sum(self.lift[a] for a in word) % self.m

    def mesh_degrees(self) -> dict:
        """Degree of the mesh relation ending at each vertex; raises if one is inhomogeneous."""
        q = self.quiver
        out = {}
        for v in q.vertices:
            ds = {(self.lift[a.name] + self.lift[q.sigma[a.name]]) % self.m for a in q.in_arrows(v)}
            if len(ds) > 1:
                raise GradingError(f"mesh relation at {vertex_label(v)} is not homogeneous")
            out[v] = ds.pop() if ds else 0
        return out

    def is_half_grading(self) -> bool:
        q = self.quiver
        return all(self.lift[a.name] + self.lift[q.sigma[a.name]] == 1 for a in q.arrows)

    def basis_degrees(self, A: MeshAlgebra) -> list:
        return [self.word_degree(b.word) for b in A.basis]

    def check_algebra(self, A: MeshAlgebra) -> None:
        """Every structure constant must respect degrees."""
        degs = self.basis_degrees(A)
        for (i, a), vec in A.right.items():
            want = (degs[i] + self.lift[a]) % self.m
            if any(degs[k] != want for k in vec):
                raise GradingError("multiplication is not homogeneous")

    def to_dict(self) -> dict:
        return {"m": self.m,
                "degrees": {arrow_label(a.name): self.deg(a.name) for a in self.quiver.arrows}}


def _install(q: TranslationQuiver, m: int, lift: dict) -> GradedStructure:
    g = GradedStructure(q, m, lift)
    g.mesh_degrees()
    return g


def covering_grading(q: TranslationQuiver, m: int) -> GradedStructure:
    """Grading of a quotient ZΔ/<g> coming from ZΔ/<g^m> -> ZΔ/<g>.

    An arrow (u, w) gets the number of applications of g needed to move its
    raw target w into the fundamental window.
    """
    Z = _zdelta_of(q)
    return _install(q, m, {a.name: Z.power_to_window(a.name[1]) for a in q.arrows})


def half_grading(A: MeshAlgebra | TranslationQuiver, m: int) -> GradedStructure:
    """Arrows of the bipartite orientation get degree 0, their reverses degree 1."""
    q = A.quiver if isinstance(A, MeshAlgebra) else A
    meta = q.meta
    if meta.get("m") != 1 or meta.get("rho_kind") != "none":
        raise GradingError("half-gradings are defined on P(Δ) for simply laced Δ")
    g = covering_grading(q, m)
    if not g.is_half_grading():
        raise AssertionError("covering grading of P(Δ) is not a half-grading")
    return g


def _named_lift(family: str, rank: int) -> dict:
    """Degrees read off the labelled quivers of the generalized preprojective algebras."""
    if family == "G":
        return {"alpha": 0, "beta": 0, "gamma": 0,
                "sigma_alpha": 1, "sigma_beta": 1, "sigma_gamma": 1}
    if family == "C":
        lift = {"0>2": 1, "2>0": 0, "1>2": 1, "2>1": 0}
        for i in range(2, rank):
            lift[f"{i}>{i + 1}"] = i % 2
            lift[f"{i + 1}>{i}"] = 1 - i % 2
        return lift
    if family == "B":
        lift = {"0>1": 0, "0>2": 0, "1>0": 1, "2>0": 1}
        top = list(range(1, 2 * rank - 1, 2))
        bot = list(range(2, 2 * rank - 1, 2))
        for k in range(len(top) - 1):
            lift[f"{top[k + 1]}>{top[k]}"] = k % 2
            lift[f"{bot[k + 1]}>{bot[k]}"] = k % 2
            lift[f"{top[k]}>{bot[k + 1]}"] = 1 - k % 2
            lift[f"{bot[k]}>{top[k + 1]}"] = 1 - k % 2
        return lift
    if family == "F":
        return {"0>1": 0, "1>0": 1, "0>2": 0, "2>0": 1, "0>3": 0, "3>0": 1,
                "2>5": 1, "3>4": 1, "4>2": 0, "5>3": 0}
    raise GradingError(f"no labelled grading for {family}{rank}")


def named_grading(q: TranslationQuiver, m: int) -> GradedStructure:
    """The labelled grading of a hand-built generalized preprojective quiver."""
    fam, rank = q.meta.get("family"), q.meta.get("rank")
    if fam is None:
        raise GradingError("not a generalized preprojective quiver")
    return _install(q, m, _named_lift(fam, rank))


# smash products ----------------------------------------------------------------

@dataclass
class SmashProduct:
    base: MeshAlgebra
    grading: GradedStructure
    algebra: MeshAlgebra
    index: dict         # (basis index of A, g) -> basis index of B

    @property
    def m(self) -> int:
        return self.grading.m


def smash_quiver(g: GradedStructure) -> TranslationQuiver:
    q, m = g.quiver, g.m
    mesh = g.mesh_degrees()
    verts = tuple((v, h) for v in q.vertices for h in range(m))
    arrows = tuple(Arrow((a.name, h), (a.source, (h + g.deg(a.name)) % m), (a.target, h))
                   for a in q.arrows for h in range(m))
    tau = {(v, h): (q.tau[v], (h + mesh[v]) % m) for v, h in verts}
    sigma = {(a.name, h): (q.sigma[a.name], (h + g.deg(a.name)) % m) for a in q.arrows for h in range(m)}
    out = TranslationQuiver(verts, arrows, tau, sigma, f"{q.label}#Z/{m}",
                            {"max_len": q.default_max_len, "smash_of": q.label, "m": m})
    out.validate()
    return out


def smash_product(A: MeshAlgebra, g: GradedStructure) -> SmashProduct:
    if g.quiver is not A.quiver:
        raise GradingError("grading belongs to a different quiver")
    g.check_algebra(A)
    m = g.m
    sq = smash_quiver(g)
    degs = g.basis_degrees(A)
    basis, index = [], {}
    # idempotents first so that generators() lines up with the quiver order
    order = sorted(range(A.dim), key=lambda i: A.basis[i].length)
    for i in order:
        b = A.basis[i]
        for h in range(m):
            word, slot = [], h
            for a in reversed(b.word):
                word.append((a, slot))
                slot = (slot + g.deg(a)) % m
            index[(i, h)] = len(basis)
            basis.append(BasisElement((b.source, (h + degs[i]) % m), (b.target, h), b.length,
                                      tuple(reversed(word))))
    right = {}
    for (i, a), vec in A.right.items():
        for h in range(m):
            gi = (h + g.deg(a)) % m
            right[(index[(i, gi)], (a, h))] = {index[(k, h)]: c for k, c in vec.items()}
    B = MeshAlgebra(sq, A.field, basis, right, label=sq.label)
    return SmashProduct(A, g, B, index)


# comparison with quotient mesh algebras ---------------------------------------------

def _zdelta_of(q: TranslationQuiver) -> _ZDelta:
    meta = q.meta
    if "rho_kind" not in meta:
        raise GradingError("not a quotient of ZΔ")
    fam, rank = meta["base"][0], int(meta["base"][1:])
    return _ZDelta(QuotientSpec(build_dynkin(fam, rank, _allow_d3=True), meta["m"], meta["rho_kind"]))


class _PowerWindow:
    """Canonical forms for ZΔ/<g^m> using the generator g of a quotient."""

    def __init__(self, Z: _ZDelta, m: int):
        self.Z, self.m = Z, m
        self.period = Z.period * m

    def canon(self, v):
        k = self.Z.time(v) // self.period
        return self.Z.g(v, self.m * k)


def power_quotient_quiver(q: TranslationQuiver, m: int) -> tuple[TranslationQuiver, _PowerWindow]:
    """ZΔ/<g^m> for a quotient quiver q = ZΔ/<g>."""
    Z = _zdelta_of(q)
    W = _PowerWindow(Z, m)
    b = Z.spec.base
    verts = sorted({W.canon((x, n)) for x in b.vertices for n in range(-1, W.period + 1)},
                   key=lambda v: (Z.time(v), v))
    arrows = sorted((Arrow((u, w), u, W.canon(w)) for u in verts for w in Z.out_arrows(u)),
                    key=lambda a: a.name)
    tau = {v: W.canon((v[0], v[1] - 1)) for v in verts}
    sigma = {}
    for a in arrows:
        u, w = a.name
        tw = (w[0], w[1] - 1)
        k = Z.time(tw) // W.period
        sigma[a.name] = (Z.g(tw, m * k), Z.g(u, m * k))
    out = TranslationQuiver(tuple(verts), tuple(arrows), tau, sigma, f"{q.label}^({m})",
                            {"max_len": b.h, "base": b.name})
    out.validate()
    return out, W


def canonical_matching(S: SmashProduct) -> tuple[dict, dict, MeshAlgebra]:
    """Vertex and arrow bijections from the smash quiver to ZΔ/<g^m>, plus the target algebra.

    (v, h) goes to the class of g^h(v); the arrow (α, h) with α = (u, w)
    goes to the class of g^{h + deg α}(u -> w).
    """
    q, g = S.base.quiver, S.grading
    Q, W = power_quotient_quiver(q, g.m)
    Z = W.Z
    vmap = {(v, h): W.canon(Z.g(v, h)) for v in q.vertices for h in range(g.m)}
    amap = {}
    names = {a.name for a in Q.arrows}
    for a in q.arrows:
        u, w = a.name
        for h in range(g.m):
            k = h + g.lift[a.name]
            su, sw = Z.g(u, k), Z.g(w, k)
            j = Z.time(su) // W.period
            name = (Z.g(su, g.m * j), Z.g(sw, g.m * j))
            if name not in names:
                raise GradingError(f"lifted arrow {name} missing from the quotient")
            amap[(a.name, h)] = name
    M = mesh_algebra(Q, S.algebra.field)
    return vmap, amap, M


def graph_matching(S: SmashProduct, target: TranslationQuiver) -> tuple[dict, dict] | None:
    """Vertex and arrow bijections found by a graph isomorphism search (no parallel arrows assumed)."""
    sq = S.algebra.quiver
    vmap = translation_quiver_isomorphism(sq, target)
    if vmap is None:
        return None
    by_ends = {}
    for a in target.arrows:
        by_ends.setdefault((a.source, a.target), []).append(a.name)
    amap = {}
    for a in sq.arrows:
        c = by_ends.get((vmap[a.source], vmap[a.target]), [])
        if len(c) != 1:
            return None
        amap[a.name] = c[0]
    return vmap, amap


def based_isomorphism_violations(B: MeshAlgebra, M: MeshAlgebra, vmap: dict, amap: dict) -> list:
    """Check that arrows -> arrows extends to an algebra isomorphism B -> M.

    Each basis path of B is sent to the product of the images of its arrows.
    The map is an isomorphism when these images are independent and
    T(b) T(α) = T(bα) for every basis element b and arrow α.
    """
    bad = []
    if B.dim != M.dim:
        return [("dimension", B.dim, M.dim)]
    if set(vmap.values()) != set(M.vertices) or len(set(amap.values())) != len(amap):
        return [("not a bijection",)]
    for a in B.quiver.arrows:
        t = M.quiver.arrow(amap[a.name])
        if (vmap[a.source], vmap[a.target]) != (t.source, t.target):
            bad.append(("arrow endpoints", a.name))
        if amap[B.quiver.sigma[a.name]] != M.quiver.sigma[amap[a.name]]:
            bad.append(("sigma", a.name))
    for v in B.vertices:
        if vmap[B.quiver.tau[v]] != M.quiver.tau[vmap[v]]:
            bad.append(("tau", v))
    if bad:
        return bad
    T = []
    for b in B.basis:
        T.append(M.e(vmap[b.source]) if b.length == 0 else M.word_element([amap[x] for x in b.word]))
    if rank_of(M.field, T) != B.dim:
        return [("images are dependent",)]
    F = B.field
    for i in range(B.dim):
        for a in B.quiver.out_arrows(B.basis[i].target):
            lhs: dict = {}
            for k, c in B.right.get((i, a.name), {}).items():
                vec_axpy(F, lhs, c, T[k])
            rhs = M.mul_arrow(T[i], amap[a.name])
            d = dict(lhs)
            vec_axpy(F, d, -1, rhs)
            if d:
                bad.append(("product", i, a.name))
    return bad


# lifting bimodules -------------------------------------------------------------

class GradedBimodule:
    """A finite dimensional graded A-bimodule given by its basis degrees and actions.

    left(i, k) and right(k, i) give the action of the basis element i of A on
    the basis element k of M as sparse vectors over the basis of M.
    """

    def __init__(self, A: MeshAlgebra, grading: GradedStructure, degrees: list, left, right, name=""):
        self.A, self.grading = A, grading
        self.degrees = list(degrees)
        self._left, self._right = left, right
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def left(self, i: int, k: int) -> dict:
        return self._left(i, k)

    def right(self, k: int, i: int) -> dict:
        return self._right(k, i)


def regular_bimodule(A: MeshAlgebra, g: GradedStructure) -> GradedBimodule:
    return GradedBimodule(A, g, g.basis_degrees(A),
                          lambda i, k: A.mul_basis(i, k), lambda k, i: A.mul_basis(k, i), "A")


def dual_bimodule(A: MeshAlgebra, g: GradedStructure) -> GradedBimodule:
    """DA with (a f b)(x) = f(b x a); the dual basis vector k* has degree -deg k."""
    F = A.field
    degs = g.basis_degrees(A)

    def act(i, k, side):
        # coefficient of j* is k*(b_i b_j) on the left action (x a with a = b_i on the right of x)
        out = {}
        if side == "left":
            for j in A.by_target[A.basis[i].source]:
                c = A.mul_basis(j, i).get(k, 0)
                if c:
                    out[j] = F(c)
        else:
            for j in A.by_source[A.basis[i].target]:
                c = A.mul_basis(i, j).get(k, 0)
                if c:
                    out[j] = F(c)
        return out

    return GradedBimodule(A, g, [(-d) % g.m for d in degs],
                          lambda i, k: act(i, k, "left"), lambda k, i: act(i, k, "right"), "DA")


def twisted_bimodule(A: MeshAlgebra, g: GradedStructure, mu: AlgebraAutomorphism, shift: int = 0):
    """The right twist _1A_μ with degrees moved by shift (μ must be graded)."""
    degs = g.basis_degrees(A)
    return GradedBimodule(A, g, [(d + shift) % g.m for d in degs],
                          lambda i, k: A.mul_basis(i, k), lambda k, i: A.mul({k: 1}, mu.images[i]),
                          f"A_mu[{shift}]")


class LiftedBimodule:
    """F(M) = M ⊗_A B with basis m_k p_h.

    a p_g · m p_h = (a m) p_h when g = deg m + h, and
    m p_g · b p_h = (m b) p_h when deg b = g - h.
    """

    def __init__(self, M: GradedBimodule, S: SmashProduct):
        self.M, self.S = M, S
        self.keys = [(k, h) for k in range(M.dim) for h in range(S.m)]
        self.pos = {key: n for n, key in enumerate(self.keys)}

    @property
    def dim(self) -> int:
        return len(self.keys)

    def left(self, bi: int, n: int) -> dict:
        S, M = self.S, self.M
        i, gslot = _unsmash(S, bi)
        k, h = self.keys[n]
        if gslot != (M.degrees[k] + h) % S.m:
            return {}
        return {self.pos[(kk, h)]: c for kk, c in M.left(i, k).items()}

    def right(self, n: int, bi: int) -> dict:
        S, M = self.S, self.M
        i, h = _unsmash(S, bi)
        k, gslot = self.keys[n]
        degs = S.grading.basis_degrees(S.base)
        if degs[i] != (gslot - h) % S.m:
            return {}
        return {self.pos[(kk, h)]: c for kk, c in M.right(k, i).items()}


def _unsmash(S: SmashProduct, bi: int) -> tuple:
    inv = getattr(S, "_inv", None)
    if inv is None:
        inv = {v: k for k, v in S.index.items()}
        S._inv = inv
    return inv[bi]


def lift_bimodule(M: GradedBimodule, S: SmashProduct) -> LiftedBimodule:
    if M.A is not S.base or M.grading is not S.grading:
        raise GradingError("bimodule and smash product use different gradings")
    return LiftedBimodule(M, S)


def _dual_of_algebra_actions(B: MeshAlgebra):
    """Actions on DB in the dual basis: (x f y)(z) = f(y z x)."""
    F = B.field

    def left(x, k):
        out = {}
        for j in B.by_target[B.basis[x].source]:
            c = B.mul_basis(j, x).get(k, 0)
            if c:
                out[j] = F(c)
        return out

    def right(k, y):
        out = {}
        for j in B.by_source[B.basis[y].target]:
            c = B.mul_basis(y, j).get(k, 0)
            if c:
                out[j] = F(c)
        return out

    return left, right


def bimodule_map_violations(B: MeshAlgebra, src, src_dim, dst, phi: list, gens=None) -> list:
    """Check phi(x m) = x phi(m) and phi(m y) = phi(m) y for generators x, y of B.

    src and dst are (left, right) pairs of action functions on basis indices.
    """
    F = B.field
    gens = gens if gens is not None else B.generators()
    sl, sr = src
    dl, dr = dst

    def apply(vec):
        out = {}
        for k, c in vec.items():
            vec_axpy(F, out, c, phi[k])
        return out

    def act(fn, x, vec, first):
        out = {}
        for k, c in vec.items():
            vec_axpy(F, out, c, fn(x, k) if first else fn(k, x))
        return out

    bad = []
    for n in range(src_dim):
        for x in gens:
            lhs = apply(sl(x, n))
            rhs = act(dl, x, phi[n], True)
            d = dict(lhs)
            vec_axpy(F, d, -1, rhs)
            if d:
                bad.append(("left", x, n))
            lhs = apply(sr(n, x))
            rhs = act(dr, x, phi[n], False)
            d = dict(lhs)
            vec_axpy(F, d, -1, rhs)
            if d:
                bad.append(("right", x, n))
    return bad


def dual_lift_map(S: SmashProduct) -> tuple[LiftedBimodule, list]:
    """φ(f p_g)(a p_h) = f(a_{g-h}) from F(DA) to DB, as a matrix in the dual bases.

    For f = b_j* the functional is nonzero only on b_j p_h with deg b_j = g - h,
    so φ(b_j* p_g) = (b_j p_{g - deg b_j})*.
    """
    A, g = S.base, S.grading
    FDA = lift_bimodule(dual_bimodule(A, g), S)
    degs = g.basis_degrees(A)
    phi = []
    for (j, gslot) in FDA.keys:
        phi.append({S.index[(j, (gslot - degs[j]) % S.m)]: 1})
    return FDA, phi


def dual_lift_check(S: SmashProduct) -> dict:
    """Bijectivity and bimodule linearity of φ: F(DA) -> DB."""
    B = S.algebra
    FDA, phi = dual_lift_map(S)
    bij = FDA.dim == B.dim and rank_of(B.field, phi) == B.dim
    viol = bimodule_map_violations(B, (FDA.left, FDA.right), FDA.dim,
                                   _dual_of_algebra_actions(B), phi)
    return {"dimension": B.dim, "bijective": bij, "violations": len(viol), "examples": viol[:5]}


def regular_lift_check(S: SmashProduct) -> dict:
    """F(A) ≅ B through a p_h -> a p_h."""
    B = S.algebra
    FA = lift_bimodule(regular_bimodule(S.base, S.grading), S)
    phi = [{S.index[key]: 1} for key in FA.keys]
    viol = bimodule_map_violations(B, (FA.left, FA.right), FA.dim,
                                   (lambda x, k: B.mul_basis(x, k), lambda k, y: B.mul_basis(k, y)), phi)
    return {"violations": len(viol)}


# Nakayama automorphisms ---------------------------------------------------------

def socle_degree(A: MeshAlgebra, g: GradedStructure, D: DualBasisPair | None = None) -> int:
    D = D or socle_and_dual_basis(A)
    degs = g.basis_degrees(A)
    ds = {degs[k] for s in D.socle.values() for k in s}
    if len(ds) != 1:
        raise GradingError(f"socle elements sit in several degrees {sorted(ds)}")
    return ds.pop()


def automorphism_is_graded(phi: AlgebraAutomorphism, g: GradedStructure) -> bool:
    degs = g.basis_degrees(phi.A)
    return all({degs[k] for k in img} <= {degs[i]} for i, img in enumerate(phi.images))


@dataclass
class LiftedNakayama:
    automorphism: AlgebraAutomorphism
    shift: int
    matches_nakayama_of_B: bool

    def to_dict(self) -> dict:
        return {"shift": self.shift, "matches_nakayama_of_B": self.matches_nakayama_of_B}


def lift_nakayama(S: SmashProduct, D: DualBasisPair | None = None) -> LiftedNakayama:
    """ν~(a p_g) = ν(a) p_{g + x}, with x the degree of the socle.

    The result is compared with the Nakayama automorphism of B computed from
    scratch: the two must differ by an inner automorphism.
    """
    A, g, B = S.base, S.grading, S.algebra
    D = D or socle_and_dual_basis(A)
    nu = D.nakayama
    if not automorphism_is_graded(nu, g):
        raise GradingError("the Nakayama automorphism is not graded (Δ = A_2n); "
                           "use simple-module syzygy degrees instead")
    x = socle_degree(A, g, D)
    images = [None] * B.dim
    for (i, h), bi in S.index.items():
        images[bi] = {S.index[(k, (h + x) % S.m)]: c for k, c in nu.images[i].items()}
    lifted = AlgebraAutomorphism(B, images, "nu~")
    if not lifted.is_multiplicative():
        raise AssertionError("lifted Nakayama map is not multiplicative")
    nuB = socle_and_dual_basis(B).nakayama
    same = bool(is_inner(B, nuB.compose(lifted.inverse())))
    return LiftedNakayama(lifted, x, same)


def gpp_smash(family: str, rank: int, m: int, F=None):
    """Smash product of a generalized preprojective algebra with its labelled grading."""
    from .fields import QQ
    q = generalized_preprojective_quiver(family, rank)
    A = mesh_algebra(q, F or QQ)
    return smash_product(A, named_grading(q, m))

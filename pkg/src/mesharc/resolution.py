"""The start of the bimodule resolution of a mesh algebra and the Ω³ twist.

Conventions.  ξ = Σ_i ξ_i generates L = Ω³_{A^e}(A) and the twist μ is read
off from a·ξ = ξ·μ(a), which gives μ(e_i) = e_{πτ^{-1}(i)}.  Since ξA is free
of rank one, x ↦ ξx identifies L with _μA_1 ≅ _1A_{μ^{-1}}.  Together with
DA ≅ _νA_1 ≅ _1A_{ν^{-1}} this gives

    Ω^{-3d}(A) ≅ DA  iff  μ^d ∘ ν is inner,

which is what min_cy_exponent_direct tests.  full_syzygies recomputes the
syzygies from scratch (projective cover, kernel, repeat) to confirm the
direction of the twist.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import AlgebraAutomorphism, DualBasisPair, MeshAlgebra, socle_and_dual_basis
from .fields import SpanSolver, kernel_of, rank_of, solve_in_span, vec_axpy
from .quiver import arrow_label, vertex_label


class ResolutionError(RuntimeError):
    pass


# bimodules ----------------------------------------------------------------------

class FreeBimodule:
    """⊕_s A e_{u_s} ⊗ e_{v_s} A, with basis keys (s, left basis index, right basis index)."""

    def __init__(self, A: MeshAlgebra, summands: list, names: list | None = None):
        self.A = A
        self.summands = list(summands)
        self.names = list(names) if names is not None else list(range(len(summands)))

    @property
    def dim(self) -> int:
        A = self.A
        return sum(len(A.by_target[u]) * len(A.by_source[v]) for u, v in self.summands)

    def basis_keys(self):
        A = self.A
        for s, (u, v) in enumerate(self.summands):
            for bl in A.by_target[u]:
                for br in A.by_source[v]:
                    yield (s, bl, br)

    def gen(self, s: int) -> dict:
        u, v = self.summands[s]
        return {(s, self.A.idem[u], self.A.idem[v]): 1}

    def tensor(self, s: int, x: dict, y: dict) -> dict:
        F = self.A.field
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                w = F(out.get((s, i, j), 0) + a * b)
                if w == 0:
                    out.pop((s, i, j), None)
                else:
                    out[(s, i, j)] = w
        return out

    def left(self, a: dict, m: dict) -> dict:
        A, F = self.A, self.A.field
        out: dict = {}
        for (s, bl, br), c in m.items():
            for i, ca in a.items():
                for k, cp in A.mul_basis(i, bl).items():
                    vec_axpy(F, out, c * ca * cp, {(s, k, br): 1})
        return out

    def right(self, m: dict, a: dict) -> dict:
        A, F = self.A, self.A.field
        out: dict = {}
        for (s, bl, br), c in m.items():
            for i, ca in a.items():
                for k, cp in A.mul_basis(br, i).items():
                    vec_axpy(F, out, c * ca * cp, {(s, bl, k): 1})
        return out


class RegularBimodule:
    """A as a bimodule over itself, keys are basis indices."""

    def __init__(self, A: MeshAlgebra):
        self.A = A

    @property
    def dim(self) -> int:
        return self.A.dim

    def basis_keys(self):
        return iter(range(self.A.dim))

    def left(self, a: dict, m: dict) -> dict:
        return self.A.mul(a, m)

    def right(self, m: dict, a: dict) -> dict:
        return self.A.mul(m, a)


class RightTwisted:
    """The same space with right action m * a = m · φ(a)."""

    def __init__(self, base, phi: AlgebraAutomorphism):
        self.base = base
        self.A = base.A
        self.phi = phi

    @property
    def dim(self) -> int:
        return self.base.dim

    def basis_keys(self):
        return self.base.basis_keys()

    def left(self, a: dict, m: dict) -> dict:
        return self.base.left(a, m)

    def right(self, m: dict, a: dict) -> dict:
        return self.base.right(m, self.phi(a))


def apply_free_map(P: FreeBimodule, target, images: list, m: dict) -> dict:
    """Apply the bimodule map P -> target with generator s sent to images[s]."""
    F = P.A.field
    out: dict = {}
    for (s, bl, br), c in m.items():
        vec_axpy(F, out, c, target.left({bl: 1}, target.right(images[s], {br: 1})))
    return out


def free_map_columns(P: FreeBimodule, target, images: list) -> dict:
    return {key: apply_free_map(P, target, images, {key: 1}) for key in P.basis_keys()}


# resolution start --------------------------------------------------------------------

@dataclass
class BimoduleResolutionStart:
    A: MeshAlgebra
    P0: FreeBimodule
    P1: FreeBimodule
    P2: FreeBimodule
    delta_images: list        # δ(generator of P1 summand α) in P0
    R_images: list            # R(generator of P2 summand i) in P1
    ranks: dict = field(default_factory=dict)

    def delta(self, m: dict) -> dict:
        return apply_free_map(self.P1, self.P0, self.delta_images, m)

    def R(self, m: dict) -> dict:
        return apply_free_map(self.P2, self.P1, self.R_images, m)

    def mult(self, m: dict) -> dict:
        """P0 -> A, x ⊗ y -> xy."""
        A = self.A
        F = A.field
        out: dict = {}
        for (s, bl, br), c in m.items():
            vec_axpy(F, out, c, A.mul_basis(bl, br))
        return out

    def delta_R_is_zero(self) -> bool:
        return all(not self.delta(self.R_images[s]) for s in range(len(self.P2.summands)))


def build_resolution_start(A: MeshAlgebra, check: bool = True) -> BimoduleResolutionStart:
    q = A.quiver
    vs = list(q.vertices)
    arrows = list(q.arrows)
    a_pos = {a.name: k for k, a in enumerate(arrows)}
    v_pos = {v: k for k, v in enumerate(vs)}
    P0 = FreeBimodule(A, [(v, v) for v in vs], vs)
    P1 = FreeBimodule(A, [(a.source, a.target) for a in arrows], [a.name for a in arrows])
    P2 = FreeBimodule(A, [(q.tau[v], v) for v in vs], vs)
    F = A.field
    delta_images = []
    for a in arrows:
        x = P0.tensor(v_pos[a.target], A.arrow(a.name), A.e(a.target))
        vec_axpy(F, x, -1, P0.tensor(v_pos[a.source], A.e(a.source), A.arrow(a.name)))
        delta_images.append(x)
    R_images = []
    for v in vs:
        x: dict = {}
        for a in q.in_arrows(v):
            s = q.sigma[a.name]
            vec_axpy(F, x, 1, P1.tensor(a_pos[a.name], A.arrow(s), A.e(a.target)))
            vec_axpy(F, x, 1, P1.tensor(a_pos[s], A.e(q.tau[v]), A.arrow(a.name)))
        R_images.append(x)
    res = BimoduleResolutionStart(A, P0, P1, P2, delta_images, R_images)
    if check:
        if not res.delta_R_is_zero():
            raise ResolutionError("δ∘R is nonzero")
        rank_mult = rank_of(F, (res.mult({k: 1}) for k in P0.basis_keys()))
        rank_delta = rank_of(F, free_map_columns(P1, P0, delta_images).values())
        rank_R = rank_of(F, free_map_columns(P2, P1, R_images).values())
        res.ranks = {
            "dim_P0": P0.dim, "dim_P1": P1.dim, "dim_P2": P2.dim,
            "rank_mult": rank_mult, "rank_delta": rank_delta, "rank_R": rank_R,
        }
        if rank_mult != A.dim:
            raise ResolutionError("multiplication map is not onto A")
        if rank_delta != P0.dim - rank_mult:
            raise ResolutionError("im δ differs from ker of multiplication")
        if rank_R != P1.dim - rank_delta:
            raise ResolutionError("im R differs from ker δ")
    return res


# ξ and μ ---------------------------------------------------------------------------

def tau_automorphism(A: MeshAlgebra) -> AlgebraAutomorphism:
    """τ on vertices and σ² on arrows, an automorphism of any mesh algebra."""
    q = A.quiver
    tau_a = q.tau_a
    return AlgebraAutomorphism.from_arrow_scalars(
        A, dict(q.tau), {a.name: (tau_a[a.name], 1) for a in q.arrows}, name="tau")


def xi_generators(A: MeshAlgebra, D: DualBasisPair, res: BimoduleResolutionStart | None = None,
                  check: bool = True) -> list:
    """ξ_i = Σ_{x ∈ e_iB} (-1)^{|x|} τ(x) ⊗ x* in P_2, one per vertex (in quiver order)."""
    res = res or build_resolution_start(A, check=False)
    P2 = res.P2
    F = A.field
    tau = tau_automorphism(A)
    v_pos = {v: k for k, v in enumerate(A.vertices)}
    xis = []
    for v in A.vertices:
        xi: dict = {}
        for x in A.by_source[v]:
            b = A.basis[x]
            sign = -1 if b.length % 2 else 1
            term = P2.tensor(v_pos[b.target], tau({x: 1}), D.dual[x])
            vec_axpy(F, xi, sign, term)
        xis.append(xi)
    if check:
        for v, xi in zip(A.vertices, xis):
            if res.R(xi):
                raise ResolutionError(f"R(ξ_{vertex_label(v)}) is nonzero")
    return xis


def omega3_twist(A: MeshAlgebra, D: DualBasisPair | None = None, xis: list | None = None,
                 check: bool = True) -> AlgebraAutomorphism:
    """μ with a·ξ = ξ·μ(a) for every generator a."""
    D = D or socle_and_dual_basis(A)
    res = build_resolution_start(A, check=False)
    xis = xis if xis is not None else xi_generators(A, D, res, check=check)
    P2 = res.P2
    F = A.field
    xi: dict = {}
    for x in xis:
        vec_axpy(F, xi, 1, x)
    cols = {k: P2.right(xi, {k: 1}) for k in range(A.dim)}
    targets = {g: P2.left({g: 1}, xi) for g in A.generators()}
    try:
        sol = solve_in_span(F, cols, targets)
    except Exception as exc:
        raise ResolutionError("a·ξ = ξ·μ(a) has no solution") from exc
    mu = AlgebraAutomorphism.from_generators(A, sol, name="mu")
    if check:
        q = A.quiver
        ti = q.tau_inv
        for v in A.vertices:
            if mu.images[A.idem[v]] != {A.idem[D.pi[ti[v]]]: 1}:
                raise ResolutionError("μ(e_i) differs from e_{πτ^{-1}i}")
    return mu


def xi_rank_report(A: MeshAlgebra, D: DualBasisPair, xis: list) -> dict:
    """Compare dim ξ_iA with dim e_{πi}A and dim Aξ_i with dim Ae_{τi}."""
    res = build_resolution_start(A, check=False)
    P2 = res.P2
    F = A.field
    out = {}
    for v, xi in zip(A.vertices, xis):
        r_right = rank_of(F, (P2.right(xi, {k: 1}) for k in range(A.dim)))
        r_left = rank_of(F, (P2.left({k: 1}, xi) for k in range(A.dim)))
        out[v] = {
            "xi_A": r_right, "e_pi_A": len(A.by_source[D.pi[v]]),
            "A_xi": r_left, "A_e_tau": len(A.by_target[A.quiver.tau[v]]),
        }
    return out


# inner automorphisms ------------------------------------------------------------------

@dataclass
class InnerResult:
    status: str                  # "inner", "not-inner" or "inconclusive"
    witness: dict | None = None
    reason: str = ""
    solution_dim: int = 0

    def __bool__(self) -> bool:
        return self.status == "inner"


def is_inner(A: MeshAlgebra, phi: AlgebraAutomorphism, seed: int = 0,
             enum_limit: int = 1 << 20, samples: int = 10000) -> InnerResult:
    """Search for a unit u with u·a = φ(a)·u on all generators.

    The solutions form a subspace S.  An element of S is a unit exactly when
    every idempotent coordinate is nonzero, so the question reduces to finding
    a point of S avoiding finitely many hyperplanes.  A greedy search settles
    it whenever the field is large enough; over small prime fields the space is
    enumerated, and only when it is too large do we sample.
    """
    F = A.field
    try:
        perm = phi.vertex_perm()
    except ValueError as exc:
        return InnerResult("not-inner", reason=str(exc))
    if any(perm[v] != v for v in A.vertices):
        return InnerResult("not-inner", reason="nontrivial vertex permutation")
    exact = all(phi.images[A.idem[v]] == {A.idem[v]: 1} for v in A.vertices)
    unknowns = [k for k in range(A.dim)
                if not exact or A.basis[k].source == A.basis[k].target]
    gens = A.generators()
    cols = {}
    for k in unknowns:
        col: dict = {}
        for gi, g in enumerate(gens):
            d = dict(A.mul_basis(k, g))
            vec_axpy(F, d, -1, A.mul(phi.images[g], {k: 1}))
            for key, c in d.items():
                col[(gi, key)] = c
        cols[k] = col
    S = kernel_of(F, cols)
    idems = [A.idem[v] for v in A.vertices]
    # functionals: for each vertex, its values on the solution basis
    funcs = [[s.get(i, 0) for s in S] for i in idems]
    for v, f in zip(A.vertices, funcs):
        if all(x == 0 for x in f):
            return InnerResult("not-inner", reason=f"coefficient at e_{vertex_label(v)} vanishes on all solutions",
                               solution_dim=len(S))
    coeffs = _avoid_hyperplanes(F, funcs, len(S), seed, enum_limit, samples)
    if coeffs is None:
        return InnerResult("not-inner", reason="no unit in the solution space (exhaustive)", solution_dim=len(S))
    if coeffs == "inconclusive":
        return InnerResult("inconclusive", reason=f"{samples} samples found no unit", solution_dim=len(S))
    u: dict = {}
    for c, s in zip(coeffs, S):
        vec_axpy(F, u, c, s)
    for g in gens:
        d = A.mul(u, {g: 1})
        vec_axpy(F, d, -1, A.mul(phi.images[g], u))
        if d:
            raise ResolutionError("witness check failed")
    return InnerResult("inner", witness=u, solution_dim=len(S))


def _dot(F, f, c):
    return F(sum(a * b for a, b in zip(f, c)))


def _avoid_hyperplanes(F, funcs, dim, seed, enum_limit, samples):
    """Coefficients c with every functional nonzero at c, None if none exist, or 'inconclusive'."""
    # merge proportional functionals
    reps = []
    for f in funcs:
        lead = next(i for i, x in enumerate(f) if x != 0)
        inv = F.inv(f[lead])
        g = tuple(F(x * inv) for x in f)
        if g not in reps:
            reps.append(g)
    p = F.characteristic
    c = [0] * dim
    ok = True
    for idx, g in enumerate(reps):
        if _dot(F, g, c) != 0:
            continue
        j = next(i for i, x in enumerate(g) if x != 0)
        limit = (p - 1) if p else idx + 2
        found = False
        for t in range(1, limit + 1):
            trial = list(c)
            trial[j] = F(trial[j] + t)
            if all(_dot(F, h, trial) != 0 for h in reps[: idx + 1]):
                c = trial
                found = True
                break
        if not found:
            ok = False
            break
    if ok:
        return c
    # only reachable over small prime fields
    if p ** dim <= enum_limit:
        from itertools import product
        for cand in product(range(p), repeat=dim):
            if all(_dot(F, h, cand) != 0 for h in reps):
                return list(cand)
        return None
    rng = random.Random(seed)
    for _ in range(samples):
        cand = [rng.randrange(p) for _ in range(dim)]
        if all(_dot(F, h, cand) != 0 for h in reps):
            return cand
    return "inconclusive"


# Calabi-Yau exponent by direct computation ------------------------------------------------

@dataclass
class DirectCYResult:
    d: int | None
    d_max: int
    inconclusive: list = field(default_factory=list)
    witness: dict | None = None

    @property
    def status(self) -> str:
        if self.d is not None:
            return "calabi-yau"
        return "inconclusive" if self.inconclusive else "none"

    def to_dict(self) -> dict:
        return {"d": self.d, "d_max": self.d_max, "status": self.status,
                "inconclusive": self.inconclusive, "witness": self.witness is not None,
                "tag": "direct-computation"}


def _perm_compose(p, q):
    """p ∘ q on vertices."""
    return {v: p[q[v]] for v in q}


def min_cy_exponent_direct(A: MeshAlgebra, D: DualBasisPair | None = None, d_max: int | None = None,
                           mu: AlgebraAutomorphism | None = None) -> DirectCYResult:
    """Least d with Ω^{-3d}(A) ≅ DA, i.e. μ^d ∘ ν inner, searched up to d_max."""
    D = D or socle_and_dual_basis(A)
    mu = mu or omega3_twist(A, D)
    nu = D.nakayama
    d_max = d_max if d_max is not None else 6 * len(A.vertices)
    pm, pn = mu.vertex_perm(), nu.vertex_perm()
    ident = {v: v for v in A.vertices}
    perm = dict(pn)
    powers = {0: AlgebraAutomorphism.identity(A)}
    last = 0
    result = DirectCYResult(None, d_max)
    for d in range(1, d_max + 1):
        perm = _perm_compose(pm, perm)
        if perm != ident:
            continue
        cur = powers[last]
        for _ in range(d - last):
            cur = mu.compose(cur)
        powers = {d: cur}
        last = d
        r = is_inner(A, cur.compose(nu))
        if r.status == "inner":
            result.d = d
            result.witness = r.witness
            return result
        if r.status == "inconclusive":
            result.inconclusive.append(d)
    return result


# gradings and shifts --------------------------------------------------------------------------

def basis_degrees(A: MeshAlgebra, grading: dict) -> list:
    return [sum(grading[a] for a in b.word) for b in A.basis]


def _degree_of(vec: dict, degs: list) -> set:
    return {degs[k] for k in vec}


def graded_syzygy_shift(A: MeshAlgebra, grading: dict, D: DualBasisPair | None = None,
                        xis: list | None = None, mu: AlgebraAutomorphism | None = None) -> dict:
    """Degrees of the socle, of ξ and of Ω³, Ω⁶ under an integer grading on arrows.

    ξ lives in P_2, whose generators sit in the degree of the mesh relations.
    The internal degree of ξ is deg τ(x) + deg x*; Ω³ is generated in that
    degree plus the mesh degree.
    """
    q = A.quiver
    D = D or socle_and_dual_basis(A)
    res = build_resolution_start(A, check=False)
    xis = xis if xis is not None else xi_generators(A, D, res, check=False)
    mu = mu or omega3_twist(A, D, xis, check=False)
    degs = basis_degrees(A, grading)
    mesh_deg = {}
    for v in q.vertices:
        ds = {grading[a.name] + grading[q.sigma[a.name]] for a in q.in_arrows(v)}
        if len(ds) > 1:
            raise ResolutionError(f"mesh relation at {vertex_label(v)} is not homogeneous")
        mesh_deg[v] = ds.pop() if ds else 0
    socle_deg = {}
    for v, s in D.socle.items():
        ds = _degree_of(s, degs)
        socle_deg[v] = ds.pop() if len(ds) == 1 else None
    internal = set()
    for v, xi in zip(q.vertices, xis):
        for (s, bl, br) in xi:
            internal.add(degs[bl] + degs[br])
    omega3 = set()
    for v, xi in zip(q.vertices, xis):
        for (s, bl, br) in xi:
            omega3.add(degs[bl] + degs[br] + mesh_deg[q.vertices[s]])
    mu_graded = all(
        _degree_of(mu.images[A.arrow_basis[a.name]], degs) <= {grading[a.name]} for a in q.arrows
    )
    uniform = len(omega3) == 1
    out = {
        "socle_degrees": {vertex_label(v): d for v, d in socle_deg.items()},
        "xi_internal_degrees": sorted(internal),
        "omega3_degrees": sorted(omega3),
        "mixed": not uniform,
        "mu_graded": mu_graded,
        "DA_generator_degrees": sorted({-d for d in socle_deg.values() if d is not None}),
    }
    if uniform:
        d3 = omega3.pop()
        out["omega3_degree"] = d3
        out["xi_internal_degree"] = min(internal)
        if mu_graded:
            out["omega6_shift"] = 2 * d3
            out["omega6_twist_inner"] = bool(is_inner(A, mu.compose(mu)))
    return out


def describe_mu(mu: AlgebraAutomorphism) -> dict:
    """Vertex permutation plus, for each arrow, its image."""
    return mu.describe()


def arrow_signs(mu: AlgebraAutomorphism) -> dict:
    """For automorphisms sending each arrow to ± an arrow, the sign per arrow."""
    A = mu.A
    F = A.field
    out = {}
    for a in A.quiver.arrows:
        img = mu.images[A.arrow_basis[a.name]]
        if len(img) == 1:
            (k, c), = img.items()
            if A.basis[k].length == 1:
                out[a.name] = (A.basis[k].word[0], 1 if c == 1 else (-1 if F(c + 1) == 0 else c))
                continue
        out[a.name] = None
    return out


# full syzygies over the enveloping algebra ----------------------------------------------------

class SubBimodule:
    """A sub-bimodule of an ambient bimodule, given by a spanning basis."""

    def __init__(self, ambient, basis: list):
        self.ambient = ambient
        self.A = ambient.A
        self.basis = basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    def twisted(self, phi: AlgebraAutomorphism) -> "SubBimodule":
        return SubBimodule(RightTwisted(self.ambient, phi), self.basis)

    def top(self):
        """Minimal generators as (vector, (u, v)) pairs, chosen block by block."""
        A, F = self.A, self.A.field
        amb = self.ambient
        solver = SpanSolver(F, track=False)
        for m in self.basis:
            for a in A.quiver.arrows:
                solver.add(amb.left(A.arrow(a.name), m))
                solver.add(amb.right(m, A.arrow(a.name)))
        rad_dim = solver.rank
        gens = []
        for u in A.vertices:
            for v in A.vertices:
                for m in self.basis:
                    x = amb.right(amb.left(A.e(u), m), A.e(v))
                    if x and solver.add(x):
                        gens.append((x, (u, v)))
        if rad_dim + len(gens) != self.dim:
            raise ResolutionError("top computation lost dimension")
        return gens

    def block_basis(self, u, v) -> list:
        A, F = self.A, self.A.field
        amb = self.ambient
        solver = SpanSolver(F, track=False)
        out = []
        for m in self.basis:
            x = amb.right(amb.left(A.e(u), m), A.e(v))
            if x and solver.add(x):
                out.append(x)
        return out


@dataclass
class SyzygyStep:
    module: SubBimodule
    generators: list          # (vector, (u, v))
    cover: FreeBimodule


def syzygy_step(M: SubBimodule) -> tuple:
    """Projective cover of M and its kernel, which is the next syzygy."""
    A = M.A
    gens = M.top()
    P = FreeBimodule(A, [t for _, t in gens])
    images = [g for g, _ in gens]
    cols = free_map_columns(P, M.ambient, images)
    ker = kernel_of(A.field, cols)
    return SyzygyStep(M, gens, P), SubBimodule(P, ker)


def full_syzygies(A: MeshAlgebra, n: int) -> list:
    """Ω^0 = A, Ω^1, ..., Ω^n computed by projective covers over A^e; returns SyzygyStep list of length n+1."""
    M = SubBimodule(RegularBimodule(A), [{k: 1} for k in range(A.dim)])
    steps = []
    for _ in range(n + 1):
        step, M = syzygy_step(M)
        steps.append(step)
    return steps


def bimodules_isomorphic(step: SyzygyStep, relations: list, N: SubBimodule, seed: int = 1,
                         tries: int = 4) -> bool:
    """Is the module of `step` isomorphic to N?

    `relations` generates the kernel of the cover of step.module.  Hom(M, N)
    is the space of generator images killing the relations; a random element of
    it is tested for surjectivity.
    """
    M = step.module
    A, F = M.A, M.A.field
    if M.dim != N.dim:
        return False
    ambN = N.ambient
    blocks = [N.block_basis(u, v) for _, (u, v) in step.generators]
    cols = {}
    for k, B in enumerate(blocks):
        for t, w in enumerate(B):
            col: dict = {}
            for l, z in enumerate(relations):
                for (s, bl, br), c in z.items():
                    if s != k:
                        continue
                    img = ambN.left({bl: 1}, ambN.right(w, {br: 1}))
                    for key, val in img.items():
                        vec_axpy(F, col, c * val, {(l, key): 1})
            cols[(k, t)] = col
    sols = kernel_of(F, cols)
    if not sols:
        return False
    rng = random.Random(seed)
    P = step.cover
    for _ in range(tries):
        coef = [F(rng.randint(-60, 60)) for _ in sols]
        combo: dict = {}
        for c, s in zip(coef, sols):
            vec_axpy(F, combo, c, s)
        images = []
        for k, B in enumerate(blocks):
            img: dict = {}
            for t, w in enumerate(B):
                if (k, t) in combo:
                    vec_axpy(F, img, combo[(k, t)], w)
            images.append(img)
        r = rank_of(F, (apply_free_map(P, ambN, images, {key: 1}) for key in P.basis_keys()))
        if r == N.dim:
            return True
    return False


def verify_twist_recursion(A: MeshAlgebra, n: int = 6, mu: AlgebraAutomorphism | None = None) -> list:
    """Compare Ω^{3k+j} with Ω^j twisted on the right by θ^k, θ = μ^{-1}, for 3 <= 3k+j <= n.

    Also records whether the opposite twist μ would have matched, which pins the direction.
    """
    mu = mu or omega3_twist(A)
    theta = mu.inverse()
    steps = full_syzygies(A, n + 1)
    rows = []
    for idx in range(3, n + 1):
        k, j = divmod(idx, 3)
        base = steps[j].module
        relations = steps[idx + 1].module.basis if idx + 1 < len(steps) else None
        if relations is None:
            break
        pred = base.twisted(theta.power(k))
        alt = base.twisted(mu.power(k))
        # relations of Ω^idx are the generators of Ω^{idx+1}
        rel_gens = [g for g, _ in steps[idx + 1].generators]
        rows.append({
            "n": idx,
            "dim": steps[idx].module.dim,
            "predicted": f"Omega^{j} twisted by mu^-{k}",
            "match": bimodules_isomorphic(steps[idx], rel_gens, pred),
            "match_opposite_twist": bimodules_isomorphic(steps[idx], rel_gens, alt),
        })
    return rows

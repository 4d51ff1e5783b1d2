"""Dynkin data, stable translation quivers and their finite quotients of ZΔ.

Conventions used throughout the package:

* Dynkin labels.  A_n is the chain 0..n-1.  D_n is the chain 0..n-3 with n-3
  joined to the two leaves n-2 and n-1.  E_n is the chain 0..n-2 with n-1
  attached to vertex 2.
* ZΔ has vertices (x, n).  With the bipartite colouring c (vertex 0 has
  colour 0) every Dynkin edge is oriented from colour 0 to colour 1, and
  (x, n) sits at time 2n + c(x).  The arrows are (x, n) -> (y, n) and
  (y, n-1) -> (x, n) for each edge x - y with c(x) = 0, and τ(x, n) = (x, n-1).
* A quotient ZΔ/<g> keeps the orbit representatives whose time lies in
  [0, |shift of g|), so the vertices of ZΔ/<τ^m> are the pairs (x, slice)
  with 0 <= slice < m.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable

FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "L")
RHO_KINDS = ("none", "reflection", "triality", "moebius")


class QuiverError(ValueError):
    pass


# Dynkin data ---------------------------------------------------------------

@dataclass(frozen=True)
class DynkinDatum:
    family: str
    rank: int
    m_delta: int
    h: int
    h_star: int | None
    edges: tuple = ()
    cover: tuple | None = None  # (family, rank) of the simply laced cover

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    @property
    def vertices(self) -> tuple:
        return tuple(range(self.rank))

    @property
    def weakly_symmetric(self) -> bool:
        """True for A_1, D_even, E_7, E_8, where the Nakayama permutation is trivial."""
        return self.simply_laced and self.h_star is not None and 2 * self.h_star == self.h

    def colors(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        col = {0: 0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in col:
                    col[w] = 1 - col[v]
                    queue.append(w)
        return col

    def reflection(self) -> dict | None:
        """The order-2 graph automorphism, or None when there is none."""
        n = self.rank
        if self.family == "A" and n >= 2:
            return {x: n - 1 - x for x in range(n)}
        if self.family == "D":
            r = {x: x for x in range(n)}
            r[n - 2], r[n - 1] = n - 1, n - 2
            return r
        if self.family == "E" and n == 6:
            return {0: 4, 1: 3, 2: 2, 3: 1, 4: 0, 5: 5}
        return None

    def triality(self) -> dict | None:
        if self.family == "D" and self.rank == 4:
            return {0: 2, 2: 3, 3: 0, 1: 1}
        return None


def _simply_laced_edges(family: str, n: int) -> tuple:
    if family == "A":
        return tuple((i, i + 1) for i in range(n - 1))
    if family == "D":
        chain = [(i, i + 1) for i in range(n - 3)]
        return tuple(chain + [(n - 3, n - 2), (n - 3, n - 1)])
    if family == "E":
        return tuple([(i, i + 1) for i in range(n - 2)] + [(2, n - 1)])
    raise QuiverError(family)


def _coxeter(family: str, n: int) -> int:
    return {"A": n + 1, "D": 2 * n - 2, "B": 2 * n, "C": 2 * n, "F": 12, "G": 6,
            "E": {6: 12, 7: 18, 8: 30}.get(n, 0)}[family]


_COVERS = {
    "B": lambda n: ("A", 2 * n - 1),
    "C": lambda n: ("D", n + 1),
    "F": lambda n: ("E", 6),
    "G": lambda n: ("D", 4),
    "L": lambda n: ("A", 2 * n),
}


def build_dynkin(family: str, rank: int, _allow_d3: bool = False) -> DynkinDatum:
    """Dynkin datum with m_Δ, Coxeter number h_Δ and h*_Δ.

    Non simply laced families carry the constants of their simply laced cover,
    which is what the quotient constructions use.
    """
    family = str(family).upper()
    if family not in FAMILIES or not isinstance(rank, int) or rank < 1:
        raise QuiverError(f"invalid Dynkin type {family}{rank}")
    ok = {
        "A": rank >= 1, "B": rank >= 2, "C": rank >= 2,
        "D": rank >= 4 or (_allow_d3 and rank == 3),
        "E": rank in (6, 7, 8), "F": rank == 4, "G": rank == 2, "L": rank >= 1,
    }[family]
    if not ok:
        raise QuiverError(f"invalid Dynkin type {family}{rank}")
    if family in "ADE":
        h = _coxeter(family, rank)
        weak = (family == "A" and rank == 1) or (family == "D" and rank % 2 == 0) or \
            (family == "E" and rank in (7, 8))
        return DynkinDatum(family, rank, h - 1, h, h // 2 if weak else h,
                           _simply_laced_edges(family, rank))
    cf, cr = _COVERS[family](rank)
    cover = build_dynkin(cf, cr, _allow_d3=True)
    return DynkinDatum(family, rank, cover.m_delta, cover.h, None, (), (cf, cr))


def parse_type(text: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Za-z])_?(\d+)\s*", text or "")
    if not m:
        raise QuiverError(f"cannot parse Dynkin type {text!r}")
    return m.group(1).upper(), int(m.group(2))


# translation quivers ---------------------------------------------------------

@dataclass(frozen=True)
class Arrow:
    name: Hashable
    source: Hashable
    target: Hashable


@dataclass(frozen=True, eq=False)
class TranslationQuiver:
    vertices: tuple
    arrows: tuple
    tau: dict
    sigma: dict
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_arrow", {a.name: a for a in self.arrows})
        object.__setattr__(self, "_arrow_index", {a.name: i for i, a in enumerate(self.arrows)})
        object.__setattr__(self, "_vertex_index", {v: i for i, v in enumerate(self.vertices)})

    def arrow(self, name) -> Arrow:
        return self._arrow[name]

    def arrow_index(self, name) -> int:
        return self._arrow_index[name]

    def vertex_index(self, v) -> int:
        return self._vertex_index[v]

    def out_arrows(self, v) -> list:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v) -> list:
        return [a for a in self.arrows if a.target == v]

    @property
    def tau_inv(self) -> dict:
        return {w: v for v, w in self.tau.items()}

    @property
    def tau_a(self) -> dict:
        """Translation on arrows, σ²: an arrow x -> y goes to τx -> τy."""
        return {a: self.sigma[self.sigma[a]] for a in self.sigma}

    @property
    def default_max_len(self) -> int:
        return int(self.meta.get("max_len", 2 * len(self.vertices) + 4))

    def validate(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise QuiverError("repeated vertex")
        if set(self.tau) != vs or set(self.tau.values()) != vs:
            raise QuiverError("tau is not a bijection on vertices")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("repeated arrow name")
        if set(self.sigma) != set(names) or set(self.sigma.values()) != set(names):
            raise QuiverError("sigma is not a bijection on arrows")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.name!r} has unknown endpoints")
            s = self.arrow(self.sigma[a.name])
            if s.source != self.tau[a.target] or s.target != a.source:
                raise QuiverError(f"sigma({a.name!r}) has the wrong endpoints")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "vertices": [vertex_label(v) for v in self.vertices],
            "arrows": [
                {"name": arrow_label(a.name), "source": vertex_label(a.source),
                 "target": vertex_label(a.target)}
                for a in self.arrows
            ],
            "tau": {vertex_label(v): vertex_label(self.tau[v]) for v in self.vertices},
            "sigma": {arrow_label(a.name): arrow_label(self.sigma[a.name]) for a in self.arrows},
        }


def vertex_label(v) -> str:
    if isinstance(v, tuple):
        return ".".join(vertex_label(x) for x in v)
    return str(v)


def arrow_label(name) -> str:
    if isinstance(name, tuple) and len(name) == 2 and all(isinstance(x, tuple) for x in name):
        return f"{vertex_label(name[0])}->{vertex_label(name[1])}"
    if isinstance(name, tuple):
        return "_".join(arrow_label(x) for x in name)
    return str(name)


def export_dot(q: TranslationQuiver) -> str:
    lines = [f'digraph "{q.label or "quiver"}" {{']
    for v in q.vertices:
        lines.append(f'  "{vertex_label(v)}";')
    for a in q.arrows:
        lines.append(f'  "{vertex_label(a.source)}" -> "{vertex_label(a.target)}" '
                     f'[label="{arrow_label(a.name)}"];')
    for v in q.vertices:
        t = q.tau[v]
        if t != v:
            lines.append(f'  "{vertex_label(v)}" -> "{vertex_label(t)}" [style=dashed, color=gray];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(q: TranslationQuiver) -> str:
    return json.dumps(q.to_dict(), indent=2, sort_keys=True)


# quotients of ZΔ -------------------------------------------------------------

@dataclass(frozen=True)
class QuotientSpec:
    base: DynkinDatum
    m: int = 1
    rho_kind: str = "none"

    def __post_init__(self):
        b = self.base
        if not b.simply_laced:
            raise QuiverError("the base of a quotient must be simply laced")
        if not isinstance(self.m, int) or self.m < 1:
            raise QuiverError("m must be a positive integer")
        k = self.rho_kind
        if k not in RHO_KINDS:
            raise QuiverError(f"unknown rho kind {k!r}")
        if k == "reflection" and (b.reflection() is None or (b.family == "A" and b.rank % 2 == 0)):
            raise QuiverError(f"{b.name} has no colour-preserving reflection")
        if k == "triality" and b.triality() is None:
            raise QuiverError("triality needs D4")
        if k == "moebius" and not (b.family == "A" and b.rank % 2 == 0):
            raise QuiverError("the glide reflection needs A_2n")


class _ZDelta:
    """Enough of ZΔ and the generator g to canonicalize orbits."""

    def __init__(self, spec: QuotientSpec):
        self.spec = spec
        b = spec.base
        self.col = b.colors()
        self.m = spec.m
        if spec.rho_kind == "none":
            self.rho = None
        elif spec.rho_kind == "triality":
            self.rho = b.triality()
        else:
            self.rho = b.reflection()
        self.shift = 1 - 2 * self.m if spec.rho_kind == "moebius" else -2 * self.m
        self.period = -self.shift

    def time(self, v) -> int:
        x, n = v
        return 2 * n + self.col[x]

    def g(self, v, power: int = 1):
        for _ in range(abs(power)):
            v = self._g(v) if power > 0 else self._g_inv(v)
        return v

    def _rho(self, v):
        x, n = v
        if self.rho is None:
            return v
        y = self.rho[x]
        if self.spec.rho_kind == "moebius" and self.col[x] == 1:
            return (y, n + 1)
        return (y, n)

    def _rho_inv(self, v):
        x, n = v
        if self.rho is None:
            return v
        inv = {b: a for a, b in self.rho.items()}
        y = inv[x]
        if self.spec.rho_kind == "moebius" and self.col[y] == 1:
            return (y, n - 1)
        return (y, n)

    def _g(self, v):
        x, n = v
        return self._rho((x, n - self.m))

    def _g_inv(self, v):
        x, n = self._rho_inv(v)
        return (x, n + self.m)

    def power_to_window(self, v) -> int:
        """The k with time(g^k v) in [0, period)."""
        t = self.time(v)
        # each application of g moves time by self.shift = -period
        return t // self.period

    def canon(self, v):
        return self.g(v, self.power_to_window(v))

    def canon_arrow(self, u, v):
        k = self.power_to_window(u)
        return (self.g(u, k), self.g(v, k))

    def out_arrows(self, v) -> list:
        x, n = v
        out = []
        for a, b in self.spec.base.edges:
            for p, q in ((a, b), (b, a)):
                if p != x:
                    continue
                if self.col[x] == 0:
                    out.append((q, n))          # (x,n) -> (y,n)
                else:
                    out.append((q, n + 1))      # (y,n) -> (x,n+1)
        return out


def build_quotient_quiver(spec: QuotientSpec) -> TranslationQuiver:
    """The stable translation quiver ZΔ/<g> for g = τ^m or ρτ^m."""
    Z = _ZDelta(spec)
    b = spec.base
    verts = []
    for x in b.vertices:
        for n in range(-1, Z.period + 1):
            v = (x, n)
            if 0 <= Z.time(v) < Z.period:
                verts.append(v)
    verts.sort(key=lambda v: (Z.time(v), v))
    arrows = []
    for u in verts:
        for w in Z.out_arrows(u):
            name = (u, w)
            arrows.append(Arrow(name, u, Z.canon(w)))
    arrows.sort(key=lambda a: a.name)
    tau = {v: Z.canon((v[0], v[1] - 1)) for v in verts}
    sigma = {}
    for a in arrows:
        u, w = a.name
        tw = (w[0], w[1] - 1)
        sigma[a.name] = Z.canon_arrow(tw, u)
    label = f"Z{b.name}/<{'' if spec.rho_kind == 'none' else 'rho '}tau^{spec.m}>"
    if spec.rho_kind not in ("none",):
        label += f" [{spec.rho_kind}]"
    q = TranslationQuiver(tuple(verts), tuple(arrows), tau, sigma, label,
                          {"max_len": b.h, "base": b.name, "m": spec.m, "rho_kind": spec.rho_kind})
    q.validate()
    return q


def preprojective_quiver(delta: DynkinDatum) -> TranslationQuiver:
    return build_quotient_quiver(QuotientSpec(delta, 1, "none"))


# generalized preprojective quivers built directly ---------------------------

def _quiver_from_tau(vertices, arrows, tau, label, meta) -> TranslationQuiver:
    """Fill in σ when each pair τ(y), x carries at most one arrow τ(y) -> x."""
    by_ends: dict = {}
    for a in arrows:
        by_ends.setdefault((a.source, a.target), []).append(a.name)
    sigma = {}
    for a in arrows:
        cands = by_ends.get((tau[a.target], a.source), [])
        if len(cands) != 1:
            raise QuiverError(f"cannot derive sigma for {a.name!r}")
        sigma[a.name] = cands[0]
    q = TranslationQuiver(tuple(vertices), tuple(arrows), dict(tau), sigma, label, meta)
    q.validate()
    return q


def _pair(i, j) -> list:
    return [Arrow(f"{i}>{j}", i, j), Arrow(f"{j}>{i}", j, i)]


def generalized_preprojective_quiver(family: str, rank: int) -> TranslationQuiver:
    """The quivers of the generalized preprojective algebras P(B_n), P(C_n), P(F_4), P(G_2), P(L_n)."""
    d = build_dynkin(family, rank)
    fam, n = d.family, d.rank
    meta = {"max_len": d.h, "family": fam, "rank": n, "cover": d.cover}
    if fam == "G":
        verts = [0, 1, 2, 3]
        arrows = [
            Arrow("alpha", 0, 1), Arrow("gamma", 0, 2), Arrow("beta", 0, 3),
            Arrow("sigma_gamma", 1, 0), Arrow("sigma_beta", 2, 0), Arrow("sigma_alpha", 3, 0),
        ]
        tau = {0: 0, 1: 3, 2: 1, 3: 2}
        return _quiver_from_tau(verts, arrows, tau, "Q_G2", meta)
    if fam == "L":
        verts = list(range(n))
        arrows = [Arrow("eps", 0, 0)]
        for i in range(n - 1):
            arrows += _pair(i, i + 1)
        return _quiver_from_tau(verts, arrows, {v: v for v in verts}, f"Q_L{n}", meta)
    if fam == "C":
        verts = list(range(n + 1))
        arrows = _pair(0, 2) + _pair(1, 2)
        for i in range(2, n):
            arrows += _pair(i, i + 1)
        tau = {v: v for v in verts}
        tau[0], tau[1] = 1, 0
        return _quiver_from_tau(verts, arrows, tau, f"Q_C{n}", meta)
    if fam == "B":
        verts = list(range(2 * n - 1))
        arrows = _pair(0, 1) + _pair(0, 2)
        top = list(range(1, 2 * n - 1, 2))      # 1, 3, 5, ...
        bot = list(range(2, 2 * n - 1, 2))      # 2, 4, 6, ...
        for k in range(len(top) - 1):
            arrows.append(Arrow(f"{top[k + 1]}>{top[k]}", top[k + 1], top[k]))
            arrows.append(Arrow(f"{bot[k + 1]}>{bot[k]}", bot[k + 1], bot[k]))
            arrows.append(Arrow(f"{top[k]}>{bot[k + 1]}", top[k], bot[k + 1]))
            arrows.append(Arrow(f"{bot[k]}>{top[k + 1]}", bot[k], top[k + 1]))
        tau = {0: 0}
        for a, b in zip(top, bot):
            tau[a], tau[b] = b, a
        return _quiver_from_tau(verts, arrows, tau, f"Q_B{n}", meta)
    if fam == "F":
        verts = list(range(6))
        arrows = _pair(0, 1) + _pair(0, 2) + _pair(0, 3) + [
            Arrow("2>5", 2, 5), Arrow("3>4", 3, 4), Arrow("4>2", 4, 2), Arrow("5>3", 5, 3),
        ]
        tau = {0: 0, 1: 1, 2: 3, 3: 2, 4: 5, 5: 4}
        return _quiver_from_tau(verts, arrows, tau, "Q_F4", meta)
    raise QuiverError(f"{fam}{n} is not a generalized preprojective family")


def cover_quotient_spec(family: str, rank: int, m: int = 1) -> QuotientSpec:
    """The quotient of the simply laced cover whose m=1 case gives P(family_rank)."""
    d = build_dynkin(family, rank)
    if d.simply_laced:
        return QuotientSpec(d, m, "none")
    cf, cr = d.cover
    kind = {"B": "reflection", "C": "reflection", "F": "reflection",
            "G": "triality", "L": "moebius"}[d.family]
    return QuotientSpec(build_dynkin(cf, cr, _allow_d3=True), m, kind)


# isomorphism of translation quivers --------------------------------------------

def translation_quiver_isomorphism(p: TranslationQuiver, q: TranslationQuiver) -> dict | None:
    """A vertex bijection carrying arrows (with multiplicity) and τ of p onto q, or None."""
    import networkx as nx
    from networkx.algorithms import isomorphism as iso

    def graph(t: TranslationQuiver):
        g = nx.MultiDiGraph()
        for v in t.vertices:
            g.add_node(v)
        for a in t.arrows:
            g.add_edge(a.source, a.target, kind="arrow")
        for v in t.vertices:
            g.add_edge(v, t.tau[v], kind="tau")
        return g

    gp, gq = graph(p), graph(q)
    matcher = iso.MultiDiGraphMatcher(gp, gq, edge_match=iso.categorical_multiedge_match("kind", None))
    if matcher.is_isomorphic():
        return dict(matcher.mapping)
    return None


# text specs for the command line ---------------------------------------------

_SPEC_RE = re.compile(r"^\s*(quotient|preprojective|gpp)\s+([A-Za-z]_?\d+)((?:\s+\w+=\w+)*)\s*$")


def parse_quiver_spec(text: str) -> TranslationQuiver:
    """Parse 'quotient D4 m=2 rho=triality', 'preprojective A3' or 'gpp G2'.

    A non simply laced type after 'quotient' means the matching quotient of
    its cover, so 'quotient G2 m=1' is the quiver of P(G_2).
    """
    mt = _SPEC_RE.match(text or "")
    if not mt:
        raise QuiverError(f"cannot parse quiver spec {text!r}")
    kind, typ, opts = mt.groups()
    fam, rank = parse_type(typ)
    kv = dict(o.split("=") for o in opts.split())
    unknown = set(kv) - {"m", "rho"}
    if unknown:
        raise QuiverError(f"unknown options {sorted(unknown)}")
    if kind == "gpp":
        return generalized_preprojective_quiver(fam, rank)
    m = int(kv.get("m", 1))
    if kind == "preprojective":
        m = 1
    d = build_dynkin(fam, rank)
    if d.simply_laced:
        spec = QuotientSpec(d, m, kv.get("rho", "none"))
    else:
        if "rho" in kv:
            raise QuiverError("rho is implied by a non simply laced type")
        spec = cover_quotient_spec(fam, rank, m)
    return build_quotient_quiver(spec)

"""Sign calculus on orbit categories of derived Dynkin categories.

An element S^a Σ^b ε^e of the group generated by the Serre functor S, the
suspension Σ and the sign twist ε is stored as the integer vector (a, b, e),
with e read modulo 2.  The relations form a sublattice of Z^3 that always
contains (0, 0, 2); in characteristic 2 it also contains (0, 0, 1).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .quiver import DynkinDatum, build_dynkin, parse_type


class OrbitError(ValueError):
    pass


class UnsupportedOrbit(OrbitError):
    """F cannot be written in S and Σ alone, or ρ has order 3."""


# integer lattices

def hnf(rows: list[tuple[int, ...]]) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by rows.

    The result is upper triangular with positive pivots; entries above each
    pivot are reduced into [0, pivot).
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        # Euclid on the column until one row is left with a nonzero entry
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[col] else rest).append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    for i, r in enumerate(out):
        c = next(j for j, x in enumerate(r) if x)
        for k in range(i):
            q = out[k][c] // r[c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], r)]
    return out


def lattice_contains(basis: list[list[int]], v) -> bool:
    """Membership of v in the lattice with the given HNF basis."""
    v = list(v)
    for r in basis:
        c = next(j for j, x in enumerate(r) if x)
        if any(v[:c]):
            return False
        if v[c] % r[c]:
            return False
        q = v[c] // r[c]
        v = [x - q * y for x, y in zip(v, r)]
    return not any(v)


def lattice_index(basis: list[list[int]], ncols: int) -> int | None:
    """Index in Z^ncols, or None when the rank is deficient."""
    if len(basis) < ncols:
        return None
    idx = 1
    for i, r in enumerate(basis):
        idx *= r[i]
    return idx


# ambient group generated by τ and ρ

@dataclass(frozen=True)
class AmbientPicard:
    """Images of S and Σ in the group generated by τ and ρ_Δ.

    kind 'trivial': the group is Z (τ-exponent).  kind 'order2': Z x Z/2
    (τ-exponent, ρ-exponent).  kind 'glide' (Δ = A_{2n}): the group is Z
    generated by a glide ρ with ρ^2 = τ^{-1}, and coordinates are ρ-exponents.
    """

    delta: DynkinDatum
    kind: str
    sigma: tuple
    serre: tuple
    tau: tuple
    lattice: tuple   # generator of L = {(a,b) : S^a Σ^b = 1}

    def image(self, a: int, b: int) -> tuple:
        out = tuple(a * s + b * t for s, t in zip(self.serre, self.sigma))
        if self.kind == "order2":
            out = (out[0], out[1] % 2)
        return out

    def is_identity(self, a: int, b: int) -> bool:
        return not any(self.image(a, b))


def ambient_lattice(delta: DynkinDatum) -> AmbientPicard:
    if not delta.simply_laced:
        raise OrbitError("Δ must be simply laced")
    h = delta.h
    k = h // 2
    if delta.family == "A" and delta.rank % 2 == 0:
        n = delta.rank // 2
        sigma, serre, tau = (2 * n + 1,), (2 * n - 1,), (-2,)
        lat = (2 * n + 1, -(2 * n - 1))
        kind = "glide"
    elif _rho_trivial(delta):
        sigma, serre, tau = (-k,), (1 - k,), (1,)
        g = gcd(k, 1 - k)
        lat = (k // g, (1 - k) // g)
        kind = "trivial"
    else:
        sigma, serre, tau = (-k, 1), (1 - k, 1), (1, 0)
        lat = (2 * k, 2 - 2 * k)
        kind = "order2"
    amb = AmbientPicard(delta, kind, sigma, serre, tau, lat)
    # S Σ^{-1} = τ and Σ^2 = τ^{-h}
    st = tuple(s - t for s, t in zip(amb.serre, amb.sigma))
    assert amb.image(1, -1) == _norm(kind, st) == _norm(kind, tau)
    assert amb.image(0, 2) == _norm(kind, tuple(-h * t for t in tau))
    assert amb.is_identity(*lat)
    return amb


def _rho_trivial(delta: DynkinDatum) -> bool:
    f, r = delta.family, delta.rank
    return (f == "A" and r == 1) or (f == "D" and r % 2 == 0) or (f == "E" and r in (7, 8))


def _norm(kind, v):
    return (v[0], v[1] % 2) if kind == "order2" else tuple(v)


# presentations

def sign_exponent(a: int, b: int) -> int:
    """Exponent of ε attached to S^a Σ^b = F: b(b + a) mod 2."""
    return (b * (b + a)) % 2


@dataclass
class OrbitPresentation:
    ambient: AmbientPicard
    m: int
    d: int
    relations: list = field(default_factory=list)

    @property
    def delta(self) -> DynkinDatum:
        return self.ambient.delta

    def lattice(self, char: int) -> list[list[int]]:
        rows = [tuple(r) for r in self.relations] + [(0, 0, 2)]
        if char == 2:
            rows.append((0, 0, 1))
        return hnf(rows)

    def to_dict(self) -> dict:
        return {"delta": self.delta.name, "F": [self.m, self.d],
                "ambient_kind": self.ambient.kind,
                "L": list(self.ambient.lattice),
                "relations": [list(r) for r in self.relations]}


def orbit_presentation(delta: DynkinDatum, m: int, d: int, reps: int = 2) -> OrbitPresentation:
    """Relations S^{m'} Σ^{d'} = ε^{d'(d'+m')} for (m', d') = (m, d) + jℓ, |j| <= reps."""
    amb = ambient_lattice(delta)
    la, lb = amb.lattice
    rels = []
    for j in range(-reps, reps + 1):
        a, b = m + j * la, d + j * lb
        rels.append((a, b, sign_exponent(a, b)))
    p = OrbitPresentation(amb, m, d, rels)
    # changing the coset representative must not produce a new relation
    basis = p.lattice(0)
    for j in (reps + 1, -reps - 1):
        a, b = m + j * la, d + j * lb
        if not lattice_contains(basis, (a, b, sign_exponent(a, b))):
            raise OrbitError(f"coset representative ({a},{b}) gives an inconsistent sign")
    return p


@dataclass
class OrbitSolution:
    value: int | None
    certification: str = "upper-bound-certified"
    search_bound: int | None = None

    def to_dict(self):
        return {"value": self.value, "certification": self.certification,
                "search_bound": self.search_bound}


def _column_pivot(basis, col):
    for r in basis:
        c = next(j for j, x in enumerate(r) if x)
        if c == col:
            return r[col]
    return None


def solve_cy(p: OrbitPresentation, char: int = 0) -> OrbitSolution:
    """Least d > 0 with S = Σ^d in the presented group."""
    basis = p.lattice(char)
    p1 = _column_pivot(basis, 1)
    if p1 is not None:
        bound = p1 * _column_pivot(basis, 2)
        for d in range(1, bound + 1):
            if lattice_contains(basis, (1, -d, 0)):
                return OrbitSolution(d, search_bound=bound)
        return OrbitSolution(None, search_bound=bound)
    # Σ has infinite order modulo the relations, so at most one d works
    if _column_pivot(basis, 0) is None:
        return OrbitSolution(None)
    r0 = next(r for r in basis if r[0])
    if r0[0] != 1:
        return OrbitSolution(None)
    d = -r0[1]
    if d > 0 and lattice_contains(basis, (1, -d, 0)):
        return OrbitSolution(d)
    return OrbitSolution(None)


def solve_sigma_period(p: OrbitPresentation, char: int = 0) -> OrbitSolution:
    """Least q > 0 with Σ^q = 1 in the presented group."""
    basis = p.lattice(char)
    p1 = _column_pivot(basis, 1)
    if p1 is None:
        return OrbitSolution(None)
    bound = p1 * _column_pivot(basis, 2)
    for q in range(p1, bound + 1, p1):
        if lattice_contains(basis, (0, q, 0)):
            return OrbitSolution(q, search_bound=bound)
    raise AssertionError("Σ^{p1 p2} always lies in the lattice")


# F for the standard families

def presentation_for_type(delta: DynkinDatum, f, t: int) -> OrbitPresentation:
    """Orbit presentation of the stable category of an algebra of type (Δ, f, t)."""
    f = Fraction(f)
    if t == 3:
        raise UnsupportedOrbit("triality: ρ has order 3 and F is not a word in S and Σ")
    if t == 1:
        M = f * delta.m_delta
        if M.denominator != 1 or M <= 0:
            raise OrbitError("f*m_delta must be a positive integer")
        M = int(M)
        return orbit_presentation(delta, M, -M)   # τ^M = S^M Σ^{-M}
    if f.denominator != 1:
        raise OrbitError("for t = 2 the frequency must be an integer")
    s = int(f)
    fam, r = delta.family, delta.rank
    if fam == "A" and r % 2 == 1 and r >= 3:
        n = (r - 1) // 2
        return orbit_presentation(delta, n + 1 - s, -s - n)
    if fam == "D" and r % 2 == 1:
        return orbit_presentation(delta, r - s - 1, -s - r + 2)
    if fam == "D":
        raise UnsupportedOrbit("D_n with n even and t = 2: ρτ^m is not a word in S and Σ")
    if fam == "E" and r == 6:
        return orbit_presentation(delta, s - 6, s + 5)
    raise OrbitError(f"no torsion order {t} algebras of tree class {delta.name}")


_F_TERM = re.compile(r"^(S|Sigma|Σ)(?:\^?\(?(-?\d+)\)?)?$")


def parse_functor(text: str) -> tuple[int, int]:
    """Parse 'S^a Sigma^b' (either factor optional, any order) into (a, b)."""
    a = b = 0
    seen = set()
    toks = text.replace("*", " ").split()
    if not toks:
        raise OrbitError("empty functor expression")
    for tok in toks:
        mt = _F_TERM.match(tok)
        if not mt:
            raise OrbitError(f"cannot parse factor {tok!r}")
        name = "S" if mt.group(1) == "S" else "Sigma"
        if name in seen:
            raise OrbitError(f"repeated factor {name}")
        seen.add(name)
        e = int(mt.group(2)) if mt.group(2) is not None else 1
        if name == "S":
            a = e
        else:
            b = e
    return a, b


def orbit_report(delta_name: str, m: int, d: int, char: int) -> dict:
    fam, rank = parse_type(delta_name)
    p = orbit_presentation(build_dynkin(fam, rank), m, d)
    out = p.to_dict()
    out["char"] = char
    out["cy_d"] = solve_cy(p, char).to_dict()
    out["sigma_period"] = solve_sigma_period(p, char).to_dict()
    return out

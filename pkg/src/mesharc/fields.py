"""Exact prime fields and sparse linear algebra.

Vectors are plain dicts mapping a hashable key to a nonzero field value.
Over Q the values are ints or Fractions; over GF(p) they are ints in [0, p).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Q when characteristic is 0, otherwise the prime field GF(p)."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or c < 0 or (c > 0 and not _is_prime(c)):
            raise FieldError(f"characteristic must be 0 or a prime, got {c!r}")

    @property
    def p(self) -> int:
        return self.characteristic

    def __call__(self, x) -> object:
        """Coerce an int or Fraction into the field."""
        p = self.characteristic
        if p == 0:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, p)) % p
        return x % p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p == 0:
            return Fraction(1) / x
        return pow(x, p - 2, p)

    def neg(self, x):
        return self(-x)

    def fmt(self, x) -> str:
        x = self(x)
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = FieldSpec(0)


# sparse vector helpers

def vec_axpy(F: FieldSpec, y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    if a == 0:
        return
    p = F.characteristic
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        if p:
            w %= p
        if w == 0:
            y.pop(k, None)
        else:
            y[k] = w


def vec_add(F: FieldSpec, *vs: dict) -> dict:
    out: dict = {}
    for v in vs:
        vec_axpy(F, out, 1, v)
    return out


def vec_scale(F: FieldSpec, a, x: dict) -> dict:
    a = F(a)
    if a == 0:
        return {}
    p = F.characteristic
    if p:
        return {k: (a * v) % p for k, v in x.items()}
    return {k: a * v for k, v in x.items()}


def vec_sub(F: FieldSpec, x: dict, y: dict) -> dict:
    out = dict(x)
    vec_axpy(F, out, -1, y)
    return out


class SpanSolver:
    """Incremental row echelon form with provenance.

    Each added vector carries a tag. Reduced rows remember which combination of
    tagged inputs produced them, so the solver can express a vector in terms of
    the inputs, and every dependent input yields a kernel relation.

    Keys must be mutually comparable; the pivot of a row is its largest key.
    """

    def __init__(self, F: FieldSpec, track: bool = True):
        self.F = F
        self.track = track
        self.rows: dict = {}      # pivot key -> (row, provenance); row[pivot] == 1
        self.kernel: list[dict] = []

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict, prov: dict | None):
        F = self.F
        rows = self.rows
        vec = dict(vec)
        while vec:
            k = max(vec)
            if k not in rows:
                # leading key is free; smaller pivots may remain but the vector
                # is already known to be independent
                return vec, prov, k
            row, rprov = rows[k]
            c = vec[k]
            vec_axpy(F, vec, -c, row)
            if prov is not None:
                vec_axpy(F, prov, -c, rprov)
        return vec, prov, None

    def add(self, vec: dict, tag: Hashable = None) -> bool:
        """Insert vec; return True if it was independent of earlier rows."""
        prov = {tag: 1} if self.track else None
        vec, prov, lead = self._reduce(vec, prov)
        if lead is None:
            if self.track:
                self.kernel.append(prov)
            return False
        inv = self.F.inv(vec[lead])
        row = vec_scale(self.F, inv, vec)
        if prov is not None:
            prov = vec_scale(self.F, inv, prov)
        self.rows[lead] = (row, prov)
        return True

    def contains(self, vec: dict) -> bool:
        return self.residual(vec) == {}

    def residual(self, vec: dict) -> dict:
        """Fully reduce vec; the result is zero exactly when vec lies in the span."""
        F = self.F
        rows = self.rows
        vec = dict(vec)
        out: dict = {}
        while vec:
            k = max(vec)
            c = vec[k]
            if k in rows:
                vec_axpy(F, vec, -c, rows[k][0])
            else:
                out[k] = c
                del vec[k]
        return out

    def express(self, vec: dict) -> dict | None:
        """Coefficients over input tags summing to vec, or None if vec is outside the span."""
        if not self.track:
            raise RuntimeError("provenance tracking disabled")
        F = self.F
        rows = self.rows
        vec = dict(vec)
        combo: dict = {}
        while vec:
            k = max(vec)
            if k not in rows:
                return None
            row, rprov = rows[k]
            c = vec[k]
            vec_axpy(F, vec, -c, row)
            vec_axpy(F, combo, c, rprov)
        return combo


def rank_of(F: FieldSpec, vectors: Iterable[dict]) -> int:
    s = SpanSolver(F, track=False)
    for v in vectors:
        s.add(v)
    return s.rank


def kernel_of(F: FieldSpec, columns: dict) -> list[dict]:
    """Basis of {x : sum_t x[t] * columns[t] = 0}, as dicts over column tags."""
    s = SpanSolver(F)
    for tag, col in columns.items():
        s.add(col, tag)
    return s.kernel


def solve_in_span(F: FieldSpec, columns: dict, targets: dict) -> dict:
    """Express each target as a combination of columns. Raises if one is unreachable."""
    s = SpanSolver(F)
    for tag, col in columns.items():
        s.add(col, tag)
    out = {}
    for name, t in targets.items():
        combo = s.express(t)
        if combo is None:
            raise FieldError(f"target {name!r} is not in the span")
        out[name] = combo
    return out

"""Basis of P(G2), its dual basis under the socle form, and the Ω³ twist."""
from __future__ import annotations

import sys

from mesharc.algebra import mesh_algebra, socle_and_dual_basis
from mesharc.fields import FieldSpec
from mesharc.quiver import arrow_label, parse_quiver_spec, vertex_label
from mesharc.resolution import arrow_signs, omega3_twist


def word(A, k):
    b = A.basis[k]
    return ".".join(arrow_label(a) for a in b.word) or f"e{vertex_label(b.source)}"


def main(char: int = 0) -> int:
    A = mesh_algebra(parse_quiver_spec("gpp G2"), FieldSpec(char))
    D = socle_and_dual_basis(A)
    F = A.field
    print(f"dim {A.dim} over {F}; pairing identity: {D.pairing_matrix_is_identity()}")
    for v in A.vertices:
        print(f"\ne_{vertex_label(v)}A  ({len(A.by_source[v])} elements)")
        for k in A.by_source[v]:
            dual = " + ".join(f"{F.fmt(c)}*{word(A, j)}" for j, c in sorted(D.dual[k].items()))
            print(f"  {word(A, k):32s} dual: {dual}")
    print("\nNakayama permutation:", {vertex_label(a): vertex_label(b) for a, b in D.pi.items()})
    mu = omega3_twist(A, D)
    for a, s in arrow_signs(mu).items():
        print(f"  mu({arrow_label(a)}) = {F.fmt(s[1])} * {arrow_label(s[0])}" if s else f"  mu({arrow_label(a)}) not monomial")
    return 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 0))

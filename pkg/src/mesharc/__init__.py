"""Mesh algebras of stable translation quivers and their Calabi-Yau data."""
from __future__ import annotations

__version__ = "0.1.0"

from .fields import QQ, FieldSpec
from .quiver import build_dynkin, build_quotient_quiver, parse_quiver_spec, QuotientSpec
from .algebra import mesh_algebra, socle_and_dual_basis

__all__ = [
    "__version__", "QQ", "FieldSpec", "build_dynkin", "build_quotient_quiver",
    "parse_quiver_spec", "QuotientSpec", "mesh_algebra", "socle_and_dual_basis",
]

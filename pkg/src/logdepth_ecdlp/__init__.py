"""Reversible circuits for elliptic-curve discrete logarithms over binary fields."""

from .bitmatrix import BitMatrix
from .circuit import Circuit, CircuitBuilder, Gate, GateKind, ResourceReport, compose, depth, inverse, parse, serialize
from .edwards import AffinePoint, CurveSpec, ProjectivePoint, affine_add, find_toy_curve, projective_add, scalar_mul
from .field import FieldElement, FieldSpec

__all__ = [
    "BitMatrix", "Circuit", "CircuitBuilder", "Gate", "GateKind", "ResourceReport", "compose", "depth",
    "inverse", "parse", "serialize", "AffinePoint", "CurveSpec", "ProjectivePoint", "affine_add",
    "find_toy_curve", "projective_add", "scalar_mul", "FieldElement", "FieldSpec",
]

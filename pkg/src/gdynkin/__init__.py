"""Toolkit for generalized Dynkin diagrams of diagonal braidings."""

from .cyclo import ONE, MINUS_ONE, RootOfUnity, rou, gf_contains, gf_elements, parse_token
from .diagram import Diagram, Shape, classify_shape
from .cartan import (
    BraidingMatrix,
    NotReflectableError,
    cartan_entry,
    cartan_matrix,
    gcm_finite_type,
    is_cartan_type,
)
from .weyl import Caps, RootSystemResult, WeylOrbit, orbit, positive_roots, reflect

__all__ = [
    "ONE",
    "MINUS_ONE",
    "RootOfUnity",
    "rou",
    "gf_contains",
    "gf_elements",
    "parse_token",
    "Diagram",
    "Shape",
    "classify_shape",
    "BraidingMatrix",
    "NotReflectableError",
    "cartan_entry",
    "cartan_matrix",
    "gcm_finite_type",
    "is_cartan_type",
    "Caps",
    "RootSystemResult",
    "WeylOrbit",
    "orbit",
    "positive_roots",
    "reflect",
]

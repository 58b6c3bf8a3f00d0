"""Exact-arithmetic verification of Futaki-character vanishing on the
catalogued K-polystable Fano threefolds: symmetry/adjoint constraint
machinery over Q(params), an exact toric moment-polytope engine, and a
declarative case catalog with a verifying CLI."""

__version__ = "1.0.0"

from .character import Verdict, vanishing_verdict, product_verdict
from .catalog import load_catalog, validate_case, validate_catalog
from .polyring import AmbientSpace, MultiPoly, ParamField, parse_poly
from .symmetry import MonomialAutomorphism, TorusGenerator, adjoint_matrix
from .toric import Polytope, class_to_polytope, futaki_vector, zero_locus_scan

__all__ = [
    "AmbientSpace", "MonomialAutomorphism", "MultiPoly", "ParamField",
    "Polytope", "TorusGenerator", "Verdict", "__version__", "adjoint_matrix",
    "class_to_polytope", "futaki_vector", "load_catalog", "parse_poly",
    "product_verdict", "validate_case", "validate_catalog",
    "vanishing_verdict", "zero_locus_scan",
]

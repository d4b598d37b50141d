"""Dimer models from torus line arrangements, McKay quivers, coamoebas."""

__version__ = "0.1.0"

from .arrangement import EnumerationConfig, enumerate_admissible
from .dimer import DimerModel, characteristic_polynomial
from .hv import dual_dimer, linear_hv, verify_theorem1
from .lattice import GroupMatrix, LatticePolygon, validate_polygon

__all__ = [
    "DimerModel",
    "EnumerationConfig",
    "GroupMatrix",
    "LatticePolygon",
    "characteristic_polynomial",
    "dual_dimer",
    "enumerate_admissible",
    "linear_hv",
    "validate_polygon",
    "verify_theorem1",
]

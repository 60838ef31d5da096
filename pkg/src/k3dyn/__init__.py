"""Exact lattice tools for automorphisms of K3 surfaces: curve
configurations, elliptic fibrations, Mordell-Weil translations, entropy
and Salem numbers."""

from .curveconf import CurveConfig, Divisor, LatticeModel, builtin, lattice_model
from .errors import K3DynError
from .poly import Poly

__all__ = ["CurveConfig", "Divisor", "K3DynError", "LatticeModel", "Poly", "builtin", "lattice_model"]
__version__ = "0.1.0"

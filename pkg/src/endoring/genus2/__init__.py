"""Genus-2 curves, their Jacobians and Frobenius data over prime fields."""

from .curve import BudgetExceededError, Curve, count_points_curve, frobenius_charpoly
from .frobenius import FrobPoly, classify_variety
from .igusa import igusa_invariants
from .jacobian import JacPoint, Jacobian
from .torsion import TorsionBasis, torsion_basis, verify_charpoly

__all__ = [
    "BudgetExceededError", "Curve", "FrobPoly", "JacPoint", "Jacobian", "TorsionBasis",
    "classify_variety", "count_points_curve", "frobenius_charpoly", "igusa_invariants",
    "torsion_basis", "verify_charpoly",
]

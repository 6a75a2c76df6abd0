"""Exact and numerical verification of the ladder representation of u(2,2) and its conformal field theory."""

from .algebra_core import ExactComplex, Mat4, Poly4, QSeries
from .checks import Check, Report

__all__ = ["ExactComplex", "Mat4", "Poly4", "QSeries", "Check", "Report"]
__version__ = "0.1.0"

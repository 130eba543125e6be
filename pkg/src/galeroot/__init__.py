"""Exclusion regions for complex roots of polynomials with nonnegative coefficients."""

from .basis import ALL_KINDS, BasisContext, BasisKind, DegenerateDegreeError

__version__ = "0.1.0"

__all__ = ["ALL_KINDS", "BasisContext", "BasisKind", "DegenerateDegreeError", "__version__"]

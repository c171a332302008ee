"""Exact verification tools for convexity and positivity of MacMahon q-Catalan polynomials."""

__version__ = "0.1.0"

from .exactpoly import IntPoly, RatFun
from .qcore import qcatalan, qcatalan_poly, q_binomial

__all__ = ["IntPoly", "RatFun", "qcatalan", "qcatalan_poly", "q_binomial", "__version__"]

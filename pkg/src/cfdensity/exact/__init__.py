"""Exact scalar tower: rationals, polynomials and real algebraic numbers."""

from fractions import Fraction as Rat

from .algnum import AlgNum, RealRoot, Unsupported, format_quadratic, real_roots, root_of, sign, sqrt_rat
from .linalg import charpoly, det, inverse
from .poly import Poly, count_roots, isolate_real_roots, sturm_sequence
from .spectral import cyclicity, dominant_limit_cone


def sign_of(a) -> int:
    """Exact sign of a rational or algebraic number."""
    return sign(a)


__all__ = [
    "Rat", "AlgNum", "RealRoot", "Unsupported", "Poly", "charpoly", "det", "inverse",
    "count_roots", "isolate_real_roots", "sturm_sequence", "real_roots", "root_of",
    "sqrt_rat", "sign_of", "format_quadratic", "dominant_limit_cone", "cyclicity",
]

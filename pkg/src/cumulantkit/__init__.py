"""Exact joint cumulants for tensor, free, Boolean and monotone independence."""

from .exactalg import Poly, format_rational, lagrange_interpolate, parse_rational, poly_derivative
from .moments import (
    MomentDataError,
    MomentFileError,
    MomentFunctional,
    load_moments,
    random_functional,
    save_moments,
)

__version__ = "0.1.0"

"""Exceptional X_m-Jacobi polynomials: construction, operator and spectral checks."""
from .errors import (DegenerateDegree, DomainError, ForbiddenDifference, NonConvergent,
                     NotInvariant, ParameterError, RangeViolation, SignMismatch, SingularWeight,
                     XJacobiError)
from .exceptional import (ExceptionalFamily, XParams, denominator_poly, eigenvalue,
                          exceptional_poly, family, validate_params, weight)
from .expansion import expand, gram_matrix, inner_product, norm
from .jacobi import JacobiParams, gauss_jacobi_rule, jacobi_poly
from .operator import apply_T_pointwise, apply_T_polynomial, greens_residual, in_F_space
from .polyalg import EXACT, FLOAT, Polynomial
from .spectral import (boundary_case, classify_endpoint, deficiency_index, gap_certificate,
                       indicial_roots)

__version__ = "0.1.0"

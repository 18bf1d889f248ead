"""Exact arithmetic over finite fields: elements, polynomials, matrices."""

from .field import FieldError, FieldSpec, ff_op, make_field, parse_order
from .matrix import (
    MatrixError,
    MatrixOverF,
    SingularMatrixError,
    block_diag,
    charpoly,
    companion,
    det,
    eval_at_matrix,
    from_rows,
    identity,
    kernel,
    left_kernel,
    mat_inv,
    mat_mul,
    mat_op,
    mat_pow,
    rank,
    rref,
    transpose,
    vec_mat,
    zero_matrix,
)
from .poly import (
    PolyError,
    PolyOverF,
    distinct_degree_factorization,
    factor,
    factor_components,
    factor_degrees,
    gcd,
    is_irreducible,
    poly_factor,
    poly_op,
    squarefree_decomposition,
)
from .counting import count_irreducible, mobius
from .textio import (
    MatrixFormatError,
    format_basis,
    format_matrix,
    format_poly,
    parse_basis,
    parse_matrices,
    parse_matrix,
    parse_poly,
)

__all__ = [name for name in dir() if not name.startswith("_")]

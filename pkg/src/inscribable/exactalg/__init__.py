from .fields import FieldError, FieldSpec, QuadraticNumber, Scalar
from .linalg import (
    DimensionMismatch,
    NotSkewSymmetric,
    RowReducer,
    determinant,
    kernel_basis,
    pfaffian,
    pfaffian_expansion,
    rank,
    rref,
)
from .lp import relaxed_cone_mass, strict_interior_point, strict_interior_point_lp

__all__ = [
    "DimensionMismatch",
    "FieldError",
    "FieldSpec",
    "NotSkewSymmetric",
    "QuadraticNumber",
    "RowReducer",
    "Scalar",
    "determinant",
    "kernel_basis",
    "pfaffian",
    "pfaffian_expansion",
    "rank",
    "rref",
    "strict_interior_point",
    "relaxed_cone_mass",
    "strict_interior_point_lp",
]

"""Exact decision procedures for depth-two ring extensions and their duals."""

from .linalg import (
    QQ,
    DimensionMismatchError,
    FieldMismatchError,
    Matrix,
    PrimeField,
    Quotient,
    RationalField,
    Subspace,
    field_from_name,
    kernel,
    membership_certificate,
    rank,
    rref,
    solve_linear,
    solve_membership,
)

__all__ = [
    "QQ",
    "DimensionMismatchError",
    "FieldMismatchError",
    "Matrix",
    "PrimeField",
    "Quotient",
    "RationalField",
    "Subspace",
    "field_from_name",
    "kernel",
    "membership_certificate",
    "rank",
    "rref",
    "solve_linear",
    "solve_membership",
]

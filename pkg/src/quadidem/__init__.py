"""Idempotent factorization of singular 2x2 matrices over quadratic integer rings."""

from .errors import QuadIdemError
from .quadring import Mat2, QuadInt, QuadRational, RingContext, make_context, make_elem
from .pell import fundamental_unit, class_unit, solve_norm_equation
from .ideals import kronecker, prime_status, in_Ip
from .factorization import (
    Certificate,
    MatrixA,
    build_matrix,
    conjecture_equation,
    construct_norm_minus_p2,
    transfer_by_unit,
    transpose_cert,
    verify_lemma31,
)
from .decision import Status, Verdict, decide_conjecture, search_two_idempotent

__version__ = "0.1.0"

__all__ = [
    "QuadIdemError",
    "Mat2",
    "QuadInt",
    "QuadRational",
    "RingContext",
    "make_context",
    "make_elem",
    "fundamental_unit",
    "class_unit",
    "solve_norm_equation",
    "kronecker",
    "prime_status",
    "in_Ip",
    "Certificate",
    "MatrixA",
    "build_matrix",
    "conjecture_equation",
    "construct_norm_minus_p2",
    "transfer_by_unit",
    "transpose_cert",
    "verify_lemma31",
    "Status",
    "Verdict",
    "decide_conjecture",
    "search_two_idempotent",
]

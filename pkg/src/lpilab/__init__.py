"""Exact-arithmetic checks for Laurent polynomial identities on
noncommutative algebras: free group words, group algebra elements,
matrix algebras over ZZ and prime fields, and the junction-free
quotient on two letters."""

__version__ = "0.1.0"

from .checkers import (
    Verdict,
    al_verify,
    bounds_from_d,
    check_group_identity,
    check_lpi,
    finite_annihilator,
    idempotent_centrality,
    infinite_counterexample,
    minimal_polynomial,
    nil_exponent_search,
    quotient_pi_check,
    s3_expand,
    square_zero_nilpotency,
    vandermonde_nil,
)
from .errors import (
    CapExceeded,
    DiagonalCollapse,
    Inadmissible,
    LpiLabError,
    NonUnit,
    ParseError,
    PreconditionError,
    RingMismatch,
    SolveError,
)
from .freegroup import Word
from .group_algebra import (
    LaurentElement,
    OneVarLaurent,
    al_f1,
    al_f2,
    diagonal_specialize,
    gi_to_lpi,
    is_admissible,
    normalize,
    profile,
    standard_polynomial,
)
from .matrix_algebra import Algebra, Matrix, evaluate, mat_inverse, parse_algebra
from .quotient_algebra import QuotientElement, QuotientUnit, q_evaluate, q_unit
from .rings import (
    NEG_INF,
    QQ,
    ZZ,
    PrimeField,
    UniPoly,
    embed_into,
    ring_from_descriptor,
    unipoly_eval,
    vandermonde_solve,
)
from .textio import parse_element, parse_word

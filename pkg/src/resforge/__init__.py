"""Residue-generated hyperbolic series identities with certified numerical verification."""

from .errors import (
    DivergentTerm,
    DomainError,
    NoRationalFound,
    ParseError,
    ResforgeError,
    StructureRecoveryFailure,
    TargetUnreachable,
    UnsupportedCombination,
    UnsupportedTerm,
)
from .identities import differentiate, generate_identity, generate_two_param
from .identities.registry import lookup, registry
from .numerics import PrecisionContext, context
from .summation import SumResult, em_tail, sum_term
from .verify import (
    VerificationReport,
    fit_rational_coefficient,
    run_suite,
    verify_closed_form,
    verify_identity,
)

__version__ = "0.1.0"

__all__ = [
    "DivergentTerm", "DomainError", "NoRationalFound", "ParseError", "PrecisionContext", "ResforgeError",
    "StructureRecoveryFailure", "SumResult", "TargetUnreachable", "UnsupportedCombination", "UnsupportedTerm",
    "VerificationReport", "context", "differentiate", "em_tail", "fit_rational_coefficient", "generate_identity",
    "generate_two_param", "lookup", "registry", "run_suite", "sum_term", "verify_closed_form", "verify_identity",
]

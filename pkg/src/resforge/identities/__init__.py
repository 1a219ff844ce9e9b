"""Identity data model, residue-driven generator, differentiation and the registry."""

from .differentiate import differentiate, differentiate_term
from .generator import generate_identity, generate_two_param
from .latex import closed_form_latex, identity_latex, term_latex
from .model import (
    ClosedForm,
    ClosedFormEntry,
    ClosedFormFamily,
    Identity,
    Index,
    Monomial,
    SeriesTerm,
    Sign,
    ThetaFactor,
    ThetaPoly,
    merge_terms,
)

__all__ = [
    "ClosedForm", "ClosedFormEntry", "ClosedFormFamily", "Identity", "Index", "Monomial", "Registry",
    "SeriesTerm", "Sign", "ThetaFactor", "ThetaPoly", "closed_form_latex", "differentiate",
    "differentiate_term", "generate_identity", "generate_two_param", "identity_latex", "lookup",
    "merge_terms", "term_latex",
]


def __getattr__(name):
    # the registry parses DSL text, and the DSL imports the model above
    if name in ("Registry", "lookup"):
        from . import registry

        return getattr(registry, name)
    raise AttributeError(name)

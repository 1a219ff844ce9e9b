"""Exact term-by-term differentiation of identities in one parameter."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from ..errors import DomainError, UnsupportedTerm
from .model import Identity, Monomial, SeriesTerm, merge_terms

# d/dx kind(x) = sign * kind'(x)
_DERIVATIVE = {"sin": ("cos", 1), "cos": ("sin", -1), "sinh": ("cosh", 1), "cosh": ("sinh", 1)}


def differentiate_term(term: SeriesTerm, param: str) -> list[SeriesTerm]:
    """d/d(param) of one term, as a list of terms (product rule)."""
    out = []
    w = term.weight
    e = w.theta_exp(param)
    if e:
        lowered = tuple((p, x - (p == param)) for p, x in w.thetas)
        out.append(term.with_weight(Monomial(w.coeff * e, w.pi_power, lowered)))
    hits = [f for f in term.theta_factors if f.param == param]
    if len(hits) > 1:
        raise UnsupportedTerm(f"term has {len(hits)} factors in {param}")
    for f in hits:
        kind, sign = _DERIVATIVE[f.kind]
        factors = tuple(replace(g, kind=kind) if g is f else g for g in term.theta_factors)
        # the chain rule brings down scale * idx
        out.append(replace(term, power=term.power + 1, theta_factors=factors,
                           weight=w.scaled(Fraction(sign) * f.scale)))
    return out


def differentiate(identity: Identity, times: int = 1, param: str | None = None) -> Identity:
    """The identity obtained by differentiating both sides `times` times."""
    if not isinstance(times, int) or times < 1:
        raise DomainError("times must be a positive integer")
    if param is None:
        if len(identity.params) != 1:
            raise UnsupportedTerm(f"{identity.id} has parameters {identity.params}; name the one to differentiate")
        param = identity.params[0]
    elif param not in identity.params:
        raise DomainError(f"{identity.id} has no parameter {param!r}")
    terms, poly = identity.terms, identity.poly
    for _ in range(times):
        terms = merge_terms([d for t in terms for d in differentiate_term(t, param)])
        poly = poly.derivative(param)
    suffix = "'" * times if times <= 3 else f"^({times})"
    return replace(identity, id=f"{identity.id}{suffix}", terms=terms, poly=poly, rhs=None)

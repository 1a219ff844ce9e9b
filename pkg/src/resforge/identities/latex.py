"""LaTeX rendering of identities as display equations."""

from __future__ import annotations

from fractions import Fraction

from .model import ClosedForm, Identity, Index, Monomial, SeriesTerm, Sign, ThetaPoly

_GREEK = {"theta": r"\theta", "theta1": r"\theta_1", "theta2": r"\theta_2"}


def _idx(index: Index) -> str:
    return "n" if index is Index.N else "(2n-1)"


def _arg(scale: Fraction, index: Index, var: str) -> str:
    if index is Index.ODD:
        body = f"(2n-1){var}"
    else:
        body = r"\pi n" if var == r"\pi" else f"n{var}"
    if scale == 1:
        return body
    if scale.numerator == 1:
        return rf"\frac{{{body}}}{{{scale.denominator}}}"
    return rf"\frac{{{scale.numerator}{body}}}{{{scale.denominator}}}"


def _fn(name: str, arg: str, power: int = 1) -> str:
    p = f"^{{{power}}}" if power != 1 else ""
    return rf"\{name}{p}\left({arg}\right)"


_HYP = {
    # shape -> (numerator function, denominator function, denominator power)
    "csch": (None, "sinh", 1),
    "sech": (None, "cosh", 1),
    "cosh_csch2": ("cosh", "sinh", 2),
    "sinh_sech2": ("sinh", "cosh", 2),
    "csch2": (None, "sinh", 2),
    "sech2": (None, "cosh", 2),
    "coth": ("coth", None, 0),
    "tanh": ("tanh", None, 0),
}


def _scalar(coeff: Fraction, pi_power: int, thetas: tuple) -> tuple[str, str, int]:
    """(numerator, denominator, sign) of coeff * pi^j * theta^m."""
    num, den = [], []
    a, b = abs(coeff.numerator), coeff.denominator
    if a != 1:
        num.append(str(a))
    if b != 1:
        den.append(str(b))
    if pi_power > 0:
        num.append(r"\pi" + (f"^{{{pi_power}}}" if pi_power > 1 else ""))
    elif pi_power < 0:
        den.append(r"\pi" + (f"^{{{-pi_power}}}" if pi_power < -1 else ""))
    for p, e in thetas:
        num.append(_GREEK.get(p, p) + (f"^{{{e}}}" if e > 1 else ""))
    return " ".join(num), " ".join(den), (-1 if coeff < 0 else 1)


def term_latex(term: SeriesTerm) -> tuple[str, int]:
    """LaTeX of one sum without its leading sign, and that sign."""
    w = term.weight
    num, den, sign = _scalar(w.coeff, w.pi_power, w.thetas)
    num = [num] if num else []
    den = [den] if den else []
    if term.sign is Sign.ALT:
        num.append("(-1)^{n}")
    elif term.sign is Sign.ALT1:
        num.append("(-1)^{n-1}")
    i = _idx(term.index)
    if term.power > 0:
        num.append(i + (f"^{{{term.power}}}" if term.power > 1 else ""))
    elif term.power < 0:
        den.append(i + (f"^{{{-term.power}}}" if term.power < -1 else ""))
    for f in term.theta_factors:
        num.append(_fn(f.kind, _arg(f.scale, term.index, _GREEK.get(f.param, f.param))))
    if term.hyp:
        top, bottom, power = _HYP[term.hyp]
        harg = _arg(term.hyp_scale, term.index, r"\pi")
        if top:
            num.append(_fn(top, harg))
        if bottom:
            den.append(_fn(bottom, harg, power))
    top = " ".join(num) or "1"
    body = rf"\frac{{{top}}}{{{' '.join(den)}}}" if den else top
    return r"\sum_{n=1}^{\infty} " + body, sign


def monomial_latex(m: Monomial) -> tuple[str, int]:
    num, den, sign = _scalar(m.coeff, m.pi_power, m.thetas)
    num = num or "1"
    return (rf"\frac{{{num}}}{{{den}}}" if den else num), sign


def _join(parts: list[tuple[str, int]]) -> str:
    out = ""
    for k, (text, sign) in enumerate(parts):
        if k == 0:
            out = ("-" if sign < 0 else "") + text
        else:
            out += (" - " if sign < 0 else " + ") + text
    return out or "0"


def poly_latex(poly: ThetaPoly) -> str:
    return _join([monomial_latex(m) for m in poly.terms])


def identity_latex(identity: Identity, display: bool = True) -> str:
    """sum of terms + polynomial = 0, or = printed right-hand side."""
    parts = [term_latex(t) for t in identity.terms]
    if identity.rhs is not None:
        lhs_poly = identity.poly + identity.rhs
        rhs = poly_latex(identity.rhs)
    else:
        lhs_poly, rhs = identity.poly, "0"
    parts += [monomial_latex(m) for m in lhs_poly.terms]
    body = f"{_join(parts)} = {rhs}"
    return f"\\[\n{body}\n\\]" if display else body


def closed_form_latex(cf: ClosedForm) -> str:
    num, den = [], []
    c = cf.coefficient
    if abs(c.numerator) != 1:
        num.append(str(abs(c.numerator)))
    if c.denominator != 1:
        den.append(str(c.denominator))
    if cf.sqrt2:
        (num if cf.sqrt2 > 0 else den).append(r"\sqrt{2}" + (f"^{{{abs(cf.sqrt2)}}}" if abs(cf.sqrt2) > 1 else ""))
    if cf.gamma14:
        (num if cf.gamma14 > 0 else den).append(rf"\Gamma^{{{abs(cf.gamma14)}}}\left(\tfrac14\right)")
    if cf.gamma34:
        (num if cf.gamma34 > 0 else den).append(rf"\Gamma^{{{abs(cf.gamma34)}}}\left(\tfrac34\right)")
    if cf.pi_power:
        p = abs(cf.pi_power)
        ptxt = r"\pi" if p == 1 else rf"\pi^{{{p.numerator}/{p.denominator}}}" if p.denominator != 1 else rf"\pi^{{{p}}}"
        (num if cf.pi_power > 0 else den).append(ptxt)
    top = " ".join(num) or "1"
    text = rf"\frac{{{top}}}{{{' '.join(den)}}}" if den else top
    if c < 0:
        text = "-" + text
    if cf.additive:
        a = cf.additive
        atxt = str(a) if a.denominator == 1 else rf"\frac{{{abs(a.numerator)}}}{{{a.denominator}}}"
        if a < 0 and a.denominator != 1:
            atxt = "-" + atxt
        text = f"{atxt} {'-' if c < 0 else '+'} {text.lstrip('-')}"
    return text

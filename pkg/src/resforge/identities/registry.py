"""Transcribed identities and closed forms.

Every entry is stored exactly as printed, misprints included; judging them is
the verifier's job.  Series are written in the DSL (see :mod:`resforge.dsl`):
each monomial that mentions ``n`` is one infinite sum over n >= 1.

Parametric entries carry ``(k=K)`` in their id and are built on demand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache

from ..dsl import parse_poly, parse_sum, parse_term
from ..errors import DomainError
from .model import ClosedForm, ClosedFormEntry, ClosedFormFamily, Identity

K_LIMIT = 6

H = "(2n-1) pi/2"   # hyperbolic argument on the odd index
HT = "(2n-1) theta/2"


def _identity(id_: str, lhs: str, group: str, rhs: str | None = None,
              params: tuple = ("theta",)) -> Identity:
    terms, poly = parse_sum(lhs)
    rhs_poly = None
    if rhs is not None:
        rhs_poly = parse_poly(rhs)
        poly = poly - rhs_poly
    return Identity(id_, terms, poly, params, group, rhs_poly)


def _signed(c: int) -> str:
    return f" + {c}" if c >= 0 else f" - {-c}"


# --- theorems -----------------------------------------------------------------

THEOREMS = {
    "eq2.1": "pi^2 cosh(n theta)/sinh(pi n)^2 (-1)^n + theta pi sin(n theta)/sinh(pi n)"
             " + pi^2 cos(n theta) cosh(pi n)/sinh(pi n)^2 + theta^2/4 - zeta(2)/2",
    "eq2.2": f"pi^2 sinh({HT})/cosh({H})^2 (-1)^n - theta pi cos({HT})/cosh({H})"
             f" + pi^2 sin({HT}) sinh({H})/cosh({H})^2",
    "eq2.3": f"pi^2 cosh(n theta)/cosh(pi n)^2 (-1)^n - theta pi sin({HT})/sinh({H})"
             f" - pi^2 cos({HT}) cosh({H})/sinh({H})^2 + pi^2",
    "eq2.4": f"pi^2 sinh({HT})/sinh({H})^2 (-1)^n + theta pi cos(n theta)/cosh(pi n)"
             f" - pi^2 sin(n theta) sinh(pi n)/cosh(pi n)^2 + pi theta",
    "eq2.5": "pi^2 cosh(n theta)/(n^2 sinh(pi n)^2) - pi^2 cos(n theta)/(n^2 sinh(pi n)^2)"
             " - theta pi coth(pi n) sin(n theta)/n^2 - 2 pi coth(pi n) cos(n theta)/n^3"
             " + theta^4/48 - theta^2 zeta(2) + 7 zeta(4)",
    "eq2.6": f"pi^2 cosh({HT})/((2n-1)^2 cosh({H})^2) - pi^2 cos({HT})/((2n-1)^2 cosh({H})^2)"
             f" + theta pi tanh({H}) sin({HT})/(2n-1)^2 + 4 pi tanh({H}) cos({HT})/(2n-1)^3 - pi^4/8",
    "eq2.7": f"pi^2 cosh(n theta)/(n^2 cosh(pi n)^2) + 4 pi^2 cos({HT})/((2n-1)^2 sinh({H})^2)"
             f" + 4 theta pi coth({H}) sin({HT})/(2n-1)^2 + 16 pi coth({H}) cos({HT})/(2n-1)^3"
             f" + (theta^2/4 - 4 zeta(2)) pi^2",
    "eq2.8": f"pi^2 cos(n theta)/(n^2 cosh(pi n)^2) + 4 pi^2 cosh({HT})/((2n-1)^2 sinh({H})^2)"
             f" - theta pi tanh(pi n) sin(n theta)/n^2 - 2 pi tanh(pi n) cos(n theta)/n^3 - pi^2 theta^2/4",
}

# Which combined function each theorem comes from.
THEOREM_SOURCE = {"f1": "eq2.1", "f2": "eq2.2", "f3": "eq2.3", "f4": "eq2.4",
                  "g1": "eq2.5", "g2": "eq2.6", "g3": "eq2.7", "g4": "eq2.8"}


# --- corollaries ----------------------------------------------------------------


def _corollary_text(name: str, k: int) -> str:
    s = (-1) ** k
    s1 = -s
    if name == "eq2.10":
        return (f"pi^2 n^{2*k} cosh(n theta)/sinh(pi n)^2 (-1)^n"
                f"{_signed(s)} theta pi n^{2*k} sin(n theta)/sinh(pi n)"
                f"{_signed(2*k*s1)} pi n^{2*k-1} cos(n theta)/sinh(pi n)"
                f"{_signed(s)} pi^2 n^{2*k} cos(n theta) cosh(pi n)/sinh(pi n)^2"
                + (" + 1/2" if k == 1 else ""))
    if name == "eq2.11":
        return (f"pi^2 n^{2*k-1} sinh(n theta)/sinh(pi n)^2 (-1)^n"
                f"{_signed(s1)} theta pi n^{2*k-1} cos(n theta)/sinh(pi n)"
                f"{_signed((2*k-1)*s1)} pi n^{2*k-2} sin(n theta)/sinh(pi n)"
                f"{_signed(s)} pi^2 n^{2*k-1} sin(n theta) cosh(pi n)/sinh(pi n)^2"
                + (" + theta/2" if k == 1 else ""))
    if name == "eq2.12":
        return (f"pi (2n-1)^{2*k} sinh({HT})/cosh({H})^2 (-1)^n"
                f"{_signed(-s)} theta (2n-1)^{2*k} cos({HT})/cosh({H})"
                f"{_signed(-4*k*s)} (2n-1)^{2*k-1} sin({HT})/cosh({H})"
                f"{_signed(s)} pi (2n-1)^{2*k} sin({HT}) sinh({H})/cosh({H})^2")
    if name == "eq2.13":
        return (f"{2**(2*k)} pi n^{2*k} cosh(n theta)/cosh(pi n)^2 (-1)^n"
                f"{_signed(-s)} theta (2n-1)^{2*k} sin({HT})/sinh({H})"
                f"{_signed(4*k*s)} (2n-1)^{2*k-1} cos({HT})/sinh({H})"
                f"{_signed(-s)} pi (2n-1)^{2*k} cos({HT}) cosh({H})/sinh({H})^2")
    if name == "eq2.14":
        c = 2 ** (2 * k - 1)
        return (f"pi (2n-1)^{2*k-1} cosh({HT})/sinh({H})^2 (-1)^n"
                f"{_signed(c*s)} theta n^{2*k-1} sin(n theta)/cosh(pi n)"
                f"{_signed(c*(2*k-1)*s1)} n^{2*k-2} cos(n theta)/cosh(pi n)"
                f"{_signed(-c*s1)} pi n^{2*k-1} cos(n theta) sinh(pi n)/cosh(pi n)^2"
                + (" + 1" if k == 1 else ""))
    raise DomainError(f"unknown corollary family {name!r}")


COROLLARIES = ("eq2.10", "eq2.11", "eq2.12", "eq2.13", "eq2.14")
# (source theorem, number of derivatives as a function of k)
COROLLARY_SOURCE = {
    "eq2.10": ("eq2.1", lambda k: 2 * k),
    "eq2.11": ("eq2.1", lambda k: 2 * k - 1),
    "eq2.12": ("eq2.2", lambda k: 2 * k),
    "eq2.13": ("eq2.3", lambda k: 2 * k),
    "eq2.14": ("eq2.4", lambda k: 2 * k - 1),
}


def _check_k(k: int) -> None:
    if not isinstance(k, int) or not 1 <= k <= K_LIMIT:
        raise DomainError(f"k must be an integer in 1..{K_LIMIT}, got {k!r}")


@lru_cache(maxsize=None)
def corollary(name: str, k: int) -> Identity:
    _check_k(k)
    return _identity(f"{name}(k={k})", _corollary_text(name, k), "corollaries")


# --- sec2.5 worked examples ---------------------------------------------------------

EXAMPLES25 = {
    1: ("pi n (-1)^n/sinh(pi n)", "1/4"),
    3: ("pi^2 cosh(pi n)/sinh(pi n)^2 (-1)^n", "-zeta(2)/2"),
    5: ("pi^2 (-1)^n/sinh(pi n)^2 + pi^2 cosh(pi n)/sinh(pi n)^2 - zeta(2)/2", "0"),
    6: (f"(-1)^n/cosh(pi n) + (-1)^n/sinh({H}) + 1/2", "0"),
    7: (f"(-1)^n/cosh(pi n)^2 - cosh({H})/sinh({H})^2 + 1/2", "0"),
    8: ("pi^2 n^2 (-1)^n/sinh(pi n)^2 + 2 pi n/sinh(pi n) - pi^2 n^2 cosh(pi n)/sinh(pi n)^2 + 1/2", "0"),
    11: (f"4 pi n^2 (-1)^n/cosh(pi n)^2 - 4 (2n-1)/sinh({H}) + pi (2n-1)^2 cosh({H})/sinh({H})^2", "0"),
    13: ("pi cosh(pi n)/(n^2 sinh(pi n)^2) - pi (-1)^n/(n^2 sinh(pi n)^2)"
         " - 2 coth(pi n) (-1)^n/n^3 - 49/720 pi^3", "0"),
    14: (f"pi/((2n-1)^2 cosh({H})) + pi tanh({H}) (-1)^(n-1)/(2n-1)^2", "pi^3/8"),
    15: (f"pi/(n^2 cosh(pi n)) + 4 pi coth({H}) (-1)^(n-1)/(2n-1)^2", "5/12 pi^3"),
    16: (f"pi/(n^2 cosh(pi n)^2) + 4 pi/((2n-1)^2 sinh({H})^2) - 2 tanh(pi n)/n^3", "0"),
    17: (f"pi/(n^2 cosh(pi n)^2) + 4 pi/((2n-1)^2 sinh({H})^2) + 16 coth({H})/(2n-1)^3", "2/3 pi^3"),
    18: (f"pi (-1)^n/(n^2 cosh(pi n)^2) + 4 pi cosh({H})/((2n-1)^2 sinh({H})^2)"
         " - 2 tanh(pi n) (-1)^n/n^3", "pi^3/4"),
}


def _example25_parametric(num: int, k: int) -> tuple[str, str]:
    if num == 2:
        return f"pi n^{4*k+1} (-1)^n/sinh(pi n)", "0"
    if num == 4:
        return f"(2n-1)^{4*k-1}/cosh({H}) (-1)^n", "0"
    if num == 9:
        return f"pi^2 n^{4*k} cosh(pi n)/sinh(pi n)^2 (-1)^n - {2*k} pi n^{4*k-1} (-1)^n/sinh(pi n)", "0"
    if num == 10:
        return (f"{2**(2*k)} n^{2*k} (-1)^n/cosh(pi n)"
                f"{_signed((-1)**k)} (2n-1)^{2*k}/sinh({H}) (-1)^n"), "0"
    if num == 12:
        return (f"pi (2n-1)^{4*k-2} sinh({H})/cosh({H})^2 (-1)^n"
                f" - {2*(2*k-1)} (2n-1)^{4*k-3}/cosh({H}) (-1)^n"), "0"
    raise DomainError(f"sec2.5 example {num} is not parametric")


PARAMETRIC25 = (2, 4, 9, 10, 12)


@lru_cache(maxsize=None)
def example25(num: int, k: int | None = None) -> Identity:
    if num in PARAMETRIC25:
        if k is None:
            raise DomainError(f"sec2.5 example {num} needs k")
        _check_k(k)
        lhs, rhs = _example25_parametric(num, k)
        id_ = f"sec2.5-ex{num}(k={k})"
    elif num in EXAMPLES25:
        lhs, rhs = EXAMPLES25[num]
        id_ = f"sec2.5-ex{num}"
    else:
        raise DomainError(f"no sec2.5 example {num}")
    return _identity(id_, lhs, "examples25", rhs, params=())


# --- closed forms ------------------------------------------------------------------


def _cf(coeff, pi, g14=0, g34=0, sqrt2=0, additive=0) -> ClosedForm:
    return ClosedForm(Q(coeff), Q(pi), g14, g34, sqrt2, Q(additive))


CLOSED31 = {
    "sec3.1-pi-n1-sinh": ("pi n/sinh(pi n)", _cf(Q(1, 32), -2, 4, additive=Q(-1, 4))),
    "sec3.1-n3-sinh-alt": ("n^3 (-1)^(n-1)/sinh(pi n)", _cf(Q(1, 512), -6, 8)),
    "sec3.1-n7-sinh-alt": ("n^7 (-1)^(n-1)/sinh(pi n)", _cf(Q(-9, 65536), -12, 16)),
    "sec3.1-n11-sinh-alt": ("n^11 (-1)^(n-1)/sinh(pi n)", _cf(Q(189, 2097152), -18, 24)),
    "sec3.1-n0-cosh-alt": ("(-1)^(n-1)/cosh(pi n)", _cf(Q(-1, 8), Q(-3, 2), 2, sqrt2=1, additive=Q(1, 2))),
    "sec3.1-n2-cosh-alt": ("n^2 (-1)^(n-1)/cosh(pi n)", _cf(Q(1, 256), Q(-9, 2), 6, sqrt2=1)),
    "sec3.1-n4-cosh-alt": ("n^4 (-1)^(n-1)/cosh(pi n)", _cf(Q(3, 8192), Q(-15, 2), 10, sqrt2=1)),
    "sec3.1-n6-cosh-alt": ("n^6 (-1)^(n-1)/cosh(pi n)", _cf(Q(-27, 262144), Q(-21, 2), 14, sqrt2=1)),
    "sec3.1-n8-cosh-alt": ("n^8 (-1)^(n-1)/cosh(pi n)", _cf(Q(-441, 8388608), Q(-27, 2), 18)),
    "sec3.1-n0-cosh": ("1/cosh(pi n)", _cf(Q(1, 4), Q(-3, 2), 2, additive=Q(-1, 2))),
    "sec3.1-n2-cosh": ("n^2/cosh(pi n)", _cf(Q(1, 128), Q(-9, 2), 6)),
    "sec3.1-n4-cosh": ("n^4/cosh(pi n)", _cf(Q(9, 4096), Q(-15, 2), 10)),
    "sec3.1-n6-cosh": ("n^6/cosh(pi n)", _cf(Q(-153, 131072), Q(-21, 2), 14)),
    "sec3.1-n8-cosh": ("n^8/cosh(pi n)", _cf(Q(4977, 4194304), Q(-27, 2), 18)),
    "sec3.1-n3-sinh": ("n^3/sinh(pi n)", _cf(Q(1, 256), -6, 8)),
    "sec3.1-n5-sinh": ("n^5/sinh(pi n)", _cf(Q(3, 2048), -9, 12)),
    "sec3.1-n7-sinh": ("n^7/sinh(pi n)", _cf(Q(9, 8192), -12, 16)),
    "sec3.1-n9-sinh": ("n^9/sinh(pi n)", _cf(Q(189, 131072), -15, 20)),
    "sec3.1-odd1-coshh-alt": (f"(2n-1) (-1)^(n-1)/cosh({H})", _cf(Q(1, 8), -1, 2, -2)),
    "sec3.1-odd5-coshh-alt": (f"(2n-1)^5 (-1)^(n-1)/cosh({H})", _cf(Q(-3, 32), -3, 6, -6)),
    "sec3.1-odd9-coshh-alt": (f"(2n-1)^9 (-1)^(n-1)/cosh({H})", _cf(Q(189, 128), -5, 10, -10)),
}

CLOSED32 = {
    "sec3.2-n4-coshsinh2-alt": ("n^4 cosh(pi n)/sinh(pi n)^2 (-1)^(n-1)", _cf(Q(1, 256), -7, 8)),
    "sec3.2-n8-coshsinh2-alt": ("n^8 cosh(pi n)/sinh(pi n)^2 (-1)^(n-1)", _cf(Q(-9, 16384), -13, 16)),
    "sec3.2-n12-coshsinh2-alt": ("n^12 cosh(pi n)/sinh(pi n)^2 (-1)^(n-1)", _cf(Q(567, 1048576), -19, 24)),
    "sec3.2-odd0-sinhh-alt": (f"(-1)^(n-1)/sinh({H})", _cf(Q(1, 8), Q(-3, 2), 2, sqrt2=1)),
    "sec3.2-odd2-sinhh-alt": (f"(2n-1)^2 (-1)^(n-1)/sinh({H})", _cf(Q(1, 64), Q(-9, 2), 6, sqrt2=1)),
    "sec3.2-odd4-sinhh-alt": (f"(2n-1)^4 (-1)^(n-1)/sinh({H})", _cf(Q(-3, 512), Q(-15, 2), 10, sqrt2=1)),
    "sec3.2-odd6-sinhh-alt": (f"(2n-1)^6 (-1)^(n-1)/sinh({H})", _cf(Q(-27, 4096), Q(-21, 2), 10, sqrt2=1)),
    "sec3.2-odd2-sinhcosh2-alt": (f"(2n-1)^2 sinh({H})/cosh({H})^2 (-1)^(n-1)", _cf(Q(1, 4), -2, 2, -2)),
    "sec3.2-odd6-sinhcosh2-alt": (f"(2n-1)^6 sinh({H})/cosh({H})^2 (-1)^(n-1)", _cf(Q(-9, 16), -4, 6, -6)),
    "sec3.2-odd10-sinhcosh2-alt": (f"(2n-1)^10 sinh({H})/cosh({H})^2 (-1)^(n-1)", _cf(Q(945, 64), -6, 10, -10)),
}


def _family(id_, term_text, monomial, group) -> ClosedFormFamily:
    return ClosedFormFamily(id_, lambda k: parse_term(term_text(k)), monomial, group)


FAMILIES = (
    _family("fam3.1-c1", lambda k: f"n^{4*k-1} (-1)^(n-1)/sinh(pi n)",
            lambda k: _cf(1, -6 * k, 8 * k), "closed31"),
    _family("fam3.1-c2", lambda k: f"n^{2*k} (-1)^(n-1)/cosh(pi n)",
            lambda k: _cf(1, -(3 * k + Q(3, 2)), 4 * k + 2, sqrt2=1), "closed31"),
    _family("fam3.1-c3", lambda k: f"n^{2*k+1}/sinh(pi n)",
            lambda k: _cf(1, -(3 * k + 3), 4 * k + 4), "closed31"),
    _family("fam3.1-c4", lambda k: f"n^{2*k}/cosh(pi n)",
            lambda k: _cf(1, -(3 * k + Q(3, 2)), 4 * k + 2), "closed31"),
    _family("fam3.1-c5", lambda k: f"(2n-1)^{4*k-3} (-1)^(n-1)/cosh({H})",
            lambda k: _cf(1, -(2 * k - 1), 4 * k - 2, -(4 * k - 2)), "closed31"),
    _family("fam3.2-a1", lambda k: f"n^{4*k} cosh(pi n)/sinh(pi n)^2 (-1)^(n-1)",
            lambda k: _cf(1, -(6 * k + 1), 8 * k), "closed32"),
    _family("fam3.2-a2", lambda k: f"(2n-1)^{4*k-2} sinh({H})/cosh({H})^2 (-1)^(n-1)",
            lambda k: _cf(1, -2 * k, 4 * k - 2, -(4 * k - 2)), "closed32"),
    _family("fam3.2-a3", lambda k: f"(2n-1)^{2*k-2} (-1)^(n-1)/sinh({H})",
            lambda k: _cf(1, -(3 * k - Q(3, 2)), 4 * k - 2, sqrt2=1), "closed32"),
)

TWO_PARAMETER = (
    "pi^2 cos(n theta1) cos(n theta2)/sinh(pi n)^2 (-1)^n"
    " - pi theta1 sinh(n theta1) cos(n theta2)/sinh(pi n)"
    " + pi theta2 cosh(n theta1) sin(n theta2)/sinh(pi n)"
    " + pi^2 cosh(n theta1) cos(n theta2) cosh(pi n)/sinh(pi n)^2"
    " + (theta1^2 - theta2^2)/4 - zeta(2)/2"
)


@lru_cache(maxsize=None)
def theorem(id_: str) -> Identity:
    if id_ not in THEOREMS:
        raise DomainError(f"unknown theorem identity {id_!r}")
    return _identity(id_, THEOREMS[id_], "theorems")


@lru_cache(maxsize=None)
def two_parameter() -> Identity:
    return _identity("sec3.2-F", TWO_PARAMETER, "two_parameter", params=("theta1", "theta2"))


@lru_cache(maxsize=None)
def closed_form(id_: str) -> ClosedFormEntry:
    table = CLOSED31 if id_.startswith("sec3.1") else CLOSED32
    if id_ not in table:
        raise DomainError(f"unknown closed form {id_!r}")
    text, form = table[id_]
    group = "closed31" if table is CLOSED31 else "closed32"
    return ClosedFormEntry(id_, parse_term(text), form, group)


def family(id_: str) -> ClosedFormFamily:
    for f in FAMILIES:
        if f.id == id_:
            return f
    raise DomainError(f"unknown closed-form family {id_!r}")


# --- lookup ------------------------------------------------------------------------

_K_SUFFIX = re.compile(r"^(?P<base>.+)\(k=(?P<k>\d+)\)$")


def lookup(id_: str):
    """Registry entry by id; parametric ids take a ``(k=K)`` suffix."""
    m = _K_SUFFIX.match(id_)
    base, k = (m.group("base"), int(m.group("k"))) if m else (id_, None)
    if base in THEOREMS and k is None:
        return theorem(base)
    if base in COROLLARIES and k is not None:
        return corollary(base, k)
    if base.startswith("sec2.5-ex"):
        try:
            num = int(base[len("sec2.5-ex"):])
        except ValueError:
            raise DomainError(f"unknown identity id {id_!r}") from None
        if (num in PARAMETRIC25) == (k is not None):
            return example25(num, k)
    if base in CLOSED31 or base in CLOSED32:
        if k is None:
            return closed_form(base)
    if base == "sec3.2-F" and k is None:
        return two_parameter()
    if k is None and base.startswith("fam3."):
        return family(base)
    raise DomainError(f"unknown identity id {id_!r}")


def theorem_ids() -> list[str]:
    return list(THEOREMS)


def corollary_ids(kmax: int = 3) -> list[str]:
    return [f"{name}(k={k})" for name in COROLLARIES for k in range(1, kmax + 1)]


def example25_ids(kmax: int = 3) -> list[str]:
    out = []
    for num in range(1, 19):
        if num in PARAMETRIC25:
            out.extend(f"sec2.5-ex{num}(k={k})" for k in range(1, kmax + 1))
        else:
            out.append(f"sec2.5-ex{num}")
    return out


def closed31_ids() -> list[str]:
    return list(CLOSED31)


def closed32_ids() -> list[str]:
    return list(CLOSED32)


@dataclass(frozen=True)
class Registry:
    identities: tuple
    closed_forms: tuple
    families: tuple


def registry(kmax: int = 3) -> Registry:
    """Every entry, with parametric families instantiated for k = 1..kmax."""
    ids = theorem_ids() + corollary_ids(kmax) + example25_ids(kmax)
    identities = tuple(lookup(i) for i in ids) + (two_parameter(),)
    closed = tuple(closed_form(i) for i in closed31_ids() + closed32_ids())
    return Registry(identities, closed, FAMILIES)



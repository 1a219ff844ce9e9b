"""Verification harness: residuals over a parameter grid, closed-form checks,
rational coefficient recovery and classification of failures."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, replace
from fractions import Fraction

from .dsl import poly_to_text
from .errors import DomainError, NoRationalFound
from .identities import registry as reg
from .identities.model import ClosedForm, ClosedFormEntry, Identity, Monomial, SeriesTerm, ThetaPoly
from .numerics import PrecisionContext, context, const_pi, least_squares, rationalize
from .summation import N_MAX, sum_term

TOL_E = Fraction(1, 10**25)
TOL_P = Fraction(1, 10**12)
TOL_COROLLARY = Fraction(1, 10**20)
TOL_CLOSED = Fraction(1, 10**25)

DEFAULT_GRID = tuple(Fraction(x) for x in ("0", "1/2", "-1/2", "1", "-1", "2", "-2", "14/5", "-14/5"))
TWO_PARAM_GRID = tuple((Fraction(a), Fraction(b)) for a, b in
                       (("1", "1/2"), ("0", "0"), ("-1", "2"), ("2", "-1/2"), ("1/2", "-1"), ("-14/5", "1")))

STATUSES = ("pass", "sign_flip", "coefficient_mismatch", "fail")
SUITES = ("theorems", "corollaries", "examples25", "closed31", "closed32", "all")


@dataclass
class VerificationReport:
    identity_id: str
    theta_samples: list
    residuals: list
    status: str
    suggested_correction: dict | None = None
    precision_bits: int = 192
    total_terms: int = 0
    elapsed: float = 0.0
    tolerance: object = None
    value: object = None  # closed forms: the certified sum

    @property
    def max_residual(self):
        return max((abs(r) for r in self.residuals), default=0)


def default_tolerance(identity: Identity) -> Fraction:
    if identity.convergence == "P":
        return TOL_P
    if identity.group == "corollaries":
        return TOL_COROLLARY
    return TOL_E


def default_grid(identity: Identity) -> tuple:
    if not identity.params:
        return (None,)
    if len(identity.params) == 2:
        return TWO_PARAM_GRID
    return DEFAULT_GRID


def _term_target(ctx: PrecisionContext, count: int):
    return ctx.eps / max(1, count)


def series_value(terms, thetas: dict, ctx: PrecisionContext, n_max: int = N_MAX, method=None):
    """Sum of every term at one parameter point; returns (value, terms used)."""
    total = ctx.mpf(0)
    used = 0
    target = _term_target(ctx, len(terms))
    for t in terms:
        r = sum_term(t, thetas, target, ctx, n_max=n_max, method=method)
        total += r.value
        used += r.terms_used
    return total, used


def _point(identity: Identity, theta, ctx: PrecisionContext) -> dict:
    if theta is None:
        return {}
    values = identity.parameter_values(theta)
    pi = const_pi(ctx)
    out = {}
    for p, v in values.items():
        v = ctx.mpf(v)
        if not abs(v) < pi:
            raise DomainError(f"grid point {p} = {v} lies outside (-pi, pi)")
        out[p] = v
    return out


def _refit_poly(identity: Identity, series: list, points: list, ctx: PrecisionContext) -> ThetaPoly | None:
    """Exact polynomial on the printed monomial support that cancels the series."""
    mp = ctx.mp
    support = identity.poly.terms or (Monomial(1),)
    rows = [[Monomial(1, m.pi_power, m.thetas).value(pt, ctx) for m in support] for pt in points]
    rhs = [-s for s in series]
    if len(rows) < len(support):
        return None
    try:
        x, _ = least_squares(rows, rhs, ctx)
    except ZeroDivisionError:
        return None
    tol = mp.ldexp(1, -ctx.bits // 2)
    monos = []
    for m, c in zip(support, x):
        q = rationalize(c, tol)
        if q is None:
            return None
        monos.append(Monomial(q, m.pi_power, m.thetas))
    return ThetaPoly(tuple(monos))


def _poly_suggestion(identity: Identity, poly: ThetaPoly, kind: str, description: str) -> dict:
    if identity.rhs is not None:
        # report the corrected right-hand side: rhs' = printed rhs + (printed poly - new poly)
        value = poly_to_text(identity.rhs + identity.poly - poly)
    else:
        value = poly_to_text(poly)
    return {"kind": kind, "value": value, "description": description}


def verify_identity(identity: Identity, grid=None, tolerance=None, ctx: PrecisionContext | None = None,
                    n_max: int = N_MAX, method: str | None = None) -> VerificationReport:
    """Residual of sum(terms) + poly over the grid, classified."""
    ctx = ctx or context()
    start = time.perf_counter()
    grid = default_grid(identity) if grid is None else tuple(grid)
    tol = ctx.mpf(default_tolerance(identity) if tolerance is None else tolerance)
    points = [_point(identity, th, ctx) for th in grid]
    series, polys, used = [], [], 0
    for pt in points:
        s, u = series_value(identity.terms, pt, ctx, n_max, method)
        series.append(s)
        polys.append(identity.poly.value(pt, ctx))
        used += u
    residuals = [s + p for s, p in zip(series, polys)]
    status, suggestion = "pass", None
    if not all(abs(r) <= tol for r in residuals):
        flipped = [s - p for s, p in zip(series, polys)]
        if identity.poly and all(abs(r) <= tol for r in flipped):
            status = "sign_flip"
            suggestion = _poly_suggestion(identity, -identity.poly, "sign",
                                          "constant holds with the opposite sign")
        else:
            refit = _refit_poly(identity, series, points, ctx)
            if refit is not None and all(abs(s + refit.value(pt, ctx)) <= tol for s, pt in zip(series, points)):
                status = "coefficient_mismatch"
                suggestion = _poly_suggestion(identity, refit, "polynomial",
                                              "polynomial coefficients refitted on the printed monomials")
            else:
                status = "fail"
    return VerificationReport(
        identity_id=identity.id,
        theta_samples=list(grid),
        residuals=residuals,
        status=status,
        suggested_correction=suggestion,
        precision_bits=ctx.bits,
        total_terms=used,
        elapsed=time.perf_counter() - start,
        tolerance=tol,
    )


# -- closed forms ---------------------------------------------------------------


def _closed_form_text(cf: ClosedForm) -> str:
    parts = []
    if cf.additive:
        parts.append(str(cf.additive))
    mono = [f"{cf.coefficient}"]
    if cf.sqrt2:
        mono.append("sqrt(2)" if cf.sqrt2 == 1 else f"sqrt(2)^{cf.sqrt2}")
    if cf.gamma14:
        mono.append(f"Gamma(1/4)^{cf.gamma14}")
    if cf.gamma34:
        mono.append(f"Gamma(3/4)^{cf.gamma34}")
    if cf.pi_power:
        mono.append(f"pi^({cf.pi_power})")
    parts.append(" * ".join(mono))
    return " + ".join(parts)


def closed_form_suggestion(cf: ClosedForm, kind: str, description: str) -> dict:
    return {
        "kind": kind,
        "value": _closed_form_text(cf),
        "description": description,
        "coefficient": str(cf.coefficient),
        "monomial": {"pi": str(cf.pi_power), "gamma14": cf.gamma14, "gamma34": cf.gamma34, "sqrt2": cf.sqrt2},
        "additive": str(cf.additive),
    }


def certified_sum(term: SeriesTerm, ctx: PrecisionContext, n_max: int = N_MAX):
    r = sum_term(term, {}, _term_target(ctx, 1), ctx, n_max=n_max)
    return r.value, r.terms_used


def fit_rational_coefficient(term: SeriesTerm, monomial: ClosedForm, baseline=0,
                             ctx: PrecisionContext | None = None, value=None) -> Fraction:
    """c with sum(term) = baseline + c * monomial, recovered as an exact rational."""
    ctx = ctx or context()
    mono = monomial.with_coefficient(1).monomial_value(ctx)
    if mono == 0:
        raise DomainError("monomial value is zero")
    s = value if value is not None else certified_sum(term, ctx)[0]
    c = (s - ctx.mpf(Fraction(baseline))) / mono
    q = rationalize(c, ctx.mp.ldexp(1, -ctx.bits // 2))
    if q is None or q == 0:
        raise NoRationalFound(f"{ctx.mp.nstr(c, 20)} has no rational approximation with denominator <= 2^40")
    return q


def _refit_candidates(cf: ClosedForm) -> list[tuple[ClosedForm, str]]:
    return [
        (cf, "coefficient refitted on the printed monomial"),
        (replace(cf, sqrt2=cf.sqrt2 + 1), "monomial times sqrt(2)"),
        (replace(cf, sqrt2=cf.sqrt2 - 1), "monomial divided by sqrt(2)"),
        (replace(cf, gamma14=cf.gamma14 + 4), "Gamma(1/4) exponent raised by 4"),
        (replace(cf, gamma14=cf.gamma14 - 4), "Gamma(1/4) exponent lowered by 4"),
    ]


def verify_closed_form(term: SeriesTerm, cf: ClosedForm, tolerance=None, ctx: PrecisionContext | None = None,
                       identity_id: str = "", n_max: int = N_MAX) -> VerificationReport:
    ctx = ctx or context()
    if term.convergence != "E":
        raise DomainError("closed-form checks need an exponentially decaying term")
    start = time.perf_counter()
    tol = ctx.mpf(TOL_CLOSED if tolerance is None else tolerance)
    s, used = certified_sum(term, ctx, n_max)
    residual = s - cf.value(ctx)
    status, suggestion = "pass", None
    if abs(residual) > tol:
        status = "fail"
        for alt, desc in ((cf.with_coefficient(-cf.coefficient), "coefficient sign flipped"),
                          (cf.negated(), "whole right-hand side negated")):
            if abs(s - alt.value(ctx)) <= tol:
                status, suggestion = "sign_flip", closed_form_suggestion(alt, "sign", desc)
                break
        if status == "fail":
            for cand, desc in _refit_candidates(cf):
                try:
                    c = fit_rational_coefficient(term, cand, cf.additive, ctx, value=s)
                except NoRationalFound:
                    continue
                fixed = cand.with_coefficient(c)
                if abs(s - fixed.value(ctx)) <= tol:
                    status = "coefficient_mismatch"
                    suggestion = closed_form_suggestion(fixed, "closed_form", desc)
                    break
    return VerificationReport(
        identity_id=identity_id,
        theta_samples=[None],
        residuals=[residual],
        status=status,
        suggested_correction=suggestion,
        precision_bits=ctx.bits,
        total_terms=used,
        elapsed=time.perf_counter() - start,
        tolerance=tol,
        value=s,
    )


# -- suites -----------------------------------------------------------------------

_SUITE_RE = re.compile(r"^(?P<name>[a-z0-9]+)(\((?P<k>\d+)\))?$")


def natural_key(identity_id: str) -> tuple:
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", identity_id))


def suite_ids(selection: str, kmax: int = 3) -> list[str]:
    m = _SUITE_RE.match(selection.strip())
    if not m or m.group("name") not in SUITES:
        raise DomainError(f"unknown suite {selection!r}; expected one of {', '.join(SUITES)}")
    name = m.group("name")
    if m.group("k"):
        kmax = int(m.group("k"))
    if name == "theorems":
        ids = reg.theorem_ids()
    elif name == "corollaries":
        ids = reg.corollary_ids(kmax)
    elif name == "examples25":
        ids = reg.example25_ids(kmax)
    elif name == "closed31":
        ids = reg.closed31_ids()
    elif name == "closed32":
        ids = reg.closed32_ids()
    else:
        ids = (reg.theorem_ids() + reg.corollary_ids(kmax) + reg.example25_ids(kmax)
               + reg.closed31_ids() + reg.closed32_ids())
    return sorted(ids, key=natural_key)


def verify_id(identity_id: str, ctx: PrecisionContext | None = None, grid=None, tolerance=None,
              n_max: int = N_MAX) -> VerificationReport:
    """Verify one registry entry by id, identity or closed form alike."""
    ctx = ctx or context()
    entry = reg.lookup(identity_id)
    if isinstance(entry, ClosedFormEntry):
        return verify_closed_form(entry.term, entry.form, tolerance, ctx, identity_id=entry.id, n_max=n_max)
    if isinstance(entry, Identity):
        return verify_identity(entry, grid, tolerance, ctx, n_max=n_max)
    raise DomainError(f"{identity_id} is a family; verify an instance instead")


def run_suite(selection: str, ctx: PrecisionContext | None = None, kmax: int = 3,
              tolerance_e=None, tolerance_p=None, grid=None, n_max: int = N_MAX) -> list[VerificationReport]:
    """Reports for every entry of a suite, ordered by id."""
    ctx = ctx or context()
    reports = []
    for identity_id in suite_ids(selection, kmax):
        entry = reg.lookup(identity_id)
        tol = None
        if isinstance(entry, Identity):
            if entry.convergence == "P" and tolerance_p is not None:
                tol = tolerance_p
            elif entry.convergence == "E" and tolerance_e is not None:
                tol = tolerance_e
        elif tolerance_e is not None:
            tol = tolerance_e
        reports.append(verify_id(identity_id, ctx, grid if isinstance(entry, Identity) and entry.params else None,
                                 tol, n_max))
    return reports

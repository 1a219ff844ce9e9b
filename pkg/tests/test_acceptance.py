"""End-to-end acceptance checks.

Each test prints one ``PASS``/``FAIL`` line for its criterion (outside pytest's
capture) and then asserts the same condition, so a failing criterion both
shows in the summary line and fails the test.
"""

import time
from fractions import Fraction

import mpmath
import pytest

from resforge.dsl import expr_for, parse, parse_sum, parse_term, print_expr, sum_to_text, term_to_text
from resforge.errors import ParseError, UnsupportedCombination
from resforge.identities import ClosedForm, generate_identity, generate_two_param
from resforge.identities import registry as R
from resforge.identities.generator import THEOREM_FUNCTIONS
from resforge.laurent import (
    ORIGIN, FamilyKind, LaurentSeries, Point, kernel_has_pole, kernel_value, pole_expansion, series_mul,
    series_reciprocal,
)
from resforge.numerics import agm, context
from resforge.residues import contour_check
from resforge.special import gamma_quarter, zeta_even
from resforge.summation import sum_term
from resforge.verify import fit_rational_coefficient, run_suite, verify_identity

SUITES = ("theorems", "corollaries", "examples25", "closed31", "closed32")


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def suites192():
    ctx = context(192)
    out, times = {}, {}
    for name in SUITES:
        start = time.perf_counter()
        out[name] = run_suite(name, ctx)
        times[name] = time.perf_counter() - start
    return out, times


@pytest.fixture(scope="module")
def generated192():
    ctx = context(192)
    gen = {fid: generate_identity(fid, ctx) for fid in THEOREM_FUNCTIONS}
    return gen, generate_two_param(ctx=ctx)


def _by_id(reports):
    return {r.identity_id: r for r in reports}


def _direct_sum(term, thetas=None, dps=40):
    """Plain mpmath summation of term values, independent of the certified summation code."""
    ctx = context(160)
    with mpmath.workdps(dps):
        return mpmath.nsum(lambda n: term.value(int(n), thetas or {}, ctx), [1, mpmath.inf])


# 1 ---------------------------------------------------------------------------


def test_criterion_1_theorem_suite(report, suites192):
    out, times = suites192
    reps = out["theorems"]
    bad = []
    for r in reps:
        ident = R.lookup(r.identity_id)
        limit = 1e-25 if ident.convergence == "E" else 1e-12
        if r.status != "pass" or r.max_residual > limit:
            bad.append(f"{r.identity_id}={r.status} (max residual {mpmath.nstr(r.max_residual, 3)})")
    ok = len(reps) == 8 and not bad and times["theorems"] <= 60
    report(1, ok, f"{len(reps)} identities in {times['theorems']:.1f}s; not passing: {', '.join(bad) or 'none'}")


# 2 ---------------------------------------------------------------------------


def test_criterion_2_generator_equivalence(report, generated192):
    gen, gen_f = generated192
    mismatched = [fid for fid in THEOREM_FUNCTIONS if not gen[fid].equivalent(R.theorem(R.THEOREM_SOURCE[fid]))]
    f_report = verify_identity(gen_f, grid=[(1, Fraction(1, 2))], ctx=context(192))
    f_ok = f_report.status == "pass" and f_report.max_residual <= 1e-25
    ok = not mismatched and f_ok
    report(2, ok, f"structural mismatches: {', '.join(mismatched) or 'none'}; "
                  f"F at (1, 1/2): {f_report.status}, residual {mpmath.nstr(f_report.max_residual, 3)}")


# 3 ---------------------------------------------------------------------------


def test_criterion_3_corollaries(report, suites192):
    reps = suites192[0]["corollaries"]
    bad = [r.identity_id for r in reps if r.status != "pass" or r.max_residual > 1e-20]
    ok = len(reps) == 15 and not bad
    report(3, ok, f"{len(reps)} corollary instances; failing: {', '.join(bad) or 'none'}")


# 4 ---------------------------------------------------------------------------


def test_criterion_4_worked_examples(report, suites192):
    reps = _by_id(suites192[0]["examples25"])
    numbers = {i.split("(")[0] for i in reps}
    others = [i for i, r in reps.items() if i != "sec2.5-ex1" and r.status != "pass"]
    ex1 = reps["sec2.5-ex1"]
    suggestion = (ex1.suggested_correction or {}).get("value")
    ident = R.lookup("sec2.5-ex1")
    oracle = sum(_direct_sum(t) for t in ident.terms)
    ok = (len(numbers) == 18 and not others and ex1.status == "sign_flip" and suggestion == "-1/4"
          and abs(oracle + 0.25) < 1e-7)
    report(4, ok, f"{len(numbers)} examples; ex1 {ex1.status} -> {suggestion}, direct sum "
                  f"{mpmath.nstr(oracle, 10)}; other non-pass: {', '.join(others) or 'none'}")


# 5 ---------------------------------------------------------------------------

EXPECTED_MISMATCH = {
    # id: (approximate corrected value as quoted, decimals quoted)
    "sec3.1-n8-cosh-alt": ("-0.1693039", 7),
    "sec3.2-odd6-sinhh-alt": ("-3.8077", 4),
}


def test_criterion_5_closed_forms(report, suites192):
    ctx = context(192)
    reps = _by_id(suites192[0]["closed31"] + suites192[0]["closed32"])
    problems = []
    for cid, r in reps.items():
        expected = "coefficient_mismatch" if cid in EXPECTED_MISMATCH else "pass"
        if r.status != expected:
            problems.append(f"{cid} is {r.status}, expected {expected}")
        if r.status == "pass" and abs(r.residuals[0]) > 1e-25:
            problems.append(f"{cid} residual {mpmath.nstr(r.residuals[0], 3)}")
    for cid, (quoted, decimals) in EXPECTED_MISMATCH.items():
        r = reps[cid]
        half_ulp = 0.5 * 10.0 ** -decimals
        if abs(r.value - ctx.mpf(quoted)) > half_ulp:
            problems.append(f"{cid} corrected value {mpmath.nstr(r.value, 10)} differs from {quoted}")
        entry = R.closed_form(cid)
        sug = r.suggested_correction or {}
        if sug.get("monomial"):
            m = sug["monomial"]
            fixed = ClosedForm(Fraction(1), Fraction(m["pi"]), m["gamma14"], m["gamma34"], m["sqrt2"],
                               entry.form.additive)
            c = fit_rational_coefficient(entry.term, fixed, entry.form.additive, ctx)
            if c.denominator != entry.form.coefficient.denominator:
                problems.append(f"{cid} refit {c} has a different denominator than the printed rational")
    ok = len(reps) == 31 and not problems
    report(5, ok, f"{len(reps)} closed forms; problems: {'; '.join(problems) or 'none'}")


# 6 ---------------------------------------------------------------------------

ANCHORS = (
    ("(-1)^(n-1)/cosh(pi n)", "0.0826866"),
    ("pi n/sinh(pi n)", "0.2971113"),
    ("pi^2 cosh(pi n) (-1)^n/sinh(pi n)^2", "-0.8224670"),
)


def test_criterion_6_numeric_anchors(report):
    ctx = context(192)
    lines, ok = [], True
    for text, quoted in ANCHORS:
        term = parse_term(text)
        direct = _direct_sum(term)
        certified = sum_term(term, ctx=ctx).value
        hit = abs(direct - mpmath.mpf(quoted)) <= 1e-6 and abs(certified - direct) <= 1e-30
        ok &= hit
        lines.append(f"{text} = {mpmath.nstr(direct, 10)} vs {quoted} {'ok' if hit else 'off'}")
    zeta_check = abs(sum_term(parse_term(ANCHORS[2][0]), ctx=ctx).value + ctx.mp.pi**2 / 12) < ctx.eps * 8
    ok &= zeta_check
    report(6, ok, "; ".join(lines) + f"; equals -zeta(2)/2: {zeta_check}")


# 7 ---------------------------------------------------------------------------


def _zeta_brute(s, bits):
    """sum_{n<=N} n^-s plus the integral tail with its Euler-Maclaurin corrections."""
    with mpmath.workprec(bits + 64):
        N = 400
        head = mpmath.fsum(mpmath.mpf(n) ** -s for n in range(1, N + 1))
        tail = mpmath.mpf(N) ** (1 - s) / (s - 1) - mpmath.mpf(N) ** -s / 2
        rising = mpmath.mpf(s)
        for j in range(1, 40):
            tail += mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * rising * mpmath.mpf(N) ** (-s - 2 * j + 1)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
        return +(head + tail)


def test_criterion_7_constants(report):
    bits = 192
    ctx = context(bits)
    mp = ctx.mp
    tol = mp.ldexp(1, -bits + 8)
    g = gamma_quarter(ctx)
    relation = abs(g**2 * agm(mp.sqrt(2), 1, ctx) - (2 * mp.pi) ** 1.5) / (2 * mp.pi) ** 1.5
    with mpmath.workprec(bits + 64):
        oracle = abs(g - mpmath.gamma(mpmath.mpf(1) / 4)) / g
    zeta_err = max(abs(zeta_even(k, ctx).value - _zeta_brute(2 * k, bits)) for k in range(1, 9))
    ok = relation <= tol and oracle <= tol and zeta_err <= tol
    report(7, ok, f"AGM relation {mpmath.nstr(relation, 3)}, Gamma(1/4) vs independent gamma "
                  f"{mpmath.nstr(oracle, 3)}, zeta(2k) k<=8 {mpmath.nstr(zeta_err, 3)}; "
                  f"bound 2^-{bits - 8}")


# 8 ---------------------------------------------------------------------------


def _laurent_roundtrip(ctx):
    worst = 0
    for trial in range(20):
        low = trial % 5 - 2
        coeffs = [ctx.mpf(trial + 1)] + [ctx.mpf(((7 * trial + 3 * j) % 11) - 5) for j in range(9)]
        a = LaurentSeries.make(ORIGIN, low, coeffs, low + 9)
        prod = series_mul(a, series_reciprocal(a, ctx))
        worst = max([worst] + [abs(prod.coeff(d) - (d == 0)) for d in range(0, prod.max_degree + 1)])
    return worst


def _pole_vs_direct(ctx):
    mp = ctx.mp
    worst = 0
    kinds = (FamilyKind.INTEGERS, FamilyKind.HALF_ODD, FamilyKind.IMAG_INTEGERS, FamilyKind.IMAG_HALF_ODD)
    for kernel in ("pi_csc", "pi_sec", "pi_cot", "pi_tan", "pi_csch", "pi_sech", "pi_coth", "pi_tanh"):
        for p in [Point(k, n, s) for k in kinds for n in (1, 2) for s in (1, -1)] + [ORIGIN]:
            if not kernel_has_pole(kernel, p):
                continue
            series = pole_expansion(kernel, p, 16, ctx)
            x = mp.mpc("1e-3", "-2e-3")
            worst = max(worst, abs(series.evaluate(x) - kernel_value(kernel, p.value(ctx) + x, ctx)))
    return worst


def _dsl_roundtrip_and_fuzz():
    failures = 0
    for ident in R.registry(3).identities:
        if parse_sum(sum_to_text(ident.terms, ident.poly)) != (ident.terms, ident.poly):
            failures += 1
    for entry in R.registry(3).closed_forms:
        failures += parse_term(term_to_text(entry.term)) != entry.term
    for fid in ("f1", "f2", "f3", "f4", "g1", "g2", "g3", "g4", "F"):
        failures += parse(print_expr(expr_for(fid))).function_id != fid
    alphabet = "0123456789 +-*/^()npizthetasincoh"
    state = 12345
    for _ in range(2000):
        chars = []
        for _ in range(state % 40):
            state = (1103515245 * state + 12345) % 2**31
            chars.append(alphabet[state % len(alphabet)])
        state = (1103515245 * state + 12345) % 2**31
        try:
            parse_sum("".join(chars))
        except (ParseError, UnsupportedCombination):
            pass
        except Exception:  # noqa: BLE001 - any other exception is a panic
            failures += 1
    return failures


def test_criterion_8_property_suites(report):
    ctx = context(192)
    roundtrip = _laurent_roundtrip(ctx)
    pole = _pole_vs_direct(ctx)
    c128 = context(128)
    c10 = contour_check("f1", (1,), 10, c128)
    c20 = contour_check("f1", (1,), 20, c128)
    dsl_failures = _dsl_roundtrip_and_fuzz()
    ok = roundtrip < ctx.eps * 2**20 and pole < 1e-40 and c10 <= 1e-6 and c20 < c10 and dsl_failures == 0
    report(8, ok, f"Laurent roundtrip {mpmath.nstr(roundtrip, 3)}, pole expansion vs direct {mpmath.nstr(pole, 3)}, "
                  f"contour 10.5 -> {mpmath.nstr(c10, 3)}, 20.5 -> {mpmath.nstr(c20, 3)}, "
                  f"DSL failures {dsl_failures}")


# 9 ---------------------------------------------------------------------------


def test_criterion_9_precision_stability(report, suites192, generated192):
    low = {r.identity_id: r for name in SUITES for r in suites192[0][name]}
    ctx = context(384)
    high = {r.identity_id: r for name in SUITES for r in run_suite(name, ctx)}
    gen, gen_f = generated192
    gen384 = {fid: generate_identity(fid, ctx) for fid in THEOREM_FUNCTIONS}
    f384 = generate_two_param(ctx=ctx)
    floor = ctx.mpf(2) ** -192
    shrink = ctx.mpf(2) ** -40
    changed, weak = [], []
    for cid, r in low.items():
        h = high[cid]
        if h.status != r.status:
            changed.append(f"{cid} {r.status}->{h.status}")
        if r.status == "pass":
            for a, b in zip(r.residuals, h.residuals):
                if abs(b) > shrink * max(abs(a), floor):
                    weak.append(cid)
                    break
    for fid in THEOREM_FUNCTIONS:
        if gen[fid].terms != gen384[fid].terms or gen[fid].poly != gen384[fid].poly:
            changed.append(f"generated {fid}")
    f_low = verify_identity(gen_f, grid=[(1, Fraction(1, 2))], ctx=context(192))
    f_high = verify_identity(f384, grid=[(1, Fraction(1, 2))], ctx=ctx)
    if f_low.status != f_high.status:
        changed.append("generated F")
    if abs(f_high.residuals[0]) > shrink * max(abs(f_low.residuals[0]), floor):
        weak.append("generated F")
    ok = not changed and not weak
    report(9, ok, f"{len(low)} entries rerun at 384 bits; status changes: {', '.join(changed) or 'none'}; "
                  f"residuals not shrinking by 2^40: {', '.join(weak) or 'none'}")

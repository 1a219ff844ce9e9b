from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resforge.dsl import parse_term
from resforge.errors import DivergentTerm, DomainError, TargetUnreachable
from resforge.numerics import context
from resforge.summation import em_tail, em_unit, polylog_unit, sum_term, zeta_value
from resforge.summation import _shape_eval  # the coth/tanh split is checked directly

# Values frozen from mpmath.nsum at 50 digits.
ORACLES = {
    "(-1)^(n-1)/cosh(pi n)": "0.082686579162963406859285133600476595503003493254827",
    "pi n/sinh(pi n)": "0.29710990380661915970919248517611613581484318070639",
    "pi^2 cosh(pi n) (-1)^n/sinh(pi n)^2": "-0.8224670334241132182362075833230125946094749506034",
    "1/cosh(pi n)": "0.090170299508048113022668970279244293616858317440724",
    "coth(pi n)/n^3": "1.2057996486783263401574122526094987023087612220066",
}


@pytest.mark.parametrize("text", sorted(ORACLES))
def test_frozen_oracles(ctx, text):
    r = sum_term(parse_term(text), target_error=Fraction(1, 10**45), ctx=ctx)
    assert abs(r.value - ctx.mpf(ORACLES[text])) < ctx.mpf(10) ** -45
    assert r.tail_bound <= ctx.mpf(10) ** -45


def test_fourier_closed_forms(ctx):
    # sum cos(n t)/n^2 = pi^2/6 - pi t/2 + t^2/4 and the odd-index analogue pi(pi - 2t)/8, 0 <= t <= pi
    mp, pi = ctx.mp, ctx.mp.pi
    for t in (Fraction(0), Fraction(1, 3), Fraction(1), Fraction(5, 2)):
        x = ctx.mpf(t)
        full = sum_term(parse_term("cos(n theta)/n^2"), t, ctx=ctx).value
        odd = sum_term(parse_term("cos((2n-1) theta)/(2n-1)^2"), t, ctx=ctx).value
        assert abs(full - (pi**2 / 6 - pi * x / 2 + x**2 / 4)) < 4 * ctx.eps
        assert abs(odd - pi * (pi - 2 * x) / 8) < 4 * ctx.eps
    # sum sin(n t)/n^3 = (pi^2 t - 3 pi t^2/2 + t^3/2)/6
    t = ctx.mpf(1)
    v = sum_term(parse_term("sin(n theta)/n^3"), 1, ctx=ctx).value
    assert abs(v - (pi**2 * t - 3 * pi * t**2 / 2 + t**3 / 2) / 6) < 4 * ctx.eps
    assert mp.isfinite(v)


def test_odd_index_reduction_matches_direct_summation(ctx128):
    term = parse_term("(-1)^n sin((2n-1) theta)/(2n-1)^3 tanh((2n-1) pi/2)")
    r = sum_term(term, Fraction(7, 10), Fraction(1, 10**20), ctx128)
    with mpmath.workdps(40):
        x = mpmath.mpf(7) / 10
        direct = mpmath.nsum(lambda n: (-1) ** n * mpmath.sin((2 * n - 1) * x) / (2 * n - 1) ** 3
                             * mpmath.tanh((2 * n - 1) * mpmath.pi / 2), [1, mpmath.inf])
        assert abs(r.value - direct) < 1e-20


@pytest.mark.parametrize("x", [mpmath.mpf(k) / 7 for k in range(1, 21)])
def test_coth_tanh_split(ctx, x):
    mp = ctx.mp
    x = ctx.mpf(x)
    assert abs(1 + _shape_eval("coth_minus_1", x, mp) - mp.coth(x)) < 4 * ctx.eps * mp.coth(x)
    assert abs(1 + _shape_eval("tanh_minus_1", x, mp) - mp.tanh(x)) < 4 * ctx.eps


_TERMS = [
    "n^3/sinh(pi n)", "(-1)^n n^2 cos(n theta)/cosh(pi n)", "n cosh(n theta)/sinh(pi n)",
    "n^2 cos(n theta) cosh(pi n)/sinh(pi n)^2", "sinh((2n-1) theta/2)/cosh((2n-1) pi/2)",
    "cos(n theta) coth(pi n)/n^2", "(-1)^n sin(n theta) coth(pi n)/n^3",
    "cos((2n-1) theta) tanh((2n-1) pi/2)/(2n-1)^2",
]


@given(st.sampled_from(_TERMS), st.fractions(min_value=-3, max_value=3, max_denominator=20))
def test_bounds_are_sound(text, theta):
    c = context(128)
    term = parse_term(text)
    loose = sum_term(term, theta, Fraction(1, 10**10), c)
    tight = sum_term(term, theta, Fraction(1, 10**30), c)
    assert loose.tail_bound <= 1e-10
    assert abs(loose.value - tight.value) <= loose.tail_bound + tight.tail_bound


@given(st.sampled_from(_TERMS[:5]), st.fractions(min_value=-3, max_value=3, max_denominator=10))
def test_work_grows_with_precision_target(text, theta):
    c = context(128)
    term = parse_term(text)
    used = [sum_term(term, theta, Fraction(1, 10**e), c).terms_used for e in (5, 15, 30)]
    assert used == sorted(used)


def test_em_and_polylog_routes_agree(ctx128):
    for text, theta in (("cos(n theta) coth(pi n)/n^2", Fraction(3, 4)),
                        ("(-1)^n sin(n theta) coth(pi n)/n^3", Fraction(-1, 2)),
                        ("cos((2n-1) theta) tanh((2n-1) pi/2)/(2n-1)^2", Fraction(2))):
        term = parse_term(text)
        # the remainder bound of the Euler-Maclaurin route stalls near 1e-13 for s = 2
        a = sum_term(term, theta, Fraction(1, 10**10), ctx128, method="split_euler_maclaurin")
        b = sum_term(term, theta, Fraction(1, 10**30), ctx128, method="split_polylog")
        assert a.method == "split_euler_maclaurin"
        assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound


def test_em_unit_against_polylog(ctx):
    em, bound = em_unit(3, Fraction(1, 3), ctx.mpf("0.25"), 40, 6, ctx)
    ref, rbound = polylog_unit(3, Fraction(1, 3), ctx.mpf("0.25"), ctx)
    assert abs(em - ref) <= bound + rbound


def test_em_tail_examples(ctx):
    value, bound = em_tail(3, 1, "cos", ctx.mp.pi, 0, ctx=ctx)
    assert abs(value + Fraction(3, 4) * ctx.mpf(zeta_value(3, ctx)[0])) < 4 * ctx.eps
    value, bound = em_tail(2, 1, "cos", 0, 0, ctx=ctx)
    assert abs(value - ctx.mp.pi**2 / 6) < 4 * ctx.eps
    assert em_tail(4, Fraction(1, 2), "sin", 0, 5, ctx=ctx)[0] == 0
    # pi given as a double still selects the exact route
    assert em_tail(3, 1, "cos", 3.141592653589793, 0, ctx=ctx)[1] < 1e-60


@pytest.mark.parametrize("s,a,trig,theta", [(2, 1, "cos", 1), (3, Fraction(1, 2), "sin", "2.5"), (5, 1, "sin", -3)])
def test_em_tail_doubling_consistency(ctx, s, a, trig, theta):
    mp = ctx.mp
    N = 16
    t1, b1 = em_tail(s, a, trig, theta, N, ctx=ctx)
    t2, b2 = em_tail(s, a, trig, theta, 2 * N, ctx=ctx)
    w = ctx.mpf(Fraction(a)) * ctx.mpf(theta)
    block = mp.fsum(getattr(mp, trig)(w * n) / mp.mpf(n) ** s for n in range(N + 1, 2 * N + 1))
    assert abs((t1 - t2) - block) <= b1 + b2
    assert b2 < b1


def test_em_tail_argument_checks(ctx):
    with pytest.raises(DomainError):
        em_tail(1, 1, "cos", 1, 20, ctx=ctx)
    with pytest.raises(DomainError):
        em_tail(2, 2, "cos", 1, 20, ctx=ctx)
    with pytest.raises(DomainError):
        em_tail(2, 1, "cos", 1, 3, ctx=ctx)
    with pytest.raises(DomainError):
        em_tail(2, 1, "tan", 1, 20, ctx=ctx)


def test_zeta_value_odd(ctx):
    with mpmath.workdps(80):
        for s in (3, 5, 7):
            v, bound = zeta_value(s, ctx)
            assert abs(v - mpmath.zeta(s)) < 2 * ctx.eps and bound < ctx.eps


def test_divergent_terms(ctx):
    with pytest.raises(DivergentTerm) as info:
        sum_term(parse_term("cosh(n theta)/sinh(pi n)"), Fraction(16, 5), ctx=ctx)
    assert info.value.delta < 0
    with pytest.raises(DivergentTerm):
        sum_term(parse_term("n^2 cosh(n theta)/sinh(pi n)^2"), 7, ctx=ctx)


def test_unreachable_target(ctx):
    with pytest.raises(TargetUnreachable):
        sum_term(parse_term("n^3 cosh(n theta)/sinh(pi n)"), Fraction(31, 10), Fraction(1, 10**40), ctx, n_max=50)


def test_bad_arguments(ctx):
    with pytest.raises(DomainError):
        sum_term(parse_term("1/cosh(pi n)"), target_error=0, ctx=ctx)
    with pytest.raises(DomainError):
        sum_term(parse_term("1/cosh(pi n)"), ctx=ctx, method="magic")

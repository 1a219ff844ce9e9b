from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resforge.errors import DomainError, NumericOverflow
from resforge.numerics import (
    PrecisionContext, agm, const_pi, context, elementary, least_squares, rationalize, to_fraction,
)


def test_context_is_cached_and_isolated():
    a, b = context(192), context(256)
    assert context(192) is a
    assert a.mp.prec == 224 and b.mp.prec == 288
    # a private mpmath context: the global one is untouched
    assert mpmath.mp.prec == 53


def test_context_rejects_low_precision():
    with pytest.raises(DomainError):
        PrecisionContext(32)
    with pytest.raises(DomainError):
        PrecisionContext(128, guard_bits=8)


def test_eps_and_fraction_conversion(ctx):
    assert to_fraction(ctx.eps) == Fraction(1, 2**192)
    assert ctx.mpf(Fraction(1, 3)) * 3 == 1


def test_pi_matches_machin(ctx):
    mp = ctx.mp
    machin = 4 * (4 * mp.atan(mp.mpf(1) / 5) - mp.atan(mp.mpf(1) / 239))
    assert abs(const_pi(ctx) - machin) < 2 * ctx.eps


@pytest.mark.parametrize("fn,x", [("exp", 1), ("log", 2), ("sin", 1), ("cosh", -3), ("tanh", "0.5")])
def test_elementary_matches_mpmath(ctx, fn, x):
    with mpmath.workdps(80):
        expected = getattr(mpmath, fn)(mpmath.mpf(x))
        assert abs(elementary(fn, x, ctx) - expected) < mpmath.mpf(2) ** -185


def test_elementary_domain_and_overflow(ctx):
    with pytest.raises(DomainError):
        elementary("log", 0, ctx)
    with pytest.raises(DomainError):
        elementary("coth", 0, ctx)
    with pytest.raises(DomainError):
        elementary("erf", 1, ctx)
    with pytest.raises(NumericOverflow):
        elementary("exp", 2**21, ctx)


def test_agm_known_value(ctx):
    # Gauss's constant: 1/agm(1, sqrt 2)
    with mpmath.workdps(80):
        gauss = 1 / mpmath.agm(1, mpmath.sqrt(2))
    assert abs(1 / agm(1, ctx.mp.sqrt(2), ctx) - gauss) < mpmath.mpf(2) ** -185
    with pytest.raises(DomainError):
        agm(-1, 1, ctx)


@given(st.floats(min_value=1e-6, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
def test_agm_between_geometric_and_arithmetic_mean(a, b):
    c = context(128)
    m = agm(a, b, c)
    lo, hi = sorted((c.mp.sqrt(c.mpf(a) * b), (c.mpf(a) + b) / 2))
    assert lo * (1 - c.eps * 8) <= m <= hi * (1 + c.eps * 8)


@given(st.fractions(max_denominator=10**6))
def test_rationalize_recovers_fractions(q):
    c = context(128)
    assert rationalize(c.mpf(q), c.mp.ldexp(1, -64)) == q


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_to_fraction_is_exact_for_floats(x):
    assert to_fraction(mpmath.mpf(x)) == Fraction(x)


def test_to_fraction_rejects_infinity():
    with pytest.raises(DomainError):
        to_fraction(mpmath.inf)


def test_rationalize_refuses_irrational(ctx):
    assert rationalize(const_pi(ctx), ctx.mp.ldexp(1, -96)) is None


def test_least_squares_overdetermined(ctx):
    rows = [[1, k, k * k] for k in range(6)]
    rhs = [Fraction(3) - 2 * k + Fraction(1, 2) * k * k for k in range(6)]
    x, res = least_squares(rows, [ctx.mpf(v) for v in rhs], ctx)
    assert [to_fraction(v).limit_denominator(100) for v in x] == [3, -2, Fraction(1, 2)]
    assert res < ctx.eps


def test_least_squares_degenerate_first_row(ctx):
    x, res = least_squares([[0], [1], [2]], [0, 3, 6], ctx)
    assert abs(x[0] - 3) < ctx.eps and res < ctx.eps

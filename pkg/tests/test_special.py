from fractions import Fraction
from math import comb

import mpmath
import pytest

from resforge.errors import DomainError
from resforge.special import (
    bernoulli, gamma_quarter, gamma_three_quarter, zeta_bar_even, zeta_even, zeta_even_rational,
)

GAMMA_QUARTER = "3.6256099082219083119306851558676720029951676828801"  # mpmath.gamma, 50 digits


def _bernoulli_oracle(count):
    """Binomial recurrence sum_{j<=m} C(m+1, j) B_j = 0."""
    b = [Fraction(1)]
    for m in range(1, count + 1):
        b.append(-sum(comb(m + 1, j) * b[j] for j in range(m)) / Fraction(m + 1))
    return b


def test_bernoulli_matches_recurrence():
    oracle = _bernoulli_oracle(60)
    assert [bernoulli(m) for m in range(61)] == oracle


def test_bernoulli_small_values():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(13) == 0


def test_bernoulli_large_index_against_mpmath():
    assert bernoulli(200) == Fraction(mpmath.bernfrac(200)[0], mpmath.bernfrac(200)[1])


def test_bernoulli_rejects_negative():
    with pytest.raises(DomainError):
        bernoulli(-2)


def test_zeta_even_rationals():
    assert zeta_even_rational(1) == Fraction(1, 6)
    assert zeta_even_rational(2) == Fraction(1, 90)
    assert zeta_even_rational(3) == Fraction(1, 945)
    with pytest.raises(DomainError):
        zeta_even_rational(0)


@pytest.mark.parametrize("k", range(1, 9))
def test_zeta_even_values(ctx, k):
    with mpmath.workdps(80):
        assert abs(zeta_even(k, ctx).value - mpmath.zeta(2 * k)) < mpmath.mpf(2) ** -185
        assert abs(zeta_bar_even(k, ctx).value - mpmath.altzeta(2 * k)) < mpmath.mpf(2) ** -185


def test_gamma_quarter_frozen(ctx):
    assert abs(gamma_quarter(ctx) - ctx.mpf(GAMMA_QUARTER)) < ctx.mpf(10) ** -48


def test_gamma_reflection(ctx):
    g = gamma_quarter(ctx) * gamma_three_quarter(ctx)
    assert abs(g - ctx.mp.pi * ctx.mp.sqrt(2)) < 4 * ctx.eps

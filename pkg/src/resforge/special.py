"""Exact Bernoulli numbers, even zeta values and the Gamma-quarter constants."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DomainError
from .numerics import BigReal, PrecisionContext, agm, const_pi

_lock = threading.Lock()
_tangent: list[int] = [0]  # _tangent[k] is the k-th tangent number, T_1 = 1


def _extend_tangent(count: int) -> None:
    # Integer-only tangent-number recurrence (Knuth-Buckholtz); much faster
    # than the binomial Bernoulli recurrence once indices reach the hundreds.
    t = [0] * (count + 1)
    t[1] = 1
    for k in range(2, count + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, count + 1):
        for j in range(k, count + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    _tangent[:] = t


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m with the convention B_1 = -1/2."""
    if not isinstance(m, int) or m < 0:
        raise DomainError(f"bernoulli index must be a non-negative integer, got {m!r}")
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 2)
    if m % 2:
        return Fraction(0)
    k = m // 2
    if k >= len(_tangent):
        with _lock:
            if k >= len(_tangent):
                _extend_tangent(max(2 * len(_tangent), k + 8))
    t = _tangent[k]
    four_k = 1 << (2 * k)
    sign = 1 if k % 2 else -1
    return Fraction(sign * 2 * k * t, four_k * (four_k - 1))


@dataclass(frozen=True)
class ZetaValue:
    weight: int
    value: BigReal
    exact_form: Fraction  # value = exact_form * pi**weight


def zeta_even_rational(k: int) -> Fraction:
    """The rational r with zeta(2k) = r * pi**(2k)."""
    if k < 1:
        raise DomainError("zeta_even requires k >= 1")
    b = bernoulli(2 * k)
    sign = 1 if k % 2 else -1
    return sign * b * Fraction(2 ** (2 * k), 2 * factorial(2 * k))


def zeta_even(k: int, ctx: PrecisionContext) -> ZetaValue:
    r = zeta_even_rational(k)
    return ZetaValue(2 * k, ctx.mpf(r) * const_pi(ctx) ** (2 * k), r)


def zeta_bar_even(k: int, ctx: PrecisionContext) -> ZetaValue:
    """Alternating zeta (1 - 2**(1-2k)) * zeta(2k)."""
    r = zeta_even_rational(k) * (1 - Fraction(1, 2 ** (2 * k - 1)))
    return ZetaValue(2 * k, ctx.mpf(r) * const_pi(ctx) ** (2 * k), r)


def gamma_quarter(ctx: PrecisionContext) -> BigReal:
    """Gamma(1/4) from Gamma(1/4)**2 = (2 pi)**(3/2) / agm(sqrt 2, 1)."""
    mp = ctx.mp
    two_pi = 2 * const_pi(ctx)
    return mp.sqrt(two_pi * mp.sqrt(two_pi) / agm(mp.sqrt(2), 1, ctx))


def gamma_three_quarter(ctx: PrecisionContext) -> BigReal:
    """Gamma(3/4) by reflection: Gamma(1/4) Gamma(3/4) = pi sqrt 2."""
    return const_pi(ctx) * ctx.mp.sqrt(2) / gamma_quarter(ctx)

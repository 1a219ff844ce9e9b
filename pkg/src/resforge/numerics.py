"""Explicit-precision real arithmetic on top of mpmath.

Every computation receives a :class:`PrecisionContext`.  The context owns a
private ``mpmath`` context whose precision is fixed at construction, so two
threads working at different precisions never interfere and nothing depends
on the global ``mpmath.mp`` state.

Values are plain ``mpf`` objects produced by the context (aliased here as
``BigReal``).  Functions in this module add the domain and overflow checks that
the rest of the package relies on: a certified tail bound is worthless if an
``exp`` quietly returned infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.ctx_mp import MPContext

from .errors import DomainError, NumericOverflow

BigReal = mpmath.mpf

# Arguments of exp/sinh/cosh above this magnitude are rejected.  Real inputs
# in this package never come close; hitting the limit means a decay rate went
# negative somewhere upstream.
EXP_ARGUMENT_LIMIT = 2**20

ELEMENTARY = ("exp", "log", "sin", "cos", "tan", "sinh", "cosh", "coth", "tanh")


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 192
    guard_bits: int = 32
    mp: MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise DomainError(f"bits must be an integer >= 64, got {self.bits!r}")
        if not isinstance(self.guard_bits, int) or self.guard_bits < 32:
            raise DomainError(f"guard_bits must be an integer >= 32, got {self.guard_bits!r}")
        mp = MPContext()
        mp.prec = self.bits + self.guard_bits
        object.__setattr__(self, "mp", mp)

    def __reduce__(self):
        return (PrecisionContext, (self.bits, self.guard_bits))

    @property
    def working_bits(self) -> int:
        return self.bits + self.guard_bits

    @property
    def eps(self) -> BigReal:
        """2**-bits, the relative accuracy promised to callers."""
        return self.mp.ldexp(self.mp.one, -self.bits)

    def mpf(self, x) -> BigReal:
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def mpc(self, re, im=0):
        return self.mp.mpc(re, im)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return context(bits, self.guard_bits)


@lru_cache(maxsize=None)
def context(bits: int = 192, guard_bits: int = 32) -> PrecisionContext:
    """Shared, immutable context for ``bits`` of precision."""
    return PrecisionContext(bits, guard_bits)


def const_pi(ctx: PrecisionContext) -> BigReal:
    return +ctx.mp.pi


def elementary(fn: str, x, ctx: PrecisionContext) -> BigReal:
    """Evaluate a real elementary function with domain and overflow checks."""
    if fn not in ELEMENTARY:
        raise DomainError(f"unknown elementary function {fn!r}")
    mp = ctx.mp
    x = ctx.mpf(x)
    if not mp.isfinite(x):
        raise DomainError(f"{fn} of non-finite argument")
    if fn == "log" and x <= 0:
        raise DomainError("log requires a positive argument")
    if fn == "coth" and x == 0:
        raise DomainError("coth has a pole at 0")
    if fn in ("exp", "sinh", "cosh") and abs(x) > EXP_ARGUMENT_LIMIT:
        raise NumericOverflow(f"{fn}({mp.nstr(x, 8)}) exceeds the exponential range")
    value = getattr(mp, fn)(x)
    if not mp.isfinite(value):
        raise NumericOverflow(f"{fn}({mp.nstr(x, 8)}) is not finite")
    return value


def agm(a, b, ctx: PrecisionContext) -> BigReal:
    """Arithmetic-geometric mean of two positive reals."""
    mp = ctx.mp
    a, b = ctx.mpf(a), ctx.mpf(b)
    if a <= 0 or b <= 0:
        raise DomainError("agm requires positive arguments")
    # One ulp of slack on the stopping rule: at working precision the two
    # sequences can settle one ulp apart and never close exactly.
    threshold = mp.ldexp(mp.one, -ctx.working_bits + 1)
    for _ in range(4 * ctx.working_bits):
        if abs(a - b) <= threshold * a:
            break
        a, b = (a + b) / 2, mp.sqrt(a * b)
    return (a + b) / 2


def to_fraction(x) -> Fraction:
    """The exact binary value of a finite mpf."""
    if not hasattr(x, "_mpf_"):
        x = mpmath.mpf(x)  # python numbers convert exactly
    sign, man, exp, _ = x._mpf_
    if not man:
        if exp:
            raise DomainError("cannot convert a non-finite value to a fraction")
        return Fraction(0)
    value = Fraction(int(man) * 2**exp) if exp >= 0 else Fraction(int(man), 2**-exp)
    return -value if sign else value


def rationalize(x, rel_tol, max_denominator: int = 2**40) -> Fraction | None:
    """Best continued-fraction convergent p/q (q <= max_denominator) of x.

    Accepted only when |x - p/q| <= rel_tol * |x|; otherwise None.
    """
    exact = to_fraction(x)
    if exact == 0:
        return Fraction(0)
    candidate = exact.limit_denominator(max_denominator)
    if abs(exact - candidate) <= to_fraction(rel_tol) * abs(exact):
        return candidate
    return None


def least_squares(rows, rhs, ctx: PrecisionContext):
    """(solution, residual norm) of an overdetermined real system.

    Householder QR first; mpmath's QR divides by zero on some exactly
    degenerate columns, in which case the normal equations are used.
    """
    mp = ctx.mp
    A, b = mp.matrix(rows), mp.matrix(rhs)
    try:
        return mp.qr_solve(A, b)
    except ZeroDivisionError:
        At = A.T
        x = mp.lu_solve(At * A, At * b)
        return x, mp.norm(A * x - b)

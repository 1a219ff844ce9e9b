"""Certified numerical evaluation of single series terms.

Two decay classes are handled.

Exponentially decaying terms (hyperbolic denominators) are summed directly
until a geometric bound on the remaining tail meets the target.  The bound
comes from |general term| <= |w| A idx^p exp(-delta idx) with a shape constant
A and decay rate delta; see :func:`_decay_ledger`.

coth/tanh terms are split into a unit part and an exponentially small
correction:

    coth(x) = 1 + 2e^{-2x}/(1 - e^{-2x}),    tanh(x) = 1 - 2e^{-2x}/(1 + e^{-2x}).

The correction is summed as above.  The unit part is a finite combination of
Li_s(e^{i phi}), which is evaluated either from its convergent expansion
around phi = 0 (default) or by direct summation with an Euler-Maclaurin tail.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb

from .errors import DivergentTerm, DomainError, TargetUnreachable
from .identities.model import HYP_SHAPES, Index, SeriesTerm, Sign, hyp_value
from .numerics import PrecisionContext, const_pi
from .special import bernoulli, zeta_even

N_MAX = 10**6
EM_CORRECTIONS = 6

METHODS = ("geometric", "split_polylog", "split_euler_maclaurin", "alternating")


@dataclass(frozen=True)
class SumResult:
    value: object
    tail_bound: object
    terms_used: int
    method: str


def _param_values(term: SeriesTerm, theta, ctx: PrecisionContext) -> dict:
    names = term.params
    if isinstance(theta, dict):
        values = dict(theta)
    elif isinstance(theta, (tuple, list)):
        values = dict(zip(names, theta))
    else:
        values = {p: theta for p in names} if names else {}
    missing = [p for p in names if p not in values]
    if missing:
        raise DomainError(f"no value given for {', '.join(missing)}")
    return {p: ctx.mpf(v) for p, v in values.items()}


# -- exponentially decaying part ------------------------------------------------


def _decay_rate(term: SeriesTerm, hyp_exponent: int, thetas: dict, ctx: PrecisionContext):
    """Decay per unit of idx: the denominator rate minus hyperbolic theta growth.

    sin/cos factors are bounded by 1 and do not erode the rate.
    """
    delta = hyp_exponent * ctx.mpf(term.hyp_scale) * const_pi(ctx)
    for f in term.theta_factors:
        if f.hyperbolic:
            delta -= ctx.mpf(f.scale) * abs(thetas[f.param])
    return delta


def _shape_constant(shape: str, x0, mp):
    """A with |shape(x)| <= A e^{-k x} for every x >= x0 (k = decay exponent)."""
    q = mp.exp(-2 * x0)
    if shape in ("csch", "coth_minus_1"):
        return 2 / (1 - q)
    if shape in ("sech", "sinh_sech2", "tanh_minus_1"):
        return mp.mpf(2)
    if shape == "cosh_csch2":
        return 2 * mp.coth(x0) / (1 - q)
    if shape == "csch2":
        return 4 / (1 - q) ** 2
    if shape == "sech2":
        return mp.mpf(4)
    raise DomainError(f"no decay constant for shape {shape!r}")


def _shape_eval(shape: str, x, mp):
    if shape == "coth_minus_1":
        q = mp.exp(-2 * x)
        return 2 * q / (1 - q)
    if shape == "tanh_minus_1":
        q = mp.exp(-2 * x)
        return -2 * q / (1 + q)
    return hyp_value(shape, x, mp)


@dataclass(frozen=True)
class _Decaying:
    term: SeriesTerm
    shape: str
    exponent: int
    delta: object
    thetas: dict

    @property
    def step(self) -> int:
        return 1 if self.term.index is Index.N else 2


def _decaying(term: SeriesTerm, shape: str, exponent: int, thetas: dict, ctx: PrecisionContext) -> _Decaying:
    delta = _decay_rate(term, exponent, thetas, ctx)
    if delta <= 0:
        raise DivergentTerm(
            f"general term does not decay: delta = {ctx.mp.nstr(delta, 8)} <= 0", delta)
    return _Decaying(term, shape, exponent, delta, thetas)


def geometric_tail_bound(d: _Decaying, N: int, ctx: PrecisionContext):
    """Bound on |sum over n > N| of the weighted general term."""
    mp = ctx.mp
    t = d.term
    i0 = t.idx(N + 1)
    x0 = ctx.mpf(t.hyp_scale) * const_pi(ctx) * i0
    a = _shape_constant(d.shape, x0, mp)
    w = abs(t.weight.value(d.thetas, ctx))
    p = t.power
    first = w * a * mp.mpf(i0) ** p * mp.exp(-d.delta * i0)
    r = mp.exp(-d.delta * d.step)
    if p > 0:
        r *= (1 + mp.mpf(d.step) / i0) ** p
    if r >= 1:
        return mp.inf
    return first / (1 - r)


def _term_value(d: _Decaying, n: int, wval, ctx: PrecisionContext):
    mp = ctx.mp
    t = d.term
    i = t.idx(n)
    v = mp.mpf(i) ** t.power * _shape_eval(d.shape, ctx.mpf(t.hyp_scale) * i * const_pi(ctx), mp)
    for f in t.theta_factors:
        v *= f.value(i, d.thetas, ctx)
    return wval * t.sign.at(n) * v


def _sum_decaying(d: _Decaying, target, ctx: PrecisionContext, n_max: int):
    mp = ctx.mp
    wval = d.term.weight.value(d.thetas, ctx)
    total = mp.mpf(0)
    # skip ahead to where the bound can plausibly be met, then check each n
    n = 0
    est = int((-mp.log(target) / (d.delta * d.step))) if target < 1 else 0
    start = max(1, min(est // 2, n_max))
    while n < start:
        n += 1
        total += _term_value(d, n, wval, ctx)
    while True:
        bound = geometric_tail_bound(d, n, ctx)
        if bound <= target:
            return total, bound, n
        if n >= n_max:
            raise TargetUnreachable(
                f"tail bound {mp.nstr(bound, 5)} still above target after {n_max} terms", d.term)
        n += 1
        total += _term_value(d, n, wval, ctx)


# -- zeta and polylogarithms ----------------------------------------------------


def _rising(s, j: int):
    out = 1
    for i in range(j):
        out *= s + i
    return out


def _em_tail_complex(s: int, omega, N: int, M: int, ctx: PrecisionContext):
    """Sum over n > N of e^{i omega n}/n^s by Euler-Maclaurin with M corrections.

    Returns (complex value, remainder bound).  The remainder is bounded by
    2 zeta(2M)/(2 pi)^{2M} times the integral of |f^{(2M)}| over [N, oo).
    """
    mp = ctx.mp
    Nf = mp.mpf(N)
    if omega == 0:
        integral = Nf ** (1 - s) / (s - 1)
    else:
        integral = Nf ** (1 - s) * mp.expint(s, mp.mpc(0, -omega) * N)
    iw = mp.mpc(0, omega)
    phase = mp.expj(omega * N)

    def deriv(m: int):
        acc = 0
        for j in range(m + 1):
            acc += comb(m, j) * iw ** (m - j) * (-1) ** j * _rising(s, j) * Nf ** (-s - j)
        return phase * acc

    total = integral - phase * Nf ** (-s) / 2
    for j in range(1, M + 1):
        b = bernoulli(2 * j)
        total -= ctx.mpf(Fraction(b.numerator, b.denominator) / _fact(2 * j)) * deriv(2 * j - 1)
    aw = abs(ctx.mpf(omega))
    integral_bound = 0
    for j in range(2 * M + 1):
        integral_bound += comb(2 * M, j) * aw ** (2 * M - j) * _rising(s, j) * Nf ** (1 - s - j) / (s + j - 1)
    bound = 2 * zeta_even(M, ctx).value / (2 * const_pi(ctx)) ** (2 * M) * integral_bound
    return total, bound


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def zeta_value(s: int, ctx: PrecisionContext):
    """(zeta(s), error bound) for an integer s >= 2.

    Even arguments are exact; odd ones use Euler-Maclaurin with enough
    corrections to reach the working precision.
    """
    if s < 2:
        raise DomainError(f"zeta(s) needs s >= 2, got {s}")
    if s % 2 == 0:
        return zeta_even(s // 2, ctx).value, ctx.mpf(0)
    return _zeta_odd(s, ctx.bits, ctx.guard_bits)


_ZETA_CACHE: dict = {}


def _zeta_odd(s: int, bits: int, guard: int):
    key = (s, bits, guard)
    if key not in _ZETA_CACHE:
        from .numerics import context

        ctx = context(bits, guard)
        mp = ctx.mp
        N = 16 + bits // 8
        target = mp.ldexp(1, -(bits + guard // 2))
        head = mp.fsum(mp.mpf(n) ** (-s) for n in range(1, N + 1))
        M = 4
        while True:
            tail, bound = _em_tail_complex(s, 0, N, M, ctx)
            if bound <= target:
                break
            M += 4
        _ZETA_CACHE[key] = (head + mp.re(tail), bound)
    return _ZETA_CACHE[key]


def _zeta_at(s: int, ctx: PrecisionContext):
    """zeta(s) for any integer s != 1, with an error bound."""
    if s >= 2:
        return zeta_value(s, ctx)
    if s == 0:
        return ctx.mpf(-0.5), ctx.mpf(0)
    m = -s
    b = bernoulli(m + 1)
    return ctx.mpf((-1) ** m * Fraction(b.numerator, b.denominator) / (m + 1)), ctx.mpf(0)


def _reduce_phase(q: Fraction, extra, ctx: PrecisionContext):
    """phi = pi q + extra reduced to (-pi, pi]; exact when extra == 0."""
    pi = const_pi(ctx)
    if extra == 0:
        q = q % 2
        if q > 1:
            q -= 2
        return q, ctx.mpf(q) * pi
    phi = ctx.mpf(q) * pi + extra
    phi -= 2 * pi * ctx.mp.nint(phi / (2 * pi))
    if phi <= -pi:
        phi += 2 * pi
    return None, phi


def polylog_unit(s: int, q: Fraction, extra, ctx: PrecisionContext):
    """(Li_s(e^{i phi}), bound) for phi = pi q + extra and an integer s >= 1.

    Exact phases 0 and pi reduce to zeta values.  Other phases use

        Li_s(e^{i phi}) = sum_{k != s-1} zeta(s-k) (i phi)^k / k!
                          + (i phi)^{s-1}/(s-1)! (H_{s-1} - log(-i phi)),

    valid for 0 < |phi| < 2 pi.  Beyond k = s the terms are bounded by
    2 zeta(2)/(2 pi s!) |phi|^s rho^{k-s} with rho = |phi|/(2 pi).
    """
    mp = ctx.mp
    if s < 1:
        raise DivergentTerm(f"power sum with exponent {-s} >= 0 does not converge", ctx.mpf(0))
    exact, phi = _reduce_phase(Fraction(q), extra, ctx)
    if exact == 0:
        if s == 1:
            raise DivergentTerm("harmonic sum at phase 0 diverges", ctx.mpf(0))
        z, b = zeta_value(s, ctx)
        return mp.mpc(z), b
    if exact == 1:
        if s == 1:
            return mp.mpc(-mp.log(2)), ctx.mpf(0)
        z, b = zeta_value(s, ctx)
        f = 1 - mp.ldexp(1, 1 - s)
        return mp.mpc(-f * z), f * b
    pi = const_pi(ctx)
    aphi = abs(phi)
    rho = aphi / (2 * pi)
    target = mp.ldexp(1, -ctx.working_bits)
    log_term = mp.log(aphi) - mp.mpc(0, 1) * (pi / 2) * mp.sign(phi)
    harmonic = mp.fsum(mp.mpf(1) / j for j in range(1, s))
    ip = mp.mpc(0, phi)
    total = mp.mpc(0)
    err = mp.mpf(0)
    power = mp.mpc(1)  # (i phi)^k / k!
    k = 0
    C = 2 * zeta_even(1, ctx).value / (2 * pi * _fact(s)) * aphi**s
    while True:
        if k == s - 1:
            total += power * (harmonic - log_term)
        else:
            z, b = _zeta_at(s - k, ctx)
            total += z * power
            err += b * abs(power)
        k += 1
        power = power * ip / k
        m = k - s  # next unsummed index relative to s
        if m >= 1:
            tail = C * rho**m / (1 - rho)
            if tail <= target:
                return total, err + tail


def _odd_or_full(s: int, index: Index, q: Fraction, extra, ctx: PrecisionContext, evaluator):
    """Sum over idx of e^{i idx phi}/idx^s for idx = n or idx = 2n-1."""
    v, b = evaluator(s, q, extra)
    if index is Index.N:
        return v, b
    v2, b2 = evaluator(s, 2 * q, 2 * extra)
    scale = ctx.mp.ldexp(1, -s)
    return v - scale * v2, b + scale * b2


def _unit_components(term: SeriesTerm, thetas: dict, ctx: PrecisionContext):
    """Expand sign(n) * prod trig factors as sum c_j e^{i idx phi_j}.

    Each phase is kept as (rational multiple of pi, theta-dependent part).
    """
    mp = ctx.mp
    comps = [(mp.mpc(1), Fraction(0), ctx.mpf(0))]
    for f in term.theta_factors:
        if f.hyperbolic:
            raise DivergentTerm(
                f"{f.kind} theta factor multiplies a non-decaying unit part", ctx.mpf(0))
        w = ctx.mpf(f.scale) * thetas[f.param]
        if f.kind == "cos":
            pair = ((mp.mpc(0.5), w), (mp.mpc(0.5), -w))
        else:
            pair = ((mp.mpc(0, -0.5), w), (mp.mpc(0, 0.5), -w))
        comps = [(c * c2, q, e + e2) for c, q, e in comps for c2, e2 in pair]
    t = term.canonical()
    if t.sign is Sign.ALT:
        if t.index is Index.N:
            comps = [(c, q + 1, e) for c, q, e in comps]
        else:
            # (-1)^n = i e^{i pi idx / 2} when idx = 2n - 1
            comps = [(c * mp.mpc(0, 1), q + Fraction(1, 2), e) for c, q, e in comps]
    return t.weight.value(thetas, ctx), comps


def em_unit(s: int, q: Fraction, extra, N: int, M: int, ctx: PrecisionContext):
    """Li_s(e^{i phi}) by summing N terms and an Euler-Maclaurin tail."""
    mp = ctx.mp
    _, phi = _reduce_phase(Fraction(q), extra, ctx)
    head = mp.fsum(mp.expj(phi * n) / mp.mpf(n) ** s for n in range(1, N + 1))
    tail, bound = _em_tail_complex(s, phi, N, M, ctx)
    return head + tail, bound


def _unit_sum(term: SeriesTerm, thetas: dict, target, ctx: PrecisionContext, method: str, n_max: int):
    s = -term.power
    if s < 1:
        raise DivergentTerm(f"unit part n^{term.power} does not decay", ctx.mpf(0))
    wval, comps = _unit_components(term, thetas, ctx)
    mp = ctx.mp
    exact_phases = all(e == 0 for _, _, e in comps)
    used = 0
    if method == "split_euler_maclaurin":
        share = target / (2 * max(1, len(comps)) * (1 + abs(wval)))
        N, evaluator = _em_plan(s, term.index, comps, share, ctx, n_max)
        used = N
    else:
        def evaluator(s_, q, e):
            return polylog_unit(s_, q, e, ctx)
    total = mp.mpc(0)
    bound = mp.mpf(0)
    for c, q, e in comps:
        v, b = _odd_or_full(s, term.index, q, e, ctx, evaluator)
        total += c * v
        bound += abs(c) * b
    tag = "alternating" if exact_phases and term.canonical().sign is Sign.ALT else None
    return wval * mp.re(total), abs(wval) * bound, used, tag


def _em_plan(s: int, index: Index, comps, share, ctx: PrecisionContext, n_max: int):
    """Choose N so that every Euler-Maclaurin tail is below share."""
    phases = []
    for _, q, e in comps:
        for k in ((1, 2) if index is Index.ODD else (1,)):
            exact, phi = _reduce_phase(k * q, k * e, ctx)
            if exact not in (0, 1):
                phases.append(abs(phi))
    worst = max(phases, default=ctx.mpf(0))
    N = max(16, int(4 * worst) + 1)
    M = EM_CORRECTIONS
    while True:
        for M in range(EM_CORRECTIONS, 9):
            _, b = _em_tail_complex(s, worst, N, M, ctx)
            if b <= share:
                break
        if b <= share:
            break
        if N >= n_max:
            raise TargetUnreachable(
                f"Euler-Maclaurin remainder {ctx.mp.nstr(b, 5)} above target at N = {n_max}", None)
        N = min(2 * N, n_max)

    def evaluator(s_, q, e):
        # phases 0 and pi are zeta values; only genuine oscillation goes through EM
        if _reduce_phase(q, e, ctx)[0] in (0, 1):
            return polylog_unit(s_, q, e, ctx)
        return em_unit(s_, q, e, N, M, ctx)

    return N, evaluator


# -- public entry points -------------------------------------------------------


def sum_term(term: SeriesTerm, theta=0, target_error=None, ctx: PrecisionContext | None = None,
             n_max: int = N_MAX, method: str | None = None) -> SumResult:
    """Sum term over n >= 1 with a rigorous truncation bound below target_error.

    theta may be a number (every parameter), a tuple in sorted parameter order
    or a dict.  method selects the unit-part route for coth/tanh terms:
    "split_polylog" (default) or "split_euler_maclaurin".
    """
    from .numerics import context

    ctx = ctx or context()
    target = ctx.mpf(target_error) if target_error is not None else ctx.eps
    if target <= 0:
        raise DomainError("target_error must be positive")
    if method not in (None, "split_polylog", "split_euler_maclaurin"):
        raise DomainError(f"unknown method {method!r}")
    thetas = _param_values(term, theta, ctx)
    conv = term.convergence
    if conv == "E":
        d = _decaying(term, term.hyp, HYP_SHAPES[term.hyp], thetas, ctx)
        value, bound, n = _sum_decaying(d, target, ctx, n_max)
        return SumResult(value, bound, n, "geometric")
    if conv == "none":
        value, bound, used, tag = _unit_sum(term, thetas, target / 2, ctx, method or "split_polylog", n_max)
        return SumResult(value, bound, used, tag or method or "split_polylog")
    # coth/tanh: unit part + exponentially small correction
    unit = replace(term, hyp=None)
    value, bound, used, tag = _unit_sum(unit, thetas, target / 2, ctx, method or "split_polylog", n_max)
    d = _decaying(term, term.hyp + "_minus_1", 2, thetas, ctx)
    cvalue, cbound, n = _sum_decaying(d, target / 2, ctx, n_max)
    return SumResult(value + cvalue, bound + cbound, max(used, n), tag or method or "split_polylog")


def em_tail(s: int, a, trig: str, theta, N: int, M: int = EM_CORRECTIONS, ctx: PrecisionContext | None = None):
    """(sum over n > N of trig(a n theta)/n^s, remainder bound).

    theta = 0 and a*theta = pi are handled exactly through zeta values, which
    also allows N = 0 there.  A theta within 2^-48 relative of pi counts as pi
    so that a double-precision pi selects the exact route.
    """
    from .numerics import context

    ctx = ctx or context()
    mp = ctx.mp
    if not isinstance(s, int) or s < 2:
        raise DomainError("em_tail needs an integer s >= 2")
    if Fraction(a) not in (1, Fraction(1, 2)):
        raise DomainError("a must be 1 or 1/2")
    if trig not in ("sin", "cos"):
        raise DomainError("trig must be sin or cos")
    if not isinstance(N, int) or N < 0:
        raise DomainError("N must be a non-negative integer")
    omega = ctx.mpf(Fraction(a)) * ctx.mpf(theta)
    pi = const_pi(ctx)
    special = None
    if omega == 0:
        special = Fraction(0)
    elif abs(abs(omega) - pi) <= mp.ldexp(pi, -48):  # a double-precision pi means pi
        special = Fraction(1)
    if special is not None:
        if trig == "sin":
            return ctx.mpf(0), ctx.mpf(0)
        full, bound = polylog_unit(s, special, 0, ctx)
        sign = -1 if special else 1
        head = mp.fsum(mp.mpf(sign) ** n / mp.mpf(n) ** s for n in range(1, N + 1))
        return mp.re(full) - head, bound
    if N < max(10, 4 * abs(ctx.mpf(theta))):
        raise DomainError(f"N must be at least max(10, 4|theta|), got {N}")
    if not 1 <= M <= 8:
        raise DomainError("M must lie in 1..8")
    value, bound = _em_tail_complex(s, omega, N, M, ctx)
    return (mp.re(value) if trig == "cos" else mp.im(value)), bound

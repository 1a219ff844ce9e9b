"""Truncated Laurent series around lattice points of the complex plane.

A series is stored as its lowest degree plus a tuple of complex coefficients,
one per degree up to ``max_degree``; everything above ``max_degree`` is
unknown.  Arithmetic keeps track of how far each result is actually
determined, so a residue read off a product is never polluted by truncation.

Expansions come in two flavours:

* closed-form expansions of the eight kernels at their poles, with
  coefficients built from exact even zeta values;
* Taylor reconstructions (angle-addition shifted sine, cosine, sinh, cosh)
  for everything else, combined through series reciprocals.

The two routes must agree where both apply, which the test-suite exploits.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial

from .errors import DomainError, UnsupportedPole, ZeroDivisor
from .numerics import PrecisionContext, const_pi
from .special import zeta_bar_even, zeta_even


class FamilyKind(str, Enum):
    INTEGERS = "integers"
    HALF_ODD = "half_odd_integers"
    IMAG_INTEGERS = "imaginary_integers"
    IMAG_HALF_ODD = "imaginary_half_odd"
    ORIGIN = "origin"

    @property
    def imaginary(self) -> bool:
        return self in (FamilyKind.IMAG_INTEGERS, FamilyKind.IMAG_HALF_ODD)

    @property
    def half_odd(self) -> bool:
        return self in (FamilyKind.HALF_ODD, FamilyKind.IMAG_HALF_ODD)


@dataclass(frozen=True, order=True)
class Point:
    """A member of a pole family: +-n, +-(2n-1)/2 and their multiples of i, or 0."""

    kind: FamilyKind
    n: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.kind is FamilyKind.ORIGIN:
            if self.n != 0:
                raise DomainError("the origin family has a single member, n = 0")
        elif self.n < 1:
            raise DomainError(f"family members are indexed by n >= 1, got {self.n}")
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")

    @property
    def offset(self) -> Fraction:
        """Signed position along the real or imaginary axis."""
        if self.kind is FamilyKind.ORIGIN:
            return Fraction(0)
        if self.kind.half_odd:
            return self.sign * Fraction(2 * self.n - 1, 2)
        return Fraction(self.sign * self.n)

    @property
    def lattice_index(self) -> int:
        """The integer m with offset m (integer lattices) or (2m-1)/2 (half-odd lattices)."""
        if self.kind.half_odd:
            return int((2 * self.offset + 1) / 2)
        return int(self.offset)

    @property
    def on_real_lattice(self) -> bool:
        return self.kind in (FamilyKind.INTEGERS, FamilyKind.ORIGIN)

    @property
    def on_imag_lattice(self) -> bool:
        return self.kind in (FamilyKind.IMAG_INTEGERS, FamilyKind.ORIGIN)

    def value(self, ctx: PrecisionContext):
        off = ctx.mpf(self.offset)
        return ctx.mpc(0, off) if self.kind.imaginary else ctx.mpc(off, 0)


ORIGIN = Point(FamilyKind.ORIGIN)


@dataclass(frozen=True)
class LaurentSeries:
    center: Point
    min_degree: int
    coeffs: tuple
    max_degree: int

    def __post_init__(self):
        if len(self.coeffs) != self.max_degree - self.min_degree + 1:
            raise ValueError("coefficient count does not match the degree range")

    @staticmethod
    def make(center: Point, min_degree: int, coeffs, max_degree: int | None = None) -> "LaurentSeries":
        coeffs = list(coeffs)
        if max_degree is None:
            max_degree = min_degree + len(coeffs) - 1
        coeffs = coeffs[: max_degree - min_degree + 1]
        if coeffs and len(coeffs) < max_degree - min_degree + 1:
            coeffs += [coeffs[0] * 0] * (max_degree - min_degree + 1 - len(coeffs))
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            min_degree += 1
        if not coeffs:
            min_degree = max_degree + 1
        return LaurentSeries(center, min_degree, tuple(coeffs), max_degree)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, degree: int):
        if degree > self.max_degree:
            raise ValueError(f"degree {degree} is beyond the truncation degree {self.max_degree}")
        if degree < self.min_degree:
            return 0
        return self.coeffs[degree - self.min_degree]

    def residue(self):
        return self.coeff(-1)

    def truncate(self, max_degree: int) -> "LaurentSeries":
        if max_degree >= self.max_degree:
            return self
        return LaurentSeries.make(self.center, self.min_degree, self.coeffs, max_degree)

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries.make(self.center, self.min_degree, [c * a for a in self.coeffs], self.max_degree)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x**k."""
        return LaurentSeries(self.center, self.min_degree + k, self.coeffs, self.max_degree + k)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def evaluate(self, x):
        total = 0
        for j, c in enumerate(self.coeffs):
            total += c * x ** (self.min_degree + j)
        return total


def _check_center(a: LaurentSeries, b: LaurentSeries) -> None:
    if a.center != b.center:
        raise DomainError(f"series centred at {a.center} and {b.center} cannot be combined")


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    _check_center(a, b)
    top = min(a.max_degree, b.max_degree)
    low = min(a.min_degree, b.min_degree)
    coeffs = [a.coeff(d) + b.coeff(d) for d in range(low, top + 1)] if low <= top else []
    return LaurentSeries.make(a.center, low, coeffs, top)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    _check_center(a, b)
    top = min(a.max_degree + b.min_degree, b.max_degree + a.min_degree)
    low = a.min_degree + b.min_degree
    if a.is_zero or b.is_zero or low > top:
        return LaurentSeries.make(a.center, top + 1, [], top)
    out = []
    for d in range(low, top + 1):
        s = 0
        for i in range(a.min_degree, d - b.min_degree + 1):
            if i > a.max_degree:
                break
            s += a.coeffs[i - a.min_degree] * b.coeffs[d - i - b.min_degree]
        out.append(s)
    return LaurentSeries.make(a.center, low, out, top)


def series_reciprocal(a: LaurentSeries, ctx: PrecisionContext) -> LaurentSeries:
    """1/a, determined to the same relative order as a."""
    if a.is_zero:
        raise ZeroDivisor("reciprocal of an identically zero series")
    lead = a.coeffs[0]
    if abs(lead) < ctx.mp.ldexp(1, -ctx.bits + 4):
        raise ZeroDivisor(f"leading coefficient {ctx.mp.nstr(abs(lead), 5)} is numerically zero")
    length = len(a.coeffs)
    inv = [1 / lead]
    for k in range(1, length):
        s = 0
        for j in range(1, k + 1):
            s += a.coeffs[j] * inv[k - j]
        inv.append(-s / lead)
    return LaurentSeries.make(a.center, -a.min_degree, inv, -a.min_degree + length - 1)


def series_div(a: LaurentSeries, b: LaurentSeries, ctx: PrecisionContext) -> LaurentSeries:
    return series_mul(a, series_reciprocal(b, ctx))


# --- Taylor reconstructions -------------------------------------------------

TRIG_KINDS = ("sin", "cos", "sinh", "cosh")


def _pi_values(point: Point, ctx: PrecisionContext) -> dict:
    """sin, cos, sinh, cosh of pi*c at a lattice point, with the exact zeros exact."""
    mp = ctx.mp
    pi = const_pi(ctx)
    m = point.lattice_index
    sgn = -1 if m % 2 else 1  # (-1)**m
    zero = mp.mpc(0)
    if point.kind is FamilyKind.ORIGIN:
        return {"sin": zero, "cos": mp.mpc(1), "sinh": zero, "cosh": mp.mpc(1)}
    y = pi * ctx.mpf(point.offset)
    if point.kind is FamilyKind.INTEGERS:
        return {"sin": zero, "cos": mp.mpc(sgn), "sinh": mp.mpc(mp.sinh(y)), "cosh": mp.mpc(mp.cosh(y))}
    if point.kind is FamilyKind.HALF_ODD:
        return {"sin": mp.mpc(-sgn), "cos": zero, "sinh": mp.mpc(mp.sinh(y)), "cosh": mp.mpc(mp.cosh(y))}
    if point.kind is FamilyKind.IMAG_INTEGERS:
        return {"sin": mp.mpc(0, mp.sinh(y)), "cos": mp.mpc(mp.cosh(y)), "sinh": zero, "cosh": mp.mpc(sgn)}
    # imaginary half-odd
    return {"sin": mp.mpc(0, mp.sinh(y)), "cos": mp.mpc(mp.cosh(y)), "sinh": mp.mpc(0, -sgn), "cosh": zero}


def _values_at(scale, point: Point, ctx: PrecisionContext, exact_pi: bool) -> dict:
    if exact_pi:
        return _pi_values(point, ctx)
    mp = ctx.mp
    w = scale * point.value(ctx)
    return {"sin": mp.sin(w), "cos": mp.cos(w), "sinh": mp.sinh(w), "cosh": mp.cosh(w)}


def taylor_shift(kind: str, scale, point: Point, max_degree: int, ctx: PrecisionContext,
                 exact_pi: bool = False) -> LaurentSeries:
    """Taylor series of kind(scale * (c + x)) in the local variable x around c."""
    if kind not in TRIG_KINDS:
        raise DomainError(f"unknown factor {kind!r}")
    mp = ctx.mp
    scale = ctx.mpf(scale)
    v = _values_at(scale, point, ctx, exact_pi)
    hyperbolic = kind.endswith("h")
    # kind(A + B) = p * even(B) + q * odd(B), with even/odd = cos/sin or cosh/sinh
    if kind == "sin":
        p, q = v["sin"], v["cos"]
    elif kind == "cos":
        p, q = v["cos"], -v["sin"]
    elif kind == "sinh":
        p, q = v["sinh"], v["cosh"]
    else:
        p, q = v["cosh"], v["sinh"]
    coeffs = []
    power = mp.mpf(1)
    for d in range(max_degree + 1):
        sign = 1 if hyperbolic or (d // 2) % 2 == 0 else -1
        term = sign * power / factorial(d)
        coeffs.append((p if d % 2 == 0 else q) * term)
        power *= scale
    return LaurentSeries.make(point, 0, coeffs, max_degree)


def z_power_series(q: int, point: Point, max_degree: int, ctx: PrecisionContext) -> LaurentSeries:
    """z**(-q) around the point, for q >= 0."""
    if point.kind is FamilyKind.ORIGIN:
        return LaurentSeries.make(point, -q, [ctx.mpc(1)], max_degree)
    c = point.value(ctx)
    poly = [ctx.mpc(1)]
    for _ in range(q):  # multiply by (c + x)
        poly = [c * poly[0]] + [c * poly[i] + poly[i - 1] for i in range(1, len(poly))] + [poly[-1]]
    poly = poly + [ctx.mpc(0)] * max(0, max_degree + 1 - len(poly))
    return series_reciprocal(LaurentSeries.make(point, 0, poly, max_degree), ctx)


# --- kernel expansions ------------------------------------------------------

KERNELS = ("pi_csc", "pi_sec", "pi_cot", "pi_tan", "pi_csch", "pi_sech", "pi_coth", "pi_tanh")

# numerator / denominator of kernel/pi as functions of pi*z
_KERNEL_PARTS = {
    "pi_csc": (None, "sin"),
    "pi_sec": (None, "cos"),
    "pi_cot": ("cos", "sin"),
    "pi_tan": ("sin", "cos"),
    "pi_csch": (None, "sinh"),
    "pi_sech": (None, "cosh"),
    "pi_coth": ("cosh", "sinh"),
    "pi_tanh": ("sinh", "cosh"),
}


def kernel_has_pole(kernel: str, point: Point) -> bool:
    if kernel in ("pi_csc", "pi_cot"):
        return point.on_real_lattice
    if kernel in ("pi_sec", "pi_tan"):
        return point.kind is FamilyKind.HALF_ODD
    if kernel in ("pi_csch", "pi_coth"):
        return point.on_imag_lattice
    if kernel in ("pi_sech", "pi_tanh"):
        return point.kind is FamilyKind.IMAG_HALF_ODD
    raise UnsupportedPole(f"unknown kernel {kernel!r}")


def pole_expansion(kernel: str, point: Point, max_degree: int, ctx: PrecisionContext) -> LaurentSeries:
    """Closed-form principal expansion of a kernel at one of its poles."""
    if not kernel_has_pole(kernel, point):
        raise UnsupportedPole(f"{kernel} has no pole at {point}")
    mp = ctx.mp
    m = point.lattice_index
    parity = -1 if m % 2 else 1
    if kernel in ("pi_cot", "pi_coth", "pi_tanh"):
        lead, zeta, alt, prefactor = 1, zeta_even, kernel != "pi_cot", 1
        odd_sign = -1
    elif kernel == "pi_tan":
        lead, zeta, alt, prefactor = -1, zeta_even, False, 1
        odd_sign = 1
    elif kernel in ("pi_csc", "pi_sec"):
        lead, zeta, alt, prefactor = 1, zeta_bar_even, False, parity
        odd_sign = 1
    elif kernel == "pi_csch":
        lead, zeta, alt, prefactor = 1, zeta_bar_even, True, parity
        odd_sign = 1
    else:  # pi_sech
        lead, zeta, alt, prefactor = 1, zeta_bar_even, True, mp.mpc(0, parity)
        odd_sign = 1
    coeffs = [mp.mpc(lead)]
    for d in range(0, max_degree + 1):
        if d % 2 == 0:
            coeffs.append(mp.mpc(0))
            continue
        k = (d + 1) // 2
        c = 2 * odd_sign * zeta(k, ctx).value
        if alt and k % 2:
            c = -c
        coeffs.append(mp.mpc(c))
    series = LaurentSeries.make(point, -1, coeffs, max_degree)
    return series.scale(prefactor) if prefactor != 1 else series


def taylor_kernel(kernel: str, point: Point, max_degree: int, ctx: PrecisionContext) -> LaurentSeries:
    """Kernel expansion from Taylor reconstructions of its numerator and denominator."""
    num_kind, den_kind = _KERNEL_PARTS[kernel]
    pi = const_pi(ctx)
    depth = max_degree + 3
    den = taylor_shift(den_kind, pi, point, depth, ctx, exact_pi=True)
    result = series_reciprocal(den, ctx)
    if num_kind is not None:
        result = series_mul(taylor_shift(num_kind, pi, point, depth, ctx, exact_pi=True), result)
    return result.scale(pi).truncate(max_degree)


@dataclass(frozen=True)
class ExpansionRequest:
    """What to expand, where, and how far.

    ``function_id`` is a kernel name (see ``KERNELS``), a base-function name
    (see ``BASES``) or a theta factor ``"<kind>:<param>"`` such as ``"cosh:0"``.
    ``max_degree`` is the highest degree retained in the result.
    """

    function_id: str
    point: Point
    thetas: tuple = ()
    max_degree: int = 2


def expand_kernel(req: ExpansionRequest, ctx: PrecisionContext) -> LaurentSeries:
    if req.function_id not in KERNELS:
        raise UnsupportedPole(f"{req.function_id!r} is not a kernel")
    if kernel_has_pole(req.function_id, req.point):
        return pole_expansion(req.function_id, req.point, req.max_degree, ctx)
    return taylor_kernel(req.function_id, req.point, req.max_degree, ctx)


# --- base functions ---------------------------------------------------------


@dataclass(frozen=True)
class BaseFunction:
    """pi**2 * prod(numerator factors) / (z**z_power * H(pi z)**2)."""

    name: str
    numerator: tuple  # ((kind, param), ...) with kind in sinh/cosh/sin/cos of theta_param * z
    hyp: str  # "sinh" or "cosh"
    z_power: int = 0

    def has_hyp_pole(self, point: Point) -> bool:
        if self.hyp == "sinh":
            return point.on_imag_lattice
        return point.kind is FamilyKind.IMAG_HALF_ODD

    @property
    def parameters(self) -> int:
        return 1 + max(p for _, p in self.numerator)


BASES = {
    b.name: b
    for b in (
        BaseFunction("cosh/sinh^2", (("cosh", 0),), "sinh"),
        BaseFunction("sinh/cosh^2", (("sinh", 0),), "cosh"),
        BaseFunction("cosh/cosh^2", (("cosh", 0),), "cosh"),
        BaseFunction("sinh/sinh^2", (("sinh", 0),), "sinh"),
        BaseFunction("cosh/(z^2 sinh^2)", (("cosh", 0),), "sinh", 2),
        BaseFunction("cosh/(z^2 cosh^2)", (("cosh", 0),), "cosh", 2),
        BaseFunction("cosh cos/sinh^2", (("cosh", 0), ("cos", 1)), "sinh"),
    )
}


def _theta(thetas, param: int, ctx: PrecisionContext):
    try:
        return ctx.mpf(thetas[param])
    except IndexError:
        raise DomainError(f"missing value for theta parameter {param}") from None


def expand_theta_factor(kind: str, param: int, point: Point, thetas, max_degree: int,
                        ctx: PrecisionContext) -> LaurentSeries:
    return taylor_shift(kind, _theta(thetas, param, ctx), point, max_degree, ctx)


def expand_base(req: ExpansionRequest, ctx: PrecisionContext) -> LaurentSeries:
    if req.function_id.count(":") == 1 and req.function_id.split(":")[0] in TRIG_KINDS:
        kind, param = req.function_id.split(":")
        return expand_theta_factor(kind, int(param), req.point, req.thetas, req.max_degree, ctx)
    try:
        base = BASES[req.function_id]
    except KeyError:
        raise UnsupportedPole(f"unknown base function {req.function_id!r}") from None
    return base_series(base, req.point, req.thetas, req.max_degree, ctx)


def base_series(base: BaseFunction, point: Point, thetas, max_degree: int,
                ctx: PrecisionContext) -> LaurentSeries:
    pi = const_pi(ctx)
    at_origin = point.kind is FamilyKind.ORIGIN
    hyp_pole = base.has_hyp_pole(point)
    h_min = -2 if hyp_pole else 0
    z_min = -base.z_power if at_origin else 0
    if hyp_pole:
        kernel = "pi_csch" if base.hyp == "sinh" else "pi_sech"
        half = pole_expansion(kernel, point, max_degree - z_min + 1, ctx)
        hyp_part = series_mul(half, half)
    else:
        depth = max_degree - z_min
        h = taylor_shift(base.hyp, pi, point, depth, ctx, exact_pi=True)
        hyp_part = series_reciprocal(series_mul(h, h), ctx).scale(pi**2)
    result = hyp_part
    if base.z_power:
        result = series_mul(result, z_power_series(base.z_power, point, max_degree - h_min, ctx))
    for kind, param in base.numerator:
        factor = expand_theta_factor(kind, param, point, thetas, max_degree - h_min - z_min, ctx)
        result = series_mul(result, factor)
    return result.truncate(max_degree)


# --- direct evaluation ------------------------------------------------------


def kernel_value(kernel: str, z, ctx: PrecisionContext):
    mp = ctx.mp
    num_kind, den_kind = _KERNEL_PARTS[kernel]
    w = const_pi(ctx) * z
    value = const_pi(ctx) / getattr(mp, den_kind)(w)
    if num_kind is not None:
        value *= getattr(mp, num_kind)(w)
    return value


def base_value(base: BaseFunction, z, thetas, ctx: PrecisionContext):
    mp = ctx.mp
    pi = const_pi(ctx)
    value = pi**2 / getattr(mp, base.hyp)(pi * z) ** 2
    if base.z_power:
        value /= z**base.z_power
    for kind, param in base.numerator:
        value *= getattr(mp, kind)(_theta(thetas, param, ctx) * z)
    return value

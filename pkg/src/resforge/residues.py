"""Pole catalogues of the combined functions and numeric residue extraction."""

from __future__ import annotations

from dataclasses import dataclass

from mpmath.calculus.quadrature import GaussLegendre

from .errors import DomainError, PoleOrderMismatch, QuadratureFailure, UnsupportedPole
from .laurent import (
    BASES,
    ORIGIN,
    BaseFunction,
    ExpansionRequest,
    FamilyKind,
    LaurentSeries,
    Point,
    base_series,
    base_value,
    expand_kernel,
    kernel_value,
    series_mul,
)
from .numerics import PrecisionContext, const_pi


@dataclass(frozen=True)
class PoleFamily:
    kind: FamilyKind

    @property
    def includes_zero(self) -> bool:
        return self.kind is FamilyKind.ORIGIN

    def member(self, n: int = 0, sign: int = 1) -> Point:
        return Point(self.kind, n, sign)


@dataclass(frozen=True)
class CombinedFunction:
    id: str
    kernel: str
    base: BaseFunction
    catalog: tuple  # ((FamilyKind, order), ...)

    @property
    def parameters(self) -> int:
        return self.base.parameters


_O, _I, _H = FamilyKind.ORIGIN, FamilyKind.INTEGERS, FamilyKind.HALF_ODD
_II, _IH = FamilyKind.IMAG_INTEGERS, FamilyKind.IMAG_HALF_ODD

FUNCTIONS = {
    f.id: f
    for f in (
        CombinedFunction("f1", "pi_csc", BASES["cosh/sinh^2"], ((_O, 3), (_I, 1), (_II, 2))),
        CombinedFunction("f2", "pi_sec", BASES["sinh/cosh^2"], ((_H, 1), (_IH, 2))),
        CombinedFunction("f3", "pi_csc", BASES["cosh/cosh^2"], ((_O, 1), (_I, 1), (_IH, 2))),
        CombinedFunction("f4", "pi_sec", BASES["sinh/sinh^2"], ((_O, 1), (_H, 1), (_II, 2))),
        CombinedFunction("g1", "pi_cot", BASES["cosh/(z^2 sinh^2)"], ((_O, 5), (_I, 1), (_II, 2))),
        CombinedFunction("g2", "pi_tan", BASES["cosh/(z^2 cosh^2)"], ((_O, 1), (_H, 1), (_IH, 2))),
        CombinedFunction("g3", "pi_cot", BASES["cosh/(z^2 cosh^2)"], ((_O, 3), (_I, 1), (_IH, 2))),
        CombinedFunction("g4", "pi_tan", BASES["cosh/(z^2 sinh^2)"], ((_O, 3), (_H, 1), (_II, 2))),
        CombinedFunction("F", "pi_csc", BASES["cosh cos/sinh^2"], ((_O, 3), (_I, 1), (_II, 2))),
    )
}


def combined(function_id: str) -> CombinedFunction:
    try:
        return FUNCTIONS[function_id]
    except KeyError:
        raise DomainError(f"unknown function id {function_id!r}; expected one of {', '.join(FUNCTIONS)}") from None


def pole_catalog(function_id: str) -> list[tuple[PoleFamily, int]]:
    return [(PoleFamily(kind), order) for kind, order in combined(function_id).catalog]


def catalog_order(function_id: str, kind: FamilyKind) -> int:
    for k, order in combined(function_id).catalog:
        if k is kind:
            return order
    raise UnsupportedPole(f"{function_id} has no poles in the {kind.value} family")


def _check_thetas(fn: CombinedFunction, thetas, ctx: PrecisionContext) -> tuple:
    if not isinstance(thetas, (tuple, list)):
        thetas = (thetas,)
    if len(thetas) != fn.parameters:
        raise DomainError(f"{fn.id} takes {fn.parameters} theta parameter(s), got {len(thetas)}")
    pi = const_pi(ctx)
    values = tuple(ctx.mpf(t) for t in thetas)
    if any(abs(t) >= pi for t in values):
        raise DomainError("theta parameters must lie in (-pi, pi)")
    return values


def laurent_at(function_id: str, point: Point, thetas, ctx: PrecisionContext,
               max_degree: int = -1) -> LaurentSeries:
    """Laurent expansion of kernel x base at a point, determined through max_degree."""
    fn = combined(function_id)
    thetas = _check_thetas(fn, thetas, ctx)
    # kernel min degree >= -1; base min degree >= -(2 + z_power)
    base_low = -(2 + fn.base.z_power)
    k = expand_kernel(ExpansionRequest(fn.kernel, point, thetas, max_degree - base_low), ctx)
    b = base_series(fn.base, point, thetas, max_degree + 1, ctx)
    return series_mul(k, b).truncate(max_degree)


def residue_at(function_id: str, family: PoleFamily | FamilyKind, n: int, thetas,
               ctx: PrecisionContext, sign: int = 1):
    """Residue of a combined function at member n of a pole family (complex value).

    The pole order read off the expansion is compared with the catalogue; an
    order above the catalogued one raises :class:`PoleOrderMismatch`.  Lower
    orders are legitimate at special parameter values (for instance a
    ``sinh(theta z)`` numerator at theta = 0).
    """
    kind = family.kind if isinstance(family, PoleFamily) else FamilyKind(family)
    order = catalog_order(function_id, kind)
    point = ORIGIN if kind is FamilyKind.ORIGIN else Point(kind, n, sign)
    series = laurent_at(function_id, point, thetas, ctx)
    inferred = max(0, -series.min_degree) if not series.is_zero else 0
    if inferred > order:
        raise PoleOrderMismatch(
            f"{function_id} at {point}: expansion has a pole of order {inferred}, catalogue says {order}"
        )
    return series.residue()


def inferred_order(function_id: str, point: Point, thetas, ctx: PrecisionContext) -> int:
    series = laurent_at(function_id, point, thetas, ctx)
    return 0 if series.is_zero else max(0, -series.min_degree)


def evaluate(function_id: str, z, thetas, ctx: PrecisionContext):
    fn = combined(function_id)
    thetas = _check_thetas(fn, thetas, ctx)
    z = ctx.mp.mpc(z)
    return kernel_value(fn.kernel, z, ctx) * base_value(fn.base, z, thetas, ctx)


def points_inside(function_id: str, radius) -> list[Point]:
    """Every catalogued pole strictly inside |z| = radius (both signs)."""
    points = []
    for kind, _ in combined(function_id).catalog:
        if kind is FamilyKind.ORIGIN:
            points.append(ORIGIN)
            continue
        n = 1
        while True:
            p = Point(kind, n)
            if float(abs(p.offset)) >= float(radius):
                break
            points.extend([p, Point(kind, n, -1)])
            n += 1
    return points


def residue_sum_inside(function_id: str, thetas, radius, ctx: PrecisionContext):
    total = 0
    for p in points_inside(function_id, radius):
        total += laurent_at(function_id, p, thetas, ctx).residue()
    return total


def contour_integral(function_id: str, thetas, radius, ctx: PrecisionContext,
                     max_level: int = 14):
    """(1/2 pi i) times the integral of f over |z| = radius.

    Composite Gauss-Legendre on the angle, doubling the number of panels until
    two successive levels agree to 2**(-bits/2).
    """
    mp = ctx.mp
    fn = combined(function_id)
    thetas = _check_thetas(fn, thetas, ctx)
    rho = ctx.mpf(radius)
    for p in points_inside(function_id, rho + 1):
        if abs(abs(ctx.mpf(p.offset)) - rho) < ctx.eps:
            raise DomainError(f"radius {radius} passes through the pole {p}")
    nodes = GaussLegendre(mp).calc_nodes(3, mp.prec)  # 12-point rule on [-1, 1]
    two_pi = 2 * const_pi(ctx)
    tol = mp.ldexp(1, -ctx.bits // 2)

    def level(panels: int):
        h = two_pi / panels
        total = 0
        for j in range(panels):
            mid = (j + mp.mpf(0.5)) * h
            for x, w in nodes:
                t = mid + x * h / 2
                z = rho * mp.expj(t)
                total += w * evaluate(function_id, z, thetas, ctx) * z
        return total * (h / 2) / two_pi

    panels = 8
    previous = level(panels)
    for _ in range(max_level):
        panels *= 2
        current = level(panels)
        if abs(current - previous) <= tol:
            return current
        previous = current
    raise QuadratureFailure(f"contour quadrature at radius {radius} did not settle below 2^-{ctx.bits // 2}")


def contour_check(function_id: str, thetas, N: int, ctx: PrecisionContext):
    """Magnitude of the contour integral over |z| = N + 1/2."""
    return abs(contour_integral(function_id, thetas, ctx.mpf(N) + ctx.mpf(0.5), ctx))

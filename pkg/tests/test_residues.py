import pytest

from resforge.errors import DomainError, UnsupportedPole
from resforge.laurent import ORIGIN, FamilyKind, Point
from resforge.residues import (
    FUNCTIONS, catalog_order, contour_check, inferred_order, pole_catalog, residue_at,
    residue_sum_inside,
)

# Residue of pi/sin(pi z) * pi^2/sinh(pi z)^2 at z = 1, frozen from an mpmath
# quadrature over a small circle at 60 digits.
F1_RESIDUE_AT_ONE = "-0.0739998067544724"


def test_catalog_orders():
    assert catalog_order("f1", FamilyKind.ORIGIN) == 3
    assert catalog_order("g1", FamilyKind.ORIGIN) == 5
    assert catalog_order("f2", FamilyKind.IMAG_HALF_ODD) == 2
    assert [o for _, o in pole_catalog("f3")] == [1, 1, 2]
    with pytest.raises(UnsupportedPole):
        catalog_order("f2", FamilyKind.INTEGERS)
    with pytest.raises(DomainError):
        pole_catalog("h9")


@pytest.mark.parametrize("fid", sorted(FUNCTIONS))
def test_inferred_orders_match_catalog(ctx, fid):
    thetas = (ctx.mpf("0.75"), ctx.mpf("0.25"))[: FUNCTIONS[fid].parameters]
    for kind, order in FUNCTIONS[fid].catalog:
        p = ORIGIN if kind is FamilyKind.ORIGIN else Point(kind, 2)
        assert inferred_order(fid, p, thetas, ctx) == order, (fid, kind)


def test_f1_residue_frozen(ctx):
    r = residue_at("f1", FamilyKind.INTEGERS, 1, (0,), ctx)
    assert abs(r.imag) < ctx.eps
    assert abs(r.real - ctx.mpf(F1_RESIDUE_AT_ONE)) < 1e-15


def test_f1_residue_against_contour_quadrature(ctx):
    mp = ctx.mp
    from resforge.residues import evaluate
    center = mp.mpc(1)
    rad = mp.mpf("0.25")
    integral = mp.quad(lambda t: evaluate("f1", center + rad * mp.expj(t), (ctx.mpf(1),), ctx)
                       * rad * mp.expj(t), [0, mp.pi, 2 * mp.pi]) / (2 * mp.pi)
    r = residue_at("f1", FamilyKind.INTEGERS, 1, (1,), ctx)
    assert abs(integral - r) < mp.mpf(10) ** -40


def test_missing_theta_is_domain_error(ctx):
    with pytest.raises(DomainError):
        residue_at("F", FamilyKind.INTEGERS, 1, (1,), ctx)


def test_contour_check_decays(ctx128):
    small = contour_check("f1", (1,), 10, ctx128)
    large = contour_check("f1", (1,), 20, ctx128)
    assert small <= 1e-6
    assert large < small


def test_residue_sum_matches_contour(ctx128):
    from resforge.residues import contour_integral
    total = residue_sum_inside("g2", (ctx128.mpf("0.5"),), ctx128.mpf("3.2"), ctx128)
    assert abs(total - contour_integral("g2", (ctx128.mpf("0.5"),), ctx128.mpf("3.2"), ctx128)) < 1e-25

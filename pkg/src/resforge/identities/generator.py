"""Recover series identities from the residues of the combined functions.

The residues of kernel x base over all poles add up to zero.  For every pole
family the residues at +n and -n are added and the result, as a function of n
and theta, is matched against a finite grammar:

    sum over slots  theta-monomial * T(a idx theta) * sum of atoms(n)

where an atom is sign(n) * idx**p * H(c idx pi).  The slot functions u(n) are
obtained by least squares over theta samples at fixed n; each u(n) is then
fitted by a sparse combination of atoms (screened in float64, confirmed in
extended precision at further n) whose coefficients are rationalised as
q * pi**j.  The origin contributes a polynomial in the parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError, StructureRecoveryFailure
from ..laurent import ORIGIN, FamilyKind, Point
from ..numerics import PrecisionContext, context, const_pi, least_squares, rationalize
from ..residues import combined, laurent_at
from .model import (
    HYP_SHAPES,
    Identity,
    Index,
    Monomial,
    SeriesTerm,
    Sign,
    ThetaFactor,
    ThetaPoly,
    hyp_value,
    merge_terms,
)

FIT_N = 12  # n = 1..FIT_N drive the screening fit
CONFIRM_N = 18  # n = FIT_N+1..CONFIRM_N only confirm it
EXTRA_BITS = 64
POWERS = range(-4, 3)
PI_POWERS = range(0, 9)

THEOREM_FUNCTIONS = ("f1", "f2", "f3", "f4", "g1", "g2", "g3", "g4")

_PAIRS = {
    # (numerator kind, pole family on the imaginary axis) -> theta kinds that appear
    ("cosh", False): ("cosh", "sinh"),
    ("sinh", False): ("cosh", "sinh"),
    ("cos", False): ("cos", "sin"),
    ("sin", False): ("cos", "sin"),
    ("cosh", True): ("cos", "sin"),
    ("sinh", True): ("cos", "sin"),
    ("cos", True): ("cosh", "sinh"),
    ("sin", True): ("cosh", "sinh"),
}

_SAMPLES_1 = ("0.31", "-0.74", "1.13", "-1.62", "2.07", "-2.45", "0.52", "2.71", "-0.97", "1.41")


@dataclass(frozen=True)
class _Slot:
    factors: tuple  # ThetaFactor per parameter
    monomial: tuple  # ((param, exp), ...)


def _param_names(n: int) -> tuple:
    return ("theta",) if n == 1 else ("theta1", "theta2")


def _theta_samples(count: int, nparams: int, ctx: PrecisionContext) -> list[tuple]:
    if nparams == 1:
        return [(ctx.mpf(s),) for s in _SAMPLES_1[:count]]
    pts = []
    for i, a in enumerate(_SAMPLES_1):
        for b in _SAMPLES_1[(i * 3) % 7: (i * 3) % 7 + 2]:
            pts.append((ctx.mpf(a), ctx.mpf(b) / 2))
    return pts[:count]


def _slots(fn, kind: FamilyKind) -> list[_Slot]:
    params = _param_names(fn.parameters)
    scale = Fraction(1, 2) if kind.half_odd else Fraction(1)
    choices = []
    for num_kind, p in fn.base.numerator:
        pair = _PAIRS[(num_kind, kind.imaginary)]
        choices.append([ThetaFactor(k, params[p], scale) for k in pair])
    monomials = [()] + [((p, 1),) for p in params]
    return [_Slot(tuple(fs), m) for fs in itertools.product(*choices) for m in monomials]


def _slot_value(slot: _Slot, idx: int, thetas: dict, ctx: PrecisionContext):
    v = ctx.mpf(1)
    for f in slot.factors:
        v *= f.value(idx, thetas, ctx)
    for p, e in slot.monomial:
        v *= thetas[p] ** e
    return v


def _pair_residue(fid: str, kind: FamilyKind, n: int, thetas: tuple, ctx: PrecisionContext):
    mp = ctx.mp
    total = laurent_at(fid, Point(kind, n, 1), thetas, ctx).residue()
    total += laurent_at(fid, Point(kind, n, -1), thetas, ctx).residue()
    total = mp.mpc(total)
    if abs(total.imag) > mp.ldexp(abs(total) + mp.ldexp(1, -ctx.bits), -ctx.bits // 2):
        raise StructureRecoveryFailure(f"{fid}: paired residues at {kind.value} n={n} are not real")
    return total.real


def _slot_sequences(fid: str, kind: FamilyKind, slots, ctx: PrecisionContext) -> list[list]:
    """u_j(n) for n = 1..CONFIRM_N: least squares over theta samples per n."""
    mp = ctx.mp
    fn = combined(fid)
    params = _param_names(fn.parameters)
    samples = _theta_samples(max(2 * len(slots), 8), fn.parameters, ctx)
    index = Index.ODD if kind.half_odd else Index.N
    seqs = [[] for _ in slots]
    for n in range(1, CONFIRM_N + 1):
        idx = n if index is Index.N else 2 * n - 1
        rows, rhs = [], []
        for th in samples:
            tdict = dict(zip(params, th))
            rows.append([_slot_value(s, idx, tdict, ctx) for s in slots])
            rhs.append(_pair_residue(fid, kind, n, th, ctx))
        x, res = least_squares(rows, rhs, ctx)
        if res > mp.ldexp(mp.norm(mp.matrix(rhs)) + mp.ldexp(1, -ctx.bits), -ctx.bits // 2):
            raise StructureRecoveryFailure(
                f"{fid}: residues at {kind.value} n={n} are not spanned by the theta basis")
        for j in range(len(slots)):
            seqs[j].append(x[j])
    return seqs


# -- sparse atom fit ---------------------------------------------------------------


def _atoms(kind: FamilyKind):
    scale = Fraction(1, 2) if kind.half_odd else Fraction(1)
    for sign in (Sign.ONE, Sign.ALT):
        for p in POWERS:
            for hyp in (None, *HYP_SHAPES):
                yield (sign, p, hyp, scale)


def _atom_value(atom, n: int, index: Index, ctx: PrecisionContext):
    sign, p, hyp, scale = atom
    idx = n if index is Index.N else 2 * n - 1
    v = ctx.mpf(sign.at(n)) * ctx.mpf(idx) ** p
    if hyp is not None:
        v *= hyp_value(hyp, ctx.mpf(scale) * idx * const_pi(ctx), ctx.mp)
    return v


def _fit_slot(u: list, kind: FamilyKind, ctx: PrecisionContext, max_atoms: int = 3):
    """Smallest atom combination reproducing u(n), with mp coefficients."""
    mp = ctx.mp
    index = Index.ODD if kind.half_odd else Index.N
    atoms = list(_atoms(kind))
    values = [[_atom_value(a, n, index, ctx) for n in range(1, CONFIRM_N + 1)] for a in atoms]
    weights = [1 / abs(v) for v in u]
    # float screen over the fitting rows, each row scaled to relative error
    F = np.array([[float(values[k][i] * weights[i]) for k in range(len(atoms))] for i in range(FIT_N)])
    target = np.array([float(u[i] * weights[i]) for i in range(FIT_N)])
    tol = mp.ldexp(1, -ctx.bits // 2)
    for size in range(1, max_atoms + 1):
        ranked = _screen(F, target, size)
        for combo in ranked[:40]:
            coeffs = _confirm(combo, values, u, weights, ctx, tol)
            if coeffs is not None:
                return [(atoms[k], c) for k, c in zip(combo, coeffs)]
    return None


def _screen(F, target, size: int) -> list[tuple]:
    """Subsets of columns ranked by float least-squares residual."""
    ncols = F.shape[1]
    finite = [k for k in range(ncols) if np.all(np.isfinite(F[:, k])) and np.max(np.abs(F[:, k])) < 1e150]
    combos = np.array(list(itertools.combinations(finite, size)))
    if combos.size == 0:
        return []
    A = np.transpose(F[:, combos], (1, 0, 2))  # (S, rows, size)
    At = np.transpose(A, (0, 2, 1))
    G = At @ A
    rhs = At @ target
    with np.errstate(all="ignore"):
        try:
            x = np.linalg.solve(G, rhs[..., None])[..., 0]
        except np.linalg.LinAlgError:
            x = np.stack([np.linalg.lstsq(g, r, rcond=None)[0] for g, r in zip(G, rhs)])
        resid = np.linalg.norm(A @ x[..., None] - target[None, :, None], axis=(1, 2))
    resid = np.where(np.isfinite(resid), resid, np.inf)
    order = np.argsort(resid)
    return [tuple(int(k) for k in combos[i]) for i in order if resid[i] < 1e-6]


def _confirm(combo, values, u, weights, ctx: PrecisionContext, tol):
    rows = [[values[k][i] * weights[i] for k in combo] for i in range(FIT_N)]
    rhs = [u[i] * weights[i] for i in range(FIT_N)]
    try:
        x, _ = least_squares(rows, rhs, ctx)
    except ZeroDivisionError:
        return None
    coeffs = [x[j] for j in range(len(combo))]
    for i in range(CONFIRM_N):
        fit = sum(c * values[k][i] for c, k in zip(coeffs, combo))
        if abs(fit - u[i]) > tol * abs(u[i]):
            return None
    return coeffs


def _rational_pi(c, ctx: PrecisionContext, what: str) -> Monomial:
    """Write c as q * pi**j with small rational q."""
    mp = ctx.mp
    tol = mp.ldexp(1, -ctx.bits // 2)
    pi = const_pi(ctx)
    for j in PI_POWERS:
        q = rationalize(c / pi**j, tol)
        if q is not None and q.denominator <= 2**20:
            return Monomial(q, j)
    raise StructureRecoveryFailure(f"{what}: coefficient {mp.nstr(c, 20)} is not a rational multiple of a pi power")


def _family_terms(fid: str, kind: FamilyKind, ctx: PrecisionContext) -> list[SeriesTerm]:
    mp = ctx.mp
    fn = combined(fid)
    slots = _slots(fn, kind)
    seqs = _slot_sequences(fid, kind, slots, ctx)
    index = Index.ODD if kind.half_odd else Index.N
    # a slot is structurally zero when it is negligible against the largest slot at every n
    floors = [mp.ldexp(max(abs(seq[i]) for seq in seqs), -ctx.bits // 2) for i in range(CONFIRM_N)]
    terms = []
    for slot, u in zip(slots, seqs):
        if all(abs(v) <= f for v, f in zip(u, floors)):
            continue
        if any(v == 0 for v in u):
            raise StructureRecoveryFailure(f"{fid}: slot {slot} vanishes at isolated n")
        fit = _fit_slot(u, kind, ctx)
        if fit is None:
            raise StructureRecoveryFailure(
                f"{fid}: residues in the {kind.value} family do not fit the term grammar")
        for (sign, p, hyp, hscale), c in fit:
            w = _rational_pi(c, ctx, fid)
            terms.append(SeriesTerm(
                index=index, sign=sign, power=p, hyp=hyp, hyp_scale=hscale,
                theta_factors=slot.factors, weight=Monomial(w.coeff, w.pi_power, slot.monomial),
            ))
    return terms


def _origin_poly(fid: str, ctx: PrecisionContext) -> ThetaPoly:
    """Residue at 0 as an exact polynomial in the parameters."""
    mp = ctx.mp
    fn = combined(fid)
    order = dict(fn.catalog).get(FamilyKind.ORIGIN)
    if order is None:
        return ThetaPoly()
    params = _param_names(fn.parameters)
    # a vanishing numerator lowers the pole order but not the theta degree
    degree = order + 1
    exps = [e for e in itertools.product(range(degree + 1), repeat=len(params)) if sum(e) <= degree]
    samples = _theta_samples(len(exps) + 4, len(params), ctx)
    rows, rhs = [], []
    for th in samples:
        rows.append([mp.fprod(t**k for t, k in zip(th, e)) for e in exps])
        rhs.append(mp.re(laurent_at(fid, ORIGIN, th, ctx).residue()))
    x, res = least_squares(rows, rhs, ctx)
    if res > mp.ldexp(mp.norm(mp.matrix(rhs)), -ctx.bits // 2):
        raise StructureRecoveryFailure(f"{fid}: origin residue is not a polynomial of degree {degree}")
    floor = mp.ldexp(max(abs(v) for v in x), -ctx.bits // 2)
    monos = []
    for e, c in zip(exps, x):
        if abs(c) <= floor:
            continue
        w = _rational_pi(c, ctx, f"{fid} origin")
        monos.append(Monomial(w.coeff, w.pi_power, tuple((p, k) for p, k in zip(params, e) if k)))
    return ThetaPoly(tuple(monos))


def _work_context(ctx: PrecisionContext | None) -> PrecisionContext:
    ctx = ctx or context()
    return context(ctx.bits + EXTRA_BITS, ctx.guard_bits)


def _assemble(fid: str, ctx: PrecisionContext, new_id: str, params: tuple) -> Identity:
    work = _work_context(ctx)
    terms = []
    for kind, _ in combined(fid).catalog:
        if kind is not FamilyKind.ORIGIN:
            terms.extend(_family_terms(fid, kind, work))
    poly = _origin_poly(fid, work)
    # residues at +n and -n come in pairs; halve so each pair counts once
    half = Monomial(Fraction(1, 2))
    ident = Identity(new_id, merge_terms(terms), poly, params=params, group="generated").scaled(half)
    return ident.canonical()


def generate_identity(function_id: str, ctx: PrecisionContext | None = None) -> Identity:
    """Identity implied by the vanishing residue sum of a combined function."""
    if function_id not in THEOREM_FUNCTIONS:
        raise DomainError(f"generate_identity expects one of {', '.join(THEOREM_FUNCTIONS)}, got {function_id!r}")
    return _assemble(function_id, ctx, f"gen-{function_id}", ("theta",))


def generate_two_param(theta1=None, theta2=None, ctx: PrecisionContext | None = None) -> Identity:
    """The two-parameter identity from the cosh(theta1 z) cos(theta2 z) base.

    Structure is recovered once for all parameters; theta1/theta2 are only
    validated here (the result holds on the whole square |theta_i| < pi).
    """
    pi = float(const_pi(context(64)))
    for t in (theta1, theta2):
        if t is not None and not abs(float(t)) < pi:
            raise DomainError("theta parameters must lie in (-pi, pi)")
    return _assemble("F", ctx, "gen-F", ("theta1", "theta2"))

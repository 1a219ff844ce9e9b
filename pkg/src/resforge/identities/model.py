"""Data model for series identities and closed forms.

A :class:`SeriesTerm` is one infinite sum over n >= 1.  Its general term is

    weight * sign(n) * idx**power * H(c * idx * pi) * prod T_j(a_j * idx * theta_j)

where idx is n or 2n-1, H is one of the hyperbolic shapes in ``HYP_SHAPES``
(or absent) and the T_j are trigonometric or hyperbolic factors in the free
parameters.  An :class:`Identity` asserts that its terms plus a polynomial in
the parameters add up to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

from ..errors import DomainError
from ..numerics import PrecisionContext, const_pi
from ..special import gamma_quarter, gamma_three_quarter


class Index(str, Enum):
    N = "n"
    ODD = "2n-1"


class Sign(str, Enum):
    ONE = "1"
    ALT = "(-1)^n"
    ALT1 = "(-1)^(n-1)"

    def at(self, n: int) -> int:
        if self is Sign.ONE:
            return 1
        s = -1 if n % 2 else 1
        return s if self is Sign.ALT else -s


# Hyperbolic shapes H(x).  Their decay exponent (e^{-k x}) drives summation.
HYP_SHAPES = {
    "csch": 1,
    "sech": 1,
    "cosh_csch2": 1,
    "sinh_sech2": 1,
    "csch2": 2,
    "sech2": 2,
    "coth": 0,
    "tanh": 0,
}

THETA_KINDS = ("sin", "cos", "sinh", "cosh")
PARAM_NAMES = ("theta", "theta1", "theta2")


def hyp_value(shape: str, x, mp):
    if shape == "csch":
        return 1 / mp.sinh(x)
    if shape == "sech":
        return 1 / mp.cosh(x)
    if shape == "cosh_csch2":
        return mp.cosh(x) / mp.sinh(x) ** 2
    if shape == "sinh_sech2":
        return mp.sinh(x) / mp.cosh(x) ** 2
    if shape == "csch2":
        return 1 / mp.sinh(x) ** 2
    if shape == "sech2":
        return 1 / mp.cosh(x) ** 2
    if shape == "coth":
        return mp.coth(x)
    if shape == "tanh":
        return mp.tanh(x)
    raise DomainError(f"unknown hyperbolic shape {shape!r}")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, order=True)
class Monomial:
    """coeff * pi**pi_power * prod(param**exp)."""

    coeff: Fraction = Fraction(1)
    pi_power: int = 0
    thetas: tuple = ()  # sorted ((param, exp), ...) with exp > 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", _frac(self.coeff))
        merged: dict[str, int] = {}
        for p, e in self.thetas:
            merged[p] = merged.get(p, 0) + e
        object.__setattr__(self, "thetas", tuple(sorted((p, e) for p, e in merged.items() if e)))

    @property
    def shape(self) -> tuple:
        return (self.pi_power, self.thetas)

    def theta_exp(self, param: str) -> int:
        return dict(self.thetas).get(param, 0)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coeff * other.coeff, self.pi_power + other.pi_power, self.thetas + other.thetas)

    def scaled(self, c) -> "Monomial":
        return replace(self, coeff=self.coeff * _frac(c))

    def value(self, thetas: dict, ctx: PrecisionContext):
        v = ctx.mpf(self.coeff) * const_pi(ctx) ** self.pi_power
        for p, e in self.thetas:
            v *= thetas[p] ** e
        return v


ONE = Monomial()


@dataclass(frozen=True, order=True)
class ThetaFactor:
    """kind(scale * idx * param) with kind in sin/cos/sinh/cosh."""

    kind: str
    param: str = "theta"
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in THETA_KINDS:
            raise DomainError(f"unknown theta factor kind {self.kind!r}")
        object.__setattr__(self, "scale", _frac(self.scale))

    @property
    def hyperbolic(self) -> bool:
        return self.kind in ("sinh", "cosh")

    def value(self, idx, thetas: dict, ctx: PrecisionContext):
        return getattr(ctx.mp, self.kind)(ctx.mpf(self.scale) * idx * thetas[self.param])


@dataclass(frozen=True)
class SeriesTerm:
    index: Index = Index.N
    sign: Sign = Sign.ONE
    power: int = 0
    hyp: str | None = None
    hyp_scale: Fraction = Fraction(1)
    theta_factors: tuple = ()
    weight: Monomial = ONE

    def __post_init__(self):
        if self.hyp is not None and self.hyp not in HYP_SHAPES:
            raise DomainError(f"unknown hyperbolic shape {self.hyp!r}")
        object.__setattr__(self, "hyp_scale", _frac(self.hyp_scale))
        factors = tuple(sorted(self.theta_factors, key=lambda f: (f.param, f.kind, f.scale)))
        if len({f.param for f in factors}) != len(factors):
            raise DomainError("at most one theta factor per parameter")
        object.__setattr__(self, "theta_factors", factors)

    # -- structure -----------------------------------------------------------

    @property
    def params(self) -> tuple:
        names = {f.param for f in self.theta_factors} | {p for p, _ in self.weight.thetas}
        return tuple(sorted(names))

    @property
    def convergence(self) -> str:
        """'E' for exponential decay, 'P' for coth/tanh terms with a power-law unit part."""
        if self.hyp in ("coth", "tanh"):
            return "P"
        if self.hyp is None:
            return "none"
        return "E"

    @property
    def shape_key(self) -> tuple:
        """Everything except the rational coefficient of the weight."""
        return (self.index.value, self.sign.value, self.power, self.hyp or "", self.hyp_scale,
                tuple((f.param, f.kind, f.scale) for f in self.theta_factors), self.weight.shape)

    def canonical(self) -> "SeriesTerm":
        """Fold (-1)^(n-1) into (-1)^n with a negated weight."""
        if self.sign is Sign.ALT1:
            return replace(self, sign=Sign.ALT, weight=self.weight.scaled(-1))
        return self

    def with_weight(self, weight: Monomial) -> "SeriesTerm":
        return replace(self, weight=weight)

    def idx(self, n: int) -> int:
        return n if self.index is Index.N else 2 * n - 1

    # -- numerics ------------------------------------------------------------

    def shape_value(self, n: int, thetas: dict, ctx: PrecisionContext):
        """General term at n without the scalar weight."""
        mp = ctx.mp
        i = self.idx(n)
        v = ctx.mpf(self.sign.at(n)) * ctx.mpf(i) ** self.power
        if self.hyp is not None:
            v *= hyp_value(self.hyp, ctx.mpf(self.hyp_scale) * i * const_pi(ctx), mp)
        for f in self.theta_factors:
            v *= f.value(i, thetas, ctx)
        return v

    def value(self, n: int, thetas: dict, ctx: PrecisionContext):
        return self.weight.value(thetas, ctx) * self.shape_value(n, thetas, ctx)


@dataclass(frozen=True)
class ThetaPoly:
    """Polynomial in the parameters with coefficients rational multiples of pi powers."""

    terms: tuple = ()

    def __post_init__(self):
        merged: dict[tuple, Fraction] = {}
        for m in self.terms:
            merged[m.shape] = merged.get(m.shape, Fraction(0)) + m.coeff
        terms = tuple(
            Monomial(c, pi, th) for (pi, th), c in sorted(merged.items(), key=lambda kv: _poly_order(kv[0])) if c
        )
        object.__setattr__(self, "terms", terms)

    @staticmethod
    def constant(c, pi_power: int = 0) -> "ThetaPoly":
        return ThetaPoly((Monomial(_frac(c), pi_power),))

    def __add__(self, other: "ThetaPoly") -> "ThetaPoly":
        return ThetaPoly(self.terms + other.terms)

    def __neg__(self) -> "ThetaPoly":
        return self.scaled(-1)

    def __sub__(self, other: "ThetaPoly") -> "ThetaPoly":
        return self + (-other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def scaled(self, c) -> "ThetaPoly":
        return ThetaPoly(tuple(m.scaled(c) for m in self.terms))

    def times(self, m: Monomial) -> "ThetaPoly":
        return ThetaPoly(tuple(t.times(m) for t in self.terms))

    def derivative(self, param: str) -> "ThetaPoly":
        out = []
        for m in self.terms:
            e = m.theta_exp(param)
            if e:
                rest = tuple((p, x - (p == param)) for p, x in m.thetas)
                out.append(Monomial(m.coeff * e, m.pi_power, rest))
        return ThetaPoly(tuple(out))

    def specialize_zero(self, param: str) -> "ThetaPoly":
        return ThetaPoly(tuple(m for m in self.terms if not m.theta_exp(param)))

    def rename(self, mapping: dict) -> "ThetaPoly":
        return ThetaPoly(tuple(
            Monomial(m.coeff, m.pi_power, tuple((mapping.get(p, p), e) for p, e in m.thetas)) for m in self.terms
        ))

    def value(self, thetas: dict, ctx: PrecisionContext):
        total = ctx.mpf(0)
        for m in self.terms:
            total += m.value(thetas, ctx)
        return total


def _poly_order(shape):
    pi, th = shape
    return (-sum(e for _, e in th), th, -pi)


def merge_terms(terms) -> tuple:
    """Canonicalize, merge terms of equal shape and drop zeros, in a fixed order."""
    merged: dict[tuple, SeriesTerm] = {}
    for t in terms:
        t = t.canonical()
        key = t.shape_key
        if key in merged:
            prev = merged[key]
            merged[key] = prev.with_weight(replace(prev.weight, coeff=prev.weight.coeff + t.weight.coeff))
        else:
            merged[key] = t
    return tuple(sorted((t for t in merged.values() if t.weight.coeff), key=lambda t: t.shape_key))


@dataclass(frozen=True)
class Identity:
    """sum(terms) + poly = 0 for every parameter value in (-pi, pi)."""

    id: str
    terms: tuple
    poly: ThetaPoly = field(default_factory=ThetaPoly)
    params: tuple = ("theta",)
    group: str = ""
    rhs: ThetaPoly | None = None  # printed right-hand side, when the source had one

    @property
    def convergence(self) -> str:
        return "P" if any(t.convergence == "P" for t in self.terms) else "E"

    def canonical(self) -> "Identity":
        return replace(self, terms=merge_terms(self.terms))

    def scaled(self, m: Monomial) -> "Identity":
        return replace(
            self,
            terms=tuple(t.with_weight(t.weight.times(m)) for t in self.terms),
            poly=self.poly.times(m),
        )

    def normalized(self) -> "Identity":
        """Canonical form scaled so the first term has weight exactly 1."""
        c = self.canonical()
        if not c.terms:
            return c
        w = c.terms[0].weight
        if w.thetas:
            return c
        inv = Monomial(1 / w.coeff, -w.pi_power)
        return c.scaled(inv).canonical()

    def equivalent(self, other: "Identity") -> bool:
        """Same term multiset and polynomial up to one global rational-times-pi-power factor."""
        a, b = self.normalized(), other.normalized()
        return a.terms == b.terms and a.poly == b.poly and tuple(a.params) == tuple(b.params)

    def with_poly(self, poly: ThetaPoly) -> "Identity":
        return replace(self, poly=poly)

    def rename(self, mapping: dict, new_id: str | None = None) -> "Identity":
        terms = []
        for t in self.terms:
            factors = tuple(replace(f, param=mapping.get(f.param, f.param)) for f in t.theta_factors)
            w = Monomial(t.weight.coeff, t.weight.pi_power,
                         tuple((mapping.get(p, p), e) for p, e in t.weight.thetas))
            terms.append(replace(t, theta_factors=factors, weight=w))
        params = tuple(mapping.get(p, p) for p in self.params)
        return replace(self, id=new_id or self.id, terms=tuple(terms), poly=self.poly.rename(mapping),
                       params=params)

    def specialize_zero(self, param: str, new_id: str | None = None) -> "Identity":
        """Set one parameter to zero: sin/sinh factors vanish, cos/cosh factors become 1."""
        terms = []
        for t in self.terms:
            if t.weight.theta_exp(param):
                continue
            keep = []
            dead = False
            for f in t.theta_factors:
                if f.param != param:
                    keep.append(f)
                elif f.kind in ("sin", "sinh"):
                    dead = True
            if not dead:
                terms.append(replace(t, theta_factors=tuple(keep)))
        params = tuple(p for p in self.params if p != param)
        return replace(self, id=new_id or self.id, terms=merge_terms(terms),
                       poly=self.poly.specialize_zero(param), params=params)

    def parameter_values(self, theta) -> dict:
        """Accept a number (single parameter), a tuple in params order, or a dict."""
        if isinstance(theta, dict):
            return dict(theta)
        if isinstance(theta, (tuple, list)):
            if len(theta) != len(self.params):
                raise DomainError(f"{self.id} takes {len(self.params)} parameter(s)")
            return dict(zip(self.params, theta))
        if len(self.params) > 1:
            raise DomainError(f"{self.id} takes {len(self.params)} parameters")
        return {p: theta for p in self.params}


@dataclass(frozen=True)
class ClosedForm:
    """additive + coefficient * pi**pi_power * G**gamma14 * G3**gamma34 * sqrt(2)**sqrt2,
    with G = Gamma(1/4) and G3 = Gamma(3/4)."""

    coefficient: Fraction
    pi_power: Fraction = Fraction(0)
    gamma14: int = 0
    gamma34: int = 0
    sqrt2: int = 0
    additive: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coefficient", _frac(self.coefficient))
        object.__setattr__(self, "pi_power", _frac(self.pi_power))
        object.__setattr__(self, "additive", _frac(self.additive))
        if self.pi_power.denominator not in (1, 2):
            raise DomainError("pi exponent must be an integer or half-integer")

    def monomial_value(self, ctx: PrecisionContext):
        mp = ctx.mp
        pi = const_pi(ctx)
        v = mp.power(pi, ctx.mpf(self.pi_power))
        if self.gamma14:
            v *= gamma_quarter(ctx) ** self.gamma14
        if self.gamma34:
            v *= gamma_three_quarter(ctx) ** self.gamma34
        if self.sqrt2:
            v *= mp.sqrt(2) ** self.sqrt2
        return v

    def value(self, ctx: PrecisionContext):
        return ctx.mpf(self.additive) + ctx.mpf(self.coefficient) * self.monomial_value(ctx)

    def with_coefficient(self, c) -> "ClosedForm":
        return replace(self, coefficient=_frac(c))

    def negated(self) -> "ClosedForm":
        return replace(self, coefficient=-self.coefficient, additive=-self.additive)


@dataclass(frozen=True)
class ClosedFormEntry:
    id: str
    term: SeriesTerm
    form: ClosedForm
    group: str = ""


@dataclass(frozen=True)
class ClosedFormFamily:
    """A k-indexed family sum(term(k)) = c_k * monomial(k) with unknown rational c_k."""

    id: str
    term: object  # k -> SeriesTerm
    monomial: object  # k -> ClosedForm with coefficient 1
    group: str = ""

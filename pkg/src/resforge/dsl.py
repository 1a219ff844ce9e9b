"""A small expression language for kernels, bases, series terms and polynomials.

Text is tokenized and parsed (recursive descent, implicit multiplication) into
an AST, which is then normalized into a sum of monomials over a fixed set of
atoms: ``pi``, ``z``, ``n``, the odd index ``2n-1``, the parameters
``theta``/``theta1``/``theta2``, the sign ``(-1)^n`` and calls of
sin/cos/sinh/cosh on a normalized argument.  Every other function name
(tan, cot, sec, csc, tanh, coth, sech, csch) is rewritten into those four, so
``pi*cot(pi z)`` and ``pi cos(pi z)/sin(pi z)`` normalize identically.

Binders then read the normalized form as

* a kernel x base combination (:func:`parse`), matched against the catalog;
* a :class:`SeriesTerm` (:func:`parse_term`);
* a polynomial in the parameters (:func:`parse_poly`);
* a whole identity left-hand side (:func:`parse_sum`), where every monomial
  mentioning the summation index becomes a series term.

Only :class:`ParseError` and :class:`UnsupportedCombination` escape from the
public functions, whatever the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, UnsupportedCombination
from .identities.model import (
    Index,
    Monomial,
    SeriesTerm,
    Sign,
    ThetaFactor,
    ThetaPoly,
)
from .special import zeta_even_rational

MAX_EXPONENT = 64
MAX_DEPTH = 100
MAX_LENGTH = 10_000

FUNCTIONS = ("sin", "cos", "tan", "cot", "sec", "csc",
             "sinh", "cosh", "tanh", "coth", "sech", "csch", "zeta")
SYMBOLS = ("pi", "z", "n", "theta", "theta1", "theta2")
PARAMS = ("theta", "theta1", "theta2")

_ALIASES = {"π": "pi", "θ": "theta", "θ1": "theta1", "θ2": "theta2", "θ₁": "theta1", "θ₂": "theta2"}
_ASCII_LETTERS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")

# --- tokens -----------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    if not isinstance(text, str):
        raise ParseError("input must be text", 0, ("text",))
    if len(text) > MAX_LENGTH:
        raise ParseError(f"input longer than {MAX_LENGTH} characters", MAX_LENGTH, ("shorter input",))
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
        elif ch in "0123456789":
            j = i
            while j < len(text) and text[j] in "0123456789":
                j += 1
            tokens.append(Token("num", text[i:j], i))
            i = j
        elif ch in _ASCII_LETTERS or ch in "πθ":
            j = i + 1
            if ch == "θ":
                while j < len(text) and text[j] in "12₁₂":
                    j += 1
            elif ch != "π":
                while j < len(text) and (text[j] in _ASCII_LETTERS or text[j] in "0123456789"):
                    j += 1
            word = _ALIASES.get(text[i:j], text[i:j])
            if word not in FUNCTIONS and word not in SYMBOLS:
                raise ParseError(f"unknown name {word!r}", i, SYMBOLS + FUNCTIONS)
            tokens.append(Token("ident", word, i))
            i = j
        elif ch in "+-*/^()":
            tokens.append(Token("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i, ("number", "name", "operator"))
    tokens.append(Token("end", "", len(text)))
    return tokens


# --- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: object


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind not in ("op",):
            raise ParseError(f"expected {text!r}", self.tok.pos, (text,))
        self.advance()

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.tok.pos, ("shallower expression",))

    def parse(self):
        if self.tok.kind == "end":
            raise ParseError("empty expression", 0, ("expression",))
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos, ("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        self.enter()
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        self.depth -= 1
        return node

    def _starts_atom(self) -> bool:
        return self.tok.kind in ("num", "ident") or (self.tok.kind == "op" and self.tok.text == "(")

    def term(self):
        node = self.unary()
        while True:
            if self.tok.kind == "op" and self.tok.text in "*/":
                op = self.advance().text
                node = BinOp(op, node, self.unary())
            elif self._starts_atom():
                node = BinOp("*", node, self.power())
            else:
                return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            self.enter()
            operand = self.unary()
            self.depth -= 1
            return Neg(operand) if op == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            self.enter()
            exponent = self.unary()
            self.depth -= 1
            return Pow(base, exponent)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(int(t.text))
        if t.kind == "ident":
            self.advance()
            if t.text in FUNCTIONS:
                if not (self.tok.kind == "op" and self.tok.text == "("):
                    raise ParseError(f"expected '(' after {t.text}", self.tok.pos, ("(",))
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            return Sym(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, ("number", "name", "("))


def parse_ast(text: str):
    return _Parser(text).parse()


# --- normalization ----------------------------------------------------------
#
# A polynomial is a dict {monomial key: Fraction}; a monomial key is a sorted
# tuple of (atom, exponent) pairs.  Atoms are ("sym", name) or
# ("call", fn, argument-polynomial-as-tuple).

ODD = ("sym", "odd")
SIGN = ("sym", "sign")    # (-1)^n
SIGN1 = ("sym", "sign1")  # (-1)^(n-1)

_ODD_FUNCTIONS = {"sin", "sinh"}
_REWRITE = {  # fn -> ((base fn, exponent), ...)
    "sin": (("sin", 1),), "cos": (("cos", 1),),
    "tan": (("sin", 1), ("cos", -1)), "cot": (("cos", 1), ("sin", -1)),
    "sec": (("cos", -1),), "csc": (("sin", -1),),
    "sinh": (("sinh", 1),), "cosh": (("cosh", 1),),
    "tanh": (("sinh", 1), ("cosh", -1)), "coth": (("cosh", 1), ("sinh", -1)),
    "sech": (("cosh", -1),), "csch": (("sinh", -1),),
}


def _poly_const(c) -> dict:
    return {(): Fraction(c)} if c else {}


def _poly_atom(atom) -> dict:
    return {((atom, 1),): Fraction(1)}


def _mono_mul(a: tuple, b: tuple) -> tuple[tuple, int]:
    exps: dict = {}
    for atom, e in a + b:
        exps[atom] = exps.get(atom, 0) + e
    # (-1)^(n s) (-1)^((n-1) s1) = (-1)^(n (s+s1)) (-1)^s1
    s = exps.pop(SIGN, 0)
    s1 = exps.pop(SIGN1, 0)
    sign = 1
    if (s + s1) % 2:
        exps[SIGN1 if s1 % 2 else SIGN] = 1
    elif s1 % 2:
        sign = -1
    key = tuple(sorted((atom, e) for atom, e in exps.items() if e))
    return key, sign


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key, sign = _mono_mul(ka, kb)
            out[key] = out.get(key, Fraction(0)) + sign * ca * cb
    return {k: v for k, v in out.items() if v}


def _poly_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, Fraction(0)) + sign * c
    return {k: v for k, v in out.items() if v}


def _recognize_odd(p: dict) -> dict:
    # a*n + b with a = -2b is -b * (2n - 1)
    if len(p) == 2 and () in p:
        others = [k for k in p if k]
        if others == [((("sym", "n"), 1),)]:
            a, b = p[others[0]], p[()]
            if a == -2 * b:
                return {((ODD, 1),): -b}
    return p


def _as_monomial(p: dict, what: str) -> tuple[tuple, Fraction]:
    if len(p) != 1:
        raise UnsupportedCombination(f"{what} must be a single product, not a sum")
    (k, c), = p.items()
    return k, c


def _mono_pow(key: tuple, c: Fraction, e: int) -> dict:
    if c == 0 and e < 0:
        raise UnsupportedCombination("division by zero")
    new_key = tuple((atom, x * e) for atom, x in key)
    key2, sign = _mono_mul(new_key, ())
    return {key2: sign * c**e} if c else {}


def _freeze(p: dict) -> tuple:
    return tuple(sorted((k, (c.numerator, c.denominator)) for k, c in p.items()))


def _thaw(t: tuple) -> dict:
    return {k: Fraction(num, den) for k, (num, den) in t}


def _normalize_call(fn: str, arg: dict) -> dict:
    if fn == "zeta":
        if list(arg) not in ([()],):
            raise UnsupportedCombination("zeta takes a constant argument")
        s = arg[()]
        if s.denominator != 1 or s < 2 or s % 2 or s > 2 * MAX_EXPONENT:
            raise UnsupportedCombination("only zeta at even integers >= 2 is supported")
        k = int(s) // 2
        return {((("sym", "pi"), 2 * k),): zeta_even_rational(k)}
    if not arg:
        if fn in ("cos", "cosh", "sec", "sech"):
            return _poly_const(1)
        if fn in ("sin", "sinh", "tan", "tanh"):
            return {}
        raise UnsupportedCombination(f"{fn}(0) is infinite")
    # Canonical argument sign: leading coefficient positive.
    first = sorted(arg)[0]
    flip = arg[first] < 0
    if flip:
        arg = {k: -v for k, v in arg.items()}
    frozen = _freeze(arg)
    out = _poly_const(1)
    for base, e in _REWRITE[fn]:
        out = _poly_mul(out, _mono_pow(((("call", base, frozen), 1),), Fraction(1), e))
        if flip and base in _ODD_FUNCTIONS and e % 2:
            out = {k: -v for k, v in out.items()}
    return out


def _normalize(node, depth: int = 0) -> dict:
    if depth > 4 * MAX_DEPTH:
        raise UnsupportedCombination("expression too deep")
    if isinstance(node, Num):
        return _poly_const(node.value)
    if isinstance(node, Sym):
        return _poly_atom(("sym", node.name))
    if isinstance(node, Neg):
        return {k: -v for k, v in _normalize(node.operand, depth + 1).items()}
    if isinstance(node, Call):
        return _normalize_call(node.fn, _normalize(node.arg, depth + 1))
    if isinstance(node, BinOp):
        a = _normalize(node.left, depth + 1)
        b = _normalize(node.right, depth + 1)
        if node.op == "+":
            return _recognize_odd(_poly_add(a, b))
        if node.op == "-":
            return _recognize_odd(_poly_add(a, b, -1))
        if node.op == "*":
            return _poly_mul(a, b)
        if node.op == "/":
            if not b:
                raise UnsupportedCombination("division by zero")
            k, c = _as_monomial(b, "a divisor")
            return _poly_mul(a, _mono_pow(k, c, -1))
    if isinstance(node, Pow):
        base = _normalize(node.base, depth + 1)
        expo = _normalize(node.exponent, depth + 1)
        if base == _poly_const(-1):
            return _sign_power(expo)
        if list(expo) not in ([()], []):
            raise UnsupportedCombination("exponents must be integer constants (or n for (-1)^n)")
        e = expo.get((), Fraction(0))
        if e.denominator != 1 or abs(e) > MAX_EXPONENT:
            raise UnsupportedCombination(f"exponent must be an integer of magnitude <= {MAX_EXPONENT}")
        e = int(e)
        if len(base) == 1:
            (k, c), = base.items()
            return _mono_pow(k, c, e)
        if e < 0:
            raise UnsupportedCombination("negative powers of sums are not supported")
        out = _poly_const(1)
        for _ in range(min(e, 8)):
            out = _poly_mul(out, base)
        if e > 8:
            raise UnsupportedCombination("powers of sums are limited to 8")
        return out
    raise UnsupportedCombination("unrecognized expression")  # pragma: no cover


def _sign_power(expo: dict) -> dict:
    n_key = ((("sym", "n"), 1),)
    if set(expo) - {(), n_key}:
        raise UnsupportedCombination("(-1) may only be raised to n plus an integer")
    shift = expo.get((), Fraction(0))
    if shift.denominator != 1:
        raise UnsupportedCombination("(-1) to a fractional power")
    a = expo.get(n_key, Fraction(0))
    if a == 0:
        return _poly_const(-1 if shift % 2 else 1)
    if a not in (1, -1):
        raise UnsupportedCombination("(-1) may only be raised to n plus an integer")
    return _poly_atom(SIGN1 if shift % 2 else SIGN)


def normalize(text: str) -> dict:
    """Normalized polynomial of a DSL string (dict of monomial key -> Fraction)."""
    try:
        return _normalize(parse_ast(text))
    except (ParseError, UnsupportedCombination):
        raise
    except (ArithmeticError, ValueError, OverflowError, RecursionError, MemoryError) as exc:
        raise UnsupportedCombination(f"cannot normalize expression: {exc}") from None


# --- binding: series terms and polynomials ------------------------------------

_INDEX_ATOMS = {("sym", "n"): Index.N, ODD: Index.ODD}
_HYP_BY_EXPONENTS = {
    (-1, 0): "csch", (0, -1): "sech", (-2, 1): "cosh_csch2", (1, -2): "sinh_sech2",
    (-2, 0): "csch2", (0, -2): "sech2", (-1, 1): "coth", (1, -1): "tanh",
}


def _split_argument(arg: dict) -> tuple[Fraction, Index, str]:
    """Read c * idx * (pi | theta_j) from a call argument."""
    k, c = _as_monomial(arg, "a function argument inside a series term")
    exps = dict(k)
    idx = [a for a in exps if a in _INDEX_ATOMS]
    var = [a for a in exps if a not in _INDEX_ATOMS]
    if len(idx) != 1 or exps[idx[0]] != 1 or len(var) != 1 or exps[var[0]] != 1:
        raise UnsupportedCombination("arguments must look like c*idx*pi or c*idx*theta")
    name = var[0][1] if var[0][0] == "sym" else None
    if name not in ("pi",) + PARAMS:
        raise UnsupportedCombination("arguments must look like c*idx*pi or c*idx*theta")
    if c <= 0:
        raise UnsupportedCombination("argument scale must be positive")  # pragma: no cover
    return c, _INDEX_ATOMS[idx[0]], name


def _bind_term(key: tuple, coeff: Fraction) -> SeriesTerm:
    index = None
    power = 0
    sign = Sign.ONE
    pi_power = 0
    thetas = []
    hyp_exps: dict[str, int] = {}
    hyp_arg = None
    factors = []

    def use_index(ix: Index):
        nonlocal index
        if index is not None and index is not ix:
            raise UnsupportedCombination("a term cannot mix n and 2n-1")
        index = ix

    for atom, e in key:
        if atom[0] == "sym":
            name = atom[1]
            if name == "pi":
                pi_power += e
            elif name in PARAMS:
                if e < 0:
                    raise UnsupportedCombination("negative powers of theta are not supported")
                thetas.append((name, e))
            elif atom in _INDEX_ATOMS:
                use_index(_INDEX_ATOMS[atom])
                power += e
            elif atom == SIGN:
                sign = Sign.ALT
            elif atom == SIGN1:
                sign = Sign.ALT1
            else:
                raise UnsupportedCombination(f"{name} cannot appear in a series term")
        else:
            _, fn, frozen = atom
            c, ix, var = _split_argument(_thaw(frozen))
            use_index(ix)
            if var == "pi":
                if fn not in ("sinh", "cosh"):
                    raise UnsupportedCombination(f"{fn} of an integer multiple of pi is not a series factor")
                if hyp_arg is not None and hyp_arg != (c, ix):
                    raise UnsupportedCombination("hyperbolic factors must share one argument")
                hyp_arg = (c, ix)
                hyp_exps[fn] = hyp_exps.get(fn, 0) + e
            else:
                if e != 1:
                    raise UnsupportedCombination("theta factors must appear to the first power")
                factors.append(ThetaFactor(fn, var, c))
    if index is None:
        raise UnsupportedCombination("a series term must involve n")
    hyp = None
    scale = Fraction(1)
    if hyp_arg is not None:
        pattern = (hyp_exps.get("sinh", 0), hyp_exps.get("cosh", 0))
        if pattern != (0, 0):
            if pattern not in _HYP_BY_EXPONENTS:
                raise UnsupportedCombination(f"hyperbolic combination sinh^{pattern[0]} cosh^{pattern[1]} is outside the grammar")
            hyp = _HYP_BY_EXPONENTS[pattern]
            scale = hyp_arg[0]
    if len({f.param for f in factors}) != len(factors):
        raise UnsupportedCombination("at most one theta factor per parameter")
    return SeriesTerm(index, sign, power, hyp, scale, tuple(factors), Monomial(coeff, pi_power, tuple(thetas)))


def _bind_poly_monomial(key: tuple, coeff: Fraction) -> Monomial:
    pi_power = 0
    thetas = []
    for atom, e in key:
        if atom == ("sym", "pi"):
            pi_power += e
        elif atom[0] == "sym" and atom[1] in PARAMS and e > 0:
            thetas.append((atom[1], e))
        else:
            raise UnsupportedCombination("polynomial parts may only contain pi, theta and zeta(2k)")
    return Monomial(coeff, pi_power, tuple(thetas))


def _is_series(key: tuple) -> bool:
    return any(atom[0] == "call" or atom in _INDEX_ATOMS or atom in (SIGN, SIGN1) for atom, _ in key)


def parse_sum(text: str) -> tuple[tuple, ThetaPoly]:
    """Split an expression into series terms (anything with n) and a polynomial."""
    p = normalize(text)
    terms, monos = [], []
    for key, c in sorted(p.items()):
        if _is_series(key):
            terms.append(_bind_term(key, c))
        else:
            monos.append(_bind_poly_monomial(key, c))
    return tuple(terms), ThetaPoly(tuple(monos))


def parse_term(text: str) -> SeriesTerm:
    p = normalize(text)
    if len(p) != 1:
        raise UnsupportedCombination("expected a single series term")
    (key, c), = p.items()
    return _bind_term(key, c)


def parse_poly(text: str) -> ThetaPoly:
    p = normalize(text)
    return ThetaPoly(tuple(_bind_poly_monomial(k, c) for k, c in p.items()))


# --- kernel x base ------------------------------------------------------------


@dataclass(frozen=True)
class KernelBaseExpr:
    kernel: str
    base_numerator: str
    base_denominator: str
    function_id: str

    def __str__(self) -> str:
        return print_expr(self)


CATALOG = {
    "f1": ("pi/sin(pi z)", "cosh(theta z)", "sinh(pi z)^2"),
    "f2": ("pi/cos(pi z)", "sinh(theta z)", "cosh(pi z)^2"),
    "f3": ("pi/sin(pi z)", "cosh(theta z)", "cosh(pi z)^2"),
    "f4": ("pi/cos(pi z)", "sinh(theta z)", "sinh(pi z)^2"),
    "g1": ("pi*cot(pi z)", "cosh(theta z)", "(z^2 sinh(pi z)^2)"),
    "g2": ("pi*tan(pi z)", "cosh(theta z)", "(z^2 cosh(pi z)^2)"),
    "g3": ("pi*cot(pi z)", "cosh(theta z)", "(z^2 cosh(pi z)^2)"),
    "g4": ("pi*tan(pi z)", "cosh(theta z)", "(z^2 sinh(pi z)^2)"),
    "F": ("pi/sin(pi z)", "cosh(theta1 z) cos(theta2 z)", "sinh(pi z)^2"),
}


def _catalog_text(fid: str) -> str:
    kernel, num, den = CATALOG[fid]
    return f"{kernel} * pi^2 {num}/{den}"


_signatures: dict | None = None


def _catalog_signatures() -> dict:
    global _signatures
    if _signatures is None:
        _signatures = {_freeze(_normalize(parse_ast(_catalog_text(fid)))): fid for fid in CATALOG}
    return _signatures


_PRINTED_F = "pi/sin(pi z) * pi^2 cos(theta1 z) cos(theta2 z)/sinh(pi z)^2"


def parse(text: str) -> KernelBaseExpr:
    """Bind a kernel x base expression to its catalog function."""
    p = normalize(text)
    fid = _catalog_signatures().get(_freeze(p))
    if fid is None:
        hint = ""
        if _freeze(p) == _freeze(_normalize(parse_ast(_PRINTED_F))):
            hint = ("; the two-parameter function with cos(theta1 z) cos(theta2 z) does not produce the "
                    "cos*cos series it is usually quoted with, use cosh(theta1 z) cos(theta2 z)")
        raise UnsupportedCombination("expression is not one of the catalogued kernel x base combinations" + hint)
    kernel, num, den = CATALOG[fid]
    return KernelBaseExpr(kernel, num, den, fid)


def print_expr(expr: KernelBaseExpr) -> str:
    return _catalog_text(expr.function_id)


def expr_for(function_id: str) -> KernelBaseExpr:
    if function_id not in CATALOG:
        raise UnsupportedCombination(f"unknown function id {function_id!r}")
    kernel, num, den = CATALOG[function_id]
    return KernelBaseExpr(kernel, num, den, function_id)


# --- printing terms and polynomials -------------------------------------------


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _idx_text(index: Index) -> str:
    return "n" if index is Index.N else "(2n-1)"


def _arg_text(scale: Fraction, index: Index, var: str) -> str:
    core = f"{_idx_text(index)} {var}" if index is Index.ODD else f"{var} n" if var == "pi" else f"n {var}"
    if scale == 1:
        return core
    if scale.numerator == 1:
        return f"{core}/{scale.denominator}"
    if scale.denominator == 1:
        return f"{scale.numerator} {core}"
    return f"{scale.numerator} {core}/{scale.denominator}"


def _pow_text(base: str, e: int) -> str:
    return base if e == 1 else f"{base}^{e}"


_HYP_PARTS = {  # shape -> (numerator fn, denominator (fn, exp))
    "csch": (None, ("sinh", 1)), "sech": (None, ("cosh", 1)),
    "cosh_csch2": ("cosh", ("sinh", 2)), "sinh_sech2": ("sinh", ("cosh", 2)),
    "csch2": (None, ("sinh", 2)), "sech2": (None, ("cosh", 2)),
    "coth": ("coth", None), "tanh": ("tanh", None),
}


def term_to_text(term: SeriesTerm) -> str:
    """DSL text that parses back to ``term``."""
    w = term.weight
    num: list[str] = []
    den: list[str] = []
    c = w.coeff
    if abs(c.numerator) != 1:
        num.append(str(abs(c.numerator)))
    if c.denominator != 1:
        den.append(str(c.denominator))
    if w.pi_power > 0:
        num.append(_pow_text("pi", w.pi_power))
    elif w.pi_power < 0:
        den.append(_pow_text("pi", -w.pi_power))
    for p, e in w.thetas:
        num.append(_pow_text(p, e))
    idx = _idx_text(term.index)
    if term.power > 0:
        num.append(_pow_text(idx, term.power))
    elif term.power < 0:
        den.append(_pow_text(idx, -term.power))
    for f in term.theta_factors:
        num.append(f"{f.kind}({_arg_text(f.scale, term.index, f.param)})")
    if term.hyp is not None:
        arg = _arg_text(term.hyp_scale, term.index, "pi")
        top, bottom = _HYP_PARTS[term.hyp]
        if top:
            num.append(f"{top}({arg})")
        if bottom:
            den.append(_pow_text(f"{bottom[0]}({arg})", bottom[1]))
    text = " ".join(num) if num else "1"
    if den:
        text += "/" + (den[0] if len(den) == 1 else "(" + " ".join(den) + ")")
    if term.sign is Sign.ALT:
        text += " (-1)^n"
    elif term.sign is Sign.ALT1:
        text += " (-1)^(n-1)"
    return ("-" if c < 0 else "") + text


def monomial_to_text(m: Monomial) -> str:
    parts = []
    c = m.coeff
    if abs(c.numerator) != 1 or (m.pi_power == 0 and not m.thetas):
        parts.append(str(abs(c.numerator)))
    if m.pi_power:
        parts.append(_pow_text("pi", m.pi_power))
    for p, e in m.thetas:
        parts.append(_pow_text(p, e))
    text = " ".join(parts)
    if c.denominator != 1:
        text += f"/{c.denominator}"
    return ("-" if c < 0 else "") + text


def poly_to_text(poly: ThetaPoly) -> str:
    if not poly.terms:
        return "0"
    out = monomial_to_text(poly.terms[0])
    for m in poly.terms[1:]:
        t = monomial_to_text(m)
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def sum_to_text(terms, poly: ThetaPoly | None = None) -> str:
    pieces = [term_to_text(t) for t in terms]
    if poly:
        pieces.append(poly_to_text(poly))
    out = pieces[0] if pieces else "0"
    for p in pieces[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out

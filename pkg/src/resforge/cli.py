"""Command-line front end: verify, generate, sum, registry."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import mpmath
from mpmath.libmp import repr_dps, to_str

from . import dsl
from .errors import DivergentTerm, DomainError, ParseError, ResforgeError, TargetUnreachable, UnsupportedCombination
from .identities import identity_latex
from .identities import registry as reg
from .identities.generator import THEOREM_FUNCTIONS, generate_identity, generate_two_param
from .identities.model import ClosedFormEntry, Identity
from .numerics import PrecisionContext, context
from .summation import N_MAX, sum_term
from .verify import (
    DEFAULT_GRID,
    SUITES,
    TOL_E,
    TOL_P,
    VerificationReport,
    run_suite,
    verify_id,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "latex", "text")
ACCEPTABLE_ERRATA = ("sign_flip", "coefficient_mismatch")


@dataclass(frozen=True)
class Config:
    precision_bits: int = 192
    tolerance_e: Fraction = TOL_E
    tolerance_p: Fraction = TOL_P
    theta_grid: tuple = field(default=DEFAULT_GRID)
    n_max: int = N_MAX
    output_format: str = "text"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise DomainError("precision_bits must be at least 64")
        if self.tolerance_e <= 0 or self.tolerance_p <= 0 or self.n_max <= 0:
            raise DomainError("tolerances and n_max must be positive")
        if any(not abs(float(t)) < 3.14159 for t in self.theta_grid):
            raise DomainError("theta grid must lie inside (-pi, pi)")
        if self.output_format not in FORMATS:
            raise DomainError(f"output format must be one of {', '.join(FORMATS)}")


def default_bits() -> int:
    raw = os.environ.get("RESFORGE_BITS")
    if raw is None:
        return 192
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"RESFORGE_BITS must be an integer, got {raw!r}") from None


# -- serialisation ------------------------------------------------------------------


def mpf_to_str(x, bits: int) -> str:
    """Decimal string that reads back to the same binary value at `bits`."""
    x = mpmath.mpf(x) if not hasattr(x, "_mpf_") else x
    return to_str(x._mpf_, repr_dps(bits))


def _theta_json(theta):
    if theta is None:
        return None
    if isinstance(theta, (tuple, list)):
        return [_theta_json(t) for t in theta]
    return str(Fraction(theta)) if isinstance(theta, (int, Fraction)) else str(theta)


def _theta_back(value):
    if value is None:
        return None
    if isinstance(value, list):
        return tuple(_theta_back(v) for v in value)
    return Fraction(value)


def report_to_dict(r: VerificationReport) -> dict:
    bits = r.precision_bits + 32
    return {
        "id": r.identity_id,
        "status": r.status,
        "precision_bits": r.precision_bits,
        "tolerance": mpf_to_str(r.tolerance, bits),
        "samples": [{"theta": _theta_json(t), "residual": mpf_to_str(res, bits)}
                    for t, res in zip(r.theta_samples, r.residuals)],
        "suggestion": r.suggested_correction,
        "terms_used": r.total_terms,
        "elapsed_ms": round(r.elapsed * 1000, 3),
    }


def report_from_dict(d: dict, ctx: PrecisionContext | None = None) -> VerificationReport:
    ctx = ctx or context(d["precision_bits"])
    return VerificationReport(
        identity_id=d["id"],
        theta_samples=[_theta_back(s["theta"]) for s in d["samples"]],
        residuals=[ctx.mp.mpf(s["residual"]) for s in d["samples"]],
        status=d["status"],
        suggested_correction=d["suggestion"],
        precision_bits=d["precision_bits"],
        total_terms=d["terms_used"],
        elapsed=d["elapsed_ms"] / 1000,
        tolerance=ctx.mp.mpf(d["tolerance"]),
    )


def _short(x) -> str:
    return mpmath.nstr(x, 3) if x is not None else ""


def render_reports(reports: list[VerificationReport], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([report_to_dict(r) for r in reports], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "status", "precision_bits", "tolerance", "max_residual", "suggestion", "terms_used",
                    "elapsed_ms"])
        for r in reports:
            sug = r.suggested_correction["value"] if r.suggested_correction else ""
            w.writerow([r.identity_id, r.status, r.precision_bits, _short(r.tolerance), _short(r.max_residual), sug,
                        r.total_terms, round(r.elapsed * 1000, 3)])
        return buf.getvalue().rstrip("\n")
    if fmt == "latex":
        lines = [r"\begin{tabular}{llll}", r"\hline", r"id & status & max residual & suggested correction \\",
                 r"\hline"]
        for r in reports:
            sug = r.suggested_correction["value"] if r.suggested_correction else ""
            lines.append(rf"\texttt{{{r.identity_id}}} & {r.status.replace('_', chr(92) + '_')} & "
                         rf"{_short(r.max_residual)} & \verb|{sug}| \\")
        lines += [r"\hline", r"\end{tabular}"]
        return "\n".join(lines)
    width = max((len(r.identity_id) for r in reports), default=2)
    out = [f"{'id':<{width}}  {'status':<20}  {'max residual':>12}  {'terms':>7}  {'ms':>8}"]
    for r in reports:
        out.append(f"{r.identity_id:<{width}}  {r.status:<20}  {_short(r.max_residual):>12}  "
                   f"{r.total_terms:>7}  {r.elapsed * 1000:>8.1f}")
    errata = [r for r in reports if r.status != "pass"]
    if errata:
        out += ["", "errata:"]
        for r in errata:
            sug = r.suggested_correction
            out.append(f"  {r.identity_id}: {r.status}"
                       + (f" -> {sug['value']} ({sug['description']})" if sug else ""))
    return "\n".join(out)


# -- errata -------------------------------------------------------------------------


def load_errata(source: str | None) -> dict:
    if source is None:
        return {}
    if source == "known":
        text = resources.files("resforge").joinpath("data/errata.json").read_text()
    else:
        with open(source) as fh:
            text = fh.read()
    entries = json.loads(text)
    if not isinstance(entries, list) or not all(isinstance(e, dict) and {"id", "accepted_status"} <= set(e)
                                                for e in entries):
        raise DomainError("errata file must be a JSON list of {id, accepted_status} objects")
    return {e["id"]: e["accepted_status"] for e in entries}


def exit_code(reports: list[VerificationReport], errata: dict) -> int:
    for r in reports:
        if r.status == "pass":
            continue
        if r.status in ACCEPTABLE_ERRATA and errata.get(r.identity_id) == r.status:
            continue
        return EXIT_FAIL
    return EXIT_OK


# -- commands -----------------------------------------------------------------------


def _parse_grid(text: str | None):
    if text is None:
        return None
    return tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())


def cmd_verify(args) -> int:
    grid = _parse_grid(args.grid)
    # Config validates the flags; tolerances left unset keep the per-group defaults
    cfg = Config(
        precision_bits=args.bits,
        tolerance_e=Fraction(args.tolerance_e) if args.tolerance_e else TOL_E,
        tolerance_p=Fraction(args.tolerance_p) if args.tolerance_p else TOL_P,
        theta_grid=grid or DEFAULT_GRID,
        n_max=args.n_max,
        output_format=args.format,
    )
    ctx = context(cfg.precision_bits)
    errata = load_errata(args.expect_errata)
    tol_e = cfg.tolerance_e if args.tolerance_e else None
    tol_p = cfg.tolerance_p if args.tolerance_p else None
    if args.suite:
        reports = run_suite(args.suite, ctx, kmax=args.kmax, tolerance_e=tol_e, tolerance_p=tol_p, grid=grid,
                            n_max=args.n_max)
    else:
        entry = reg.lookup(args.id)
        tol = None
        if isinstance(entry, Identity):
            tol = tol_p if entry.convergence == "P" else tol_e
        elif isinstance(entry, ClosedFormEntry):
            tol = tol_e
        reports = [verify_id(args.id, ctx, grid, tol, args.n_max)]
    print(render_reports(reports, cfg.output_format))
    return exit_code(reports, errata)


def _identity_text(identity: Identity) -> str:
    return f"{identity.id}: {dsl.sum_to_text(identity.terms, identity.poly)} = 0"


def cmd_generate(args) -> int:
    ctx = context(args.bits)
    if args.expr is not None:
        fid = dsl.parse(args.expr).function_id
    else:
        fid = args.function
    if fid == "F":
        identity = generate_two_param(ctx=ctx)
        if args.theta2 is not None:
            if Fraction(args.theta2) != 0:
                raise DomainError("--theta2 only supports specialising to 0")
            identity = identity.specialize_zero("theta2", "gen-F(theta2=0)").rename({"theta1": "theta"})
    else:
        if args.theta2 is not None:
            raise DomainError("--theta2 applies to the two-parameter function F only")
        identity = generate_identity(fid, ctx)
    if args.latex or args.format == "latex":
        print(identity_latex(identity))
    elif args.format == "json":
        print(json.dumps(identity_to_dict(identity), indent=2))
    else:
        print(_identity_text(identity))
        source = reg.THEOREM_SOURCE.get(fid) or ("eq2.1" if args.theta2 is not None else None)
        if source:
            match = identity.equivalent(reg.theorem(source))
            print(f"structurally equal to {source}: {'yes' if match else 'no'}")
    return EXIT_OK


def _sum_theta(args, term) -> dict:
    values = {}
    if args.theta is not None:
        values["theta"] = args.theta
    if args.theta1 is not None:
        values["theta1"] = args.theta1
    if args.theta2 is not None:
        values["theta2"] = args.theta2
    missing = [p for p in term.params if p not in values]
    if missing:
        raise DomainError(f"term needs a value for {', '.join(missing)}")
    return {p: values[p] for p in term.params}


def cmd_sum(args) -> int:
    ctx = context(args.bits)
    term = dsl.parse_term(args.term)
    thetas = _sum_theta(args, term)
    target = Fraction(args.target)
    try:
        r = sum_term(term, thetas, target, ctx, n_max=args.n_max, method=args.method)
    except DivergentTerm as e:
        print(f"DivergentTerm: {e}", file=sys.stderr)
        return EXIT_FAIL
    except TargetUnreachable as e:
        print(f"TargetUnreachable: {e}", file=sys.stderr)
        return EXIT_FAIL
    digits = max(10, min(ctx.bits * 3 // 10, int(-mpmath.log10(float(target)))))
    print(f"value       {ctx.mp.nstr(r.value, digits)}")
    print(f"tail_bound  {ctx.mp.nstr(r.tail_bound, 5)}")
    print(f"terms_used  {r.terms_used}")
    print(f"method      {r.method}")
    return EXIT_OK


def term_to_dict(t) -> dict:
    return {
        "text": dsl.term_to_text(t),
        "index": t.index.value,
        "sign": t.sign.value,
        "power": t.power,
        "hyp": t.hyp,
        "hyp_scale": str(t.hyp_scale),
        "theta_factors": [{"kind": f.kind, "param": f.param, "scale": str(f.scale)} for f in t.theta_factors],
        "weight": {"coeff": str(t.weight.coeff), "pi_power": t.weight.pi_power,
                   "thetas": {p: e for p, e in t.weight.thetas}},
    }


def _poly_to_list(poly) -> list:
    return [{"coeff": str(m.coeff), "pi_power": m.pi_power, "thetas": {p: e for p, e in m.thetas}}
            for m in poly.terms]


def identity_to_dict(identity: Identity) -> dict:
    return {
        "id": identity.id,
        "group": identity.group,
        "params": list(identity.params),
        "convergence": identity.convergence,
        "terms": [term_to_dict(t) for t in identity.terms],
        "polynomial": _poly_to_list(identity.poly),
        "polynomial_text": dsl.poly_to_text(identity.poly),
        "printed_rhs": None if identity.rhs is None else dsl.poly_to_text(identity.rhs),
    }


def closed_form_to_dict(entry: ClosedFormEntry) -> dict:
    cf = entry.form
    return {
        "id": entry.id,
        "group": entry.group,
        "term": term_to_dict(entry.term),
        "closed_form": {"coefficient": str(cf.coefficient), "additive": str(cf.additive),
                        "monomial": {"pi": str(cf.pi_power), "gamma14": cf.gamma14, "gamma34": cf.gamma34,
                                     "sqrt2": cf.sqrt2}},
    }


def registry_to_dict(kmax: int = 3) -> dict:
    r = reg.registry(kmax)
    return {
        "identities": [identity_to_dict(i) for i in r.identities],
        "closed_forms": [closed_form_to_dict(c) for c in r.closed_forms],
        "families": [
            {"id": f.id, "group": f.group,
             "instances": [{"k": k, "term": dsl.term_to_text(f.term(k)),
                            "monomial": closed_form_to_dict(ClosedFormEntry(f"{f.id}(k={k})", f.term(k),
                                                                            f.monomial(k)))["closed_form"]["monomial"]}
                           for k in range(1, kmax + 1)]}
            for f in r.families
        ],
    }


def cmd_registry(args) -> int:
    text = json.dumps(registry_to_dict(args.kmax), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


def _suite_arg(text: str) -> str:
    base = text.split("(")[0]
    if base not in SUITES:
        raise argparse.ArgumentTypeError(f"unknown suite {text!r}; choose from {', '.join(SUITES)}")
    return text


def build_parser() -> argparse.ArgumentParser:
    bits = default_bits()
    p = argparse.ArgumentParser(prog="resforge", description="Residue-generated hyperbolic series identities.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify registry identities and closed forms")
    sel = v.add_mutually_exclusive_group(required=True)
    sel.add_argument("--suite", type=_suite_arg)
    sel.add_argument("--id")
    v.add_argument("--bits", type=int, default=bits)
    v.add_argument("--format", choices=FORMATS, default="text")
    v.add_argument("--expect-errata", metavar="FILE|known")
    v.add_argument("--kmax", type=int, default=3)
    v.add_argument("--grid", help="comma-separated theta values, e.g. 0,1/2,-1")
    v.add_argument("--tolerance-e")
    v.add_argument("--tolerance-p")
    v.add_argument("--n-max", type=int, default=N_MAX)
    v.set_defaults(handler=cmd_verify)

    g = sub.add_parser("generate", help="derive an identity from a combined function")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--function", choices=(*THEOREM_FUNCTIONS, "F"))
    src.add_argument("--expr")
    g.add_argument("--theta2")
    g.add_argument("--latex", action="store_true")
    g.add_argument("--format", choices=FORMATS, default="text")
    g.add_argument("--bits", type=int, default=bits)
    g.set_defaults(handler=cmd_generate)

    s = sub.add_parser("sum", help="certified sum of one series term")
    s.add_argument("--term", required=True)
    s.add_argument("--theta")
    s.add_argument("--theta1")
    s.add_argument("--theta2")
    s.add_argument("--target", default="1e-20")
    s.add_argument("--bits", type=int, default=bits)
    s.add_argument("--n-max", type=int, default=N_MAX)
    s.add_argument("--method", choices=("split_polylog", "split_euler_maclaurin"))
    s.set_defaults(handler=cmd_sum)

    r = sub.add_parser("registry", help="export the registry as JSON")
    r.add_argument("--kmax", type=int, default=3)
    r.add_argument("--output")
    r.set_defaults(handler=cmd_registry)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.handler(args)
    except (ParseError, UnsupportedCombination, DomainError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResforgeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

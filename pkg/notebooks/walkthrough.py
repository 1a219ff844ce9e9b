"""A guided tour: derive identities, check the registry, look at the errata.

Run with ``python3 notebooks/walkthrough.py``; it finishes in well under a minute.
"""

from fractions import Fraction

import mpmath

from resforge import context, generate_identity, run_suite, sum_term
from resforge.dsl import parse_term, sum_to_text
from resforge.identities import differentiate, identity_latex
from resforge.identities import registry as R

ctx = context(192)

# Derive an identity from a combined function and compare it with the registry.
gen = generate_identity("f1", ctx)
print("generated:", sum_to_text(gen.terms, gen.poly), "= 0")
print("same as eq2.1:", gen.equivalent(R.theorem("eq2.1")))
print(identity_latex(gen))

# Differentiating twice in theta gives the k = 1 corollary.
print("d^2/dtheta^2 matches eq2.10(k=1):", differentiate(gen, 2).equivalent(R.corollary("eq2.10", 1)))

# Certified sums come with a rigorous truncation bound.
for text in ("(-1)^(n-1)/cosh(pi n)", "coth(pi n)/n^3"):
    r = sum_term(parse_term(text), target_error=Fraction(1, 10**40), ctx=ctx)
    print(f"{text:28s} {mpmath.nstr(r.value, 30)}  bound {mpmath.nstr(r.tail_bound, 3)}  ({r.method})")

# Everything that does not pass as printed, with the correction the verifier proposes.
for suite in ("theorems", "corollaries", "examples25", "closed31", "closed32"):
    for rep in run_suite(suite, ctx):
        if rep.status != "pass":
            print(f"{rep.identity_id:24s} {rep.status:22s} {rep.suggested_correction['value']}")

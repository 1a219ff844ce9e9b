import pytest
from hypothesis import given
from hypothesis import strategies as st

from resforge.dsl import (
    CATALOG, MAX_LENGTH, expr_for, normalize, parse, parse_sum, parse_term, print_expr, sum_to_text, term_to_text,
)
from resforge.errors import ParseError, UnsupportedCombination
from resforge.identities import registry as R


def _all_identities():
    reg = R.registry(3)
    return list(reg.identities)


@pytest.mark.parametrize("identity", _all_identities(), ids=lambda i: i.id)
def test_identity_text_roundtrip(identity):
    terms, poly = parse_sum(sum_to_text(identity.terms, identity.poly))
    assert terms == identity.terms
    assert poly == identity.poly


@pytest.mark.parametrize("entry", R.registry(3).closed_forms, ids=lambda e: e.id)
def test_closed_form_term_roundtrip(entry):
    assert parse_term(term_to_text(entry.term)) == entry.term


@pytest.mark.parametrize("fid", sorted(CATALOG))
def test_kernel_base_roundtrip(fid):
    expr = parse(print_expr(parse(print_expr(expr_for(fid)))))
    assert expr.function_id == fid


def test_kernel_base_accepts_reordering_and_unicode():
    assert parse("π^2 cosh(θ z) * π / sin(π z) / sinh(π z)^2").function_id == "f1"
    assert parse("pi cot(pi z) cosh(theta z) pi^2 / (z^2 sinh(pi z)^2)").function_id == "g1"


def test_cos_cos_combination_rejected_with_hint():
    with pytest.raises(UnsupportedCombination, match="cosh\\(theta1 z\\) cos\\(theta2 z\\)"):
        parse("pi/sin(pi z) * pi^2 cos(theta1 z) cos(theta2 z)/sinh(pi z)^2")


def test_equivalent_spellings_normalize_equal():
    a = parse_term("n^3 (-1)^(n-1) / sinh(pi n)")
    b = parse_term("-(-1)^n n^3 csch(n pi)")
    assert a.canonical() == b.canonical()


@pytest.mark.parametrize("text,error", [
    ("1+", ParseError), ("sin(", ParseError), ("x", ParseError), ("2 $ 3", ParseError),
    ("n^999", UnsupportedCombination), ("1/0", UnsupportedCombination),
    ("sin(n)/n + n", UnsupportedCombination),
])
def test_errors(text, error):
    with pytest.raises(error):
        parse_term(text)


def test_length_and_depth_limits():
    with pytest.raises(ParseError):
        normalize("1+" * MAX_LENGTH + "1")
    with pytest.raises(ParseError):
        normalize("(" * 500 + "1" + ")" * 500)


_ALPHABET = "0123456789 +-*/^().,npizthetasincohqrlu²θπ"


@given(st.text(alphabet=_ALPHABET, max_size=60))
def test_fuzz_never_panics(text):
    for fn in (normalize, parse_sum, parse):
        try:
            fn(text)
        except (ParseError, UnsupportedCombination):
            pass


_TOKENS = ["n", "pi", "theta", "2", "(2n-1)", "sinh(pi n)", "cosh(pi n)", "cos(n theta)",
           "sin(n theta)", "(-1)^n", "+", "-", "*", "/", "^2", "(", ")"]


@given(st.lists(st.sampled_from(_TOKENS), max_size=25))
def test_token_fuzz_never_panics(tokens):
    try:
        parse_sum(" ".join(tokens))
    except (ParseError, UnsupportedCombination):
        pass

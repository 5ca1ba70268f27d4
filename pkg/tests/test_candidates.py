import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (EXAMPLE1, EXAMPLE1_RHS, EXAMPLE2_RHS, example2_coefficients, example4_table,
                     family_I, family_II, rel_close)
from linearize4.candidates import (NAMES_I, NAMES_II, CandidateI, NeitherForm, classify,
                                   coefficients_from_table, extract_candidate_I,
                                   forward_coefficients_I, forward_coefficients_II, parse_rhs,
                                   rhs_from_candidate_I, zero_coefficients)
from linearize4.errors import DegenerateMap, ShapeMismatch
from linearize4.exprcore import diff, evaluate, parse_expr, simplify, var

X, Y = var("x"), var("y")


def _samples(n=25, seed=11):
    rng = np.random.default_rng(seed)
    return rng.uniform(0.5, 2.0, n), rng.uniform(0.5, 2.0, n)


def same_values(c, table, n=25, tol=1e-12):
    xs, ys = _samples(n)
    for name, text in table.items():
        want, _ = evaluate(parse_expr(str(text)) if isinstance(text, str) else text,
                           {"x": xs, "y": ys})
        got, _ = evaluate(c[name], {"x": xs, "y": ys})
        if not rel_close(np.broadcast_to(got, xs.shape), np.broadcast_to(want, xs.shape), tol):
            return False
    return True


# ---------------------------------------------------------------------------
# extraction and classification

def test_extract_example1():
    c = extract_candidate_I(parse_rhs(EXAMPLE1_RHS))
    assert same_values(c, EXAMPLE1)
    assert simplify(c.A1) is simplify(parse_expr("4/y"))
    assert c.D4.is_zero() and c.D3.is_zero() and c.D1.is_zero()


def test_extract_zero_rhs():
    c = extract_candidate_I(parse_rhs("0"))
    assert all(e.is_zero() for _, e in c.items())


def test_extract_rejects_cubic_second_derivative():
    with pytest.raises(ShapeMismatch) as info:
        extract_candidate_I(parse_rhs("x*y2^3 + y1"))
    assert len(info.value.monomials) == 1
    assert "y2^3" in info.value.monomials[0]


def test_extract_rejects_non_polynomial():
    with pytest.raises(ShapeMismatch):
        extract_candidate_I(parse_rhs("y2*y3/y1"))


def test_classify():
    v = classify(parse_rhs(EXAMPLE1_RHS))
    assert isinstance(v, CandidateI) and same_values(v.coefficients, EXAMPLE1)
    v = classify(parse_rhs("0"))
    assert isinstance(v, CandidateI)
    # the second-form fixture (r = 0, K7 = -x, K6 = -1) solved for y4
    v = classify(parse_rhs("x*y1^5 + y1^4 + 10*y2*y3/y1 - 15*y2^3/y1^2"))
    assert isinstance(v, NeitherForm)
    assert "candidateII" in v.reason


def test_example2_rhs_classifies_with_parameter():
    rhs = parse_rhs(EXAMPLE2_RHS, parameters=("a",))
    c = classify(rhs, {"a": 3}).coefficients.bind()
    assert same_values(c, example2_coefficients(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_rhs_roundtrip_through_first_form(seed):
    rng = np.random.default_rng(seed)
    c = forward_coefficients_I(*family_I(rng))
    back = extract_candidate_I(rhs_from_candidate_I(c))
    assert same_values(back, dict(c.items()), n=8, tol=1e-10)


# ---------------------------------------------------------------------------
# coefficient bundles

def test_bundles_are_immutable_and_complete():
    c = zero_coefficients("I")
    with pytest.raises(AttributeError):
        c.A1 = X
    with pytest.raises(ValueError):
        coefficients_from_table({"A1": "0"}, "I")
    with pytest.raises(ValueError):
        coefficients_from_table(dict(EXAMPLE1, Z9="0"), "I")
    d = c.replace(D1=1)
    assert d.D1.value == 1 and c.D1.is_zero()


def test_parameter_binding():
    table = dict({n: "0" for n in NAMES_I}, D0="a*y")
    c = coefficients_from_table(table, "I", {"a": 2})
    assert simplify(c.bind().D0) is simplify(parse_expr("2*y"))


# ---------------------------------------------------------------------------
# forward oracle

def test_forward_I_identity_is_zero():
    c = forward_coefficients_I(X, Y, 0, 0)
    assert all(simplify(e).is_zero() for _, e in c.items())


def test_forward_I_example1():
    c = forward_coefficients_I(X, X ** 2 * Y ** 2, 0, 1)
    assert same_values(c, EXAMPLE1)


@pytest.mark.parametrize("a", [2, 3, 5])
def test_forward_I_example2(a):
    c = forward_coefficients_I(X, Y ** a, 0, 0)
    assert same_values(c, example2_coefficients(a))


def test_forward_I_degenerate():
    with pytest.raises(DegenerateMap):
        forward_coefficients_I(X + Y, Y, 0, 0)
    with pytest.raises(DegenerateMap):
        forward_coefficients_I(X, X ** 2, 0, 0)


def test_forward_II_example4():
    c = forward_coefficients_II(Y, X, 1, 1)
    assert same_values(c, example4_table())


def test_forward_II_zero_target():
    c = forward_coefficients_II(Y, X, 0, 0)
    assert same_values(c, {n: "0" for n in NAMES_II})


def test_forward_II_degenerate():
    with pytest.raises(DegenerateMap):
        forward_coefficients_II(X, Y, 0, 0)
    with pytest.raises(DegenerateMap):
        forward_coefficients_II(X + Y, X + Y, 0, 0)


def test_forward_II_shear_against_chain_rule():
    from linearize4.verify import chainrule_coefficient_oracle
    c = forward_coefficients_II(X + Y, X, 0, 0)
    xs, ys = _samples(20, seed=4)
    oracle = chainrule_coefficient_oracle(X + Y, X, 0, 0, "II", list(zip(xs, ys)))
    for n in NAMES_II:
        got, _ = evaluate(c[n], {"x": xs, "y": ys})
        assert rel_close(np.broadcast_to(got, xs.shape), oracle[n], 1e-10), n


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_forward_II_family_has_r(seed):
    phi, psi, a, b = family_II(np.random.default_rng(seed))
    c = forward_coefficients_II(phi, psi, a, b)
    xs, ys = _samples(6)
    r, _ = evaluate(c.r, {"x": xs, "y": ys})
    want, _ = evaluate(diff(phi, "x") / diff(phi, "y"), {"x": xs, "y": ys})
    assert rel_close(np.broadcast_to(r, xs.shape), want, 1e-13)

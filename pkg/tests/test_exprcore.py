import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import fd_partial, random_expr, random_polynomial, rel_close
from linearize4.errors import ExprSyntaxError, SingularPoint, UnboundParameter, UnknownIdentifier
from linearize4.exprcore import (SamplePlan, compile_exprs, const, cos, diff, diff_multi,
                                 evaluate, evaluate_scalar, exp, free_vars, jet_eval,
                                 laurent_integrate, log, parse_expr, simplify, sin, sqrt,
                                 substitute, to_string, var)

X, Y = var("x"), var("y")

leaves = st.one_of(
    st.sampled_from([X, Y, var("a")]),
    st.fractions(min_value=-50, max_value=50, max_denominator=12).map(const),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: p[0] + p[1]),
        st.tuples(children, children).map(lambda p: p[0] - p[1]),
        st.tuples(children, children).map(lambda p: p[0] * p[1]),
        st.tuples(children, children).filter(lambda p: not p[1].is_zero()).map(lambda p: p[0] / p[1]),
        st.tuples(children, st.integers(-3, 4)).filter(lambda p: p[1] >= 0 or not p[0].is_zero())
        .map(lambda p: p[0] ** p[1]),
        children.map(lambda e: -e),
        st.tuples(st.sampled_from([sin, cos, exp, log, sqrt]), children).map(lambda p: p[0](p[1])),
    )


exprs = st.recursive(leaves, _extend, max_leaves=12)


# ---------------------------------------------------------------------------
# parsing and printing

def test_parse_quotient():
    e = parse_expr("4/y")
    assert e.kind == "div" and e.args[0] == const(4) and e.args[1] == Y


def test_parse_product_of_powers():
    e = parse_expr("x^2*y^2")
    assert e.kind == "mul"
    assert [a.kind for a in e.args] == ["pow", "pow"]
    assert [a.value for a in e.args] == [2, 2]


def test_implicit_multiplication_is_rejected():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("2x")
    assert info.value.position == 2
    assert "column 2" in str(info.value)


def test_unknown_identifier_reports_position():
    with pytest.raises(UnknownIdentifier) as info:
        parse_expr("x + foo")
    assert info.value.name == "foo" and info.value.position == 5


def test_parameters_must_be_declared():
    assert free_vars(parse_expr("a*x", parameters=("a",))) == {"a", "x"}
    with pytest.raises(UnknownIdentifier):
        parse_expr("a*x")


def test_precedence_and_associativity():
    assert evaluate_scalar(parse_expr("2^3^2")) == 512
    assert evaluate_scalar(parse_expr("-2^2")) == -4
    assert evaluate_scalar(parse_expr("8/4/2")) == 1
    assert evaluate_scalar(parse_expr("1 - 2 - 3")) == -4
    assert evaluate_scalar(parse_expr("2^-1")) == 0.5


def test_decimals_are_exact():
    assert parse_expr("0.1").value == Fraction(1, 10)
    assert parse_expr("1.5e-3").value == Fraction(3, 2000)


@settings(max_examples=300, deadline=None)
@given(exprs)
def test_print_parse_roundtrip(e):
    assert parse_expr(to_string(e), parameters=("a",)) is e


def test_hash_consing_gives_identity():
    assert parse_expr("x*y + 1") is parse_expr("x * y+1")


# ---------------------------------------------------------------------------
# differentiation

def test_diff_examples():
    assert simplify(diff(parse_expr("x^2*y"), "x")) is simplify(parse_expr("2*x*y"))
    assert simplify(diff(parse_expr("4/y"), "y")) is simplify(parse_expr("-4/y^2"))
    e = diff(diff(parse_expr("exp(x*y)"), "x"), "y")
    assert evaluate_scalar(e, x=1.0, y=1.0) == pytest.approx(2 * math.e, rel=1e-14)


def test_diff_multi_matches_repeated_diff():
    e = parse_expr("sin(x*y)/(1 + x^2)")
    assert diff_multi(e, "xxy") is diff(diff(diff(e, "x"), "x"), "y")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_diff_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    e = random_expr(rng, 3)
    x0, y0 = rng.uniform(0.6, 1.9, 2)
    f = lambda a, b: evaluate_scalar(e, x=a, y=b)
    for v, (i, j) in (("x", (1, 0)), ("y", (0, 1))):
        exact = evaluate_scalar(diff(e, v), x=x0, y=y0)
        assert rel_close(exact, fd_partial(f, x0, y0, i, j, h=1e-4), 1e-6)


def test_simplify_collects_terms():
    assert str(simplify(parse_expr("x*y + y*x - 2*x*y"))) == "0"
    assert str(simplify(parse_expr("(x + 1)^2 - x^2 - 2*x"))) == "1"
    assert str(simplify(parse_expr("2*(x*y)"))) == "2*x*y"


def test_laurent_integration():
    assert laurent_integrate(parse_expr("x^2*y"), "y") is simplify(parse_expr("x^2*y^2/2"))
    assert laurent_integrate(parse_expr("2/y"), "y") is simplify(parse_expr("2*log(y)"))
    assert laurent_integrate(parse_expr("sin(y)"), "y") is None


# ---------------------------------------------------------------------------
# evaluation

def test_evaluate_masks_singular_points():
    vals, bad = evaluate(parse_expr("1/(x - 1)"), {"x": np.array([0.5, 1.0, 2.0])})
    assert bad.tolist() == [False, True, False]
    vals, bad = evaluate(parse_expr("log(x)"), {"x": np.array([0.0, 1.0])})
    assert bad.tolist() == [True, False]


def test_exact_evaluation_uses_fractions():
    vals, bad = evaluate(parse_expr("1/3 + x"), {"x": np.array([Fraction(1, 6)], dtype=object)},
                         exact=True)
    assert vals[0] == Fraction(1, 2)


def test_compiled_functions_agree_with_evaluate():
    rng = np.random.default_rng(3)
    es = [random_expr(rng, 3) for _ in range(10)]
    fn = compile_exprs(es, ("x", "y"), vector=True)
    xs, ys = rng.uniform(0.6, 1.9, (2, 7))
    got = fn(xs, ys)
    want, _ = evaluate(es, {"x": xs, "y": ys})
    for g, w in zip(got, want):
        assert rel_close(np.broadcast_to(g, xs.shape), w, 1e-13)


def test_substitute():
    e = substitute(parse_expr("a*x + y", parameters=("a",)), {"a": 2, "y": X})
    assert simplify(e) is simplify(parse_expr("3*x"))


# ---------------------------------------------------------------------------
# jets

def test_jet_examples():
    j = jet_eval(parse_expr("x^2*y"), (1, 2), 2)
    assert j.coefficient((1, 0)) == 4
    c = jet_eval(const(Fraction(7, 3)), (1, 1), 4)
    assert c.value == Fraction(7, 3)
    assert all(c.coefficient((i, k - i)) == 0 for k in range(1, 5) for i in range(k + 1))


def test_jet_of_reciprocal_matches_finite_differences():
    j = jet_eval(parse_expr("8/x"), (2.0, 1.0), 3)
    f = lambda a, b: 8 / a
    for i in range(1, 4):
        assert rel_close(j.derivative((i, 0)), fd_partial(f, 2.0, 1.0, i, 0, h=1e-2), 1e-6)


def test_jet_domain_errors():
    with pytest.raises(SingularPoint):
        jet_eval(parse_expr("1/(x - 1)"), (1, 1), 2)
    with pytest.raises(SingularPoint):
        jet_eval(parse_expr("log(x - 1)"), (1, 1), 2)
    with pytest.raises(SingularPoint):
        jet_eval(parse_expr("sqrt(x - 2)"), (1, 1), 2)
    with pytest.raises(UnboundParameter):
        jet_eval(parse_expr("a*x", parameters=("a",)), (1, 1), 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_exact_jets_equal_symbolic_derivatives(seed):
    rng = np.random.default_rng(seed)
    e = random_polynomial(rng)
    p = (Fraction(int(rng.integers(1, 9)), 4), Fraction(int(rng.integers(1, 9)), 4))
    j = jet_eval(e, p, 3)
    for i in range(4):
        for k in range(4 - i):
            d = diff_multi(e, "x" * i + "y" * k)
            want, _ = evaluate(d, {"x": np.array([p[0]], dtype=object),
                                   "y": np.array([p[1]], dtype=object)}, exact=True)
            want = want[0] if np.ndim(want) else want
            assert j.derivative((i, k)) == want


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_jet_product_rule(seed):
    rng = np.random.default_rng(seed)
    f, g = random_expr(rng, 3), random_expr(rng, 3)
    p = tuple(rng.uniform(0.6, 1.9, 2))
    jf, jg, jfg = (jet_eval(e, p, 4).to_float() for e in (f, g, f * g))
    prod = jf * jg
    assert rel_close(np.asarray(prod.c, float), np.asarray(jfg.c, float), 1e-12)


def test_jet_arithmetic_identities():
    p = (1.3, 0.7)
    a = jet_eval(parse_expr("exp(x)*sin(y)"), p, 5).to_float()
    b = jet_eval(parse_expr("1 + x^2"), p, 5).to_float()
    assert rel_close(((a / b) * b).c, a.c, 1e-12)
    assert rel_close(a.apply("log" if a.value > 0 else "exp").c,
                     jet_eval(parse_expr("log(exp(x)*sin(y))") if a.value > 0
                              else parse_expr("exp(exp(x)*sin(y))"), p, 5).to_float().c, 1e-12)


def test_sample_plan_validation():
    with pytest.raises(ValueError):
        SamplePlan(box=((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        SamplePlan(points=0)
    plan = SamplePlan(seed=5)
    xs1, _ = plan.draw(plan.rng(), 4, False)
    xs2, _ = plan.draw(plan.rng(), 4, False)
    assert np.array_equal(xs1, xs2)

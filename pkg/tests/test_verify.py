import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from helpers import (BOX, EXAMPLE1, example4_table, family_I, family_II, random_expr, rel_close,
                     t_expr)
from linearize4.candidates import (LinearTarget, PointMap, coefficients_from_table,
                                   forward_coefficients_I, zero_coefficients)
from linearize4.errors import CharacteristicDirection
from linearize4.exprcore import diff, evaluate, evaluate_scalar, var
from linearize4.verify import (chainrule_coefficient_oracle, equation_rhs, integrate_trace,
                               pushforward, roundtrip_check)

X, Y = var("x"), var("y")
YS = [var(f"y{k}") for k in range(1, 5)]


def total_x(e):
    """Total x-derivative with y1..y4 standing for y', ..., y''''."""
    out = diff(e, "x") + diff(e, "y") * YS[0]
    for k in range(3):
        out = out + diff(e, f"y{k + 1}") * YS[k + 1]
    return out


def guarded_value(e, env):
    """Value at one point; ValueError if the evaluator had to guard a denominator."""
    (val,), bad = evaluate([e], {k: np.array([float(v)]) for k, v in env.items()})
    if bad.any():
        raise ValueError("oracle point is too close to a singularity")
    return float(val[0])


def symbolic_pushforward(phi, psi, x0, state):
    """u, u', ..., u'''' by iterating u^(k+1) = D_x(u^(k)) / D_x(phi)."""
    env = dict(x=x0, y=state[0], **{f"y{k}": state[k] for k in range(1, 5)})
    lphi = total_x(phi)
    u = psi
    out = [guarded_value(u, env)]
    for _ in range(4):
        u = total_x(u) / lphi
        out.append(guarded_value(u, env))
    return [guarded_value(phi, env)] + out


# ---------------------------------------------------------------------------
# pushforward

def test_identity_pushforward():
    state = (0.8, 0.3, -0.2, 1.1, 0.4)
    got = pushforward((X, Y), 1.2, state)
    assert got[0] == pytest.approx(1.2)
    assert rel_close(got[1:], state, 1e-14)


def test_pushforward_along_constant_solution():
    for x0 in (0.7, 1.5):
        got = pushforward((X, X ** 2 * Y ** 2), x0, (1.0, 0, 0, 0, 0))
        assert rel_close(got, [x0, x0 ** 2, 2 * x0, 2, 0, 0], 1e-13)


def test_pushforward_rejects_characteristic_direction():
    with pytest.raises(CharacteristicDirection):
        pushforward((X + Y, X), 1.0, (1.0, -1.0, 0, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
@example(20013500)
def test_pushforward_matches_symbolic_chain_rule(seed):
    rng = np.random.default_rng(seed)
    phi = X + random_expr(rng, 2) / 4
    psi = random_expr(rng, 3)
    x0 = float(rng.uniform(0.6, 1.9))
    state = [float(rng.uniform(0.6, 1.9))] + list(rng.uniform(-1, 1, 4))
    try:
        want = symbolic_pushforward(phi, psi, x0, state)
    except (ZeroDivisionError, ValueError):
        return
    if abs(evaluate_scalar(total_x(phi), x=x0, y=state[0], y1=state[1])) < 1e-3:
        return
    got = pushforward((phi, psi), x0, state)
    assert rel_close(got, want, 1e-10)


def test_pushforward_consistent_along_a_trace():
    c = coefficients_from_table(EXAMPLE1, "I")
    rhs = equation_rhs(c)
    trace = integrate_trace(rhs, 0.8, np.array([1.0, 0.2, -0.1, 0.05]), BOX, 0.5, n_points=41)
    phi = X + X * X / 8
    psi = Y + X * Y / 4 + Y * Y / 8
    pushed = np.array([pushforward((phi, psi), row[0], row[1:]) for row in trace.states])
    t = pushed[:, 0]
    # transformed abscissae are not uniform: differentiate u(t) through s = x
    h = trace.states[1, 0] - trace.states[0, 0]

    def d_dt(values):
        dv = (-values[4:] + 8 * values[3:-1] - 8 * values[1:-3] + values[:-4]) / (12 * h)
        dt = (-t[4:] + 8 * t[3:-1] - 8 * t[1:-3] + t[:-4]) / (12 * h)
        return dv / dt

    for k in range(1, 5):
        assert rel_close(d_dt(pushed[:, k]), pushed[2:-2, k + 1], 1e-4), k


# ---------------------------------------------------------------------------
# chain-rule oracle

def test_oracle_example1_point():
    out = chainrule_coefficient_oracle(X, X ** 2 * Y ** 2, t_expr(0), t_expr(1), "I", [(1.0, 1.0)])
    assert out["A1"][0] == pytest.approx(4.0, rel=1e-13)
    assert out["A0"][0] == pytest.approx(8.0, rel=1e-13)
    assert out["D0"][0] == pytest.approx(0.5, rel=1e-13)


def test_oracle_identity():
    out = chainrule_coefficient_oracle(X, Y, t_expr(0), t_expr(0), "I", [(1.1, 0.9), (1.7, 1.3)])
    assert all(np.all(v == 0) for v in out.values())


def test_oracle_example4_point():
    out = chainrule_coefficient_oracle(Y, X, t_expr(1), t_expr(1), "II", [(2.0, 1.0)])
    assert out["K7"][0] == pytest.approx(-2.0, rel=1e-13)
    assert out["K6"][0] == pytest.approx(-1.0, rel=1e-13)
    assert out["r"][0] == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(["I", "II"]))
def test_oracle_agrees_with_forward_coefficients(seed, kind):
    from linearize4.candidates import NAMES_I, NAMES_II, forward_coefficients_II
    rng = np.random.default_rng(seed)
    phi, psi, a, b = (family_I if kind == "I" else family_II)(rng)
    fwd = (forward_coefficients_I if kind == "I" else forward_coefficients_II)(phi, psi, a, b)
    pts = rng.uniform(0.5, 2.0, (3, 2))
    out = chainrule_coefficient_oracle(phi, psi, a, b, kind, pts)
    for n in (NAMES_I if kind == "I" else NAMES_II):
        want, _ = evaluate(fwd[n], {"x": pts[:, 0], "y": pts[:, 1]})
        assert rel_close(out[n], np.broadcast_to(want, (3,)), 1e-8), n


# ---------------------------------------------------------------------------
# round trip

def test_roundtrip_trivial_equation():
    rt = roundtrip_check(zero_coefficients("I"), PointMap("I", closed=(X, Y)),
                         LinearTarget(alpha=t_expr(0), beta=t_expr(0)), box=BOX)
    assert rt.max_residual < 1e-12
    assert len(rt.per_trace) == 5


def test_roundtrip_example1():
    c = coefficients_from_table(EXAMPLE1, "I")
    rt = roundtrip_check(c, PointMap("I", closed=(X, X ** 2 * Y ** 2)),
                         LinearTarget(alpha=t_expr(0), beta=t_expr(1)), box=BOX)
    assert rt.max_residual < 1e-6


def test_roundtrip_example4():
    c = coefficients_from_table(example4_table(), "II")
    rt = roundtrip_check(c, PointMap("II", closed=(Y, X)),
                         LinearTarget(alpha=t_expr(1), beta=t_expr(1)), box=BOX)
    assert rt.max_residual < 1e-5


def test_roundtrip_detects_a_wrong_target():
    c = coefficients_from_table(EXAMPLE1, "I")
    rt = roundtrip_check(c, PointMap("I", closed=(X, X ** 2 * Y ** 2)),
                         LinearTarget(alpha=t_expr(0), beta=t_expr(2)), box=BOX)
    assert rt.max_residual > 1e-2


def test_traces_satisfy_the_equation():
    c = coefficients_from_table(EXAMPLE1, "I")
    rhs = equation_rhs(c)
    trace = integrate_trace(rhs, 0.9, np.array([1.2, 0.1, 0.0, -0.2]), BOX, 0.6)
    s = trace.states
    assert rel_close(s[:, 5], rhs(s[:, 0], s[:, 1], s[:, 2], s[:, 3], s[:, 4]), 1e-12)
    assert np.all((s[:, 1] >= BOX[1][0]) & (s[:, 1] <= BOX[1][1]))

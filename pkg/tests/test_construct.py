import math

import numpy as np
import pytest

from helpers import BOX, EXAMPLE1, example2_coefficients, example4_table, rel_close
from linearize4.candidates import (NAMES_I, coefficients_from_table, forward_coefficients_II,
                                   zero_coefficients)
from linearize4.construct import (Seeds, alpha_beta_I, build_phi, build_psi_I, construct_I,
                                  construct_II, grid_residuals, omega, solve_chi,
                                  solve_chi_with_retries, theta, theta_samples)
from linearize4.errors import BlowUp, JacobianVanished, YDependence
from linearize4.exprcore import diff, evaluate, parse_expr, simplify, var

X, Y = var("x"), var("y")
EX1 = coefficients_from_table(EXAMPLE1, "I")
EX4 = coefficients_from_table(example4_table(), "II")


def first_form(**entries):
    table = {n: "0" for n in NAMES_I}
    table.update(entries)
    return coefficients_from_table(table, "I")


def values(e, xs, ys):
    v, _ = evaluate(e, {"x": np.asarray(xs, float), "y": np.asarray(ys, float)})
    return np.broadcast_to(np.asarray(v, float), np.shape(xs))


# ---------------------------------------------------------------------------
# chi and phi

@pytest.mark.parametrize("c", [EX1, coefficients_from_table(example2_coefficients(2), "I")])
def test_chi_vanishes_exactly_for_fixtures(c):
    chi = solve_chi(c, (0.5, 2.0))
    assert chi.exact_zero
    assert np.all(chi(np.linspace(0.5, 2, 7)) == 0)


def test_chi_matches_power_solution():
    # 40 chi' - 20 chi^2 = 12/x^2 has the solutions k/x with 20k^2 + 40k + 12 = 0
    c = first_form(C0="3/(2*x^2)")
    for k in (-1 + math.sqrt(0.4), -1 - math.sqrt(0.4)):
        chi = solve_chi(c, (1.0, 2.0), chi0=k)
        xs = np.linspace(1.0, 2.0, 50)
        assert np.max(chi.residual(xs)) < 1e-8
        assert rel_close(chi(xs), k / xs, 1e-9)


def test_chi_constant_one_and_exponential_phi():
    c = first_form(C0="-5/2")
    chi = solve_chi(c, (0.0, 1.0), chi0=1.0)
    xs = np.linspace(0, 1, 11)
    assert rel_close(chi(xs), 1.0, 1e-10)
    phi = build_phi(chi)
    x_lo = 0.0
    assert rel_close(phi.value(xs), np.exp(xs) - np.exp(x_lo) + x_lo, 1e-9)


def test_phi_from_power_chi():
    # chi = -3/(5x) solves the Riccati equation for R = 84/(5x^2), i.e. C0 = 21/(10x^2)
    c = first_form(C0="21/(10*x^2)")
    chi = solve_chi(c, (1.0, 2.0), chi0=-0.6)
    phi = build_phi(chi)
    xs = np.linspace(1.0, 2.0, 21)
    assert rel_close(phi.value(xs), 2.5 * xs ** 0.4 - 1.5, 1e-8)
    d = phi.derivatives(xs)
    assert rel_close(d[1], xs ** -0.6, 1e-9)
    assert rel_close(d[2], -0.6 * xs ** -1.6, 1e-8)


def test_phi_identity_for_zero_chi():
    phi = build_phi(solve_chi(EX1, (0.5, 2.0)))
    assert phi.closed is X


def test_riccati_blowup_is_reported():
    c = first_form(C0="5")
    with pytest.raises(BlowUp) as info:
        solve_chi(c, (0.5, 2.0), chi0=10.0)
    assert 0.5 < info.value.x_star < 2.0


def test_retries_move_to_another_initial_value():
    c = first_form(C0="-5/2")
    chi = solve_chi_with_retries(c, (0.5, 2.0), chi0=10.0)
    assert chi.chi0 != 10.0


def test_y_dependent_riccati_side_is_rejected():
    with pytest.raises(YDependence):
        solve_chi(first_form(C0="y"), (0.5, 2.0))


# ---------------------------------------------------------------------------
# psi, alpha, beta

def test_psi_example1():
    chi = solve_chi(EX1, BOX[0])
    psi = build_psi_I(EX1, chi, build_phi(chi), BOX)
    assert psi.closed is not None
    ratio = values(psi.closed / (X ** 2 * Y ** 2), [0.7, 1.3, 1.9], [0.6, 1.1, 1.8])
    assert rel_close(ratio, ratio[0], 1e-14)


def test_psi_identity():
    c = zero_coefficients("I")
    chi = solve_chi(c, BOX[0])
    psi = build_psi_I(c, chi, build_phi(chi), BOX)
    assert psi.closed is Y


def test_psi_example2():
    c = coefficients_from_table(example2_coefficients(2), "I")
    chi = solve_chi(c, BOX[0])
    psi = build_psi_I(c, chi, build_phi(chi), BOX)
    assert simplify(psi.closed / Y ** 2).is_const


def test_numeric_psi_route_linearizes():
    # Example 1 with chi0 = 1 takes the numerical route; the map it builds must
    # still send the equation to a linear one
    from linearize4.verify import roundtrip_check
    built = construct_I(EX1, BOX, chi0=1.0, grid=11)
    assert built.point_map.closed is None
    rt = roundtrip_check(EX1, built.point_map, built.target, n_solutions=2, box=BOX)
    assert rt.max_residual < 1e-6


@pytest.mark.parametrize("c, alpha, beta", [
    (EX1, 0, 1),
    (zero_coefficients("I"), 0, 0),
    (coefficients_from_table(example2_coefficients(2), "I"), 0, 0),
])
def test_alpha_beta_first_form(c, alpha, beta):
    chi = solve_chi(c, BOX[0])
    target = alpha_beta_I(c, chi, build_phi(chi), BOX)
    ts = np.linspace(0.6, 1.9, 9)
    assert rel_close(target.alpha_at(ts), alpha, 1e-12)
    assert rel_close(target.beta_at(ts), beta, 1e-12)


def test_omega_second_transcription():
    c = first_form(A1="1/y", A0="x/(1 + x^2)", C0="x*y", D1="y^2 - x", C1="3")
    A0, C0, D1 = c.A0, c.C0, c.D1
    A0x = diff(A0, "x")
    independent = (A0 * A0 * A0 - 4 * A0 * C0 + 8 * D1 - 8 * diff(C0, "x") + 6 * A0x * A0
                   + 4 * diff(A0x, "x"))
    rng = np.random.default_rng(1)
    xs, ys = rng.uniform(0.5, 2.0, (2, 20))
    assert rel_close(values(omega(c), xs, ys), values(independent, xs, ys), 1e-10)


def test_theta_second_transcription():
    table = {n: "0" for n in example4_table()}
    table.update(r="x*y", F2="y/(1 + x)", J4="x^2 - y", K6="2*y", K7="x")
    c = coefficients_from_table(table, "II")
    F2, J4 = c.F2, c.J4
    independent = ((F2 * F2 - 4 * J4) * F2 - 8 * c.K6 + 56 * c.K7 * c.r - 8 * diff(J4, "y")
                   + 6 * diff(F2, "y") * F2 + 4 * diff(diff(F2, "y"), "y"))
    rng = np.random.default_rng(2)
    xs, ys = rng.uniform(0.5, 2.0, (2, 20))
    assert rel_close(values(theta(c), xs, ys), values(independent, xs, ys), 1e-10)


# ---------------------------------------------------------------------------
# second form

def test_example4_construction():
    built = construct_II(EX4, BOX)
    assert built.point_map.phi is Y and built.point_map.psi is X
    assert built.target.alpha.value == 1 and built.target.beta.value == 1
    rng = np.random.default_rng(0)
    xs, ys = rng.uniform(0.5, 2.0, (2, 25))
    assert rel_close(theta_samples(EX4, (xs, ys)), 8.0, 1e-10)


def test_zero_second_form_construction():
    built = construct_II(zero_coefficients("II"), BOX)
    assert built.point_map.phi is Y and built.point_map.psi is X
    assert built.target.alpha.value == 0 and built.target.beta.value == 0


def test_shear_construction():
    c = forward_coefficients_II(Y + X, X, 0, 0)
    built = construct_II(c, BOX, grid=41)
    assert built.grid["phi"].shape == (41, 41)
    for key in ("alphaTransport", "betaTransport", "phiTransport", "psiTransport",
                "phiCurvature", "jacobian"):
        assert built.residuals[key] < 1e-6, key
    assert np.max(np.abs(built.grid["alpha"])) < 1e-6
    assert np.max(np.abs(built.grid["beta"])) < 1e-6


def test_grid_residuals_detect_a_wrong_grid():
    c = forward_coefficients_II(Y + X, X, 0, 0)
    built = construct_II(c, BOX, grid=21)
    bad = dict(built.grid, phi=built.grid["phi"] + 0.1 * built.grid["x"][:, None] ** 2)
    assert grid_residuals(c, bad)["phiTransport"] > 1e-3


def test_seed_with_vanishing_jacobian_is_rejected():
    with pytest.raises(JacobianVanished):
        construct_II(EX4, BOX, seeds=Seeds(Delta=0.0))
    with pytest.raises(ValueError):
        Seeds.from_dict({"bogus": 1})


def test_generic_map_reports_chart_failure():
    # with the default seeds Delta reaches zero along a characteristic inside the box
    phi = parse_expr("y + 5/32*x - 7/32*x^2 - 5/32*x*y")
    psi = parse_expr("x - 1/8*y^2 - 5/32*x*y")
    c = forward_coefficients_II(phi, psi, parse_expr("5/32", variables=("t",)),
                                parse_expr("3/16", variables=("t",)))
    with pytest.raises(JacobianVanished, match="characteristic"):
        construct_II(c, BOX, grid=21)


def test_generic_map_is_evaluated_along_characteristics():
    from linearize4.verify import roundtrip_check
    phi = parse_expr("y + 3/16*x + 1/16*x^2")
    psi = parse_expr("x - 1/8*y^2 - 3/32*x*y")
    alpha, beta = (parse_expr(v, variables=("t",)) for v in ("-1/4", "-7/32"))
    c = forward_coefficients_II(phi, psi, alpha, beta)
    built = construct_II(c, BOX, grid=21)
    pm = built.point_map
    assert pm.closed is None
    assert built.target.alpha.value == alpha.value and built.target.beta.value == beta.value
    g = built.grid
    for i, j in ((0, 0), (7, 13), (20, 20), (15, 2)):
        dphi, dpsi = pm.derivatives(g["x"][i], g["y"][j])
        assert rel_close(dphi[0, 0], g["phi"][i, j], 1e-10)
        assert rel_close(dpsi[0, 0], g["psi"][i, j], 1e-10)
        assert rel_close(dphi[0, 1], g["phi_y"][i, j], 1e-10)
    rt = roundtrip_check(c, pm, built.target, n_solutions=3, box=BOX)
    assert rt.max_residual < 1e-8

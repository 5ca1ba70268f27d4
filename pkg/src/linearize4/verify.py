"""Independent checks of transformations.

``pushforward`` carries a solution state through a point transformation using
univariate Taylor jets along the solution and series reversion.
``chainrule_coefficient_oracle`` recomputes the coefficients of a transformed
equation by applying the total-derivative quotient rule with y', y'', ...
kept as polynomial indeterminates.  ``roundtrip_check`` integrates the
nonlinear equation and tests that pushed-forward states satisfy the target.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .candidates import NAMES_I, NAMES_II, MONOMIALS_I, PointMap
from .errors import CharacteristicDirection, TraceLeftBox
from .exprcore import Jet, as_expr, compile_exprs, evaluate, jet_eval

log = logging.getLogger(__name__)

ORDER = 4


def jet_from_derivatives(d, order=ORDER):
    """Bivariate jet from an array of partial derivatives ``d[i, j]``."""
    c = np.zeros((order + 1, order + 1))
    for i in range(order + 1):
        for j in range(order + 1 - i):
            c[i, j] = d[i, j] / (math.factorial(i) * math.factorial(j))
    return Jet(c, order)


def _map_jets(point_map, x0, y0, order=ORDER):
    if isinstance(point_map, PointMap):
        dphi, dpsi = point_map.derivatives(x0, y0, order)
        return jet_from_derivatives(dphi, order), jet_from_derivatives(dpsi, order)
    phi, psi = point_map
    if isinstance(phi, Jet):
        return phi, psi
    return (jet_eval(as_expr(phi), (float(x0), float(y0)), order).to_float(),
            jet_eval(as_expr(psi), (float(x0), float(y0)), order).to_float())


def _reversion(tjet):
    """Series s(tau) inverting tau = T(s) - T(0), as a univariate jet in tau."""
    n = tjet.order
    t1 = tjet.c[1]
    tau = Jet.variable(0, 0.0, 1, n, exact=False)
    s = tau / t1
    for _ in range(n):
        acc = Jet.constant(0.0, 1, n, exact=False)
        power = s
        for k in range(2, n + 1):
            power = power * s
            acc = acc + power * tjet.c[k]
        s = (tau - acc) / t1
    return s


def pushforward(point_map, x, state, eps=1e-12):
    """Transformed derivatives (t, u, u', u'', u''', u'''') at one state.

    ``state`` is (y, y', y'', y''', y'''') at abscissa ``x``; ``point_map`` is
    a PointMap or a pair (phi, psi) of expressions or bivariate jets.
    """
    y0, y1, y2, y3, y4 = (float(v) for v in state)
    x = float(x)
    phi, psi = _map_jets(point_map, x, y0)
    s = Jet.variable(0, 0.0, 1, ORDER, exact=False)
    dy = s * y1 + (s * s) * (y2 / 2) + (s * s * s) * (y3 / 6) + (s * s * s * s) * (y4 / 24)
    tjet = phi.compose([s, dy])
    ujet = psi.compose([s, dy])
    if abs(tjet.c[1]) < eps:
        raise CharacteristicDirection(f"D_x phi = {tjet.c[1]:.3g} at x = {x:.6g}")
    srev = _reversion(tjet)
    u_of_t = ujet.compose([srev])
    derivs = [u_of_t.c[k] * math.factorial(k) for k in range(ORDER + 1)]
    return (float(tjet.c[0]), *[float(v) for v in derivs])


# ---------------------------------------------------------------------------
# Chain-rule oracle

class _SlotPoly:
    """Polynomial in (y', y'', y''', y'''') with jet coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms

    @staticmethod
    def scalar(jet):
        return _SlotPoly({(0, 0, 0, 0): jet})

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return _SlotPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, k):
        return _SlotPoly({m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return _SlotPoly(out)

    def total_derivative(self):
        out = {}

        def put(m, c):
            out[m] = out[m] + c if m in out else c

        for m, c in self.terms.items():
            put(m, c.partial(0))
            put((m[0] + 1,) + m[1:], c.partial(1))
            for i in range(3):
                if m[i]:
                    nm = list(m)
                    nm[i] -= 1
                    nm[i + 1] += 1
                    put(tuple(nm), c * float(m[i]))
        return _SlotPoly(out)

    def values(self):
        return {m: float(c.value) for m, c in self.terms.items()}


def chain_rule_numerators(phi_jet, psi_jet):
    """Polynomials L = D phi and N1..N4 with u^(k) = N_k / L^(2k-1)."""
    L = _SlotPoly.scalar(phi_jet).total_derivative()
    dL = L.total_derivative()
    n = _SlotPoly.scalar(psi_jet).total_derivative()
    nums = [n]
    for k in range(1, 4):
        n = n.total_derivative() * L - n * dL.scale(float(2 * k - 1))
        nums.append(n)
    return L, nums


def _transformed_equation(phi_jet, psi_jet, alpha, beta):
    """Constant-term polynomial of N4 + alpha N1 L^6 + beta psi L^7."""
    L, nums = chain_rule_numerators(phi_jet, psi_jet)
    Lv = L.values()
    lpoly = {m: v for m, v in Lv.items()}

    def pmul(p, q):
        out = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0.0) + c1 * c2
        return out

    l6 = {(0, 0, 0, 0): 1.0}
    for _ in range(6):
        l6 = pmul(l6, lpoly)
    l7 = pmul(l6, lpoly)
    total = dict(nums[3].values())
    for m, c in pmul(nums[0].values(), l6).items():
        total[m] = total.get(m, 0.0) + alpha * c
    psi0 = float(psi_jet.value)
    for m, c in l7.items():
        total[m] = total.get(m, 0.0) + beta * psi0 * c
    return total


def _collect_I(poly):
    lead = poly.get((0, 0, 0, 1), 0.0)
    if lead == 0:
        raise CharacteristicDirection("no y'''' term after transformation")
    out = {}
    for name, (e1, e2, e3) in MONOMIALS_I.items():
        out[name] = poly.get((e1, e2, e3, 0), 0.0) / lead
    return out


def _collect_II(poly, r):
    lead = poly.get((2, 0, 0, 1), 0.0)
    if lead == 0:
        raise CharacteristicDirection("no y'^2 y'''' term after transformation")
    p = {m: c / lead for m, c in poly.items()}
    # y''' part free of y'': (F2 y'^2 + F1 y' + F0)(y' + r)
    g = [p.get((k, 0, 1, 0), 0.0) for k in range(4)]
    f2 = g[3]
    f1 = g[2] - r * f2
    f0 = g[1] - r * f1
    out = {"r": r, "F2": f2, "F1": f1, "F0": f0}
    for k in range(3):
        out[f"H{k}"] = p.get((k, 2, 0, 0), 0.0)
    for k in range(5):
        out[f"J{k}"] = p.get((k, 1, 0, 0), 0.0)
    for k in range(8):
        out[f"K{k}"] = p.get((k, 0, 0, 0), 0.0)
    return out


def chainrule_coefficient_oracle(phi, psi, alpha, beta, kind, points):
    """Coefficient samples of the equation mapped to the target by (phi, psi).

    ``alpha`` and ``beta`` are expressions in ``t``; ``points`` is a sequence
    of (x, y).  Returns a dict name -> array over the points.
    """
    alpha, beta = as_expr(alpha), as_expr(beta)
    names = NAMES_I if kind == "I" else NAMES_II
    out = {n: [] for n in names}
    for x0, y0 in points:
        pj, qj = _map_jets((phi, psi), x0, y0)
        t0 = float(pj.value)
        a = float(evaluate(alpha, {"t": np.array([t0])})[0][0])
        b = float(evaluate(beta, {"t": np.array([t0])})[0][0])
        poly = _transformed_equation(pj, qj, a, b)
        if kind == "I":
            vals = _collect_I(poly)
        else:
            phi_y = pj.c[0, 1]
            if phi_y == 0:
                raise CharacteristicDirection("phi_y vanishes; not a second-form map")
            vals = _collect_II(poly, pj.c[1, 0] / phi_y)
        for n in names:
            out[n].append(vals[n])
    return {n: np.array(v) for n, v in out.items()}


# ---------------------------------------------------------------------------
# Round trip

@dataclass(frozen=True)
class SolutionTrace:
    """States (x, y, y', y'', y''', y'''') along one integrated solution."""
    states: np.ndarray
    rtol: float
    truncated: bool = False


@dataclass(frozen=True)
class RoundtripReport:
    max_residual: float
    per_trace: tuple
    traces: tuple = field(repr=False, default=())

    def to_dict(self):
        return {"maxResidual": self.max_residual, "perTrace": list(self.per_trace),
                "points": [len(t.states) for t in self.traces]}


def equation_rhs(c):
    """Vectorised y'''' = f(x, y, y', y'', y''') for a coefficient bundle."""
    c = c.bind()
    names = c.names
    fn = compile_exprs([c[n] for n in names], ("x", "y"), vector=True)

    def coeffs(x, y):
        vals = fn(x, y)
        shape = np.shape(x)
        return {n: np.broadcast_to(np.asarray(v, dtype=float), shape) for n, v in zip(names, vals)}

    if c.kind == "I":
        def rhs(x, y, y1, y2, y3):
            k = coeffs(x, y)
            return -((k["A1"] * y1 + k["A0"]) * y3 + k["B0"] * y2 ** 2
                     + (k["C2"] * y1 ** 2 + k["C1"] * y1 + k["C0"]) * y2
                     + (((k["D4"] * y1 + k["D3"]) * y1 + k["D2"]) * y1 + k["D1"]) * y1 + k["D0"])
    else:
        def rhs(x, y, y1, y2, y3):
            k = coeffs(x, y)
            w = y1 + k["r"]
            h = (k["H2"] * y1 + k["H1"]) * y1 + k["H0"]
            j = (((k["J4"] * y1 + k["J3"]) * y1 + k["J2"]) * y1 + k["J1"]) * y1 + k["J0"]
            kk = 0.0
            for idx in range(7, -1, -1):
                kk = kk * y1 + k[f"K{idx}"]
            return -((-10 * y2 + (k["F2"] * y1 + k["F1"]) * y1 + k["F0"]) * y3 / w
                     + (15 * y2 ** 3 + h * y2 ** 2 + j * y2 + kk) / w ** 2)
    rhs.coeffs = coeffs
    return rhs


def _initial_state(rng, box, kind, rhs):
    (xl, xh), (yl, yh) = box
    wx, wy = xh - xl, yh - yl
    x0 = xl + 0.05 * wx + 0.25 * wx * rng.random()
    y0 = yl + 0.3 * wy + 0.4 * wy * rng.random()
    d = rng.uniform(-0.3, 0.3, 3)
    if kind == "II":
        r = float(rhs.coeffs(np.array([x0]), np.array([y0]))["r"][0])
        d[0] = -r + rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.0)
    return x0, np.array([y0, *d])


def integrate_trace(rhs, x0, state0, box, length, rtol=1e-12, n_points=20, kind="I"):
    (xl, xh), (yl, yh) = box

    def f(x, s):
        y4 = rhs(x, s[0], s[1], s[2], s[3])
        return [s[1], s[2], s[3], float(y4)]

    def leave_low(x, s):
        return s[0] - yl
    def leave_high(x, s):
        return yh - s[0]
    events = [leave_low, leave_high]
    if kind == "II":
        def pole(x, s):
            return abs(s[1] + float(rhs.coeffs(np.array([x]), np.array([s[0]]))["r"][0])) - 0.05
        events.append(pole)
    for ev in events:
        ev.terminal = True
    x_end = min(xh, x0 + length)
    sol = solve_ivp(f, (x0, x_end), state0, method="DOP853", rtol=rtol, atol=rtol,
                    events=events, dense_output=True)
    if sol.status == -1:
        raise TraceLeftBox(f"integration failed: {sol.message}")
    x_stop = sol.t[-1]
    truncated = x_stop < x_end - 1e-12
    xs = np.linspace(x0, x_stop, n_points + 1)[:-1] if truncated else np.linspace(x0, x_stop, n_points)
    ys = sol.sol(xs)
    y4 = np.array([rhs(np.array([x]), *[np.array([v]) for v in ys[:4, i]])[0]
                   for i, x in enumerate(xs)])
    states = np.column_stack([xs, ys.T, y4])
    return SolutionTrace(states, rtol, truncated)


def roundtrip_check(equation, point_map, target, n_solutions=5, box=((0.5, 2.0), (0.5, 2.0)),
                    seed=0, rtol=1e-12, n_points=20, length=None, max_attempts=None):
    """Integrate solutions of the nonlinear equation and test the target.

    The residual at each state is
    ``|u'''' + alpha u' + beta u| / max(|u''''|, |alpha u'|, |beta u|, 1)``.
    Traces for second-form maps are cut at the first reversal of t.
    """
    rhs = equation_rhs(equation)
    kind = equation.kind
    rng = np.random.default_rng(seed)
    if length is None:
        length = 0.5 * (box[0][1] - box[0][0])
    max_attempts = max_attempts or 10 * n_solutions
    traces, per_trace = [], []
    attempts = 0
    while len(traces) < n_solutions:
        attempts += 1
        if attempts > max_attempts:
            raise TraceLeftBox(f"only {len(traces)} of {n_solutions} traces stayed in the box")
        x0, s0 = _initial_state(rng, box, kind, rhs)
        trace = integrate_trace(rhs, x0, s0, box, length, rtol, n_points, kind)
        pushed = []
        for row in trace.states:
            try:
                vals = pushforward(point_map, row[0], row[1:])
            except CharacteristicDirection:
                break
            pushed.append(vals)
        pushed = np.array(pushed)
        if len(pushed) >= 3 and kind == "II":
            dt = np.diff(pushed[:, 0])
            sign = np.sign(dt[0])
            rev = np.nonzero(np.sign(dt) != sign)[0]
            if len(rev):
                pushed = pushed[:rev[0] + 1]
        if len(pushed) < 3:
            log.info("trace from x=%.4g too short, redrawing", x0)
            continue
        t, u, u1, u2, u3, u4 = pushed.T
        order = np.argsort(t)
        a = np.empty_like(t)
        b = np.empty_like(t)
        a[order] = target.alpha_at(t[order])
        b[order] = target.beta_at(t[order])
        scale = np.maximum.reduce([np.abs(u4), np.abs(a * u1), np.abs(b * u), np.ones_like(u)])
        res = np.abs(u4 + a * u1 + b * u) / scale
        traces.append(trace)
        per_trace.append(float(res.max()))
    return RoundtripReport(float(max(per_trace)), tuple(per_trace), tuple(traces))

"""Construction of the linearizing map for first-form equations.

With chi = phi_xx/phi_x the map is assembled from

    40 chi' = 20 chi^2 + R(x),   R = 8 C0 - 3 A0^2 - 12 A0_x,
    log(psi_y) = int A1/4 dy + int (A0 + 6 chi)/4 dx,
    psi = int psi_y dy + h(x),

where h solves the fourth-order linear ODE obtained by restricting the
psi equation to the line y = y_lo.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .. import _condition_table as table
from ..candidates import LinearTarget, PointMap
from ..errors import BetaYDependence, BlowUp, QuadratureSingularity, YDependence
from ..exprcore import (ONE, compile_exprs, const, diff, evaluate, exp, free_vars,
                        is_rational_expr, laurent_integrate, parse_template, power, simplify,
                        substitute, var)
from ..exprcore.calculus import from_normal, normal_form
from ..lintest import resolver

log = logging.getLogger(__name__)

RTOL = 1e-12
CHI = var("chi")


def riccati_rhs(c):
    """R = 8 C0 - 3 A0^2 - 12 A0_x as an expression in x (and y)."""
    return parse_template(table.RICCATI_RHS, resolver(c.bind().as_dict()))


def omega(c):
    return parse_template(table.OMEGA, resolver(c.bind().as_dict()))


def _grid_values(e, xs, ys, exact=False):
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    val, bad = evaluate(e, {"x": X.ravel(), "y": Y.ravel()}, exact=exact)
    return np.asarray(val, dtype=float).reshape(X.shape), bad.reshape(X.shape)


@dataclass(frozen=True)
class ChiSolution:
    """chi = phi_xx/phi_x on ``x_range``.

    ``exact_zero`` marks the closed-form solution chi == 0.  Otherwise
    ``sol`` is the dense output of the integrator.
    """

    x_range: tuple
    chi0: float
    exact_zero: bool
    riccati: object
    riccati_x: object
    sol: object = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.exact_zero:
            return np.zeros_like(x)
        return self.sol(x)[0]

    def derivative(self, x):
        chi = self(x)
        return (self.riccati(x) + 20 * chi ** 2) / 40

    def second_derivative(self, x):
        chi = self(x)
        return (self.riccati_x(x) + 40 * chi * self.derivative(x)) / 40

    def residual(self, xs, h=2e-4):
        """|40 chi' - 20 chi^2 - R| with chi' from a five-point stencil of
        the dense output (an independent check of the integration)."""
        xs = np.asarray(xs, dtype=float)
        lo, hi = self.x_range
        xs = np.clip(xs, lo + 2 * h, hi - 2 * h)
        d = (-self(xs + 2 * h) + 8 * self(xs + h) - 8 * self(xs - h) + self(xs - 2 * h)) / (12 * h)
        return np.abs(40 * d - 20 * self(xs) ** 2 - self.riccati(xs))


def _riccati_functions(R):
    f = compile_exprs([R], ("x", "y"), vector=True)
    fx = compile_exprs([diff(R, "x")], ("x", "y"), vector=True)
    return f, fx


def solve_chi(c, x_range, chi0=0.0, y_range=(0.5, 2.0), rtol=RTOL, blowup=1e6):
    """Solve 40 chi' = 20 chi^2 + R from chi(x_lo) = chi0."""
    x_lo, x_hi = (float(v) for v in x_range)
    R = riccati_rhs(c)
    xs = np.linspace(x_lo, x_hi, 17)
    ys = np.linspace(*y_range, 7)
    vals, bad = _grid_values(R, xs, ys)
    if bad.any():
        raise QuadratureSingularity("the Riccati right side is singular inside the box")
    spread = np.max(np.abs(vals - vals[:, :1]) / (1 + np.abs(vals[:, :1])))
    if spread > 1e-8 or "y" in free_vars(R) and not _y_free(R, xs, ys):
        raise YDependence(f"8*C0 - 3*A0^2 - 12*A0_x varies with y (relative spread {spread:.3g})")
    y_ref = float(y_range[0])
    f, fx = _riccati_functions(R)

    def riccati(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(f(x, np.full_like(x, y_ref))[0], x.shape) * 1.0

    def riccati_x(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(fx(x, np.full_like(x, y_ref))[0], x.shape) * 1.0

    identically_zero = _is_identically_zero(R, xs, ys)
    if identically_zero and chi0 == 0:
        return ChiSolution((x_lo, x_hi), 0.0, True, riccati, riccati_x)

    def rhs(x, chi):
        return (riccati(x) + 20 * chi ** 2) / 40

    def escape(x, chi):
        return abs(chi[0]) - blowup
    escape.terminal = True
    sol = solve_ivp(rhs, (x_lo, x_hi), [float(chi0)], method="DOP853", rtol=rtol,
                    atol=rtol, dense_output=True, events=escape, max_step=_dense_step(x_lo, x_hi))
    if sol.status == 1 or sol.t[-1] < x_hi - 1e-12:
        raise BlowUp(float(sol.t[-1]))
    if not sol.success:
        raise BlowUp(float(sol.t[-1]))
    return ChiSolution((x_lo, x_hi), float(chi0), False, riccati, riccati_x, sol.sol)


def _dense_step(lo, hi):
    """Step cap keeping the dense interpolant as accurate as the steps, since
    chi and phi are read back (and differentiated) between steps."""
    return (hi - lo) / 128


def _y_free(e, xs, ys):
    vals, bad = _grid_values(diff(e, "y"), xs, ys)
    ref, _ = _grid_values(e, xs, ys)
    return not bad.any() and np.max(np.abs(vals)) <= 1e-8 * (1 + np.max(np.abs(ref)))


def _is_identically_zero(e, xs, ys):
    if e.is_const:
        return e.value == 0
    exact = is_rational_expr(e)
    if exact:
        from fractions import Fraction
        fx = np.array([Fraction(v).limit_denominator(1 << 20) for v in xs], dtype=object)
        fy = np.array([Fraction(v).limit_denominator(1 << 20) for v in ys], dtype=object)
        X, Y = np.meshgrid(fx, fy, indexing="ij")
        val, bad = evaluate(e, {"x": X.ravel(), "y": Y.ravel()}, exact=True)
        return not bad.any() and all(v == 0 for v in val)
    vals, bad = _grid_values(e, xs, ys)
    return not bad.any() and np.max(np.abs(vals)) < 1e-13


def solve_chi_with_retries(c, x_range, chi0=0.0, y_range=(0.5, 2.0), fallbacks=(0, 1, -1, 10, -10)):
    """Try ``chi0`` first, then the fallback initial values, on blow-up."""
    tried = []
    for value in [chi0] + [v for v in fallbacks if v != chi0]:
        try:
            return solve_chi(c, x_range, value, y_range)
        except BlowUp as exc:
            log.info("chi0 = %g blows up at x = %.6g", value, exc.x_star)
            tried.append(exc)
    raise tried[0]


@dataclass(frozen=True)
class PhiSolution:
    """phi(x) with phi(x_lo) = x_lo and phi_x(x_lo) = 1."""

    chi: ChiSolution
    closed: object = None
    sol: object = None

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self.closed is not None:
            return x.copy()
        return self.sol(x)[1]

    def derivatives(self, x):
        """[phi, phi_x, phi_xx, phi_xxx, phi_xxxx] at x (arrays)."""
        x = np.asarray(x, dtype=float)
        if self.closed is not None:
            one = np.ones_like(x)
            return [x.copy(), one, 0 * one, 0 * one, 0 * one]
        dphi = np.exp(self.sol(x)[0])
        chi = self.chi(x)
        d1 = self.chi.derivative(x)
        d2 = self.chi.second_derivative(x)
        return [self.sol(x)[1], dphi, chi * dphi, (d1 + chi ** 2) * dphi,
                (d2 + 3 * chi * d1 + chi ** 3) * dphi]


def build_phi(chi, x_range=None, rtol=RTOL):
    """Integrate phi'' = chi phi' from phi(x_lo) = x_lo, phi'(x_lo) = 1."""
    x_lo, x_hi = chi.x_range if x_range is None else x_range
    if chi.exact_zero:
        return PhiSolution(chi, closed=var("x"))

    def rhs(x, s):
        return [chi(x), np.exp(s[0])]
    sol = solve_ivp(rhs, (x_lo, x_hi), [0.0, float(x_lo)], method="DOP853", rtol=rtol,
                    atol=rtol, dense_output=True, max_step=_dense_step(x_lo, x_hi))
    if not sol.success:
        raise RuntimeError(f"phi integration failed: {sol.message}")
    return PhiSolution(chi, sol=sol.sol)


# ---------------------------------------------------------------------------
# psi

def _exp_of_logs(e):
    """exp(e) with sums of c*log(v) turned into products of powers."""
    nf = normal_form(e)
    factors = []
    rest = {}
    for pp, c in nf.items():
        if len(pp) == 1 and pp[0][1] == 1 and pp[0][0].kind == "func" and pp[0][0].value == "log":
            base = pp[0][0].args[0]
            factors.append(power(base, const(c)))
        else:
            rest[pp] = c
    out = ONE
    for f in factors:
        out = out * f
    if rest:
        out = out * exp(from_normal(rest))
    return simplify(out)


def _closed_psi(c, box):
    """Closed-form psi when chi == 0 and the quadratures match the
    Laurent-monomial pattern; None otherwise."""
    A1, A0 = c["A1"], c["A0"]
    g1 = laurent_integrate(simplify(A1 / 4), "y")
    if g1 is None:
        return None
    rem = simplify(A0 / 4 - diff(g1, "x"))
    if "y" in free_vars(rem):
        return None
    g0 = laurent_integrate(rem, "x")
    if g0 is None:
        return None
    psi_y = _exp_of_logs(g1 + g0)
    if any(n.kind == "func" and n.value == "log" for n in _nodes(psi_y)):
        return None
    G = laurent_integrate(psi_y, "y")
    if G is None:
        return None
    return simplify(G)


def _nodes(e):
    from ..exprcore import postorder
    return postorder([e])


def _psi_equation(c):
    """Expressions (P3, P2, P1, P0, PY) in x, y, chi."""
    cb = c.bind().as_dict()
    base = dict(cb)
    base["Omega"] = omega(c)
    res = resolver(base, {"chi": CHI})
    return [parse_template(table.PSI_EQ_I[k], res) for k in ("P3", "P2", "P1", "P0", "PY")]


def _psi_eq_residual(c, psi, xs, ys):
    """Relative residual of the psi equation for a closed psi with chi = 0."""
    p3, p2, p1, p0, py = [substitute(e, {"chi": 0}) for e in _psi_equation(c)]
    d = lambda spec: _diff_spec(psi, spec)
    res = (1600 * d("xxxx") - (p3 * d("xxx") + p2 * d("xx") + p1 * d("x") + p0 * psi
                               + py * d("y")))
    vals, bad = _grid_values(res, xs, ys)
    scale, _ = _grid_values(1600 * d("xxxx"), xs, ys)
    ok = ~bad
    return float(np.max(np.abs(vals[ok]) / (1 + np.abs(scale[ok])))) if ok.any() else np.inf


def _diff_spec(e, spec):
    for v in spec:
        e = diff(e, v)
    return e


@dataclass(frozen=True)
class PsiSolution:
    """psi(x, y) and its partial derivatives through order 4."""

    closed: object = None
    evaluator: object = None
    notes: tuple = ()

    def derivatives(self, x, y, order=4):
        if self.closed is not None:
            from ..exprcore import jet_eval
            jet = jet_eval(self.closed, (float(x), float(y)), order=order).to_float()
            d = np.zeros((order + 1, order + 1))
            for i in range(order + 1):
                for j in range(order + 1 - i):
                    d[i, j] = float(jet.derivative((i, j)))
            return d
        return self.evaluator(float(x), float(y), order)


class _NumericPsi:
    """psi = h(x) + int_{y_lo}^{y} psi_y dy with psi_y = exp(L(x) + int b dy).

    Mixed partials use d^i_x d^j_y psi_y = psi_y * P_ij, where
    P_{i+1,j} = a P_ij + D_x P_ij and P_{i,j+1} = b P_ij + d_y P_ij with
    a = (A0 + 6 chi)/4 and b = A1/4; D_x treats chi as a function of x.
    """

    def __init__(self, c, chi, box, rtol=RTOL):
        (x_lo, x_hi), (y_lo, y_hi) = box
        self.box = box
        self.chi = chi
        self.rtol = rtol
        cb = c.bind()
        a = (cb["A0"] + 6 * CHI) / 4
        b = cb["A1"] / 4
        R = riccati_rhs(c)
        chi_prime = (R + 20 * CHI * CHI) / 40

        def dx_total(e):
            return diff(e, "x") + diff(e, "chi") * chi_prime

        P = {(0, 0): ONE}
        for i in range(4):
            P[(i + 1, 0)] = a * P[(i, 0)] + dx_total(P[(i, 0)])
        for i in range(4):
            for j in range(3 - i):
                P[(i, j + 1)] = b * P[(i, j)] + diff(P[(i, j)], "y")
        self.P = P
        keys = sorted(P)
        self.keys = keys
        self._P = compile_exprs([P[k] for k in keys], ("x", "y", "chi"), vector=True)
        self._a = compile_exprs([a], ("x", "y", "chi"), vector=True)
        self._b = compile_exprs([b], ("x", "y"), vector=True)
        eq = _psi_equation(c)
        self._eq = compile_exprs(eq, ("x", "y", "chi"), vector=True)
        self.y_lo = y_lo
        self._check_poles(a, b, box)

        def line_rhs(x, s):
            chi_x = float(chi(x))
            L, h0, h1, h2, h3 = s
            p3, p2, p1, p0, py = (float(v) for v in self._eq(x, y_lo, chi_x))
            h4 = (p3 * h3 + p2 * h2 + p1 * h1 + p0 * h0 + py * np.exp(L)) / 1600
            return [float(self._a(x, y_lo, chi_x)[0]), h1, h2, h3, h4]

        self._line_rhs = line_rhs
        sol = solve_ivp(line_rhs, (x_lo, x_hi), [0.0, 0.0, 0.0, 0.0, 0.0], method="DOP853",
                        rtol=rtol, atol=rtol, dense_output=True)
        if not sol.success:
            raise QuadratureSingularity(f"x-line integration failed: {sol.message}")
        self.line = sol.sol

    def _check_poles(self, a, b, box):
        (x_lo, x_hi), (y_lo, y_hi) = box
        xs = np.linspace(x_lo, x_hi, 21)
        ys = np.linspace(y_lo, y_hi, 21)
        vals, bad = _grid_values(substitute(a, {"chi": 0}) + b, xs, ys)
        if bad.any():
            raise QuadratureSingularity("A0/4 or A1/4 has a pole inside the box")

    def _start(self, x):
        L, h0, h1, h2, h3 = self.line(x)
        h4 = self._line_rhs(x, [L, h0, h1, h2, h3])[4]
        return L, [h0, h1, h2, h3, h4]

    def columns(self, x, ys):
        """psi_y and d^i_x psi (i = 0..4) at (x, ys) for increasing ys >= y_lo
        or decreasing ys <= y_lo."""
        chi_x = float(self.chi(x))
        L0, hs = self._start(x)
        pidx = [self.keys.index((i, 0)) for i in range(5)]

        def rhs(y, s):
            Pv = self._P(x, y, chi_x)
            py = np.exp(s[0])
            return [float(self._b(x, y)[0])] + [py * float(Pv[k]) for k in pidx]

        ys = np.atleast_1d(np.asarray(ys, dtype=float))
        out = np.empty((len(ys), 6))
        for sign in (1, -1):
            sel = np.nonzero((ys >= self.y_lo) if sign > 0 else (ys < self.y_lo))[0]
            if len(sel) == 0:
                continue
            y_end = ys[sel].max() if sign > 0 else ys[sel].min()
            if y_end == self.y_lo:
                out[sel] = [L0] + hs
                continue
            sol = solve_ivp(rhs, (self.y_lo, y_end), [L0] + hs, method="DOP853",
                            rtol=self.rtol, atol=self.rtol, dense_output=True)
            out[sel] = sol.sol(ys[sel]).T
        return out

    def __call__(self, x, y, order=4):
        state = self.columns(x, [y])[0]
        psi_y = np.exp(state[0])
        chi_x = float(self.chi(x))
        Pv = self._P(x, y, chi_x)
        d = np.zeros((order + 1, order + 1))
        for i in range(order + 1):
            d[i, 0] = state[1 + i]
        for (i, j), k in zip(self.keys, range(len(self.keys))):
            if i + j + 1 <= order:
                d[i, j + 1] = psi_y * float(Pv[k])
        return d


def build_psi_I(c, chi, phi, box, grid=41):
    """psi for a first-form equation: closed form when the quadratures are
    elementary (and chi == 0), otherwise numerical."""
    (x_lo, x_hi), (y_lo, y_hi) = box
    xs = np.linspace(x_lo, x_hi, 9)
    ys = np.linspace(y_lo, y_hi, 9)
    cb = c.bind()
    for name in ("A1", "A0"):
        _, bad = _grid_values(cb[name], xs, ys)
        if bad.any():
            raise QuadratureSingularity(f"{name} has a pole inside the box")
    if chi.exact_zero:
        G = _closed_psi(cb, box)
        if G is not None:
            res = _psi_eq_residual(cb, G, xs, ys)
            if res < 1e-9:
                return PsiSolution(closed=G, notes=("closed form from Laurent quadratures",))
            log.info("closed psi_y found but the psi equation residual is %.3g", res)
    numeric = _NumericPsi(cb, chi, box)
    return PsiSolution(evaluator=numeric, notes=("numerical quadrature and x-line ODE",))


# ---------------------------------------------------------------------------
# alpha, beta

def target_expressions_I(c):
    """(alpha, beta) as expressions in x, y, chi and dphi = phi_x."""
    cb = c.bind().as_dict()
    base = dict(cb)
    base["Omega"] = omega(c)
    res = resolver(base, {"chi": CHI, "dphi": var("dphi")})
    return parse_template(table.ALPHA_I, res), parse_template(table.BETA_I, res)


def alpha_beta_I(c, chi, phi, box=None, n=41, tol=1e-6):
    """Target coefficients alpha, beta sampled on an x-grid and
    reparameterised by t = phi(x)."""
    x_lo, x_hi = chi.x_range
    y_range = box[1] if box is not None else (0.5, 2.0)
    alpha, beta = target_expressions_I(c)
    xs = np.linspace(x_lo, x_hi, n)
    ys = np.linspace(*y_range, 5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    dphi = phi.derivatives(xs)[1]
    chis = chi(xs)
    env = {"x": X.ravel(), "y": Y.ravel(), "chi": np.repeat(chis, len(ys)),
           "dphi": np.repeat(dphi, len(ys))}
    (a_vals, b_vals), bad = evaluate([alpha, beta], env)
    if bad.any():
        raise BetaYDependence("alpha or beta is singular inside the box")
    a_vals = a_vals.reshape(X.shape)
    b_vals = b_vals.reshape(X.shape)
    for name, v in (("alpha", a_vals), ("beta", b_vals)):
        spread = np.max(np.abs(v - v[:, :1]) / (1 + np.abs(v[:, :1])))
        if spread > tol:
            raise BetaYDependence(f"{name} varies with y (relative spread {spread:.3g})")
    t = phi.value(xs)
    a_t = b_t = None
    if chi.exact_zero and phi.closed is not None:
        y_ref = const(_rational(y_range[0]))
        sub = {"chi": 0, "dphi": 1, "y": y_ref, "x": var("t")}
        a_t = simplify(substitute(alpha, sub))
        b_t = simplify(substitute(beta, sub))
    order = np.argsort(t)
    evaluator = None if a_t is not None else _target_evaluator(alpha, beta, chi, phi, y_range[0])
    return LinearTarget(alpha=a_t, beta=b_t, t=t[order], alpha_samples=a_vals[order, 0],
                        beta_samples=b_vals[order, 0],
                        extras={"omega": omega(c)}, evaluator=evaluator)


def _target_evaluator(alpha, beta, chi, phi, y_ref):
    """(alpha, beta) at given t, inverting the monotone phi by root finding."""
    fn = compile_exprs([alpha, beta], ("x", "y", "chi", "dphi"), vector=True)
    x_lo, x_hi = chi.x_range

    def at(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        xs = np.empty_like(t)
        for k, tk in enumerate(t):
            xs[k] = brentq(lambda x: float(phi.value(x)) - tk, x_lo, x_hi, xtol=1e-15, rtol=1e-15)
        dphi = phi.derivatives(xs)[1]
        a, b = fn(xs, np.full_like(xs, y_ref), chi(xs), dphi)
        return (np.broadcast_to(a, xs.shape).astype(float), np.broadcast_to(b, xs.shape).astype(float))
    return at


def _rational(v):
    from fractions import Fraction
    return Fraction(v).limit_denominator(1 << 20)


@dataclass(frozen=True)
class ConstructionI:
    point_map: PointMap
    target: LinearTarget
    chi: ChiSolution
    phi: PhiSolution
    psi: PsiSolution
    notes: tuple = field(default=())


def construct_I(c, box, chi0=0.0, grid=41):
    """Full first-form construction: chi, phi, psi and the target."""
    (x_lo, x_hi), y_range = box
    chi = solve_chi_with_retries(c, (x_lo, x_hi), chi0, y_range)
    phi = build_phi(chi)
    psi = build_psi_I(c, chi, phi, box, grid)
    target = alpha_beta_I(c, chi, phi, box, n=grid)
    if phi.closed is not None and psi.closed is not None:
        pm = PointMap("I", closed=(phi.closed, psi.closed), notes=psi.notes)
    else:
        def evaluator(x, y, order=4):
            d_phi = np.zeros((order + 1, order + 1))
            vals = phi.derivatives(np.array([x]))
            for i in range(order + 1):
                d_phi[i, 0] = float(vals[i][0])
            return d_phi, psi.derivatives(x, y, order)
        pm = PointMap("I", evaluator=evaluator, notes=psi.notes)
    pm = _with_grid(pm, box, grid, phi, psi)
    return ConstructionI(pm, target, chi, phi, psi, psi.notes)


def _with_grid(pm, box, n, phi, psi):
    (x_lo, x_hi), (y_lo, y_hi) = box
    xs = np.linspace(x_lo, x_hi, n)
    ys = np.linspace(y_lo, y_hi, n)
    phi_col = phi.value(xs)
    PHI = np.repeat(phi_col[:, None], n, axis=1)
    if psi.closed is not None:
        PSI, _ = _grid_values(psi.closed, xs, ys)
    else:
        PSI = np.array([psi.evaluator.columns(x, ys)[:, 1] for x in xs])
    grid = {"x": xs, "y": ys, "phi": PHI, "psi": PSI}
    return PointMap(pm.kind, pm.closed, pm.evaluator, grid, pm.notes)

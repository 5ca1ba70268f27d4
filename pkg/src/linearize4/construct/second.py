"""Construction of the linearizing map for second-form equations.

phi and psi are built from the compatible system

    phi_x = r phi_y,   psi_x = r psi_y - Delta/phi_y,
    10 Delta phi_yy = phi_y (4 Delta_y - F2 Delta),

together with the relations for Delta_x, Delta_yy and psi_yyyy.  The data
on the initial line x = x_lo come from ODEs in y; the rest of the grid is
reached along the characteristics dy/dx = -r, on which phi is constant and
phi_y, Delta, Delta_y, psi, psi_y obey linear transport equations.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import RectBivariateSpline

from .. import _condition_table as table
from ..candidates import LinearTarget, PointMap
from ..errors import ConsistencyViolation, JacobianVanished, TraceLeftBox
from ..exprcore import ZERO, compile_exprs, const, diff, evaluate, parse_template, simplify, var
from ..lintest import resolver

log = logging.getLogger(__name__)

RTOL = 1e-12
STATE = ("dphi", "Delta", "Delta_y", "psi", "psi_y", "psi_yy", "psi_yyy")


def theta(c):
    return parse_template(table.THETA, resolver(c.bind().as_dict()))


def _templates(c):
    cb = c.bind().as_dict()
    base = dict(cb)
    base["Theta"] = theta(c)
    extra = {n: var(n) for n in STATE}
    res = resolver(base, extra)
    alpha = parse_template(table.ALPHA_II, res)
    beta = parse_template(table.BETA_II, res)
    res_ab = resolver(base, dict(extra, alpha=alpha, beta=beta))
    return {
        "phi_yy": parse_template(table.PHI_YY, res),
        "Delta_yy": parse_template(table.DELTA_YY, res),
        "alpha": alpha,
        "beta": beta,
        "psi_yyyy": parse_template(table.PSI_YYYY, res_ab),
        "theta": base["Theta"],
    }


@dataclass(frozen=True)
class Seeds:
    """Initial data at (x_lo, y_lo); None picks the default."""

    phi: float = None
    dphi: float = 1.0
    Delta: float = -1.0
    Delta_y: float = None
    psi: float = None
    psi_y: float = 0.0
    psi_yy: float = 0.0
    psi_yyy: float = 0.0

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        names = {"phi", "dphi", "Delta", "Delta_y", "psi", "psi_y", "psi_yy", "psi_yyy"}
        stray = set(d) - names
        if stray:
            raise ValueError(f"unknown seed entries {sorted(stray)}")
        return cls(**{k: float(v) for k, v in d.items()})


@dataclass(frozen=True)
class ConstructionII:
    point_map: PointMap
    target: LinearTarget
    grid: dict
    residuals: dict
    notes: tuple = field(default=())


class _Fields:
    """Compiled coefficient fields and state relations."""

    def __init__(self, c):
        cb = c.bind()
        r = cb["r"]
        F1, F2 = cb["F1"], cb["F2"]
        r_y = diff(r, "y")
        cfac = (20 * r_y + F1 - 2 * F2 * r) / 4
        xy = ("x", "y")
        self.r = compile_exprs([r], xy, vector=True)
        self.transport = compile_exprs([r, r_y, cfac, diff(cfac, "y"), F2], xy, vector=True)
        t = _templates(c)
        self.t = t
        self.line = compile_exprs([t["phi_yy"], t["Delta_yy"], t["alpha"], t["beta"], t["psi_yyyy"]],
                                  xy + STATE, vector=True)
        self.ab = compile_exprs([t["alpha"], t["beta"]], xy + STATE, vector=True)
        self.theta = t["theta"]
        self.F2 = F2
        self._cb = cb
        self._jets = None

    def jets(self, order=4):
        """Compiled tables of phi and psi partials in terms of the state.

        D_y and D_x act on expressions in (x, y, phi, STATE) as total
        derivatives, closing the state through phi_x = r phi_y,
        psi_x = r psi_y - Delta/phi_y, the Delta_x relation and the
        templates for phi_yy, Delta_yy and psi_yyyy.  The same operators give
        the transport of the full state along dy/dx = -r.
        """
        if self._jets is not None:
            return self._jets
        cb, t = self._cb, self.t
        r = cb["r"]
        v = {n: var(n) for n in ("phi",) + STATE}
        delta_x = parse_template(table.DELTA_X, resolver(cb.as_dict(), {"Delta": v["Delta"],
                                                                        "Delta_y": v["Delta_y"]}))
        dy = {"phi": v["dphi"], "dphi": t["phi_yy"], "Delta": v["Delta_y"],
              "Delta_y": t["Delta_yy"], "psi": v["psi_y"], "psi_y": v["psi_yy"],
              "psi_yy": v["psi_yyy"], "psi_yyy": t["psi_yyyy"]}

        def total(e, base, rule):
            out = diff(e, base)
            for name, d in rule.items():
                de = diff(e, name)
                if not de.is_zero():
                    out = out + de * d
            return out

        def D_y(e):
            return total(e, "y", dy)

        psi_x = r * v["psi_y"] - v["Delta"] / v["dphi"]
        dx = {"phi": r * v["dphi"], "dphi": D_y(r * v["dphi"]), "Delta": delta_x,
              "Delta_y": D_y(delta_x), "psi": psi_x, "psi_y": D_y(psi_x)}
        dx["psi_yy"] = D_y(dx["psi_y"])
        dx["psi_yyy"] = D_y(dx["psi_yy"])

        def D_x(e):
            return total(e, "x", dx)

        args = ("x", "y", "phi") + STATE
        tables = []
        for root in (v["phi"], v["psi"]):
            cols = [root]
            for _ in range(order):
                cols.append(D_y(cols[-1]))
            entries, index = [], []
            for j in range(order + 1):
                e = cols[j]
                for i in range(order + 1 - j):
                    entries.append(e)
                    index.append((i, j))
                    if i + j < order:
                        e = D_x(e)
            tables.append((compile_exprs(entries, args, vector=False), index))
        names = ("phi",) + STATE
        flow = [-r] + [dx[n] - r * dy[n] for n in names]
        self._jets = (tables, compile_exprs(flow, args, vector=False), order)
        return self._jets


def _vec(v, n):
    return np.broadcast_to(np.asarray(v, dtype=float), (n,))


def _integrate_line(fields, x0, y0, s0, y_end, max_calls=200000):
    """Initial-line ODE in y for (phi, dphi, Delta, Delta_y, psi, psi_y, psi_yy, psi_yyy)."""

    calls = [0]

    def rhs(y, s):
        calls[0] += 1
        if calls[0] > max_calls:
            raise JacobianVanished(f"initial-line integration stalls near y = {y:.6g}"
                                   f" (Delta = {s[2]:.3g})")
        phi, dphi, D, Dy, p, py, pyy, pyyy = s
        out = fields.line(x0, y, dphi, D, Dy, p, py, pyy, pyyy)
        phi_yy, D_yy, _, _, p4 = (float(v) for v in out)
        return [dphi, phi_yy, Dy, D_yy, py, pyy, pyyy, p4]

    floor = 1e-4 * abs(s0[2])

    def vanish(y, s):
        return abs(s[2]) - floor
    vanish.terminal = True

    def flat(y, s):
        return abs(s[1]) - 1e-6 * abs(s0[1])
    flat.terminal = True

    def blowup(y, s):
        return 1e10 - np.max(np.abs(s))
    blowup.terminal = True
    sol = solve_ivp(rhs, (y0, y_end), s0, method="DOP853", rtol=RTOL, atol=RTOL,
                    dense_output=True, events=[vanish, flat, blowup])
    if sol.status == 1:
        what = ("Delta", "phi_y", "the line solution")[[len(e) > 0 for e in sol.t_events].index(True)]
        verb = "blows up" if what == "the line solution" else "vanishes"
        raise JacobianVanished(f"{what} {verb} on the initial line near y = {sol.t[-1]:.6g}")
    if not sol.success:
        raise JacobianVanished(f"initial-line integration failed: {sol.message}")
    return sol.sol


class _Line:
    def __init__(self, fields, x0, y0, s0, y_min, y_max):
        self.y0 = y0
        self.up = _integrate_line(fields, x0, y0, s0, y_max) if y_max > y0 else None
        self.down = _integrate_line(fields, x0, y0, s0, y_min) if y_min < y0 else None
        self.s0 = np.asarray(s0, dtype=float)

    def __call__(self, ys):
        ys = np.atleast_1d(np.asarray(ys, dtype=float))
        out = np.empty((8, len(ys)))
        for k, y in enumerate(ys):
            if y > self.y0:
                out[:, k] = self.up(y)
            elif y < self.y0:
                out[:, k] = self.down(y)
            else:
                out[:, k] = self.s0
        return out


def _feet(fields, x, ys, x_lo):
    """Feet on x = x_lo of the characteristics through (x, ys)."""
    if x == x_lo:
        return np.array(ys, dtype=float)
    n = len(ys)

    def rhs(s, y):
        return -_vec(fields.r(np.full(n, s), y)[0], n)
    sol = solve_ivp(rhs, (x, x_lo), np.array(ys, dtype=float), method="DOP853", rtol=RTOL,
                    atol=RTOL, vectorized=False)
    if not sol.success:
        raise TraceLeftBox(f"characteristic integration failed: {sol.message}")
    return sol.y[:, -1]


def _transport(fields, x_lo, x, start):
    """March (y, dphi, Delta, Delta_y, psi, psi_y) from x_lo to x."""
    n = start.shape[1]

    def rhs(s, flat):
        y, dphi, D, Dy, p, py = flat.reshape(6, n)
        xs = np.full(n, s)
        r, r_y, cf, cf_y, F2 = (_vec(v, n) for v in fields.transport(xs, y))
        phi_yy = dphi * (4 * Dy - F2 * D) / (10 * D)
        return np.concatenate([
            -r,
            r_y * dphi,
            cf * D,
            (r_y + cf) * Dy + cf_y * D,
            -D / dphi,
            r_y * py - (Dy * dphi - D * phi_yy) / dphi ** 2,
        ])
    if x == x_lo:
        return start
    events = _degeneracy_events(start[1], start[2], lambda flat: flat.reshape(6, n)[1:3])
    sol = solve_ivp(_budget(rhs), (x_lo, x), start.ravel(), method="DOP853", rtol=RTOL,
                    atol=RTOL, events=events)
    _check_transport(sol, x)
    return sol.y[:, -1].reshape(6, n)


def _budget(rhs, max_calls=200000):
    calls = [0]

    def wrapped(x, s):
        calls[0] += 1
        if calls[0] > max_calls:
            raise JacobianVanished(f"transport stalls near x = {x:.6g}")
        return rhs(x, s)
    return wrapped


def _degeneracy_events(dphi0, delta0, pick):
    """Terminal events for phi_y or Delta falling to 1e-4 of their size on
    the initial line; ``pick`` extracts (phi_y, Delta) from the flat state."""
    floor_phi = 1e-4 * np.min(np.abs(dphi0))
    floor_delta = 1e-4 * np.min(np.abs(delta0))

    def flat_phi(x, s):
        return np.min(np.abs(pick(s)[0])) - floor_phi
    flat_phi.terminal = True

    def flat_delta(x, s):
        return np.min(np.abs(pick(s)[1])) - floor_delta
    flat_delta.terminal = True
    return [flat_phi, flat_delta]


def _check_transport(sol, x):
    if sol.status == 1:
        what = "phi_y" if len(sol.t_events[0]) else "Delta"
        raise JacobianVanished(f"{what} vanishes along a characteristic near x = {sol.t[-1]:.6g}")
    if not sol.success:
        raise TraceLeftBox(f"transport integration failed: {sol.message}")


def construct_II(c, box, seeds=None, grid=41, tol=1e-6):
    """Build phi, psi on a grid x grid lattice over ``box`` and the target."""
    seeds = seeds if isinstance(seeds, Seeds) else Seeds.from_dict(seeds)
    (x_lo, x_hi), (y_lo, y_hi) = box
    xs = np.linspace(x_lo, x_hi, grid)
    ys = np.linspace(y_lo, y_hi, grid)
    fields = _Fields(c)

    feet = np.array([_feet(fields, x, ys, x_lo) for x in xs])
    span = max(y_hi - y_lo, 1e-9)
    y_min = min(feet.min(), y_lo) - 1e-3 * span
    y_max = max(feet.max(), y_hi) + 1e-3 * span

    F2_0 = float(evaluate(fields.F2, {"x": np.array([x_lo]), "y": np.array([y_lo])})[0][0])
    D0 = seeds.Delta
    s0 = [y_lo if seeds.phi is None else seeds.phi, seeds.dphi, D0,
          F2_0 * D0 / 4 if seeds.Delta_y is None else seeds.Delta_y,
          x_lo if seeds.psi is None else seeds.psi, seeds.psi_y, seeds.psi_yy, seeds.psi_yyy]
    if s0[1] == 0 or s0[2] == 0:
        raise JacobianVanished("seed with phi_y = 0 or Delta = 0")
    line = _Line(fields, x_lo, y_lo, s0, y_min, y_max)

    shape = (grid, grid)
    PHI, PSI, DPHI, DELTA, DELTA_Y, PSI_Y, YL = (np.empty(shape) for _ in range(7))
    A_line, B_line = (np.empty(shape) for _ in range(2))
    for i, x in enumerate(xs):
        ls = line(feet[i])
        phi, dphi, D, Dy, p, py, pyy, pyyy = ls
        a_l, b_l = fields.ab(np.full(grid, x_lo), feet[i], dphi, D, Dy, p, py, pyy, pyyy)
        A_line[i], B_line[i] = _vec(a_l, grid), _vec(b_l, grid)
        start = np.array([feet[i], dphi, D, Dy, p, py])
        y, dphi_t, D_t, Dy_t, p_t, py_t = _transport(fields, x_lo, x, start)
        PHI[i] = phi
        YL[i], DPHI[i], DELTA[i], DELTA_Y[i], PSI[i], PSI_Y[i] = y, dphi_t, D_t, Dy_t, p_t, py_t

    drift = np.max(np.abs(YL - ys[None, :]))
    if drift > 1e-7 * (1 + span):
        raise ConsistencyViolation(f"characteristics missed the lattice by {drift:.3g}")
    if np.any(DELTA == 0) or np.any(np.sign(DELTA) != np.sign(DELTA.flat[0])):
        raise JacobianVanished("Delta changes sign on the grid")
    if np.any(np.sign(DPHI) != np.sign(DPHI.flat[0])):
        raise JacobianVanished("phi_y changes sign on the grid")

    X = np.repeat(xs[:, None], grid, axis=1)
    zeros = np.zeros(shape)
    A, B = fields.ab(X.ravel(), YL.ravel(), DPHI.ravel(), DELTA.ravel(), DELTA_Y.ravel(),
                     PSI.ravel(), PSI_Y.ravel(), zeros.ravel(), zeros.ravel())
    A = _vec(A, grid * grid).reshape(shape)
    B = _vec(B, grid * grid).reshape(shape)
    res_a = np.max(np.abs(A - A_line) / (1 + np.abs(A_line)))
    res_b = np.max(np.abs(B - B_line) / (1 + np.abs(B_line)))
    if max(res_a, res_b) > tol:
        raise ConsistencyViolation(
            f"alpha/beta are not constant along characteristics (alpha {res_a:.3g}, beta {res_b:.3g})")

    grid_data = {"x": xs, "y": ys, "phi": PHI, "psi": PSI, "Delta": DELTA, "alpha": A,
                 "beta": B, "phi_y": DPHI, "psi_y": PSI_Y}
    residuals = {"alphaTransport": float(res_a), "betaTransport": float(res_b)}
    target = _target(line, fields, x_lo, y_min, y_max)
    closed = _recognize(xs, ys, PHI), _recognize(xs, ys, PSI)
    if closed[0] is not None and closed[1] is not None:
        pm = PointMap("II", closed=closed, grid=grid_data, notes=("closed form recognised on grid",))
    else:
        pm = PointMap("II", evaluator=_point_evaluator(fields, line, x_lo), grid=grid_data,
                      notes=("partials transported along characteristics",))
    residuals.update(grid_residuals(c, grid_data))
    return ConstructionII(pm, target, grid_data, residuals, pm.notes)


def _target(line, fields, x_lo, y_min, y_max, n=201):
    """alpha(t), beta(t) sampled along the initial line, where t = phi(x_lo, y)."""
    ys = np.linspace(y_min, y_max, n)
    s = line(ys)
    a, b = fields.ab(np.full(n, x_lo), ys, *s[1:])
    t = s[0]
    a = _vec(a, n)
    b = _vec(b, n)
    order = np.argsort(t)
    a_t = _constant(a)
    b_t = _constant(b)
    if a_t is not None and b_t is not None:
        return LinearTarget(alpha=a_t, beta=b_t, t=t[order], alpha_samples=a[order],
                            beta_samples=b[order])
    t_sorted = t[order]

    def at(tq):
        tq = np.atleast_1d(np.asarray(tq, dtype=float))
        yq = np.interp(tq, t_sorted, ys[order])
        # refine y with Newton steps on phi(x_lo, y) = t
        for _ in range(4):
            st = line(yq)
            yq = yq - (st[0] - tq) / st[1]
        st = line(yq)
        aq, bq = fields.ab(np.full(len(tq), x_lo), yq, *st[1:])
        return _vec(aq, len(tq)), _vec(bq, len(tq))
    return LinearTarget(alpha=a_t, beta=b_t, t=t_sorted, alpha_samples=a[order],
                        beta_samples=b[order], evaluator=at)


def _constant(v, tol=1e-10):
    """A rational constant expression when all samples agree, else None."""
    mid = float(np.median(v))
    if np.max(np.abs(v - mid)) > tol * (1 + abs(mid)):
        return None
    q = Fraction(mid).limit_denominator(10000)
    if abs(float(q) - mid) <= tol * (1 + abs(mid)):
        return const(q)
    return None


def _recognize(xs, ys, values, degree=4, tol=1e-9):
    """Fit a bivariate polynomial with small rational coefficients, if one
    reproduces the grid values."""
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    powers = [(i, j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    M = np.column_stack([X.ravel() ** i * Y.ravel() ** j for i, j in powers])
    coef, *_ = np.linalg.lstsq(M, values.ravel(), rcond=None)
    x, y = var("x"), var("y")
    expr = ZERO
    rounded = []
    for (i, j), cval in zip(powers, coef):
        q = Fraction(float(cval)).limit_denominator(1000)
        if abs(float(q) - cval) > 1e-6:
            return None
        rounded.append(float(q))
        if q:
            expr = expr + const(q) * x ** i * y ** j
    fit = M @ np.array(rounded)
    scale = 1 + np.max(np.abs(values))
    if np.max(np.abs(fit - values.ravel())) > tol * scale:
        return None
    return simplify(expr)


def _point_evaluator(fields, line, x_lo):
    """Partials of phi and psi at any point, carried exactly from the initial
    line along the characteristic through it."""
    tables, flow, max_order = fields.jets()

    def rhs(x, s):
        return list(flow(x, *s))

    def evaluator(x, y, order=4):
        if order > max_order:
            raise ValueError(f"derivatives above order {max_order} are not available")
        foot = _feet(fields, x, [y], x_lo)[0]
        start = [foot, *line([foot])[:, 0]]
        if x != x_lo:
            events = _degeneracy_events(start[2], start[3], lambda s: (s[2], s[3]))
            sol = solve_ivp(_budget(rhs), (x_lo, x), start, method="DOP853", rtol=RTOL,
                            atol=RTOL, events=events)
            _check_transport(sol, x)
            start = sol.y[:, -1]
        state = start[1:]
        out = []
        for fn, index in tables:
            vals = fn(x, y, *state)
            d = np.zeros((order + 1, order + 1))
            for (i, j), val in zip(index, vals):
                if i + j <= order:
                    d[i, j] = val
            out.append(d)
        return out[0], out[1]
    return evaluator


def grid_residuals(c, grid_data):
    """Residuals of phi_x = r phi_y, psi_x = r psi_y - Delta/phi_y and
    10 Delta phi_yy = phi_y (4 Delta_y - F2 Delta) on the grid, with the
    derivatives taken from quintic splines of phi, psi, Delta (independent of
    the transport), scaled by 1 + the largest term."""
    xs, ys = grid_data["x"], grid_data["y"]
    cb = c.bind()
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    env = {"x": X.ravel(), "y": Y.ravel()}
    (r, F2), _ = evaluate([cb["r"], cb["F2"]], env)
    r = np.broadcast_to(r, X.size).reshape(X.shape)
    F2 = np.broadcast_to(F2, X.size).reshape(X.shape)
    sp = RectBivariateSpline(xs, ys, grid_data["phi"], kx=5, ky=5)
    sq = RectBivariateSpline(xs, ys, grid_data["psi"], kx=5, ky=5)
    sd = RectBivariateSpline(xs, ys, grid_data["Delta"], kx=5, ky=5)
    px, py, pyy = sp(xs, ys, dx=1), sp(xs, ys, dy=1), sp(xs, ys, dy=2)
    qx, qy = sq(xs, ys, dx=1), sq(xs, ys, dy=1)
    D, Dy = sd(xs, ys), sd(xs, ys, dy=1)

    def rel(a, b):
        return float(np.max(np.abs(a - b) / (1 + np.maximum(np.abs(a), np.abs(b)))))
    return {
        "phiTransport": rel(px, r * py),
        "psiTransport": rel(qx, r * qy - D / py),
        "phiCurvature": rel(10 * D * pyy, py * (4 * Dy - F2 * D)),
        "jacobian": rel(px * qy - py * qx, D),
    }


def theta_samples(c, points):
    xs, ys = points
    val, bad = evaluate(theta(c), {"x": np.asarray(xs), "y": np.asarray(ys)})
    return np.broadcast_to(np.asarray(val, dtype=float), np.shape(xs))

"""The two candidate normal forms of a linearizable fourth-order equation.

First form (phi independent of y):

    y'''' + (A1*y' + A0)*y''' + B0*y''^2 + (C2*y'^2 + C1*y' + C0)*y''
          + D4*y'^4 + D3*y'^3 + D2*y'^2 + D1*y' + D0 = 0

Second form (phi_y != 0), with r = phi_x/phi_y:

    y'''' + (-10*y'' + F2*y'^2 + F1*y' + F0)*y'''/(y' + r)
          + (15*y''^3 + H(y')*y''^2 + J(y')*y'' + K(y'))/(y' + r)^2 = 0

where H, J and K are polynomials in y' of degrees 2, 4 and 7.
"""

import re
from dataclasses import dataclass, field

import numpy as np

from . import _forward_table
from .errors import DegenerateMap, ShapeMismatch
from .exprcore import (ZERO, Expr, NotPolynomial, as_expr, as_poly, diff, diff_multi,
                       evaluate, free_vars, parse_expr, parse_template, simplify, substitute, var)
from .exprcore.calculus import monomial_text

NAMES_I = ("A1", "A0", "B0", "C2", "C1", "C0", "D4", "D3", "D2", "D1", "D0")
NAMES_II = ("r", "F2", "F1", "F0", "H2", "H1", "H0", "J4", "J3", "J2", "J1", "J0",
            "K7", "K6", "K5", "K4", "K3", "K2", "K1", "K0")

# exponents of (y1, y2, y3) multiplying each first-form coefficient
MONOMIALS_I = {
    "A1": (1, 0, 1), "A0": (0, 0, 1), "B0": (0, 2, 0), "C2": (2, 1, 0), "C1": (1, 1, 0),
    "C0": (0, 1, 0), "D4": (4, 0, 0), "D3": (3, 0, 0), "D2": (2, 0, 0), "D1": (1, 0, 0),
    "D0": (0, 0, 0),
}
DERIVATIVE_SYMBOLS = ("y1", "y2", "y3")


class Coefficients:
    """An immutable bundle of coefficient expressions in x and y.

    ``parameters`` holds named constants still free in the expressions
    together with their bound values (or None when unbound).
    """

    kind = None
    names = ()

    def __init__(self, values, parameters=None):
        missing = [n for n in self.names if n not in values]
        extra = [n for n in values if n not in self.names]
        if missing or extra:
            raise ValueError(f"{type(self).__name__} needs exactly {', '.join(self.names)}"
                             f" (missing {missing}, unexpected {extra})")
        vals = {n: as_expr(values[n]) for n in self.names}
        params = dict(parameters or {})
        allowed = {"x", "y"} | set(params)
        for n, e in vals.items():
            stray = free_vars(e) - allowed
            if stray:
                raise ValueError(f"coefficient {n} depends on {sorted(stray)}")
        object.__setattr__(self, "_values", vals)
        object.__setattr__(self, "parameters", params)

    def __setattr__(self, key, value):
        raise AttributeError("coefficient bundles are immutable")

    def __getattr__(self, name):
        values = object.__getattribute__(self, "_values")
        if name in values:
            return values[name]
        raise AttributeError(name)

    def __getitem__(self, name):
        return self._values[name]

    def items(self):
        return [(n, self._values[n]) for n in self.names]

    def as_dict(self):
        return dict(self.items())

    def bind(self, values=None):
        """Substitute parameter values; returns a bundle in x and y only."""
        values = dict(self.parameters, **(values or {}))
        unbound = [k for k, v in values.items() if v is None]
        if unbound:
            from .errors import UnboundParameter
            raise UnboundParameter(f"parameters without values: {', '.join(unbound)}")
        if not values:
            return self
        return type(self)({n: substitute(e, values) for n, e in self.items()})

    def replace(self, **changes):
        vals = self.as_dict()
        vals.update({k: as_expr(v) for k, v in changes.items()})
        return type(self)(vals, self.parameters)

    def to_strings(self):
        return {n: str(e) for n, e in self.items()}

    def __repr__(self):
        inner = ", ".join(f"{n}={e}" for n, e in self.items())
        return f"{type(self).__name__}({inner})"


class CoefficientsI(Coefficients):
    kind = "I"
    names = NAMES_I


class CoefficientsII(Coefficients):
    kind = "II"
    names = NAMES_II


def zero_coefficients(kind):
    cls = CoefficientsI if kind == "I" else CoefficientsII
    return cls({n: ZERO for n in cls.names})


def coefficients_from_table(table, kind, parameters=None):
    """Parse a table of strings (as found in request files) into a bundle."""
    params = dict(parameters or {})
    cls = CoefficientsI if kind == "I" else CoefficientsII
    values = {}
    for n in cls.names:
        if n not in table:
            raise ValueError(f"candidate {kind} table lacks {n}")
        values[n] = parse_expr(str(table[n]), parameters=params)
    extra = set(table) - set(cls.names)
    if extra:
        raise ValueError(f"candidate {kind} table has unknown entries {sorted(extra)}")
    return cls(values, params)


# ---------------------------------------------------------------------------
# Raw equations

def parse_rhs(source, parameters=()):
    """Parse the right side of y'''' = rhs, in x, y, y1, y2, y3."""
    return parse_expr(source, parameters=parameters, variables=("x", "y") + DERIVATIVE_SYMBOLS)


def extract_candidate_I(rhs, parameters=None):
    """Coefficients of the first form for the equation y'''' = rhs."""
    try:
        poly = as_poly(rhs, DERIVATIVE_SYMBOLS)
    except NotPolynomial as exc:
        raise ShapeMismatch([], detail=str(exc)) from None
    allowed = {m: n for n, m in MONOMIALS_I.items()}
    offending = [monomial_text(m, DERIVATIVE_SYMBOLS) for m in sorted(poly) if m not in allowed]
    if offending:
        raise ShapeMismatch(offending)
    values = {n: simplify(-poly[m]) if m in poly else ZERO for n, m in MONOMIALS_I.items()}
    return CoefficientsI(values, parameters)


def rhs_from_candidate_I(c):
    """The right side of y'''' = rhs reproducing the first form."""
    y = [var(s) for s in DERIVATIVE_SYMBOLS]
    total = ZERO
    for n, m in MONOMIALS_I.items():
        term = c[n]
        for sym, k in zip(y, m):
            if k:
                term = term * sym ** k
        total = total + term
    return -total


@dataclass(frozen=True)
class CandidateI:
    coefficients: CoefficientsI


@dataclass(frozen=True)
class CandidateII:
    """Placeholder verdict: second-form equations need structured input."""
    message: str = "second-form equations must be given as a candidateII table"


@dataclass(frozen=True)
class NeitherForm:
    reason: str
    monomials: tuple = ()


def classify(rhs, parameters=None):
    """Place a raw equation y'''' = rhs into the first form, or explain why not."""
    try:
        return CandidateI(extract_candidate_I(rhs, parameters))
    except ShapeMismatch as exc:
        reason = str(exc)
        if not exc.monomials:
            reason += "; if the equation has the second form, supply a candidateII table"
        return NeitherForm(reason, tuple(exc.monomials))


# ---------------------------------------------------------------------------
# Forward coefficient maps

_DERIV = re.compile(r"^(phi|psi|Delta|r)(?:_([xy]+))?$")


def _looks_zero(e, box=((0.5, 2.0), (0.5, 2.0)), n=12, seed=7):
    """Cheap numerical test that ``e`` vanishes identically on the box."""
    if e.is_const:
        return e.value == 0
    rng = np.random.default_rng(seed)
    xs = rng.uniform(*box[0], n)
    ys = rng.uniform(*box[1], n)
    val, bad = evaluate(e, {"x": xs, "y": ys})
    good = ~bad
    if not good.any():
        return False
    return bool(np.all(np.abs(val[good]) < 1e-12))


def _target_terms(alpha, beta, phi):
    """alpha(t), beta(t) composed with t = phi."""
    alpha, beta = as_expr(alpha), as_expr(beta)
    return substitute(alpha, {"t": phi}), substitute(beta, {"t": phi})


def _forward(table, base, names):
    cache = {}

    def resolve(name):
        if name in base:
            return base[name]
        m = _DERIV.match(name)
        if m is None:
            return None
        key = m.group(1)
        spec = m.group(2) or ""
        if (key, spec) not in cache:
            cache[(key, spec)] = diff_multi(base[key], spec)
        return cache[(key, spec)]

    return {n: parse_template(table[n], resolve) for n in names}


def forward_coefficients_I(phi, psi, alpha, beta):
    """First-form coefficients of the equation mapped to
    u'''' + alpha(t) u' + beta(t) u = 0 by t = phi(x), u = psi(x, y).

    ``alpha`` and ``beta`` are expressions in ``t``.
    """
    phi, psi = as_expr(phi), as_expr(psi)
    if not diff(phi, "y").is_zero() and not _looks_zero(diff(phi, "y")):
        raise DegenerateMap("phi depends on y; use the second form")
    phi_x, psi_y = diff(phi, "x"), diff(psi, "y")
    if _looks_zero(phi_x):
        raise DegenerateMap("phi_x vanishes identically")
    if _looks_zero(psi_y):
        raise DegenerateMap("psi_y vanishes identically")
    a, b = _target_terms(alpha, beta, phi)
    base = {"phi": phi, "psi": psi, "alpha": a, "beta": b}
    return CoefficientsI(_forward(_forward_table.CANDIDATE_I, base, NAMES_I))


def forward_coefficients_II(phi, psi, alpha, beta):
    """Second-form coefficients for t = phi(x, y), u = psi(x, y) with phi_y != 0."""
    phi, psi = as_expr(phi), as_expr(psi)
    phi_x, phi_y = diff(phi, "x"), diff(phi, "y")
    if _looks_zero(phi_y):
        raise DegenerateMap("phi_y vanishes identically; the map belongs to the first form")
    delta = phi_x * diff(psi, "y") - phi_y * diff(psi, "x")
    if _looks_zero(delta):
        raise DegenerateMap("the Jacobian vanishes identically")
    a, b = _target_terms(alpha, beta, phi)
    base = {"phi": phi, "psi": psi, "alpha": a, "beta": b, "Delta": delta,
            "r": phi_x / phi_y}
    names = [n for n in NAMES_II if n != "r"]
    values = _forward(_forward_table.CANDIDATE_II, base, names)
    values["r"] = base["r"]
    return CoefficientsII(values)


# ---------------------------------------------------------------------------
# Transformations and targets

@dataclass(frozen=True)
class PointMap:
    """A point transformation t = phi(x, y), u = psi(x, y).

    ``closed`` holds (phi, psi) expressions.  Otherwise ``evaluator`` is a
    callable ``(x, y, order) -> (phi_derivs, psi_derivs)`` returning arrays
    ``d[i, j] = d^(i+j)/dx^i dy^j`` at one point, and ``grid`` carries the
    lattice samples for reporting.  ``kind`` is "I" (phi_y == 0) or "II".
    """

    kind: str
    closed: tuple = None
    evaluator: object = None
    grid: dict = None
    notes: tuple = ()

    @property
    def is_closed(self):
        return self.closed is not None

    @property
    def phi(self):
        return self.closed[0] if self.closed else None

    @property
    def psi(self):
        return self.closed[1] if self.closed else None

    def derivatives(self, x0, y0, order=4):
        """Arrays of partial derivatives of phi and psi at (x0, y0)."""
        if self.closed is not None:
            from .exprcore import jet_eval
            out = []
            for e in self.closed:
                jet = jet_eval(e, (float(x0), float(y0)), order=order).to_float()
                d = np.zeros((order + 1, order + 1))
                for i in range(order + 1):
                    for j in range(order + 1 - i):
                        d[i, j] = float(jet.derivative((i, j)))
                out.append(d)
            return out[0], out[1]
        return self.evaluator(float(x0), float(y0), order)


@dataclass(frozen=True)
class LinearTarget:
    """The target u'''' + alpha(t) u' + beta(t) u = 0.

    ``alpha``/``beta`` are expressions in ``t`` when known in closed form;
    ``t``, ``alpha_samples`` and ``beta_samples`` hold sampled values (t
    increasing).  ``evaluator``, when given, maps an array of t to
    (alpha, beta) arrays and takes precedence over the samples.
    ``alpha_at``/``beta_at`` evaluate whichever representation is best.
    """

    alpha: Expr = None
    beta: Expr = None
    t: np.ndarray = None
    alpha_samples: np.ndarray = None
    beta_samples: np.ndarray = None
    extras: dict = field(default_factory=dict)
    evaluator: object = field(default=None, repr=False, compare=False)

    def _at(self, expr, samples, t, which):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if expr is not None:
            val, _ = evaluate(expr, {"t": t})
            return np.broadcast_to(np.asarray(val, dtype=float), t.shape).copy()
        if self.evaluator is not None:
            return np.asarray(self.evaluator(t)[which], dtype=float)
        from scipy.interpolate import CubicSpline
        if len(self.t) == 1:
            return np.full_like(t, samples[0])
        return CubicSpline(self.t, samples)(t)

    def alpha_at(self, t):
        return self._at(self.alpha, self.alpha_samples, t, 0)

    def beta_at(self, t):
        return self._at(self.beta, self.beta_samples, t, 1)

    def statement(self):
        a = str(self.alpha) if self.alpha is not None else "alpha(t)"
        b = str(self.beta) if self.beta is not None else "beta(t)"
        return f"u'''' + ({a})*u' + ({b})*u = 0"

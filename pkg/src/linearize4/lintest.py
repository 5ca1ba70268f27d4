"""Linearization conditions and the randomized zero test that decides them."""

import re
from dataclasses import dataclass, field

import numpy as np

from . import _condition_table as table
from .candidates import CoefficientsI, CoefficientsII
from .errors import SamplingExhausted
from .exprcore import (SamplePlan, additive_terms, diff_multi, evaluate, is_rational_expr,
                       node_count, parse_template, postorder)

CONDITION_IDS_I = tuple((cid, label) for cid, label, _ in table.CONDITIONS_I)
CONDITION_IDS_II = tuple((cid, label) for cid, label, _ in table.CONDITIONS_II)

_SYMBOL = re.compile(r"^([A-Za-z]+[0-9]*)(?:_([xy]+))?$")


def resolver(base, extra=None):
    """Identifier resolver for the formula tables.

    ``base`` maps names to expressions; ``name_xy`` resolves to the matching
    partial derivative of ``base[name]``.  ``extra`` holds names that are
    looked up verbatim (e.g. state variables of a construction).
    """
    extra = extra or {}
    cache = {}

    def resolve(name):
        if name in extra:
            return extra[name]
        if name in base:
            return base[name]
        m = _SYMBOL.match(name)
        if m is None or m.group(1) not in base:
            return None
        key = (m.group(1), m.group(2) or "")
        if key not in cache:
            cache[key] = diff_multi(base[key[0]], key[1])
        return cache[key]

    return resolve


def _build(rows, c):
    c = c.bind()
    resolve = resolver(c.as_dict())
    return [parse_template(src, resolve) for _, _, src in rows]


def build_conditions_I(c: CoefficientsI):
    """The ten first-form conditions as residual expressions."""
    return _build(table.CONDITIONS_I, c)


def build_conditions_II(c: CoefficientsII):
    """The eighteen second-form conditions as residual expressions."""
    return _build(table.CONDITIONS_II, c)


def build_conditions(c):
    return build_conditions_I(c) if c.kind == "I" else build_conditions_II(c)


def condition_ids(kind):
    return CONDITION_IDS_I if kind == "I" else CONDITION_IDS_II


@dataclass(frozen=True)
class ConditionRecord:
    id: str
    label: str
    max_abs: float
    max_rel: float
    min_rel: float
    passed: bool

    def to_dict(self):
        return {"id": self.id, "paperEq": self.label, "maxAbs": self.max_abs,
                "maxRel": self.max_rel, "minRel": self.min_rel, "pass": self.passed}


@dataclass(frozen=True)
class ConditionReport:
    kind: str
    records: tuple
    plan: SamplePlan
    tau: float
    mode: str
    redrawn: int
    points: tuple = field(default=(), repr=False)

    @property
    def linearizable(self):
        return all(r.passed for r in self.records)

    @property
    def verdict(self):
        return "linearizable" if self.linearizable else "not_linearizable"

    @property
    def failing(self):
        return [r.id for r in self.records if not r.passed]

    @property
    def max_rel(self):
        return max((r.max_rel for r in self.records), default=0.0)

    def record(self, cid):
        for r in self.records:
            if r.id == cid:
                return r
        raise KeyError(cid)

    def to_dict(self):
        (xl, xh), (yl, yh) = self.plan.box
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "conditions": [r.to_dict() for r in self.records],
            "samplePlan": {"box": [[xl, xh], [yl, yh]], "points": self.plan.points,
                           "seed": self.plan.seed, "epsSing": self.plan.eps_sing},
            "mode": self.mode,
            "tau": self.tau,
            "redrawn": self.redrawn,
        }


def choose_mode(exprs, plan):
    if plan.mode != "auto":
        return plan.mode
    if all(is_rational_expr(e) for e in exprs) and node_count(*exprs) <= plan.exact_node_limit:
        return "exact"
    return "float"


def _offending_denominators(exprs, env, exact, eps, limit=5):
    dens = []
    seen = set()
    for node in postorder(exprs):
        if node.kind == "div" and node.args[1] not in seen:
            seen.add(node.args[1])
            dens.append(node.args[1])
        elif node.kind == "pow" and node.value < 0 and node.args[0] not in seen:
            seen.add(node.args[0])
            dens.append(node.args[0])
    found = []
    for d in dens:
        val, bad = evaluate(d, env, exact=exact, eps=eps)
        if bad.any() or np.any(np.abs(val.astype(float)) < eps):
            found.append(str(d))
            if len(found) >= limit:
                break
    return found


def probabilistic_zero_test(exprs, plan=None, tau_pass=1e-9, ids=None, kind=None):
    """Decide which expressions vanish identically on the plan's box.

    Each expression is evaluated at ``plan.points`` accepted random points;
    points where some denominator or log argument comes within
    ``plan.eps_sing`` of zero are redrawn (at most ``redraw_factor * points``
    times).  In exact mode a condition passes only when every residual is
    exactly zero; in float mode when the relative residual
    ``|res| / (1 + max |additive term|)`` stays at or below ``tau_pass``.
    """
    plan = plan or SamplePlan()
    exprs = list(exprs)
    if ids is None:
        ids = [(f"E{i + 1}", "") for i in range(len(exprs))]
    if len(ids) != len(exprs):
        raise ValueError("one id per expression is required")
    mode = choose_mode(exprs, plan)
    exact = mode == "exact"
    terms = [additive_terms(e) for e in exprs]
    flat_terms = [t for ts in terms for t in ts]
    roots = exprs + flat_terms
    rng = plan.rng()
    m = plan.points
    budget = plan.redraw_factor * m
    redrawn = 0
    acc_x, acc_y, acc_vals = [], [], []
    while sum(len(a) for a in acc_x) < m:
        need = m - sum(len(a) for a in acc_x)
        xs, ys = plan.draw(rng, need, exact)
        env = {"x": xs, "y": ys}
        vals, bad = evaluate(roots, env, exact=exact, eps=plan.eps_sing)
        good = ~bad
        nbad = int(bad.sum())
        if nbad:
            redrawn += nbad
            if redrawn > budget:
                offenders = _offending_denominators(
                    exprs, {"x": xs[bad], "y": ys[bad]}, exact, plan.eps_sing)
                raise SamplingExhausted(
                    f"only {sum(len(a) for a in acc_x) + int(good.sum())} of {m} sample points"
                    f" are nonsingular after {redrawn} redraws", offenders)
        acc_x.append(xs[good])
        acc_y.append(ys[good])
        acc_vals.append([v[good] for v in vals])
    values = [np.concatenate([chunk[i] for chunk in acc_vals]) for i in range(len(roots))]
    records = []
    offset = len(exprs)
    for i, (cid, label) in enumerate(ids):
        res = values[i]
        k = len(terms[i])
        term_vals = values[offset:offset + k]
        offset += k
        scale = 1.0 + np.max(np.abs(np.array([np.asarray(t, dtype=float) for t in term_vals])), axis=0)
        absres = np.abs(np.asarray(res, dtype=float))
        rel = absres / scale
        if exact:
            passed = all(v == 0 for v in res)
        else:
            passed = bool(np.all(rel <= tau_pass))
        records.append(ConditionRecord(cid, label, float(absres.max()), float(rel.max()),
                                       float(rel.min()), passed))
    pts = (np.concatenate(acc_x), np.concatenate(acc_y))
    return ConditionReport(kind, tuple(records), plan, 0.0 if exact else tau_pass, mode,
                           redrawn, pts)


def check_coefficients(c, plan=None, tau_pass=1e-9):
    """Build the condition set of ``c`` and run the zero test."""
    exprs = build_conditions(c)
    return probabilistic_zero_test(exprs, plan, tau_pass, list(condition_ids(c.kind)), c.kind)

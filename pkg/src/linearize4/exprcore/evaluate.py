"""Numeric evaluation of expression DAGs.

``evaluate`` works elementwise on arrays of sample points, in float64 or in
exact rational arithmetic (numpy object arrays of Fractions), and reports
which points left the domain of some operation.  ``compile_exprs`` turns a
set of expressions into a plain Python function for repeated scalar calls,
e.g. inside an ODE right-hand side.
"""

import math
from fractions import Fraction

import numpy as np

from .calculus import is_rational_expr, postorder
from ..errors import UnboundParameter

_NP_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "log": np.log, "sqrt": np.sqrt}


def _as_array(value, n, exact):
    if exact:
        if isinstance(value, np.ndarray):
            return value
        arr = np.empty(n, dtype=object)
        arr[:] = [Fraction(value)] * n
        return arr
    return np.broadcast_to(np.asarray(value, dtype=float), (n,))


def evaluate(exprs, env, exact=False, eps=1e-8):
    """Evaluate ``exprs`` at ``n`` points.

    ``env`` maps variable names to arrays of length ``n`` (or scalars).  In
    exact mode the arrays hold Fractions and every expression must be
    rational.  Returns ``(values, bad)`` where ``values`` is a list of arrays
    and ``bad`` flags points where a denominator, a negative-power base or a
    log argument fell below ``eps`` in magnitude, or a sqrt/power argument
    was negative.  Values at bad points are meaningless.
    """
    single = not isinstance(exprs, (list, tuple))
    roots = [exprs] if single else list(exprs)
    n = None
    for val in env.values():
        if isinstance(val, np.ndarray) and val.ndim:
            n = len(val)
            break
    if n is None:
        n = 1
    if exact and not all(is_rational_expr(r) for r in roots):
        raise ValueError("exact evaluation needs rational expressions")
    bad = np.zeros(n, dtype=bool)
    vals = {}
    one = _as_array(1, n, exact)
    with np.errstate(all="ignore"):
        for node in postorder(roots):
            k = node.kind
            if k == "const":
                vals[node] = _as_array(node.value if exact else float(node.value), n, exact)
            elif k == "var":
                if node.value not in env:
                    raise UnboundParameter(f"no value bound for {node.value!r}")
                raw = env[node.value]
                if exact:
                    vals[node] = _as_array(raw, n, True)
                else:
                    vals[node] = _as_array(np.asarray(raw, dtype=float), n, False)
            elif k == "neg":
                vals[node] = -vals[node.args[0]]
            elif k == "add":
                vals[node] = vals[node.args[0]] + vals[node.args[1]]
            elif k == "sub":
                vals[node] = vals[node.args[0]] - vals[node.args[1]]
            elif k == "mul":
                vals[node] = vals[node.args[0]] * vals[node.args[1]]
            elif k == "div":
                den = vals[node.args[1]]
                small = np.asarray(np.abs(den) < eps, dtype=bool)
                bad |= small
                if small.any():
                    den = np.where(small, one, den)
                vals[node] = vals[node.args[0]] / den
            elif k == "pow":
                base = vals[node.args[0]]
                p = node.value
                if p < 0:
                    small = np.asarray(np.abs(base) < eps, dtype=bool)
                    bad |= small
                    if small.any():
                        base = np.where(small, one, base)
                    vals[node] = one / base ** (-p)
                else:
                    vals[node] = base ** p
            elif k == "powr":
                base = vals[node.args[0]]
                small = np.asarray(base < eps, dtype=bool)
                bad |= small
                base = np.where(small, 1.0, base)
                vals[node] = base ** vals[node.args[1]]
            elif k == "func":
                arg = vals[node.args[0]]
                name = node.value
                if name == "log":
                    small = np.asarray(arg < eps, dtype=bool)
                    bad |= small
                    arg = np.where(small, 1.0, arg)
                elif name == "sqrt":
                    small = np.asarray(arg < 0, dtype=bool)
                    bad |= small
                    arg = np.where(small, 0.0, arg)
                vals[node] = _NP_FUNCS[name](np.asarray(arg, dtype=float))
            else:
                raise ValueError(k)
    out = [vals[r] for r in roots]
    if not exact:
        out = [np.array(v, dtype=float) for v in out]
        for v in out:
            bad |= ~np.isfinite(v)
    return (out[0] if single else out), bad


def evaluate_scalar(e, **env):
    """Float value of ``e`` at one point; convenience for tests and callers."""
    (val,), _ = evaluate([e], {k: np.array([float(v)]) for k, v in env.items()})
    return float(val[0])


def compile_exprs(exprs, argnames, vector=False):
    """Generate a Python function ``f(*args) -> tuple`` evaluating ``exprs``.

    Shared subexpressions are computed once.  With ``vector=True`` numpy
    functions are used so the arguments may be arrays.  No domain guard is
    applied; division by zero raises (scalars) or yields inf (arrays).
    """
    roots = list(exprs)
    names = {}
    lines = []
    fmod = "_np" if vector else "_m"
    argnames = list(argnames)
    argset = set(argnames)
    for i, node in enumerate(postorder(roots)):
        k = node.kind
        if k == "const":
            text = repr(float(node.value))
        elif k == "var":
            if node.value not in argset:
                raise UnboundParameter(f"no argument for {node.value!r}")
            names[node] = f"a_{argnames.index(node.value)}"
            continue
        else:
            a = [names[c] for c in node.args]
            if k == "neg":
                text = f"-{a[0]}"
            elif k == "add":
                text = f"{a[0]} + {a[1]}"
            elif k == "sub":
                text = f"{a[0]} - {a[1]}"
            elif k == "mul":
                text = f"{a[0]} * {a[1]}"
            elif k == "div":
                text = f"{a[0]} / {a[1]}"
            elif k == "pow":
                text = f"{a[0]} ** {node.value}" if node.value > 0 else f"1.0 / {a[0]} ** {-node.value}"
            elif k == "powr":
                text = f"{a[0]} ** {a[1]}"
            else:
                text = f"{fmod}.{node.value}({a[0]})"
        names[node] = f"t{i}"
        lines.append(f"    t{i} = {text}")
    params = ", ".join(f"a_{j}" for j in range(len(argnames)))
    ret = ", ".join(names[r] for r in roots)
    src = f"def _f({params}):\n" + "\n".join(lines) + f"\n    return ({ret}{',' if len(roots) == 1 else ''})\n"
    scope = {"_np": np, "_m": math}
    exec(compile(src, "<compiled-expr>", "exec"), scope)
    return scope["_f"]

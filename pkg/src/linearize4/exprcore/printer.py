"""Canonical text form of an expression.

The output re-parses to a structurally identical tree: operands are
parenthesised whenever the left-associative grammar would otherwise group
them differently.
"""

from fractions import Fraction

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "powr": 4,
         "var": 5, "func": 5}


def _prec(e):
    if e.kind == "const":
        v = e.value
        if v.denominator != 1:
            return 2
        return 3 if v < 0 else 5
    return _PREC[e.kind]


def _starts_with_minus(e):
    if e.kind == "neg":
        return True
    if e.kind == "const":
        return e.value < 0
    if e.kind in ("add", "sub", "mul", "div", "pow", "powr"):
        return _prec(e.args[0]) >= _prec(e) and _starts_with_minus(e.args[0])
    return False


def _const_text(v):
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def to_string(e):
    """Render ``e`` in the input grammar."""
    memo = {}
    return _render(e, memo)


def _wrap(text):
    return "(" + text + ")"


def _render(e, memo):
    hit = memo.get(e)
    if hit is not None:
        return hit
    k = e.kind
    if k == "const":
        out = _const_text(e.value)
    elif k == "var":
        out = e.value
    elif k == "func":
        out = f"{e.value}({_render(e.args[0], memo)})"
    elif k == "neg":
        a = e.args[0]
        inner = _render(a, memo)
        if _prec(a) < 4:
            inner = _wrap(inner)
        out = "-" + inner
    elif k in ("pow", "powr"):
        base = e.args[0]
        btxt = _render(base, memo)
        if _prec(base) < 5:
            btxt = _wrap(btxt)
        if k == "pow":
            n = e.value
            etxt = str(n) if n >= 0 else _wrap(str(n))
        else:
            ex = e.args[1]
            etxt = _render(ex, memo)
            if _prec(ex) < 4 or _starts_with_minus(ex):
                etxt = _wrap(etxt)
        out = btxt + "^" + etxt
    else:
        op = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[k]
        p = _PREC[k]
        a, b = e.args
        atxt = _render(a, memo)
        if _prec(a) < p:
            atxt = _wrap(atxt)
        btxt = _render(b, memo)
        if _prec(b) <= p or _starts_with_minus(b):
            btxt = _wrap(btxt)
        out = atxt + op + btxt
    memo[e] = out
    return out

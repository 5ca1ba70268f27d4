"""Symbolic operations on expression DAGs: differentiation, substitution,
polynomial coefficient extraction and a monomial normaliser.

All traversals are iterative so deep trees do not hit the recursion limit.
"""

import weakref
from fractions import Fraction

from . import expr as E
from .printer import to_string

_diff_cache = weakref.WeakKeyDictionary()
_free_cache = weakref.WeakKeyDictionary()


def postorder(roots):
    """Nodes reachable from ``roots``, children before parents, each once."""
    seen = set()
    order = []
    for root in roots:
        if root in seen:
            continue
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if node in seen:
                continue
            seen.add(node)
            stack.append((node, True))
            for child in node.args:
                if child not in seen:
                    stack.append((child, False))
    return order


def node_count(*roots):
    return len(postorder(roots))


def free_vars(e):
    """Set of variable names occurring in ``e``."""
    hit = _free_cache.get(e)
    if hit is not None:
        return hit
    for node in postorder([e]):
        if node in _free_cache:
            continue
        if node.kind == "var":
            fv = frozenset([node.value])
        elif not node.args:
            fv = frozenset()
        else:
            fv = frozenset().union(*(_free_cache[c] for c in node.args))
        _free_cache[node] = fv
    return _free_cache[e]


def is_rational_expr(e):
    """True when ``e`` uses only field operations and integer powers."""
    return all(n.kind not in ("func", "powr") for n in postorder([e]))


def _local_diff(node, v, d):
    k = node.kind
    if k == "const":
        return E.ZERO
    if k == "var":
        return E.ONE if node.value == v else E.ZERO
    if k == "neg":
        return E.neg(d(node.args[0]))
    if k == "add":
        return E.add(d(node.args[0]), d(node.args[1]))
    if k == "sub":
        return E.sub(d(node.args[0]), d(node.args[1]))
    if k == "mul":
        a, b = node.args
        return E.add(E.mul(d(a), b), E.mul(a, d(b)))
    if k == "div":
        a, b = node.args
        da, db = d(a), d(b)
        if db.is_zero():
            return E.div(da, b)
        return E.div(E.sub(E.mul(da, b), E.mul(a, db)), E.ipow(b, 2))
    if k == "pow":
        a = node.args[0]
        n = node.value
        return E.mul(E.mul(E.const(n), E.ipow(a, n - 1)), d(a))
    if k == "powr":
        a, b = node.args
        da, db = d(a), d(b)
        inner = E.add(E.mul(db, E.log(a)), E.div(E.mul(b, da), a))
        return E.mul(node, inner)
    if k == "func":
        a = node.args[0]
        da = d(a)
        if da.is_zero():
            return E.ZERO
        name = node.value
        if name == "sin":
            return E.mul(E.cos(a), da)
        if name == "cos":
            return E.neg(E.mul(E.sin(a), da))
        if name == "exp":
            return E.mul(node, da)
        if name == "log":
            return E.div(da, a)
        if name == "sqrt":
            return E.div(da, E.mul(E.const(2), node))
    raise ValueError(f"cannot differentiate node kind {k}")


def diff(e, v):
    """Partial derivative of ``e`` with respect to the variable named ``v``."""
    v = str(v)
    if v not in free_vars(e):
        return E.ZERO
    table = _diff_cache.get(e)
    if table is not None and v in table:
        return table[v]

    def lookup(node):
        if v not in free_vars(node):
            return E.ZERO
        return _diff_cache[node][v]

    for node in postorder([e]):
        if v not in free_vars(node):
            continue
        table = _diff_cache.get(node)
        if table is None:
            table = {}
            _diff_cache[node] = table
        if v in table:
            continue
        table[v] = _local_diff(node, v, lookup)
    return _diff_cache[e][v]


def diff_multi(e, spec):
    """Apply ``diff`` for every character of ``spec``, e.g. ``"xxy"``."""
    for v in spec:
        e = diff(e, v)
    return e


def rebuild(node, args):
    k = node.kind
    if k in ("const", "var"):
        return node
    if k == "neg":
        return E.neg(args[0])
    if k == "add":
        return E.add(*args)
    if k == "sub":
        return E.sub(*args)
    if k == "mul":
        return E.mul(*args)
    if k == "div":
        return E.div(*args)
    if k == "pow":
        return E.ipow(args[0], node.value)
    if k == "powr":
        return E.power(*args)
    if k == "func":
        return E.func(node.value, args[0])
    raise ValueError(k)


def substitute(e, mapping):
    """Replace variables by expressions; ``mapping`` is name -> Expr/number."""
    mapping = {str(k): E.as_expr(v) if not isinstance(v, str) else E.var(v)
               for k, v in mapping.items()}
    keys = frozenset(mapping)
    out = {}
    for node in postorder([e]):
        if not (free_vars(node) & keys):
            out[node] = node
        elif node.kind == "var":
            out[node] = mapping[node.value]
        else:
            out[node] = rebuild(node, [out[c] for c in node.args])
    return out[e]


def additive_terms(e):
    """Flatten top-level sums, differences and negations into signed terms."""
    terms = []
    stack = [(e, 1)]
    while stack:
        node, sign = stack.pop()
        if node.kind == "add":
            stack.append((node.args[1], sign))
            stack.append((node.args[0], sign))
        elif node.kind == "sub":
            stack.append((node.args[1], -sign))
            stack.append((node.args[0], sign))
        elif node.kind == "neg":
            stack.append((node.args[0], -sign))
        else:
            terms.append(node if sign > 0 else E.neg(node))
    return terms


class NotPolynomial(ValueError):
    pass


def _poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = E.add(out.get(m, E.ZERO), E.mul(c1, c2))
    return {m: c for m, c in out.items() if not c.is_zero()}


def _poly_add(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        c = c if sign > 0 else E.neg(c)
        out[m] = E.add(out[m], c) if m in out else c
    return {m: c for m, c in out.items() if not c.is_zero()}


def as_poly(e, gens):
    """Coefficients of ``e`` viewed as a polynomial in the variables ``gens``.

    Returns a dict mapping exponent tuples to coefficient expressions free of
    ``gens``.  Raises NotPolynomial when a generator appears in a denominator,
    under a function or in a non-integer power.
    """
    gens = tuple(gens)
    gset = frozenset(gens)
    zero = (0,) * len(gens)
    memo = {}
    for node in postorder([e]):
        if not (free_vars(node) & gset):
            memo[node] = {zero: node} if not node.is_zero() else {}
            continue
        k = node.kind
        if k == "var":
            m = tuple(1 if g == node.value else 0 for g in gens)
            memo[node] = {m: E.ONE}
        elif k == "neg":
            memo[node] = {m: E.neg(c) for m, c in memo[node.args[0]].items()}
        elif k == "add":
            memo[node] = _poly_add(memo[node.args[0]], memo[node.args[1]])
        elif k == "sub":
            memo[node] = _poly_add(memo[node.args[0]], memo[node.args[1]], -1)
        elif k == "mul":
            memo[node] = _poly_mul(memo[node.args[0]], memo[node.args[1]])
        elif k == "div":
            den = node.args[1]
            if free_vars(den) & gset:
                raise NotPolynomial(f"{to_string(den)} appears in a denominator")
            memo[node] = {m: E.div(c, den) for m, c in memo[node.args[0]].items()}
        elif k == "pow":
            if node.value < 0:
                raise NotPolynomial(f"negative power of {to_string(node.args[0])}")
            base = memo[node.args[0]]
            acc = {zero: E.ONE}
            for _ in range(node.value):
                acc = _poly_mul(acc, base)
            memo[node] = acc
        else:
            raise NotPolynomial(f"{to_string(node)} is not polynomial in {', '.join(gens)}")
    return memo[e]


def monomial_text(m, gens):
    parts = []
    for g, k in zip(gens, m):
        if k == 1:
            parts.append(g)
        elif k > 1:
            parts.append(f"{g}^{k}")
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# Monomial normal form.  A normal form is a dict mapping a "power product"
# (sorted tuple of (atom, exponent) pairs) to a rational coefficient.  Atoms
# are variables, function applications, general powers, and sums that could
# not be distributed.

_EXPAND_LIMIT = 256


def _key(atom):
    return to_string(atom)


def _pp_mul(a, b):
    powers = dict(a)
    for atom, k in b:
        powers[atom] = powers.get(atom, 0) + k
    return tuple(sorted(((t, k) for t, k in powers.items() if k != 0),
                        key=lambda tk: _key(tk[0])))


def _nf_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _pp_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def _nf_add(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, 0) + sign * c
    return {m: c for m, c in out.items() if c != 0}


def _nf_atom(atom):
    return {((atom, 1),): Fraction(1)}


def _nf_pow(p, n):
    if n == 0:
        return {(): Fraction(1)}
    if len(p) == 1:
        (m, c), = p.items()
        return {tuple((t, k * n) for t, k in m): c ** n}
    if n > 0 and len(p) ** n <= _EXPAND_LIMIT:
        acc = {(): Fraction(1)}
        for _ in range(n):
            acc = _nf_mul(acc, p)
        return acc
    return {((from_normal(p), n),): Fraction(1)}


def normal_form(e):
    memo = {}
    for node in postorder([e]):
        k = node.kind
        if k == "const":
            memo[node] = {(): node.value} if node.value != 0 else {}
        elif k == "var":
            memo[node] = _nf_atom(node)
        elif k == "neg":
            memo[node] = {m: -c for m, c in memo[node.args[0]].items()}
        elif k == "add":
            memo[node] = _nf_add(memo[node.args[0]], memo[node.args[1]])
        elif k == "sub":
            memo[node] = _nf_add(memo[node.args[0]], memo[node.args[1]], -1)
        elif k == "mul":
            p, q = memo[node.args[0]], memo[node.args[1]]
            if len(p) * len(q) <= _EXPAND_LIMIT:
                memo[node] = _nf_mul(p, q)
            else:
                memo[node] = _nf_mul(_nf_atom(from_normal(p)), _nf_atom(from_normal(q)))
        elif k == "div":
            num, den = memo[node.args[0]], memo[node.args[1]]
            if not den:
                raise ZeroDivisionError("denominator simplifies to 0")
            if len(den) == 1:
                memo[node] = _nf_mul(num, _nf_pow(den, -1))
            else:
                memo[node] = _nf_mul(num, {((from_normal(den), -1),): Fraction(1)})
        elif k == "pow":
            memo[node] = _nf_pow(memo[node.args[0]], node.value)
        elif k == "powr":
            atom = E.power(simplify(node.args[0]), simplify(node.args[1]))
            memo[node] = _nf_atom(atom)
        elif k == "func":
            atom = E.func(node.value, simplify(node.args[0]))
            memo[node] = _nf_atom(atom) if not atom.is_const else (
                {(): atom.value} if atom.value != 0 else {})
    return memo[e]


def _product(factors):
    out = E.ONE
    for f in factors:
        out = E.mul(out, f)
    return out


def _term_expr(pp, c):
    """Expression for ``c * pp``; a negative c lands in the numerator."""
    num = [E.ipow(t, k) for t, k in pp if k > 0]
    den = [E.ipow(t, -k) for t, k in pp if k < 0]
    lead = abs(c.numerator) != 1 or not num
    body = _product(([E.const(c.numerator)] if lead else []) + num)
    if c < 0 and not lead:
        body = E.neg(body)
    denom = _product(([E.const(c.denominator)] if c.denominator != 1 else []) + den)
    return E.div(body, denom)


def from_normal(nf):
    if not nf:
        return E.ZERO
    items = sorted(nf.items(), key=lambda mc: (len(mc[0]), [(_key(t), k) for t, k in mc[0]]))
    out = None
    for pp, c in items:
        if out is None:
            out = _term_expr(pp, c)
        elif c < 0:
            out = E.sub(out, _term_expr(pp, -c))
        else:
            out = E.add(out, _term_expr(pp, c))
    return out


def simplify(e):
    """Collect like monomials and cancel powers; stronger than the local
    rules applied at construction but still not a canonical form."""
    try:
        return from_normal(normal_form(e))
    except ZeroDivisionError:
        return e


def laurent_integrate(e, v):
    """Antiderivative in ``v`` when every term is ``c * v^k * (v-free)``.

    Returns None when some atom other than ``v`` depends on ``v``.
    """
    v = str(v)
    nf = normal_form(e)
    var_node = E.var(v)
    out = {}
    for pp, c in nf.items():
        k = 0
        rest = []
        for atom, n in pp:
            if atom is var_node:
                k = n
            elif v in free_vars(atom):
                return None
            else:
                rest.append((atom, n))
        rest = tuple(rest)
        if k == -1:
            piece = _nf_mul({rest: c}, _nf_atom(E.log(var_node)))
        else:
            piece = _nf_mul({rest: c / (k + 1)}, {((var_node, k + 1),): Fraction(1)})
        out = _nf_add(out, piece)
    return from_normal(out)

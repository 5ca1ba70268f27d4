"""Immutable, hash-consed expression trees.

Every node is interned: two structurally equal trees are the same Python
object, so equality is identity and hashing is O(1).  Constructors apply a
small set of local simplifications (constant folding, identity elements,
collapsing nested integer powers).  Nothing global is attempted.

Constants are always exact rationals (``fractions.Fraction``).  Floats enter
only at evaluation time.
"""

import threading
import weakref
from fractions import Fraction
from numbers import Rational

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")

_table = weakref.WeakValueDictionary()
_lock = threading.Lock()


class Expr:
    """A node of an expression DAG.

    ``kind`` is one of const, var, neg, add, sub, mul, div, pow (integer
    exponent held in ``value``), powr (general exponent, second child) and
    func (function name held in ``value``).
    """

    __slots__ = ("kind", "args", "value", "_hash", "__weakref__")

    def __init__(self, kind, args, value):
        self.kind = kind
        self.args = args
        self.value = value
        self._hash = hash((kind, value, args))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __reduce__(self):
        return (_rebuild, (self.kind, self.args, self.value))

    def __repr__(self):
        from .printer import to_string
        return f"Expr({to_string(self)!r})"

    def __str__(self):
        from .printer import to_string
        return to_string(self)

    # operator sugar, used by the construction code
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, other):
        if isinstance(other, int):
            return ipow(self, other)
        return power(self, as_expr(other))

    @property
    def is_const(self):
        return self.kind == "const"

    def is_zero(self):
        return self.kind == "const" and self.value == 0

    def is_one(self):
        return self.kind == "const" and self.value == 1


def _make(kind, args, value=None):
    key = (kind, value, tuple(id(a) for a in args))
    with _lock:
        node = _table.get(key)
        if node is None:
            node = Expr(kind, args, value)
            _table[key] = node
    return node


def _rebuild(kind, args, value):
    return _make(kind, args, value)


def const(value):
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("non-finite constant")
    value = Fraction(value)
    return _make("const", (), value)


def var(name):
    return _make("var", (), str(name))


def as_expr(obj):
    if isinstance(obj, Expr):
        return obj
    if isinstance(obj, str):
        return var(obj)
    return const(obj)


ZERO = const(0)
ONE = const(1)


def neg(a):
    if a.kind == "const":
        return const(-a.value)
    if a.kind == "neg":
        return a.args[0]
    return _make("neg", (a,))


def add(a, b):
    if a.kind == "const" and b.kind == "const":
        return const(a.value + b.value)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return _make("add", (a, b))


def sub(a, b):
    if a.kind == "const" and b.kind == "const":
        return const(a.value - b.value)
    if b.is_zero():
        return a
    if a.is_zero():
        return neg(b)
    if a is b:
        return ZERO
    return _make("sub", (a, b))


def mul(a, b):
    if a.kind == "const" and b.kind == "const":
        return const(a.value * b.value)
    if a.is_zero() or b.is_zero():
        return ZERO
    if a.is_one():
        return b
    if b.is_one():
        return a
    if a.kind == "const" and a.value == -1:
        return neg(b)
    if b.kind == "const" and b.value == -1:
        return neg(a)
    return _make("mul", (a, b))


def div(a, b):
    if b.kind == "const":
        if b.value == 0:
            raise ZeroDivisionError("division by the constant 0")
        if a.kind == "const":
            return const(a.value / b.value)
        if b.value == 1:
            return a
        if b.value == -1:
            return neg(a)
    if a.is_zero():
        return ZERO
    return _make("div", (a, b))


def ipow(a, n):
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return a
    if a.kind == "const":
        if a.value == 0 and n < 0:
            raise ZeroDivisionError("negative power of the constant 0")
        return const(a.value ** n)
    if a.kind == "pow":
        return ipow(a.args[0], a.value * n)
    return _make("pow", (a,), n)


def power(a, b):
    """General power ``a^b``; folds to an integer power when possible."""
    if b.kind == "const" and b.value.denominator == 1:
        return ipow(a, b.value.numerator)
    if b.kind == "const" and b.value == Fraction(1, 2):
        return func("sqrt", a)
    return _make("powr", (a, b))


def func(name, a):
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name}")
    if a.kind == "const":
        v = a.value
        if name in ("sin",) and v == 0:
            return ZERO
        if name == "cos" and v == 0:
            return ONE
        if name == "exp" and v == 0:
            return ONE
        if name == "log" and v == 1:
            return ZERO
        if name == "sqrt" and v >= 0:
            root = _exact_sqrt(v)
            if root is not None:
                return const(root)
    if name == "exp" and a.kind == "func" and a.value == "log":
        return a.args[0]
    return _make("func", (a,), name)


def _exact_sqrt(q):
    from math import isqrt
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sin(a):
    return func("sin", as_expr(a))


def cos(a):
    return func("cos", as_expr(a))


def exp(a):
    return func("exp", as_expr(a))


def log(a):
    return func("log", as_expr(a))


def sqrt(a):
    return func("sqrt", as_expr(a))


def is_rational_number(v):
    return isinstance(v, Rational)

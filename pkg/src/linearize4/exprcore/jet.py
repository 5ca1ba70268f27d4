"""Truncated multivariate Taylor arithmetic.

A Jet of order N in ``d`` variables stores the coefficients
``c[i, j, ...] = (d^i/dx^i d^j/dy^j ... f) / (i! j! ...)`` for total degree
``i + j + ... <= N`` in an ``(N+1,)*d`` array; entries above the total degree
are kept at zero.  Arrays may be float or object (holding Fractions), so
derivatives of rational expressions at rational points come out exact.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

from ..errors import SingularPoint, UnboundParameter
from .calculus import is_rational_expr, postorder


def _mask(order, nvars):
    idx = np.indices((order + 1,) * nvars).sum(axis=0)
    return idx <= order


def _indices(order, nvars):
    return [m for m in itertools.product(range(order + 1), repeat=nvars) if sum(m) <= order]


class Jet:
    __slots__ = ("c", "order", "nvars")

    def __init__(self, coeffs, order):
        self.c = coeffs
        self.order = order
        self.nvars = coeffs.ndim

    # construction -----------------------------------------------------
    @staticmethod
    def _zeros(order, nvars, exact):
        if exact:
            arr = np.empty((order + 1,) * nvars, dtype=object)
            arr.fill(Fraction(0))
            return arr
        return np.zeros((order + 1,) * nvars)

    @classmethod
    def constant(cls, value, nvars=2, order=6, exact=None):
        if exact is None:
            exact = isinstance(value, (int, Fraction))
        arr = cls._zeros(order, nvars, exact)
        arr[(0,) * nvars] = Fraction(value) if exact else float(value)
        return cls(arr, order)

    @classmethod
    def variable(cls, index, value, nvars=2, order=6, exact=None):
        jet = cls.constant(value, nvars, order, exact)
        if order >= 1:
            pos = [0] * nvars
            pos[index] = 1
            jet.c[tuple(pos)] = Fraction(1) if jet.exact else 1.0
        return jet

    @property
    def exact(self):
        return self.c.dtype == object

    @property
    def value(self):
        return self.c[(0,) * self.nvars]

    def coefficient(self, multi):
        multi = tuple(multi)
        if sum(multi) > self.order:
            raise IndexError("beyond the truncation order")
        return self.c[multi]

    def derivative(self, multi):
        """Partial derivative value ``d^|multi| f`` at the base point."""
        c = self.coefficient(multi)
        scale = 1
        for k in multi:
            scale *= math.factorial(k)
        return c * scale

    def partial(self, axis):
        """Jet of the partial derivative along ``axis`` (order drops by one)."""
        n = self.order
        if n == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        src = [slice(0, n)] * self.nvars
        src[axis] = slice(1, n + 1)
        out = self._zeros(n - 1, self.nvars, self.exact)
        k = np.arange(1, n + 1)
        shape = [1] * self.nvars
        shape[axis] = n
        factor = k.reshape(shape)
        if self.exact:
            factor = factor.astype(object)
        out[...] = self.c[tuple(src)] * factor
        out = out * _mask(n - 1, self.nvars)
        return Jet(out, n - 1)

    def truncate(self, order):
        if order >= self.order:
            return self
        sl = (slice(0, order + 1),) * self.nvars
        arr = self.c[sl].copy()
        if self.exact:
            arr[~_mask(order, self.nvars)] = Fraction(0)
        else:
            arr[~_mask(order, self.nvars)] = 0.0
        return Jet(arr, order)

    def to_float(self):
        if not self.exact:
            return self
        return Jet(self.c.astype(float), self.order)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            a, b = self, other
            n = min(a.order, b.order)
            a, b = a.truncate(n), b.truncate(n)
            if a.exact != b.exact:
                a, b = a.to_float(), b.to_float()
            return a, b
        return self, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is None:
            out = a.c.copy()
            out[(0,) * a.nvars] = out[(0,) * a.nvars] + other
            return Jet(out, a.order)
        return Jet(a.c + b.c, a.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return Jet(a.c * other, a.order)
        n, d = a.order, a.nvars
        out = self._zeros(n, d, a.exact)
        for m in _indices(n, d):
            coef = a.c[m]
            if coef == 0:
                continue
            dst = tuple(slice(k, n + 1) for k in m)
            src = tuple(slice(0, n + 1 - k) for k in m)
            out[dst] += coef * b.c[src]
        mask = _mask(n, d)
        if a.exact:
            out[~mask] = Fraction(0)
        else:
            out[~mask] = 0.0
        return Jet(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / other, self.order)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def _series(self, coeffs):
        """Compose a univariate series sum_k coeffs[k] h^k with h = self - c0."""
        h = self - self.value
        out = Jet.constant(coeffs[0], self.nvars, self.order, exact=self.exact and _is_exact(coeffs[0]))
        power = None
        for k in range(1, self.order + 1):
            power = h if power is None else power * h
            if coeffs[k] != 0:
                out = out + power * coeffs[k]
        return out

    def reciprocal(self, eps=0.0):
        c0 = self.value
        if c0 == 0 or abs(c0) < eps:
            raise SingularPoint(f"division by a jet with constant term {c0}")
        coeffs = [(-1) ** k / c0 ** (k + 1) for k in range(self.order + 1)]
        if self.exact:
            coeffs = [Fraction(-1) ** k / c0 ** (k + 1) for k in range(self.order + 1)]
        return self._series(coeffs)

    def ipow(self, n, eps=0.0):
        if n < 0:
            return self.reciprocal(eps).ipow(-n)
        result = Jet.constant(1, self.nvars, self.order, exact=self.exact)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def apply(self, name, eps=0.0):
        c0 = float(self.value)
        n = self.order
        fact = [math.factorial(k) for k in range(n + 1)]
        if name == "exp":
            e0 = math.exp(c0)
            coeffs = [e0 / fact[k] for k in range(n + 1)]
        elif name == "log":
            if c0 <= 0 or c0 < eps:
                raise SingularPoint(f"log of {c0}")
            coeffs = [math.log(c0)] + [(-1) ** (k + 1) / (k * c0 ** k) for k in range(1, n + 1)]
        elif name == "sin":
            cyc = [math.sin(c0), math.cos(c0), -math.sin(c0), -math.cos(c0)]
            coeffs = [cyc[k % 4] / fact[k] for k in range(n + 1)]
        elif name == "cos":
            cyc = [math.cos(c0), -math.sin(c0), -math.cos(c0), math.sin(c0)]
            coeffs = [cyc[k % 4] / fact[k] for k in range(n + 1)]
        elif name == "sqrt":
            return self.real_power(0.5, eps)
        else:
            raise ValueError(name)
        return self.to_float()._series(coeffs)

    def real_power(self, a, eps=0.0):
        c0 = float(self.value)
        if c0 < 0 or (self.order > 0 and c0 < max(eps, 1e-300)):
            raise SingularPoint(f"power {a} of {c0}")
        coeffs = []
        binom = 1.0
        for k in range(self.order + 1):
            coeffs.append(binom * c0 ** (a - k) if c0 > 0 else (1.0 if k == 0 and a == 0 else 0.0))
            binom = binom * (a - k) / (k + 1)
        return self.to_float()._series(coeffs)

    def compose(self, increments):
        """Substitute univariate jets ``increments`` (one per variable, zero
        constant term) into this Taylor polynomial."""
        order = min(j.order for j in increments)
        powers = []
        for inc in increments:
            seq = [Jet.constant(1, 1, order, exact=inc.exact and self.exact)]
            for _ in range(self.order):
                seq.append(seq[-1] * inc)
            powers.append(seq)
        out = Jet.constant(0, 1, order, exact=self.exact and all(j.exact for j in increments))
        for m in _indices(self.order, self.nvars):
            coef = self.c[m]
            if coef == 0:
                continue
            term = powers[0][m[0]]
            for axis in range(1, self.nvars):
                term = term * powers[axis][m[axis]]
            out = out + term * coef
        return out

    def __repr__(self):
        return f"Jet(order={self.order}, nvars={self.nvars}, value={self.value!r})"


def _is_exact(v):
    return isinstance(v, (int, Fraction))


def jet_eval(e, point=None, order=6, guard=1e-8, env=None):
    """Taylor jet of ``e`` at ``point = (x0, y0)``.

    ``env`` optionally binds further names (parameters) to numbers or Jets;
    it may also replace x and y, e.g. by univariate jets along a curve.
    Rational expressions at rational points give exact (Fraction) jets.
    Raises SingularPoint when a denominator, log or power argument comes
    within ``guard`` of its singular set at the base point.
    """
    env = dict(env or {})
    exact = False
    if point is not None:
        x0, y0 = point
        exact = all(_is_exact(v) for v in (x0, y0)) and is_rational_expr(e) and all(
            _is_exact(v) or (isinstance(v, Jet) and v.exact) for v in env.values())
        if exact:
            x0, y0 = Fraction(x0), Fraction(y0)
        else:
            x0, y0 = float(x0), float(y0)
        env.setdefault("x", Jet.variable(0, x0, 2, order, exact))
        env.setdefault("y", Jet.variable(1, y0, 2, order, exact))
    vals = {}
    for node in postorder([e]):
        k = node.kind
        if k == "const":
            vals[node] = node.value if exact else float(node.value)
        elif k == "var":
            if node.value not in env:
                raise UnboundParameter(f"no value bound for {node.value!r}")
            val = env[node.value]
            if not isinstance(val, Jet):
                val = Fraction(val) if exact else float(val)
            vals[node] = val
        else:
            a = [vals[c] for c in node.args]
            vals[node] = _apply(node, a, guard)
    out = vals[e]
    if not isinstance(out, Jet):
        nvars = 2
        sample = next((v for v in env.values() if isinstance(v, Jet)), None)
        if sample is not None:
            nvars, order = sample.nvars, sample.order
        out = Jet.constant(out, nvars, order, exact=exact)
    return out


def _scalar_guard(v, guard, what):
    if v == 0 or abs(v) < guard:
        raise SingularPoint(f"{what} {v} within guard")


def _apply(node, a, guard):
    k = node.kind
    if k == "neg":
        return -a[0]
    if k == "add":
        return a[0] + a[1]
    if k == "sub":
        return a[0] - a[1]
    if k == "mul":
        return a[0] * a[1]
    if k == "div":
        num, den = a
        if isinstance(den, Jet):
            return num * den.reciprocal(guard)
        _scalar_guard(den, guard, "denominator")
        return num / den
    if k == "pow":
        base, n = a[0], node.value
        if isinstance(base, Jet):
            return base.ipow(n, guard)
        if n < 0:
            _scalar_guard(base, guard, "base")
        return base ** n
    if k == "powr":
        base, ex = a
        if not isinstance(ex, Jet) and not isinstance(base, Jet):
            if base < guard:
                raise SingularPoint(f"power base {base}")
            return float(base) ** float(ex)
        if not isinstance(ex, Jet):
            return base.real_power(float(ex), guard)
        if not isinstance(base, Jet):
            if base < guard:
                raise SingularPoint(f"power base {base}")
            return (ex * math.log(float(base))).apply("exp")
        return (ex * base.apply("log", guard)).apply("exp")
    if k == "func":
        arg = a[0]
        name = node.value
        if isinstance(arg, Jet):
            return arg.apply(name, guard)
        v = float(arg)
        if name == "log":
            if v < guard:
                raise SingularPoint(f"log of {v}")
            return math.log(v)
        if name == "sqrt":
            if v < 0:
                raise SingularPoint(f"sqrt of {v}")
            return math.sqrt(v)
        return getattr(math, name)(v)
    raise ValueError(k)

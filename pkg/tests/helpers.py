"""Shared generators and oracles for the test suite."""

from fractions import Fraction

import numpy as np

from linearize4.exprcore import ONE, const, cos, exp, log, parse_expr, sin, sqrt, var

BOX = ((0.5, 2.0), (0.5, 2.0))

EXAMPLE1_RHS = ("-(x^2*y^2 + 8*x^2*y1*y3 + 16*x*y*y3 + 6*x^2*y2^2 + 48*x*y1*y2"
                " + 24*y*y2 + 24*y1^2)/(2*x^2*y)")
EXAMPLE1 = {"A1": "4/y", "A0": "8/x", "B0": "3/y", "C2": "0", "C1": "24/(x*y)",
            "C0": "12/x^2", "D4": "0", "D3": "0", "D2": "12/(x^2*y)", "D1": "0", "D0": "y/2"}
EXAMPLE2_RHS = ("-(4*(a - 1)*y^2*y1*y3 + 3*(a - 1)*y^2*y2^2 + 6*(a - 1)*(a - 2)*y*y1^2*y2"
                " + (a - 1)*(a - 2)*(a - 3)*y1^4)/y^3")
EXAMPLE3_RHS = "-((y + D^2)*y2 + y1^2)"


def example2_coefficients(a):
    """The published first-form coefficients of Example 2 at parameter a."""
    a = Fraction(a)
    return {"A1": f"4*({a - 1})/y", "A0": "0", "B0": f"3*({a - 1})/y",
            "C2": f"6*({a * a - 3 * a + 2})/y^2", "C1": "0", "C0": "0",
            "D4": f"({a ** 3 - 6 * a * a + 11 * a - 6})/y^3", "D3": "0", "D2": "0", "D1": "0",
            "D0": "0"}


def example4_table():
    from linearize4.candidates import NAMES_II
    t = {n: "0" for n in NAMES_II}
    t["K7"] = "-x"
    t["K6"] = "-1"
    return t


def t_expr(s):
    return parse_expr(str(s), variables=("t",))


def _rational(rng, scale=Fraction(1, 4)):
    return Fraction(int(rng.integers(-8, 9)), 8) * scale


def family_I(rng):
    """phi = x + c1 x^2, psi = y + c2 x y + c3 y^2, constant alpha, beta."""
    c1, c2, c3, a, b = (_rational(rng) for _ in range(5))
    x, y = var("x"), var("y")
    phi = x + const(c1) * x * x
    psi = y + const(c2) * x * y + const(c3) * y * y
    return phi, psi, const(a), const(b)


def family_II(rng):
    """phi = y + c1 x + c2 x^2 + c3 x y, psi = x + c4 y^2 + c5 x y, constant alpha, beta."""
    c = [_rational(rng) for _ in range(7)]
    x, y = var("x"), var("y")
    phi = y + const(c[0]) * x + const(c[1]) * x * x + const(c[2]) * x * y
    psi = x + const(c[3]) * y * y + const(c[4]) * x * y
    return phi, psi, const(c[5]), const(c[6])


def random_expr(rng, depth=3):
    """A random expression in x, y that is smooth on the positive quadrant."""
    x, y = var("x"), var("y")
    if depth == 0 or rng.random() < 0.2:
        k = rng.integers(0, 4)
        if k == 0:
            return x
        if k == 1:
            return y
        return const(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))))
    a = random_expr(rng, depth - 1)
    b = random_expr(rng, depth - 1)
    op = rng.integers(0, 10)
    if op == 0:
        return a + b
    if op == 1:
        return a - b
    if op in (2, 3):
        return a * b
    if op == 4:
        return a / (ONE + b * b)
    if op == 5:
        return a ** int(rng.integers(2, 4))
    if op == 6:
        return sin(a)
    if op == 7:
        return cos(a) * b
    if op == 8:
        return exp(a / (const(2) + a * a))
    return log(ONE + a * a) + sqrt(const(2) + b * b)


def random_polynomial(rng, degree=5, terms=6):
    x, y = var("x"), var("y")
    e = const(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))))
    for _ in range(terms):
        i = int(rng.integers(0, degree + 1))
        j = int(rng.integers(0, degree + 1 - i))
        e = e + const(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))) * x ** i * y ** j
    return e


_STENCIL = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))


def fd_partial(f, x0, y0, i, j, h=1e-2):
    """d^(i+j) f / dx^i dy^j by nested fourth-order central differences."""
    if i > 0:
        return sum(w * fd_partial(f, x0 + k * h, y0, i - 1, j, h) for k, w in _STENCIL) / h
    if j > 0:
        return sum(w * fd_partial(f, x0, y0 + k * h, i, j - 1, h) for k, w in _STENCIL) / h
    return f(x0, y0)


def fd_partial_adaptive(f, x0, y0, i, j, steps=(4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3)):
    """Richardson-extrapolated differences over a halving step sequence; the
    estimate whose neighbour agrees best is returned."""
    raw = [fd_partial(f, x0, y0, i, j, h) for h in steps]
    rich = [(16 * b - a) / 15 for a, b in zip(raw, raw[1:])]
    gaps = [abs(b - a) for a, b in zip(rich, rich[1:])]
    k = int(np.argmin(gaps))
    return rich[k + 1]


def rel_close(a, b, tol):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return bool(np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))

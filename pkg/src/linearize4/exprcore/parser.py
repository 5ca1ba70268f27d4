"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-')? power
    power  := atom ('^' factor)?
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Columns in error messages are 1-based.
"""

import re
from fractions import Fraction

from ..errors import ExprSyntaxError, UnknownIdentifier
from . import expr as E

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

VARIABLES = ("x", "y")


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos + 1))
        pos = m.end()
    tokens.append(("end", "", len(src) + 1))
    return tokens


class _Parser:
    def __init__(self, src, names, resolve):
        self.tokens = _tokenize(src)
        self.i = 0
        self.names = names
        self.resolve = resolve

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, val, pos = self.take()
        if val != text or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", pos)

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = E.add(e, rhs) if op == "+" else E.sub(e, rhs)
        return e

    def term(self):
        e = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.factor()
            if op == "*":
                e = E.mul(e, rhs)
            else:
                if rhs.is_zero():
                    raise ExprSyntaxError("division by the constant 0", pos)
                e = E.div(e, rhs)
        return e

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return E.neg(self.power())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            _, _, pos = self.take()
            ex = self.factor()
            if base.is_zero() and ex.kind == "const" and ex.value < 0:
                raise ExprSyntaxError("negative power of 0", pos)
            return E.power(base, ex)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return E.const(Fraction(val))
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                if val not in E.FUNCTIONS:
                    raise UnknownIdentifier(val, pos)
                self.take()
                arg = self.expr()
                self.expect(")")
                return E.func(val, arg)
            if val in E.FUNCTIONS:
                raise ExprSyntaxError(f"function {val!r} needs an argument", pos)
            if self.resolve is not None:
                node = self.resolve(val)
                if node is None:
                    raise UnknownIdentifier(val, pos)
                return node
            if self.names is not None and val not in self.names:
                raise UnknownIdentifier(val, pos)
            return E.var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {found}", pos)


def parse_expr(source, parameters=(), variables=VARIABLES):
    """Parse ``source``; identifiers must be variables or declared parameters."""
    names = set(variables) | set(parameters)
    return _Parser(source, names, None).parse()


def parse_template(source, resolve=None):
    """Parse with free identifiers.

    ``resolve`` maps an identifier to an Expr (or None to reject it); without
    it every identifier becomes a variable.
    """
    return _Parser(source, None, resolve).parse()

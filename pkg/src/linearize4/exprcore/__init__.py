"""Expression core: trees, parsing, calculus, evaluation and Taylor jets."""

from .expr import Expr, const, var, as_expr, neg, add, sub, mul, div, ipow, power, func
from .expr import sin, cos, exp, log, sqrt, ZERO, ONE
from .parser import parse_expr, parse_template
from .printer import to_string
from .calculus import (diff, diff_multi, substitute, free_vars, additive_terms, as_poly,
                       NotPolynomial, simplify, laurent_integrate, postorder, node_count,
                       is_rational_expr)
from .evaluate import evaluate, evaluate_scalar, compile_exprs
from .jet import Jet, jet_eval
from .sampling import SamplePlan, DEFAULT_BOX

print_expr = to_string

"""Exact rational differential invariants of binary and ternary forms and plane curves."""
from .exactalg import ExactMatrix, QuadExt, Rational, format_rational, nullspace, rank
from .polyalg import (MultiPoly, ParseError, RatFunc, UnknownVariable, VarTable,
                      parse_expression, partial_derivative, ratfunc_equal)

__version__ = "0.1.0"

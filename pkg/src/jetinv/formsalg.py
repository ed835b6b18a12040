"""Binary and ternary forms, restriction of jet functions, resultants and
discriminants, and SL2-equivalence of cubics and quartics.

A form of degree ``n`` is ``φ = Σ b_σ x^σ/σ!`` (the factorial normalization),
so ``b_σ`` is the ``σ``-th partial derivative of ``φ``.  Coefficients are
rational functions in any parameter symbols.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .exactalg import ExactMatrix, det, det_laplace, format_rational
from .jets import (INDEP_NAMES, JetContext, JetError, JetFunction, multi_indices,
                   parse_jet_name, jet_name, _inverse_unimodular)
from .polyalg import (MultiPoly, RatFunc, VarTable, expression_names, parse_expression,
                      substitute)


class FormError(ValueError):
    pass


def _mfact(s) -> int:
    r = 1
    for k in s:
        r *= factorial(k)
    return r


def coefficient_name(sigma: Sequence[int], symbol: str = "b") -> str:
    return f"{symbol}[" + ",".join(str(i) for i in sigma) + "]"


class Form:
    """Homogeneous polynomial ``Σ b_σ x^σ/σ!`` in 2 or 3 variables."""

    def __init__(self, arity: int, degree: int, coefficients: Mapping[tuple, object],
                 params: Sequence[str] = ()):
        if arity not in (2, 3):
            raise FormError("forms have arity 2 or 3")
        if degree < 0:
            raise FormError("degree must be non-negative")
        self.arity = arity
        self.degree = degree
        indep = INDEP_NAMES[arity]
        names = list(params)
        for c in coefficients.values():
            if isinstance(c, RatFunc):
                for v in c.variables():
                    if v in indep:
                        raise FormError("form coefficients must not involve x, y, z")
                    if v not in names:
                        names.append(v)
        self.table = VarTable(indep + tuple(names))
        self.params = tuple(names)
        coeffs = {}
        for s in multi_indices(arity, degree):
            c = coefficients.get(s, 0)
            if isinstance(c, RatFunc):
                c = _move(c, self.table)
            else:
                c = RatFunc.constant(self.table, Fraction(c))
            coeffs[s] = c
        for s in coefficients:
            if len(s) != arity or sum(s) != degree:
                raise FormError(f"multi-index {s} does not fit a degree-{degree} form")
        self.coefficients = coeffs

    # ---- construction ---------------------------------------------------
    @classmethod
    def generic(cls, degree: int, arity: int = 2, symbol: str = "b") -> "Form":
        """Form whose coefficients are the symbols ``b[σ]``."""
        names = [coefficient_name(s, symbol) for s in multi_indices(arity, degree)]
        table = VarTable(INDEP_NAMES[arity] + tuple(names))
        coeffs = {s: RatFunc.var(table, coefficient_name(s, symbol))
                  for s in multi_indices(arity, degree)}
        return cls(arity, degree, coeffs, names)

    @classmethod
    def from_polynomial(cls, poly: RatFunc, arity: int = 2, degree: int | None = None) -> "Form":
        if not poly.is_polynomial():
            raise FormError("a form must be a polynomial")
        indep = INDEP_NAMES[arity]
        p = poly.num.scale(Fraction(1) / Fraction(poly.den.constant_value()))
        idx = [p.table.index.get(v) for v in indep]
        params = [v for v in p.table.names if v not in indep]
        ptab = VarTable(tuple(params))
        buckets: dict = {}
        for m, c in p.terms.items():
            s = tuple(m[i] if i is not None else 0 for i in idx)
            rest = tuple(k for v, k in zip(p.table.names, m) if v not in indep)
            buckets.setdefault(s, {})[rest] = c
        degs = {sum(s) for s in buckets}
        if degree is None:
            if len(degs) > 1:
                raise FormError("polynomial is not homogeneous")
            degree = degs.pop() if degs else 0
        elif degs - {degree}:
            raise FormError(f"polynomial is not homogeneous of degree {degree}")
        coeffs = {}
        for s, terms in buckets.items():
            c = RatFunc.from_poly(MultiPoly(ptab, terms)) if ptab.names else \
                RatFunc.constant(VarTable(()), terms[()])
            coeffs[s] = c * _mfact(s)
        used = [v for v in params if any(v in c.variables() for c in coeffs.values())]
        return cls(arity, degree, {s: _move(c, VarTable(INDEP_NAMES[arity] + tuple(used)))
                                   for s, c in coeffs.items()}, used)

    @classmethod
    def parse(cls, text: str, arity: int = 2, degree: int | None = None) -> "Form":
        """Polynomial text (``x^3 + a1*x^2*y``) or ``b[i,j]=value`` assignments."""
        text = text.strip()
        if "=" in text:
            return cls._parse_assignments(text, arity, degree)
        indep = INDEP_NAMES[arity]
        extra = [v for v in expression_names(text) if v not in indep]
        table = VarTable(indep + tuple(extra))
        return cls.from_polynomial(parse_expression(text, table), arity, degree)

    @classmethod
    def _parse_assignments(cls, text: str, arity: int, degree: int | None) -> "Form":
        coeffs = {}
        for part in re.split(r"[;\n]|,(?![^\[]*\])", text):
            part = part.strip()
            if not part:
                continue
            m = re.match(r"^b\[([\d,\s]+)\]\s*=\s*(.+)$", part)
            if not m:
                raise FormError(f"cannot read coefficient assignment {part!r}")
            s = tuple(int(v) for v in m.group(1).split(","))
            if len(s) != arity:
                raise FormError(f"b{list(s)} has the wrong number of indices for arity {arity}")
            names = expression_names(m.group(2))
            val = parse_expression(m.group(2), VarTable(tuple(names)))
            coeffs[s] = val
        degs = {sum(s) for s in coeffs}
        if degree is None:
            if len(degs) != 1:
                raise FormError("coefficient indices have mixed degrees")
            degree = degs.pop()
        return cls(arity, degree, coeffs)

    # ---- views ---------------------------------------------------------
    def polynomial(self) -> RatFunc:
        table = self.table
        vars_ = [RatFunc.var(table, v) for v in INDEP_NAMES[self.arity]]
        total = RatFunc.constant(table, 0)
        for s, c in self.coefficients.items():
            if c.is_zero():
                continue
            t = c * Fraction(1, _mfact(s))
            for v, k in zip(vars_, s):
                if k:
                    t = t * v ** k
            total = total + t
        return total

    def monomial_coefficient(self, sigma) -> RatFunc:
        return self.coefficients[tuple(sigma)] * Fraction(1, _mfact(sigma))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients.values())

    def is_rational(self) -> bool:
        return all(c.is_constant() for c in self.coefficients.values())

    def values(self) -> dict:
        return {s: c.constant_value() for s, c in self.coefficients.items()}

    def partial(self, axis: int) -> "Form":
        """``∂φ/∂x_axis`` as a form of degree ``n - 1``."""
        if self.degree == 0:
            raise FormError("derivative of a constant form")
        coeffs = {}
        for s in multi_indices(self.arity, self.degree - 1):
            t = list(s)
            t[axis] += 1
            coeffs[s] = self.coefficients[tuple(t)]
        return Form(self.arity, self.degree - 1, coeffs, self.params)

    def transform(self, A: Sequence[Sequence]) -> "Form":
        """``φ ∘ A^{-1}`` for a unimodular matrix ``A``."""
        A = [[Fraction(v) for v in row] for row in A]
        if len(A) != self.arity or any(len(r) != self.arity for r in A):
            raise FormError(f"need a {self.arity}x{self.arity} matrix")
        if det(ExactMatrix.from_rows(A)) != 1:
            raise FormError("matrix is not unimodular")
        inv = _inverse_unimodular(A)
        table = self.table
        xs = [RatFunc.var(table, v) for v in INDEP_NAMES[self.arity]]
        images = {}
        for i, v in enumerate(INDEP_NAMES[self.arity]):
            acc = RatFunc.constant(table, 0)
            for j in range(self.arity):
                if inv[i][j]:
                    acc = acc + xs[j] * inv[i][j]
            images[v] = acc
        p = substitute(self.polynomial(), images, table)
        return Form.from_polynomial(p, self.arity, self.degree)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.arity, self.degree) == (other.arity, other.degree) and all(
            self.coefficients[s] == other.coefficients[s] for s in self.coefficients)

    __hash__ = None

    def __str__(self):
        return str(self.polynomial())

    def __repr__(self):
        return f"Form(arity={self.arity}, degree={self.degree}, {self})"


def _move(c: RatFunc, table: VarTable) -> RatFunc:
    if c.table is table:
        return c
    return RatFunc(c.num.with_table(table), c.den.with_table(table), normalize=False)


# ---------------------------------------------------------------------------
# restriction and algebraic invariants

def restrict(f: JetFunction, phi: Form) -> RatFunc:
    """Substitute ``u_σ <- ∂^σ φ`` (and keep ``x, y, z``)."""
    if f.ctx.n != phi.arity:
        raise FormError("jet function and form have different arity")
    table = phi.table
    poly = phi.polynomial()
    cache = {(0,) * phi.arity: poly}
    indep = INDEP_NAMES[phi.arity]

    def deriv(s):
        if s in cache:
            return cache[s]
        j = next(i for i, v in enumerate(s) if v)
        prev = list(s)
        prev[j] -= 1
        r = deriv(tuple(prev)).diff(indep[j])
        cache[s] = r
        return r

    values = {}
    for name in f.value.variables():
        s = parse_jet_name(name)
        if s is not None:
            values[name] = deriv(s) if sum(s) <= phi.degree else RatFunc.constant(table, 0)
    src = f.value
    # carry x, y, z over; the jet variables are all substituted
    return substitute(src, values, table)


def algebraic_invariant(I: JetFunction, n: int, symbol: str = "b") -> RatFunc:
    """Rename ``u_σ -> b_σ`` in an invariant built from order-``n`` jet variables."""
    bad = []
    for v in I.value.variables():
        s = parse_jet_name(v)
        if s is None or sum(s) != n:
            bad.append(v)
    if bad:
        raise FormError(f"variables {bad} are not order-{n} jet variables")
    names = [coefficient_name(s, symbol) for s in multi_indices(I.ctx.n, n)]
    table = VarTable(tuple(names))
    values = {jet_name(s): RatFunc.var(table, coefficient_name(s, symbol))
              for s in multi_indices(I.ctx.n, n)}
    return substitute(I.value, values, table)


# ---------------------------------------------------------------------------
# resultants

def _binary_coeffs(phi: Form) -> list:
    """Coefficients of ``φ(x, 1)``, highest power first (formal degree)."""
    if phi.arity != 2:
        raise FormError("resultants are defined for binary forms")
    n = phi.degree
    return [phi.monomial_coefficient((i, n - i)) for i in range(n, -1, -1)]


def sylvester_matrix(p: Sequence, q: Sequence) -> list:
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    zero = p[0] * 0
    rows = []
    for i in range(m):
        rows.append([zero] * i + list(p) + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + list(q) + [zero] * (size - m - 1 - i))
    return rows


def _common(phi: Form, psi: Form) -> VarTable:
    names = list(INDEP_NAMES[2]) + list(phi.params) + [v for v in psi.params if v not in phi.params]
    return VarTable(tuple(names))


def sylvester_resultant(phi: Form, psi: Form) -> RatFunc:
    """Determinant of the Sylvester matrix of ``φ(x,1)`` and ``ψ(x,1)``."""
    if phi.is_zero() or psi.is_zero():
        raise FormError("resultant of a zero form")
    table = _common(phi, psi)
    p = [_move_any(c, table) for c in _binary_coeffs(phi)]
    q = [_move_any(c, table) for c in _binary_coeffs(psi)]
    if len(p) + len(q) == 2:
        return RatFunc.constant(table, 1)
    return det_laplace(sylvester_matrix(p, q), RatFunc.constant(table, 0))


def _move_any(c: RatFunc, table: VarTable) -> RatFunc:
    if c.table is table:
        return c
    return RatFunc(c.num.with_table(table), c.den.with_table(table), normalize=False)


def discriminant(phi: Form) -> RatFunc:
    """``Res(φ_x, φ_y)`` with formal degrees ``n - 1``."""
    if phi.arity != 2 or phi.degree < 2:
        raise FormError("discriminant needs a binary form of degree >= 2")
    fx, fy = phi.partial(0), phi.partial(1)
    if fx.is_zero() and fy.is_zero():
        raise FormError("degenerate form: both partial derivatives vanish")
    if fx.is_zero() or fy.is_zero():
        return RatFunc.constant(_common(fx, fy), 0)
    return sylvester_resultant(fx, fy)


def linear_bracket(l1: Sequence, l2: Sequence):
    """Poisson bracket ``[αx+βy, γx+δy] = αδ - βγ``."""
    return Fraction(l1[0]) * Fraction(l2[1]) - Fraction(l1[1]) * Fraction(l2[0])


def bracket_resultant(factors_phi: Sequence, factors_psi: Sequence):
    """``Π [l_i, m_j]`` over explicit linear factors ``(α, β)`` of two forms."""
    r = Fraction(1)
    for l in factors_phi:
        for m in factors_psi:
            r *= linear_bracket(l, m)
    return r


def form_from_factors(factors: Sequence, arity: int = 2) -> Form:
    table = VarTable(INDEP_NAMES[2])
    x, y = RatFunc.var(table, "x"), RatFunc.var(table, "y")
    p = RatFunc.constant(table, 1)
    for a, b in factors:
        p = p * (x * Fraction(a) + y * Fraction(b))
    return Form.from_polynomial(p, 2, len(factors))


def resultant_convention_constant(n: int, m: int):
    """Ratio Sylvester/bracket-product for degrees ``(n, m)``, from split forms.

    Uses the split forms ``Π_k (x + k y)`` and ``Π_k (x - k y)``.
    """
    fp = [(1, k) for k in range(1, n + 1)]
    fq = [(1, -k) for k in range(1, m + 1)]
    syl = sylvester_resultant(form_from_factors(fp), form_from_factors(fq)).constant_value()
    br = bracket_resultant(fp, fq)
    return Fraction(syl) / br


# ---------------------------------------------------------------------------
# equivalence

ALPHA = "4*b[1,3]*b[3,1] - b[4,0]*b[0,4] - 3*b[2,2]^2"
DELTA = ("b[2,2]*b[4,0]*b[0,4] - b[0,4]*b[3,1]^2 - b[4,0]*b[1,3]^2 "
         "+ 2*b[1,3]*b[2,2]*b[3,1] - b[2,2]^3")
QUARTIC_TABLE = VarTable(tuple(coefficient_name(s) for s in multi_indices(2, 4)))


def hankel_apolar() -> RatFunc:
    """``α = 4 b13 b31 - b40 b04 - 3 b22²``."""
    return parse_expression(ALPHA, QUARTIC_TABLE)


def hankel_determinant() -> RatFunc:
    """``δ`` , the 3x3 Hankel determinant of the quartic coefficients."""
    return parse_expression(DELTA, QUARTIC_TABLE)


def quartic_invariants(phi: Form) -> tuple:
    if phi.arity != 2 or phi.degree != 4:
        raise FormError("quartic invariants need a binary quartic")
    vals = {coefficient_name(s): c for s, c in phi.coefficients.items()}
    table = phi.table
    return (substitute(hankel_apolar(), vals, table), substitute(hankel_determinant(), vals, table))


@dataclass
class EquivalenceVerdict:
    status: str  # equivalent | inequivalent | irregular
    witness: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"status": self.status, "witness": self.witness, "notes": list(self.notes)}


def _fmt(v) -> str:
    return format_rational(v)


def sl2_equivalent(phi: Form, psi: Form) -> EquivalenceVerdict:
    """Decide SL2-equivalence of two rational binary cubics or quartics."""
    for f in (phi, psi):
        if f.arity != 2:
            raise FormError("equivalence is decided for binary forms")
        if not f.is_rational():
            raise FormError("equivalence needs rational coefficients")
    if phi.degree != psi.degree:
        return EquivalenceVerdict("inequivalent", {"degrees": [phi.degree, psi.degree]},
                                  ["forms of different degree"])
    n = phi.degree
    if n == 3:
        d1 = discriminant(phi).constant_value()
        d2 = discriminant(psi).constant_value()
        witness = {"Discr": [_fmt(d1), _fmt(d2)]}
        irregular = [i for i, d in enumerate((d1, d2), 1) if d == 0]
        if irregular:
            return EquivalenceVerdict("irregular", witness | {"irregular_inputs": irregular},
                                      ["discriminant vanishes (repeated root)"])
        return EquivalenceVerdict("equivalent" if d1 == d2 else "inequivalent", witness)
    if n == 4:
        a1, e1 = (v.constant_value() for v in quartic_invariants(phi))
        a2, e2 = (v.constant_value() for v in quartic_invariants(psi))
        witness = {"alpha": [_fmt(a1), _fmt(a2)], "delta": [_fmt(e1), _fmt(e2)]}
        notes = ["generator-level equivalence: equal (alpha, delta); orbit separation "
                 "by this pair is not established"]
        irregular = [i for i, (a, e) in enumerate(((a1, e1), (a2, e2)), 1) if a == 0 and e == 0]
        if irregular:
            return EquivalenceVerdict("irregular", witness | {"irregular_inputs": irregular},
                                      notes + ["alpha and delta both vanish"])
        same = a1 == a2 and e1 == e2
        return EquivalenceVerdict("equivalent" if same else "inequivalent", witness, notes)
    raise FormError(f"equivalence is supported for degrees 3 and 4, not {n}")

"""Polynomial relations among rational functions: verification and discovery.

Discovery uses an exponent-bounded ansatz ``Σ c_α Z^α`` and solves the
coefficient-matching system exactly with :func:`nullspace_rows`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

from .exactalg import nullspace_rows
from .formsalg import Form, discriminant, quartic_invariants, restrict
from .polyalg import MultiPoly, RatFunc, VarTable, common_table, poly_to_str


class BudgetExceeded(RuntimeError):
    """Raised when a computation passes its wall-clock deadline."""


def slot_names(count: int, names: Sequence[str] | None = None) -> tuple:
    if names is None:
        return tuple(f"Z{i}" for i in range(count))
    if len(names) != count:
        raise ValueError("one name per slot is required")
    return tuple(names)


def _normalize_content(p: MultiPoly) -> MultiPoly:
    """Primitive integer coefficients, positive leading coefficient."""
    den = 1
    for c in p.terms.values():
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in p.terms.values():
        num = gcd(num, int(Fraction(c) * den))
    scale = Fraction(den, num)
    if p.leading_term()[1] < 0:
        scale = -scale
    return p.scale(scale)


@dataclass(frozen=True)
class Relation:
    """``poly(Z) = 0``; ``bindings[i]`` names what slot ``i`` stands for."""

    poly: MultiPoly
    bindings: tuple = ()

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("a relation must be nonzero")
        object.__setattr__(self, "poly", _normalize_content(self.poly))
        if self.bindings and len(self.bindings) != len(self.poly.table):
            raise ValueError("one binding per slot is required")

    @classmethod
    def parse(cls, text: str, names: Sequence[str], bindings: Sequence[str] = ()) -> "Relation":
        from .polyalg import parse_expression
        r = parse_expression(text, VarTable(tuple(names)))
        if not r.is_polynomial():
            raise ValueError("a relation must be polynomial")
        return cls(r.num, tuple(bindings))

    @property
    def slots(self) -> tuple:
        return self.poly.table.names

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    def __str__(self):
        s = poly_to_str(self.poly) + " = 0"
        if self.bindings:
            s += " where " + ", ".join(f"{n}={b}" for n, b in zip(self.slots, self.bindings))
        return s


def _evaluate_relation(poly: MultiPoly, values: Sequence[RatFunc]) -> RatFunc:
    table = values[0].table
    for v in values[1:]:
        table = common_table(table, v.table)
    vals = [v.with_table(table) for v in values]
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = vals[i] ** k
        return cache[key]

    total = RatFunc.constant(table, 0)
    for m, c in poly.terms.items():
        t = RatFunc.constant(table, c)
        for i, k in enumerate(m):
            if k:
                t = t * power(i, k)
        total = total + t
    return total


def verify_relation(R: Relation, values: Sequence[RatFunc]) -> bool:
    """True iff ``R`` vanishes identically after substituting ``values``."""
    if len(values) != len(R.slots):
        raise ValueError(f"relation has {len(R.slots)} slots, got {len(values)} values")
    return _evaluate_relation(R.poly, values).is_zero()


def _exponents(count: int, bound: int) -> list:
    """All ``α`` with ``|α| <= bound``, ascending graded lex."""
    out = [a for a in product(range(bound + 1), repeat=count) if sum(a) <= bound]
    return sorted(out, key=lambda a: (sum(a), a))


def discover_relation(values: Sequence[RatFunc], degree_bound: int,
                      weights: Sequence[int] | None = None,
                      names: Sequence[str] | None = None,
                      bindings: Sequence[str] = (),
                      deadline: float | None = None) -> list:
    """Polynomial relations of total degree ``<= degree_bound`` among ``values``.

    With ``weights`` only monomials of a single weight enter each system, one
    system per weight class.  Denominators are cleared with a common
    denominator ``Q``: slot ``i`` becomes ``P_i = Q·v_i`` and a monomial of
    degree ``d`` is multiplied by ``Q^(bound-d)``.  Returned relations have
    distinct leading monomials and are sorted by degree.
    """
    if degree_bound < 1:
        raise ValueError("degree_bound must be at least 1")
    if not values:
        return []
    r = len(values)
    table = values[0].table
    for v in values[1:]:
        table = common_table(table, v.table)
    vals = [v.with_table(table) for v in values]
    Q = MultiPoly.constant(table, 1)
    for v in vals:
        if not v.den.is_constant():
            if Q.divexact(v.den) is None:
                Q = Q * v.den
    P = []
    for v in vals:
        q = Q.divexact(v.den)
        p = v.num * q
        if v.den.is_constant():
            p = p.scale(Fraction(1) / Fraction(v.den.constant_value()))
        P.append(p)
    names = slot_names(r, names)
    if weights is not None and len(weights) != r:
        raise ValueError("one weight per slot is required")
    monos = _exponents(r, degree_bound)
    classes: dict = {}
    for a in monos:
        key = sum(w * k for w, k in zip(weights, a)) if weights is not None else None
        classes.setdefault(key, []).append(a)
    pw: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in pw:
            pw[key] = P[i] ** k if k else MultiPoly.constant(table, 1)
        return pw[key]

    qpow: dict = {}

    def qpower(k):
        if k not in qpow:
            qpow[k] = Q ** k
        return qpow[k]

    expansions: dict = {}

    def expand(a):
        if a not in expansions:
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("relation discovery exceeded its time budget")
            t = qpower(degree_bound - sum(a))
            for i, k in enumerate(a):
                if k:
                    t = t * power(i, k)
            expansions[a] = t
        return expansions[a]

    slot_table = VarTable(names)
    found = []
    for key in sorted(classes, key=lambda k: (k is None, k)):
        cols = classes[key]
        rows_by_mono: dict = {}
        for j, a in enumerate(cols):
            for m, c in expand(a).terms.items():
                rows_by_mono.setdefault(m, {})[j] = Fraction(c)
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("relation discovery exceeded its time budget")
        for vec in nullspace_rows(list(rows_by_mono.values()), len(cols)):
            terms = {cols[j]: c for j, c in enumerate(vec) if c}
            poly = MultiPoly(slot_table, terms)
            found.append(Relation(poly, tuple(bindings)))
    found.sort(key=lambda R: (R.degree, _lead_key(R.poly)))
    return found


def _lead_key(p: MultiPoly):
    m, _ = p.leading_term()
    return (sum(m), m)


# ---------------------------------------------------------------------------
# the cubic and quartic relations

CUBIC_RELATION = "Z0^5 + Z1^2*Z0^2 - 16*D*Z2^2"
CUBIC_SLOTS = ("Z0", "Z1", "Z2", "D")
CUBIC_BINDINGS = ("J1|phi", "J2|phi", "J3|phi", "Discr(phi)")
CUBIC_WEIGHTS = (-4, -6, -4, -12)

QUARTIC_RELATION = "9*Z2^2 + 16*Z1^3 + 144*alpha*Z0^2*Z1 + 864*delta*Z0^3"
QUARTIC_SLOTS = ("Z0", "Z1", "Z2", "alpha", "delta")
QUARTIC_BINDINGS = ("J0|phi", "J2|phi", "J3|phi", "alpha(phi)", "delta(phi)")


def cubic_invariants():
    """``J1 = Δ2``, ``J2 = ∇1(Δ2)``, ``J3 = Δ2·∇2(u00)``."""
    from .sl2inv import PLANE, delta2, sl2_frame
    n1, n2 = sl2_frame()
    d = delta2()
    return d, n1(d), d * n2(PLANE.u(0, 0))


def quartic_jet_invariants():
    """``J0 = u00``, ``J2 = Δ2``, ``J3 = -∇1(Δ2)``."""
    from .sl2inv import PLANE, delta2, sl2_frame
    n1, _ = sl2_frame()
    d = delta2()
    return PLANE.u(0, 0), d, -n1(d)


def generic_cubic() -> Form:
    return Form.parse("x^3 + a1*x^2*y + a2*x*y^2 + a3*y^3")


def cubic_values(phi: Form | None = None) -> list:
    """``(J1|φ, J2|φ, J3|φ, Discr φ)``."""
    phi = phi or generic_cubic()
    vals = [restrict(J, phi) for J in cubic_invariants()]
    return vals + [discriminant(phi)]


def quartic_values(phi: Form | None = None) -> list:
    """``(J0|φ, J2|φ, J3|φ, α(φ), δ(φ))``."""
    phi = phi or Form.generic(4)
    vals = [restrict(J, phi) for J in quartic_jet_invariants()]
    return vals + list(quartic_invariants(phi))


def cubic_relation() -> Relation:
    return Relation.parse(CUBIC_RELATION, CUBIC_SLOTS, CUBIC_BINDINGS)


def quartic_relation() -> Relation:
    return Relation.parse(QUARTIC_RELATION, QUARTIC_SLOTS, QUARTIC_BINDINGS)


def discover_cubic(degree_bound: int = 5, use_weights: bool = True,
                   deadline: float | None = None) -> list:
    return discover_relation(cubic_values(), degree_bound,
                             CUBIC_WEIGHTS if use_weights else None,
                             CUBIC_SLOTS, CUBIC_BINDINGS, deadline)

"""Jet charts, total derivatives, prolongation of point fields and Tresse frames.

Coordinates on the jet space are the independent variables (``x``, ``y``,
``z``) and the jet variables ``u[σ]``.  Jet variables are listed by order and
then in descending lexicographic order of the multi-index, so the variable
table of a low-order chart is a prefix of every higher-order one and values
from different orders mix freely.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .exactalg import det_laplace
from .polyalg import (MultiPoly, RatFunc, VarTable, _norm_coeff, parse_expression,
                      ratfunc_equal)

INDEP_NAMES = {1: ("x",), 2: ("x", "y"), 3: ("x", "y", "z")}
DEFAULT_MAX_ORDER = 12


class JetError(ValueError):
    pass


class OrderLimitExceeded(JetError):
    pass


def max_order_cap() -> int:
    raw = os.environ.get("JETINV_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        return int(raw)
    except ValueError:
        raise JetError(f"JETINV_MAX_ORDER must be an integer, got {raw!r}") from None


@lru_cache(maxsize=None)
def multi_indices(n: int, order: int) -> tuple:
    """Multi-indices of exactly ``order`` in ``n`` slots, descending lex."""
    if n == 1:
        return ((order,),)
    out = []
    for first in range(order, -1, -1):
        for rest in multi_indices(n - 1, order - first):
            out.append((first,) + rest)
    return tuple(out)


def jet_name(sigma: Sequence[int]) -> str:
    return "u[" + ",".join(str(i) for i in sigma) + "]"


def parse_jet_name(name: str):
    """Multi-index of a jet variable name, or ``None`` for other names."""
    if not (name.startswith("u[") and name.endswith("]")):
        return None
    return tuple(int(s) for s in name[2:-1].split(","))


@lru_cache(maxsize=None)
def _table(n: int, order: int) -> VarTable:
    names = list(INDEP_NAMES[n])
    for k in range(order + 1):
        names.extend(jet_name(s) for s in multi_indices(n, k))
    return VarTable(names)


@dataclass(frozen=True)
class JetContext:
    """Jet chart with ``n`` independent variables up to ``max_order``."""

    n: int
    max_order: int

    def __post_init__(self):
        if self.n not in INDEP_NAMES:
            raise JetError("1, 2 or 3 independent variables are supported")
        if self.max_order < 0:
            raise JetError("max_order must be non-negative")
        if self.max_order > max_order_cap():
            raise OrderLimitExceeded(
                f"order {self.max_order} exceeds JETINV_MAX_ORDER={max_order_cap()}")

    @property
    def indep(self) -> tuple:
        return INDEP_NAMES[self.n]

    @property
    def table(self) -> VarTable:
        return _table(self.n, self.max_order)

    @property
    def dimension(self) -> int:
        return self.n + comb(self.n + self.max_order, self.n)

    def jet_indices(self, order: int | None = None):
        if order is not None:
            return multi_indices(self.n, order)
        return tuple(s for k in range(self.max_order + 1) for s in multi_indices(self.n, k))

    def extend(self, order: int) -> "JetContext":
        return self if order <= self.max_order else JetContext(self.n, order)

    def u(self, *sigma) -> "JetFunction":
        if len(sigma) == 1 and isinstance(sigma[0], (tuple, list)):
            sigma = tuple(sigma[0])
        if len(sigma) != self.n:
            raise JetError(f"multi-index {sigma} has wrong length for {self.n} variables")
        ctx = self.extend(sum(sigma))
        return JetFunction(ctx, RatFunc.var(ctx.table, jet_name(sigma)))

    def coord(self, i: int) -> "JetFunction":
        return JetFunction(self, RatFunc.var(self.table, self.indep[i]))

    def const(self, c) -> "JetFunction":
        return JetFunction(self, RatFunc.constant(self.table, c))

    def parse(self, text: str) -> "JetFunction":
        """Parse text, extending the chart to cover every jet variable named."""
        from .polyalg import expression_names
        order = self.max_order
        for name in expression_names(text):
            s = parse_jet_name(name)
            if s is not None and len(s) == self.n and min(s) >= 0:
                order = max(order, sum(s))
        ctx = self.extend(order)
        return JetFunction(ctx, parse_expression(text, ctx.table))

    def wrap(self, value) -> "JetFunction":
        return JetFunction.of(self, value)


def _ctx_for_table(n: int, table: VarTable) -> JetContext:
    order = (len(table) - n)
    k = 0
    total = 0
    while True:
        total += comb(n - 1 + k, n - 1)
        if total >= order:
            break
        k += 1
    return JetContext(n, k)


class JetFunction:
    """A rational function on a jet chart."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: JetContext, value: RatFunc):
        if value.table is not ctx.table:
            value = value.with_table(ctx.table)
        self.ctx = ctx
        self.value = value

    @classmethod
    def of(cls, ctx: JetContext, value) -> "JetFunction":
        if isinstance(value, JetFunction):
            return value
        if isinstance(value, RatFunc):
            if not value.table.is_prefix_of(ctx.table):
                ctx = _ctx_for_table(ctx.n, value.table)
            return cls(ctx, value)
        if isinstance(value, MultiPoly):
            return cls.of(ctx, RatFunc.from_poly(value))
        if isinstance(value, str):
            return ctx.parse(value)
        return cls(ctx, RatFunc.constant(ctx.table, value))

    @property
    def order(self) -> int:
        best = -1
        for name in self.value.variables():
            s = parse_jet_name(name)
            if s is not None:
                best = max(best, sum(s))
        return max(best, 0)

    def _coerce(self, other):
        if isinstance(other, JetFunction):
            if other.ctx.n != self.ctx.n:
                raise JetError("jet functions over different numbers of variables")
            if other.ctx.max_order == self.ctx.max_order:
                return self, other
            ctx = self.ctx.extend(other.ctx.max_order)
            return JetFunction(ctx, self.value), JetFunction(ctx, other.value)
        if isinstance(other, (int, Fraction)):
            return self, JetFunction(self.ctx, RatFunc.constant(self.ctx.table, other))
        if isinstance(other, RatFunc):
            return self._coerce(JetFunction.of(self.ctx, other))
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetFunction(a.ctx, a.value + b.value)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetFunction(a.ctx, a.value - b.value)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return JetFunction(self.ctx, -self.value)

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetFunction(a.ctx, a.value * b.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetFunction(a.ctx, a.value / b.value)

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetFunction(a.ctx, b.value / a.value)

    def __pow__(self, e: int):
        return JetFunction(self.ctx, self.value ** e)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return ratfunc_equal(a.value, b.value)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def evaluate(self, point: Mapping[str, object]):
        return self.value.evaluate(point)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"JetFunction({self.value})"


# ---------------------------------------------------------------------------
# total derivatives

@lru_cache(maxsize=None)
def _shift_map(ctx: JetContext, axis: int, table: VarTable) -> list:
    """For each variable of ``ctx``: ``None`` (derivative 0), ``-1`` (constant 1)
    or the index in ``table`` of the variable its total derivative equals."""
    out = []
    for i, name in enumerate(ctx.table.names):
        if i < ctx.n:
            out.append(-1 if i == axis else None)
        else:
            s = list(parse_jet_name(name))
            s[axis] += 1
            out.append(table.index[jet_name(s)])
    return out


def _total_derivative_poly(p: MultiPoly, shift: list, table: VarTable) -> MultiPoly:
    size = len(table)
    pad = (0,) * (size - len(p.table))
    terms: dict = {}
    get = terms.get
    for m, c in p.terms.items():
        mm = m + pad if pad else m
        for i, k in enumerate(m):
            if not k:
                continue
            t = shift[i]
            if t is None:
                continue
            e = list(mm)
            e[i] = k - 1
            if t >= 0:
                e[t] += 1
            key = tuple(e)
            terms[key] = get(key, 0) + c * k
    terms = {m: _norm_coeff(c) for m, c in terms.items() if c}
    return MultiPoly._raw(table, terms)


def _total_derivative_ratfunc(f: RatFunc, ctx: JetContext, axis: int) -> RatFunc:
    order = ctx.max_order + 1
    big = ctx.extend(order)
    table = big.table
    shift = _shift_map(ctx, axis, table)
    dn = _total_derivative_poly(f.num, shift, table)
    if f.den.is_constant():
        return RatFunc._make(dn, f.den.with_table(table))
    dd = _total_derivative_poly(f.den, shift, table)
    num = f.num.with_table(table)
    den = f.den.with_table(table)
    if dd.is_zero():
        return RatFunc(dn, den)
    return RatFunc(dn * den - num * dd, den * den)


def _check_axis(ctx: JetContext, i: int):
    if not 0 <= i < ctx.n:
        raise JetError(f"axis {i} out of range for {ctx.n} independent variables")


def total_derivative(f: JetFunction, i: int) -> JetFunction:
    """``D_i f`` where ``D_i = ∂/∂x_i + Σ u_{σ+e_i} ∂/∂u_σ`` (axis ``i`` is 0-based)."""
    _check_axis(f.ctx, i)
    order = f.order
    small = JetContext(f.ctx.n, order)
    value = f.value if f.ctx.max_order == order else f.value.with_table(small.table)
    d = _total_derivative_ratfunc(value, small, i)
    ctx = JetContext(f.ctx.n, max(f.ctx.max_order, order + 1))
    return JetFunction(ctx, d)


def total_derivative_multi(f: JetFunction, sigma: Sequence[int]) -> JetFunction:
    for axis, k in enumerate(sigma):
        for _ in range(k):
            f = total_derivative(f, axis)
    return f


def total_differential(f: JetFunction) -> "HorizontalForm":
    return HorizontalForm([total_derivative(f, i) for i in range(f.ctx.n)])


# ---------------------------------------------------------------------------
# derivations and horizontal forms

def _unify(values: Sequence[JetFunction]) -> list:
    if not values:
        return []
    n = values[0].ctx.n
    order = max(v.ctx.max_order for v in values)
    ctx = JetContext(n, order)
    return [JetFunction(ctx, v.value) if v.ctx != ctx else v for v in values]


class Derivation:
    """``Σ c_i D_i`` with jet-function coefficients."""

    def __init__(self, coefficients: Sequence):
        coeffs = [c for c in coefficients]
        if not coeffs or not all(isinstance(c, JetFunction) for c in coeffs):
            raise JetError("Derivation coefficients must be JetFunction values")
        self.coefficients = _unify(coeffs)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def __call__(self, f: JetFunction) -> JetFunction:
        return self.apply(f)

    def apply(self, f: JetFunction) -> JetFunction:
        if f.ctx.n != self.n:
            raise JetError("derivation and function live on different charts")
        total = None
        for i, c in enumerate(self.coefficients):
            if c.is_zero():
                continue
            t = c * total_derivative(f, i)
            total = t if total is None else total + t
        if total is None:
            return JetFunction(f.ctx.extend(f.ctx.max_order + 1), RatFunc.constant(f.ctx.table, 0))
        return total

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def scale(self, f) -> "Derivation":
        return Derivation([f * c for c in self.coefficients])

    def __repr__(self):
        axes = INDEP_NAMES[self.n]
        return " + ".join(f"({c})*d/d{a}" for c, a in zip(self.coefficients, axes))


class HorizontalForm:
    """``Σ g_i dx_i`` with jet-function coefficients."""

    def __init__(self, coefficients: Sequence):
        coeffs = list(coefficients)
        if not coeffs or not all(isinstance(c, JetFunction) for c in coeffs):
            raise JetError("HorizontalForm coefficients must be JetFunction values")
        self.coefficients = _unify(coeffs)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def pair(self, d: Derivation) -> JetFunction:
        total = None
        for g, c in zip(self.coefficients, d.coefficients):
            t = g * c
            total = t if total is None else total + t
        return total

    def __add__(self, other):
        return HorizontalForm([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other):
        return HorizontalForm([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def scale(self, f) -> "HorizontalForm":
        return HorizontalForm([f * c for c in self.coefficients])

    def __repr__(self):
        axes = INDEP_NAMES[self.n]
        return " + ".join(f"({c})*d{a}" for c, a in zip(self.coefficients, axes))


def invert_matrix(rows: Sequence[Sequence[JetFunction]]) -> list[list[JetFunction]]:
    """Inverse over the fraction field by adjugate and determinant."""
    n = len(rows)
    entries = [[e.value for e in r] for r in rows]
    ctx = _unify([e for r in rows for e in r])[0].ctx
    table = ctx.table
    entries = [[e.with_table(table) for e in r] for r in entries]
    zero = RatFunc.constant(table, 0)
    d = det_laplace(entries, zero)
    if d.is_zero():
        raise JetError("matrix is degenerate (determinant vanishes identically)")
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[entries[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det_laplace(minor, zero) if minor else RatFunc.constant(table, 1)
            if (i + j) % 2:
                cof = -cof
            inv[j][i] = JetFunction(ctx, cof / d)
    return inv


def dual_frame(coframe: Sequence[HorizontalForm]) -> list[Derivation]:
    """Derivations ``∇_j`` with ``ω_i(∇_j) = δ_ij``."""
    M = [w.coefficients for w in coframe]
    inv = invert_matrix(M)
    n = len(M)
    return [Derivation([inv[k][j] for k in range(n)]) for j in range(n)]


def dual_coframe(frame: Sequence[Derivation]) -> list[HorizontalForm]:
    """Forms ``ω_i`` with ``ω_i(∇_j) = δ_ij``."""
    C = [[frame[j].coefficients[k] for j in range(len(frame))] for k in range(len(frame))]
    inv = invert_matrix(C)
    return [HorizontalForm(inv[i]) for i in range(len(frame))]


def tresse_frame(fs: Sequence[JetFunction]) -> list[Derivation]:
    """Derivations ``τ_i`` with ``τ_i(f_j) = δ_ij`` (Tresse derivatives ``d/df_i``)."""
    fs = list(fs)
    if not fs:
        raise JetError("empty invariant list")
    n = fs[0].ctx.n
    if len(fs) != n:
        raise JetError(f"need exactly {n} functions for {n} independent variables")
    M = [[total_derivative(f, j) for j in range(n)] for f in fs]
    try:
        inv = invert_matrix(M)
    except JetError:
        raise JetError("functions are not in general position (d̂f_1∧…∧d̂f_n = 0)") from None
    return [Derivation([inv[j][i] for j in range(n)]) for i in range(n)]


def tresse_derivative(g: JetFunction, frame: Sequence[Derivation], i: int) -> JetFunction:
    if not 0 <= i < len(frame):
        raise JetError(f"frame index {i} out of range")
    return frame[i](g)


# ---------------------------------------------------------------------------
# point fields and prolongation

class PointField:
    """``Σ a_i ∂/∂x_i`` with coefficients in the independent variables only."""

    def __init__(self, coefficients: Sequence, n: int | None = None, name: str = ""):
        n = n or len(coefficients)
        table = _table(n, 0)
        coeffs = []
        for c in coefficients:
            if isinstance(c, str):
                try:
                    c = parse_expression(c, VarTable(INDEP_NAMES[n]))
                except KeyError as e:
                    raise JetError(f"point field coefficients use only {INDEP_NAMES[n]}: {e}") from None
            if isinstance(c, (int, Fraction)):
                c = RatFunc.constant(table, c)
            if isinstance(c, JetFunction):
                c = c.value
            if any(parse_jet_name(v) is not None for v in c.variables()):
                raise JetError("point field coefficients must not involve jet variables")
            coeffs.append(c.with_table(VarTable(INDEP_NAMES[n])) if len(c.table) > n else c)
        self.n = n
        self.coefficients = coeffs
        self.name = name

    def bracket(self, other: "PointField") -> "PointField":
        axes = INDEP_NAMES[self.n]
        out = []
        for j in range(self.n):
            t = RatFunc.constant(self.coefficients[0].table, 0)
            for i, ax in enumerate(axes):
                t = t + self.coefficients[i] * other.coefficients[j].diff(ax) \
                    - other.coefficients[i] * self.coefficients[j].diff(ax)
            out.append(t)
        return PointField(out, self.n)

    def __repr__(self):
        axes = INDEP_NAMES[self.n]
        parts = [f"({c})*d/d{a}" for c, a in zip(self.coefficients, axes) if not c.is_zero()]
        return self.name or (" + ".join(parts) if parts else "0")


class ProlongedField:
    """Vector field on the jet space: point part plus ``Σ φ_σ ∂/∂u_σ``."""

    def __init__(self, base: PointField, order: int, coefficients: dict):
        self.base = base
        self.order = order
        self.coefficients = coefficients  # multi-index -> JetFunction

    def components(self) -> dict:
        """Map variable name -> RatFunc coefficient (nonzero only)."""
        out = {}
        for ax, c in zip(INDEP_NAMES[self.base.n], self.base.coefficients):
            if not c.is_zero():
                out[ax] = c
        for s, c in self.coefficients.items():
            if not c.is_zero():
                out[jet_name(s)] = c.value
        return out

    def apply(self, f: JetFunction) -> JetFunction:
        comps = self.components()
        ctx = f.ctx.extend(self.order)
        return JetFunction(ctx, apply_vector_field(comps, f.value.with_table(ctx.table)
                                                   if f.value.table is not ctx.table else f.value))

    def bracket(self, other: "ProlongedField") -> dict:
        """Commutator as a map variable name -> RatFunc."""
        a, b = self.components(), other.components()
        names = list(dict.fromkeys(list(a) + list(b)))
        out = {}
        for v in names:
            t = None
            for w, c in a.items():
                if v in b:
                    term = c * b[v].diff(w) if w in b[v].table else None
                    if term is not None:
                        t = term if t is None else t + term
            for w, c in b.items():
                if v in a:
                    term = c * a[v].diff(w) if w in a[v].table else None
                    if term is not None:
                        t = -term if t is None else t - term
            if t is not None and not t.is_zero():
                out[v] = t
        return out


def prolong_field(X: PointField, k: int) -> ProlongedField:
    """Prolong ``X`` to order ``k`` via the characteristic ``Q = -Σ a_i u_{e_i}``.

    The coefficient of ``∂/∂u_σ`` is ``D_σ(Q) + Σ a_i u_{σ+e_i}``.
    """
    if k < 0:
        raise JetError("prolongation order must be non-negative")
    n = X.n
    ctx0 = JetContext(n, 1)
    a = [JetFunction.of(ctx0, c.with_table(ctx0.table)) for c in X.coefficients]
    Q = ctx0.const(0)
    for i in range(n):
        e = [0] * n
        e[i] = 1
        Q = Q - a[i] * ctx0.u(tuple(e))
    dq = {(0,) * n: Q}
    coeffs = {}
    for order in range(k + 1):
        for s in multi_indices(n, order):
            if s not in dq:
                # derive from a predecessor, first nonzero slot
                j = next(i for i, v in enumerate(s) if v)
                prev = list(s)
                prev[j] -= 1
                dq[s] = total_derivative(dq[tuple(prev)], j)
            phi = dq[s]
            for i in range(n):
                if a[i].is_zero():
                    continue
                t = list(s)
                t[i] += 1
                phi = phi + a[i] * JetContext(n, order + 1).u(tuple(t))
            coeffs[s] = phi
    return ProlongedField(X, k, coeffs)


def _apply_poly(comps: list, p: MultiPoly) -> RatFunc:
    """``Σ c_v ∂p/∂v`` where ``comps`` holds ``(index, RatFunc)`` pairs."""
    poly_total = None
    rat_total = None
    for idx, c in comps:
        if idx >= len(p.table):
            continue
        d = p.diff(idx)
        if d.is_zero():
            continue
        if c.den.is_constant() and c.den.constant_value() == 1:
            t = c.num * d
            poly_total = t if poly_total is None else poly_total + t
        else:
            t = c * RatFunc.from_poly(d)
            rat_total = t if rat_total is None else rat_total + t
    table = p.table
    out = RatFunc.from_poly(poly_total) if poly_total is not None else RatFunc.constant(table, 0)
    if rat_total is not None:
        out = out + rat_total
    return out


def _components_indexed(comps: Mapping[str, RatFunc], table: VarTable) -> list:
    out = []
    for v, c in comps.items():
        if v in table:
            out.append((table.index[v], c))
    return out


def apply_vector_field(comps: Mapping[str, RatFunc], f: RatFunc) -> RatFunc:
    """Lie derivative of ``f`` along the field with the given components."""
    table = f.table
    for c in comps.values():
        if not c.table.is_prefix_of(table):
            table = c.table if table.is_prefix_of(c.table) else table
    f = f.with_table(table)
    idx = _components_indexed(comps, table)
    xn = _apply_poly(idx, f.num)
    if f.den.is_constant():
        return xn * (Fraction(1) / Fraction(f.den.constant_value())) if f.den.constant_value() != 1 else xn
    xd = _apply_poly(idx, f.den)
    return (xn * RatFunc.from_poly(f.den) - xd * RatFunc.from_poly(f.num)) / RatFunc.from_poly(f.den * f.den)


def _as_poly(r: RatFunc) -> MultiPoly:
    c = r.den.constant_value()
    return r.num if c == 1 else r.num.scale(Fraction(1) / Fraction(c))


def _annihilates(comps: Mapping[str, RatFunc], f: RatFunc) -> bool:
    """``X(f) == 0``, using the relative-invariant shortcut on the denominator."""
    table = f.table
    for c in comps.values():
        if table.is_prefix_of(c.table):
            table = c.table
    f = f.with_table(table)
    idx = _components_indexed(comps, table)
    xn = _apply_poly(idx, f.num)
    if f.den.is_constant():
        return xn.is_zero()
    xd = _apply_poly(idx, f.den)
    if xd.is_zero():
        return xn.is_zero()
    if xn.is_zero():
        return False
    if xn.is_polynomial() and xd.is_polynomial():
        XN, XD = _as_poly(xn), _as_poly(xd)
        # X(d) = λ d with λ polynomial: then X(n/d) = 0 iff X(n) = λ n
        lam = XD.divexact(f.den)
        if lam is not None:
            return XN == lam * f.num
        return XN * f.den == XD * f.num
    return ratfunc_equal(xn * RatFunc.from_poly(f.den), xd * RatFunc.from_poly(f.num))


def lie_check(I: JetFunction, algebra: Sequence[PointField], detail: bool = False):
    """True iff ``X^{(k)}(I) = 0`` for every generator, ``k = order(I)``.

    With ``detail=True`` returns the list of generators that fail.
    """
    k = I.order
    failures = []
    for X in algebra:
        if X.n != I.ctx.n:
            raise JetError("generator and invariant live on different charts")
        comps = prolong_field(X, k).components()
        if not _annihilates(comps, I.value):
            failures.append(X)
    if detail:
        return failures
    return not failures


# ---------------------------------------------------------------------------
# standard algebras

def _pf(n, coeffs, name):
    return PointField(coeffs, n, name)


def sl2_generators() -> list[PointField]:
    """``X+ = x∂y``, ``X- = y∂x``, ``X0 = x∂x - y∂y``."""
    return [_pf(2, ["0", "x"], "X+"), _pf(2, ["y", "0"], "X-"), _pf(2, ["x", "-y"], "X0")]


def sl3_generators() -> list[PointField]:
    """The eight fields ``x_i ∂_j`` (i ≠ j) and the two diagonal traceless ones."""
    names = INDEP_NAMES[3]
    out = []
    for i in range(3):
        for j in range(3):
            if i != j:
                c = ["0"] * 3
                c[j] = names[i]
                out.append(_pf(3, c, f"{names[i]}d{names[j]}"))
    out.append(_pf(3, ["x", "-y", "0"], "xdx-ydy"))
    out.append(_pf(3, ["0", "y", "-z"], "ydy-zdz"))
    return out


def aff2_generators() -> list[PointField]:
    """``∂x, ∂y, x∂x, x∂y, y∂x, y∂y``."""
    return [_pf(2, ["1", "0"], "dx"), _pf(2, ["0", "1"], "dy"), _pf(2, ["x", "0"], "xdx"),
            _pf(2, ["0", "x"], "xdy"), _pf(2, ["y", "0"], "ydx"), _pf(2, ["0", "y"], "ydy")]


def translation_generators(n: int) -> list[PointField]:
    out = []
    for i in range(n):
        c = ["0"] * n
        c[i] = "1"
        out.append(_pf(n, c, f"d{INDEP_NAMES[n][i]}"))
    return out


ALGEBRAS = {"sl2": sl2_generators, "sl3": sl3_generators, "aff2": aff2_generators}


# ---------------------------------------------------------------------------
# jet points and the linear group action

class JetPoint(dict):
    """Total assignment of rationals to the chart variables."""

    def __init__(self, ctx: JetContext, values: Mapping[str, object]):
        super().__init__({k: Fraction(v) for k, v in values.items()})
        missing = [v for v in ctx.table.names if v not in self]
        if missing:
            raise JetError(f"jet point misses values for {missing[:5]}")
        self.ctx = ctx

    @classmethod
    def random(cls, ctx: JetContext, rng, lo: int = -9, hi: int = 9) -> "JetPoint":
        vals = {}
        for name in ctx.table.names:
            v = 0
            while v == 0:
                v = rng.randint(lo, hi)
            vals[name] = v
        return cls(ctx, vals)

    @classmethod
    def of_polynomial(cls, ctx: JetContext, poly: RatFunc, base: Sequence) -> "JetPoint":
        """Jet of the function ``poly`` (in the independent variables) at ``base``."""
        at = dict(zip(ctx.indep, base))
        vals = dict(at)
        for s in ctx.jet_indices():
            g = poly
            for ax, k in zip(ctx.indep, s):
                for _ in range(k):
                    g = g.diff(ax)
            vals[jet_name(s)] = g.evaluate(at)
        return cls(ctx, vals)


def act_on_jet(A: Sequence[Sequence], p: JetPoint) -> JetPoint:
    """Push the jet ``p`` of ``f`` at ``x`` to the jet of ``f ∘ A^{-1}`` at ``A x``."""
    ctx = p.ctx
    n = ctx.n
    A = [[Fraction(v) for v in row] for row in A]
    if len(A) != n or any(len(r) != n for r in A):
        raise JetError("matrix dimension does not match the chart")
    from .exactalg import ExactMatrix, det
    if det(ExactMatrix.from_rows(A)) != 1:
        raise JetError("matrix is not unimodular")
    # A^{-1} by adjugate (det = 1)
    inv = _inverse_unimodular(A)
    base = [p[v] for v in ctx.indep]
    new_base = [sum(A[i][j] * base[j] for j in range(n)) for i in range(n)]
    # Taylor polynomial T(h) = Σ u_σ h^σ/σ!, pulled back by h = A^{-1} h'
    htab = VarTable([f"h{i}" for i in range(n)])
    hvars = [MultiPoly.var(htab, f"h{i}") for i in range(n)]
    images = [sum((hvars[j] * inv[i][j] for j in range(n)), MultiPoly.zero(htab)) for i in range(n)]
    out = dict(zip(ctx.indep, new_base))
    for order in range(ctx.max_order + 1):
        # each order transforms independently
        T = MultiPoly.zero(htab)
        for s in multi_indices(n, order):
            term = MultiPoly.constant(htab, p[jet_name(s)] / _mfact(s))
            for i, k in enumerate(s):
                if k:
                    term = term * images[i] ** k
            T = T + term
        for s in multi_indices(n, order):
            out[jet_name(s)] = Fraction(T.terms.get(tuple(s), 0)) * _mfact(s)
    return JetPoint(ctx, out)


def _mfact(s) -> int:
    r = 1
    for k in s:
        r *= factorial(k)
    return r


def _inverse_unimodular(A):
    n = len(A)
    if n == 1:
        return [[1 / A[0][0]]]
    from .exactalg import ExactMatrix, det
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det(ExactMatrix.from_rows(minor))
            inv[j][i] = cof if (i + j) % 2 == 0 else -cof
    return inv


# ---------------------------------------------------------------------------
# Euler equation

def euler_substitution(n_vars: int, n: int) -> dict:
    """Map ``σ -> E(σ)`` expressing ``u_σ`` on the Euler system of degree ``n``
    through the order-``n`` jet variables, for ``|σ| <= n``."""
    ctx = JetContext(n_vars, n)
    table = ctx.table
    coords = [MultiPoly.var(table, v) for v in ctx.indep]
    E = {}
    for s in multi_indices(n_vars, n):
        E[s] = MultiPoly.var(table, jet_name(s))
    for order in range(n - 1, -1, -1):
        for s in multi_indices(n_vars, order):
            acc = MultiPoly.zero(table)
            for i in range(n_vars):
                t = list(s)
                t[i] += 1
                acc = acc + coords[i] * E[tuple(t)]
            E[s] = acc.scale(Fraction(1, n - order))
    return E


def euler_reduce(f: JetFunction, n: int) -> JetFunction:
    """Restrict ``f`` to the prolonged Euler system ``Σ x_i u_{x_i} = n u``.

    Jet variables above order ``n`` become 0; lower ones are replaced by
    their expressions in ``x`` and the order-``n`` variables.
    """
    if n < 0:
        raise JetError("degree must be non-negative")
    if n > max_order_cap():
        raise OrderLimitExceeded(f"degree {n} exceeds JETINV_MAX_ORDER={max_order_cap()}")
    from .polyalg import substitute
    nv = f.ctx.n
    E = euler_substitution(nv, n)
    ctx = JetContext(nv, max(n, f.ctx.max_order))
    table = ctx.table
    values = {}
    for name in f.value.variables():
        s = parse_jet_name(name)
        if s is None:
            continue
        if sum(s) > n:
            values[name] = RatFunc.constant(table, 0)
        elif sum(s) < n:
            values[name] = RatFunc.from_poly(E[s].with_table(table))
    if not values:
        return JetFunction(ctx, f.value)
    return JetFunction(ctx, substitute(f.value.with_table(table), values, table))

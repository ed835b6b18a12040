"""Connections on R^n and affine differential invariants of plane functions
and algebraic curves.

Christoffel symbols ``Γ^k_ij`` are rational functions of the coordinates.
The affine frame carries ``1/√Δ2`` and lives over :class:`QuadExt`; the
Tresse coframe ``d̂u00, d̂I2`` gives rational invariants directly.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Mapping, Sequence

from .exactalg import QuadExt, det_laplace
from .jets import (INDEP_NAMES, Derivation, HorizontalForm, JetContext, JetError,
                   JetFunction, multi_indices, total_derivative, tresse_frame)
from .polyalg import RatFunc, VarTable, parse_expression
from .symtensor import SymTensor, coefficients_of, expand_in_coframe, theta_tensor

PLANE = JetContext(2, 2)
HESSIAN = "u[2,0]*u[0,2] - u[1,1]^2"
FLEX = "u[0,1]^2*u[2,0] - 2*u[1,0]*u[0,1]*u[1,1] + u[1,0]^2*u[0,2]"


# ---------------------------------------------------------------------------
# connections

def base_table(n: int) -> VarTable:
    if n not in (1, 2, 3):
        raise JetError("dimension must be 1, 2 or 3")
    return VarTable(INDEP_NAMES[n])


def _base(value, table: VarTable) -> RatFunc:
    if isinstance(value, RatFunc):
        if any(v not in table for v in value.variables()):
            raise JetError("connection data may only depend on the coordinates")
        return value.with_table(table)
    if isinstance(value, str):
        return parse_expression(value, table)
    return RatFunc.constant(table, Fraction(value))


class Christoffels:
    """``Γ^k_ij`` stored as ``symbols[(k, i, j)]`` (0-based indices)."""

    def __init__(self, n: int, symbols: Mapping[tuple, object] | None = None):
        self.n = n
        self.table = base_table(n)
        zero = RatFunc.constant(self.table, 0)
        self.symbols = {key: zero for key in product(range(n), repeat=3)}
        for key, v in (symbols or {}).items():
            if len(key) != 3 or any(not 0 <= i < n for i in key):
                raise JetError(f"Christoffel index {key} out of range")
            self.symbols[tuple(key)] = _base(v, self.table)

    @classmethod
    def trivial(cls, n: int) -> "Christoffels":
        return cls(n)

    def __getitem__(self, key) -> RatFunc:
        return self.symbols[tuple(key)]

    def is_torsion_free(self) -> bool:
        return all(self.symbols[(k, i, j)] == self.symbols[(k, j, i)]
                   for k, i, j in self.symbols)

    def is_trivial(self) -> bool:
        return all(v.is_zero() for v in self.symbols.values())


def torsion(G: Christoffels) -> dict:
    """``T^k_ij = Γ^k_ij - Γ^k_ji``."""
    return {(k, i, j): G[k, i, j] - G[k, j, i] for k, i, j in G.symbols}


def curvature(G: Christoffels) -> dict:
    """``C^k_lij = ∂_k Γ^i_lj - ∂_l Γ^i_kj + Σ_m (Γ^m_lj Γ^i_km - Γ^m_kj Γ^i_lm)``."""
    n, x = G.n, G.table.names
    out = {}
    for k, l, i, j in product(range(n), repeat=4):
        c = G[i, l, j].diff(x[k]) - G[i, k, j].diff(x[l])
        for m in range(n):
            c = c + G[m, l, j] * G[i, k, m] - G[m, k, j] * G[i, l, m]
        out[(k, l, i, j)] = c
    return out


def connection_tensors(G: Christoffels) -> tuple[dict, dict]:
    return torsion(G), curvature(G)


def _metric(g: Sequence[Sequence], table: VarTable) -> list:
    n = len(g)
    rows = [[_base(v, table) for v in row] for row in g]
    if any(len(r) != n for r in rows):
        raise JetError("metric must be square")
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise JetError("metric must be symmetric")
    return rows


def _inverse(rows: list, zero: RatFunc) -> list:
    n = len(rows)
    d = det_laplace(rows, zero)
    if d.is_zero():
        raise JetError("degenerate metric")
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det_laplace(minor, zero) if minor else zero + 1
            inv[j][i] = (cof if (i + j) % 2 == 0 else -cof) / d
    return inv


def levi_civita(g: Sequence[Sequence]) -> Christoffels:
    """``Γ^k_ij = ½ Σ_l g^{kl}(∂_j g_il + ∂_i g_jl - ∂_l g_ij)``."""
    n = len(g)
    table = base_table(n)
    rows = _metric(g, table)
    zero = RatFunc.constant(table, 0)
    ginv = _inverse(rows, zero)
    x = table.names
    symbols = {}
    for k, i, j in product(range(n), repeat=3):
        acc = zero
        for l in range(n):
            if ginv[k][l].is_zero():
                continue
            acc = acc + ginv[k][l] * (rows[i][l].diff(x[j]) + rows[j][l].diff(x[i])
                                      - rows[i][j].diff(x[l]))
        symbols[(k, i, j)] = acc * Fraction(1, 2)
    return Christoffels(n, symbols)


def metric_compatible(g: Sequence[Sequence], G: Christoffels) -> bool:
    """``∂_k g_ij = Σ_m (Γ^m_ki g_mj + Γ^m_kj g_im)`` for all indices."""
    rows = _metric(g, G.table)
    x = G.table.names
    n = G.n
    for k, i, j in product(range(n), repeat=3):
        rhs = RatFunc.constant(G.table, 0)
        for m in range(n):
            rhs = rhs + G[m, k, i] * rows[m][j] + G[m, k, j] * rows[i][m]
        if rows[i][j].diff(x[k]) != rhs:
            return False
    return True


def symmetric_differential(f, G: Christoffels, k: int) -> SymTensor:
    """``θ_k(f) = (d^s_∇)^k f`` as a symmetric tensor in ``dx_i``.

    ``θ_k.component(σ)`` is the tensor component; for the trivial connection
    it is ``∂^σ f``.
    """
    if k < 0:
        raise JetError("k must be non-negative")
    if not G.is_torsion_free():
        raise JetError("symmetric differential needs a torsion-free connection")
    n, x = G.n, G.table.names
    f = _base(f, G.table)
    comps = {(0,) * n: f}
    for deg in range(k):
        new = {}
        for s in multi_indices(n, deg + 1):
            # symmetrize over the slot carrying the new derivative index
            acc = RatFunc.constant(G.table, 0)
            for j in range(n):
                if not s[j]:
                    continue
                t = list(s)
                t[j] -= 1
                t = tuple(t)
                term = comps[t].diff(x[j])
                for i in range(n):
                    if not t[i]:
                        continue
                    for m in range(n):
                        gam = G[m, j, i]
                        if gam.is_zero():
                            continue
                        r = list(t)
                        r[i] -= 1
                        r[m] += 1
                        term = term - gam * comps[tuple(r)] * t[i]
                acc = acc + term * s[j]
            new[s] = acc * Fraction(1, deg + 1)
        comps = new
    return SymTensor(k, {s: c * factorial(k) for s, c in comps.items()}, "dx")


# ---------------------------------------------------------------------------
# QuadExt-valued frames

def _p(text: str) -> JetFunction:
    return PLANE.parse(text)


def hessian() -> JetFunction:
    return _p(HESSIAN)


def root() -> QuadExt:
    """``√Δ2`` as an element of the quadratic extension."""
    return QuadExt.root(hessian())


def embed(f: JetFunction) -> QuadExt:
    return QuadExt.embed(f, hessian())


class QuadDerivation:
    """``Σ c_i D_i`` with :class:`QuadExt` coefficients over the radicand Δ2."""

    def __init__(self, coefficients: Sequence[QuadExt]):
        self.coefficients = [c if isinstance(c, QuadExt) else embed(c) for c in coefficients]

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def apply(self, f) -> QuadExt:
        """``Σ c_i D_i f``; ``D(a + b s) = Da + (Db + b·DΔ2/(2Δ2)) s``."""
        if isinstance(f, QuadExt):
            d = hessian()
            parts = []
            for i in range(self.n):
                da = total_derivative(f.a, i)
                db = total_derivative(f.b, i)
                if not f.b.is_zero():
                    db = db + f.b * total_derivative(d, i) / (2 * d)
                parts.append(QuadExt(da, db, d))
        else:
            parts = [embed(total_derivative(f, i)) for i in range(self.n)]
        total = None
        for c, p in zip(self.coefficients, parts):
            t = c * p
            total = t if total is None else total + t
        return total

    __call__ = apply

    def __repr__(self):
        return " + ".join(f"{c}*d/d{a}" for c, a in zip(self.coefficients, INDEP_NAMES[self.n]))


class QuadForm:
    """``Σ g_i dx_i`` with :class:`QuadExt` coefficients."""

    def __init__(self, coefficients: Sequence[QuadExt]):
        self.coefficients = [c if isinstance(c, QuadExt) else embed(c) for c in coefficients]

    def pair(self, d) -> QuadExt:
        total = None
        for g, c in zip(self.coefficients, d.coefficients):
            t = g * c
            total = t if total is None else total + t
        return total


def i0() -> JetFunction:
    return PLANE.u(0, 0)


def i2() -> JetFunction:
    """``I2 = J21/Δ2``, the squared length of ``∇1``."""
    return _p(FLEX) / hessian()


def affine_frame() -> tuple[Derivation, QuadDerivation]:
    """``∇1 = H^{-1}(u10, u01)`` and ``∇2 = (-u01 d/dx + u10 d/dy)/√Δ2``."""
    d = hessian()
    nabla1 = Derivation([_p("u[0,2]*u[1,0] - u[1,1]*u[0,1]") / d,
                         _p("u[2,0]*u[0,1] - u[1,1]*u[1,0]") / d])
    s_inv = QuadExt(d * 0, 1 / d, d)
    nabla2 = QuadDerivation([s_inv * _p("-u[0,1]"), s_inv * _p("u[1,0]")])
    return nabla1, nabla2


def affine_coframe() -> tuple[QuadForm, QuadForm]:
    """The coframe dual to :func:`affine_frame`."""
    d = hessian()
    I2 = i2()
    omega1 = QuadForm([embed(_p("u[1,0]") / I2), embed(_p("u[0,1]") / I2)])
    s_inv = QuadExt(d * 0, 1 / (d * I2), d)
    omega2 = QuadForm([s_inv * _p("u[1,1]*u[1,0] - u[0,1]*u[2,0]"),
                       s_inv * _p("u[1,0]*u[0,2] - u[1,1]*u[0,1]")])
    return omega1, omega2


def volume_coefficient() -> QuadExt:
    """Coefficient of ``dx∧dy`` in ``ω1∧ω2``."""
    w1, w2 = affine_coframe()
    a1, b1 = w1.coefficients
    a2, b2 = w2.coefficients
    return a1 * b2 - b1 * a2


def _rational_nabla2() -> list:
    """``√Δ2·∇2 = (-u01, u10)``."""
    return [_p("-u[0,1]"), _p("u[1,0]")]


def theta_expand_affine_root(k: int) -> dict:
    """``I_{i,k-i} = k!·Θ_k(∇1^i, ∇2^(k-i))`` in the frame of :func:`affine_frame`."""
    if k < 0:
        raise JetError("k must be non-negative")
    d = hessian()
    if k == 0:
        return {(0, 0): embed(i0())}
    theta = theta_tensor(PLANE, k)
    n1 = affine_frame()[0].coefficients
    w = _rational_nabla2()
    out = {}
    for i in range(k, -1, -1):
        j = k - i
        val = theta.evaluate([n1] * i + [w] * j) * factorial(k)
        # ∇2^j = w^j·Δ2^(-j/2)
        if j % 2 == 0:
            out[(i, j)] = embed(val / d ** (j // 2))
        else:
            out[(i, j)] = QuadExt(val * 0, val / d ** ((j + 1) // 2), d)
    return out


# ---------------------------------------------------------------------------
# Tresse coframe

def affine_tresse_frame() -> list[Derivation]:
    """``τ1, τ2`` dual to ``d̂u00, d̂I2``."""
    return tresse_frame([i0(), i2()])


def affine_tresse_coframe() -> tuple[HorizontalForm, HorizontalForm]:
    u = i0()
    I2 = i2()
    return (HorizontalForm([total_derivative(u, 0), total_derivative(u, 1)]),
            HorizontalForm([total_derivative(I2, 0), total_derivative(I2, 1)]))


def theta_tensor_affine(k: int) -> SymTensor:
    tau = affine_tresse_frame()
    P = [[tau[0].coefficients[a], tau[1].coefficients[a]] for a in range(2)]
    extra = [hessian().value.num, _p(FLEX).value.num]
    return expand_in_coframe(theta_tensor(PLANE, k), P, "omega", extra)


def theta_expand_affine(k: int, normalization: str = "factorial") -> dict:
    """``I_{i,k-i}`` with ``Θ_k = Σ I_{i,k-i} ω1^i/i! ω2^(k-i)/(k-i)!`` in the Tresse coframe.

    These have γ-weight ``1 - k``.
    """
    if k < 0:
        raise JetError("k must be non-negative")
    if k == 0:
        return {(0, 0): i0()}
    return coefficients_of(theta_tensor_affine(k), normalization)


def a2() -> JetFunction:
    """Curve invariant ``I2/I0``."""
    return i2() / i0()


def curve_invariant(i: int, j: int) -> JetFunction:
    """Weight-zero ``I_{ij}·I0^(i+j-1)`` from the Tresse expansion."""
    k = i + j
    return theta_expand_affine(k)[(i, j)] * i0() ** (k - 1)


_A_RE = re.compile(r"^a\[(\d+),(\d+)\](?:@(\d+))?$")
_I_RE = re.compile(r"^I\[(\d+),(\d+)\](?:@(\d+))?$")


def builtin(name: str):
    """Named affine objects: ``I0``, ``I2``, ``a2``, ``I[i,j]@k``, ``a[i,j]@k``,
    ``affine-frame``, ``tresse-coframe``."""
    name = name.strip()
    if name == "I0":
        return i0()
    if name == "I2":
        return i2()
    if name == "a2":
        return a2()
    if name == "affine-frame":
        return affine_frame()
    if name == "tresse-coframe":
        return affine_tresse_coframe()
    for rx, fn in ((_A_RE, lambda i, j: curve_invariant(i, j)),
                   (_I_RE, lambda i, j: theta_expand_affine(i + j)[(i, j)])):
        m = rx.match(name)
        if m:
            i, j = int(m.group(1)), int(m.group(2))
            if m.group(3) and int(m.group(3)) != i + j:
                raise JetError(f"index ({i},{j}) has order {i + j}, not {m.group(3)}")
            return fn(i, j)
    raise KeyError(f"unknown affine builtin {name!r}")


BUILTIN_NAMES = ("I0", "I2", "a2", "I[i,j]@k", "a[i,j]@k", "affine-frame", "tresse-coframe")

"""Differential SL2 invariants of functions on the plane.

Built-in invariants, the invariant frame ``∇1, ∇2`` and its dual coframe,
the Poisson bracket of jet functions, composition of invariants, weights
under the scaling field and the expansion of ``Θ_k`` in the invariant
coframe.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .jets import (Derivation, HorizontalForm, JetContext, JetError, JetFunction,
                   multi_indices, jet_name, parse_jet_name, total_derivative,
                   total_derivative_multi)
from .polyalg import MultiPoly, RatFunc, substitute
from .symtensor import SymTensor, coefficients_of, expand_in_coframe, theta_tensor

PLANE = JetContext(2, 2)


def _p(text: str) -> JetFunction:
    return PLANE.parse(text)


DELTA2 = "u[2,0]*u[0,2] - u[1,1]^2"
J21 = "u[0,1]^2*u[2,0] - 2*u[1,0]*u[0,1]*u[1,1] + u[1,0]^2*u[0,2]"
# ∇2 numerators: 2(u02u10 - u11u01), 2(u20u01 - u11u10)
N1 = "u[0,2]*u[1,0] - u[1,1]*u[0,1]"
N2 = "u[2,0]*u[0,1] - u[1,1]*u[1,0]"


def delta2() -> JetFunction:
    return _p(DELTA2)


def j21() -> JetFunction:
    """Flex invariant ``u01²u20 - 2u10u01u11 + u10²u02``."""
    return _p(J21)


def sl2_frame() -> tuple[Derivation, Derivation]:
    """``∇1 = u01 d/dx - u10 d/dy`` and ``∇2 = 2(N1 d/dx + N2 d/dy)/Δ2``."""
    nabla1 = Derivation([_p("u[0,1]"), _p("-u[1,0]")])
    d2 = delta2()
    nabla2 = Derivation([2 * _p(N1) / d2, 2 * _p(N2) / d2])
    return nabla1, nabla2


def sl2_coframe() -> tuple[HorizontalForm, HorizontalForm]:
    """The coframe dual to :func:`sl2_frame`, with denominators ``J21``."""
    j = j21()
    omega1 = HorizontalForm([_p(N2) / j, -_p(N1) / j])
    scale = delta2() / (2 * j)
    omega2 = HorizontalForm([scale * _p("u[1,0]"), scale * _p("u[0,1]")])
    return omega1, omega2


def area_contract(v) -> HorizontalForm:
    """``v ⌟ (dx∧dy) = a dy - b dx`` for ``v = a d/dx + b d/dy``."""
    a, b = v.coefficients
    return HorizontalForm([-b, a])


def _require_plane(f: JetFunction):
    if f.ctx.n != 2:
        raise JetError("this operation needs two independent variables")


def poisson(f: JetFunction, g: JetFunction) -> JetFunction:
    """``[f, g] = df/dx dg/dy - df/dy dg/dx`` with total derivatives."""
    _require_plane(f)
    _require_plane(g)
    return total_derivative(f, 0) * total_derivative(g, 1) - \
        total_derivative(f, 1) * total_derivative(g, 0)


def compose(phi: JetFunction, psi: JetFunction) -> JetFunction:
    """``φ * ψ``: substitute ``u_σ <- D_σ ψ`` into ``φ``."""
    if phi.ctx.n != psi.ctx.n:
        raise JetError("functions live on different charts")
    images = {}
    cache = {(0,) * phi.ctx.n: psi}
    for name in phi.value.variables():
        s = parse_jet_name(name)
        if s is None:
            continue
        images[name] = _derivative_cached(cache, s)
    if not images:
        return phi
    ctx = JetContext(phi.ctx.n, max(phi.ctx.max_order,
                                    max(v.ctx.max_order for v in images.values())))
    table = ctx.table
    vals = {k: v.value.with_table(table) for k, v in images.items()}
    return JetFunction(ctx, substitute(phi.value.with_table(table), vals, table))


def _derivative_cached(cache: dict, s: tuple) -> JetFunction:
    if s in cache:
        return cache[s]
    j = next(i for i, v in enumerate(s) if v)
    prev = list(s)
    prev[j] -= 1
    r = total_derivative(_derivative_cached(cache, tuple(prev)), j)
    cache[s] = r
    return r


# ---------------------------------------------------------------------------
# weights

def _diagonal_weights(table, field: str) -> list:
    out = []
    for name in table.names:
        s = parse_jet_name(name)
        if s is None:
            out.append(1 if field == "scaling" else 0)
        else:
            out.append(-sum(s) if field == "scaling" else 1)
    return out


def _poly_weight(p: MultiPoly, w: list):
    """Common weight of all monomials, or ``None`` if they differ."""
    found = None
    for m in p.terms:
        val = sum(e * x for e, x in zip(m, w))
        if found is None:
            found = val
        elif val != found:
            return None
    return found


def _lie_diagonal(p: MultiPoly, w: list) -> MultiPoly:
    return MultiPoly._raw(p.table, {m: c * sum(e * x for e, x in zip(m, w))
                                    for m, c in p.terms.items()
                                    if sum(e * x for e, x in zip(m, w))})


def diagonal_weight(f: JetFunction, field: str = "scaling") -> int:
    """Eigenvalue of ``f`` under a diagonal field.

    ``field="scaling"``: ``V* = Σ x_i ∂x_i - Σ |σ| u_σ ∂u_σ``;
    ``field="gamma"``: ``γ = Σ u_σ ∂u_σ``.
    """
    if f.is_zero():
        raise JetError("weight of the zero function is undefined")
    w = _diagonal_weights(f.value.table, field)
    num, den = f.value.num, f.value.den
    wn, wd = _poly_weight(num, w), _poly_weight(den, w)
    if wn is not None and wd is not None:
        return wn - wd
    # fall back to L(f) = c f tested by cross-multiplication
    g = _lie_diagonal(num, w) * den - num * _lie_diagonal(den, w)
    h = num * den
    if g.is_zero():
        return 0
    m, c = g.leading_term()
    ratio = Fraction(c) / Fraction(h.terms.get(m, 0)) if m in h.terms else None
    if ratio is None or ratio.denominator != 1 or g != h.scale(ratio):
        raise JetError("function is not weight-homogeneous")
    return int(ratio)


def weight(f: JetFunction) -> int:
    """``w`` with ``L_{V*}(f) = w f``; raises when ``f`` is not homogeneous."""
    return diagonal_weight(f, "scaling")


@dataclass
class WeightedInvariant:
    value: JetFunction
    weight: int

    @classmethod
    def of(cls, value: JetFunction) -> "WeightedInvariant":
        return cls(value, weight(value))


# ---------------------------------------------------------------------------
# Θ_k expansion and the frame bracket

def theta_expand_sl2(k: int, normalization: str = "monomial") -> dict:
    """Coefficients of ``Θ_k`` in the invariant coframe ``ω1, ω2``.

    ``normalization="monomial"`` (default) gives the coefficient of
    ``ω1^i ω2^(k-i)``; ``"factorial"`` gives ``I_{i,k-i}`` in
    ``Θ_k = Σ I_{i,k-i} ω1^i ω2^(k-i) / (i!(k-i)!)``.
    """
    if k < 0:
        raise JetError("k must be non-negative")
    if k == 0:
        return {(0, 0): PLANE.u(0, 0)}
    return coefficients_of(theta_tensor_sl2(k), normalization)


def theta_tensor_sl2(k: int) -> SymTensor:
    """``Θ_k`` rewritten in the coframe ``ω1, ω2`` (divided-power coefficients)."""
    n1, n2 = sl2_frame()
    # dx_a = Σ_i (∇_i)_a ω_i
    P = [[n1.coefficients[a], n2.coefficients[a]] for a in range(2)]
    extra = [delta2().value.num, j21().value.num]
    return expand_in_coframe(theta_tensor(PLANE, k), P, "omega", extra)


def frame_bracket(a: Derivation, b: Derivation) -> tuple[JetFunction, JetFunction]:
    """``(A, B)`` with ``[a, b] = A a + B b``."""
    if a.n != 2 or b.n != 2:
        raise JetError("frame_bracket needs derivations in two variables")
    comm = [a(cb) - b(ca) for ca, cb in zip(a.coefficients, b.coefficients)]
    a1, a2 = a.coefficients
    b1, b2 = b.coefficients
    det = a1 * b2 - a2 * b1
    if det.is_zero():
        raise JetError("derivations are dependent")
    A = (comm[0] * b2 - comm[1] * b1) / det
    B = (a1 * comm[1] - a2 * comm[0]) / det
    return A, B


# ---------------------------------------------------------------------------
# named objects

_I_RE = re.compile(r"^I\[(\d+),(\d+)\](?:@(\d+))?$")


def builtin(name: str):
    """Named SL2 objects: ``Delta2``, ``J21``, ``I[i,j]@k``, ``nabla1/2``, ``omega1/2``."""
    name = name.strip()
    if name == "Delta2":
        return delta2()
    if name == "J21":
        return j21()
    if name in ("nabla1", "nabla2"):
        return sl2_frame()[int(name[-1]) - 1]
    if name in ("omega1", "omega2"):
        return sl2_coframe()[int(name[-1]) - 1]
    m = _I_RE.match(name)
    if m:
        i, j = int(m.group(1)), int(m.group(2))
        k = int(m.group(3)) if m.group(3) else i + j
        if k != i + j:
            raise JetError(f"I[{i},{j}] has order {i + j}, not {k}")
        return theta_expand_sl2(k)[(i, j)]
    raise KeyError(f"unknown SL2 builtin {name!r}")


BUILTIN_NAMES = ("Delta2", "J21", "I[i,j]@k", "nabla1", "nabla2", "omega1", "omega2")

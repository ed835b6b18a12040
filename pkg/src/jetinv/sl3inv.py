"""Differential SL3 invariants of functions of three variables.

The Hessian determinant ``A``, the coframe ``ω1 = Θ1``, ``ω2 = d̂A``,
``ω3 = F1 dx + F2 dy + F3 dz``, its dual frame, the invariants ``J1..J5`` and
the expansion of ``Θ_m`` in the coframe.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .jets import (Derivation, HorizontalForm, JetContext, JetError, JetFunction,
                   dual_frame, multi_indices, total_differential)
from .polyalg import RatFunc
from .symtensor import SymTensor, _mfact, theta_tensor

SPACE = JetContext(3, 2)

A_TEXT = ("u[0,0,2]*u[0,2,0]*u[2,0,0] - u[0,0,2]*u[1,1,0]^2 - u[0,1,1]^2*u[2,0,0]"
          " + 2*u[0,1,1]*u[1,0,1]*u[1,1,0] - u[0,2,0]*u[1,0,1]^2")

A1_TEXT = ("u[0,0,2]*u[0,2,0]*u[3,0,0] - 2*u[0,0,2]*u[1,1,0]*u[2,1,0] + u[0,0,2]*u[1,2,0]*u[2,0,0]"
           " - u[0,1,1]^2*u[3,0,0] + 2*u[0,1,1]*u[1,0,1]*u[2,1,0] + 2*u[0,1,1]*u[1,1,0]*u[2,0,1]"
           " - 2*u[0,1,1]*u[1,1,1]*u[2,0,0] - 2*u[0,2,0]*u[1,0,1]*u[2,0,1]"
           " + u[0,2,0]*u[1,0,2]*u[2,0,0] - u[1,0,1]^2*u[1,2,0] + 2*u[1,0,1]*u[1,1,0]*u[1,1,1]"
           " - u[1,0,2]*u[1,1,0]^2")
A2_TEXT = ("u[0,0,2]*u[0,2,0]*u[2,1,0] + u[0,0,2]*u[0,3,0]*u[2,0,0] - 2*u[0,0,2]*u[1,1,0]*u[1,2,0]"
           " - u[0,1,1]^2*u[2,1,0] - 2*u[0,1,1]*u[0,2,1]*u[2,0,0] + 2*u[0,1,1]*u[1,0,1]*u[1,2,0]"
           " + 2*u[0,1,1]*u[1,1,0]*u[1,1,1] + u[0,1,2]*u[0,2,0]*u[2,0,0] - u[0,1,2]*u[1,1,0]^2"
           " - 2*u[0,2,0]*u[1,0,1]*u[1,1,1] + 2*u[0,2,1]*u[1,0,1]*u[1,1,0] - u[0,3,0]*u[1,0,1]^2")
A3_TEXT = ("u[0,0,2]*u[0,2,0]*u[2,0,1] + u[0,0,2]*u[0,2,1]*u[2,0,0] - 2*u[0,0,2]*u[1,1,0]*u[1,1,1]"
           " + u[0,0,3]*u[0,2,0]*u[2,0,0] - u[0,0,3]*u[1,1,0]^2 - u[0,1,1]^2*u[2,0,1]"
           " - 2*u[0,1,1]*u[0,1,2]*u[2,0,0] + 2*u[0,1,1]*u[1,0,1]*u[1,1,1]"
           " + 2*u[0,1,1]*u[1,0,2]*u[1,1,0] + 2*u[0,1,2]*u[1,0,1]*u[1,1,0]"
           " - 2*u[0,2,0]*u[1,0,1]*u[1,0,2] - u[0,2,1]*u[1,0,1]^2")

# ω3 components with the A_i kept symbolic as a1, a2, a3
F1_TEXT = ("(u[0,0,1]*u[1,1,0] - u[0,1,0]*u[1,0,1])*a1 + (-u[0,0,1]*u[2,0,0] + u[1,0,0]*u[1,0,1])*a2"
           " + (u[0,1,0]*u[2,0,0] - u[1,0,0]*u[1,1,0])*a3")
F2_TEXT = ("(u[0,0,1]*u[0,2,0] - u[0,1,0]*u[0,1,1])*a1 + (-u[0,0,1]*u[1,1,0] + u[0,1,1]*u[1,0,0])*a2"
           " + (u[0,1,0]*u[1,1,0] - u[0,2,0]*u[1,0,0])*a3")
F3_TEXT = ("(u[0,0,1]*u[0,1,1] - u[0,0,2]*u[0,1,0])*a1 + (-u[0,0,1]*u[1,0,1] + u[0,0,2]*u[1,0,0])*a2"
           " + (u[0,1,0]*u[1,0,1] - u[0,1,1]*u[1,0,0])*a3")

# Θ2^{-1} = (2/A) Σ_{i<=j} c_ij ∂i∂j, upper-triangle numerators
THETA2_INV = {
    (0, 0): "u[0,0,2]*u[0,2,0] - u[0,1,1]^2",
    (0, 1): "-2*(u[0,0,2]*u[1,1,0] - u[0,1,1]*u[1,0,1])",
    (0, 2): "2*(u[0,1,1]*u[1,1,0] - u[0,2,0]*u[1,0,1])",
    (1, 2): "-2*(u[0,1,1]*u[2,0,0] - u[1,0,1]*u[1,1,0])",
    (1, 1): "u[0,0,2]*u[2,0,0] - u[1,0,1]^2",
    (2, 2): "u[0,2,0]*u[2,0,0] - u[1,1,0]^2",
}


def _p(text: str) -> JetFunction:
    return SPACE.parse(text)


def hessian3() -> JetFunction:
    """``A = det(u_{e_i+e_j})``."""
    return _p(A_TEXT)


def hessian_matrix() -> list:
    names = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            s = [0, 0, 0]
            s[i] += 1
            s[j] += 1
            names[i][j] = SPACE.u(*s)
    return names


def printed_dA() -> tuple:
    """The displayed ``A1, A2, A3``."""
    ctx = SPACE.extend(3)
    return tuple(ctx.parse(t) for t in (A1_TEXT, A2_TEXT, A3_TEXT))


def _substitute_a(text: str, a: tuple) -> JetFunction:
    from .polyalg import VarTable, parse_expression, substitute
    ctx = SPACE.extend(3)
    table = VarTable(ctx.table.names + ("a1", "a2", "a3"))
    expr = parse_expression(text, table)
    vals = {f"a{i + 1}": a[i].value for i in range(3)}
    return JetFunction(ctx, substitute(expr, vals, ctx.table))


def inverse_theta2() -> dict:
    """``(i, j) -> coefficient of ∂i∂j`` in the displayed ``Θ2^{-1}``, ``i <= j``."""
    two_over_a = 2 / hessian3()
    return {k: two_over_a * _p(t) for k, t in THETA2_INV.items()}


def inverse_pairing(alpha, beta) -> JetFunction:
    """``Θ2^{-1}(α, β)`` for 1-forms, polarizing the displayed quadratic form."""
    inv = inverse_theta2()
    a = alpha.coefficients if isinstance(alpha, HorizontalForm) else alpha
    b = beta.coefficients if isinstance(beta, HorizontalForm) else beta
    total = None
    for (i, j), c in inv.items():
        if i == j:
            t = c * a[i] * b[i]
        else:
            t = c * (a[i] * b[j] + a[j] * b[i]) / 2
        total = t if total is None else total + t
    return total


@lru_cache(maxsize=None)
def sl3_coframe() -> tuple[HorizontalForm, HorizontalForm, HorizontalForm]:
    """``ω1 = Θ1``, ``ω2 = d̂A``, ``ω3 = F1 dx + F2 dy + F3 dz`` (polynomial)."""
    ctx = SPACE.extend(3)
    omega1 = HorizontalForm([ctx.u(1, 0, 0), ctx.u(0, 1, 0), ctx.u(0, 0, 1)])
    omega2 = total_differential(hessian3())
    a = tuple(omega2.coefficients)
    omega3 = HorizontalForm([_substitute_a(t, a) for t in (F1_TEXT, F2_TEXT, F3_TEXT)])
    return omega1, omega2, omega3


@lru_cache(maxsize=None)
def sl3_frame() -> tuple[Derivation, Derivation, Derivation]:
    """Derivations dual to :func:`sl3_coframe`."""
    coframe = sl3_coframe()
    return tuple(dual_frame(list(coframe)))


def sl3_generators() -> tuple:
    """``J1 = u000``, ``J2 = A``, ``J3..J5 = ∇1(A), ∇2(A), ∇3(A)``."""
    A = hessian3()
    n1, n2, n3 = sl3_frame()
    return (SPACE.u(0, 0, 0), A, n1(A), n2(A), n3(A))


def _frame_numerators():
    """Frame numerators ``N_i`` and the shared denominator ``Q``."""
    frame = sl3_frame()
    vals = [c.value for f in frame for c in f.coefficients]
    table = vals[0].table
    Q = vals[0].den
    if any(v.den != Q for v in vals):
        raise JetError("frame entries do not share a denominator")
    return [[c.value.num for c in f.coefficients] for f in frame], Q, frame[0].coefficients[0].ctx


def theta_coefficient_sl3(tau, normalization: str = "monomial") -> JetFunction:
    """One coefficient of ``Θ_m`` in ``ω1, ω2, ω3``, ``m = |τ|``.

    Evaluates ``Θ_m`` on the frame numerators (smallest first), then cancels
    powers of the common denominator ``Q``.
    """
    tau = tuple(tau)
    m = sum(tau)
    if len(tau) != 3 or min(tau) < 0:
        raise JetError("tau must be a non-negative triple")
    if m == 0:
        return SPACE.u(0, 0, 0)
    N, Q, ctx = _frame_numerators()
    ctx = ctx.extend(max(ctx.max_order, m))
    table = ctx.table
    theta = theta_tensor(ctx, m)
    t = SymTensor(m, {s: c.value.num.with_table(table) for s, c in theta.coefficients.items()}, "dx")
    slots = sorted((i for i in range(3) for _ in range(tau[i])), key=lambda i: -len(N[i][0].terms) - len(N[i][1].terms))
    for i in reversed(slots):
        t = t.contract([c.with_table(table) for c in N[i]])
    num = t.coefficients[(0, 0, 0)]
    # Θ_m(∇^τ) = num/Q^m; scale to the requested normalization
    scale = Fraction(factorial(m))
    if normalization == "monomial":
        scale /= _mfact(tau)
    elif normalization != "factorial":
        raise ValueError(f"unknown normalization {normalization!r}")
    num = num.scale(scale)
    Qt = Q.with_table(table)
    power = m
    while power and not num.is_zero():
        q = num.divexact(Qt)
        if q is None:
            break
        num, power = q, power - 1
    if num.is_zero():
        return JetFunction(ctx, RatFunc.constant(table, 0))
    return JetFunction(ctx, RatFunc(num, Qt ** power))


def theta_expand_sl3(m: int, normalization: str = "monomial") -> dict:
    """All coefficients of ``Θ_m`` in ``ω1, ω2, ω3``, keyed by ``τ``."""
    if m < 0:
        raise JetError("m must be non-negative")
    return {s: theta_coefficient_sl3(s, normalization) for s in multi_indices(3, m)}


_I_RE = re.compile(r"^I\[(\d+),(\d+),(\d+)\](?:@(\d+))?$")


def builtin(name: str):
    """Named SL3 objects: ``A``, ``J1..J5``, ``omega1..omega3``, ``nabla1..nabla3``, ``I[i,j,k]@m``."""
    name = name.strip()
    if name == "A":
        return hessian3()
    m = re.match(r"^J([1-5])$", name)
    if m:
        return sl3_generators()[int(m.group(1)) - 1]
    m = re.match(r"^omega([1-3])$", name)
    if m:
        return sl3_coframe()[int(m.group(1)) - 1]
    m = re.match(r"^nabla([1-3])$", name)
    if m:
        return sl3_frame()[int(m.group(1)) - 1]
    m = _I_RE.match(name)
    if m:
        idx = tuple(int(g) for g in m.group(1, 2, 3))
        if m.group(4) and int(m.group(4)) != sum(idx):
            raise JetError(f"I{list(idx)} has order {sum(idx)}, not {m.group(4)}")
        return theta_coefficient_sl3(idx)
    raise KeyError(f"unknown SL3 builtin {name!r}")


BUILTIN_NAMES = ("A", "J1..J5", "omega1..omega3", "nabla1..nabla3", "I[i,j,k]@m")

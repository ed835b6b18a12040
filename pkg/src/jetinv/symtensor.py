"""Symmetric tensors in divided-power form and their expansion in a coframe.

A degree-``k`` tensor is stored as ``Θ = Σ_σ c_σ e^σ/σ!`` with ``|σ| = k``,
where ``e`` is a basis of 1-forms (``dx, dy, ...`` or an invariant coframe).
Products are commutative polynomial products of the basis symbols.  With this
convention ``Θ(v, ..., v)`` is the polynomial evaluated at ``e = v`` and the
tensor component ``Θ(e_{i1}, ..., e_{ik})`` equals ``c_σ / k!``.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .jets import (JetContext, JetFunction, JetError, multi_indices, _unify)
from .polyalg import MultiPoly, RatFunc, common_table


def _mfact(s) -> int:
    r = 1
    for k in s:
        r *= factorial(k)
    return r


class SymTensor:
    """Symmetric ``k``-tensor with divided-power coefficients ``c_σ``."""

    def __init__(self, degree: int, coefficients: Mapping[tuple, object], basis: str = "dx"):
        if not coefficients:
            raise JetError("a tensor needs at least one coefficient")
        self.degree = degree
        self.basis = basis
        n = len(next(iter(coefficients)))
        self.n = n
        full = {}
        sample = next(iter(coefficients.values()))
        for s in multi_indices(n, degree):
            c = coefficients.get(s)
            full[s] = c if c is not None else sample * 0
        extra = set(coefficients) - set(full)
        if extra:
            raise JetError(f"multi-indices {sorted(extra)} do not have degree {degree}")
        self.coefficients = full

    def __getitem__(self, sigma) -> object:
        return self.coefficients[tuple(sigma)]

    def component(self, sigma) -> object:
        """``Θ(e_{i1}, ..., e_{ik})`` for the slots listed by ``sigma``."""
        return self.coefficients[tuple(sigma)] * Fraction(1, factorial(self.degree))

    def polynomial_terms(self) -> dict:
        """Monomial coefficients ``c_σ/σ!`` of the basis symbols."""
        return {s: c * Fraction(1, _mfact(s)) for s, c in self.coefficients.items()}

    def evaluate(self, vectors: Sequence[Sequence]) -> object:
        """``Θ(v_1, ..., v_k)`` by polarization of the polynomial."""
        if len(vectors) != self.degree:
            raise JetError(f"need {self.degree} vectors")
        # repeated directional derivatives of the polynomial, divided by k!
        terms = self.polynomial_terms()
        for v in vectors:
            new = {}
            for s, c in terms.items():
                for j, k in enumerate(s):
                    if not k:
                        continue
                    t = list(s)
                    t[j] -= 1
                    t = tuple(t)
                    add = c * k * v[j]
                    new[t] = new[t] + add if t in new else add
            terms = new
        total = terms.get((0,) * self.n)
        if total is None:
            return next(iter(self.coefficients.values())) * 0
        return total * Fraction(1, factorial(self.degree))

    def contract(self, v: Sequence) -> "SymTensor":
        """Interior product ``v ⌟ Θ = Θ(v, ...)``; ``k`` contractions give :meth:`evaluate`."""
        if self.degree == 0:
            raise JetError("cannot contract a scalar")
        k = self.degree
        out = {}
        # c'_τ = (1/k) Σ_j v_j c_{τ+e_j}
        for t in multi_indices(self.n, k - 1):
            acc = None
            for j in range(self.n):
                s = list(t)
                s[j] += 1
                term = self.coefficients[tuple(s)] * v[j]
                acc = term if acc is None else acc + term
            out[t] = acc * Fraction(1, k) if k > 1 else acc
        return SymTensor(k - 1, out, self.basis)

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self.degree == other.degree and self.basis == other.basis
                and all(self.coefficients[s] == other.coefficients[s] for s in self.coefficients))

    __hash__ = None

    def __repr__(self):
        parts = [f"{s}: {c}" for s, c in self.coefficients.items()]
        return f"SymTensor[{self.basis}, k={self.degree}]({{{', '.join(parts)}}})"


def theta_tensor(ctx: JetContext, k: int) -> SymTensor:
    """``Θ_k = Σ u_σ dx^σ/σ!`` on a chart with ``ctx.n`` variables."""
    ctx = ctx.extend(k)
    return SymTensor(k, {s: ctx.u(s) for s in multi_indices(ctx.n, k)}, "dx")


def _distinct_factors(dens: Sequence[MultiPoly]) -> list:
    out = []
    for d in dens:
        if d.is_constant():
            continue
        if not any(d == e for e in out):
            out.append(d)
    return out


def cancel_known(num: MultiPoly, den: MultiPoly, factors: Sequence[MultiPoly]) -> RatFunc:
    """Build ``num/den`` after stripping any of ``factors`` common to both."""
    changed = True
    while changed:
        changed = False
        for f in factors:
            if f.is_constant() or den.is_constant():
                continue
            qd = den.divexact(f)
            if qd is None:
                continue
            qn = num.divexact(f)
            if qn is None:
                continue
            num, den = qn, qd
            changed = True
    return RatFunc(num, den)


def expand_in_coframe(theta: SymTensor, P: Sequence[Sequence[JetFunction]],
                      basis: str = "omega", extra_factors: Sequence[MultiPoly] = ()) -> SymTensor:
    """Rewrite ``theta`` (in ``dx``) in a coframe ``ω`` with ``dx_a = Σ_i P[a][i] ω_i``.

    Works over a single common denominator: each entry is written as a
    polynomial over the product of the distinct entry denominators, the
    expansion is done with polynomial coefficients and known factors are
    cancelled at the end.
    """
    n = theta.n
    flat = _unify([e for row in P for e in row] + [c for c in theta.coefficients.values()
                                                    if isinstance(c, JetFunction)])
    ctx = flat[0].ctx
    table = ctx.table
    entries = [[JetFunction(ctx, e.value).value for e in row] for row in P]
    factors = _distinct_factors([e.den for row in entries for e in row])
    den = MultiPoly.constant(table, 1)
    for f in factors:
        den = den * f.with_table(table)
    Pn = []
    for row in entries:
        r = []
        for e in row:
            q = den.divexact(e.den.with_table(table))
            r.append(e.num.with_table(table) * q)
        Pn.append(r)
    # polynomials in ω with MultiPoly coefficients: dict τ -> MultiPoly
    k = theta.degree
    powers = {}

    def lin_power(a: int, e: int) -> dict:
        key = (a, e)
        if key in powers:
            return powers[key]
        if e == 0:
            res = {(0,) * n: MultiPoly.constant(table, 1)}
        else:
            prev = lin_power(a, e - 1)
            res = {}
            for t, c in prev.items():
                for i in range(n):
                    if Pn[a][i].is_zero():
                        continue
                    tt = list(t)
                    tt[i] += 1
                    tt = tuple(tt)
                    term = c * Pn[a][i]
                    res[tt] = res[tt] + term if tt in res else term
        powers[key] = res
        return res

    acc: dict = {}
    for s, c in theta.coefficients.items():
        cval = c.value if isinstance(c, JetFunction) else c
        if isinstance(cval, RatFunc):
            if not cval.den.is_constant():
                raise JetError("tensor coefficients must be polynomial")
            cpoly = cval.num.with_table(table).scale(Fraction(1) / Fraction(cval.den.constant_value()))
        else:
            cpoly = MultiPoly.constant(table, cval)
        if cpoly.is_zero():
            continue
        prod = {(0,) * n: cpoly.scale(Fraction(1, _mfact(s)))}
        for a, e in enumerate(s):
            if not e:
                continue
            pw = lin_power(a, e)
            new = {}
            for t1, c1 in prod.items():
                for t2, c2 in pw.items():
                    t = tuple(x + y for x, y in zip(t1, t2))
                    term = c1 * c2
                    new[t] = new[t] + term if t in new else term
            prod = new
        for t, cc in prod.items():
            acc[t] = acc[t] + cc if t in acc else cc
    den_k = den ** k
    known = factors + [f.with_table(table) for f in extra_factors]
    out = {}
    for t in multi_indices(n, k):
        num = acc.get(t)
        if num is None or num.is_zero():
            out[t] = JetFunction(ctx, RatFunc.constant(table, 0))
            continue
        num = num.scale(_mfact(t))
        out[t] = JetFunction(ctx, cancel_known(num, den_k, known))
    return SymTensor(k, out, basis)


def coefficients_of(t: SymTensor, normalization: str = "monomial") -> dict:
    """``c_σ/σ!`` (``"monomial"``) or the divided-power ``c_σ`` (``"factorial"``)."""
    if normalization == "factorial":
        return dict(t.coefficients)
    if normalization == "monomial":
        return {s: (c if _mfact(s) == 1 else c * Fraction(1, _mfact(s)))
                for s, c in t.coefficients.items()}
    raise ValueError(f"unknown normalization {normalization!r}")

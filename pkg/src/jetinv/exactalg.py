"""Exact rational scalars, dense rational matrices and the quadratic extension ring.

Rationals are :class:`fractions.Fraction` values; this module adds the
canonical text form, exact elimination (nullspace, rank, determinant) and
:class:`QuadExt`, the ring ``K[s]/(s^2 - r)`` over a field ``K`` of rational
functions used by the affine frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Rational = Fraction


def rational(value) -> Fraction:
    """Coerce an int, Fraction or canonical text (``-17/3``) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to a rational")


def format_rational(q) -> str:
    """Canonical text: ``-17/3``, integers without ``/1``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _bitsize(q: Fraction) -> int:
    return q.numerator.bit_length() + q.denominator.bit_length()


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(Fraction(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, vec):
        vec = [Fraction(v) for v in vec]
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(self.row(i), vec)), Fraction(0))
                for i in range(self.rows)]


def _sparse_rows(rows) -> list[dict]:
    out = []
    for r in rows:
        d = {j: Fraction(v) for j, v in enumerate(r) if v}
        if d:
            out.append(d)
    return out


def rref_sparse(rows: list[dict], cols: int) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of sparse rows ``{col: value}``.

    Columns are processed in ascending order; within a column the pivot is
    the candidate entry of smallest bit size, ties broken by row position.
    Returns the pivot rows (pivot normalized to 1) and their pivot columns.
    """
    pending = [dict(r) for r in rows if r]
    pivots: list[dict] = []
    pivot_cols: list[int] = []
    for c in range(cols):
        best = None
        for idx, r in enumerate(pending):
            v = r.get(c)
            if v is not None:
                size = _bitsize(v)
                if best is None or size < best[0]:
                    best = (size, idx)
        if best is None:
            continue
        prow = pending.pop(best[1])
        inv = 1 / prow[c]
        prow = {j: v * inv for j, v in prow.items()}
        for group in (pending, pivots):
            for k, r in enumerate(group):
                f = r.get(c)
                if f is None:
                    continue
                for j, v in prow.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        pending = [r for r in pending if r]
        pivots.append(prow)
        pivot_cols.append(c)
        if not pending:
            break
    return pivots, pivot_cols


def nullspace(M: ExactMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{v : M v = 0}`` read off the reduced echelon form.

    One vector per free column, in ascending free-column order; the free
    coordinate is 1 and the other free coordinates are 0.
    """
    return nullspace_rows(_sparse_rows(M.to_rows()), M.cols)


def nullspace_rows(rows: list[dict], cols: int) -> list[tuple[Fraction, ...]]:
    """:func:`nullspace` for a matrix given as sparse rows."""
    pivots, pivot_cols = rref_sparse(rows, cols)
    pivot_set = set(pivot_cols)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for prow, pc in zip(pivots, pivot_cols):
            a = prow.get(f)
            if a:
                v[pc] = -a
        basis.append(tuple(v))
    return basis


def rank(M: ExactMatrix) -> int:
    """Rank by fraction-free (Bareiss) elimination with largest-magnitude pivots.

    Deliberately uses a different pivoting rule from :func:`nullspace` so the
    two can cross-check each other.
    """
    rows = [list(r) for r in M.to_rows()]
    if not rows:
        return 0
    # scale every row to integers first
    for r in rows:
        den = 1
        for v in r:
            den = den * v.denominator // _gcd(den, v.denominator)
        for j, v in enumerate(r):
            r[j] = int(v * den)
    rk = 0
    prev = 1
    ncols = M.cols
    for c in range(ncols):
        best = None
        for i in range(rk, len(rows)):
            v = rows[i][c]
            if v and (best is None or abs(v) > abs(rows[best][c])):
                best = i
        if best is None:
            continue
        rows[rk], rows[best] = rows[best], rows[rk]
        p = rows[rk][c]
        for i in range(rk + 1, len(rows)):
            ri = rows[i]
            f = ri[c]
            for j in range(c, ncols):
                ri[j] = (p * ri[j] - f * rows[rk][j]) // prev
        prev = p
        rk += 1
        if rk == len(rows):
            break
    return rk


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def det(M: ExactMatrix) -> Fraction:
    """Determinant by rational Gaussian elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    a = M.to_rows()
    n = M.rows
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return sign * result


def det_laplace(entries: Sequence[Sequence], zero=0):
    """Division-free determinant over any commutative ring (Laplace, memoized).

    Expands along rows, caching minors by the set of remaining columns, so an
    ``n x n`` matrix costs ``O(n 2^n)`` ring multiplications.
    """
    n = len(entries)
    if n == 0:
        return zero + 1
    memo: dict[int, object] = {}

    def minor(row: int, colmask: int):
        if row == n:
            return None
        key = colmask
        if key in memo:
            return memo[key]
        total = None
        sign = 1
        for c in range(n):
            if colmask & (1 << c):
                continue
            e = entries[row][c]
            if not _is_zero(e):
                sub = minor(row + 1, colmask | (1 << c))
                term = e if sub is None else e * sub
                if sign < 0:
                    term = -term
                total = term if total is None else total + term
            sign = -sign
        if total is None:
            total = zero
        memo[key] = total
        return total

    result = minor(0, 0)
    return zero if result is None else result


def _is_zero(e) -> bool:
    if isinstance(e, (int, Fraction)):
        return e == 0
    return e.is_zero()


class QuadExt:
    """Element ``a + b*s`` of ``K[s]/(s^2 - radicand)``.

    ``a``, ``b`` and ``radicand`` are field elements supporting ``+ - * /``,
    ``is_zero()`` and exact equality (in practice :class:`~jetinv.polyalg.RatFunc`).
    """

    __slots__ = ("a", "b", "radicand")

    def __init__(self, a, b, radicand):
        self.a = a
        self.b = b
        self.radicand = radicand

    @classmethod
    def embed(cls, a, radicand) -> "QuadExt":
        return cls(a, a * 0, radicand)

    @classmethod
    def root(cls, radicand) -> "QuadExt":
        """The formal square root ``s`` itself."""
        one = radicand ** 0
        return cls(one * 0, one, radicand)

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if not (other.radicand == self.radicand):
                raise ValueError("QuadExt elements over different radicands")
            return other
        return QuadExt(self.a * 0 + other, self.b * 0, self.radicand)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadExt(self.a + o.a, self.b + o.b, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.radicand)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadExt(self.a * o.a + self.b * o.b * self.radicand,
                       self.a * o.b + self.b * o.a, self.radicand)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.radicand)

    def norm(self):
        """``a^2 - b^2 * radicand``, an element of the base field."""
        return self.a * self.a - self.b * self.b * self.radicand

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisionError("QuadExt element has zero norm")
        return QuadExt(self.a / n, -self.b / n, self.radicand)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._coerce(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_rational(self) -> bool:
        """True when the ``s`` component vanishes."""
        return self.b.is_zero()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        raise TypeError("QuadExt is unhashable")

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, sqrt({self.radicand}))"

"""Sparse multivariate polynomials and rational functions over the rationals.

A :class:`MultiPoly` is a dict from exponent tuples to nonzero coefficients
(``int`` where possible, ``Fraction`` otherwise) over an ordered
:class:`VarTable`.  Tables grow by appending names; operands whose tables are
prefix-related are padded automatically, anything else is a table mismatch.

A :class:`RatFunc` is a quotient ``num/den``.  Normalization is best-effort:
the denominator is made a primitive integer polynomial with positive leading
coefficient, common monomial factors are removed, and exact polynomial
division is attempted in a few cheap places.  Equality never depends on
normalization; it is decided by cross-multiplication.
"""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .exactalg import format_rational

_NAME_RE = re.compile(r"^(?:[A-Za-z][A-Za-z0-9_]*|[A-Za-z]\[-?\d+(?:,-?\d+)*\])$")
MAX_EXPONENT = 2**31 - 1


class TableMismatch(ValueError):
    pass


class VarTable:
    """Ordered, interned sequence of variable names."""

    _cache: dict[tuple, "VarTable"] = {}

    def __new__(cls, names: Iterable[str] = ()):
        names = tuple(names)
        table = cls._cache.get(names)
        if table is not None:
            return table
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not _NAME_RE.match(n):
                raise ValueError(f"invalid variable name {n!r}")
        table = super().__new__(cls)
        table.names = names
        table.index = {n: i for i, n in enumerate(names)}
        cls._cache[names] = table
        return table

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.index

    def __iter__(self):
        return iter(self.names)

    def __repr__(self):
        return f"VarTable({list(self.names)})"

    def extend(self, names: Iterable[str]) -> "VarTable":
        extra = [n for n in names if n not in self.index]
        return VarTable(self.names + tuple(extra)) if extra else self

    def is_prefix_of(self, other: "VarTable") -> bool:
        return len(self) <= len(other) and other.names[:len(self)] == self.names

    def __reduce__(self):
        return (VarTable, (self.names,))


def common_table(a: VarTable, b: VarTable) -> VarTable:
    if a is b:
        return a
    if a.is_prefix_of(b):
        return b
    if b.is_prefix_of(a):
        return a
    raise TableMismatch(f"variable tables do not match: {a.names} vs {b.names}")


def _norm_coeff(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _monomial_key(m: tuple) -> tuple:
    """Sort key realizing graded lexicographic order (larger is bigger)."""
    return (sum(m), m)


class MultiPoly:
    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[tuple, object] | None = None):
        self.table = table
        self.terms = dict(terms) if terms else {}
        self._hash = None

    @classmethod
    def _raw(cls, table, terms: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p.table = table
        p.terms = terms
        p._hash = None
        return p

    # ---- construction -------------------------------------------------
    @classmethod
    def zero(cls, table: VarTable) -> "MultiPoly":
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table: VarTable, c) -> "MultiPoly":
        c = _norm_coeff(c)
        return cls._raw(table, {(0,) * len(table): c} if c else {})

    @classmethod
    def var(cls, table: VarTable, name: str) -> "MultiPoly":
        if name not in table:
            raise KeyError(f"unknown variable {name!r}")
        e = [0] * len(table)
        e[table.index[name]] = 1
        return cls._raw(table, {tuple(e): 1})

    def with_table(self, table: VarTable) -> "MultiPoly":
        """Re-express over ``table``, which must extend the current table."""
        if table is self.table:
            return self
        if self.table.is_prefix_of(table):
            pad = (0,) * (len(table) - len(self.table))
            return MultiPoly._raw(table, {m + pad: c for m, c in self.terms.items()})
        # general reindexing (used when moving between unrelated charts)
        idx = []
        for n in self.table.names:
            if n not in table:
                if any(m[self.table.index[n]] for m in self.terms):
                    raise TableMismatch(f"variable {n!r} missing from target table")
                idx.append(None)
            else:
                idx.append(table.index[n])
        terms = {}
        size = len(table)
        for m, c in self.terms.items():
            e = [0] * size
            for i, k in enumerate(m):
                if k:
                    e[idx[i]] = k
            terms[tuple(e)] = c
        return MultiPoly._raw(table, terms)

    def _align(self, other: "MultiPoly"):
        if self.table is other.table:
            return self, other
        t = common_table(self.table, other.table)
        return self.with_table(t), other.with_table(t)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.table, other)
        return NotImplemented

    # ---- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.table.index[name]
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> list[str]:
        used = [False] * len(self.table)
        for m in self.terms:
            for i, k in enumerate(m):
                if k:
                    used[i] = True
        return [n for n, u in zip(self.table.names, used) if u]

    def leading_term(self):
        m = max(self.terms, key=_monomial_key)
        return m, self.terms[m]

    def sorted_terms(self, reverse: bool = True):
        return sorted(self.terms.items(), key=lambda t: _monomial_key(t[0]), reverse=reverse)

    def coefficients(self):
        return self.terms.values()

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._align(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        terms = dict(a.terms)
        for m, c in b.terms.items():
            v = terms.get(m)
            if v is None:
                terms[m] = c
            else:
                v = _norm_coeff(v + c)
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return MultiPoly._raw(a.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._align(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            v = terms.get(m)
            if v is None:
                terms[m] = -c
            else:
                v = _norm_coeff(v - c)
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return MultiPoly._raw(a.table, terms)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _norm_coeff(c)
        if not c:
            return MultiPoly.zero(self.table)
        if c == 1:
            return self
        if type(c) is int:
            return MultiPoly._raw(self.table, {m: v * c for m, v in self.terms.items()})
        return MultiPoly._raw(self.table, {m: _norm_coeff(v * c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._align(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        if not b.terms:
            return MultiPoly.zero(a.table)
        if len(b.terms) == 1:
            (mb, cb), = b.terms.items()
            if not any(mb):
                return a.scale(cb)
        terms: dict = {}
        get = terms.get
        frac = any(type(c) is Fraction for c in a.terms.values()) or any(
            type(c) is Fraction for c in b.terms.values())
        for mb, cb in b.terms.items():
            for ma, ca in a.terms.items():
                m = tuple([x + y for x, y in zip(ma, mb)])
                terms[m] = get(m, 0) + ca * cb
        if frac:
            terms = {m: _norm_coeff(c) for m, c in terms.items() if c}
        else:
            terms = {m: c for m, c in terms.items() if c}
        return MultiPoly._raw(a.table, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        if self.terms and e * max((max(m, default=0) for m in self.terms), default=0) > MAX_EXPONENT:
            raise OverflowError("exponent overflow")
        result = MultiPoly.constant(self.table, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def diff(self, name_or_index) -> "MultiPoly":
        i = name_or_index if isinstance(name_or_index, int) else self.table.index.get(name_or_index)
        if i is None:
            if isinstance(name_or_index, str) and _NAME_RE.match(name_or_index):
                return MultiPoly.zero(self.table)
            raise KeyError(f"unknown variable {name_or_index!r}")
        terms = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                e = list(m)
                e[i] = k - 1
                terms[tuple(e)] = c * k
        return MultiPoly._raw(self.table, terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.table, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        try:
            a, b = self._align(other)
        except TableMismatch:
            # unrelated orderings: compare by variable name
            t = self.table.extend(other.table.names)
            a, b = self.with_table(t), other.with_table(t)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            trimmed = {}
            for m, c in self.terms.items():
                k = len(m)
                while k and not m[k - 1]:
                    k -= 1
                trimmed[m[:k]] = c
            self._hash = hash(frozenset(trimmed.items()))
        return self._hash

    # ---- content and division ----------------------------------------
    def monomial_content(self) -> tuple:
        if not self.terms:
            return (0,) * len(self.table)
        it = iter(self.terms)
        g = list(next(it))
        for m in it:
            for i, k in enumerate(m):
                if k < g[i]:
                    g[i] = k
        return tuple(g)

    def divide_monomial(self, mono: tuple) -> "MultiPoly":
        if not any(mono):
            return self
        return MultiPoly._raw(self.table, {
            tuple([x - y for x, y in zip(m, mono)]): c for m, c in self.terms.items()})

    def integer_normalizer(self):
        """Rational ``c`` such that ``self * c`` is a primitive integer polynomial."""
        dens = [c.denominator for c in self.terms.values() if type(c) is Fraction]
        d = reduce(lcm, dens, 1)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c * d))
        if g == 0:
            return 1
        return Fraction(d, g) if g != d else 1

    def divexact(self, d: "MultiPoly"):
        """Quotient ``self / d`` if the division is exact, else ``None``."""
        p, d = self._align(d)
        if not d.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not p.terms:
            return MultiPoly.zero(p.table)
        if len(d.terms) == 1:
            (md, cd), = d.terms.items()
            terms = {}
            for m, c in p.terms.items():
                e = tuple([x - y for x, y in zip(m, md)])
                if min(e) < 0:
                    return None
                terms[e] = _norm_coeff(Fraction(c) / cd) if type(c) is not int or type(cd) is not int or c % cd else c // cd
            return MultiPoly._raw(p.table, terms)
        # degree screening
        for i in range(len(p.table)):
            dd = max(m[i] for m in d.terms)
            if dd and dd > max(m[i] for m in p.terms):
                return None
        if len(p.terms) < len(d.terms):
            return None
        lm_d, lc_d = d.leading_term()
        lo_p = min(p.terms, key=_monomial_key)
        lo_d = min(d.terms, key=_monomial_key)
        if any(x < y for x, y in zip(lo_p, lo_d)):
            return None
        rem = dict(p.terms)
        heap = [(-sum(m), tuple([-k for k in m])) for m in rem]
        heapq.heapify(heap)
        quot = {}
        d_items = list(d.terms.items())
        int_lc = type(lc_d) is int
        while rem:
            while True:
                negdeg, negm = heapq.heappop(heap)
                m = tuple([-k for k in negm])
                if m in rem:
                    break
            c = rem[m]
            qm = tuple([x - y for x, y in zip(m, lm_d)])
            if min(qm) < 0:
                return None
            if int_lc and type(c) is int:
                qc = c // lc_d if c % lc_d == 0 else Fraction(c, lc_d)
            else:
                qc = _norm_coeff(Fraction(c) / lc_d)
            quot[qm] = qc
            for md, cd in d_items:
                mm = tuple([x + y for x, y in zip(qm, md)])
                v = rem.get(mm)
                if v is None:
                    rem[mm] = _norm_coeff(-qc * cd)
                    heapq.heappush(heap, (-sum(mm), tuple([-k for k in mm])))
                else:
                    v = _norm_coeff(v - qc * cd)
                    if v:
                        rem[mm] = v
                    else:
                        del rem[mm]
        return MultiPoly._raw(p.table, quot)

    # ---- substitution and evaluation ----------------------------------
    def evaluate(self, point: Mapping[str, object]):
        """Exact value at a point given as ``{name: Fraction}``."""
        vals = []
        for n in self.table.names:
            vals.append(point.get(n))
        total = Fraction(0)
        for m, c in self.terms.items():
            t = Fraction(c)
            for i, k in enumerate(m):
                if k:
                    v = vals[i]
                    if v is None:
                        raise KeyError(f"no value for variable {self.table.names[i]!r}")
                    t *= Fraction(v) ** k
            total += t
        return _norm_coeff(total)

    def __str__(self):
        return poly_to_str(self)

    def __repr__(self):
        return f"MultiPoly({poly_to_str(self)!r})"


def _monomial_str(table: VarTable, m: tuple) -> str:
    parts = []
    for name, k in zip(table.names, m):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def poly_to_str(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        mono = _monomial_str(p.table, m)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{format_rational(a)}*{mono}"
        else:
            body = format_rational(a)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


class RatFunc:
    """Quotient of two :class:`MultiPoly` values over a shared table."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, normalize: bool = True):
        if den is None:
            den = MultiPoly.constant(num.table, 1)
        else:
            num, den = num._align(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den
        if normalize:
            self._normalize()

    @classmethod
    def _make(cls, num, den) -> "RatFunc":
        r = cls.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def constant(cls, table: VarTable, c) -> "RatFunc":
        c = Fraction(c)
        return cls._make(MultiPoly.constant(table, c), MultiPoly.constant(table, 1))

    @classmethod
    def var(cls, table: VarTable, name: str) -> "RatFunc":
        return cls._make(MultiPoly.var(table, name), MultiPoly.constant(table, 1))

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls._make(p, MultiPoly.constant(p.table, 1))

    @property
    def table(self) -> VarTable:
        return self.num.table

    def _normalize(self, try_divide: bool = True):
        num, den = self.num, self.den
        table = num.table
        if num.is_zero():
            self.num = num
            self.den = MultiPoly.constant(table, 1)
            return
        if den.is_constant():
            c = den.constant_value()
            self.num = num.scale(Fraction(1) / c) if c != 1 else num
            self.den = MultiPoly.constant(table, 1)
            return
        mono = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
        if any(mono):
            num = num.divide_monomial(mono)
            den = den.divide_monomial(mono)
        k = den.integer_normalizer()
        if den.leading_term()[1] * k < 0:
            k = -k
        if k != 1:
            num = num.scale(k)
            den = den.scale(k)
        if try_divide and not den.is_constant():
            q = num.divexact(den)
            if q is not None:
                num = q
                den = MultiPoly.constant(table, 1)
        self.num = num
        self.den = den

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        if self.num.is_zero():
            return True
        if self.den.is_constant():
            return self.num.is_constant()
        return self.num.divexact(self.den) is not None and self.num.divexact(self.den).is_constant()

    def constant_value(self):
        if self.num.is_zero():
            return 0
        if self.den.is_constant():
            return _norm_coeff(Fraction(self.num.constant_value()) / self.den.constant_value())
        q = self.num.divexact(self.den)
        if q is None or not q.is_constant():
            raise ValueError("rational function is not constant")
        return q.constant_value()

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(self.table, other)
        return NotImplemented

    def _aligned(self, other: "RatFunc"):
        if self.table is other.table:
            return self, other
        t = common_table(self.table, other.table)
        return self.with_table(t), other.with_table(t)

    def with_table(self, table: VarTable) -> "RatFunc":
        if table is self.table:
            return self
        return RatFunc._make(self.num.with_table(table), self.den.with_table(table))

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        if a.num.is_zero():
            return b
        if b.num.is_zero():
            return a
        if a.den == b.den:
            if a.den.is_constant():
                return RatFunc._make(a.num + b.num, a.den)
            return RatFunc(a.num + b.num, a.den)
        if a.den.is_constant():
            return RatFunc(a.num * b.den + b.num, b.den, normalize=True)
        if b.den.is_constant():
            return RatFunc(a.num + b.num * a.den, a.den, normalize=True)
        q = a.den.divexact(b.den)
        if q is not None:
            return RatFunc(a.num + b.num * q, a.den)
        q = b.den.divexact(a.den)
        if q is not None:
            return RatFunc(a.num * q + b.num, b.den)
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc.constant(self.table, 0)
            return RatFunc._make(self.num.scale(other), self.den)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        if a.num.is_zero() or b.num.is_zero():
            return RatFunc.constant(a.table, 0)
        n1, d1, n2, d2 = a.num, a.den, b.num, b.den
        if d1.is_constant() and d2.is_constant():
            return RatFunc._make(n1 * n2, d1)
        if not d2.is_constant():
            q = n1.divexact(d2)
            if q is not None:
                n1, d2 = q, MultiPoly.constant(q.table, 1)
        if not d1.is_constant():
            q = n2.divexact(d1)
            if q is not None:
                n2, d1 = q, MultiPoly.constant(q.table, 1)
        r = RatFunc._make(n1 * n2, d1 * d2)
        r._normalize(try_divide=not (d1.is_constant() or d2.is_constant()))
        return r

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        r = RatFunc._make(self.den, self.num)
        r._normalize(try_divide=False)
        return r

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc._make(self.num.scale(Fraction(1) / Fraction(other)), self.den)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("integer exponents only")
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._make(self.num ** e, self.den ** e)

    def diff(self, name: str) -> "RatFunc":
        """Partial derivative by the quotient rule."""
        if isinstance(name, str) and name not in self.table and not _NAME_RE.match(name):
            raise KeyError(f"unknown variable {name!r}")
        if isinstance(name, str) and name not in self.table:
            raise KeyError(f"unknown variable {name!r}")
        dn = self.num.diff(name)
        if self.den.is_constant():
            return RatFunc._make(dn, self.den)
        dd = self.den.diff(name)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def __eq__(self, other):
        return ratfunc_equal_loose(self, other)

    def __hash__(self):
        raise TypeError("RatFunc is unhashable; compare with ratfunc_equal")

    def evaluate(self, point: Mapping[str, object]):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return _norm_coeff(Fraction(self.num.evaluate(point)) / d)

    def variables(self) -> list[str]:
        used = set(self.num.variables()) | set(self.den.variables())
        return [n for n in self.table.names if n in used]

    def __str__(self):
        return ratfunc_to_str(self)

    def __repr__(self):
        return f"RatFunc({ratfunc_to_str(self)!r})"


def ratfunc_to_str(f: RatFunc) -> str:
    num = poly_to_str(f.num)
    if f.den.is_constant() and f.den.constant_value() == 1:
        return num
    den = poly_to_str(f.den)
    if len(f.num.terms) > 1:
        num = f"({num})"
    if len(f.den.terms) > 1 or "*" in den or "^" in den:
        den = f"({den})"
    return f"{num}/{den}"


def ratfunc_equal(f: RatFunc, g: RatFunc) -> bool:
    """Exact equality by cross-multiplication; tables must be compatible."""
    if not isinstance(f, RatFunc) or not isinstance(g, RatFunc):
        raise TypeError("ratfunc_equal compares RatFunc values")
    common_table(f.table, g.table)
    f, g = f._aligned(g)
    if f.den == g.den:
        return f.num == g.num
    return f.num * g.den == g.num * f.den


def ratfunc_equal_loose(f, g) -> bool:
    if isinstance(g, (int, Fraction, MultiPoly)):
        g = f._lift(g)
    if not isinstance(g, RatFunc):
        return NotImplemented
    try:
        return ratfunc_equal(f, g)
    except TableMismatch:
        t = f.table.extend(g.table.names)
        return ratfunc_equal(f.with_table(t), g.with_table(t))


def partial_derivative(f: RatFunc, v: str) -> RatFunc:
    """Quotient-rule partial derivative of ``f`` with respect to ``v``."""
    if v not in f.table:
        raise KeyError(f"unknown variable {v!r}")
    return f.diff(v)


def substitute(f, values: Mapping[str, RatFunc], table: VarTable | None = None) -> RatFunc:
    """Replace variables of ``f`` (MultiPoly or RatFunc) by rational functions.

    Variables not in ``values`` are carried over as themselves into ``table``
    (default: the table of the first substituted value, or ``f``'s table).
    """
    if isinstance(f, RatFunc):
        num = substitute(f.num, values, table)
        if f.den.is_constant():
            return num * Fraction(1, 1) / f.den.constant_value()
        den = substitute(f.den, values, table)
        return num / den
    p: MultiPoly = f
    if table is None:
        table = next((v.table for v in values.values() if isinstance(v, (RatFunc, MultiPoly))), p.table)
    src = p.table
    images: list = []
    all_poly = True
    for n in src.names:
        if n in values:
            v = values[n]
            if isinstance(v, (int, Fraction)):
                v = RatFunc.constant(table, v)
            elif isinstance(v, MultiPoly):
                v = RatFunc.from_poly(v)
            v = v.with_table(common_table(v.table, table)) if v.table is not table else v
            images.append(v)
            if not v.den.is_constant() or v.den.constant_value() != 1:
                all_poly = False
        else:
            if n in table:
                images.append(RatFunc.var(table, n))
            else:
                images.append(None)
    used = [False] * len(src)
    for m in p.terms:
        for i, k in enumerate(m):
            if k:
                used[i] = True
    for i, u in enumerate(used):
        if u and images[i] is None:
            raise TableMismatch(f"variable {src.names[i]!r} has no image in the target table")
    target = table
    for i, u in enumerate(used):
        if u:
            target = common_table(target, images[i].table)
    if all_poly:
        return RatFunc.from_poly(_subst_poly(p, [im.num.with_table(target) if im is not None else None
                                                 for im in images], target))
    # general case: accumulate over a common denominator of the images
    power_cache: dict = {}

    def power(i, k):
        key = (i, k)
        r = power_cache.get(key)
        if r is None:
            r = images[i].with_table(target) ** k
            power_cache[key] = r
        return r

    total = RatFunc.constant(target, 0)
    for m, c in p.terms.items():
        t = RatFunc.constant(target, c)
        for i, k in enumerate(m):
            if k:
                t = t * power(i, k)
        total = total + t
    return total


def _subst_poly(p: MultiPoly, images: Sequence, target: VarTable) -> MultiPoly:
    power_cache: dict = {}

    def power(i, k):
        key = (i, k)
        r = power_cache.get(key)
        if r is None:
            r = images[i] if k == 1 else power(i, k - 1) * images[i]
            power_cache[key] = r
        return r

    # group terms by their exponents in the substituted variables, so shared
    # prefixes of products are formed once
    total_terms: dict = {}
    for m, c in p.terms.items():
        t = MultiPoly.constant(target, c)
        for i, k in enumerate(m):
            if k:
                t = t * power(i, k)
        for mm, cc in t.terms.items():
            v = total_terms.get(mm, 0) + cc
            if v:
                total_terms[mm] = _norm_coeff(v)
            else:
                total_terms.pop(mm, None)
    return MultiPoly._raw(target, total_terms)


class ParseError(ValueError):
    """Syntax error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class UnknownVariable(KeyError):
    def __init__(self, name: str, line: int = 0, column: int = 0):
        super().__init__(name)
        self.name = name
        self.line = line
        self.column = column

    def __str__(self):
        return f"unknown variable {self.name!r}"


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<jet>[A-Za-z]\s*\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\])
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        elif kind == "jet":
            raw = re.sub(r"\s+", "", m.group())
            tokens.append(("name", raw, line, col))
        else:
            tokens.append((kind, m.group(), line, col))
        pos = m.end()
    tokens.append(("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, table: VarTable):
        self.tokens = _tokenize(text)
        self.i = 0
        self.table = table

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], tok[3])

    def expect(self, value):
        tok = self.peek()
        if tok[1] != value or tok[0] not in ("op",):
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}")
        return self.take()

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        r = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected token {tok[1]!r}")
        return r

    def expr(self) -> RatFunc:
        r = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            r = r + rhs if op == "+" else r - rhs
        return r

    def term(self) -> RatFunc:
        r = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                r = r * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", tok[2], tok[3])
                r = r / rhs
        return r

    def unary(self) -> RatFunc:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("-", "+"):
            self.take()
            r = self.unary()
            return -r if tok[1] == "-" else r
        return self.factor()

    def factor(self) -> RatFunc:
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in ("-", "+"):
                sign = -1 if self.take()[1] == "-" else 1
            tok = self.peek()
            if tok[0] != "int":
                raise self.error("exponent must be an integer")
            self.take()
            e = sign * int(tok[1])
            if abs(e) > MAX_EXPONENT:
                raise ParseError("exponent overflow", tok[2], tok[3])
            if e < 0 and base.is_zero():
                raise ParseError("division by zero", tok[2], tok[3])
            base = base ** e
        return base

    def base(self) -> RatFunc:
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "int":
            return RatFunc.constant(self.table, int(val))
        if kind == "name":
            if val not in self.table:
                raise UnknownVariable(val, tok[2], tok[3])
            return RatFunc.var(self.table, val)
        if kind == "op" and val == "(":
            r = self.expr()
            self.expect(")")
            return r
        self.i -= 1
        raise self.error(f"unexpected token {val or 'end of input'!r}")


def parse_expression(text: str, table: VarTable) -> RatFunc:
    """Parse ``text`` into a :class:`RatFunc` over ``table``.

    Raises :class:`ParseError` (with line/column) on malformed input and
    :class:`UnknownVariable` for names outside the table.
    """
    return _Parser(text, table).parse()


def expression_names(text: str) -> list[str]:
    """Variable names occurring in ``text``, in order of first appearance."""
    seen = []
    for kind, val, _, _ in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen

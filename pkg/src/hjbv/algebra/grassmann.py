"""Grassmann algebra over a context's odd generators, with Poly coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .scalars import GaussRational
from .series import HbarSeries
from .poly import Context, Poly

# odd monomial: strictly increasing tuple of odd generator indices
OddMonomial = tuple[int, ...]


def _merge_sign(a: OddMonomial, b: OddMonomial) -> tuple[Optional[OddMonomial], int]:
    """Concatenate two ordered odd monomials; (None, 0) on a repeated index."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    out: list[int] = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None, 0
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] hops over the remaining len(a)-i generators of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


class Grassmann:
    """Sum of odd monomials with polynomial (even) coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Optional[Mapping[OddMonomial, Poly]] = None):
        clean: dict[OddMonomial, Poly] = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    clean[m] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Grassmann is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: Context) -> "Grassmann":
        return Grassmann(ctx, {})

    @staticmethod
    def one(ctx: Context) -> "Grassmann":
        return Grassmann(ctx, {(): Poly.one(ctx)})

    @staticmethod
    def from_poly(p: Poly) -> "Grassmann":
        return Grassmann(p.ctx, {(): p})

    @staticmethod
    def coerce(ctx: Context, x) -> "Grassmann":
        if isinstance(x, Grassmann):
            if x.ctx is not ctx:
                raise ValueError("values from different contexts")
            return x
        if isinstance(x, Poly):
            if x.ctx is not ctx:
                raise ValueError("values from different contexts")
            return Grassmann.from_poly(x)
        if isinstance(x, (int, Fraction, GaussRational, HbarSeries)):
            return Grassmann(ctx, {(): Poly.const(ctx, x)})
        raise TypeError(f"cannot coerce {type(x).__name__} to Grassmann")

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        other = Grassmann.coerce(self.ctx, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Grassmann(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Grassmann(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Grassmann.coerce(self.ctx, other))

    def __rsub__(self, other):
        return Grassmann.coerce(self.ctx, other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational, HbarSeries, Poly)):
            c0 = other if isinstance(other, Poly) else Poly.const(self.ctx, other)
            return Grassmann(self.ctx, {m: c * c0 for m, c in self.terms.items()})
        other = Grassmann.coerce(self.ctx, other)
        out: dict[OddMonomial, Poly] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, sign = _merge_sign(m1, m2)
                if m is None:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return Grassmann(self.ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational, HbarSeries, Poly)):
            return self.__mul__(other)
        return NotImplemented

    # -- odd calculus ------------------------------------------------------

    def left_deriv(self, name: str) -> "Grassmann":
        """Left derivative with respect to an odd generator."""
        idx = self.ctx.odd_index(name)
        out: dict[OddMonomial, Poly] = {}
        for m, c in self.terms.items():
            if idx not in m:
                continue
            pos = m.index(idx)
            rest = m[:pos] + m[pos + 1:]
            s = c if pos % 2 == 0 else -c
            prev = out.get(rest)
            s = s if prev is None else prev + s
            if s.is_zero():
                out.pop(rest, None)
            else:
                out[rest] = s
        return Grassmann(self.ctx, out)

    def subs_odd(self, name: str, value: "Grassmann") -> "Grassmann":
        """Substitute an odd generator by an odd element (parity preserved)."""
        idx = self.ctx.odd_index(name)
        out = Grassmann.zero(self.ctx)
        for m, c in self.terms.items():
            if idx not in m:
                out = out + Grassmann(self.ctx, {m: c})
                continue
            factor = Grassmann(self.ctx, {(): c})
            for i in m:
                g = value if i == idx else Grassmann(self.ctx, {(i,): Poly.one(self.ctx)})
                factor = factor * g
            out = out + factor
        return out

    def subs_even(self, values: Mapping[str, object]) -> "Grassmann":
        return Grassmann(self.ctx, {m: c.subs(values) for m, c in self.terms.items()})

    def diff_even(self, name: str) -> "Grassmann":
        return Grassmann(self.ctx, {m: c.diff(name) for m, c in self.terms.items()})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        try:
            other = Grassmann.coerce(self.ctx, other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous elements, None for mixed or zero."""
        parities = {len(m) % 2 for m in self.terms}
        if len(parities) == 1:
            return parities.pop()
        return None

    def body(self) -> Poly:
        """Coefficient of the empty odd monomial."""
        return self.terms.get((), Poly.zero(self.ctx))

    def coefficient_of(self, mon: OddMonomial) -> Poly:
        return self.terms.get(tuple(mon), Poly.zero(self.ctx))

    def odd_vars_used(self) -> set[str]:
        names = self.ctx.odd_names
        return {names[i] for m in self.terms for i in m}

    def max_odd_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def truncate_hbar(self, order) -> "Grassmann":
        return Grassmann(self.ctx, {m: c.truncate_hbar(order) for m, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.ctx.odd_names
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mon = "*".join(names[i] for i in m)
            cs = repr(c)
            if " + " in cs:
                cs = f"({cs})"
            parts.append(f"{cs}*{mon}" if mon else cs)
        return " + ".join(parts)

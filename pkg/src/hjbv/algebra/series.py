"""Truncated formal Laurent series in hbar with half-integer exponents."""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Optional, Union

from .scalars import GaussRational, GR_ONE

Exponent = Fraction


def default_truncation() -> Fraction:
    """Truncation order for hbar series; HJBV_TRUNCATION overrides."""
    raw = os.environ.get("HJBV_TRUNCATION")
    if raw is None:
        return Fraction(6)
    return Fraction(raw)


def _half_int(x) -> Fraction:
    x = Fraction(x)
    if x.denominator not in (1, 2):
        raise ValueError(f"hbar exponent must be a half-integer, got {x}")
    return x


def _min_order(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class HbarSeries:
    """Finite sum  sum_e  c_e hbar^e  truncated above `order`.

    `order=None` means no truncation (exact polynomial data).  Negative
    exponents are allowed; by convention they appear only in normalization
    prefactors.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs=None, order: Optional[Fraction] = "default"):
        if order == "default":
            order = default_truncation()
        if order is not None:
            order = _half_int(order)
        clean: dict[Fraction, GaussRational] = {}
        if coeffs:
            for e, c in coeffs.items():
                e = _half_int(e)
                c = GaussRational.coerce(c)
                if not c:
                    continue
                if order is not None and e > order:
                    continue
                clean[e] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("HbarSeries is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c, order="default") -> "HbarSeries":
        return HbarSeries({Fraction(0): GaussRational.coerce(c)}, order)

    @staticmethod
    def zero(order="default") -> "HbarSeries":
        return HbarSeries({}, order)

    @staticmethod
    def one(order="default") -> "HbarSeries":
        return HbarSeries.const(GR_ONE, order)

    @staticmethod
    def hbar_power(e, c=GR_ONE, order="default") -> "HbarSeries":
        return HbarSeries({_half_int(e): GaussRational.coerce(c)}, order)

    @staticmethod
    def coerce(x, order="default") -> "HbarSeries":
        if isinstance(x, HbarSeries):
            return x
        if isinstance(x, (int, Fraction, GaussRational)):
            return HbarSeries.const(x, order)
        raise TypeError(f"cannot coerce {type(x).__name__} to HbarSeries")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = HbarSeries.coerce(other, self.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, None)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return HbarSeries(out, _min_order(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return HbarSeries({e: -c for e, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-HbarSeries.coerce(other, self.order))

    def __rsub__(self, other):
        return HbarSeries.coerce(other, self.order) - self

    def __mul__(self, other):
        other = HbarSeries.coerce(other, self.order)
        order = _min_order(self.order, other.order)
        out: dict[Fraction, GaussRational] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if order is not None and e > order:
                    continue
                c = c1 * c2
                s = out.get(e, None)
                s = c if s is None else s + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return HbarSeries(out, order)

    __rmul__ = __mul__

    def divide_monomial(self, c, e=0) -> "HbarSeries":
        """Exact division by c * hbar^e (c a nonzero Gaussian rational)."""
        c = GaussRational.coerce(c)
        if not c:
            raise ZeroDivisionError("division by zero monomial")
        e = _half_int(e)
        order = None if self.order is None else self.order - e
        return HbarSeries({k - e: v / c for k, v in self.coeffs.items()}, order)

    def truncate(self, order) -> "HbarSeries":
        return HbarSeries(self.coeffs, order)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def constant(self) -> GaussRational:
        """Coefficient of hbar^0."""
        from .scalars import GR_ZERO
        return self.coeffs.get(Fraction(0), GR_ZERO)

    def is_constant(self) -> bool:
        return all(e == 0 for e in self.coeffs)

    def min_exponent(self) -> Optional[Fraction]:
        return min(self.coeffs) if self.coeffs else None

    def leading(self) -> tuple[Fraction, GaussRational]:
        """(lowest exponent, its coefficient); series must be nonzero."""
        e = min(self.coeffs)
        return e, self.coeffs[e]

    def __eq__(self, other):
        try:
            other = HbarSeries.coerce(other, self.order)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def value(self, hbar: float) -> complex:
        return sum((complex(c) * hbar ** float(e)
                    for e, c in self.coeffs.items()), complex(0))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(repr(c))
            else:
                parts.append(f"{c!r}*hbar^{e}")
        return " + ".join(parts)

"""Exact scalars: Gaussian rationals and composite normalization factors."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

RationalLike = Union[int, Fraction]


class GaussRational:
    """Element of Q[i] with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @staticmethod
    def coerce(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRational")

    def __add__(self, other):
        other = GaussRational.coerce(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussRational.coerce(other)
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussRational.coerce(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRational.coerce(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussRational")
        return self * GaussRational(other.re / n, -other.im / n)

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return GaussRational(1) / self ** (-k)
        out = GaussRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        try:
            other = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


GR_ZERO = GaussRational(0)
GR_ONE = GaussRational(1)
GR_I = GaussRational(0, 1)


def _square_split(n: int) -> tuple[int, int]:
    """Write positive n = s^2 * r with r squarefree; return (s, r)."""
    assert n > 0
    s, r = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            m = 0
            while n % d == 0:
                n //= d
                m += 1
            s *= d ** (m // 2)
            if m % 2:
                r *= d
        d += 1 if d == 2 else 2
    r *= n
    # n reduced to 1 or a prime at this point
    root = isqrt(r)
    if root * root == r:
        # only possible if the residual prime check above missed nothing
        s *= root
        r = 1
    return s, r


class Scale:
    """Normalization factor  coef * sqrt(rad) * (2 pi)^twopi * hbar^hbar_exp.

    coef lies in Q[i], rad is a positive rational (normalized to a squarefree
    positive integer), and the two exponents are half-integers.  Eighth roots
    of unity embed exactly through e^{i pi/4} = (1+i) sqrt(1/2), so stationary
    phase factors e^{i pi sgn/4} need no extra field.
    """

    __slots__ = ("coef", "rad", "twopi", "hbar")

    def __init__(self, coef=GR_ONE, rad: RationalLike = 1,
                 twopi: RationalLike = 0, hbar: RationalLike = 0):
        coef = GaussRational.coerce(coef)
        rad = Fraction(rad)
        if rad <= 0:
            raise ValueError("radicand must be positive")
        twopi = Fraction(twopi)
        hbar = Fraction(hbar)
        if twopi.denominator not in (1, 2) or hbar.denominator not in (1, 2):
            raise ValueError("exponents must be half-integers")
        # sqrt(p/q) = sqrt(p q)/q
        if rad.denominator != 1:
            coef = coef * Fraction(1, rad.denominator)
            rad = Fraction(rad.numerator * rad.denominator)
        s, r = _square_split(rad.numerator)
        coef = coef * s
        if not coef:
            r = 1
            twopi = hbar = Fraction(0)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "rad", Fraction(r))
        object.__setattr__(self, "twopi", twopi)
        object.__setattr__(self, "hbar", hbar)

    def __setattr__(self, name, value):
        raise AttributeError("Scale is immutable")

    @staticmethod
    def one() -> "Scale":
        return Scale()

    @staticmethod
    def zero() -> "Scale":
        return Scale(GR_ZERO)

    @staticmethod
    def of(coef) -> "Scale":
        return Scale(GaussRational.coerce(coef))

    @staticmethod
    def sqrt_of(x: RationalLike, twopi: RationalLike = 0,
                hbar: RationalLike = 0) -> "Scale":
        """sqrt(x) * (2 pi)^twopi * hbar^hbar for positive rational x."""
        return Scale(GR_ONE, Fraction(x), twopi, hbar)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Scale.of(other)
        if not isinstance(other, Scale):
            return NotImplemented
        if not self.coef or not other.coef:
            return Scale.zero()
        return Scale(self.coef * other.coef, self.rad * other.rad,
                     self.twopi + other.twopi, self.hbar + other.hbar)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Scale.of(other)
        return self * other.inverse()

    def inverse(self) -> "Scale":
        if not self.coef:
            raise ZeroDivisionError("zero Scale")
        # 1/sqrt(r) = sqrt(r)/r
        return Scale(GR_ONE / self.coef / self.rad, self.rad,
                     -self.twopi, -self.hbar)

    def __neg__(self):
        return Scale(-self.coef, self.rad, self.twopi, self.hbar)

    def times_eighth_root(self, j: int) -> "Scale":
        """Multiply by e^{i j pi/4}."""
        j %= 8
        out = self
        if j % 2:
            out = out * Scale(GR_ONE + GR_I, Fraction(1, 2))
            j -= 1
        return out * Scale.of(GR_I ** (j // 2))

    def is_zero(self) -> bool:
        return not self.coef

    def modulus_phase(self) -> tuple["Scale", "Scale"]:
        """Split into (modulus, unit phase) with modulus * phase == self."""
        if not self.coef:
            return Scale.zero(), Scale.one()
        n = self.coef.norm_sq()
        modulus = Scale(GR_ONE, self.rad * n, self.twopi, self.hbar)
        phase = self / modulus
        return modulus, phase

    def __eq__(self, other):
        if not isinstance(other, Scale):
            return NotImplemented
        return (self.coef == other.coef and self.rad == other.rad
                and self.twopi == other.twopi and self.hbar == other.hbar)

    def __hash__(self):
        return hash((self.coef, self.rad, self.twopi, self.hbar))

    def value(self, hbar: float) -> complex:
        from math import pi, sqrt
        return (complex(self.coef) * sqrt(float(self.rad))
                * (2 * pi) ** float(self.twopi) * hbar ** float(self.hbar))

    def __repr__(self):
        parts = [repr(self.coef)]
        if self.rad != 1:
            parts.append(f"sqrt({self.rad})")
        if self.twopi:
            parts.append(f"(2pi)^{self.twopi}")
        if self.hbar:
            parts.append(f"hbar^{self.hbar}")
        return "*".join(parts)

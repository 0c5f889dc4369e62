"""Multivariate polynomials over truncated hbar series, on a shared registry."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .scalars import GaussRational, GR_ONE
from .series import HbarSeries

# monomial: tuple of (generator index, positive exponent), sorted by index
Monomial = tuple[tuple[int, int], ...]

ScalarLike = Union[int, Fraction, GaussRational, HbarSeries]


class Context:
    """Registry of named generators shared by all values of one computation.

    Even generators feed Poly, odd generators feed Grassmann.  Registration
    order fixes the monomial order (lexicographic) and the sign conventions
    of the odd sector, so values built in one context stay comparable.
    """

    def __init__(self):
        self.even_names: list[str] = []
        self.odd_names: list[str] = []
        self._even_index: dict[str, int] = {}
        self._odd_index: dict[str, int] = {}

    def even(self, name: str) -> int:
        """Register (or look up) an even generator; returns its index."""
        if name in self._odd_index:
            raise ValueError(f"{name!r} is already an odd generator")
        idx = self._even_index.get(name)
        if idx is None:
            idx = len(self.even_names)
            self.even_names.append(name)
            self._even_index[name] = idx
        return idx

    def odd(self, name: str) -> int:
        if name in self._even_index:
            raise ValueError(f"{name!r} is already an even generator")
        idx = self._odd_index.get(name)
        if idx is None:
            idx = len(self.odd_names)
            self.odd_names.append(name)
            self._odd_index[name] = idx
        return idx

    def even_index(self, name: str) -> int:
        try:
            return self._even_index[name]
        except KeyError:
            raise KeyError(f"unknown even generator {name!r}") from None

    def odd_index(self, name: str) -> int:
        try:
            return self._odd_index[name]
        except KeyError:
            raise KeyError(f"unknown odd generator {name!r}") from None

    def has_even(self, name: str) -> bool:
        return name in self._even_index

    def has_odd(self, name: str) -> bool:
        return name in self._odd_index

    def var(self, name: str) -> "Poly":
        idx = self.even(name)
        return Poly(self, {((idx, 1),): HbarSeries.one()})

    def vars(self, *names: str) -> list["Poly"]:
        return [self.var(n) for n in names]

    def odd_var(self, name: str):
        from .grassmann import Grassmann
        idx = self.odd(name)
        return Grassmann(self, {(idx,): Poly.one(self)})

    def poly(self, x) -> "Poly":
        return Poly.coerce(self, x)


def _mon_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for i, e in b:
        out[i] = out.get(i, 0) + e
    return tuple(sorted(out.items()))


class Poly:
    """Sparse polynomial in a context's even generators over HbarSeries."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Optional[Mapping[Monomial, HbarSeries]] = None):
        clean: dict[Monomial, HbarSeries] = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    clean[m] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: Context) -> "Poly":
        return Poly(ctx, {})

    @staticmethod
    def one(ctx: Context) -> "Poly":
        return Poly(ctx, {(): HbarSeries.one()})

    @staticmethod
    def const(ctx: Context, c: ScalarLike) -> "Poly":
        return Poly(ctx, {(): HbarSeries.coerce(c)})

    @staticmethod
    def coerce(ctx: Context, x) -> "Poly":
        if isinstance(x, Poly):
            if x.ctx is not ctx:
                raise ValueError("polynomials from different contexts")
            return x
        if isinstance(x, (int, Fraction, GaussRational, HbarSeries)):
            return Poly.const(ctx, x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ctx is not other.ctx:
            raise ValueError("polynomials from different contexts")

    def __add__(self, other):
        other = Poly.coerce(self.ctx, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Poly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.coerce(self.ctx, other))

    def __rsub__(self, other):
        return Poly.coerce(self.ctx, other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational, HbarSeries)):
            c0 = HbarSeries.coerce(other)
            return Poly(self.ctx, {m: c * c0 for m, c in self.terms.items()})
        other = Poly.coerce(self.ctx, other)
        out: dict[Monomial, HbarSeries] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mon_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return Poly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return self._inverse() ** (-k)
        out = Poly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _inverse(self) -> "Poly":
        """Inverse of a single-term polynomial c * hbar^e * monomial."""
        if len(self.terms) != 1:
            raise ValueError("only single-term polynomials are invertible")
        (m, s), = self.terms.items()
        e, c = s.leading()
        if len(s.coeffs) != 1:
            raise ValueError("coefficient is not a single hbar power")
        inv = HbarSeries.one().divide_monomial(c, e)
        return Poly(self.ctx, {tuple((i, -x) for i, x in m): inv})

    def divide_scalar(self, c, hbar_exp=0) -> "Poly":
        """Exact division by c * hbar^hbar_exp."""
        return Poly(self.ctx, {m: s.divide_monomial(c, hbar_exp)
                               for m, s in self.terms.items()})

    # -- calculus ----------------------------------------------------------

    def diff(self, name: str) -> "Poly":
        idx = self.ctx.even_index(name)
        out: dict[Monomial, HbarSeries] = {}
        for m, c in self.terms.items():
            for j, (i, e) in enumerate(m):
                if i == idx:
                    rest = m[:j] + (((i, e - 1),) if e != 1 else ()) + m[j + 1:]
                    rest = tuple(sorted(rest))
                    s = c * e
                    prev = out.get(rest)
                    s = s if prev is None else prev + s
                    if s.is_zero():
                        out.pop(rest, None)
                    else:
                        out[rest] = s
                    break
        return Poly(self.ctx, out)

    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Simultaneous substitution name -> Poly/scalar."""
        repl = {self.ctx.even_index(n): Poly.coerce(self.ctx, v)
                for n, v in values.items()}
        out = Poly.zero(self.ctx)
        for m, c in self.terms.items():
            term = Poly(self.ctx, {(): c})
            plain: list[tuple[int, int]] = []
            for i, e in m:
                if i in repl:
                    term = term * repl[i] ** e
                else:
                    plain.append((i, e))
            if plain:
                term = term * Poly(self.ctx, {tuple(plain): HbarSeries.one()})
            out = out + term
        return out

    # -- structure queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        try:
            other = Poly.coerce(self.ctx, other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def degree_in(self, names: Iterable[str]) -> int:
        idxs = {self.ctx.even_index(n) for n in names}
        best = 0
        for m in self.terms:
            best = max(best, sum(e for i, e in m if i in idxs))
        return best

    def vars_used(self) -> set[str]:
        names = self.ctx.even_names
        return {names[i] for m in self.terms for i, _ in m}

    def constant_series(self) -> HbarSeries:
        return self.terms.get((), HbarSeries.zero())

    def coefficient(self, name: str, power: int = 1) -> "Poly":
        """Coefficient of name^power (collecting over the other generators)."""
        idx = self.ctx.even_index(name)
        out: dict[Monomial, HbarSeries] = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(idx, 0) == power:
                d.pop(idx, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(self.ctx, out)

    def truncate_degree(self, cap: int, names: Optional[Iterable[str]] = None) -> "Poly":
        """Drop monomials of degree above cap (in the named vars, or total)."""
        idxs = None if names is None else {self.ctx.even_index(n) for n in names}
        out = {}
        for m, c in self.terms.items():
            deg = sum(e for i, e in m if idxs is None or i in idxs)
            if deg <= cap:
                out[m] = c
        return Poly(self.ctx, out)

    def truncate_hbar(self, order) -> "Poly":
        return Poly(self.ctx, {m: c.truncate(order) for m, c in self.terms.items()})

    def lex_leading(self) -> tuple[Monomial, HbarSeries]:
        """Leading term in the registration-order lexicographic ordering."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        n = len(self.ctx.even_names)

        def dense(m: Monomial):
            v = [0] * n
            for i, e in m:
                v[i] = e
            return tuple(v)

        m = max(self.terms, key=dense)
        return m, self.terms[m]

    def as_affine(self) -> tuple[HbarSeries, dict[int, HbarSeries]]:
        """Split an affine polynomial into (constant, {gen index: coefficient})."""
        const = HbarSeries.zero()
        lin: dict[int, HbarSeries] = {}
        for m, c in self.terms.items():
            if m == ():
                const = c
            elif len(m) == 1 and m[0][1] == 1:
                lin[m[0][0]] = c
            else:
                raise ValueError("polynomial is not affine")
        return const, lin

    def exp_nilpotent(self, cap: int, names: Optional[Iterable[str]] = None) -> "Poly":
        """exp of a polynomial, truncated at degree cap in the named vars.

        Every monomial must have positive degree in the truncation variables,
        so the series ends by itself.
        """
        idxs = None if names is None else {self.ctx.even_index(n) for n in names}
        for m in self.terms:
            deg = sum(e for i, e in m if idxs is None or i in idxs)
            if deg == 0:
                raise ValueError("exp_nilpotent needs zero constant term")
        out = Poly.one(self.ctx)
        power = Poly.one(self.ctx)
        fact = Fraction(1)
        for j in range(1, cap + 1):
            power = (power * self).truncate_degree(cap, names)
            if power.is_zero():
                break
            fact = fact * j
            out = out + power * (Fraction(1) / fact)
        return out

    # -- numerics ----------------------------------------------------------

    def evaluate(self, values: Mapping[str, complex], hbar: Optional[float] = None) -> complex:
        names = self.ctx.even_names
        total = complex(0)
        for m, c in self.terms.items():
            if hbar is None:
                if not c.is_constant():
                    raise ValueError("hbar value required to evaluate this polynomial")
                factor = complex(c.constant())
            else:
                factor = c.value(hbar)
            for i, e in m:
                name = names[i]
                if name not in values:
                    raise KeyError(f"no value supplied for {name!r}")
                factor *= complex(values[name]) ** e
            total += factor
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.ctx.even_names
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mon = "*".join(f"{names[i]}^{e}" if e > 1 else names[i] for i, e in m)
            cs = repr(c)
            if "+" in cs and not (cs.startswith("(") and cs.endswith(")")):
                cs = f"({cs})"
            parts.append(f"{cs}*{mon}" if mon else cs)
        return " + ".join(parts)

"""Exponential states: norm * exp((i/hbar) S) * prefactor * delta factors."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .scalars import GaussRational, Scale, GR_ONE
from .series import HbarSeries
from .poly import Context, Poly
from .grassmann import Grassmann


class DuplicateDeltaError(ValueError):
    """Two even delta factors share a direction; the product is singular."""


def _affine_row(p: Poly) -> dict[Optional[int], GaussRational]:
    """Affine delta argument as {generator index: coef, None: constant}.

    Coefficients must be hbar-free; delta arguments always are here.
    """
    const, lin = p.as_affine()
    row: dict[Optional[int], GaussRational] = {}
    if not const.is_zero():
        if not const.is_constant():
            raise ValueError("delta argument has an hbar-dependent constant")
        row[None] = const.constant()
    for idx, c in lin.items():
        if not c.is_constant():
            raise ValueError("delta argument has hbar-dependent coefficients")
        row[idx] = c.constant()
    return row


class ExpState:
    """norm * e^{(i/hbar) phase} * prefactor * prod delta(even) * prod delta(odd).

    The phase is even; odd delta factors are Berezin deltas, i.e. the odd
    linear elements themselves.  Equality compares canonical forms: the even
    delta system is row reduced (with the norm tracking scalings), the
    resulting constraints are substituted into phase and prefactor, odd
    deltas are folded into the prefactor, and the prefactor is normalized to
    a unit leading coefficient.
    """

    __slots__ = ("ctx", "norm", "phase", "prefactor", "even_deltas", "odd_deltas")

    def __init__(self, ctx: Context, norm: Scale = None, phase: Poly = None,
                 prefactor: Grassmann = None,
                 even_deltas: Sequence[Poly] = (),
                 odd_deltas: Sequence[Grassmann] = ()):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "norm", Scale.one() if norm is None else norm)
        object.__setattr__(self, "phase", Poly.zero(ctx) if phase is None else phase)
        object.__setattr__(self, "prefactor",
                           Grassmann.one(ctx) if prefactor is None else prefactor)
        object.__setattr__(self, "even_deltas", tuple(even_deltas))
        object.__setattr__(self, "odd_deltas", tuple(odd_deltas))
        if self.phase.ctx is not ctx or self.prefactor.ctx is not ctx:
            raise ValueError("state components from different contexts")

    def __setattr__(self, name, value):
        raise AttributeError("ExpState is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def unit(ctx: Context) -> "ExpState":
        return ExpState(ctx)

    @staticmethod
    def zero(ctx: Context) -> "ExpState":
        return ExpState(ctx, norm=Scale.zero())

    @staticmethod
    def from_phase(phase: Poly) -> "ExpState":
        """e^{(i/hbar) phase}."""
        return ExpState(phase.ctx, phase=phase)

    # -- assembly ----------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, ExpState):
            if other.ctx is not self.ctx:
                raise ValueError("states from different contexts")
            return ExpState(self.ctx,
                            norm=self.norm * other.norm,
                            phase=self.phase + other.phase,
                            prefactor=self.prefactor * other.prefactor,
                            even_deltas=self.even_deltas + other.even_deltas,
                            odd_deltas=self.odd_deltas + other.odd_deltas)
        if isinstance(other, Scale):
            return self.times_norm(other)
        return NotImplemented

    def times_norm(self, s: Scale) -> "ExpState":
        return self._replace(norm=self.norm * s)

    def times_phase(self, p: Poly) -> "ExpState":
        return self._replace(phase=self.phase + p)

    def times_prefactor(self, g) -> "ExpState":
        g = Grassmann.coerce(self.ctx, g)
        return self._replace(prefactor=self.prefactor * g)

    def with_even_delta(self, arg: Poly) -> "ExpState":
        return self._replace(even_deltas=self.even_deltas + (arg,))

    def with_odd_delta(self, arg: Grassmann) -> "ExpState":
        return self._replace(odd_deltas=self.odd_deltas + (arg,))

    def _replace(self, **kw) -> "ExpState":
        fields = dict(norm=self.norm, phase=self.phase, prefactor=self.prefactor,
                      even_deltas=self.even_deltas, odd_deltas=self.odd_deltas)
        fields.update(kw)
        return ExpState(self.ctx, **fields)

    def substitute_even(self, values: Mapping[str, object]) -> "ExpState":
        return ExpState(self.ctx,
                        norm=self.norm,
                        phase=self.phase.subs(values),
                        prefactor=self.prefactor.subs_even(values),
                        even_deltas=[d.subs(values) for d in self.even_deltas],
                        odd_deltas=[d.subs_even(values) for d in self.odd_deltas])

    # -- canonical form ----------------------------------------------------

    def canonical(self) -> "ExpState":
        if self.norm.is_zero():
            return ExpState.zero(self.ctx)

        norm = self.norm
        rows = [_affine_row(d) for d in self.even_deltas]

        # row reduce the affine delta system, tracking the norm
        pivots: list[tuple[int, dict]] = []   # (pivot index, row)
        for row in rows:
            row = dict(row)
            for pidx, prow in pivots:
                c = row.get(pidx)
                if c:
                    for k, v in prow.items():
                        s = row.get(k, None)
                        s = -c * v if s is None else s - c * v
                        if s:
                            row[k] = s
                        else:
                            row.pop(k, None)
            support = sorted(k for k in row if k is not None)
            if not support:
                if row.get(None):
                    return ExpState.zero(self.ctx)   # delta of a nonzero constant
                raise DuplicateDeltaError(
                    "dependent even delta directions in one state")
            p = support[0]
            c = row[p]
            if c != GR_ONE:
                row = {k: v / c for k, v in row.items()}
                # delta(c x) = |c|^{-1} delta(x)
                norm = norm * Scale.sqrt_of(c.norm_sq()).inverse()
            # back substitute into earlier pivots
            newpivots = []
            for pidx, prow in pivots:
                cc = prow.get(p)
                if cc:
                    prow = dict(prow)
                    for k, v in row.items():
                        s = prow.get(k, None)
                        s = -cc * v if s is None else s - cc * v
                        if s:
                            prow[k] = s
                        else:
                            prow.pop(k, None)
                newpivots.append((pidx, prow))
            pivots = newpivots
            pivots.append((p, row))

        pivots.sort(key=lambda t: t[0])

        # substitution map: pivot var -> -(rest of its row)
        names = self.ctx.even_names
        subst: dict[str, Poly] = {}
        for pidx, row in pivots:
            expr = Poly.zero(self.ctx)
            for k, v in row.items():
                if k == pidx:
                    continue
                if k is None:
                    expr = expr + Poly.const(self.ctx, -v)
                else:
                    expr = expr + self.ctx.var(names[k]) * (-v)
            subst[names[pidx]] = expr

        phase = self.phase.subs(subst) if subst else self.phase
        prefactor = self.prefactor.subs_even(subst) if subst else self.prefactor
        for d in self.odd_deltas:
            prefactor = prefactor * (d.subs_even(subst) if subst else d)

        if prefactor.is_zero():
            return ExpState.zero(self.ctx)

        # normalize the prefactor's leading coefficient into the norm
        mon = min(prefactor.terms)
        _, series = prefactor.terms[mon].lex_leading()
        e, c = series.leading()
        prefactor = Grassmann(self.ctx, {m: p.divide_scalar(c, e)
                                         for m, p in prefactor.terms.items()})
        norm = norm * Scale(coef=c, hbar=e)

        deltas = []
        for pidx, row in pivots:
            p = Poly.zero(self.ctx)
            for k, v in sorted(row.items(), key=lambda t: (t[0] is None, t[0] or 0)):
                if k is None:
                    p = p + Poly.const(self.ctx, v)
                else:
                    p = p + self.ctx.var(names[k]) * v
            deltas.append(p)

        return ExpState(self.ctx, norm=norm, phase=phase, prefactor=prefactor,
                        even_deltas=deltas, odd_deltas=())

    def is_zero(self) -> bool:
        return self.canonical().norm.is_zero()

    def __eq__(self, other):
        if not isinstance(other, ExpState):
            return NotImplemented
        if other.ctx is not self.ctx:
            return False
        a, b = self.canonical(), other.canonical()
        return (a.norm == b.norm and a.phase == b.phase
                and a.prefactor == b.prefactor
                and list(a.even_deltas) == list(b.even_deltas))

    def __hash__(self):
        c = self.canonical()
        return hash((c.norm, c.phase, c.prefactor, tuple(c.even_deltas)))

    # -- numerics ----------------------------------------------------------

    def value(self, values: Mapping[str, complex], hbar: float) -> complex:
        """Numeric value of the delta-free, purely even part of the state."""
        if self.even_deltas or self.odd_deltas:
            raise ValueError("cannot numerically evaluate a state with deltas")
        from cmath import exp
        body = self.prefactor.body()
        amp = self.norm.value(hbar) * body.evaluate(values, hbar)
        return amp * exp(1j / hbar * self.phase.evaluate(values, hbar))

    def __repr__(self):
        parts = []
        if self.norm != Scale.one():
            parts.append(repr(self.norm))
        if not self.phase.is_zero():
            parts.append(f"exp((i/hbar)*({self.phase!r}))")
        if self.prefactor != Grassmann.one(self.ctx):
            parts.append(f"[{self.prefactor!r}]")
        for d in self.even_deltas:
            parts.append(f"delta({d!r})")
        for d in self.odd_deltas:
            parts.append(f"delta[{d!r}]")
        return " ".join(parts) if parts else "1"

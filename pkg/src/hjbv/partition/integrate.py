"""Exact elimination of boundary and residual directions.

Even integrals are stationary-phase exact: nondegenerate quadratic
directions produce a Fresnel factor (2 pi hbar)^{-1/2} |d|^{-1/2}
e^{i pi sgn(d)/4} per eliminated variable, flat directions produce a
delta factor under the convention delta(y) = (2 pi hbar)^{-1} int dx
e^{(i/hbar) x y}, and a delta factor that already contains an
integration variable is consumed with measure one.  Odd directions are
Berezin integrals acting on the prefactor.
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra import ExpState, Grassmann, Poly, Scale

__all__ = ["exp_odd", "integrate_even", "integrate_odd", "poly_exp"]


def exp_odd(g: Grassmann) -> Grassmann:
    """exp of a nilpotent even Grassmann element (no body allowed)."""
    if not g.body().is_zero():
        raise ValueError("exponent must be pure soul")
    if g.parity() not in (None, 0):
        raise ValueError("exponent must be even")
    ctx = g.ctx
    out = Grassmann.one(ctx)
    cur = Grassmann.one(ctx)
    j = 0
    while True:
        j += 1
        cur = cur * g * Fraction(1, j)
        if cur.is_zero():
            return out
        out = out + cur


def poly_exp(w: Poly, cap: int, names) -> Poly:
    """exp of an even polynomial with no constant term, truncated in names."""
    names = list(names)
    if not w.truncate_degree(0, names).is_zero():
        raise ValueError("exponent needs a vanishing constant term")
    ctx = w.ctx
    out = Poly.one(ctx)
    cur = Poly.one(ctx)
    j = 0
    while True:
        j += 1
        cur = (cur * w * Fraction(1, j)).truncate_degree(cap, names)
        if cur.is_zero():
            return out
        out = out + cur


def _prefactor_even_vars(g: Grassmann) -> set[str]:
    out: set[str] = set()
    for p in g.terms.values():
        out |= p.vars_used()
    return out


def _abs_inverse(c) -> Scale:
    # 1/|c| for a Gauss rational c
    return Scale.sqrt_of(c.norm_sq()).inverse()


def _consume(st: ExpState, name: str):
    """int dx over a delta-bearing direction; None when no delta has x."""
    for pos, d in enumerate(st.even_deltas):
        const, lin = d.as_affine()
        idx = st.ctx.even_index(name)
        coef = lin.get(idx)
        if coef is None or coef.is_zero():
            continue
        if not coef.is_constant():
            raise ValueError("delta argument has an hbar-dependent "
                             "coefficient in " + name)
        c = coef.constant()
        rest = d - st.ctx.var(name) * coef
        sol = rest.divide_scalar(-c)
        deltas = st.even_deltas[:pos] + st.even_deltas[pos + 1:]
        out = ExpState(st.ctx, st.norm * _abs_inverse(c), st.phase,
                       st.prefactor, deltas, st.odd_deltas)
        return out.substitute_even({name: sol})
    return None


def _hessian_entry(S: Poly, na: str, nb: str) -> Fraction:
    h = S.diff(na).diff(nb)
    if h.vars_used():
        raise ValueError("phase is not Gaussian: the second derivative in "
                         f"({na}, {nb}) is not constant")
    cs = h.constant_series()
    if cs.is_zero():
        return Fraction(0)
    if not cs.is_constant():
        raise ValueError("phase has an hbar-dependent quadratic part")
    g = cs.constant()
    if g.im:
        raise ValueError("quadratic part must be real")
    return g.re


def integrate_even(st: ExpState, names) -> ExpState:
    """Eliminate the even directions `names` from the state.

    The phase must be at most quadratic with constant Hessian in the
    eliminated directions, and the prefactor must not contain them
    (delta consumption substitutes into the prefactor and is exempt).
    """
    st = st.canonical()
    if st.is_zero():
        return st
    remaining = list(names)
    ctx = st.ctx

    while remaining:
        # settle every delta factor that contains one of the directions
        hit = True
        while hit:
            hit = False
            for nm in list(remaining):
                out = _consume(st, nm)
                if out is not None:
                    st = out.canonical()
                    remaining.remove(nm)
                    hit = True
            if st.is_zero():
                return st
        if not remaining:
            break

        pvars = _prefactor_even_vars(st.prefactor)
        S = st.phase
        diag = {nm: _hessian_entry(S, nm, nm) for nm in remaining}

        # flat directions first: they produce deltas that later
        # consumption steps can feed on
        flat = next((nm for nm in remaining
                     if not diag[nm] and nm not in pvars
                     and all(not _hessian_entry(S, nm, ot)
                             for ot in remaining if ot != nm)), None)
        if flat is not None:
            b = S.diff(flat)
            if b.is_zero():
                raise ValueError("divergent integral: the phase does not "
                                 "depend on " + flat)
            st = ExpState(ctx, st.norm, S.subs({flat: 0}), st.prefactor,
                          st.even_deltas + (b,), st.odd_deltas)
            remaining.remove(flat)
            continue

        piv = next((nm for nm in remaining if diag[nm] and nm not in pvars),
                   None)
        if piv is not None:
            d = diag[piv]
            beta = S.diff(piv).subs({piv: 0})
            newS = S.subs({piv: 0}) - beta * beta * (Fraction(1, 2) / d)
            norm = st.norm * Scale.sqrt_of(
                Fraction(1) / abs(d), twopi=Fraction(-1, 2),
                hbar=Fraction(-1, 2))
            norm = norm.times_eighth_root(1 if d > 0 else -1)
            st = ExpState(ctx, norm, newS, st.prefactor, st.even_deltas,
                          st.odd_deltas)
            remaining.remove(piv)
            continue

        # a zero-diagonal direction coupled to the others comes out as a
        # pure Fourier direction; the delta it leaves behind gets
        # consumed by a later pass
        four = next((nm for nm in remaining
                     if not diag[nm] and nm not in pvars), None)
        if four is not None:
            b = S.diff(four)
            st = ExpState(ctx, st.norm, S.subs({four: 0}), st.prefactor,
                          st.even_deltas + (b,), st.odd_deltas)
            remaining.remove(four)
            continue

        stuck = sorted(set(remaining) & pvars)
        if stuck:
            raise ValueError("prefactor depends on the integrated "
                             "directions " + ", ".join(stuck))
        raise ValueError("phase is neither linear nor quadratic in the "
                         "remaining directions " + ", ".join(remaining))

    return st.canonical()


def integrate_odd(st: ExpState, names, weight: Scale | None = None) -> ExpState:
    """Berezin integral over the odd directions, innermost name last.

    The derivative chain is left derivatives applied in reversed(names)
    order; `weight` multiplies the norm once for the whole batch.
    """
    st = st.canonical()
    if st.is_zero():
        return st
    pref = st.prefactor
    for nm in reversed(list(names)):
        pref = pref.left_deriv(nm)
    norm = st.norm if weight is None else st.norm * weight
    return ExpState(st.ctx, norm, st.phase, pref, st.even_deltas, ())

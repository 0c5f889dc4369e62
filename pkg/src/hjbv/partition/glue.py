"""Composition of partition functions over shared boundary fields."""

from __future__ import annotations

from ..algebra import ExpState, GaussRational, Grassmann, Poly, Scale
from ..classical.hj import transplant
from ..quantize.omega import I_OVER_HBAR, boundary_context, build_omega
from .cases import (PartitionState, _case_I_body, _names, _odd_pairing,
                    _pq_phase)
from .integrate import integrate_even, integrate_odd
from .mqme import mqme_check

__all__ = ["glue", "ltriv_dual", "z_case_INL", "znew_chain"]


def _i_power(e: int) -> GaussRational:
    table = (GaussRational(1, 0), GaussRational(0, 1),
             GaussRational(-1, 0), GaussRational(0, -1))
    return table[e % 4]


def _pair_weight(pairs: int) -> Scale:
    """(-i hbar)^pairs, the measure for that many glued ghost pairs."""
    return Scale(coef=_i_power(-pairs), hbar=pairs)


def glue(states, shared, case=None, odd_weight=None) -> PartitionState:
    """Pair adjacent states over shared boundary variables.

    states are PartitionStates or ExpStates over one common context,
    listed initial to final.  shared holds the interface names as
    {"even": [...], "odd": [...]}; each even name is integrated with
    the measure d x/(2 pi hbar) realized by the Fourier/Gaussian rules,
    the odd block carries (-i hbar)^(pairs) unless odd_weight overrides.
    """
    sts = [s.state if hasattr(s, "state") else s for s in states]
    if not sts:
        raise ValueError("nothing to glue")
    ctx = sts[0].ctx
    total = sts[0]
    for s in sts[1:]:
        if s.ctx is not ctx:
            raise ValueError("glued states must share one context")
        total = total * s
    even = list(shared.get("even", ()))
    odd = list(shared.get("odd", ()))
    if odd:
        w = odd_weight if odd_weight is not None else _pair_weight(len(odd) // 2)
        total = integrate_odd(total, odd, weight=w)
    if even:
        total = integrate_even(total, even)
    total = total.canonical()
    rev, ro = [], []
    for s in states:
        for nm in getattr(s, "residual_even", ()) or ():
            if nm not in even and nm not in rev:
                rev.append(nm)
        for nm in getattr(s, "residual_odd", ()) or ():
            if nm not in odd and nm not in ro:
                ro.append(nm)
    order = None
    for s in states:
        o = s.meta.get("order") if hasattr(s, "meta") else None
        if o is not None:
            order = o if order is None else min(order, o)
    return PartitionState(case or "glued", total, residual_even=rev,
                          residual_odd=ro, meta={"order": order})


def ltriv_dual(ctx, pev, qev, odd_in, odd_out) -> ExpState:
    """Dual kernel in the trivial gauge: e^{(i/hbar) p q} times the odd
    delta (i/hbar)(c_out - c_in) for every ghost pair."""
    phase = Poly.zero(ctx)
    for p, q in zip(pev, qev):
        phase = phase + ctx.var(p) * ctx.var(q)
    pref = Grassmann.one(ctx)
    for ci, co in zip(odd_in, odd_out):
        pref = pref * ((ctx.odd_var(co) - ctx.odd_var(ci)) * I_OVER_HBAR)
    return ExpState.from_phase(phase).times_prefactor(pref)


def znew_chain(sys, order: int = 4) -> PartitionState:
    """Case I, its trivial-gauge dual, and the case-II pairing, glued.

    The composite lives in the case-II polarization and keeps the
    residual pair of the case-I factor; on {T = 0} it reduces to the
    plain case-II state.
    """
    if not sys.unimodular:
        raise ValueError("case I needs unimodular structure constants")
    ctx = boundary_context(sys, "II", residual=True)
    n, k = sys.n, sys.k
    pm, qm = _names("pm", n), _names("qm", n)
    cm, cn = _names("cm", k), _names("cn", k)
    for nm in pm + qm:
        ctx.even(nm)
    for nm in cm + cn:
        ctx.odd(nm)
    body, meta = _case_I_body(sys, order, ctx, _names("qa", n), pm,
                              _names("ca", k), cm,
                              _names("T", k), _names("Tp", k))
    Z1 = PartitionState("I", body, residual_even=_names("T", k),
                        residual_odd=_names("Tp", k), meta=meta)
    K = ltriv_dual(ctx, pm, qm, cm, cn)
    phase = _pq_phase(ctx, _names("pb", n), qm)
    Z2 = ExpState.from_phase(phase).times_prefactor(
        _odd_pairing(ctx, _names("bb", k), cn))
    out = glue([Z1, K, Z2], {"even": pm + qm, "odd": cm + cn}, case="II")
    om = build_omega("II", sys, ctx=ctx)
    mqme_check(out, om)
    return out


def z_case_INL(sys, f: Poly, order: int = 4) -> PartitionState:
    """Initial (q_a, c_a), final (Q_b, c_b) through the generating f.

    Built by gluing case I to the IIINL pairing through the II' kernel
    that swaps which endpoint fixes position.
    """
    if not sys.unimodular:
        raise ValueError("case I needs unimodular structure constants")
    ctx = boundary_context(sys, "INL", residual=True)
    om = build_omega("INL", sys, f=f, ctx=ctx)
    n, k = sys.n, sys.k
    pm, qm = _names("pm", n), _names("qm", n)
    cm, bm = _names("cm", k), _names("bm", k)
    for nm in pm + qm:
        ctx.even(nm)
    for nm in cm + bm:
        ctx.odd(nm)
    body, meta = _case_I_body(sys, order, ctx, _names("qa", n), pm,
                              _names("ca", k), cm,
                              _names("T", k), _names("Tp", k))
    Z1 = PartitionState("I", body, residual_even=_names("T", k),
                        residual_odd=_names("Tp", k), meta=meta)
    phase2 = Poly.zero(ctx)
    for p, q in zip(pm, qm):
        phase2 = phase2 + ctx.var(p) * ctx.var(q)
    Z2 = ExpState.from_phase(phase2).times_prefactor(
        _odd_pairing(ctx, bm, cm))
    ren = {}
    for i in range(1, n + 1):
        ren[f"q{i}"] = qm[i - 1]
        ren[f"Q{i}"] = f"Qb{i}"
    phase3 = -transplant(f, ctx, rename=ren)
    Z3 = ExpState.from_phase(phase3).times_prefactor(
        _odd_pairing(ctx, _names("cb", k), bm))
    out = glue([Z1, Z2, Z3], {"even": pm + qm, "odd": cm + bm}, case="INL")
    mqme_check(out, om)
    return out

"""Modified quantum master equation residuals for exponential states."""

from __future__ import annotations

from ..algebra import ExpState, Grassmann
from ..quantize.omega import HBAR_SQ, _even_deriv, _odd_deriv, apply_omega

__all__ = ["delta_term", "mqme_check"]


def delta_term(st: ExpState, t_names, tp_names) -> Grassmann:
    """Prefactor of the BV laplacian sum_a d^2/dT^a dT+_a on the state."""
    total = Grassmann.zero(st.ctx)
    for t, tp in zip(t_names, tp_names):
        total = total + _even_deriv(_odd_deriv(st, tp), t).prefactor
    return total


def _zero_through(g: Grassmann, names, cap) -> bool:
    # zero once terms of total degree > cap in the residual directions drop
    names = list(names)
    for c in g.terms.values():
        if not c.truncate_degree(cap, names).is_zero():
            return False
    return True


def mqme_check(Z, om, order=None) -> ExpState:
    """Residual of (Omega + hbar^2 Delta) on a state.

    Z may be a PartitionState, whose residual-field roster feeds the
    Delta term and whose meta supplies a truncation order, or a bare
    ExpState (Delta contributes nothing then).  The verdict lands in
    Z.mqme when the attribute exists; the residual state is returned
    either way.
    """
    st = Z.state if hasattr(Z, "state") else Z
    t_names = tuple(getattr(Z, "residual_even", ()) or ())
    tp_names = tuple(getattr(Z, "residual_odd", ()) or ())
    if order is None and hasattr(Z, "meta"):
        order = Z.meta.get("order")
    st = st.canonical()
    res = apply_omega(om, st, side="both")
    pref = res.prefactor
    if t_names:
        pref = pref + delta_term(st, t_names, tp_names) * HBAR_SQ
    residual = ExpState(st.ctx, st.norm, st.phase, pref,
                        st.even_deltas, ())
    if pref.is_zero():
        verdict = {"ok": True, "level": "exact"}
    elif order is not None and t_names \
            and _zero_through(pref, t_names, order - 1):
        verdict = {"ok": True, "level": "order-%d" % order}
    else:
        verdict = {"ok": False, "level": "nonzero"}
    if hasattr(Z, "mqme"):
        Z.mqme = verdict
    return residual

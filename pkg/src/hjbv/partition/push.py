"""BV pushforward over the residual (T, T+) pairs."""

from __future__ import annotations

from ..algebra import ExpState, Grassmann, Scale
from .cases import PartitionState
from .glue import _i_power
from .integrate import integrate_even, integrate_odd

__all__ = ["bv_pushforward", "group_adjoint_inverse"]

_ALIAS = {"Tplus0": "Tplus0", "T+=0": "Tplus0", "{T+=0}": "Tplus0",
          "T0": "T0", "T=0": "T0", "{T=0}": "T0",
          "group-zero-section": "group"}


def bv_pushforward(Z: PartitionState, lagrangian: str) -> PartitionState:
    """Integrate the residual fields over a gauge-fixing lagrangian.

    "Tplus0" kills every T+ and integrates the T directions (Fourier,
    delta consumption, or stationary-phase-exact Gaussian); "T0" sets
    T = 0 and takes the Berezin integral i hbar dT+ per pair.  The
    group zero section has no exact mode; see group_adjoint_inverse for
    the numeric ingredients of its ghost pairing.
    """
    lag = _ALIAS.get(lagrangian)
    if lag is None:
        raise ValueError(f"unknown lagrangian {lagrangian!r}")
    if lag == "group":
        raise ValueError("the group zero section is numeric only; its "
                         "exponent uses group_adjoint_inverse")
    ts, tps = list(Z.residual_even), list(Z.residual_odd)
    st = Z.state.canonical()
    if lag == "Tplus0":
        pref = st.prefactor
        for nm in tps:
            pref = pref.subs_odd(nm, Grassmann.zero(st.ctx))
        out = ExpState(st.ctx, st.norm, st.phase, pref, st.even_deltas, ())
        if ts:
            out = integrate_even(out, ts)
    else:
        out = st.substitute_even({nm: 0 for nm in ts})
        if tps:
            out = integrate_odd(out, tps,
                                weight=Scale(coef=_i_power(len(tps)),
                                             hbar=len(tps)))
    meta = dict(Z.meta)
    meta["lagrangian"] = lag
    return PartitionState(Z.case, out.canonical(), meta=meta)


def group_adjoint_inverse(sys, tvec, order: int = 30):
    """Ad_{e^T}^{-1} = e^{-ad_T} as a float matrix, for the group-variable
    ghost pairing <g+, c_a - Ad_g^{-1} c_b> evaluated at T = tvec."""
    k = sys.k
    ad = [[0.0] * k for _ in range(k)]
    for c in range(k):
        for b in range(k):
            ad[c][b] = sum(float(tvec[a]) * float(sys.f[a][b][c])
                           for a in range(k))
    out = [[1.0 if i == j else 0.0 for j in range(k)] for i in range(k)]
    power = [row[:] for row in out]
    for n in range(1, order + 1):
        nxt = [[-sum(power[i][m] * ad[m][j] for m in range(k)) / n
                for j in range(k)] for i in range(k)]
        power = nxt
        for i in range(k):
            for j in range(k):
                out[i][j] += power[i][j]
        if all(abs(power[i][j]) < 1e-18 for i in range(k)
               for j in range(k)):
            break
    return out

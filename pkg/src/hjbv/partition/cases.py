"""Exact partition functions for the linear endpoint polarizations.

Cases II and III come out independent of the constraints; Case I keeps
the residual pair (T, T+) and carries the Bernoulli ghost dressing.
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra import ExpState, Grassmann, HbarSeries, Poly
from ..classical.biaffine import (phi_series, psi_series, rginv_series,
                                  wzw_series)
from ..classical.hj import hj_linear, transplant
from ..classical.systems import ConstraintSystem
from ..quantize.omega import (I_OVER_HBAR, _even_deriv, apply_omega,
                              boundary_context, build_omega)
from ..quantize.star import star_algebra, star_commutator_check, star_exp
from .ghost import ad_matrix, ghost_series, matrix_series, trace_series
from .integrate import exp_odd, poly_exp
from .mqme import mqme_check

__all__ = ["PartitionState", "gauge_family_check", "ghost_weight",
           "toy_state", "z_case", "z_case_I", "z_case_II", "z_case_III",
           "z_case_IIINL"]

# standard ordering acts on the initial-endpoint kernel from the left
_STAR_SIDE = "initial"


def ghost_weight(name: str) -> int:
    """Ghost number of an odd generator, read off its name prefix."""
    if name.startswith("Tp"):
        return -1
    if name.startswith("b"):
        return -1
    if name.startswith("c"):
        return 1
    return 0


class PartitionState:
    """Exponential state plus its residual-field roster and mQME verdict."""

    __slots__ = ("case", "state", "residual_even", "residual_odd", "meta",
                 "mqme")

    def __init__(self, case, state, residual_even=(), residual_odd=(),
                 meta=None):
        self.case = case
        self.state = state
        self.residual_even = tuple(residual_even)
        self.residual_odd = tuple(residual_odd)
        self.meta = dict(meta or {})
        self.mqme = None

    @property
    def ctx(self):
        return self.state.ctx

    @property
    def exact(self):
        return self.meta.get("order") is None

    def ghost_numbers(self):
        """Ghost numbers of the monomials in the canonical prefactor."""
        st = self.state.canonical()
        names = st.ctx.odd_names
        out = set()
        for mono in st.prefactor.terms:
            out.add(sum(ghost_weight(names[i]) for i in mono))
        return out

    def __repr__(self):
        tag = "exact" if self.exact else "order %s" % self.meta.get("order")
        return f"PartitionState(case {self.case}, {tag})"


def _names(prefix, count):
    return [f"{prefix}{i}" for i in range(1, count + 1)]


def _odd_pairing(ctx, left, right):
    """exp of (i/hbar) sum_a left_a right_a."""
    g = Grassmann.zero(ctx)
    for ln, rn in zip(left, right):
        g = g + ctx.odd_var(ln) * ctx.odd_var(rn)
    return exp_odd(g * I_OVER_HBAR)


def _pq_phase(ctx, bev, aev):
    p = Poly.zero(ctx)
    for b, a in zip(bev, aev):
        p = p - ctx.var(b) * ctx.var(a)
    return p


def _endpoint_rename(sys, aev, bev):
    out = {}
    for i in range(sys.n):
        out[sys.q_names[i]] = aev[i]
        out[sys.p_names[i]] = bev[i]
    return out


def _require_commutators(sys):
    chk = star_commutator_check(sys)
    if not chk["ok"]:
        raise ValueError("constraint star commutators do not close on "
                         "i hbar times the Poisson brackets")


def z_case_II(sys: ConstraintSystem) -> PartitionState:
    """Initial (q_a, c_a), final (p^b, b^b).  Independent of the H_a."""
    _require_commutators(sys)
    bctx = boundary_context(sys, "II")
    phase = _pq_phase(bctx, _names("pb", sys.n), _names("qa", sys.n))
    pref = _odd_pairing(bctx, _names("bb", sys.k), _names("ca", sys.k))
    st = ExpState.from_phase(phase).times_prefactor(pref)
    Z = PartitionState("II", st, meta={"order": None})
    om = build_omega("II", sys, ctx=bctx)
    mqme_check(Z, om)
    return Z


def z_case_III(sys: ConstraintSystem) -> PartitionState:
    """Initial (q_a, b^a), final (p^b, c_b).  Independent of the H_a."""
    _require_commutators(sys)
    bctx = boundary_context(sys, "III")
    phase = _pq_phase(bctx, _names("pb", sys.n), _names("qa", sys.n))
    pref = _odd_pairing(bctx, _names("cb", sys.k), _names("ba", sys.k))
    st = ExpState.from_phase(phase).times_prefactor(pref)
    Z = PartitionState("III", st, meta={"order": None})
    om = build_omega("III", sys, ctx=bctx)
    mqme_check(Z, om)
    return Z


def _biaffine_phase(sys, ctx, aev, bev, cap):
    # the group-evolution series address the residual directions as T1..Tk
    rg = rginv_series(sys, ctx, cap)
    phi = phi_series(sys, ctx, cap)
    psi = psi_series(sys, ctx, cap)
    qa = [ctx.var(nm) for nm in aev]
    pb = [ctx.var(nm) for nm in bev]
    S = -wzw_series(sys, ctx, cap)
    for i in range(sys.n):
        row = Poly.zero(ctx)
        for j in range(sys.n):
            row = row + rg[i][j] * (qa[j] + phi[j])
        S = S - pb[i] * row - psi[i] * qa[i]
    return S.truncate_degree(cap, _names("T", sys.k))


def _case_I_ghost(sys, ctx, ao, bo, ts, tps, cap):
    """exp of -(i/hbar) <T+, F_-(ad_T) c_b + F_+(ad_T) c_a>, times e^W."""
    k = sys.k
    gs = ghost_series(max(cap, 2))
    M = ad_matrix(sys, ctx, ts)
    nonabelian = any(not entry.is_zero() for row in M for entry in row)
    fp = matrix_series(gs.f_plus, M, cap)
    fm = matrix_series(gs.f_minus, M, cap)
    g = Grassmann.zero(ctx)
    for c in range(k):
        tp = ctx.odd_var(tps[c])
        for b in range(k):
            g = g + tp * ctx.odd_var(bo[b]) * fm[c][b]
            g = g + tp * ctx.odd_var(ao[b]) * fp[c][b]
    pref = exp_odd(-(g * I_OVER_HBAR))
    if nonabelian:
        w = trace_series(sys, ctx, ts, cap)
        if not w.is_zero():
            pref = pref * poly_exp(w, cap, list(ts))
    return pref, nonabelian


def _truncate_pref(g, names, cap):
    out = {}
    for m, c in g.terms.items():
        t = c.truncate_degree(cap, names)
        if not t.is_zero():
            out[m] = t
    return Grassmann(g.ctx, out)


def _case_I_body(sys, order, ctx, aev, bev, ao, bo, ts, tps):
    """Case-I state with the stated variable names; shared by the chains."""
    n, k = sys.n, sys.k
    phase = _pq_phase(ctx, bev, aev)
    series = None
    exact = True
    if sys.kind == "linear":
        S = hj_linear(sys)
        ren = {f"qa{i + 1}": aev[i] for i in range(n)}
        ren.update({f"pb{i + 1}": bev[i] for i in range(n)})
        ren.update({f"T{a + 1}": ts[a] for a in range(k)})
        phase = transplant(S.value, ctx, rename=ren)
    elif sys.kind == "biaffine":
        if list(ts) != _names("T", k):
            raise ValueError("the biaffine series need the residual "
                             "directions named T1..Tk")
        phase = _biaffine_phase(sys, ctx, aev, bev, order)
        exact = False
    else:
        ham = Poly.zero(ctx)
        rename = _endpoint_rename(sys, aev, bev)
        for a in range(k):
            ham = ham + ctx.var(ts[a]) * transplant(sys.H[a], ctx,
                                                    rename=rename)
        alg = star_algebra(sys, side=_STAR_SIDE, ctx=ctx,
                           p_names=list(bev), q_names=list(aev))
        se = star_exp(ham, alg, order)
        if se.kind == "phase":
            phase = phase + se.phase
        else:
            series = se.series
            exact = False
    pref, nonabelian = _case_I_ghost(sys, ctx, ao, bo, ts, tps, order)
    if series is not None:
        pref = pref * series
    if nonabelian or not exact:
        exact = False
        pref = _truncate_pref(pref, list(ts), order)
    st = ExpState.from_phase(phase).times_prefactor(pref)
    return st, {"order": None if exact else order, "kind": sys.kind}


def z_case_I(sys: ConstraintSystem, order: int = 4) -> PartitionState:
    """Initial (q_a, c_a), final (p^b, c_b), residual pairs (T, T+)."""
    if not sys.unimodular:
        raise ValueError("case I needs unimodular structure constants")
    _require_commutators(sys)
    bctx = boundary_context(sys, "I", residual=True)
    n, k = sys.n, sys.k
    st, meta = _case_I_body(sys, order, bctx,
                            _names("qa", n), _names("pb", n),
                            _names("ca", k), _names("cb", k),
                            _names("T", k), _names("Tp", k))
    Z = PartitionState("I", st, residual_even=_names("T", k),
                       residual_odd=_names("Tp", k), meta=meta)
    om = build_omega("I", sys, ctx=bctx)
    mqme_check(Z, om)
    return Z


def z_case_IIINL(sys: ConstraintSystem, f: Poly) -> PartitionState:
    """Initial (q_a, b^a), final (Q_b, c_b) through the generating f."""
    bctx = boundary_context(sys, "IIINL")
    om = build_omega("IIINL", sys, f=f, ctx=bctx)
    ren = {}
    for i in range(1, sys.n + 1):
        ren[f"q{i}"] = f"qa{i}"
        ren[f"Q{i}"] = f"Qb{i}"
    phase = -transplant(f, bctx, rename=ren)
    pref = _odd_pairing(bctx, _names("cb", sys.k), _names("ba", sys.k))
    st = ExpState.from_phase(phase).times_prefactor(pref)
    Z = PartitionState("IIINL", st, meta={"order": None})
    mqme_check(Z, om)
    return Z


def z_case(case, sys, order: int = 4, f=None) -> PartitionState:
    """Partition function of the named case."""
    if case == "I":
        return z_case_I(sys, order=order)
    if case == "II":
        return z_case_II(sys)
    if case == "III":
        return z_case_III(sys)
    if case == "IIINL":
        if f is None:
            raise ValueError("case IIINL needs the generating function")
        return z_case_IIINL(sys, f)
    if case == "INL":
        if f is None:
            raise ValueError("case INL needs the generating function")
        from .glue import z_case_INL
        return z_case_INL(sys, f, order=order)
    raise ValueError(f"unknown case {case!r}")


def toy_state() -> PartitionState:
    """Quantization of the single linear constraint H = q."""
    sys = ConstraintSystem(1, 1, "linear", v=[[Fraction(0)]],
                           w=[[Fraction(1)]])
    return z_case_I(sys)


def gauge_family_check(sys: ConstraintSystem, u0) -> dict:
    """Gauge independence of the case-II state, infinitesimally.

    Deform by the star exponential of x<u0, H> and compare the
    x-derivative with Omega applied to the b-descendant of the state.
    Abelian systems with affine constraints only.
    """
    if any(c for plane in sys.f for row in plane for c in row):
        raise ValueError("the gauge family check runs on abelian systems")
    bctx = boundary_context(sys, "II")
    n, k = sys.n, sys.k
    x = bctx.var("x")
    aev, bev = _names("qa", n), _names("pb", n)
    rename = _endpoint_rename(sys, aev, bev)
    ham = Poly.zero(bctx)
    for a in range(k):
        ham = ham + transplant(sys.H[a], bctx, rename=rename) \
            * Fraction(u0[a])
    alg = star_algebra(sys, side=_STAR_SIDE, ctx=bctx,
                       p_names=bev, q_names=aev)
    se = star_exp(ham * x, alg)
    if se.kind != "phase":
        raise ValueError("the gauge family check needs affine constraints")
    phase = _pq_phase(bctx, bev, aev) + se.phase
    pref = _odd_pairing(bctx, _names("bb", k), _names("ca", k))
    st = ExpState.from_phase(phase).times_prefactor(pref).canonical()
    lhs = _even_deriv(st, "x")
    desc = Grassmann.zero(bctx)
    for a in range(k):
        desc = desc - bctx.odd_var(f"bb{a + 1}") * Fraction(u0[a])
    psi = st.times_prefactor(desc)
    om = build_omega("II", sys, ctx=bctx)
    rhs = apply_omega(om, psi, side="both")
    diff = lhs.prefactor - rhs.prefactor * HbarSeries.hbar_power(-2)
    return {"ok": diff.is_zero(), "residual": diff}

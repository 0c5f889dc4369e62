"""Boundary operators for the quantized endpoint polarizations.

An operator is a finite list of terms (coefficient, even derivative
orders, odd left derivatives); it acts exactly on exponential states.
The two endpoint pieces are kept separate, with the total operator
understood as the a-side minus the b-side.  Constraints are realized
in standard ordering: multiplication to the left, derivatives to the
right, one factor of (+/- i hbar) per derivative.
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra import (Context, GR_I, GaussRational, Grassmann, HbarSeries,
                       Poly)
from ..algebra.states import ExpState
from ..classical.systems import ConstraintSystem
from .. import linalg

IHBAR = HbarSeries.hbar_power(1, GR_I)
MINUS_IHBAR = HbarSeries.hbar_power(1, GaussRational(0, -1))
I_OVER_HBAR = HbarSeries.hbar_power(-1, GR_I)
HBAR_SQ = HbarSeries.hbar_power(2)

# case -> (a-side even prefix, b-side even prefix, a-side odd, b-side odd)
_CASES = {
    "I": ("qa", "pb", "ca", "cb"),
    "II": ("qa", "pb", "ca", "bb"),
    "III": ("qa", "pb", "ba", "cb"),
    "INL": ("qa", "Qb", "ca", "cb"),
    "IIINL": ("qa", "Qb", "ba", "cb"),
}


def boundary_context(sys: ConstraintSystem, case: str,
                     ctx: Context | None = None,
                     residual: bool = False) -> Context:
    """Register the endpoint variable roster for the given case."""
    if case not in _CASES:
        raise ValueError("unknown case " + repr(case))
    ctx = ctx if ctx is not None else Context()
    ae, be, ao, bo = _CASES[case]
    for i in range(1, sys.n + 1):
        ctx.even(f"{ae}{i}")
    for i in range(1, sys.n + 1):
        ctx.even(f"{be}{i}")
    if residual:
        for a in range(1, sys.k + 1):
            ctx.even(f"T{a}")
    for a in range(1, sys.k + 1):
        ctx.odd(f"{ao}{a}")
    for a in range(1, sys.k + 1):
        ctx.odd(f"{bo}{a}")
    if residual:
        for a in range(1, sys.k + 1):
            ctx.odd(f"Tp{a}")
    return ctx


class OmegaOperator:
    """Omega_a and Omega_b as term lists over a shared boundary context."""

    __slots__ = ("ctx", "case", "terms_a", "terms_b", "vars_a", "vars_b",
                 "squared_ok")

    def __init__(self, ctx, case, terms_a, terms_b, vars_a, vars_b):
        self.ctx = ctx
        self.case = case
        self.terms_a = tuple(terms_a)
        self.terms_b = tuple(terms_b)
        self.vars_a = vars_a
        self.vars_b = vars_b
        self.squared_ok = None

    def describe(self):
        """JSON-friendly dump of both term lists."""
        def one(terms):
            return [{"coef": str(coef), "even": list(even), "odd": list(odd)}
                    for coef, even, odd in terms]
        return {"case": self.case, "a": one(self.terms_a),
                "b": one(self.terms_b)}


def _weight_powers(weight: HbarSeries, top: int):
    out = [HbarSeries.one()]
    for _ in range(top):
        out.append(out[-1] * weight)
    return out


def _hat_terms(H: Poly, bctx: Context, mult_map, deriv_map,
               weight: HbarSeries):
    """Standard-ordering realization of one constraint as term data."""
    src = H.ctx
    wp = _weight_powers(weight, H.total_degree())
    out = []
    for mon, coef in H.terms.items():
        mult = Poly.one(bctx)
        derivs = []
        order = 0
        for idx, e in mon:
            nm = src.even_names[idx]
            if nm in mult_map:
                mult = mult * bctx.var(mult_map[nm]) ** e
            elif nm in deriv_map:
                derivs.append((deriv_map[nm], e))
                order += e
            else:
                raise ValueError("constraint uses unexpected variable " + nm)
        out.append((mult * (coef * wp[order]), tuple(sorted(derivs))))
    return out


def _ghost_cubic(bctx, f, odd_prefix, sign):
    """sign * (i hbar) f^g_ab c_a c_b d/dc_g, summed over a < b."""
    k = len(f)
    out = []
    for g in range(k):
        for a in range(k):
            for b in range(a + 1, k):
                if not f[a][b][g]:
                    continue
                cc = bctx.odd_var(f"{odd_prefix}{a + 1}") \
                    * bctx.odd_var(f"{odd_prefix}{b + 1}")
                coef = cc * (IHBAR * (sign * f[a][b][g]))
                out.append((coef, (), (f"{odd_prefix}{g + 1}",)))
    return out


def _ghost_quadratic(bctx, f, odd_prefix):
    """hbar^2 f^g_ab b_g d^2/(db_a db_b), summed over a < b."""
    k = len(f)
    out = []
    for g in range(k):
        for a in range(k):
            for b in range(a + 1, k):
                if not f[a][b][g]:
                    continue
                coef = Grassmann.coerce(
                    bctx, bctx.odd_var(f"{odd_prefix}{g + 1}")) \
                    * (HBAR_SQ * f[a][b][g])
                out.append((coef, (),
                            (f"{odd_prefix}{a + 1}", f"{odd_prefix}{b + 1}")))
    return out


def build_omega(case: str, sys: ConstraintSystem, f=None,
                ctx: Context | None = None, htilde_list=None) -> OmegaOperator:
    """Boundary operator for the chosen case.

    For the nonlinear cases the b-side polarization is generated by f,
    a polynomial in the q and Q variables of the system context; the
    transformed constraints are derived for quadratic f or can be
    passed in, and are checked for compatibility either way.
    """
    if case not in _CASES:
        raise ValueError("unknown case " + repr(case))
    bctx = boundary_context(sys, case, ctx=ctx)
    ae, be, ao, bo = _CASES[case]
    n, k = sys.n, sys.k
    fconst = sys.f

    q_to_a = {q: f"{ae}{i + 1}" for i, q in enumerate(sys.q_names)}
    p_to_a = {p: f"{ae}{i + 1}" for i, p in enumerate(sys.p_names)}
    p_to_b = {p: f"{be}{i + 1}" for i, p in enumerate(sys.p_names)}
    q_to_b = {q: f"{be}{i + 1}" for i, q in enumerate(sys.q_names)}

    terms_a = []
    if case in ("I", "II", "INL"):
        # c^a_g Hat H_g(i hbar d/dq, q) - (i hbar) f c c d/dc
        for g in range(k):
            ghost = Grassmann.coerce(bctx, bctx.odd_var(f"{ao}{g + 1}"))
            for mult, derivs in _hat_terms(sys.H[g], bctx, q_to_a, p_to_a,
                                           IHBAR):
                terms_a.append((ghost * mult, derivs, ()))
        terms_a.extend(_ghost_cubic(bctx, fconst, ao, -1))
    else:
        # i hbar Hat H_g d/db_g + hbar^2 f b d d
        for g in range(k):
            for mult, derivs in _hat_terms(sys.H[g], bctx, q_to_a, p_to_a,
                                           IHBAR):
                terms_a.append((Grassmann.from_poly(mult * IHBAR), derivs,
                                (f"{ao}{g + 1}",)))
        terms_a.extend(_ghost_quadratic(bctx, fconst, ao))

    terms_b = []
    if case in ("I", "III"):
        for g in range(k):
            ghost = Grassmann.coerce(bctx, bctx.odd_var(f"{bo}{g + 1}"))
            for mult, derivs in _hat_terms(sys.H[g], bctx, p_to_b, q_to_b,
                                           IHBAR):
                terms_b.append((ghost * mult, derivs, ()))
        terms_b.extend(_ghost_cubic(bctx, fconst, bo, +1))
    elif case == "II":
        for g in range(k):
            for mult, derivs in _hat_terms(sys.H[g], bctx, p_to_b, q_to_b,
                                           IHBAR):
                terms_b.append((Grassmann.from_poly(mult * MINUS_IHBAR),
                                derivs, (f"{bo}{g + 1}",)))
        terms_b.extend(_ghost_quadratic(bctx, fconst, bo))
    else:
        # nonlinear final polarization with transformed constraints
        if f is None and htilde_list is None:
            raise ValueError("the nonlinear cases need a generating function")
        compat = check_polarization_compat(sys, f, htilde_list=htilde_list)
        if not compat["ok"]:
            raise ValueError("polarization compatibility failure: "
                             "the constraints do not preserve e^{-(i/hbar) f}")
        hts = compat["htilde"]
        Q_to_b = {f"Q{i + 1}": f"{be}{i + 1}" for i in range(n)}
        P_to_b = {f"P{i + 1}": f"{be}{i + 1}" for i in range(n)}
        for g in range(k):
            ghost = Grassmann.coerce(bctx, bctx.odd_var(f"{bo}{g + 1}"))
            for mult, derivs in _hat_terms(hts[g], bctx, Q_to_b, P_to_b,
                                           MINUS_IHBAR):
                terms_b.append((ghost * mult, derivs, ()))
        terms_b.extend(_ghost_cubic(bctx, fconst, bo, +1))

    vars_a = {"even": tuple(f"{ae}{i}" for i in range(1, n + 1)),
              "odd": tuple(f"{ao}{a}" for a in range(1, k + 1))}
    vars_b = {"even": tuple(f"{be}{i}" for i in range(1, n + 1)),
              "odd": tuple(f"{bo}{a}" for a in range(1, k + 1))}
    om = OmegaOperator(bctx, case, terms_a, terms_b, vars_a, vars_b)
    om.squared_ok = omega_squared_check(om)["ok"]
    return om


# -- action on states ------------------------------------------------------

def _even_deriv(st: ExpState, name: str) -> ExpState:
    for d in st.even_deltas:
        if name in d.vars_used():
            raise ValueError("derivative in %s meets a delta factor" % name)
    extra = st.phase.diff(name) * I_OVER_HBAR
    pref = st.prefactor.diff_even(name) + st.prefactor * extra
    return ExpState(st.ctx, st.norm, st.phase, pref,
                    st.even_deltas, st.odd_deltas)


def _odd_deriv(st: ExpState, name: str) -> ExpState:
    return ExpState(st.ctx, st.norm, st.phase, st.prefactor.left_deriv(name),
                    st.even_deltas, st.odd_deltas)


def _apply_terms(terms, st: ExpState) -> ExpState:
    total = Grassmann.zero(st.ctx)
    for coef, even, odd in terms:
        cur = st
        for name, e in even:
            for _ in range(e):
                cur = _even_deriv(cur, name)
        for name in reversed(odd):
            cur = _odd_deriv(cur, name)
        total = total + coef * cur.prefactor
    return ExpState(st.ctx, st.norm, st.phase, total, st.even_deltas, ())


def apply_omega(om: OmegaOperator, state: ExpState,
                side: str = "both") -> ExpState:
    """Apply Omega (or one endpoint piece) to an exponential state."""
    st = state.canonical()
    if st.is_zero():
        return st
    if side == "a":
        return _apply_terms(om.terms_a, st)
    if side == "b":
        return _apply_terms(om.terms_b, st)
    ra = _apply_terms(om.terms_a, st)
    rb = _apply_terms(om.terms_b, st)
    return ExpState(st.ctx, st.norm, st.phase,
                    ra.prefactor - rb.prefactor, st.even_deltas, ())


def _generic_state(om: OmegaOperator, side: str) -> ExpState:
    """Exponential times a full odd basis, with fresh symbol coefficients.

    A vanishing result on this state forces the operator itself to
    vanish: derivatives reduce to multiplication by the fresh momentum
    symbols, and the odd coefficients separate the ghost monomials.
    """
    ctx = om.ctx
    vs = om.vars_a if side == "a" else om.vars_b
    phase = Poly.zero(ctx)
    for i, name in enumerate(vs["even"]):
        phase = phase + ctx.var(f"sym{side}{i + 1}") * ctx.var(name)
    pref = Grassmann.zero(ctx)
    odd = vs["odd"]
    for mask in range(1 << len(odd)):
        term = Grassmann.coerce(ctx, ctx.var(f"coef{side}{mask}"))
        for j, name in enumerate(odd):
            if mask >> j & 1:
                term = term * ctx.odd_var(name)
        pref = pref + term
    return ExpState(ctx, phase=phase, prefactor=pref)


def omega_squared_check(om: OmegaOperator):
    """Apply each endpoint piece twice to a generic state.

    The prefactor of the result is the symbol of the residual operator;
    the check passes when both sides square to zero.
    """
    out = {"ok": True}
    for side, terms in (("a", om.terms_a), ("b", om.terms_b)):
        st = _generic_state(om, side)
        res = _apply_terms(terms, _apply_terms(terms, st))
        zero = res.prefactor.is_zero()
        out[side] = {"ok": zero, "residual": res}
        out["ok"] = out["ok"] and zero
    return out


# -- change of final polarization -----------------------------------------

def polarization_map(f: Poly, n: int):
    """Solve p = df/dq, P = -df/dQ for (p, q) affine in (P, Q).

    f is a polynomial of total degree at most two in q1..qn, Q1..Qn;
    returns (p_exprs, q_exprs) over the same context with the P and Q
    variables.
    """
    ctx = f.ctx
    qn = [f"q{i}" for i in range(1, n + 1)]
    Qn = [f"Q{i}" for i in range(1, n + 1)]
    Pv = [ctx.var(f"P{i}") for i in range(1, n + 1)]
    Qv = [ctx.var(Q) for Q in Qn]
    if f.total_degree() > 2:
        raise ValueError("quadratic generating functions only; "
                         "pass the transformed constraints explicitly")

    def _const(p: Poly) -> Fraction:
        s = p.constant_series()
        c = s.constant()
        if p != Poly.const(ctx, c) or c.im != 0:
            raise ValueError("generating function must have rational "
                             "constant second derivatives")
        return c.re

    B = [[_const(f.diff(qi).diff(Qj)) for Qj in Qn] for qi in qn]
    C = [[_const(f.diff(qi).diff(qj)) for qj in qn] for qi in qn]
    D = [[_const(f.diff(Qi).diff(Qj)) for Qj in Qn] for Qi in Qn]
    bq = [_const(f.diff(qi).subs({x: 0 for x in qn + Qn})) for qi in qn]
    bQ = [_const(f.diff(Qi).subs({x: 0 for x in qn + Qn})) for Qi in Qn]

    Bt = linalg.mat([[B[j][i] for j in range(n)] for i in range(n)])
    try:
        Bt_inv = linalg.inverse(Bt)
    except ValueError:
        raise ValueError("generating function is degenerate: "
                         "the mixed second derivative block is singular")
    # q = -(B^T)^{-1} (P + D Q + bQ)
    q_exprs = []
    for i in range(n):
        acc = Poly.zero(ctx)
        for j in range(n):
            inner = Pv[j] + Poly.const(ctx, bQ[j])
            for l in range(n):
                inner = inner + Qv[l] * D[j][l]
            acc = acc - inner * Bt_inv[i][j]
        q_exprs.append(acc)
    # p = B Q + C q + bq
    p_exprs = []
    for i in range(n):
        acc = Poly.const(ctx, bq[i])
        for j in range(n):
            acc = acc + Qv[j] * B[i][j] + q_exprs[j] * C[i][j]
        p_exprs.append(acc)
    return p_exprs, q_exprs


def htilde(sys: ConstraintSystem, f: Poly):
    """Constraints pushed through the change of final polarization."""
    p_exprs, q_exprs = polarization_map(f, sys.n)
    sub = {}
    for i in range(sys.n):
        sub[sys.p_names[i]] = p_exprs[i]
        sub[sys.q_names[i]] = q_exprs[i]
    return [H.subs(sub) for H in sys.H]


def check_polarization_compat(sys: ConstraintSystem, f: Poly | None,
                              htilde_list=None):
    """Check the two realizations agree on e^{-(i/hbar) f}.

    Applies H_g(i hbar d/dq, q) and the transformed
    Htilde_g(-i hbar d/dQ, Q) to the exponential and compares exactly.
    """
    if f is None:
        raise ValueError("a generating function is required")
    ctx = f.ctx
    n = sys.n
    if htilde_list is None:
        htilde_list = htilde(sys, f)
    state = ExpState.from_phase(-f)
    ident_q = {q: q for q in sys.q_names}
    p_to_q = {p: sys.q_names[i] for i, p in enumerate(sys.p_names)}
    Qn = {f"Q{i}": f"Q{i}" for i in range(1, n + 1)}
    P_to_Q = {f"P{i}": f"Q{i}" for i in range(1, n + 1)}
    residuals = []
    ok = True
    for g in range(sys.k):
        lhs = _apply_terms(
            [(Grassmann.from_poly(mult), derivs, ())
             for mult, derivs in _hat_terms(sys.H[g], ctx, ident_q, p_to_q,
                                            IHBAR)], state)
        rhs = _apply_terms(
            [(Grassmann.from_poly(mult), derivs, ())
             for mult, derivs in _hat_terms(htilde_list[g], ctx, Qn, P_to_Q,
                                            MINUS_IHBAR)], state)
        res = (lhs.prefactor - rhs.prefactor).body()
        residuals.append(res)
        ok = ok and res.is_zero()
    return {"ok": ok, "residuals": residuals, "htilde": htilde_list}

"""Closed-form generalized Hamilton-Jacobi actions and Legendre moves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import linalg
from ..algebra import Context, HbarSeries, Poly
from .evolution import _compile_poly, solve_evolution
from .systems import ConstraintSystem


@dataclass
class HJResult:
    """An action in a named polarization: exact Poly or numeric callable."""

    value: object
    variables: tuple
    branch: int = 0
    meta: dict = field(default_factory=dict)

    def __call__(self, values):
        if isinstance(self.value, Poly):
            z = self.value.evaluate(values)
            return z.real if z.imag == 0 else z
        return self.value(values)


def transplant(p: Poly, ctx: Context, rename=None) -> Poly:
    """Rebuild a polynomial over another context, optionally renaming."""
    rename = rename or {}
    names = p.ctx.even_names
    terms = {}
    for m, c in p.terms.items():
        mon = tuple(sorted((ctx.even(rename.get(names[i], names[i])), e)
                           for i, e in m))
        terms[mon] = c
    return Poly(ctx, terms)


def hj_linear(sys: ConstraintSystem) -> HJResult:
    """Action for affine constraints in the (q_a, p^b, T) polarization."""
    if sys.kind != "linear":
        raise ValueError("hj_linear needs kind='linear'")
    n, k = sys.n, sys.k
    A = sys.A_matrix()
    for a in range(k):
        for b in range(k):
            if A[a][b] != A[b][a]:
                raise ValueError("w·v must be symmetric")
    ctx = Context()
    qa = [ctx.var(f"qa{i}") for i in range(1, n + 1)]
    pb = [ctx.var(f"pb{i}") for i in range(1, n + 1)]
    T = [ctx.var(f"T{a}") for a in range(1, k + 1)]
    S = Poly.zero(ctx)
    for i in range(n):
        S = S - pb[i] * qa[i]
    for a in range(k):
        lin = Poly.zero(ctx)
        for i in range(n):
            lin = lin + pb[i] * sys.v[a][i] + qa[i] * sys.w[a][i]
        S = S - T[a] * lin
    for a in range(k):
        for b in range(k):
            S = S - T[a] * T[b] * (Fraction(A[a][b]) / 2)
    return HJResult(value=S, variables=tuple(ctx.even_names),
                    meta={"A": A})


def hj_linear_general_polarization(sys: ConstraintSystem,
                                   f: Poly) -> HJResult:
    """Swap the final polarization: f couples q to new coordinates Q_b.

    f is a polynomial in qa1.. and Qb1..; its q-slot gets the shifted
    argument q_a + T^a v_a.
    """
    if sys.kind != "linear":
        raise ValueError("needs kind='linear'")
    n, k = sys.n, sys.k
    A = sys.A_matrix()
    ctx = f.ctx
    qa = [ctx.var(f"qa{i}") for i in range(1, n + 1)]
    for i in range(1, n + 1):
        ctx.even(f"Qb{i}")
    T = [ctx.var(f"T{a}") for a in range(1, k + 1)]
    shift = {}
    for i in range(n):
        arg = qa[i]
        for a in range(k):
            arg = arg + T[a] * sys.v[a][i]
        shift[f"qa{i + 1}"] = arg
    S = -f.subs(shift)
    for a in range(k):
        lin = Poly.zero(ctx)
        for i in range(n):
            lin = lin + qa[i] * sys.w[a][i]
        S = S - T[a] * lin
    for a in range(k):
        for b in range(k):
            S = S - T[a] * T[b] * (Fraction(A[a][b]) / 2)
    names = tuple(f"qa{i}" for i in range(1, n + 1)) \
        + tuple(f"Qb{i}" for i in range(1, n + 1)) \
        + tuple(f"T{a}" for a in range(1, k + 1))
    return HJResult(value=S, variables=names, meta={"A": A})


def partial_legendre(S) -> Poly:
    """Trade each p^b_i
    for a multiplier: S_gen = lam·q_b + S(q_a, lam, ...)."""
    P = S.value if isinstance(S, HJResult) else S
    if not isinstance(P, Poly):
        raise ValueError("partial_legendre needs a polynomial action")
    ctx = P.ctx
    pbs = [nm for nm in ctx.even_names
           if nm.startswith("pb") and nm[2:].isdigit()]
    out = P.subs({nm: ctx.var("lam" + nm[2:]) for nm in pbs})
    for nm in pbs:
        out = out + ctx.var("lam" + nm[2:]) * ctx.var("qb" + nm[2:])
    return out


def legendre_reduce(S: Poly, eliminate) -> Poly:
    """Critical value of S over the named block.

    The block must enter at most quadratically, with a constant invertible
    Hessian times one shared monomial in the surviving variables.
    """
    names = list(eliminate)
    if not names:
        return S
    ctx = S.ctx
    pos_of = {ctx.even_index(nm): j for j, nm in enumerate(names)}
    N = len(names)
    S0: dict = {}
    b = [Poly.zero(ctx) for _ in range(N)]
    quad: dict = {}
    for m, c in S.terms.items():
        elim = [(pos_of[i], e) for i, e in m if i in pos_of]
        rest = tuple((i, e) for i, e in m if i not in pos_of)
        d = sum(e for _, e in elim)
        if d == 0:
            S0[m] = c
        elif d == 1:
            j = elim[0][0]
            b[j] = b[j] + Poly(ctx, {rest: c})
        elif d == 2:
            if len(elim) == 1:
                i = j = elim[0][0]
            else:
                i, j = sorted((elim[0][0], elim[1][0]))
            if not c.is_constant():
                raise ValueError("Hessian must not depend on hbar")
            g = c.constant()
            if g.im != 0:
                raise ValueError("Hessian must be rational")
            prev_rest, prev = quad.get((i, j), (rest, Fraction(0)))
            if prev != 0 and prev_rest != rest:
                raise ValueError("quadratic block mixes monomial factors")
            quad[(i, j)] = (rest, prev + g.re)
        else:
            raise ValueError("not quadratic in the eliminated variables")
    mons = {mm for mm, cc in quad.values() if cc != 0}
    if len(mons) > 1:
        raise ValueError("quadratic block mixes monomial factors")
    shared = mons.pop() if mons else ()
    G = [[Fraction(0)] * N for _ in range(N)]
    for (i, j), (_, cc) in quad.items():
        if i == j:
            G[i][i] = 2 * cc
        else:
            G[i][j] = G[j][i] = cc
    try:
        Ginv = linalg.inverse(tuple(tuple(row) for row in G))
    except ValueError as exc:
        raise ValueError(
            "singular Hessian on the eliminated block; the stationary "
            "locus is delta-like and belongs to the partition layer"
        ) from exc
    if shared:
        minv = Poly(ctx, {tuple((i, -e) for i, e in shared):
                          HbarSeries.one()})
    else:
        minv = Poly.one(ctx)
    out = Poly(ctx, S0)
    for i in range(N):
        if b[i].is_zero():
            continue
        for j in range(N):
            if Ginv[i][j] == 0 or b[j].is_zero():
                continue
            out = out - b[i] * b[j] * minv * (Ginv[i][j] / 2)
    return out


def rp_hj(variant: str, m=1, n: int = 1):
    """Relativistic point particle actions on flat (n+1)-dim spacetime.

    variant 'pE' and 'qtT' are exact; 'qt_reduced' returns the two root
    branches as callables (timelike separations only).  With m=0 the
    reduction does not exist and the lightlike constraint comes back.
    """
    m = Fraction(m)
    if variant == "pE":
        ctx = Context()
        qa = [ctx.var(f"qa{i}") for i in range(1, n + 1)]
        pb = [ctx.var(f"pb{i}") for i in range(1, n + 1)]
        ta, Eb, T = ctx.var("ta"), ctx.var("Eb"), ctx.var("T1")
        S = Eb * ta
        for i in range(n):
            S = S - pb[i] * qa[i]
        quad = Eb * Eb - Poly.const(ctx, m * m)
        for i in range(n):
            quad = quad - pb[i] * pb[i]
        S = S + T * quad * Fraction(1, 2)
        return HJResult(value=S, variables=tuple(ctx.even_names),
                        meta={"mass": m})
    if variant == "qtT":
        ctx = Context()
        qa = [ctx.var(f"qa{i}") for i in range(1, n + 1)]
        qb = [ctx.var(f"qb{i}") for i in range(1, n + 1)]
        ta, tb, T = ctx.var("ta"), ctx.var("tb"), ctx.var("T1")
        num = -((tb - ta) ** 2)
        for i in range(n):
            num = num + (qb[i] - qa[i]) ** 2
        S = num * (T ** -1) * Fraction(1, 2) - T * (m * m / 2)
        return HJResult(value=S, variables=tuple(ctx.even_names),
                        meta={"mass": m})
    if variant == "qt_reduced":
        names = tuple(f"qa{i}" for i in range(1, n + 1)) \
            + tuple(f"qb{i}" for i in range(1, n + 1)) + ("ta", "tb")
        if m == 0:
            ctx = Context()
            qa = [ctx.var(f"qa{i}") for i in range(1, n + 1)]
            qb = [ctx.var(f"qb{i}") for i in range(1, n + 1)]
            ta, tb = ctx.var("ta"), ctx.var("tb")
            res = -((tb - ta) ** 2)
            for i in range(n):
                res = res + (qb[i] - qa[i]) ** 2
            return HJResult(value=res, variables=tuple(ctx.even_names),
                            meta={"mass": m, "constraint": "lightlike",
                                  "reduced": False})

        def make(sign):
            def val(values):
                dq2 = sum((values[f"qb{i}"] - values[f"qa{i}"]) ** 2
                          for i in range(1, n + 1))
                dt2 = (values["tb"] - values["ta"]) ** 2
                if dt2 <= dq2:
                    raise ValueError("separation must be timelike")
                return -sign * float(m) * math.sqrt(dt2 - dq2)
            return val
        return [HJResult(value=make(s), variables=names, branch=s,
                         meta={"mass": m}) for s in (1, -1)]
    raise ValueError(f"unknown variant {variant!r}")


def _split_pq(H: Poly):
    used = sorted(H.vars_used())
    ps = [nm for nm in used if nm.startswith("p")]
    qs = [nm for nm in used if nm.startswith("q")]
    if len(ps) > 1 or len(qs) > 1 or len(ps) + len(qs) != len(used):
        raise ValueError("expected a Hamiltonian in one (p, q) pair")
    return (ps[0] if ps else "p1"), (qs[0] if qs else "q1")


def _shape(H: Poly, p_name, q_name):
    """Return ('free', m) | ('ho', m, omega) | ('general',)."""
    cp2 = H.coefficient(p_name, 2)
    rest = H - cp2 * H.ctx.var(p_name) ** 2
    if not cp2.terms or cp2.vars_used() or not cp2.constant_series().is_constant():
        return ("general",)
    cp = cp2.constant_series().constant()
    if cp.im != 0 or cp.re <= 0:
        return ("general",)
    mass = 1 / (2 * cp.re)
    if rest.is_zero():
        return ("free", mass)
    cq2 = rest.coefficient(q_name, 2)
    rest2 = rest - cq2 * H.ctx.var(q_name) ** 2
    if rest2.is_zero() and not cq2.vars_used() \
            and cq2.constant_series().is_constant():
        cq = cq2.constant_series().constant()
        if cq.im == 0 and cq.re > 0:
            omega = 2 * math.sqrt(float(cp.re * cq.re))
            return ("ho", mass, omega)
    return ("general",)


def _action_integral(H: Poly, p_name, q_name, qa, qb, T,
                     steps: int = 400) -> float:
    """S_HJ for a single Hamiltonian: shoot q(T)=q_b, then ∫(p dq − H dt)."""
    ctx2 = Context()
    ctx2.even("q1")
    ctx2.even("p1")
    H2 = transplant(H, ctx2, {p_name: "p1", q_name: "q1"})
    csys = ConstraintSystem(n=1, k=1, kind="general", H=[H2], ctx=ctx2)
    traj = solve_evolution(csys, [1.0], q_a=[qa], q_b=[qb],
                           t_a=0.0, t_b=T, steps=steps)
    hv = _compile_poly(H2, ["q1", "p1"])
    dhdp = _compile_poly(H2.diff("p1"), ["q1", "p1"])
    y = np.array([traj.p[i, 0] * dhdp([traj.q[i, 0], traj.p[i, 0]])
                  - hv([traj.q[i, 0], traj.p[i, 0]])
                  for i in range(len(traj.grid))])
    h = (traj.grid[-1] - traj.grid[0]) / (len(traj.grid) - 1)
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum()
                          + 2 * y[2:-2:2].sum()))


def cm_hj(H: Poly, endpoint: str = "tt") -> HJResult:
    """Time-extended actions for an ordinary Hamiltonian H(p, q).

    endpoint 'tE' keeps (E^b, t_a, T); 'tt' fixes both times and depends
    on Dt alone.  Free particle stays exact, the harmonic oscillator gets
    its trigonometric kernel, anything else runs the shooting oracle.
    """
    if endpoint not in ("tE", "tt"):
        raise ValueError(f"unknown endpoint {endpoint!r}")
    p_name, q_name = _split_pq(H)
    shape = _shape(H, p_name, q_name)

    if shape[0] == "free" and endpoint == "tE":
        mass = shape[1]
        ctx = Context()
        qa, qb = ctx.var("qa1"), ctx.var("qb1")
        Eb, ta, T = ctx.var("Eb"), ctx.var("ta"), ctx.var("T1")
        S = (qb - qa) ** 2 * (T ** -1) * (mass / 2) + Eb * (ta + T)
        return HJResult(value=S, variables=tuple(ctx.even_names),
                        meta={"shape": "free", "mass": mass})
    if shape[0] == "free":
        mass = shape[1]
        ctx = Context()
        qa, qb, Dt = ctx.var("qa1"), ctx.var("qb1"), ctx.var("Dt")
        S = (qb - qa) ** 2 * (Dt ** -1) * (mass / 2)
        return HJResult(value=S, variables=tuple(ctx.even_names),
                        meta={"shape": "free", "mass": mass})

    if shape[0] == "ho":
        mass, omega = float(shape[1]), shape[2]

        def core(qa, qb, T):
            s = math.sin(omega * T)
            if abs(s) < 1e-12:
                raise ValueError("conjugate point: sin(omega T) = 0")
            return mass * omega * ((qa * qa + qb * qb) * math.cos(omega * T)
                                   - 2 * qa * qb) / (2 * s)
        if endpoint == "tE":
            def val(values):
                return core(values["qa1"], values["qb1"], values["T1"]) \
                    + values["Eb"] * (values["ta"] + values["T1"])
            names = ("qa1", "qb1", "Eb", "ta", "T1")
        else:
            def val(values):
                return core(values["qa1"], values["qb1"], values["Dt"])
            names = ("qa1", "qb1", "Dt")
        return HJResult(value=val, variables=names,
                        meta={"shape": "ho", "mass": mass, "omega": omega})

    if endpoint == "tE":
        def val(values):
            return _action_integral(H, p_name, q_name, values["qa1"],
                                    values["qb1"], values["T1"]) \
                + values["Eb"] * (values["ta"] + values["T1"])
        names = ("qa1", "qb1", "Eb", "ta", "T1")
    else:
        def val(values):
            return _action_integral(H, p_name, q_name, values["qa1"],
                                    values["qb1"], values["Dt"])
        names = ("qa1", "qb1", "Dt")
    return HJResult(value=val, variables=names, meta={"shape": "general"})


def circle_particle_hj(mass=1, k: int = 0) -> HJResult:
    """Free particle on the circle: one action per winding number."""
    mass = float(mass)

    def val(values):
        dq = values["qb1"] - values["qa1"] + 2 * math.pi * k
        return mass * dq * dq / (2 * values["Dt"])
    return HJResult(value=val, variables=("qa1", "qb1", "Dt"), branch=k,
                    meta={"winding": k, "mass": mass})


def verify_generating(S: HJResult, sys: ConstraintSystem, *, q_a, T,
                      p_b=None, q_b=None, fd_step: float = 1e-5,
                      rel_tol: float = 1e-6, steps: int = 400) -> dict:
    """Check the generating relations of S against the ODE oracle.

    p_a = -dS/dq_a, then q_b = -dS/dp_b (momentum polarization) or
    p_b = +dS/dq_b (position polarization), and dS/dT_a = -H_a at the
    final point.  Derivatives are central finite differences.
    """
    n, k = sys.n, sys.k
    q_a = np.asarray(q_a, dtype=float).reshape(n)
    T = np.asarray(T, dtype=float).reshape(k)
    if (p_b is None) == (q_b is None):
        raise ValueError("give exactly one of p_b, q_b")
    q_b_shoot = q_b
    wind = S.meta.get("winding", 0)
    if q_b is not None and wind:
        q_b_shoot = np.asarray(q_b, dtype=float).reshape(n) \
            + 2 * math.pi * wind
    traj = solve_evolution(sys, T, q_a=q_a, p_b=p_b, q_b=q_b_shoot,
                           steps=steps)
    pa_o, qb_o, pb_o = traj.p[0], traj.q[-1], traj.p[-1]

    vals = {f"qa{i + 1}": float(q_a[i]) for i in range(n)}
    if "Dt" in S.variables:
        if k != 1:
            raise ValueError("Dt polarization needs a single constraint")
        t_names = ["Dt"]
        vals["Dt"] = float(T[0])
    elif f"T{k}" in S.variables:
        t_names = [f"T{a + 1}" for a in range(k)]
        for a in range(k):
            vals[t_names[a]] = float(T[a])
    else:
        # group-element polarization: no T family to differentiate in
        t_names = []
    if p_b is not None:
        for i in range(n):
            vals[f"pb{i + 1}"] = float(np.asarray(p_b).reshape(n)[i])
    else:
        for i in range(n):
            vals[f"qb{i + 1}"] = float(np.asarray(q_b).reshape(n)[i])

    if isinstance(S.value, Poly):
        def ev(v):
            return S.value.evaluate(v).real
    else:
        ev = S.value

    def fd(name):
        up = dict(vals)
        dn = dict(vals)
        up[name] += fd_step
        dn[name] -= fd_step
        return (ev(up) - ev(dn)) / (2 * fd_step)

    hvals = [_compile_poly(h, sys.q_names + sys.p_names)(
        np.concatenate([qb_o, pb_o])) for h in sys.H]

    entries = {}

    def record(name, got, want):
        got, want = float(got), float(want)
        rel = abs(got - want) / max(1.0, abs(want))
        entries[name] = {"fd": got, "expected": want, "rel": rel,
                         "ok": rel < rel_tol}

    for i in range(n):
        record(f"dS_dqa{i + 1}", fd(f"qa{i + 1}"), -pa_o[i])
    if p_b is not None:
        for i in range(n):
            record(f"dS_dpb{i + 1}", fd(f"pb{i + 1}"), -qb_o[i])
    else:
        for i in range(n):
            record(f"dS_dqb{i + 1}", fd(f"qb{i + 1}"), pb_o[i])
    for a, nm in enumerate(t_names):
        want = -hvals[0] if nm == "Dt" else -hvals[a]
        record(f"dS_d{nm}", fd(nm), want)

    worst = max(e["rel"] for e in entries.values())
    return {"ok": all(e["ok"] for e in entries.values()),
            "max_rel": worst, "entries": entries,
            "oracle": {"drift": traj.drift, "rk_error": traj.rk_error,
                       "shooting_residual": traj.shooting_residual}}

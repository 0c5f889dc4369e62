"""Group-valued constraint actions: Phi, Psi, WZW and their identities."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..algebra import Context, Poly
from .hj import HJResult
from .numerics import expm_batch, rk4
from .systems import ConstraintSystem


def _cocycle_data(sys):
    """Accept a ConstraintSystem or a plain {rho, v, w, kappa} mapping."""
    if isinstance(sys, ConstraintSystem):
        if sys.kind != "biaffine":
            raise ValueError("needs biaffine data")
        rho = np.array([[[float(x) for x in row] for row in r]
                        for r in sys.rho])
        v = np.array([[float(x) for x in row] for row in sys.v])
        w = np.array([[float(x) for x in row] for row in sys.w])
        kappa = None if sys.kappa is None else \
            np.array([[float(x) for x in row] for row in sys.kappa])
        return rho, v, w, kappa
    rho = np.asarray(sys["rho"], dtype=float)
    v = np.asarray(sys["v"], dtype=float)
    w = np.asarray(sys["w"], dtype=float)
    kappa = sys.get("kappa")
    kappa = None if kappa is None else np.asarray(kappa, dtype=float)
    return rho, v, w, kappa


def _simpson_nodes(n: int):
    """Nodes on [0,1] and weights (including the step) for composite Simpson."""
    n += n % 2
    xs, h = np.linspace(0.0, 1.0, n + 1, retstep=True)
    wts = np.ones(n + 1)
    wts[1:-1:2] = 4.0
    wts[2:-1:2] = 2.0
    return xs, wts * (h / 3)


def _line_integrals(rho_xi, vec_v, row_w, n: int = 200):
    """(Phi, Psi) for the exponential path, one Richardson refinement."""
    def level(m):
        ts, wts = _simpson_nodes(m)
        R = expm_batch(ts[:, None, None] * rho_xi)
        phi = np.einsum("t,tij,j->i", wts, R, vec_v)
        Rn = expm_batch(-ts[:, None, None] * rho_xi)
        psi = np.einsum("t,i,tij->j", wts, row_w, Rn)
        return phi, psi
    p1, s1 = level(n)
    p2, s2 = level(2 * n)
    return (16 * p2 - p1) / 15, (16 * s2 - s1) / 15


def _wzw_double(rho_xi, vec_v, row_w, n: int = 200):
    """∫_{0<t1<t2<1} w e^{(t1-t2)rho} v, iterated Simpson, outer refined."""
    lam, in_w = _simpson_nodes(n)

    def outer(m):
        ts, out_w = _simpson_nodes(m)
        u = ts[:, None] * (lam[None, :] - 1.0)
        R = expm_batch(u[..., None, None] * rho_xi)
        f = np.einsum("i,toij,j->to", row_w, R, vec_v)
        inner = ts * (f @ in_w)
        return float(out_w @ inner)
    i1 = outer(n)
    i2 = outer(2 * n)
    return (16 * i2 - i1) / 15


def _partial_line(rho_xi, vec, n: int = 200, sign: float = 1.0,
                  row: bool = False):
    """∫_0^t e^{sign·s·rho}·vec ds (or vec·e^{sign·s·rho} for a row vec)
    at every Simpson node t of [0,1]; returns (nodes, weights, values)."""
    ts, out_w = _simpson_nodes(n)
    lam, in_w = _simpson_nodes(n)
    s = ts[:, None] * lam[None, :]
    R = expm_batch(sign * s[..., None, None] * rho_xi)
    if row:
        vals = np.einsum("l,i,tlij->tj", in_w, vec, R)
    else:
        vals = np.einsum("l,tlij,j->ti", in_w, R, vec)
    return ts, out_w, ts[:, None] * vals


def wzw(sys, xi, n: int = 200) -> dict:
    """The ordered double integral against its two-part decomposition.

    Returns WZW, W2 = Psi(g)·Phi(g), W3 = ∫ Psi(h) rho(xi) Phi(h) dt, and,
    when an invariant pairing kappa is available on a square system, the
    boundary-plus-current closed form as 'WZW_adjoint'.
    """
    rho, v, w, kappa = _cocycle_data(sys)
    k, dim = v.shape
    xi = np.asarray(xi, dtype=float).reshape(k)
    rho_xi = np.einsum("a,aij->ij", xi, rho)
    vec_v = xi @ v
    row_w = xi @ w

    WZW = _wzw_double(rho_xi, vec_v, row_w, n)
    phi_g, psi_g = _line_integrals(rho_xi, vec_v, row_w, n)
    W2 = float(psi_g @ phi_g)

    def w3_level(m):
        ts, out_w, phis = _partial_line(rho_xi, vec_v, m, sign=1.0)
        _, _, psis = _partial_line(rho_xi, row_w, m, sign=-1.0, row=True)
        integrand = np.einsum("ti,ij,tj->t", psis, rho_xi, phis)
        return float(out_w @ integrand)
    W3 = (16 * w3_level(2 * n) - w3_level(n)) / 15

    out = {"WZW": WZW, "W2": W2, "W3": W3,
           "Phi": phi_g, "Psi": psi_g}
    if kappa is not None and k == dim:
        invariant = all(
            np.allclose(rho[a].T @ kappa + kappa @ rho[a], 0.0, atol=1e-12)
            for a in range(k))
        if invariant:
            vbar = np.linalg.solve(kappa, w.T).T
            vb_xi = xi @ vbar

            def phibar_level(m):
                ts, wts = _simpson_nodes(m)
                R = expm_batch(ts[:, None, None] * rho_xi)
                return np.einsum("t,tij,j->i", wts, R, vb_xi)
            pb1, pb2 = phibar_level(n), phibar_level(2 * n)
            phibar_g = (16 * pb2 - pb1) / 15

            def current_level(m):
                ts, out_w, phis = _partial_line(rho_xi, vec_v, m)
                _, _, phibars = _partial_line(rho_xi, vb_xi, m)
                # [Phi(h), xi] in the adjoint realization is rho(Phi)·xi
                brk = np.einsum("ta,aij,j->ti", phis, rho, xi)
                vals = np.einsum("ti,ij,tj->t", phibars, kappa, brk)
                return float(out_w @ vals)
            cur = (16 * current_level(2 * n) - current_level(n)) / 15
            out["WZW_adjoint"] = float(
                0.5 * phibar_g @ kappa @ phi_g + 0.5 * cur)
    return out


def hj_biaffine(sys, xi, n: int = 200) -> HJResult:
    """Action at the exponential of xi, in the (q_a, p^b) polarization."""
    rho, v, w, _ = _cocycle_data(sys)
    k, dim = v.shape
    xi = np.asarray(xi, dtype=float).reshape(k)
    rho_xi = np.einsum("a,aij->ij", xi, rho)
    vec_v = xi @ v
    row_w = xi @ w
    phi, psi = _line_integrals(rho_xi, vec_v, row_w, n)
    W = _wzw_double(rho_xi, vec_v, row_w, n)
    Rg_inv = expm_batch(-rho_xi[None])[0]

    def val(values):
        qa = np.array([values[f"qa{i}"] for i in range(1, dim + 1)])
        pb = np.array([values[f"pb{i}"] for i in range(1, dim + 1)])
        return float(-pb @ Rg_inv @ qa - pb @ Rg_inv @ phi
                     - psi @ qa - W)
    names = tuple(f"qa{i}" for i in range(1, dim + 1)) \
        + tuple(f"pb{i}" for i in range(1, dim + 1))
    return HJResult(value=val, variables=names,
                    meta={"xi": xi.tolist(), "Rg_inv": Rg_inv, "Phi": phi,
                          "Psi": psi, "WZW": W})


def biaffine_path_data(sys, e, t_a: float = 0.0, t_b: float = 1.0,
                      steps: int = 400, init: dict | None = None) -> dict:
    """Transport (R, R^{-1}, Phi, Psi, WZW) along an arbitrary one-form e.

    e is a k-vector or a callable t -> k-vector; pass a previous result as
    init to continue along a concatenated path.
    """
    rho, v, w, _ = _cocycle_data(sys)
    k, dim = v.shape
    if callable(e):
        e_of_t = lambda t: np.asarray(e(t), dtype=float).reshape(k)
    else:
        const = np.asarray(e, dtype=float).reshape(k)
        e_of_t = lambda t: const

    if init is None:
        R0 = np.eye(dim)
        Rinv0 = np.eye(dim)
        phi0 = np.zeros(dim)
        psi0 = np.zeros(dim)
        wzw0 = 0.0
    else:
        R0, Rinv0 = init["R"], init["Rinv"]
        phi0, psi0, wzw0 = init["Phi"], init["Psi"], init["WZW"]

    def pack(R, Rinv, phi, psi, wz):
        return np.concatenate([R.ravel(), Rinv.ravel(), phi, psi, [wz]])

    def unpack(y):
        d2 = dim * dim
        R = y[:d2].reshape(dim, dim)
        Rinv = y[d2:2 * d2].reshape(dim, dim)
        phi = y[2 * d2:2 * d2 + dim]
        psi = y[2 * d2 + dim:2 * d2 + 2 * dim]
        return R, Rinv, phi, psi, y[-1]

    def f(t, y):
        R, Rinv, phi, psi, _ = unpack(y)
        ev = e_of_t(t)
        re = np.einsum("a,aij->ij", ev, rho)
        vv = ev @ v
        ww = ev @ w
        beta = ww @ Rinv
        return pack(R @ re, -re @ Rinv, R @ vv, beta, beta @ phi)

    end = rk4(f, pack(R0, Rinv0, phi0, psi0, wzw0), t_a, t_b, steps)[-1]
    R, Rinv, phi, psi, wz = unpack(end)
    return {"R": R, "Rinv": Rinv, "Phi": phi, "Psi": psi, "WZW": float(wz)}


def hj_biaffine_path(sys, e, t_a: float = 0.0, t_b: float = 1.0,
                     steps: int = 400) -> HJResult:
    """Like hj_biaffine but along a general path of one-form data."""
    data = biaffine_path_data(sys, e, t_a, t_b, steps)
    rho, v, w, _ = _cocycle_data(sys)
    dim = v.shape[1]
    Rinv, phi, psi, W = data["Rinv"], data["Phi"], data["Psi"], data["WZW"]

    def val(values):
        qa = np.array([values[f"qa{i}"] for i in range(1, dim + 1)])
        pb = np.array([values[f"pb{i}"] for i in range(1, dim + 1)])
        return float(-pb @ Rinv @ qa - pb @ Rinv @ phi - psi @ qa - W)
    names = tuple(f"qa{i}" for i in range(1, dim + 1)) \
        + tuple(f"pb{i}" for i in range(1, dim + 1))
    return HJResult(value=val, variables=names, meta=data)


def closed_trajectory(sys, xi, q_a, p_b, ts, n: int = 200):
    """(q(t), p(t)) from the transport closed forms, for cross-checks."""
    rho, v, w, _ = _cocycle_data(sys)
    k, dim = v.shape
    xi = np.asarray(xi, dtype=float).reshape(k)
    rho_xi = np.einsum("a,aij->ij", xi, rho)
    vec_v = xi @ v
    row_w = xi @ w
    q_a = np.asarray(q_a, dtype=float).reshape(dim)
    p_b = np.asarray(p_b, dtype=float).reshape(dim)
    Rg_inv = expm_batch(-rho_xi[None])[0]
    qs, ps = [], []
    lam, wts = _simpson_nodes(n)
    for t in ts:
        # q(t) = R(t)^{-1} (q_a + ∫_0^t R v), p(t) = (p^b R_g^{-1} + ∫_t^1 w R^{-1}) R(t)
        Rt_inv = expm_batch(-t * rho_xi[None])[0]
        R1 = expm_batch((t * lam)[:, None, None] * rho_xi)
        acc = t * np.einsum("l,lij,j->i", wts, R1, vec_v)
        q = Rt_inv @ (q_a + acc)
        s2 = t + (1 - t) * lam
        R2 = expm_batch(-s2[:, None, None] * rho_xi)
        acc2 = (1 - t) * np.einsum("l,i,lij->j", wts, row_w, R2)
        p = (p_b @ Rg_inv + acc2) @ expm_batch(t * rho_xi[None])[0]
        qs.append(q)
        ps.append(p)
    return np.array(qs), np.array(ps)


def _poly_mat_vec(M, x):
    return [sum(M[i][j] * x[j] for j in range(len(x))) for i in range(len(M))]


def _poly_row_mat(r, M):
    return [sum(r[i] * M[i][j] for i in range(len(r))) for j in range(len(M))]


def _series_data(sys: ConstraintSystem, ctx: Context):
    k, n = sys.k, sys.n
    T = [ctx.var(f"T{a}") for a in range(1, k + 1)]
    rhoT = [[Poly.zero(ctx) for _ in range(n)] for _ in range(n)]
    for a in range(k):
        for i in range(n):
            for j in range(n):
                if sys.rho[a][i][j]:
                    rhoT[i][j] = rhoT[i][j] + T[a] * sys.rho[a][i][j]
    vT = [sum((T[a] * sys.v[a][i] for a in range(k)), Poly.zero(ctx))
          for i in range(n)]
    wT = [sum((T[a] * sys.w[a][i] for a in range(k)), Poly.zero(ctx))
          for i in range(n)]
    return rhoT, vT, wT


def phi_series(sys: ConstraintSystem, ctx: Context, cap: int = 6):
    """Phi(e^T) = Σ_j rho(T)^j v(T) / (j+1)! through total degree cap."""
    rhoT, vT, _ = _series_data(sys, ctx)
    out = [Poly.zero(ctx) for _ in range(sys.n)]
    cur = vT
    fact = Fraction(1)
    for j in range(cap):
        fact = fact / (j + 1)
        for i in range(sys.n):
            out[i] = out[i] + cur[i] * fact
        cur = _poly_mat_vec(rhoT, cur)
    return out


def psi_series(sys: ConstraintSystem, ctx: Context, cap: int = 6):
    """Psi(e^T) = Σ_j (-1)^j w(T) rho(T)^j / (j+1)! through degree cap."""
    rhoT, _, wT = _series_data(sys, ctx)
    out = [Poly.zero(ctx) for _ in range(sys.n)]
    cur = wT
    fact = Fraction(1)
    for j in range(cap):
        fact = fact / (j + 1)
        sgn = fact if j % 2 == 0 else -fact
        for i in range(sys.n):
            out[i] = out[i] + cur[i] * sgn
        cur = _poly_row_mat(cur, rhoT)
    return out


def wzw_series(sys: ConstraintSystem, ctx: Context, cap: int = 6) -> Poly:
    """WZW(e^T) = Σ_j (-1)^j w(T) rho(T)^j v(T) / (j+2)! through degree cap."""
    rhoT, vT, wT = _series_data(sys, ctx)
    out = Poly.zero(ctx)
    cur = vT
    fact = Fraction(1, 2)
    for j in range(max(cap - 1, 0)):
        term = sum((wT[i] * cur[i] for i in range(sys.n)), Poly.zero(ctx))
        sgn = fact if j % 2 == 0 else -fact
        out = out + term * sgn
        fact = fact / (j + 3)
        cur = _poly_mat_vec(rhoT, cur)
    return out


def rginv_series(sys: ConstraintSystem, ctx: Context, cap: int = 6):
    """Matrix e^{-rho(T)} as polynomials in T through total degree cap."""
    rhoT, _, _ = _series_data(sys, ctx)
    n = sys.n
    eye = [[Poly.one(ctx) if i == j else Poly.zero(ctx) for j in range(n)]
           for i in range(n)]
    out = [row[:] for row in eye]
    cur = eye
    fact = Fraction(1)
    for j in range(1, cap + 1):
        fact = fact / j
        cur = [[sum((-rhoT[i][m] * cur[m][l] for m in range(n)),
                    Poly.zero(ctx)) for l in range(n)] for i in range(n)]
        for i in range(n):
            for l in range(n):
                out[i][l] = out[i][l] + cur[i][l] * fact
    return out
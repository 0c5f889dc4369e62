"""Trajectories of constrained evolution: RK4 oracle with shooting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra import Poly
from .numerics import rk4, rk4_with_check
from .systems import ConstraintSystem


@dataclass
class Trajectory:
    grid: np.ndarray
    q: np.ndarray
    p: np.ndarray
    e: np.ndarray
    drift: float
    rk_error: float
    shooting_residual: float = 0.0
    meta: dict = field(default_factory=dict)


def _compile_poly(p: Poly, names: list[str]):
    """Fast numeric evaluator u -> float for an hbar-free polynomial."""
    index = {n: i for i, n in enumerate(names)}
    ctx_names = p.ctx.even_names
    terms = []
    for m, c in p.terms.items():
        if not c.is_constant():
            raise ValueError("hbar-dependent polynomial")
        g = c.constant()
        if g.im != 0:
            raise ValueError("complex coefficients not supported here")
        terms.append((float(g.re), [(index[ctx_names[i]], e) for i, e in m]))

    def ev(u):
        total = 0.0
        for coef, exps in terms:
            x = coef
            for j, e in exps:
                x *= u[j] ** e
            total += x
        return total

    return ev


def _e_callable(e_spec, k):
    if callable(e_spec):
        return lambda t: np.asarray(e_spec(t), dtype=float)
    const = np.asarray(e_spec, dtype=float).reshape(k)
    return lambda t: const


def _rhs(sys: ConstraintSystem, e_of_t):
    n, k = sys.n, sys.k
    if sys.kind in ("linear", "biaffine"):
        V = np.array([[float(sys.v[a][i]) for a in range(k)]
                      for i in range(n)]) if sys.v is not None \
            else np.zeros((n, k))
        W = np.array([[float(sys.w[a][i]) for i in range(n)]
                      for a in range(k)]) if sys.w is not None \
            else np.zeros((k, n))
        if sys.kind == "linear":
            def f(t, y):
                e = e_of_t(t)
                return np.concatenate([V @ e, -W.T @ e])
            return f
        R = [np.array([[float(x) for x in row] for row in sys.rho[a]])
             for a in range(k)]

        def f(t, y):
            e = e_of_t(t)
            q, p = y[:n], y[n:]
            Re = sum(e[a] * R[a] for a in range(k))
            return np.concatenate([-Re @ q + V @ e, Re.T @ p - W.T @ e])
        return f

    names = sys.q_names + sys.p_names
    dHdp = [[_compile_poly(h.diff(pn), names) for pn in sys.p_names]
            for h in sys.H]
    dHdq = [[_compile_poly(h.diff(qn), names) for qn in sys.q_names]
            for h in sys.H]

    def f(t, y):
        e = e_of_t(t)
        dq = np.array([sum(e[a] * dHdp[a][i](y) for a in range(k))
                       for i in range(sys.n)])
        dp = np.array([-sum(e[a] * dHdq[a][i](y) for a in range(k))
                       for i in range(sys.n)])
        return np.concatenate([dq, dp])
    return f


def solve_evolution(sys: ConstraintSystem, e, *, q_a, p_a=None, p_b=None,
                    q_b=None, t_a: float = 0.0, t_b: float = 1.0,
                    steps: int = 400, max_iter: int = 25,
                    tol: float = 1e-10) -> Trajectory:
    """Integrate dq = e^a ∂H_a/∂p, dp = −e^a ∂H_a/∂q.

    Exactly one of p_a (initial data), p_b, or q_b (boundary data, solved
    by Newton shooting on the initial momentum) must be given.
    """
    n, k = sys.n, sys.k
    e_of_t = _e_callable(e, k)
    f = _rhs(sys, e_of_t)
    q_a = np.asarray(q_a, dtype=float).reshape(n)

    given = [x is not None for x in (p_a, p_b, q_b)]
    if sum(given) != 1:
        raise ValueError("give exactly one of p_a, p_b, q_b")

    if p_a is not None:
        pa = np.asarray(p_a, dtype=float).reshape(n)
        residual = 0.0
    else:
        if p_b is not None:
            target = np.asarray(p_b, dtype=float).reshape(n)
            pick = slice(n, 2 * n)
            pa = target.copy()
        else:
            target = np.asarray(q_b, dtype=float).reshape(n)
            pick = slice(0, n)
            pa = np.zeros(n)
        residual = None
        for _ in range(max_iter):
            end = rk4(f, np.concatenate([q_a, pa]), t_a, t_b, steps)[-1]
            r = end[pick] - target
            residual = float(np.max(np.abs(r)))
            if residual < tol:
                break
            J = np.empty((n, n))
            h = 1e-6
            for j in range(n):
                dp = pa.copy()
                dp[j] += h
                endj = rk4(f, np.concatenate([q_a, dp]), t_a, t_b, steps)[-1]
                J[:, j] = (endj[pick] - end[pick]) / h
            try:
                pa = pa - np.linalg.solve(J, r)
            except np.linalg.LinAlgError as exc:
                raise ValueError("shooting step is singular") from exc
        else:
            raise ValueError(
                f"shooting did not converge; residual {residual:.3e}")

    samples, rk_err = rk4_with_check(f, np.concatenate([q_a, pa]),
                                     t_a, t_b, steps)
    grid = np.linspace(t_a, t_b, steps + 1)
    q, p = samples[:, :n], samples[:, n:]
    e_samples = np.array([e_of_t(t) for t in grid])
    drift = _constraint_drift(sys, grid, q, p, e_of_t, t_a, t_b, steps)
    return Trajectory(grid=grid, q=q, p=p, e=e_samples, drift=drift,
                      rk_error=rk_err, shooting_residual=residual)


def _constraint_drift(sys, grid, q, p, e_of_t, t_a, t_b, steps) -> float:
    """max_t |H_a(p(t),q(t)) − transported H_a(t_a)|.

    The transport solves dc_a = e^b f^c_ba c_b's evolution; for abelian
    systems this is plain constancy of the constraints.
    """
    names = sys.q_names + sys.p_names
    evals = [_compile_poly(h, names) for h in sys.H]
    samples = np.array([[ev(np.concatenate([q[i], p[i]])) for ev in evals]
                        for i in range(len(grid))])
    k = sys.k
    F = np.array([[[float(sys.f[b][a][c]) for c in range(k)]
                   for a in range(k)] for b in range(k)])
    if np.allclose(F, 0.0):
        transported = np.broadcast_to(samples[0], samples.shape)
    else:
        def fc(t, c):
            e = e_of_t(t)
            return np.array([sum(e[b] * F[b][a][g] * c[g]
                                 for b in range(k) for g in range(k))
                             for a in range(k)])
        transported = rk4(fc, samples[0], t_a, t_b, steps)
    return float(np.max(np.abs(samples - transported)))

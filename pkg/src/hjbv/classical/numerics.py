"""Deterministic numerical kernels: RK4, Simpson quadrature, matrix exponential."""

from __future__ import annotations

import numpy as np


def rk4(f, y0: np.ndarray, t0: float, t1: float, steps: int) -> np.ndarray:
    """Fixed-step RK4; returns the (steps+1, dim) array of samples."""
    y = np.array(y0, dtype=float)
    h = (t1 - t0) / steps
    out = np.empty((steps + 1,) + y.shape)
    out[0] = y
    t = t0
    for i in range(steps):
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
        t += h
    return out


def rk4_final(f, y0, t0, t1, steps):
    return rk4(f, y0, t0, t1, steps)[-1]


def rk4_with_check(f, y0, t0, t1, steps: int = 400) -> tuple[np.ndarray, float]:
    """(samples at the base resolution, Richardson error estimate at t1)."""
    coarse = rk4(f, y0, t0, t1, steps)
    fine_end = rk4_final(f, y0, t0, t1, 2 * steps)
    err = float(np.max(np.abs(fine_end - coarse[-1]))) / 15.0
    return coarse, err


def simpson(f, a: float, b: float, n: int = 200) -> float:
    """Composite Simpson with n subintervals (rounded up to even)."""
    if a == b:
        return 0.0
    n += n % 2
    xs, h = np.linspace(a, b, n + 1, retstep=True)
    ys = np.array([f(x) for x in xs], dtype=float)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3 * (w @ ys))


def simpson_refined(f, a, b, n: int = 200) -> float:
    """One Richardson step on composite Simpson."""
    i1 = simpson(f, a, b, n)
    i2 = simpson(f, a, b, 2 * n)
    return (16 * i2 - i1) / 15


def ordered_double(f, n: int = 200) -> float:
    """∫_0^1 dt2 ∫_0^{t2} dt1 f(t1, t2), iterated Simpson + Richardson."""
    def inner(t2):
        return simpson(lambda t1: f(t1, t2), 0.0, t2, n)
    return simpson_refined(inner, 0.0, 1.0, n)


def expm(A: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Scaling and squaring with the (6,6) Padé approximant."""
    return expm_batch(np.asarray(A, dtype=float)[None])[0]


def expm_batch(As: np.ndarray) -> np.ndarray:
    """exp of a stacked batch (..., n, n); one shared scaling power."""
    A = np.asarray(As, dtype=float)
    n = A.shape[-1]
    norm = float(np.max(np.abs(A).sum(axis=-2))) if A.size else 0.0
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
        A = A / (2 ** s)
    # (6,6) Padé coefficients of exp
    c = [1.0, 1 / 2, 5 / 44, 1 / 66, 1 / 792, 1 / 15840, 1 / 665280]
    eye = np.broadcast_to(np.eye(n), A.shape)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    even = c[0] * eye + c[2] * A2 + c[4] * A4 + c[6] * A6
    odd = A @ (c[1] * eye + c[3] * A2 + c[5] * A4)
    P = np.linalg.solve(even - odd, even + odd)
    for _ in range(s):
        P = P @ P
    return P

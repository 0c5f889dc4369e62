"""Bernoulli generating series for the residual ghost pairing.

The endpoint ghost integral of a nonabelian system produces matrix
functions of ad_T: F_plus(x) = x/(1 - e^{-x}) pairs the initial ghosts,
F_minus(x) = -x/(e^x - 1) the final ones, and the even trace series
W(T) = sum_{n>=1} B_n/(n n!) tr(ad_T^n) the one-loop normalization.
All coefficients are exact Bernoulli fractions with B_1 = -1/2, so
F_plus(x) + F_minus(x) = x holds identically.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from ..algebra import Context, Poly

__all__ = ["GhostSeries", "ad_matrix", "bernoulli_numbers", "ghost_series",
           "matrix_series", "trace_series"]

DEFAULT_ORDER = 12


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0 .. B_n by the defining recurrence, B_1 = -1/2."""
    if n < 0:
        raise ValueError("need n >= 0")
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * B[j]
        B.append(-acc / (m + 1))
    return B


class GhostSeries:
    """Taylor coefficients of F_plus, F_minus and W up to a fixed order."""

    __slots__ = ("order", "f_plus", "f_minus", "w")

    def __init__(self, order: int = DEFAULT_ORDER):
        if order < 1:
            raise ValueError("order must be positive")
        B = bernoulli_numbers(order)
        fact = Fraction(1)
        f_plus, f_minus, w = [], [], [Fraction(0)]
        for n2 in range(order + 1):
            if n2:
                fact = fact / n2
            f_plus.append((-1) ** n2 * B[n2] * fact)
            f_minus.append(-B[n2] * fact)
            if n2:
                w.append(B[n2] * fact / n2)
        self.order = order
        self.f_plus = f_plus
        self.f_minus = f_minus
        self.w = w

    def __repr__(self):
        return f"GhostSeries(order={self.order})"


_cache: dict[int, GhostSeries] = {}


def ghost_series(order: int = DEFAULT_ORDER) -> GhostSeries:
    if order not in _cache:
        _cache[order] = GhostSeries(order)
    return _cache[order]


def ad_matrix(sys, ctx: Context, t_names) -> list[list[Poly]]:
    """(ad_T)^c_b = f^c_ab T^a as a k x k polynomial matrix."""
    k = sys.k
    t_names = list(t_names)
    assert len(t_names) == k
    T = [ctx.var(nm) for nm in t_names]
    out = [[Poly.zero(ctx) for _ in range(k)] for _ in range(k)]
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if sys.f[a][b][c]:
                    out[c][b] = out[c][b] + T[a] * sys.f[a][b][c]
    return out


def _mat_mul(A, B):
    k = len(A)
    ctx = A[0][0].ctx
    return [[sum((A[i][m] * B[m][j] for m in range(k)),
                 start=Poly.zero(ctx)) for j in range(k)] for i in range(k)]


def matrix_series(coeffs, M, order: int | None = None) -> list[list[Poly]]:
    """sum_n coeffs[n] M^n as a polynomial matrix, truncated at the list."""
    top = len(coeffs) - 1 if order is None else min(order, len(coeffs) - 1)
    k = len(M)
    ctx = M[0][0].ctx
    out = [[Poly.const(ctx, coeffs[0]) if i == j else Poly.zero(ctx)
            for j in range(k)] for i in range(k)]
    cur = None
    for n2 in range(1, top + 1):
        cur = M if cur is None else _mat_mul(cur, M)
        if all(p.is_zero() for row in cur for p in row):
            break
        if coeffs[n2]:
            for i in range(k):
                for j in range(k):
                    out[i][j] = out[i][j] + cur[i][j] * coeffs[n2]
    return out


def trace_series(sys, ctx: Context, t_names, order: int = DEFAULT_ORDER) -> Poly:
    """W(T) = sum_{n>=1} B_n/(n n!) tr(ad_T^n) through degree `order`."""
    gs = ghost_series(max(order, 1))
    M = ad_matrix(sys, ctx, t_names)
    k = sys.k
    out = Poly.zero(ctx)
    cur = M
    for n2 in range(1, order + 1):
        if n2 > 1:
            cur = _mat_mul(cur, M)
        if all(cur[i][j].is_zero() for i in range(k) for j in range(k)):
            break
        if gs.w[n2]:
            tr = sum((cur[i][i] for i in range(k)), start=Poly.zero(ctx))
            out = out + tr * gs.w[n2]
    return out

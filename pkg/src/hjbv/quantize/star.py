"""Star products for boundary symbols, and star exponentials.

Two conventions are carried around.  The "initial" product contracts
p-derivatives of the left factor with q-derivatives of the right one,
so that q * p = qp while p * q = pq + i hbar.  The "final" product
swaps the roles.  Both are finite sums on polynomials, one power of
hbar per contraction.
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra import Context, GR_I, GaussRational, HbarSeries, Poly
from ..algebra.series import default_truncation
from ..classical.systems import ConstraintSystem

IHBAR = HbarSeries.hbar_power(1, GR_I)
MINUS_I_OVER_HBAR = HbarSeries.hbar_power(-1, GaussRational(0, -1))


class StarAlgebra:
    """Conjugate variable pairs plus the endpoint convention."""

    __slots__ = ("ctx", "pairs", "side")

    def __init__(self, ctx: Context, pairs, side: str = "initial"):
        if side not in ("initial", "final"):
            raise ValueError("side must be 'initial' or 'final'")
        pairs = tuple((str(p), str(q)) for p, q in pairs)
        for p, q in pairs:
            ctx.even(p)
            ctx.even(q)
        self.ctx = ctx
        self.pairs = pairs
        self.side = side

    @property
    def p_names(self):
        return tuple(p for p, _ in self.pairs)

    @property
    def q_names(self):
        return tuple(q for _, q in self.pairs)

    def conjugate(self) -> "StarAlgebra":
        other = "final" if self.side == "initial" else "initial"
        return StarAlgebra(self.ctx, self.pairs, other)


def star_algebra(sys: ConstraintSystem, side: str = "initial",
                 ctx: Context | None = None,
                 p_names=None, q_names=None) -> StarAlgebra:
    """Algebra over the system's conjugate pairs, or over renamed ones."""
    ctx = ctx if ctx is not None else sys.ctx
    p_names = list(p_names) if p_names is not None else list(sys.p_names)
    q_names = list(q_names) if q_names is not None else list(sys.q_names)
    assert len(p_names) == len(q_names)
    return StarAlgebra(ctx, list(zip(p_names, q_names)), side)


def star_product(phi: Poly, psi: Poly, alg: StarAlgebra) -> Poly:
    """phi * psi.  Exact: the contraction sum terminates on polynomials."""
    ctx = alg.ctx
    if phi.ctx is not ctx or psi.ctx is not ctx:
        raise ValueError("variable mismatch: operands use a different context")
    # multi-index sum, factorized over pairs; coefficient (i hbar)^k / k!
    work = [(HbarSeries.one(), phi, psi)]
    for p_name, q_name in alg.pairs:
        da, db = (p_name, q_name) if alg.side == "initial" else (q_name, p_name)
        new = []
        for coef, a, b in work:
            k = 0
            while True:
                new.append((coef, a, b))
                a = a.diff(da)
                b = b.diff(db)
                if a.is_zero() or b.is_zero():
                    break
                k += 1
                coef = coef * IHBAR * Fraction(1, k)
        work = new
    out = Poly.zero(ctx)
    for coef, a, b in work:
        out = out + a * b * coef
    return out


def star_commutator(phi: Poly, psi: Poly, alg: StarAlgebra) -> Poly:
    return star_product(phi, psi, alg) - star_product(psi, phi, alg)


def star_commutator_check(sys, alg: StarAlgebra | None = None, f=None):
    """Check [H_a *, H_b] = +/- i hbar f^c_ab H_c for all pairs.

    The sign is + for the initial convention and - for the final one;
    an involutive family passes with the same f in both.  Accepts a
    ConstraintSystem, or a plain list of Poly constraints with optional
    structure constants (then alg is required).
    """
    if isinstance(sys, ConstraintSystem):
        H = list(sys.H)
        f = sys.f if f is None else f
        if alg is None:
            alg = star_algebra(sys)
    else:
        H = list(sys)
        if alg is None:
            raise ValueError("an algebra is required for a bare constraint list")
    k = len(H)
    if f is None:
        f = [[[Fraction(0)] * k for _ in range(k)] for _ in range(k)]
    sign = 1 if alg.side == "initial" else -1
    residuals = {}
    for a in range(k):
        for b in range(a + 1, k):
            res = star_commutator(H[a], H[b], alg)
            for c in range(k):
                if f[a][b][c]:
                    res = res - H[c] * (IHBAR * (sign * f[a][b][c]))
            if not res.is_zero():
                residuals[(a + 1, b + 1)] = res
    return {"ok": not residuals, "side": alg.side,
            "pairs_checked": k * (k - 1) // 2, "residuals": residuals}


class StarExp:
    """exp_*(-(i/hbar) H), either as an exact phase or a graded series.

    kind "phase": the value is e^{(i/hbar) phase} with phase free of hbar.
    kind "series": the value is the Poly itself, hbar-graded coefficients.
    """

    __slots__ = ("kind", "phase", "series", "grading", "order")

    def __init__(self, kind, phase=None, series=None, grading=(), order=None):
        assert kind in ("phase", "series")
        self.kind = kind
        self.phase = phase
        self.series = series
        self.grading = tuple(grading)
        self.order = order

    def log_phase(self, cap: int | None = None) -> Poly:
        """Phase S with e_* = e^{(i/hbar) S}; expands the log if needed."""
        if self.kind == "phase":
            return self.phase
        return star_log(self.series, self.grading,
                        cap if cap is not None else self.order)


def star_exp(H: Poly, alg: StarAlgebra, order: int | None = None) -> StarExp:
    """Star exponential of -(i/hbar) H.

    H affine in the paired variables gives the exact phase
    -(H + (1/2) sum_i dH/dq_i dH/dp_i); H supported on one side of
    every pair gives the ordinary exponential.  Otherwise the series
    is expanded order by order in the grading variables (the variables
    of H outside the pairs), which must appear in every term.
    """
    ctx = alg.ctx
    if H.ctx is not ctx:
        raise ValueError("variable mismatch: exponent uses a different context")
    p_names, q_names = alg.p_names, alg.q_names
    paired = list(p_names) + list(q_names)

    if H.degree_in(paired) <= 1:
        corr = Poly.zero(ctx)
        for p, q in alg.pairs:
            corr = corr + H.diff(q) * H.diff(p)
        return StarExp("phase", phase=-(H + corr * Fraction(1, 2)))
    if all(H.diff(q).is_zero() for q in q_names) or \
            all(H.diff(p).is_zero() for p in p_names):
        return StarExp("phase", phase=-H)

    grading = tuple(sorted(set(H.vars_used()) - set(paired)))
    if not grading or not H.truncate_degree(0, grading).is_zero():
        raise ValueError("star exponential needs a grading variable "
                         "in every term of the exponent")
    cap = order if order is not None else default_truncation()
    if cap > default_truncation():
        raise ValueError("truncation order exceeded: raise HJBV_TRUNCATION "
                         "to at least %d" % cap)
    total = Poly.one(ctx)
    cur = Poly.one(ctx)
    for k in range(1, cap + 1):
        cur = star_product(cur, H, alg) * (MINUS_I_OVER_HBAR * Fraction(1, k))
        cur = cur.truncate_degree(cap, grading)
        if cur.is_zero():
            break
        total = total + cur
    return StarExp("series", series=total, grading=grading, order=cap)


def star_log(series: Poly, grading, cap: int) -> Poly:
    """Phase S with series = e^{(i/hbar) S}, for a grading-unipotent series."""
    ctx = series.ctx
    n = series - Poly.one(ctx)
    if not n.truncate_degree(0, grading).is_zero():
        raise ValueError("log needs a series starting at 1")
    out = Poly.zero(ctx)
    power = Poly.one(ctx)
    for k in range(1, cap + 1):
        power = (power * n).truncate_degree(cap, grading)
        if power.is_zero():
            break
        out = out + power * Fraction((-1) ** (k + 1), k)
    return out * HbarSeries.hbar_power(1, GaussRational(0, -1))

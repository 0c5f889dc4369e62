"""Boundary and bulk action data for constant structure functions.

The boundary action lives on one endpoint copy (p, q, b, c) by
default, or on the doubled boundary with the final copy entering the
symplectic structure with a minus sign.  The bulk action is recorded
as kinetic term labels plus an explicit vertex list.  A graded
Poisson bracket on polynomial superfunctions backs the master
equation checks, and the half-density WKB kernel for a generating
function of the final polarization lives here as well.
"""

from __future__ import annotations

import cmath
import itertools
from fractions import Fraction

from ..algebra import GR_I, Grassmann, Poly, Scale
from ..algebra.states import ExpState
from ..classical.hj import transplant
from ..classical.systems import ConstraintSystem

# boundary one-form variant per case: which endpoint swaps b and c,
# and whether the final polarization is generated by an f(q, Q)
CASE_VARIANTS = {"I": "f", "II": "ftilde", "III": "fhat", "INL": "f",
                 "IIINL": "fcheck"}

VARIANT_FORMS = {
    "f": "p_a dq_a + b_a dc_a - P_b dQ_b - b_b dc_b",
    "ftilde": "p_a dq_a + b_a dc_a - P_b dQ_b - c_b db_b",
    "fhat": "p_a dq_a + c_a db_a - P_b dQ_b - b_b dc_b",
    "fcheck": "p_a dq_a + c_a db_a - P_b dQ_b - c_b db_b",
}


def right_deriv(g: Grassmann, name: str) -> Grassmann:
    """Right derivative in an odd variable."""
    ctx = g.ctx
    idx = ctx.odd_index(name)
    out = {}
    for mon, coef in g.terms.items():
        if idx not in mon:
            continue
        pos = mon.index(idx)
        c = coef if (len(mon) - 1 - pos) % 2 == 0 else -coef
        nm = mon[:pos] + mon[pos + 1:]
        s = out.get(nm)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(nm, None)
        else:
            out[nm] = s
    return Grassmann(ctx, out)


def _signed(pairs):
    for entry in pairs:
        if len(entry) == 3:
            yield entry
        else:
            yield entry[0], entry[1], 1


def graded_bracket(F: Grassmann, G: Grassmann, even_pairs, odd_pairs):
    """Poisson bracket for conjugate even pairs and odd b,c pairs.

    Entries may carry a third element +/-1 for the sign with which the
    pair enters the symplectic form (final endpoint copies enter with
    a minus).
    """
    out = Grassmann.zero(F.ctx)
    for p, q, s in _signed(even_pairs):
        term = F.diff_even(p) * G.diff_even(q) - F.diff_even(q) * G.diff_even(p)
        out = out + term * s
    for b, c, s in _signed(odd_pairs):
        term = right_deriv(F, b) * G.left_deriv(c) \
            + right_deriv(F, c) * G.left_deriv(b)
        out = out + term * s
    return out


class BvBfvData:
    """Boundary action, bulk vertex list, and the polarization tag.

    cme_residual is the graded self-bracket of the boundary action;
    it must vanish when the structure functions satisfy Jacobi.
    """

    __slots__ = ("ctx", "sys", "s_bfv", "kinetic", "vertices", "variant",
                 "ghost_numbers", "even_pairs", "odd_pairs", "cme_residual")

    def __init__(self, ctx, sys, s_bfv, kinetic, vertices, variant,
                 ghost_numbers, even_pairs, odd_pairs, cme_residual):
        self.ctx = ctx
        self.sys = sys
        self.s_bfv = s_bfv
        self.kinetic = tuple(kinetic)
        self.vertices = tuple(vertices)
        self.variant = variant
        self.ghost_numbers = dict(ghost_numbers)
        self.even_pairs = tuple(even_pairs)
        self.odd_pairs = tuple(odd_pairs)
        self.cme_residual = cme_residual

    @property
    def cme_ok(self) -> bool:
        return self.cme_residual.is_zero()

    @property
    def alpha_form(self) -> str:
        return VARIANT_FORMS[self.variant]


def _not_general(sys: ConstraintSystem):
    if sys.kind == "general":
        raise ValueError("general constraint families are not supported; "
                         "linear or biaffine only")


def _ghost_homogeneous(vertex: Grassmann, gh, ctx, expect=0) -> bool:
    degs = set()
    for mon, coef in vertex.terms.items():
        base = sum(gh.get(ctx.odd_names[i], 0) for i in mon)
        for pm, _ in coef.terms.items():
            degs.add(base + sum(gh.get(ctx.even_names[i], 0) * e
                                for i, e in pm))
    return degs <= {expect}


def build_bfv_action(sys: ConstraintSystem, variant: str = "f",
                     doubled: bool = False) -> BvBfvData:
    """Boundary action c H - (1/2) f b c c, on one endpoint or both."""
    _not_general(sys)
    if variant not in VARIANT_FORMS:
        raise ValueError("unknown variant " + repr(variant))
    ctx = sys.ctx
    k = sys.k

    def endpoint(H_list, cp, bp, sign):
        c = [ctx.odd_var(f"{cp}{a}") for a in range(1, k + 1)]
        b = [ctx.odd_var(f"{bp}{a}") for a in range(1, k + 1)]
        S = Grassmann.zero(ctx)
        for a in range(k):
            S = S + c[a] * H_list[a] * sign
        for g in range(k):
            for a in range(k):
                for b2 in range(a + 1, k):
                    if sys.f[a][b2][g]:
                        S = S - b[g] * c[a] * c[b2] * (sign * sys.f[a][b2][g])
        return S

    gh = {}
    if not doubled:
        S = endpoint(sys.H, "c", "b", 1)
        even_pairs = [(p, q, 1) for p, q in zip(sys.p_names, sys.q_names)]
        odd_pairs = [(f"b{a}", f"c{a}", 1) for a in range(1, k + 1)]
        for a in range(1, k + 1):
            gh[f"c{a}"] = 1
            gh[f"b{a}"] = -1
    else:
        ren_a = {n: n + "_a" for n in sys.p_names + sys.q_names}
        ren_b = {n: n + "_b" for n in sys.p_names + sys.q_names}
        Ha = [transplant(H, ctx, ren_a) for H in sys.H]
        Hb = [transplant(H, ctx, ren_b) for H in sys.H]
        S = endpoint(Ha, "ca", "ba", 1) + endpoint(Hb, "cb", "bb", -1)
        even_pairs = [(p + "_a", q + "_a", 1)
                      for p, q in zip(sys.p_names, sys.q_names)] \
            + [(p + "_b", q + "_b", -1)
               for p, q in zip(sys.p_names, sys.q_names)]
        odd_pairs = [(f"ba{a}", f"ca{a}", 1) for a in range(1, k + 1)] \
            + [(f"bb{a}", f"cb{a}", -1) for a in range(1, k + 1)]
        for a in range(1, k + 1):
            gh[f"ca{a}"] = gh[f"cb{a}"] = 1
            gh[f"ba{a}"] = gh[f"bb{a}"] = -1

    if not _ghost_homogeneous(S, gh, ctx, expect=1):
        raise AssertionError("boundary action is not ghost homogeneous")
    res = graded_bracket(S, S, even_pairs, odd_pairs)
    return BvBfvData(ctx, sys, S, (), (), variant, gh,
                     even_pairs, odd_pairs, res)


def build_bv_action(sys: ConstraintSystem, variant: str = "f") -> BvBfvData:
    """Bulk action data: kinetic labels plus the interaction vertices."""
    _not_general(sys)
    data = build_bfv_action(sys, variant=variant)
    ctx = sys.ctx
    n, k = sys.n, sys.k
    e = [ctx.var(f"e{a}") for a in range(1, k + 1)]
    c = [ctx.odd_var(f"c{a}") for a in range(1, k + 1)]
    cplus = [ctx.var(f"cplus{a}") for a in range(1, k + 1)]
    eplus = [ctx.odd_var(f"eplus{a}") for a in range(1, k + 1)]
    qplus = [ctx.odd_var(f"qplus{i}") for i in range(1, n + 1)]
    pplus = [ctx.odd_var(f"pplus{i}") for i in range(1, n + 1)]

    v_h = Grassmann.zero(ctx)
    for a in range(k):
        v_h = v_h - Grassmann.from_poly(e[a] * sys.H[a])
    v_anti = Grassmann.zero(ctx)
    for a in range(k):
        for i in range(n):
            v_anti = v_anti + c[a] * (qplus[i] * sys.H[a].diff(sys.p_names[i])
                                      - pplus[i] * sys.H[a].diff(sys.q_names[i]))
    v_ccc = Grassmann.zero(ctx)
    v_ece = Grassmann.zero(ctx)
    for g in range(k):
        for a in range(k):
            for b in range(a + 1, k):
                if sys.f[a][b][g]:
                    v_ccc = v_ccc - c[a] * c[b] * (cplus[g] * sys.f[a][b][g])
            for b in range(k):
                if sys.f[a][b][g]:
                    v_ece = v_ece + eplus[g] * c[a] * (e[b] * sys.f[a][b][g])

    gh = dict(data.ghost_numbers)
    for a in range(1, k + 1):
        gh[f"c{a}"] = 1
        gh[f"e{a}"] = 0
        gh[f"cplus{a}"] = -2
        gh[f"eplus{a}"] = -1
    for i in range(1, n + 1):
        gh[f"qplus{i}"] = -1
        gh[f"pplus{i}"] = -1
    vertices = (v_h, v_anti, v_ccc, v_ece)
    for v in vertices:
        if not _ghost_homogeneous(v, gh, ctx):
            raise AssertionError("vertex is not ghost homogeneous")
    return BvBfvData(ctx, sys, data.s_bfv,
                     ("p_i dq^i", "-eplus_a dc^a"), vertices, variant, gh,
                     data.even_pairs, data.odd_pairs, data.cme_residual)


# -- half-density WKB kernel ----------------------------------------------

class HalfDensityKernel(ExpState):
    """e^{-(i/hbar) f} sqrt(det d2f/dq dQ) with half-density measure.

    The algebraic part is an ordinary exponential state; the square
    root of the jacobian polynomial is carried separately and enters
    value().  When the jacobian is constant it is folded into the
    normalization and jac is 1.  Derived states built by the base
    class operations drop the jacobian factor, so evaluate on the
    kernel itself when jac is nonconstant.
    """

    __slots__ = ("jac", "q_names", "Q_names")

    def __init__(self, ctx, norm, phase, jac, q_names, Q_names):
        super().__init__(ctx, norm=norm, phase=phase)
        object.__setattr__(self, "jac", jac)
        object.__setattr__(self, "q_names", tuple(q_names))
        object.__setattr__(self, "Q_names", tuple(Q_names))

    def value(self, values, hbar):
        base = super().value(values, hbar)
        j = complex(self.jac.evaluate(values, hbar))
        return base * cmath.sqrt(j)


def _poly_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = None
    for j in range(n):
        minor = [[rows[i][l] for l in range(n) if l != j]
                 for i in range(1, n)]
        term = rows[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out


def wkb_half_density_kernel(f: Poly, q_names=("q1",), Q_names=("Q1",),
                            domain=None) -> HalfDensityKernel:
    """Half-density kernel generated by f(q, Q).

    The mixed second derivative must keep one sign on the test domain
    (a dict name -> sample values; default is a grid on [-2, 2]).
    """
    ctx = f.ctx
    n = len(Q_names)
    assert len(q_names) == n
    J = [[f.diff(q).diff(Q) for Q in Q_names] for q in q_names]
    jac = _poly_det(J)
    if jac.is_zero():
        raise ValueError("mixed second derivative vanishes identically")

    names = sorted(jac.vars_used())
    if domain is None:
        grid = [Fraction(x, 2) for x in range(-4, 5)]
        domain = {nm: grid for nm in names}
    pts = itertools.product(*(domain[nm] for nm in names)) if names else [()]
    signs = set()
    for pt in pts:
        v = complex(jac.evaluate(dict(zip(names, pt)), 1))
        signs.add(0 if v.real == 0 and v.imag == 0 else
                  (1 if v.real > 0 else -1))
    if signs != {1} and signs != {-1}:
        raise ValueError("mixed second derivative changes sign or vanishes "
                         "on the test domain")

    norm = Scale.sqrt_of(1, Fraction(-n, 2), Fraction(-n, 2))
    if not jac.vars_used():
        cs = jac.constant_series()
        if cs.is_constant() and cs.constant().im == 0:
            c = cs.constant().re
            root = Scale.sqrt_of(abs(c))
            if c < 0:
                root = root * Scale.of(GR_I)
            return HalfDensityKernel(ctx, norm * root, -f, Poly.one(ctx),
                                     q_names, Q_names)
    return HalfDensityKernel(ctx, norm, -f, jac, q_names, Q_names)

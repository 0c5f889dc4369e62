"""Constraint systems: involutive families H_alpha on T*R^n."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..algebra import Context, Poly
from ..linalg import mat, solve

Vec = tuple
Matrix = tuple


def poisson_bracket(f: Poly, g: Poly, p_names: Sequence[str],
                    q_names: Sequence[str]) -> Poly:
    """{f,g} = ∂f/∂p_i ∂g/∂q^i − ∂f/∂q^i ∂g/∂p_i."""
    out = Poly.zero(f.ctx)
    for pn, qn in zip(p_names, q_names):
        out = out + f.diff(pn) * g.diff(qn) - f.diff(qn) * g.diff(pn)
    return out


def _poly_to_fraction_column(p: Poly, monomials: Sequence) -> list[Fraction]:
    col = []
    for m in monomials:
        c = p.terms.get(m)
        if c is None:
            col.append(Fraction(0))
            continue
        if not c.is_constant():
            raise ValueError("hbar-dependent constraint")
        g = c.constant()
        if g.im != 0:
            raise ValueError("constraints must have real coefficients")
        col.append(g.re)
    return col


def check_involution(H: Sequence[Poly], p_names: Sequence[str],
                     q_names: Sequence[str]):
    """Solve {H_a,H_b} = f^c_ab H_c for constant f; exact, or raise."""
    k = len(H)
    monomials = sorted({m for h in H for m in h.terms})
    A = mat([[_poly_to_fraction_column(h, [m])[0] for h in H]
             for m in monomials])
    f = [[[Fraction(0)] * k for _ in range(k)] for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            br = poisson_bracket(H[a], H[b], p_names, q_names)
            extra = set(br.terms) - set(monomials)
            if extra:
                raise ValueError(
                    "bracket leaves the span of the constraints")
            rhs = tuple(_poly_to_fraction_column(br, monomials))
            sol = solve(A, rhs)
            if sol is None:
                raise ValueError(
                    "bracket is not a constant combination of constraints")
            # confirm: the solve may be a least-structure pick; recheck exactly
            chk = Poly.zero(br.ctx)
            for c in range(k):
                chk = chk + H[c] * sol[c]
            if chk != br:
                raise ValueError("involution residual is nonzero")
            for c in range(k):
                f[a][b][c] = sol[c]
                f[b][a][c] = -sol[c]
    return tuple(tuple(tuple(row) for row in plane) for plane in f)


class ConstraintSystem:
    """k involutive constraints on T*R^n, with exact structure constants.

    data layout: v[alpha] is a length-n vector, w[alpha] a length-n covector,
    rho[alpha] an n×n matrix, kappa an n×n pairing (adjoint/quadratic case).
    f[alpha][beta][gamma] are the structure constants of {H_a, H_b}.
    """

    def __init__(self, n: int, k: int, kind: str,
                 v: Optional[Sequence[Vec]] = None,
                 w: Optional[Sequence[Vec]] = None,
                 rho: Optional[Sequence[Matrix]] = None,
                 kappa: Optional[Matrix] = None,
                 H: Optional[Sequence[Poly]] = None,
                 ctx: Optional[Context] = None,
                 f=None):
        if kind not in ("linear", "biaffine", "general"):
            raise ValueError(f"unknown kind {kind!r}")
        self.n, self.k, self.kind = n, k, kind
        self.ctx = ctx if ctx is not None else Context()
        self.p_names = [f"p{i+1}" for i in range(n)]
        self.q_names = [f"q{i+1}" for i in range(n)]
        for nm in self.p_names + self.q_names:
            self.ctx.var(nm)
        self.v = _vectors(v, k, n) if v is not None else None
        self.w = _vectors(w, k, n) if w is not None else None
        self.rho = (tuple(mat(r) for r in rho) if rho is not None else None)
        self.kappa = mat(kappa) if kappa is not None else None

        if H is None:
            if kind == "general":
                raise ValueError("general systems need explicit constraints")
            H = [self._build_H(a) for a in range(k)]
        self.H = list(H)

        self.f = check_involution(self.H, self.p_names, self.q_names)
        if f is not None:
            given = tuple(tuple(tuple(Fraction(x) for x in row)
                                for row in plane) for plane in f)
            if given != self.f:
                raise ValueError("declared structure constants disagree "
                                 "with the computed ones")
        if kind == "biaffine":
            self._check_rho_bracket()
        self.unimodular = all(
            sum(self.f[a][b][a] for a in range(k)) == 0 for b in range(k))

    def _build_H(self, a: int) -> Poly:
        p = [self.ctx.var(nm) for nm in self.p_names]
        q = [self.ctx.var(nm) for nm in self.q_names]
        h = Poly.zero(self.ctx)
        if self.kind == "biaffine":
            # H_a = -p rho_a q + p v_a + w_a q; the minus sign is what makes
            # rho a Lie algebra homomorphism under this bracket convention
            r = self.rho[a]
            for i in range(self.n):
                for j in range(self.n):
                    if r[i][j]:
                        h = h - p[i] * q[j] * r[i][j]
        if self.v is not None:
            for i in range(self.n):
                if self.v[a][i]:
                    h = h + p[i] * self.v[a][i]
        if self.w is not None:
            for i in range(self.n):
                if self.w[a][i]:
                    h = h + q[i] * self.w[a][i]
        return h

    def _check_rho_bracket(self):
        from ..linalg import mat_mul, mat_sub, mat_scale, mat_add, zeros
        for a in range(self.k):
            for b in range(self.k):
                comm = mat_sub(mat_mul(self.rho[a], self.rho[b]),
                               mat_mul(self.rho[b], self.rho[a]))
                want = zeros(self.n, self.n)
                for c in range(self.k):
                    if self.f[a][b][c]:
                        want = mat_add(want,
                                       mat_scale(self.f[a][b][c], self.rho[c]))
                if comm != want:
                    raise ValueError("rho does not represent the structure "
                                     "constants")

    def A_matrix(self):
        """A_{ab} = w_a · v_b (the quadratic coefficient of the action)."""
        if self.v is None or self.w is None:
            raise ValueError("system carries no (v, w) data")
        return mat([[sum(wa * vb for wa, vb in zip(self.w[a], self.v[b]))
                     for b in range(self.k)] for a in range(self.k)])

    def __repr__(self):
        return f"ConstraintSystem(n={self.n}, k={self.k}, kind={self.kind!r})"


def _vectors(rows, k, n):
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if len(out) != k or any(len(r) != n for r in out):
        raise ValueError("vector data must be k rows of length n")
    return out


def system_from_dict(d: dict) -> ConstraintSystem:
    """Build a system from parsed TOML/JSON: {n, k, kind, v, w, rho, kappa, f}."""
    kw = dict(n=int(d["n"]), k=int(d["k"]), kind=d["kind"])
    for key in ("v", "w"):
        if key in d and d[key] is not None:
            kw[key] = [[Fraction(str(x)) for x in row] for row in d[key]]
    if d.get("rho") is not None:
        kw["rho"] = [[[Fraction(str(x)) for x in row] for row in m]
                     for m in d["rho"]]
    if d.get("kappa") is not None:
        kw["kappa"] = [[Fraction(str(x)) for x in row] for row in d["kappa"]]
    if d.get("f") is not None:
        kw["f"] = [[[Fraction(str(x)) for x in row] for row in plane]
                   for plane in d["f"]]
    return ConstraintSystem(**kw)

"""Generating functions with parameters and the lagrangians they cut out.

A family psi(q; T) generates L = {(q, ∂psi/∂q) : ∂psi/∂T = 0}.  A two-sided
family psi(q, Q; T) generates a relation with p = −∂psi/∂q, P = +∂psi/∂Q on
the critical set.  Quadratic families give exact linear subspaces; otherwise
a point evaluator of the variety is returned.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

from ..algebra import Poly
from ..linalg import F0, mat, kernel, identity
from .spaces import Subspace, SymplecticSpace, relation_space


class MorseFamily:
    """base_vars: list of q names, or (q names, Q names) for a relation."""

    def __init__(self, base_vars, param_vars: Sequence[str], psi: Poly):
        if (isinstance(base_vars, tuple) and len(base_vars) == 2
                and isinstance(base_vars[0], (list, tuple))):
            self.q_vars = list(base_vars[0])
            self.Q_vars = list(base_vars[1])
            self.two_sided = True
        else:
            self.q_vars = list(base_vars)
            self.Q_vars = []
            self.two_sided = False
        self.param_vars = list(param_vars)
        self.psi = psi
        declared = set(self.q_vars) | set(self.Q_vars) | set(self.param_vars)
        ctx = psi.ctx
        for m, c in psi.terms.items():
            if not c.is_constant():
                raise ValueError("family must not depend on hbar")
            for idx, _ in m:
                if ctx.even_names[idx] not in declared:
                    raise ValueError(
                        f"undeclared variable {ctx.even_names[idx]!r}")

    def is_quadratic(self) -> bool:
        return all(sum(e for _, e in m) == 2 for m in self.psi.terms)


def _linear_form(p: Poly, order: Sequence[str]) -> tuple:
    """Coefficient row of a homogeneous linear polynomial in the given order."""
    const, lin = p.as_affine()
    if not const.is_zero():
        raise ValueError("family is quadratic but not homogeneous")
    names = p.ctx.even_names
    row = {}
    for i, c in lin.items():
        g = c.constant()
        if g.im != 0:
            raise ValueError("family coefficients must be real rational")
        row[names[i]] = g.re
    return tuple(row.get(n, F0) for n in order)


def _diff(psi: Poly, name: str) -> Poly:
    if not psi.ctx.has_even(name):
        return Poly.zero(psi.ctx)
    return psi.diff(name)


def lagrangian_from_morse_family(
        F: MorseFamily) -> Union[Subspace, Callable[[Mapping], dict]]:
    if not F.is_quadratic():
        return _fiber_evaluator(F)

    order = F.q_vars + F.Q_vars + F.param_vars
    nu = len(order)
    crit = [_linear_form(_diff(F.psi, t), order) for t in F.param_vars]
    basis = kernel(mat(crit)) if crit else [row for row in identity(nu)]

    n, N = len(F.q_vars), len(F.Q_vars)
    dq = [_linear_form(_diff(F.psi, q), order) for q in F.q_vars]
    dQ = [_linear_form(_diff(F.psi, Q), order) for Q in F.Q_vars]

    def dot(row, u):
        return sum(a * b for a, b in zip(row, u))

    if not F.two_sided:
        amb = SymplecticSpace.standard(n)
        vecs = [tuple(u[:n]) + tuple(dot(r, u) for r in dq) for u in basis]
        return Subspace.span(amb, vecs)

    amb = relation_space(SymplecticSpace.standard(n),
                         SymplecticSpace.standard(N))
    vecs = [tuple(u[:n]) + tuple(-dot(r, u) for r in dq)
            + tuple(u[n:n + N]) + tuple(dot(r, u) for r in dQ)
            for u in basis]
    return Subspace.span(amb, vecs)


def _fiber_evaluator(F: MorseFamily) -> Callable[[Mapping], dict]:
    """Point evaluator for a non-quadratic family.

    Takes exact values for all base and parameter variables, checks the
    critical equations hold exactly, and returns the phase space point.
    """
    def fiber_point(values: Mapping) -> dict:
        vals = {k: Fraction(v) for k, v in values.items()}
        for t in F.param_vars:
            g = _diff(F.psi, t).subs(vals)
            if not g.is_zero():
                raise ValueError(f"point is not critical in {t!r}")
        point = {}
        for q in F.q_vars:
            point[q] = vals[q]
            point["p_" + q] = _eval_rational(_diff(F.psi, q), vals)
            if F.two_sided:
                point["p_" + q] = -point["p_" + q]
        for Q in F.Q_vars:
            point[Q] = vals[Q]
            point["P_" + Q] = _eval_rational(_diff(F.psi, Q), vals)
        return point

    return fiber_point


def _eval_rational(p: Poly, vals: Mapping[str, Fraction]) -> Fraction:
    out = p.subs(vals)
    if not out.is_zero() and out.terms.get(()) is None:
        raise ValueError("missing values for some variables")
    return out.constant_series().constant().re

"""Linear symplectic spaces, subspace classification, reduction, relations."""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Optional, Sequence

from ..linalg import (F0, F1, Mat, Vec, column_reduced, det, hstack, identity,
                      kernel, mat, mat_mul, mat_scale, mat_vec, rank, rref,
                      shape, solve, transpose, vec, vstack, zeros)


class SymplecticSpace:
    """Even-dimensional rational vector space with an invertible ω."""

    def __init__(self, basis_labels: Sequence[str], omega: Mat,
                 split: Optional[tuple[int, int]] = None):
        omega = mat(omega)
        n = len(basis_labels)
        if shape(omega) != (n, n):
            raise ValueError("omega shape does not match the basis")
        if n % 2:
            raise ValueError("symplectic dimension must be even")
        if transpose(omega) != mat_scale(-1, omega):
            raise ValueError("omega must be antisymmetric")
        if det(omega) == 0:
            raise ValueError("omega must be invertible")
        self.basis_labels = list(basis_labels)
        self.omega = omega
        self.dim = n
        self.split = split   # factor dims when this is a relation space

    @staticmethod
    def standard(n: int) -> "SymplecticSpace":
        """Coordinates (q1..qn, p1..pn) with ω(x,y) = p·q' − q·p'."""
        labels = [f"q{i+1}" for i in range(n)] + [f"p{i+1}" for i in range(n)]
        omega = [[F0] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            omega[i][n + i] = -F1
            omega[n + i][i] = F1
        return SymplecticSpace(labels, omega)

    def bar(self) -> "SymplecticSpace":
        """Same space with the opposite symplectic form."""
        return SymplecticSpace(self.basis_labels, mat_scale(-1, self.omega))

    def pairing(self, v: Vec, w: Vec) -> Fraction:
        return sum(a * b for a, b in zip(v, mat_vec(self.omega, vec(w))))

    def __eq__(self, other):
        return (isinstance(other, SymplecticSpace)
                and self.omega == other.omega
                and self.basis_labels == other.basis_labels)

    def __repr__(self):
        return f"SymplecticSpace(dim={self.dim})"


def relation_space(v1: SymplecticSpace, v2: SymplecticSpace) -> SymplecticSpace:
    """V̄₁ ⊕ V₂ with block form diag(−ω₁, ω₂); records the factor split."""
    labels = [f"{l}.a" for l in v1.basis_labels] + [f"{l}.b" for l in v2.basis_labels]
    d1, d2 = v1.dim, v2.dim
    omega = [[F0] * (d1 + d2) for _ in range(d1 + d2)]
    for i in range(d1):
        for j in range(d1):
            omega[i][j] = -v1.omega[i][j]
    for i in range(d2):
        for j in range(d2):
            omega[d1 + i][d1 + j] = v2.omega[i][j]
    return SymplecticSpace(labels, omega, split=(d1, d2))


class Subspace:
    """Subspace of a symplectic space; basis columns in reduced echelon form."""

    def __init__(self, ambient: SymplecticSpace, basis: Mat):
        basis = mat(basis) if basis else ()
        if basis and len(basis) != ambient.dim:
            raise ValueError("basis vectors must have ambient dimension")
        self.ambient = ambient
        self.basis = column_reduced(basis) if basis else ()

    @staticmethod
    def span(ambient: SymplecticSpace, vectors: Sequence[Vec]) -> "Subspace":
        if not vectors:
            return Subspace(ambient, ())
        return Subspace(ambient, transpose(mat(vectors)))

    @staticmethod
    def from_equations(ambient: SymplecticSpace, rows: Mat) -> "Subspace":
        """Solution space of the homogeneous system rows · v = 0."""
        if not rows:
            return Subspace.full(ambient)
        return Subspace.span(ambient, kernel(mat(rows)))

    @staticmethod
    def full(ambient: SymplecticSpace) -> "Subspace":
        return Subspace(ambient, identity(ambient.dim))

    @staticmethod
    def zero(ambient: SymplecticSpace) -> "Subspace":
        return Subspace(ambient, ())

    @property
    def dim(self) -> int:
        return shape(self.basis)[1] if self.basis else 0

    def vectors(self) -> list[Vec]:
        return list(transpose(self.basis)) if self.basis else []

    def contains(self, v: Vec) -> bool:
        if all(x == 0 for x in v):
            return True
        if not self.basis:
            return False
        return solve(self.basis, vec(v)) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def add(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, self.vectors() + other.vectors())

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient)
        A, B = self.basis, other.basis
        ka = shape(A)[1]
        combined = hstack(A, mat_scale(-1, B))
        vecs = [mat_vec(A, k[:ka]) for k in kernel(combined)]
        return Subspace.span(self.ambient, vecs)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient.omega == other.ambient.omega
                and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient.dim})"


def omega_complement(W: Subspace) -> Subspace:
    """W^⊥ = {v : ω(v, w) = 0 for all w in W}."""
    amb = W.ambient
    rows = [mat_vec(amb.omega, w) for w in W.vectors()]
    return Subspace.from_equations(amb, mat(rows) if rows else ())


def classify_subspace(W: Subspace) -> str:
    perp = omega_complement(W)
    iso = perp.contains_subspace(W)
    coiso = W.contains_subspace(perp)
    if iso and coiso:
        return "lagrangian"
    if iso:
        return "isotropic"
    if coiso:
        return "coisotropic"
    if W.intersect(perp).dim == 0:
        return "symplectic"
    return "none"


def _quotient_data(C: Subspace):
    """Representatives of C/C^⊥ and the reduced symplectic space."""
    perp = omega_complement(C)
    if not C.contains_subspace(perp):
        raise ValueError("subspace is not coisotropic")
    reps = []
    current = perp.vectors()
    base_rank = len(current)
    for v in C.vectors():
        cand = current + reps + [v]
        if rank(mat(cand)) > base_rank + len(reps):
            reps.append(v)
    m = len(reps)
    omega_red = [[C.ambient.pairing(a, b) for b in reps] for a in reps]
    reduced = SymplecticSpace([f"r{i+1}" for i in range(m)], omega_red)
    return perp, reps, reduced


def coisotropic_reduce(C: Subspace, L: Subspace) -> Subspace:
    """Image of L ∩ C in the reduced space C/C^⊥."""
    perp, reps, reduced = _quotient_data(C)
    section = transpose(mat(perp.vectors() + reps)) if (perp.vectors() or reps) \
        else ()
    r = perp.dim
    coords = []
    for x in L.intersect(C).vectors():
        alpha = solve(section, vec(x))
        coords.append(tuple(alpha[r:]))
    return Subspace.span(reduced, coords)


def evolution_relation_of_coisotropic(C: Subspace) -> Subspace:
    """L_C = {(v, v′) ∈ C ⊕ C : v′ − v ∈ C^⊥} inside V̄ ⊕ V."""
    perp = omega_complement(C)
    if not C.contains_subspace(perp):
        raise ValueError("subspace is not coisotropic")
    amb = relation_space(C.ambient, C.ambient)
    zero = (F0,) * C.ambient.dim
    vecs = [c + c for c in C.vectors()] + [zero + u for u in perp.vectors()]
    return Subspace.span(amb, vecs)


def relation_projection_coisotropy(L: Subspace) -> Subspace:
    """First-factor projection of a lagrangian relation; checks coisotropy."""
    amb = L.ambient
    if amb.split is None:
        raise ValueError("ambient does not carry a relation split")
    if classify_subspace(L) != "lagrangian":
        raise ValueError("relation is not lagrangian")
    d1 = amb.split[0]
    v1 = SymplecticSpace([l[:-2] for l in amb.basis_labels[:d1]],
                         mat_scale(-1, tuple(r[:d1] for r in amb.omega[:d1])))
    proj = Subspace.span(v1, [x[:d1] for x in L.vectors()])
    if classify_subspace(proj) not in ("coisotropic", "lagrangian"):
        raise ValueError("projection is not coisotropic")
    return proj


def compose_relations(L1: Subspace, L2: Subspace) -> Subspace:
    """Set composition L2 ∘ L1 = {(x, z) : ∃y (x,y)∈L1, (y,z)∈L2}."""
    s1, s2 = L1.ambient.split, L2.ambient.split
    if s1 is None or s2 is None:
        raise ValueError("relation ambients must carry factor splits")
    d1, dm = s1
    dm2, d3 = s2
    if dm != dm2:
        raise ValueError("middle factors have different dimensions")
    b1 = L1.vectors()
    b2 = L2.vectors()
    k1, k2 = len(b1), len(b2)
    Y1 = transpose(mat([v[d1:] for v in b1])) if b1 else zeros(dm, 0)
    Y2 = transpose(mat([v[:dm] for v in b2])) if b2 else zeros(dm, 0)
    system = hstack(Y1, mat_scale(-1, Y2))
    kern = kernel(system) if k1 + k2 else []
    excess = len(kern) - max(0, k1 + k2 - dm)
    if excess > 0:
        warnings.warn(f"relation composition is not clean: rank drop {excess}",
                      stacklevel=2)

    lab1 = L1.ambient.basis_labels[:d1]
    lab3 = L2.ambient.basis_labels[dm:]
    om1 = mat_scale(-1, tuple(r[:d1] for r in L1.ambient.omega[:d1]))
    om3 = tuple(r[dm:] for r in L2.ambient.omega[dm:])
    amb = relation_space(SymplecticSpace([l[:-2] for l in lab1], om1),
                         SymplecticSpace([l[:-2] for l in lab3], om3))

    vecs = []
    for kv in kern:
        a, b = kv[:k1], kv[k1:]
        x = tuple(sum(ai * v[j] for ai, v in zip(a, b1)) for j in range(d1))
        z = tuple(sum(bi * v[dm + j] for bi, v in zip(b, b2)) for j in range(d3))
        vecs.append(x + z)
    return Subspace.span(amb, vecs)

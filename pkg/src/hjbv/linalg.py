"""Exact rational matrices as tuples of tuples of Fraction.

Row-major throughout; all operations are pure and return new matrices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Mat = tuple  # tuple of row tuples of Fraction
Vec = tuple  # tuple of Fraction

F0 = Fraction(0)
F1 = Fraction(1)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def vec(xs: Iterable) -> Vec:
    return tuple(Fraction(x) for x in xs)


def shape(M: Mat) -> tuple[int, int]:
    return (len(M), len(M[0]) if M else 0)


def identity(n: int) -> Mat:
    return tuple(tuple(F1 if i == j else F0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Mat:
    return tuple((F0,) * c for _ in range(r))


def transpose(M: Mat) -> Mat:
    return tuple(zip(*M)) if M else ()


def mat_add(A: Mat, B: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Mat, B: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, M: Mat) -> Mat:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in M)


def mat_mul(A: Mat, B: Mat) -> Mat:
    Bt = transpose(B)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in Bt)
                 for row in A)


def mat_vec(A: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in A)


def hstack(A: Mat, B: Mat) -> Mat:
    if not A:
        return B
    if not B:
        return A
    return tuple(ra + rb for ra, rb in zip(A, B))


def vstack(A: Mat, B: Mat) -> Mat:
    return tuple(A) + tuple(B)


def rref(M: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and pivot column indices."""
    rows = [list(r) for r in M]
    nr, nc = len(rows), len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(M: Mat) -> int:
    return len(rref(M)[1])


def kernel(M: Mat) -> list[Vec]:
    """Basis of the right null space, one vector per free column."""
    R, pivots = rref(M)
    nc = shape(M)[1]
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [F0] * nc
        v[fc] = F1
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(tuple(v))
    return basis


def solve(A: Mat, b: Vec) -> Optional[Vec]:
    """One solution of A x = b, or None if inconsistent."""
    nr, nc = shape(A)
    aug = tuple(row + (bb,) for row, bb in zip(A, b))
    R, pivots = rref(aug)
    if nc in pivots:
        return None
    x = [F0] * nc
    for r, pc in enumerate(pivots):
        x[pc] = R[r][nc]
    return tuple(x)


def inverse(A: Mat) -> Mat:
    n = len(A)
    R, pivots = rref(hstack(A, identity(n)))
    if pivots != tuple(range(n)):
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in R)


def det(A: Mat) -> Fraction:
    rows = [list(r) for r in A]
    n = len(rows)
    d = F1
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c]), None)
        if pr is None:
            return F0
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            d = -d
        pv = rows[c][c]
        d *= pv
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / pv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def column_reduced(M: Mat) -> Mat:
    """Canonical basis for the column span: reduced column echelon, no zero columns."""
    R, pivots = rref(transpose(M))
    return transpose(R[:len(pivots)])


def congruent_diagonalize(A: Mat) -> tuple[Mat, Mat]:
    """For symmetric A, return (P, D) with Pᵀ A P = D diagonal."""
    n = len(A)
    M = [list(r) for r in A]
    P = [list(r) for r in identity(n)]

    def add_col(dst, src, f):
        # column op: col_dst += f * col_src, matching row op keeps congruence
        for i in range(n):
            M[i][dst] += f * M[i][src]
        for j in range(n):
            M[dst][j] += f * M[src][j]
        for i in range(n):
            P[i][dst] += f * P[i][src]

    def swap_col(a, b):
        for i in range(n):
            M[i][a], M[i][b] = M[i][b], M[i][a]
        M[a], M[b] = M[b], M[a]
        for i in range(n):
            P[i][a], P[i][b] = P[i][b], P[i][a]

    for k in range(n):
        if not M[k][k]:
            j = next((j for j in range(k + 1, n) if M[j][j]), None)
            if j is not None:
                swap_col(k, j)
            else:
                j = next((j for j in range(k + 1, n) if M[k][j]), None)
                if j is None:
                    continue  # row and column k already zero
                add_col(k, j, F1)
        pv = M[k][k]
        for j in range(k + 1, n):
            if M[k][j]:
                add_col(j, k, -M[k][j] / pv)
    return tuple(tuple(r) for r in P), tuple(tuple(r) for r in M)


def signature(D: Mat) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a diagonal matrix."""
    pos = sum(1 for i in range(len(D)) if D[i][i] > 0)
    neg = sum(1 for i in range(len(D)) if D[i][i] < 0)
    return pos, neg, len(D) - pos - neg

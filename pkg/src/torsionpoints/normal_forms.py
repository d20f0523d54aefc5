"""Smith and Hermite normal forms of small integer matrices.

Plain exact elimination on lists of Python ints with explicit unimodular
transforms. Matrices are lists of rows.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = transpose(B)
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in A]


class SmithForm(NamedTuple):
    """P @ A @ Q == D with P, Q unimodular; Pinv is the inverse of P."""

    D: Matrix
    P: Matrix
    Q: Matrix
    Pinv: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithForm:
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    P, Pinv, Q = identity(m), identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        P[i], P[j] = P[j], P[i]
        for row in Pinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for M in (D, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for M in (D, P):
            M[dst] = [x + q * y for x, y in zip(M[dst], M[src])]
        for row in Pinv:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        for M in (D, Q):
            for row in M:
                row[dst] += q * row[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        P[i] = [-x for x in P[i]]
        for row in Pinv:
            row[i] = -row[i]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                return SmithForm(D, P, Q, Pinv)
            _, i, j = min(entries)
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            negate_row(t)
    return SmithForm(D, P, Q, Pinv)


def hermite_normal_form(A: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of the row lattice of A, zero rows dropped.

    Pivots are positive and entries above each pivot lie in [0, pivot).
    """
    H = [list(map(int, row)) for row in A if any(row)]
    if not H:
        return []
    ncols = len(H[0])
    r = 0
    for j in range(ncols):
        if r == len(H):
            break
        while True:
            nz = [(abs(H[i][j]), i) for i in range(r, len(H)) if H[i][j]]
            if not nz:
                break
            _, p = min(nz)
            H[r], H[p] = H[p], H[r]
            piv = H[r][j]
            done = True
            for i in range(r + 1, len(H)):
                if H[i][j]:
                    q = H[i][j] // piv
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    done = done and H[i][j] == 0
            if done:
                break
        if r < len(H) and H[r][j]:
            if H[r][j] < 0:
                H[r] = [-x for x in H[r]]
            piv = H[r][j]
            for i in range(r):
                q = H[i][j] // piv
                if q:
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
            r += 1
    return [row for row in H if any(row)]


def integer_rank(A: Sequence[Sequence[int]]) -> int:
    return smith_normal_form(A).rank if A and A[0] else 0


def saturate_and_canonicalize(B: Sequence[Sequence[int]]) -> Matrix:
    """Column-HNF basis of the saturation of the column lattice of B (n x d)."""
    if not B or not any(any(row) for row in B):
        raise ValueError("direction matrix is zero")
    snf = smith_normal_form(B)
    r = snf.rank
    basis_rows = [[snf.Pinv[i][j] for i in range(len(B))] for j in range(r)]
    return transpose(hermite_normal_form(basis_rows))

"""Smith normal form over the integers, with unimodular certificates.

Matrices are plain lists of rows of Python ints, so entries never overflow.
A matrix with zero rows cannot tell its column count, so the functions here
take an optional ``shape``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def shape_of(A: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> tuple[int, int]:
    if shape is not None:
        m, n = shape
        if len(A) != m or any(len(row) != n for row in A):
            raise ValueError(f"matrix does not have shape {shape}")
        return m, n
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    return m, n


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A: Matrix, shape: tuple[int, int] | None = None) -> Matrix:
    m, n = shape_of(A, shape)
    return [[A[i][j] for i in range(m)] for j in range(n)]


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == S`` with U, V unimodular and S diagonal.

    ``divisors`` is the diagonal of S (length min(rows, cols)); nonzero
    entries are positive, come first, and each divides the next.
    """

    S: Matrix
    U: Matrix
    V: Matrix
    divisors: tuple[int, ...]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d)


def smith_normal_form(A: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> SnfResult:
    m, n = shape_of(A, shape)
    S = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        S[dst] = [a + c * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in S:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = S[i][j]
                    if v and (best is None or abs(v) < abs(S[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]

    divisors = tuple(S[i][i] for i in range(min(m, n)))
    return SnfResult(S, U, V, divisors, (m, n))


def cokernel(A: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> tuple[int, list[int]]:
    """Cokernel of Z^cols -> Z^rows as ``(free_rank, torsion orders)``."""
    res = smith_normal_form(A, shape)
    torsion = [d for d in res.divisors if d > 1]
    return res.shape[0] - res.rank, torsion


def kernel_rank(A: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> int:
    res = smith_normal_form(A, shape)
    return res.shape[1] - res.rank

"""Exact integer linear algebra: Smith normal form, solving, kernels.

Matrices are lists of lists of Python ints (arbitrary precision, so
there is no overflow to detect).
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def shape(A: Sequence[Sequence[int]], cols: int | None = None) -> tuple[int, int]:
    r = len(A)
    c = len(A[0]) if r else (cols or 0)
    return r, c


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    n = len(B)
    if n == 0:
        return [[] for _ in A] if not B else zeros(len(A), 0)
    m = len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(m)] for i in range(len(A))]


def matvec(A: Matrix, x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: Matrix, cols: int | None = None) -> Matrix:
    r, c = shape(A, cols)
    return [[A[i][j] for i in range(r)] for j in range(c)]


def det(A: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A: Sequence[Sequence[int]], cols: int | None = None):
    """Return ``(U, D, V)`` with ``U A V = D``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with non-negative entries and ``d1 | d2 | ...``.
    ``cols`` gives the column count when ``A`` has no rows.
    """
    U, D, V, _ = _snf(A, cols)
    return U, D, V


def _snf(A, cols=None):
    """SNF that also tracks ``U^-1`` (used for image bases)."""
    m, n = shape(A, cols)
    D = [list(map(int, row)) for row in A]
    U = identity_matrix(m)
    Ui = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c == 0:
            return
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= c * row[dst]

    def neg_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_col(dst, src, c):  # col_dst += c * col_src
        if c == 0:
            return
        for M in (D, V):
            for row in M:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest non-zero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            changed = False
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
                        break
            if changed:
                continue
            p = D[t][t]
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
                        break
            if changed:
                continue
            # divisibility: fold an offending row into row t and retry
            p = D[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            neg_row(t)
        t += 1
    return U, D, V, Ui


def is_smith_form(D: Matrix) -> bool:
    m, n = shape(D)
    diag = []
    for i in range(m):
        for j in range(n):
            if i != j and D[i][j]:
                return False
            if i == j:
                diag.append(D[i][j])
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a and b % a:
            return False
    return True


def diagonal(D: Matrix) -> list[int]:
    m, n = shape(D)
    return [D[i][i] for i in range(min(m, n))]


def solve_integer_linear(A: Sequence[Sequence[int]], b: Sequence[int], cols: int | None = None):
    """An integer ``x`` with ``A x = b``, or None."""
    m, n = shape(A, cols)
    if len(b) != m:
        raise ValueError(f"dimension mismatch: A has {m} rows, b has {len(b)} entries")
    U, D, V = smith_normal_form(A, n)
    c = matvec(U, b) if m else []
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(V, y) if n else []


def integer_kernel(A: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    """A basis of ``{x : A x = 0}``, as a list of vectors."""
    m, n = shape(A, cols)
    _, D, V = smith_normal_form(A, n)
    rank = sum(1 for d in diagonal(D) if d)
    return [[V[i][j] for i in range(n)] for j in range(rank, n)]


def column_space_basis(A: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    """A basis of the lattice spanned by the columns of ``A`` (list of vectors)."""
    m, n = shape(A, cols)
    _, D, _, Ui = _snf(A, n)
    return [[Ui[i][j] * D[j][j] for i in range(m)] for j in range(min(m, n)) if D[j][j]]


def invariant_factors(A: Sequence[Sequence[int]], rows: int, cols: int | None = None):
    """Cokernel of ``A: Z^cols -> Z^rows`` as ``(free_rank, torsion)``.

    ``torsion`` lists invariant factors greater than one.
    """
    if rows == 0:
        return 0, []
    if not A or (cols is not None and cols == 0):
        return rows, []
    _, D, _ = smith_normal_form(A, cols)
    diag = diagonal(D)
    torsion = [d for d in diag if d > 1]
    nonzero = sum(1 for d in diag if d)
    return rows - nonzero, torsion


def gcd_vector(v: Sequence[int]) -> int:
    return gcd(*v)

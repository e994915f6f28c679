"""Linear algebra over prime fields GF(p), matrices as lists of row lists."""

from __future__ import annotations

from typing import List, Sequence

Matrix = List[List[int]]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def next_prime(m: int) -> int:
    """Smallest prime >= m."""
    p = max(m, 2)
    while not is_prime(p):
        p += 1
    return p


def row_reduce(rows: Sequence[Sequence[int]], p: int) -> tuple:
    """Reduced row echelon form mod p; returns (matrix, pivot columns)."""
    m = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [(a - factor * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows or not rows[0]:
        return 0
    return len(row_reduce(rows, p)[1])


def columns(rows: Sequence[Sequence[int]], cols: Sequence[int]) -> Matrix:
    return [[row[c] for c in cols] for row in rows]


def inverse(rows: Sequence[Sequence[int]], p: int) -> Matrix:
    n = len(rows)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    red, pivots = row_reduce(aug, p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def vec_mat(v: Sequence[int], rows: Sequence[Sequence[int]], p: int) -> List[int]:
    """Row vector times matrix."""
    if not rows:
        return []
    out = [0] * len(rows[0])
    for coeff, row in zip(v, rows):
        if coeff:
            for j, x in enumerate(row):
                out[j] += coeff * x
    return [x % p for x in out]

"""Dense linear algebra over the prime field GF(2**31 - 1)."""
from __future__ import annotations

import numpy as np

PRIME = 2**31 - 1


def rref(A, p: int = PRIME) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the pivot columns."""
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        f = A[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            A[np.ix_(rows, np.arange(c, n))] = (
                A[np.ix_(rows, np.arange(c, n))] - (f[rows, None] * A[r, c:]) % p
            ) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(A, p: int = PRIME) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int = PRIME) -> np.ndarray:
    """Basis of {x : A x = 0} mod p, one vector per row."""
    A = np.asarray(A)
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    return nullspace_from_rref(R, pivots, p)


def nullspace_from_rref(R: np.ndarray, pivots: list[int], p: int = PRIME) -> np.ndarray:
    n = R.shape[1]
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.int64)
    basis[np.arange(len(free)), free] = 1
    if pivots and free:
        basis[:, pivots] = (-R[: len(pivots)][:, free].T) % p
    return basis

"""Vectorized linear algebra over F_p on numpy int64 arrays.

Every routine here reduces mod p eagerly, so all intermediates stay within
int64 as long as p < fields.NUMPY_PRIME_LIMIT (callers gate on that).  These
are the hot paths behind the field-generic API in ``linalg``; the results are
exact and bit-for-bit deterministic (pivot = first nonzero entry).
"""

from __future__ import annotations

import numpy as np


def as_mod_array(rows, p: int) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (rref, pivot columns)."""
    m = mat.copy() % p
    n_rows, n_cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = m[r] * inv % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod(mat: np.ndarray, p: int) -> int:
    return len(rref_mod(mat, p)[1])


def nullspace_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Right-kernel basis of mat over F_p, one vector per row, in RREF."""
    m, pivots = rref_mod(mat, p)
    n_cols = mat.shape[1]
    free = [c for c in range(n_cols) if c not in set(pivots)]
    if not free:
        return np.zeros((0, n_cols), dtype=np.int64)
    basis = np.zeros((len(free), n_cols), dtype=np.int64)
    for idx, f in enumerate(free):
        basis[idx, f] = 1
        for row, c in enumerate(pivots):
            basis[idx, c] = (-int(m[row, f])) % p
    # Canonicalize: the free-variable vectors span the kernel but are not in
    # reduced echelon form themselves.
    reduced, _ = rref_mod(basis, p)
    return reduced[: len(free)]


def solve_mod(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of mat @ x = rhs over F_p (free variables 0), or None."""
    rhs = rhs.reshape(-1, 1) % p
    aug = np.concatenate([mat % p, rhs], axis=1)
    m, pivots = rref_mod(aug, p)
    n_cols = mat.shape[1]
    if n_cols in pivots:
        return None
    x = np.zeros(n_cols, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = m[row, n_cols]
    return x


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a % p) @ (b % p) % p

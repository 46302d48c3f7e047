"""Exact linear algebra over the prime field F_p on int64 numpy arrays."""
from __future__ import annotations

import numpy as np


def reduce(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = reduce(a, p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def is_invertible(a, p: int) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def inverse(a, p: int) -> np.ndarray:
    a = reduce(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    m, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular over F_%d" % p)
    return m[:, n:]


def nullspace(a, p: int) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the rows of the returned array."""
    a = reduce(a, p)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    # tall systems: fold in a chunk at a time against the current echelon form
    step = max(cols, 1)
    m = np.zeros((0, cols), dtype=np.int64)
    piv: list[int] = []
    for start in range(0, a.shape[0], step):
        block = a[start:start + step]
        if piv:
            block = (block - block[:, piv] @ m) % p
        bm, bpiv = rref(block, p)
        if not bpiv:
            continue
        bm = bm[:len(bpiv)]
        if piv:
            m = (m - m[:, bpiv] @ bm) % p
        order = np.argsort(piv + bpiv, kind="stable")
        m = np.vstack([m, bm])[order]
        piv = [(piv + bpiv)[k] for k in order]
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(piv):
            basis[k, pc] = (-m[r, f]) % p
    return basis

"""Dense linear algebra over GF(p) on int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def rref(a: np.ndarray, p: int, reverse: bool = False, ncols: int | None = None):
    """Reduced row echelon form of ``a`` mod p.

    Pivots are searched among the first ``ncols`` columns (all by default),
    right to left when ``reverse`` is set; the remaining columns are carried
    along, which lets callers track row operations with an identity block.
    Returns (R, pivots): R has the shape of ``a``, row i < len(pivots) has
    its leading 1 in column pivots[i], and later rows vanish on the pivot
    search columns.
    """
    m = np.array(a, dtype=np.int64) % p
    rows = m.shape[0]
    ncols = m.shape[1] if ncols is None else ncols
    inv = inverse_table(p)
    order = range(ncols - 1, -1, -1) if reverse else range(ncols)
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * inv[m[r, c]] % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    r, piv = rref(a, p)
    r = r[: len(piv)]
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fcol in enumerate(free):
        basis[i, fcol] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = -r[row, fcol] % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of a x = b (free variables 0), or None."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    aug = np.concatenate([a, np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    r, piv = rref(aug, p, ncols=n)
    if np.any(r[len(piv):, n] % p):
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = r[row, n]
    return x


def span_vectors(basis: np.ndarray, p: int, projective: bool = False) -> np.ndarray:
    """All vectors of the row span of ``basis``.

    With ``projective`` only one representative per scalar class is
    produced (coefficient vectors whose first nonzero entry is 1), and the
    zero vector is omitted.
    """
    d = basis.shape[0]
    coefs = np.array(np.meshgrid(*[np.arange(p)] * d, indexing="ij")).reshape(d, -1).T if d else np.zeros((1, 0), dtype=np.int64)
    if projective and d:
        nz = coefs != 0
        keep = nz.any(axis=1)
        coefs = coefs[keep]
        first = coefs[np.arange(len(coefs)), (coefs != 0).argmax(axis=1)]
        coefs = coefs[first == 1]
    return coefs @ basis % p

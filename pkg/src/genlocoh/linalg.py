"""Exact dense linear algebra over Q (Fractions) and F_p (numpy int64)."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

# products of two residues must fit in int64
_NUMPY_PRIME_LIMIT = 2**31


def _dtype(p):
    return np.int64 if 0 < p < _NUMPY_PRIME_LIMIT else object


def matrix(rows, ncols, p):
    """Build a matrix in the representation used for characteristic ``p``."""
    a = np.zeros((len(rows), ncols), dtype=_dtype(p))
    if a.dtype == object:
        a[...] = Fraction(0) if p == 0 else 0
    for i, r in enumerate(rows):
        for j, c in r.items() if isinstance(r, dict) else enumerate(r):
            a[i, j] = c
    return a


def zeros(shape, p):
    a = np.zeros(shape, dtype=_dtype(p))
    if a.dtype == object:
        a[...] = Fraction(0) if p == 0 else 0
    return a


def _inv(c, p):
    return pow(int(c), -1, p) if p else 1 / c


def rref(a, p):
    """Row-reduce a copy of ``a``; return ``(R, pivot_columns)``."""
    a = a.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0] if p else [k for k, v in enumerate(col) if v != 0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = _inv(a[r, c], p)
        if p:
            a[r] = a[r] * inv % p
        else:
            a[r] = a[r] * inv
        others = [i for i in np.nonzero(a[:, c])[0] if i != r] if p else \
            [i for i in range(nrows) if i != r and a[i, c] != 0]
        if len(others):
            f = a[others, c].reshape(-1, 1)
            upd = a[others] - f * a[r]
            a[others] = upd % p if p else upd
        pivots.append(c)
        r += 1
    return a, pivots


def rank(a, p) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p):
    """Basis of ``{v : a v = 0}`` as the columns of the returned matrix."""
    nrows, ncols = a.shape
    if nrows == 0:
        out = zeros((ncols, ncols), p)
        for i in range(ncols):
            out[i, i] = 1
        return out
    r, piv = rref(a, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = zeros((ncols, len(free)), p)
    for j, fc in enumerate(free):
        out[fc, j] = 1
        for i, pc in enumerate(piv):
            v = -r[i, fc]
            out[pc, j] = v % p if p else v
    return out


def matmul(a, b, p):
    if a.shape[1] == 0 or b.shape[1] == 0 or a.shape[0] == 0:
        return zeros((a.shape[0], b.shape[1]), p)
    if p and a.dtype != object:
        # chunk the inner dimension so accumulated sums stay inside int64
        out = zeros((a.shape[0], b.shape[1]), p)
        step = max(1, (2**62) // ((p - 1) ** 2 + 1))
        for s in range(0, a.shape[1], step):
            out = (out + a[:, s:s + step] @ b[s:s + step]) % p
        return out
    out = a.dot(b)
    return out % p if p else out


def hstack(blocks, nrows, p):
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return zeros((nrows, 0), p)
    return np.hstack(blocks)


def complement_basis(sub, space, p):
    """Columns of ``space`` extending a basis of col(``sub``) to col(``sub`` + ``space``).

    Returns the selected columns of ``space`` as a matrix.
    """
    n = space.shape[0]
    both = hstack([sub, space], n, p)
    if both.shape[1] == 0:
        return zeros((n, 0), p)
    _, piv = rref(both, p)
    k = sub.shape[1]
    chosen = [c - k for c in piv if c >= k]
    return space[:, chosen]


def relative_rank(sub, vecs, p) -> int:
    """rank(sub | vecs) - rank(sub)."""
    n = vecs.shape[0]
    return rank(hstack([sub, vecs], n, p), p) - rank(sub, p)

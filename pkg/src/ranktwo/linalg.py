"""Exact Gaussian elimination, twice over.

The generic routines work on matrices whose entries are canonical field codes;
all arithmetic goes through the tower's scalar ops, so a matrix with entries in
F_{q^k} is eliminated inside F_{q^k} and the RREF is the canonical one for that
row space.  The fp_* routines are numpy-vectorized elimination mod p for the
bulk F_p systems (nucleus computations), where matrices have a few thousand
rows.
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------- generic, code entries

def rref(t, rows):
    """Reduced row echelon form; returns (tuple-of-row-tuples, pivot columns)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = t.inv(rows[r][c])
        rows[r] = [t.mul(inv, v) for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [t.sub(rows[i][j], t.mul(f, rows[r][j])) for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in rows), pivots


def rank(t, rows) -> int:
    return len(rref(t, rows)[1])


def kernel(t, rows, ncols=None):
    """Canonical basis of the right kernel, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [tuple(1 if j == i else 0 for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(t, rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = t.negate(R[i][fc])
        out.append(tuple(v))
    return out


def solve(t, rows, rhs):
    """One solution of A x = b, or None if inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(t, aug)
    for i in range(len(R)):
        if all(R[i][j] == 0 for j in range(ncols)) and R[i][ncols] != 0:
            return None
    x = [0] * ncols
    for i, pc in enumerate(pivots):
        if pc < ncols:
            x[pc] = R[i][ncols]
    if ncols in pivots:
        return None
    return tuple(x)


def inverse(t, rows):
    """Inverse of a square matrix, or None if singular."""
    m = len(rows)
    aug = [list(r) + [1 if j == i else 0 for j in range(m)] for i, r in enumerate(rows)]
    R, pivots = rref(t, aug)
    if pivots[:m] != list(range(m)) or len(pivots) < m:
        return None
    return tuple(tuple(R[i][m:]) for i in range(m))


def matmul(t, A, B):
    n = len(B[0])
    out = []
    for row in A:
        acc = [0] * n
        for k, a in enumerate(row):
            if a:
                brow = B[k]
                for j in range(n):
                    if brow[j]:
                        acc[j] = t.add(acc[j], t.mul(a, brow[j]))
        out.append(tuple(acc))
    return tuple(out)


def matvec(t, A, v):
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = t.add(acc, t.mul(a, x))
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------- numpy, mod p

def fp_rref(A, p):
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        other = np.nonzero(A[:, c])[0]
        other = other[other != r]
        if other.size:
            A[other] = (A[other] - np.outer(A[other, c], A[r])) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def fp_rank(A, p) -> int:
    return len(fp_rref(A, p)[1])


def fp_kernel(A, p):
    """Right kernel basis as a (k x ncols) int array, canonical RREF-derived."""
    A = np.asarray(A)
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = fp_rref(A, p)
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, fc in enumerate(free):
        out[k, fc] = 1
        for i, pc in enumerate(pivots):
            out[k, pc] = (-int(R[i, fc])) % p
    return out


def fp_inverse(A, p):
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[0]
    aug = np.concatenate([A % p, np.eye(m, dtype=np.int64)], axis=1)
    R, pivots = fp_rref(aug, p)
    if pivots[:m] != list(range(m)):
        return None
    return R[:, m:]

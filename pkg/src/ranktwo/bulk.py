"""Vectorized arithmetic on arrays of canonical field codes.

All heavy enumeration (the q^6 - 1 vectors of a rank-6 subspace, determinant
scans over a spread set, point grouping) runs here on numpy int arrays:
multiplication through the discrete-log tables, addition through the base-p
digit table, projective normalization and int64 point keys through the
F_{q^3} member ranking.  Nothing in this module knows any geometry; it only
moves codes around fast.
"""

from __future__ import annotations

import numpy as np


class Bulk:
    def __init__(self, t):
        self.t = t
        self.p = t.p
        self.q = t.q
        self.N1 = t.order - 1
        self.exp = t.exp
        self.log = t.log
        self.digits = t.digits
        self.pvec = t.pvec
        self.negtab = t.neg
        self.invtab = t.inv_table
        self.rank3 = t.rank3
        self.fq3 = t.members_by_deg[3].astype(np.int64)

    # ------------------------------------------------ elementwise field ops

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.zeros(a.shape, dtype=np.int32)
        nz = (a != 0) & (b != 0)
        if nz.any():
            out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % self.N1]
        return out

    def mul_scalar(self, a, s):
        a = np.asarray(a)
        if s == 0:
            return np.zeros(a.shape, dtype=np.int32)
        ls = int(self.log[s])
        out = np.zeros(a.shape, dtype=np.int32)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] + ls) % self.N1]
        return out

    def add(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        d = (self.digits[a].astype(np.int16) + self.digits[b]) % self.p
        return (d.astype(np.int64) @ self.pvec).astype(np.int32)

    def sub(self, a, b):
        return self.add(a, self.negtab[np.asarray(b)])

    def neg(self, a):
        return self.negtab[np.asarray(a)]

    def inv(self, a):
        return self.invtab[np.asarray(a)]

    def frob(self, a, k):
        a = np.asarray(a)
        e = self.t.q ** (k % 6)
        out = np.zeros(a.shape, dtype=np.int32)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] * e) % self.N1]
        return out

    def pow_int(self, a, e):
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int32)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] * e) % self.N1]
        return out

    # ------------------------------------------------ span enumeration

    def span_coords(self, basis):
        """Coordinates of every F_q-combination of the 6 basis vectors.

        basis is a sequence of 6 coordinate tuples (any fixed width).  Returns
        one int32 array of length q^6 per coordinate; entry at index
        i = sum_k d_k q^k is the combination with scalar fq[d_k] on basis
        vector k, where fq is the sorted F_q member list.  Index 0 is the zero
        vector.
        """
        t = self.t
        fq = t.members_by_deg[1]
        width = len(basis[0])
        n = t.n
        out = []
        for c in range(width):
            scaled = []
            for vec in basis:
                row = np.array([t.mul(int(s), vec[c]) for s in fq], dtype=np.int64)
                scaled.append(self.digits[row])  # (q, n) int8
            cur = np.zeros((1, n), dtype=np.int8)
            for k in range(len(basis)):
                cur = (scaled[k][:, None, :].astype(np.int16) + cur[None, :, :]) % self.p
                cur = cur.reshape(-1, n).astype(np.int8)
            out.append((cur.astype(np.int64) @ self.pvec).astype(np.int32))
        return out

    def index_coeffs(self, idx):
        """Decode a span index into its 6 F_q scalars (as codes)."""
        fq = self.t.members_by_deg[1]
        out = []
        for _ in range(6):
            out.append(int(fq[idx % self.q]))
            idx //= self.q
        return tuple(out)

    # ------------------------------------------------ projective normalization

    def normalize(self, comps):
        """Scale each coordinate row so its first nonzero entry becomes 1."""
        piv = np.zeros(np.asarray(comps[0]).shape, dtype=np.int32)
        for c in reversed(comps):
            c = np.asarray(c)
            piv = np.where(c != 0, c, piv)
        pinv = self.invtab[piv]
        return [self.mul(c, pinv) for c in comps]

    def pack(self, comps):
        """int64 key for a tuple of F_{q^3} coordinates (zero tuple -> 0)."""
        K = self.q**3
        key = np.zeros(np.asarray(comps[0]).shape, dtype=np.int64)
        for c in comps:
            key = key * K + self.rank3[np.asarray(c)]
        return key

    def unpack(self, keys, width):
        """Inverse of pack: list of coordinate arrays."""
        keys = np.asarray(keys)
        K = self.q**3
        out = []
        for i in range(width - 1, -1, -1):
            out.append(self.fq3[(keys // K**i) % K].astype(np.int32))
        return out

    def point_keys(self, comps):
        return self.pack(self.normalize(comps))

    # ------------------------------------------------ derived scans

    def det2x2(self, comps):
        """m0*m3 - m1*m2 for flattened 2x2 matrices."""
        return self.sub(self.mul(comps[0], comps[3]), self.mul(comps[1], comps[2]))

    def quotient_keys(self, comps, base):
        """Key of the image of each vector in V / <base>, projectivized.

        base is a coordinate tuple with first nonzero entry at position k;
        component j != k maps to comps[j] - (base[j]/base[k]) * comps[k].
        Vectors proportional to base get key 0.
        """
        t = self.t
        k = next(i for i, v in enumerate(base) if v != 0)
        invk = t.inv(base[k])
        quot = []
        for j in range(len(base)):
            if j == k:
                continue
            f = t.mul(base[j], invk)
            if f == 0:
                quot.append(np.asarray(comps[j]))
            else:
                quot.append(self.sub(comps[j], self.mul_scalar(comps[k], f)))
        return self.pack(self.normalize(quot))

    def line_points(self, A, B):
        """Coordinates of all q^3+1 points of the line spanned by rows A, B.

        Returns a list of arrays of length q^3 + 1: A + t*B over t in F_{q^3},
        then B itself in the last slot.
        """
        tarr = self.fq3.astype(np.int32)
        out = []
        for k in range(len(A)):
            col = self.add(np.full(tarr.shape, A[k], dtype=np.int32), self.mul_scalar(tarr, B[k]))
            out.append(np.concatenate([col, np.array([B[k]], dtype=np.int32)]))
        return out

    def lines_points_batch(self, spans):
        """Point coordinates for many lines at once: shape (nlines, q^3+1)."""
        width = len(spans[0][0])
        A = [np.array([s[0][k] for s in spans], dtype=np.int32) for k in range(width)]
        B = [np.array([s[1][k] for s in spans], dtype=np.int32) for k in range(width)]
        return self.lines_points_grid(A, B)

    def lines_points_grid(self, Ac, Bc):
        """lines_points for many lines given as coordinate arrays.

        Row i of each returned array is the point grid of the line spanned by
        (Ac[0][i], ...) and (Bc[0][i], ...).
        """
        tarr = self.fq3.astype(np.int32)[None, :]
        out = []
        for k in range(len(Ac)):
            a = np.asarray(Ac[k], dtype=np.int32)[:, None]
            bcol = np.asarray(Bc[k], dtype=np.int32)[:, None]
            grid = self.add(np.broadcast_to(a, (a.shape[0], tarr.shape[1])), self.mul(bcol, tarr))
            out.append(np.concatenate([grid, bcol], axis=1))
        return out

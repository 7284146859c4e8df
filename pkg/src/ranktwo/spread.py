"""Spread sets of 2x2 matrices and the presemifields they define.

A spread set here is a 6-dimensional F_q-subspace of the 2x2 matrices
over F_{q^3}, spanned by six basis matrices and containing no singular
matrix besides zero.  Matrices are stored flattened as 4-tuples
(m00, m01, m10, m11), the same layout the projective-geometry side uses
for point coordinates.

The presemifield product lives on pairs (x1, x2) in F_{q^3}^2:
x * y = (x1, x2) . M_y, where y corresponds to the unique matrix of the
spread set whose first row is (y1, y2).  That correspondence is always
bijective: two distinct matrices sharing a first row would differ by a
nonzero matrix with zero first row, which is singular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ParameterError, StructureError
from .field import FieldTower
from .linset import LinearSet

__all__ = ["NucleiProfile", "SpreadSet", "prime_coords"]


@dataclass(frozen=True)
class NucleiProfile:
    """Orders of the nuclei and center of the associated semifield."""

    left: int
    right: int
    middle: int
    center: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.left, self.right, self.middle, self.center)

    def as_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "middle": self.middle,
            "center": self.center,
        }


# ------------------------------------------------------------- F_p coordinates

_PRIME_COORD_CACHE: dict = {}


def prime_coords(t: FieldTower):
    """F_p-coordinate tables for F_{q^3}.

    Returns (basis, table, unpack) where basis is the list of 3h basis
    elements, table maps a field code of an F_{q^3} member to its packed
    base-p digit string, and unpack(packed) recovers the digit tuple.
    """
    key = (t.p, t.h, t.modulus)
    hit = _PRIME_COORD_CACHE.get(key)
    if hit is not None:
        return hit
    p, h = t.p, t.h
    if h == 1:
        fq_basis = [1]
    else:
        u = next(c for c in t.members(1) if c >= p)
        fq_basis = [1]
        for _ in range(h - 1):
            fq_basis.append(t.mul(fq_basis[-1], u))
    basis = [t.mul(e, f) for e in t.q3_basis() for f in fq_basis]
    m = 3 * h
    table = np.full(t.order, -1, dtype=np.int32)
    codes = np.zeros(1, dtype=np.int64)
    for j, b in enumerate(basis):
        mults = np.array([t.mul(d, b) for d in range(p)], dtype=np.int64)
        new = np.empty(codes.size * p, dtype=np.int64)
        for d in range(p):
            new[d * codes.size : (d + 1) * codes.size] = t.bulk.add(
                codes, np.full(codes.size, mults[d], dtype=np.int64)
            )
        codes = new
    # codes[i] is the element with digit j equal to (i // p^j) mod p
    if np.unique(codes).size != p**m:
        raise StructureError("prime-basis", "F_p basis of F_q^3 is dependent")
    table[codes] = np.arange(p**m, dtype=np.int32)

    def unpack(packed: int) -> tuple:
        out = []
        v = int(packed)
        for _ in range(m):
            out.append(v % p)
            v //= p
        return tuple(out)

    result = (basis, table, unpack)
    _PRIME_COORD_CACHE[key] = result
    return result


# ------------------------------------------------------------------ spread set


class SpreadSet:
    """F_q-span of six independent 2x2 matrices over F_{q^3}."""

    def __init__(self, tower: FieldTower, mats, meta: dict | None = None):
        t = tower
        rows = []
        clean = []
        for m in mats:
            m = tuple(int(c) for c in m)
            if len(m) != 4:
                raise ParameterError("matrix-shape", "expected 4 entries per matrix")
            for c in m:
                t._require(c, 3, "spread entry")
            clean.append(m)
            rows.append(tuple(x for c in m for x in t.coords3(c)))
        if len(clean) != 6:
            raise ParameterError(
                "basis-size", f"expected 6 basis matrices, got {len(clean)}"
            )
        if linalg.rank(t, rows) != 6:
            raise ParameterError("basis-rank", "basis matrices are F_q-dependent")
        self.tower = t
        self.mats = tuple(clean)
        self.meta = dict(meta) if meta else {}
        self._dec = None  # first-row decomposition matrix, built on demand

    # -------------------------------------------------------------- product

    def _decomposer(self):
        if self._dec is None:
            t = self.tower
            fr = [
                tuple(t.coords3(m[0])) + tuple(t.coords3(m[1])) for m in self.mats
            ]
            frt = [tuple(r[i] for r in fr) for i in range(6)]
            inv = linalg.inverse(t, frt)
            if inv is None:
                raise StructureError(
                    "first-row", "first-row map of the spread set is singular"
                )
            self._dec = inv
        return self._dec

    def coefficients(self, y) -> tuple:
        """F_q-coefficients of the spread matrix whose first row is y."""
        t = self.tower
        rhs = tuple(t.coords3(y[0])) + tuple(t.coords3(y[1]))
        return linalg.matvec(t, self._decomposer(), rhs)

    def matrix_for(self, y) -> tuple:
        t = self.tower
        out = [0, 0, 0, 0]
        for ck, mk in zip(self.coefficients(y), self.mats):
            if ck == 0:
                continue
            for i in range(4):
                out[i] = t.add(out[i], t.mul(ck, mk[i]))
        return tuple(out)

    def mul(self, x, y) -> tuple:
        """Presemifield product of pairs x, y in F_{q^3}^2."""
        t = self.tower
        m = self.matrix_for(y)
        return (
            t.add(t.mul(x[0], m[0]), t.mul(x[1], m[2])),
            t.add(t.mul(x[0], m[1]), t.mul(x[1], m[3])),
        )

    # ----------------------------------------------------------- validation

    def zero_divisor_witness(self):
        """A pair (x, y) of nonzero elements with x * y = 0, or None.

        Scans determinants over the whole span.  A singular nonzero
        matrix M_y yields x as a vector in its left kernel.
        """
        t = self.tower
        spans = t.bulk.span_coords(self.mats)
        det = t.bulk.det2x2(spans)
        zeros = np.nonzero(det == 0)[0]
        if zeros.size == 1 and zeros[0] == 0:
            return None
        idx = int(zeros[1] if zeros[0] == 0 else zeros[0])
        m = tuple(int(c[idx]) for c in spans)
        y = (m[0], m[1])
        if m[0] != 0 or m[2] != 0:
            x = (t.negate(m[2]), m[0])
        else:
            x = (t.negate(m[3]), m[1])
        return (x, y)

    def verify_no_zero_divisors(self) -> None:
        w = self.zero_divisor_witness()
        if w is not None:
            raise StructureError(
                "zero-divisor", f"nonzero product vanishes: {w[0]} * {w[1]} = 0"
            )

    # ------------------------------------------------------------ geometry

    def linear_set(self) -> LinearSet:
        return LinearSet(self.tower, self.mats)

    def span_key(self) -> tuple:
        """Canonical label of the F_q-span, shared by equal spans."""
        t = self.tower
        rows = [
            tuple(x for c in m for x in t.coords3(c)) for m in self.mats
        ]
        red, pivots = linalg.rref(t, rows)
        if len(pivots) != 6:
            raise StructureError("span-rank", "spread span is degenerate")
        return tuple(red)

    # ---------------------------------------------------------- derivatives

    def transpose(self) -> "SpreadSet":
        """Spread set of the transposed matrices (swaps m01 and m10)."""
        mats = tuple((m[0], m[2], m[1], m[3]) for m in self.mats)
        meta = dict(self.meta)
        meta["derived"] = meta.get("derived", []) + ["transpose"]
        return SpreadSet(self.tower, mats, meta)

    def translation_dual(self) -> "SpreadSet":
        """Orthogonal complement under the trace form

            (M, N) -> Tr_{q^3/q}(m00 n11 + m11 n00 - m01 n10 - m10 n01),

        which is again a spread set whenever this one is.
        """
        t = self.tower
        q3b = t.q3_basis()
        partner = (3, 2, 1, 0)
        sign = (1, -1, -1, 1)
        rows = []
        for mk in self.mats:
            row = []
            for c in range(4):
                v = mk[partner[c]]
                if sign[c] < 0:
                    v = t.negate(v)
                for e in q3b:
                    row.append(t.trace(t.mul(v, e), 3, 1))
            rows.append(tuple(row))
        ker = linalg.kernel(t, rows, 12)
        if len(ker) != 6:
            raise StructureError(
                "dual-rank", f"trace-form complement has dimension {len(ker)}"
            )
        mats = []
        for w in ker:
            m = []
            for c in range(4):
                acc = 0
                for i, e in enumerate(q3b):
                    acc = t.add(acc, t.mul(w[3 * c + i], e))
                m.append(acc)
            mats.append(tuple(m))
        meta = dict(self.meta)
        meta["derived"] = meta.get("derived", []) + ["translation-dual"]
        out = SpreadSet(t, tuple(mats), meta)
        out.verify_no_zero_divisors()
        return out

    # --------------------------------------------------------------- nuclei

    def _product_tensor(self):
        """F_p structure tensor T[a,b,k] of the presemifield product."""
        t = self.tower
        basis3, table, unpack = prime_coords(t)
        n = 6 * t.h
        pairs = [(b, 0) for b in basis3] + [(0, b) for b in basis3]

        def vec(z):
            d0 = unpack(int(table[z[0]]))
            d1 = unpack(int(table[z[1]]))
            return d0 + d1

        T = np.zeros((n, n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                T[a, b, :] = vec(self.mul(pairs[a], pairs[b]))
        return T, vec

    def nuclei(self) -> NucleiProfile:
        """Nuclei and center orders of the semifield obtained by
        normalizing the product to have an identity element.

        These sizes are isotopy invariants of the presemifield, so the
        choice of normalization element does not matter.
        """
        t = self.tower
        p = t.p
        n = 6 * t.h
        T, vec = self._product_tensor()
        e = (self.mats[0][0], self.mats[0][1])
        ve = np.array(vec(e), dtype=np.int64)
        Lm = np.einsum("a,abk->kb", ve, T) % p
        Rm = np.einsum("b,abk->ka", ve, T) % p
        Linv = linalg.fp_inverse(Lm, p)
        Rinv = linalg.fp_inverse(Rm, p)
        if Linv is None or Rinv is None:
            raise StructureError(
                "zero-divisor", "one-sided product by the unit seed is singular"
            )
        To = np.einsum("abk,ai,bj->ijk", T, Rinv, Linv) % p
        uvec = np.einsum("abk,a,b->k", T, ve, ve) % p
        left_u = np.einsum("ijm,i->jm", To, uvec) % p
        right_u = np.einsum("ijm,j->im", To, uvec) % p
        ident = np.eye(n, dtype=np.int64)
        if not (np.array_equal(left_u, ident) and np.array_equal(right_u, ident)):
            raise StructureError("unit", "normalized product has no identity")

        def kdim(block) -> int:
            return int(linalg.fp_kernel(block, p).shape[0])

        kl = (
            np.einsum("imk,jlm->ijlk", To, To) - np.einsum("mlk,ijm->ijlk", To, To)
        ) % p
        km = (
            np.einsum("jim,mlk->ijlk", To, To) - np.einsum("jmk,ilm->ijlk", To, To)
        ) % p
        kr = (
            np.einsum("mik,jlm->ijlk", To, To) - np.einsum("jmk,lim->ijlk", To, To)
        ) % p
        kl = kl.transpose(1, 2, 3, 0).reshape(-1, n)
        km = km.transpose(1, 2, 3, 0).reshape(-1, n)
        kr = kr.transpose(1, 2, 3, 0).reshape(-1, n)
        comm = (To - To.transpose(1, 0, 2)) % p
        comm = comm.transpose(1, 2, 0).reshape(-1, n)
        dz = kdim(np.concatenate([kl, km, kr, comm], axis=0))
        return NucleiProfile(
            left=p ** kdim(kl),
            right=p ** kdim(kr),
            middle=p ** kdim(km),
            center=p**dz,
        )

    # ------------------------------------------------------------- interop

    def as_dict(self) -> dict:
        return {
            "q": self.tower.q,
            "matrices": [list(m) for m in self.mats],
            "meta": dict(self.meta),
        }

    def __repr__(self) -> str:  # pragma: no cover
        tag = self.meta.get("family", "spread")
        return f"SpreadSet(q={self.tower.q}, {tag}, 6 basis matrices)"

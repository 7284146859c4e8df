"""Rank-6 F_q-linear point sets of PG(3, q^3).

A LinearSet is the F_q-span of six vectors of F_{q^3}^4, read projectively.
One vectorized pass over all q^6 span vectors yields the full profile: the
sorted packed keys of the covered points, the weight of each (the F_q-dimension
of the span vectors lying on that direction), and one representative vector
per point.  Everything else builds on that pass.

For scattered sets the module recovers the partition of the point set into
q^3 + 1 pairwise disjoint lines of weight 3 together with its two transversal
lines, and certifies every defining property of that configuration before
returning it; anything that does not check out raises StructureError rather
than letting a half-verified structure escape.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import geometry, linalg
from .errors import ParameterError, StructureError
from .field import FieldTower
from .geometry import Line, Plane, Point


@dataclasses.dataclass(frozen=True)
class Pseudoregulus:
    lines: tuple[Line, ...]
    transversals: tuple[Line, Line]

    def as_dict(self):
        return {
            "lines": [[list(r) for r in ln.rows] for ln in self.lines],
            "transversals": [[list(r) for r in ln.rows] for ln in self.transversals],
        }


def _cross_matrix(t, u1, u2):
    """Matrix M with M.v = cross4(v, u1, u2): the plane through v, u1, u2."""
    cols = []
    for j in range(4):
        e = tuple(1 if c == j else 0 for c in range(4))
        cols.append(geometry.cross4(t, e, u1, u2))
    return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))


def _dot_arrays(b, comps, vec):
    """<P, vec> for every coordinate-array point P."""
    acc = np.zeros(np.asarray(comps[0]).shape, dtype=np.int32)
    for c in range(4):
        if vec[c]:
            acc = b.add(acc, b.mul_scalar(np.asarray(comps[c]), vec[c]))
    return acc


def _exact_log(q: int, n: int, what: str) -> int:
    w, m = 0, 1
    while m < n:
        m *= q
        w += 1
    if m != n:
        raise StructureError("weight-counts", f"{what}: vector count {n} is not a power of q")
    return w


class LinearSet:
    def __init__(self, tower: FieldTower, basis):
        if len(basis) != 6:
            raise ParameterError("basis-size", f"need 6 basis vectors, got {len(basis)}")
        vecs = []
        for v in basis:
            geometry._check_vec(tower, v, "linear set basis")
            vecs.append(tuple(int(c) for c in v))
        self.tower = tower
        self.basis = tuple(vecs)
        self._spans = None
        self._keys = None
        self._weights = None
        self._reps = None

    # -------------------------------------------------- profile

    def _span_arrays(self):
        if self._spans is None:
            self._spans = self.tower.bulk.span_coords(self.basis)
        return self._spans

    def _profile(self):
        if self._keys is None:
            t = self.tower
            q = t.q
            spans = self._span_arrays()
            keys = t.bulk.point_keys(spans)
            uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
            if uniq[0] != 0 or int(counts[0]) != 1:
                raise ParameterError("basis-dependent", "the 6 vectors are not F_q-independent")
            pows = q ** np.arange(1, 7, dtype=np.int64) - 1
            widx = np.searchsorted(pows, counts[1:])
            if not np.array_equal(pows[widx], counts[1:]):
                raise StructureError("weight-counts", "point multiplicities are not q-power gaps")
            self._keys = uniq[1:]
            self._weights = (widx + 1).astype(np.int64)
            self._reps = tuple(np.asarray(spans[c])[first[1:]] for c in range(4))
        return self._keys, self._weights

    @property
    def point_keys(self) -> np.ndarray:
        return self._profile()[0]

    @property
    def weights(self) -> np.ndarray:
        return self._profile()[1]

    def point_count(self) -> int:
        return int(self.point_keys.size)

    def weight_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.weights, return_counts=True)
        return {int(a): int(b) for a, b in zip(vals, counts)}

    def is_scattered(self) -> bool:
        return bool(np.all(self.weights == 1))

    def point_at(self, i: int) -> Point:
        self._profile()
        return geometry.mk_point(self.tower, tuple(int(self._reps[c][i]) for c in range(4)))

    def points(self) -> list[Point]:
        return [self.point_at(i) for i in range(self.point_count())]

    def points_of_weight(self, w: int) -> list[Point]:
        self._profile()
        return [self.point_at(int(i)) for i in np.nonzero(self.weights == w)[0]]

    def _key_of_point(self, p: Point) -> int:
        arrs = [np.array([c], dtype=np.int32) for c in p.coords]
        return int(self.tower.bulk.point_keys(arrs)[0])

    def weight_of_point(self, p: Point) -> int:
        keys, w = self._profile()
        k = self._key_of_point(p)
        i = int(np.searchsorted(keys, k))
        if i < keys.size and int(keys[i]) == k:
            return int(w[i])
        return 0

    def contains_point(self, p: Point) -> bool:
        return self.weight_of_point(p) > 0

    def quadric_disjoint(self) -> bool:
        dets = self.tower.bulk.det2x2(self._span_arrays())
        return int(np.count_nonzero(dets == 0)) == 1  # the zero vector only

    def point_space(self, p: Point):
        """F_q-basis of the span vectors lying on the direction of p."""
        t = self.tower
        spans = self._span_arrays()
        keys = t.bulk.point_keys(spans)
        k = self._key_of_point(p)
        idx = np.nonzero(keys == k)[0]
        if idx.size == 0:
            raise ParameterError("point-off-set", "the point does not belong to the linear set")
        rows, vecs = [], []
        for i in idx:
            v = tuple(int(spans[c][i]) for c in range(4))
            row = sum((t.coords3(c) for c in v), ())
            if linalg.rank(t, rows + [row]) > len(rows):
                rows.append(row)
                vecs.append(v)
        return vecs

    def point_keys_on_plane(self, pl: Plane) -> np.ndarray:
        """Sorted packed keys of the set points lying on the plane."""
        keys, _ = self._profile()
        reps = [np.asarray(self._reps[c]) for c in range(4)]
        vals = _dot_arrays(self.tower.bulk, reps, pl.coeffs)
        return keys[vals == 0]

    def point_keys_on_line(self, line: Line) -> np.ndarray:
        """Sorted packed keys of the set points lying on the line."""
        lk = self.tower.bulk.point_keys(self.tower.bulk.line_points(*line.rows))
        return np.intersect1d(self.point_keys, lk)

    # -------------------------------------------------- weights of subspaces

    def _functional_values(self, coeffs):
        b = self.tower.bulk
        spans = self._span_arrays()
        acc = np.zeros(np.asarray(spans[0]).shape, dtype=np.int32)
        for c in range(4):
            if coeffs[c]:
                acc = b.add(acc, b.mul_scalar(spans[c], coeffs[c]))
        return acc

    def plane_weight(self, pl: Plane) -> int:
        n = int(np.count_nonzero(self._functional_values(pl.coeffs) == 0))
        return _exact_log(self.tower.q, n, "plane")

    def line_weight(self, line: Line) -> int:
        duals = linalg.kernel(self.tower, [line.rows[0], line.rows[1]], 4)
        assert len(duals) == 2
        z = (self._functional_values(duals[0]) == 0) & (self._functional_values(duals[1]) == 0)
        return _exact_log(self.tower.q, int(np.count_nonzero(z)), "line")

    # -------------------------------------------------- contained lines

    def contained_lines(self) -> list[Line]:
        """Lines of PG(3, q^3) all of whose points belong to the set.

        Such a line has weight >= 4 and therefore passes through a point of
        weight >= 2, so quotient scans from those points find every one.
        """
        t = self.tower
        q = t.q
        keys, w = self._profile()
        spans = self._span_arrays()
        found = {}
        for i in np.nonzero(w >= 2)[0]:
            rep = tuple(int(self._reps[c][i]) for c in range(4))
            wp = int(w[i])
            qk = t.bulk.quotient_keys(spans, rep)
            uniq, first, counts = np.unique(qk, return_index=True, return_counts=True)
            assert uniq[0] == 0 and int(counts[0]) == q**wp
            for j in range(1, uniq.size):
                wl = _exact_log(q, int(counts[j]) + q**wp, "line through a repeated point")
                if wl < 4:
                    continue
                lift = tuple(int(spans[c][first[j]]) for c in range(4))
                line = geometry.mk_line(t, rep, lift)
                if line in found:
                    continue
                lk = t.bulk.point_keys(t.bulk.line_points(rep, lift))
                assert bool(np.isin(lk, keys).all())
                found[line] = None
        return sorted(found, key=lambda ln: ln.rows)

    # -------------------------------------------------- pseudoregulus recovery

    def _seed_line(self, i: int) -> Line:
        t = self.tower
        q = t.q
        spans = self._span_arrays()
        rep = tuple(int(self._reps[c][i]) for c in range(4))
        qk = t.bulk.quotient_keys(spans, rep)
        uniq, first, counts = np.unique(qk, return_index=True, return_counts=True)
        big = np.nonzero(counts == q**3 - q)[0]
        if uniq[0] == 0:
            big = big[big != 0]
        if big.size != 1:
            raise StructureError(
                "seed-ambiguous",
                f"point {i} lies on {big.size} weight-3 lines, cannot pick the family line",
            )
        lift = tuple(int(spans[c][first[int(big[0])]]) for c in range(4))
        return geometry.mk_line(t, rep, lift)

    def _first_point_off(self, lines) -> int:
        t = self.tower
        keys, _ = self._profile()
        excl = set()
        for ln in lines:
            lk = t.bulk.point_keys(t.bulk.line_points(ln.rows[0], ln.rows[1]))
            excl.update(int(x) for x in lk)
        for i in range(keys.size):
            if int(keys[i]) not in excl:
                return i
        raise StructureError("seed-cover", "every point of the set lies on the seed lines")

    def pseudoregulus(self) -> Pseudoregulus:
        t = self.tower
        q = t.q
        q3 = q**3
        per_line = q * q + q + 1
        if not self.is_scattered():
            raise StructureError("not-scattered", "pseudoregulus recovery needs a scattered set")
        keys, _ = self._profile()
        if keys.size != (q**6 - 1) // (q - 1):
            raise StructureError("rank", f"unexpected point count {keys.size}")
        b = t.bulk

        seeds = [self._seed_line(0)]
        seeds.append(self._seed_line(self._first_point_off(seeds)))
        seeds.append(self._seed_line(self._first_point_off(seeds)))
        for i in range(3):
            for j in range(i + 1, 3):
                if linalg.rank(t, list(seeds[i].rows) + list(seeds[j].rows)) != 4:
                    raise StructureError("seed-skew", "seed lines are not pairwise skew")

        # Candidate transversals of the three seed lines: for each point X of
        # the first, join X to the point where the plane <second seed, X>
        # meets the third.  Every common transversal arises this way.
        l1, l2, l3 = seeds
        ct = tuple(zip(*_cross_matrix(t, *l2.rows)))
        s1, s2 = l3.rows
        w1 = linalg.matvec(t, ct, s1)
        w2 = linalg.matvec(t, ct, s2)
        Xc = b.line_points(l1.rows[0], l1.rows[1])
        du = _dot_arrays(b, Xc, w1)
        dw = _dot_arrays(b, Xc, w2)
        Yc = [b.sub(b.mul_scalar(dw, s1[c]), b.mul_scalar(du, s2[c])) for c in range(4)]
        if int(np.count_nonzero(b.pack(Yc) == 0)):
            raise StructureError("seed-skew", "a seed plane swallowed the third seed line")

        grids = b.lines_points_grid(Xc, Yc)
        ckeys = b.pack(b.normalize(grids))
        alive = ~np.isin(ckeys, keys).any(axis=1)
        # a transversal meets every line of the family, so filtering against
        # further family lines never discards a genuine one; keep going until
        # only the two of them are left
        while int(alive.sum()) > 2:
            s_new = self._seed_line(self._first_point_off(seeds))
            seeds.append(s_new)
            skeys = b.point_keys(b.line_points(s_new.rows[0], s_new.rows[1]))
            idx = np.nonzero(alive)[0]
            hits = np.isin(ckeys[idx], skeys).any(axis=1)
            alive[idx[~hits]] = False
        if int(alive.sum()) != 2:
            raise StructureError(
                "transversal-count", f"{int(alive.sum())} candidate transversals, expected 2"
            )
        trans = []
        for i in np.nonzero(alive)[0]:
            xv = tuple(int(Xc[c][i]) for c in range(4))
            yv = tuple(int(Yc[c][i]) for c in range(4))
            trans.append(geometry.mk_line(t, xv, yv))
        t_a, t_b = sorted(trans, key=lambda ln: ln.rows)

        reps = [np.asarray(self._reps[c]) for c in range(4)]

        def feet_on(line, other):
            """For each set point P: the point (line  meet  <P, other>)."""
            octm = tuple(zip(*_cross_matrix(t, *other.rows)))
            r1, r2 = line.rows
            du = _dot_arrays(b, reps, linalg.matvec(t, octm, r1))
            dw = _dot_arrays(b, reps, linalg.matvec(t, octm, r2))
            return [b.sub(b.mul_scalar(dw, r1[c]), b.mul_scalar(du, r2[c])) for c in range(4)]

        fx = feet_on(t_a, t_b)
        fy = feet_on(t_b, t_a)
        kx = b.point_keys(fx)
        ky = b.point_keys(fy)
        if int(np.count_nonzero(kx == 0)) or int(np.count_nonzero(ky == 0)):
            raise StructureError("foot-degenerate", "a set point projected to the zero vector")
        ux, ixinv = np.unique(kx, return_inverse=True)
        uy, iyinv = np.unique(ky, return_inverse=True)
        if ux.size != q3 + 1 or uy.size != q3 + 1:
            raise StructureError(
                "transversal-feet", f"{ux.size} and {uy.size} distinct feet, expected {q3 + 1}"
            )
        combo = ixinv.astype(np.int64) * (q3 + 1) + iyinv
        ucombo, cfirst, ccounts = np.unique(combo, return_index=True, return_counts=True)
        if ucombo.size != q3 + 1 or not np.all(ccounts == per_line):
            raise StructureError("pairing", "the transversal pairing does not partition the set")

        lines = []
        for idx in cfirst:
            xv = tuple(int(fx[c][idx]) for c in range(4))
            yv = tuple(int(fy[c][idx]) for c in range(4))
            lines.append(geometry.mk_line(t, xv, yv))
        lines.sort(key=lambda ln: ln.rows)

        # certificate: q^3+1 pairwise disjoint lines carrying q^2+q+1 set
        # points each; together with the two disjoint transversals that is the
        # whole defining configuration
        fgrids = b.lines_points_batch([ln.rows for ln in lines])
        fkeys = b.pack(b.normalize(fgrids))
        if np.unique(fkeys).size != fkeys.size:
            raise StructureError("family-overlap", "family lines are not pairwise disjoint")
        per = np.isin(fkeys, keys).sum(axis=1)
        if not np.all(per == per_line):
            raise StructureError("family-weight", "a family line carries the wrong point count")
        return Pseudoregulus(tuple(lines), (t_a, t_b))

    def as_dict(self):
        return {
            "basis": [list(v) for v in self.basis],
            "points": self.point_count(),
            "weight_histogram": self.weight_histogram(),
            "scattered": self.is_scattered(),
            "quadric_disjoint": self.quadric_disjoint(),
        }

    def subspace_key(self):
        """Canonical name of the underlying F_q-subspace: the reduced echelon
        form of the 6 x 12 coordinate matrix over F_q."""
        t = self.tower
        rows = [sum((t.coords3(c) for c in v), ()) for v in self.basis]
        red, piv = linalg.rref(t, rows)
        if len(piv) != 6:
            raise ParameterError("basis-dependent", "the 6 vectors are not F_q-independent")
        return red


def build_pseudoregulus_linearset(
    tower: FieldTower, t1: Line, t2: Line, images, sigma_exp: int, rho: int
) -> LinearSet:
    """The set {<u + rho*f(u)>} for the strictly semilinear f: t1 -> t2.

    f sends the echelon rows of t1 to the given image vectors on t2 and has
    companion automorphism x -> x^(q^sigma_exp); sigma_exp must be 1 or 2 so
    that the fixed field is F_q.
    """
    t = tower
    if sigma_exp not in (1, 2):
        raise ParameterError("sigma-identity", "companion automorphism exponent must be 1 or 2")
    if geometry.line_meet(t, t1, t2) is not None:
        raise ParameterError("lines-not-skew", "the carrier lines must be disjoint")
    v1, v2 = images
    for v in (v1, v2):
        geometry._check_vec(t, v, "image vector")
        if linalg.rank(t, [t2.rows[0], t2.rows[1], v]) != 2:
            raise ParameterError("image-off-line", "images must lie on the target line")
    if linalg.rank(t, [v1, v2]) != 2:
        raise ParameterError("image-rank", "the two image vectors must be independent")
    if rho == 0 or not t.in_subfield(rho, 3):
        raise ParameterError("rho-domain", "rho must lie in F_{q^3}^*")
    basis = []
    for e in t.q3_basis():
        s = t.mul(rho, t.frobenius(e, sigma_exp))
        for rvec, img in ((t1.rows[0], v1), (t1.rows[1], v2)):
            basis.append(tuple(t.add(t.mul(e, rvec[c]), t.mul(s, img[c])) for c in range(4)))
    return LinearSet(t, basis)

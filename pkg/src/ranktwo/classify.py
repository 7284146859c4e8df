"""Placing a rank-6 linear set in the family taxonomy.

Rank-6 linear sets of PG(3, q^3) disjoint from the hyperbolic quadric are
sorted into labelled families by gross weight structure:

* ``F5``   scattered: every point of weight 1.  All scattered sets handled
           here are of pseudoregulus type, so the refinement records how the
           two transversal lines sit relative to the quadric and to each
           other under the induced polarity.
* ``F4``   a line of PG(3, q^3) fully contained in the set.  Subtypes a/b/c
           count the set points on the polar line of the contained one:
           0, 1 or q+1.
* ``F3``   a unique point of weight 2 and nothing heavier, no contained
           line.  The refinement is the pair (weight of the polar plane of
           the double point, weight of the polar point of the unique
           weight-5 plane), defined when that plane differs from the polar
           plane.
* ``other``  any remaining weight structure; not examined further.

The labels are opaque tags fixed by the report format.  A signature, the
label together with its refinement, is what the newness comparisons use:
``KNOWN_SIGNATURES`` holds the signatures of the previously constructed
families, and a set whose signature falls outside the table cannot be
isotopic to any of them.  Signature equality proves nothing; for that case
the norm linkage test below gives a further necessary condition.
"""

from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np

from . import families, geometry, linalg
from .errors import ParameterError, StructureError
from .field import FieldTower
from .geometry import Line, Plane, Point
from .linset import LinearSet, Pseudoregulus
from .spread import NucleiProfile, SpreadSet

#: Signatures of the families with previously known members.  Scattered
#: configurations: transversals both inside the quadric; both external and
#: polar to each other; one inside and one external; both external with the
#: polar line of one missing the other.  The one-double-point families all
#: have refinement (4, 1).  The contained-line subtypes all have members.
KNOWN_SIGNATURES = (
    ("F3", 4, 1),
    ("F4a",),
    ("F4b",),
    ("F4c",),
    ("F5", "both-contained"),
    ("F5", "external-polar-pair"),
    ("F5", "mixed"),
    ("F5", "external-perp-disjoint"),
)


def signature_is_known(sig) -> bool:
    return tuple(sig) in KNOWN_SIGNATURES


@dataclasses.dataclass(frozen=True)
class ClassificationReport:
    family: str
    histogram: tuple[tuple[int, int], ...]  # sorted (weight, count) pairs
    # scattered refinement
    configuration: str | None = None
    transversals: tuple[Line, Line] | None = None
    perp_meet: Point | None = None
    # contained-line refinement
    contained_line: Line | None = None
    polar_hits: int | None = None
    # one-double-point refinement
    double_point: Point | None = None
    heavy_plane: Plane | None = None
    type_pair: tuple[int, int] | None = None
    polar_collapse: bool = False  # heavy plane equals the polar plane of P
    # context
    nuclei: NucleiProfile | None = None
    source: dict | None = None
    detail: str | None = None

    def signature(self) -> tuple:
        if self.family == "F5":
            return ("F5", self.configuration)
        if self.family == "F3":
            if self.polar_collapse:
                return ("F3", "untyped")
            return ("F3",) + self.type_pair
        return (self.family,)

    def as_dict(self):
        d = {
            "family": self.family,
            "signature": list(self.signature()),
            "histogram": [list(x) for x in self.histogram],
        }
        if self.configuration is not None:
            d["configuration"] = self.configuration
            d["transversals"] = [[list(r) for r in ln.rows] for ln in self.transversals]
            if self.perp_meet is not None:
                d["perp_meet"] = list(self.perp_meet.coords)
        if self.contained_line is not None:
            d["contained_line"] = [list(r) for r in self.contained_line.rows]
            d["polar_hits"] = self.polar_hits
        if self.double_point is not None:
            d["double_point"] = list(self.double_point.coords)
            d["heavy_plane"] = list(self.heavy_plane.coeffs)
            d["polar_collapse"] = self.polar_collapse
            if self.type_pair is not None:
                d["type_pair"] = list(self.type_pair)
        if self.nuclei is not None:
            d["nuclei"] = self.nuclei.as_dict()
        if self.source is not None:
            d["source"] = dict(self.source)
        if self.detail is not None:
            d["detail"] = self.detail
        return d


def _histogram_pairs(L: LinearSet) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(L.weight_histogram().items()))


def _row12(t: FieldTower, v):
    return sum((t.coords3(c) for c in v), ())


def find_weight5_plane(L: LinearSet, P: Point | None = None) -> Plane:
    """The unique plane meeting the underlying space in a 5-dimensional
    F_q-subspace, for a set with a single double point P.

    Any such plane contains every vector lying on the direction of P: the
    intersection of its 5-space with the 2-space over P is nonzero by
    dimensions, which already puts P on the plane, and then the whole
    2-space sits inside.  So it suffices to run over the 5-spaces between
    that 2-space and the whole 6-space, one per nonzero functional on the
    4-dimensional quotient up to scalar, and keep those whose span over
    F_{q^3} is a plane, detected by rank 3 of a generating 5-tuple.
    """
    t = L.tower
    if P is None:
        heavy = L.points_of_weight(2)
        if len(heavy) != 1:
            raise ParameterError(
                "not-one-double-point", f"{len(heavy)} points of weight 2, need exactly 1"
            )
        P = heavy[0]
    vp = L.point_space(P)
    if len(vp) != 2:
        raise ParameterError("point-weight", f"point has weight {len(vp)}, need 2")

    rows = [_row12(t, v) for v in vp]
    ext = []
    for bvec in L.basis:
        r = _row12(t, bvec)
        if linalg.rank(t, rows + [r]) > len(rows):
            rows.append(r)
            ext.append(bvec)
    if len(ext) != 4:
        raise StructureError("weight5-basis", "could not complete the double point to a basis")

    members1 = [int(c) for c in t.members(1)]
    hits = []
    for j0 in range(4):
        for tail in itertools.product(members1, repeat=3 - j0):
            c = [0] * j0 + [1] + list(tail)
            kern = []
            for j in range(4):
                if j == j0:
                    continue
                kern.append(tuple(t.sub(ext[j][m], t.mul(c[j], ext[j0][m])) for m in range(4)))
            cand = vp + kern
            rk = linalg.rank(t, cand)
            if rk < 3:
                raise StructureError(
                    "weight5-degenerate", "a 5-space collapsed onto a line of PG(3, q^3)"
                )
            if rk == 3:
                hits.append(cand)
    if len(hits) != 1:
        raise StructureError(
            "weight5-count", f"{len(hits)} candidate planes of weight 5, expected exactly 1"
        )

    ind = []
    for v in hits[0]:
        if linalg.rank(t, ind + [v]) > len(ind):
            ind.append(v)
    pl = geometry.mk_plane(t, geometry.cross4(t, *ind))
    if L.plane_weight(pl) != 5:
        raise StructureError("weight5-verify", "the located plane does not have weight 5")
    if not geometry.point_on_plane(t, P, pl):
        raise StructureError("weight5-point", "the double point misses the weight-5 plane")
    return pl


def _transversal_configuration(t: FieldTower, t1: Line, t2: Line):
    k1, _ = geometry.line_quadric_profile(t, t1)
    k2, _ = geometry.line_quadric_profile(t, t2)
    kinds = tuple(sorted((k1, k2)))
    meet_pt = None
    if kinds == ("contained", "contained"):
        label = "both-contained"
    elif kinds == ("contained", "external"):
        label = "mixed"
    elif kinds == ("external", "external"):
        p1 = geometry.polar_line(t, t1)
        if p1.rows == t2.rows:
            label = "external-polar-pair"
        else:
            meet_pt = geometry.line_meet(t, p1, t2)
            label = "external-perp-disjoint" if meet_pt is None else "external-perp-point"
    else:
        label = "+".join(kinds)
    return label, meet_pt


def classify(
    L: LinearSet,
    spread: SpreadSet | None = None,
    pseudoregulus: Pseudoregulus | None = None,
) -> ClassificationReport:
    """The family label with its refinement data.

    The optional spread set only decorates the report with nuclei orders and
    construction parameters; the optional pseudoregulus skips re-extraction
    when the caller already holds one for L.
    """
    t = L.tower
    if not L.quadric_disjoint():
        raise ParameterError("quadric-hit", "the set meets the quadric; not a presemifield set")
    hist = _histogram_pairs(L)
    nuclei = spread.nuclei() if spread is not None else None
    source = dict(spread.meta) if spread is not None else None
    common = {"histogram": hist, "nuclei": nuclei, "source": source}

    lines = L.contained_lines()
    if len(lines) > 1:
        return ClassificationReport(family="other", detail="multiple-contained-lines", **common)
    if lines:
        ell = lines[0]
        polar = geometry.polar_line(t, ell)
        pk = t.bulk.point_keys(t.bulk.line_points(polar.rows[0], polar.rows[1]))
        hitn = int(np.isin(pk, L.point_keys).sum())
        sub = {0: "F4a", 1: "F4b", t.q + 1: "F4c"}.get(hitn)
        if sub is None:
            return ClassificationReport(
                family="other",
                detail=f"contained-line-with-{hitn}-polar-hits",
                contained_line=ell,
                polar_hits=hitn,
                **common,
            )
        return ClassificationReport(family=sub, contained_line=ell, polar_hits=hitn, **common)

    if L.is_scattered():
        pr = pseudoregulus if pseudoregulus is not None else L.pseudoregulus()
        t1, t2 = pr.transversals
        label, meet_pt = _transversal_configuration(t, t1, t2)
        return ClassificationReport(
            family="F5",
            configuration=label,
            transversals=(t1, t2),
            perp_meet=meet_pt,
            **common,
        )

    hdict = dict(hist)
    if set(hdict) == {1, 2} and hdict[2] == 1:
        P = L.points_of_weight(2)[0]
        pi = find_weight5_plane(L, P)
        p_perp = geometry.polar_plane(t, P)
        if pi.coeffs == p_perp.coeffs:
            return ClassificationReport(
                family="F3",
                double_point=P,
                heavy_plane=pi,
                polar_collapse=True,
                **common,
            )
        i = L.plane_weight(p_perp)
        j = L.weight_of_point(geometry.polar_point(t, pi))
        return ClassificationReport(
            family="F3",
            double_point=P,
            heavy_plane=pi,
            type_pair=(i, j),
            **common,
        )

    return ClassificationReport(family="other", detail="weight-structure", **common)


# ---------------------------------------------------------------- isotopy
# necessary conditions used by the newness arguments


def relative_norm(t: FieldTower, x: int) -> int:
    """Norm from the big field down to F_{q^3}: x * x^(q^3)."""
    return t.norm(x, 6, 3)


def norms_frobenius_linked(t: FieldTower, lam1: int, lam2: int) -> bool:
    """Whether the F_{q^3}-norms of two canonical-form parameters lie in one
    orbit of the p-power maps.

    Two canonical-form presemifields with parameters lam1, lam2 can be
    isotopic only if this returns True; a False return is a proof of
    non-isotopy, a True return proves nothing.  Symmetric in its arguments,
    since the p-power orbits partition the field.
    """
    if lam1 == 0 or lam2 == 0:
        raise ParameterError("zero-lambda", "norm linkage needs nonzero parameters")
    n1 = relative_norm(t, lam1)
    n2 = relative_norm(t, lam2)
    return any(t.frobenius_p(n1, k) == n2 for k in range(t.n))


def d_a_class_floor(t: FieldTower) -> tuple[int, float]:
    """Exact count of norm-linkage classes met by the scattered single-twist
    family, with the guaranteed floor (q-3)/2h.

    Every scattered member transports onto the canonical form with parameter
    the fraction (N(a)-1)/(N(a)+1) in F_q, whose relative norm is its
    square; distinct p-power orbits of those squares are non-isotopic by the
    linkage condition, so the orbit count bounds the isotopy classes from
    below.
    """
    vals = set()
    minus_one = t.negate(1)
    for a in families.valid_d_a_params(t):
        na = t.norm(a, 3, 1)
        if na == minus_one:
            continue  # contained-line member, no transport
        lb = families.lambda_bar(t, na)
        vals.add(t.mul(lb, lb))
    if not vals:
        raise ParameterError("empty-family", "no scattered single-twist members at this q")
    reps = {min(t.frobenius_p(v, k) for k in range(t.n)) for v in vals}
    bound = (t.q - 3) / (2 * t.h)
    count = len(reps)
    if bound > 0 and count < math.ceil(bound):
        raise StructureError("class-floor", f"orbit count {count} under the floor {bound}")
    return count, bound

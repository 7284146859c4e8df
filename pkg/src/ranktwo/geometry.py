"""Projective geometry of PG(3, q^3) around the hyperbolic quadric X0*X3 = X1*X2.

Vectors are 4-tuples of canonical codes with entries in F_{q^3}.  The wrapper
dataclasses give points, lines and planes value semantics by storing one
canonical representative each: points and planes scale their first nonzero
coordinate to 1, lines keep the reduced echelon basis of their row space.
Equality and hashing then just work.

The second half of the module switches coordinates: V(4, q^3) is identified
with F_{q^6} x F_{q^6} through the basis {1, w} over F_{q^3}, where w sits in
F_{q^2} \\ F_q and w^2 = 1/xi for the chosen nonsquare xi.  In those pair
coordinates the quadric becomes X^(q^3+1) = Y^(q^3+1) and the subgroup of
collineations fixing each of its two line families has the closed form
implemented by apply_collineation.
"""

from __future__ import annotations

import dataclasses

from . import linalg
from .errors import ParameterError, StructureError
from .field import FieldTower


@dataclasses.dataclass(frozen=True)
class Point:
    coords: tuple[int, int, int, int]


@dataclasses.dataclass(frozen=True)
class Line:
    rows: tuple[tuple[int, int, int, int], tuple[int, int, int, int]]


@dataclasses.dataclass(frozen=True)
class Plane:
    coeffs: tuple[int, int, int, int]


@dataclasses.dataclass(frozen=True)
class PairPoint:
    """A point in pair coordinates: the F_{q^3}-span of (x, y) in F_{q^6}^2."""

    x: int
    y: int


# ---------------------------------------------------------------- vectors

def _check_vec(t: FieldTower, v, what: str) -> None:
    if len(v) != 4:
        raise ParameterError("vector-length", f"{what}: need 4 coordinates, got {len(v)}")
    for c in v:
        t._require(c, 3, what)


def _normalize(t: FieldTower, v):
    piv = next((c for c in v if c), None)
    if piv is None:
        raise ParameterError("zero-vector", "projective objects need a nonzero vector")
    s = t.inv(piv)
    return tuple(t.mul(s, c) for c in v)


def _fdot(t: FieldTower, a, b) -> int:
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = t.add(acc, t.mul(x, y))
    return acc


def mk_point(t: FieldTower, v) -> Point:
    _check_vec(t, v, "point coordinate")
    return Point(_normalize(t, v))


def mk_plane(t: FieldTower, coeffs) -> Plane:
    _check_vec(t, coeffs, "plane coefficient")
    return Plane(_normalize(t, coeffs))


def mk_line(t: FieldTower, v1, v2) -> Line:
    _check_vec(t, v1, "line row")
    _check_vec(t, v2, "line row")
    rows, pivots = linalg.rref(t, [v1, v2])
    if len(pivots) != 2:
        raise ParameterError("line-rank", "a line needs two independent vectors")
    return Line((rows[0], rows[1]))


# ---------------------------------------------------------------- quadric and polarity

def quadric_value(t: FieldTower, v) -> int:
    return t.sub(t.mul(v[0], v[3]), t.mul(v[1], v[2]))


def on_quadric(t: FieldTower, p: Point) -> bool:
    return quadric_value(t, p.coords) == 0


def polar_form(t: FieldTower, u, v) -> int:
    """The symmetric form with polar_form(v, v) = 2 * quadric_value(v)."""
    acc = t.add(t.mul(u[0], v[3]), t.mul(u[3], v[0]))
    return t.sub(acc, t.add(t.mul(u[1], v[2]), t.mul(u[2], v[1])))


def _polar_vec(t: FieldTower, v):
    return (v[3], t.negate(v[2]), t.negate(v[1]), v[0])


def polar_plane(t: FieldTower, p: Point) -> Plane:
    return mk_plane(t, _polar_vec(t, p.coords))


def polar_point(t: FieldTower, pl: Plane) -> Point:
    return mk_point(t, _polar_vec(t, pl.coeffs))


def polar_line(t: FieldTower, line: Line) -> Line:
    rows = [_polar_vec(t, r) for r in line.rows]
    ker = linalg.kernel(t, rows, 4)
    assert len(ker) == 2
    return mk_line(t, ker[0], ker[1])


# ---------------------------------------------------------------- incidence

def point_on_plane(t: FieldTower, p: Point, pl: Plane) -> bool:
    return _fdot(t, pl.coeffs, p.coords) == 0


def point_on_line(t: FieldTower, p: Point, line: Line) -> bool:
    return linalg.rank(t, [line.rows[0], line.rows[1], p.coords]) == 2


def line_in_plane(t: FieldTower, line: Line, pl: Plane) -> bool:
    return all(_fdot(t, pl.coeffs, r) == 0 for r in line.rows)


# ---------------------------------------------------------------- spans and meets

def det3(t: FieldTower, rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    m1 = t.sub(t.mul(e, i), t.mul(f, h))
    m2 = t.sub(t.mul(d, i), t.mul(f, g))
    m3 = t.sub(t.mul(d, h), t.mul(e, g))
    return t.add(t.sub(t.mul(a, m1), t.mul(b, m2)), t.mul(c, m3))


def cross4(t: FieldTower, v1, v2, v3):
    """w such that <w, u> is the 4x4 determinant with rows u, v1, v2, v3."""
    out = []
    for i in range(4):
        cols = [j for j in range(4) if j != i]
        minor = det3(t, [tuple(v[j] for j in cols) for v in (v1, v2, v3)])
        out.append(minor if i % 2 == 0 else t.negate(minor))
    return tuple(out)


def plane_through(t: FieldTower, p1: Point, p2: Point, p3: Point) -> Plane:
    w = cross4(t, p1.coords, p2.coords, p3.coords)
    if not any(w):
        raise ParameterError("collinear", "collinear points span no plane")
    return mk_plane(t, w)


def span_plane(t: FieldTower, line: Line, p: Point) -> Plane:
    w = cross4(t, line.rows[0], line.rows[1], p.coords)
    if not any(w):
        raise ParameterError("point-on-line", "the point lies on the line")
    return mk_plane(t, w)


def plane_rows(t: FieldTower, pl: Plane):
    """Three vectors spanning the plane's 3-dimensional row space."""
    ker = linalg.kernel(t, [pl.coeffs], 4)
    assert len(ker) == 3
    return ker


def line_meet(t: FieldTower, l1: Line, l2: Line):
    """Common point of two distinct lines, None when they are skew."""
    r1, r2 = l1.rows
    s1, s2 = l2.rows
    rows = [(r1[c], r2[c], t.negate(s1[c]), t.negate(s2[c])) for c in range(4)]
    ker = linalg.kernel(t, rows, 4)
    if not ker:
        return None
    if len(ker) > 1:
        raise ParameterError("lines-equal", "the two lines coincide")
    a1, a2 = ker[0][0], ker[0][1]
    v = tuple(t.add(t.mul(a1, r1[c]), t.mul(a2, r2[c])) for c in range(4))
    return mk_point(t, v)


def meet_plane_line(t: FieldTower, pl: Plane, line: Line):
    """Intersection point, None when the line lies inside the plane."""
    r1, r2 = line.rows
    f1 = _fdot(t, pl.coeffs, r1)
    f2 = _fdot(t, pl.coeffs, r2)
    if f1 == 0 and f2 == 0:
        return None
    v = tuple(t.sub(t.mul(f2, r1[c]), t.mul(f1, r2[c])) for c in range(4))
    return mk_point(t, v)


def line_points(t: FieldTower, line: Line):
    """All q^3 + 1 points of the line, deterministic order."""
    r1, r2 = line.rows
    out = []
    for m in t.members(3):
        m = int(m)
        v = tuple(t.add(r1[c], t.mul(m, r2[c])) for c in range(4))
        out.append(mk_point(t, v))
    out.append(mk_point(t, r2))
    return out


def line_quadric_profile(t: FieldTower, line: Line):
    """('external'|'tangent'|'secant'|'contained', number of quadric points)."""
    hits = sum(1 for p in line_points(t, line) if on_quadric(t, p))
    kind = {0: "external", 1: "tangent", 2: "secant"}.get(hits)
    if kind is None:
        if hits != t.q**3 + 1:
            raise StructureError("line-quadric", f"a line with {hits} quadric points")
        kind = "contained"
    return kind, hits


def common_transversals(t: FieldTower, l1: Line, l2: Line, l3: Line):
    """The q^3 + 1 lines meeting three pairwise skew lines.

    Through every point X of l1 there is exactly one such line: it lives in
    the plane spanned by X and l2 and passes through that plane's meeting
    point with l3.  Ordered by line_points(l1).
    """
    for a, b in ((l1, l2), (l1, l3), (l2, l3)):
        if line_meet(t, a, b) is not None:
            raise ParameterError("lines-not-skew", "common transversals need pairwise skew lines")
    out = []
    for xp in line_points(t, l1):
        pi = span_plane(t, l2, xp)
        yp = meet_plane_line(t, pi, l3)
        assert yp is not None  # l3 inside pi would force l2, l3 coplanar
        out.append(mk_line(t, xp.coords, yp.coords))
    return out


# ---------------------------------------------------------------- pair coordinates

def check_nonsquare(t: FieldTower, xi: int) -> None:
    if xi == 0 or not t.in_subfield(xi, 1):
        raise ParameterError("xi-domain", f"xi must lie in F_q^*, got {xi}")
    if t.is_square_q(xi):
        raise ParameterError("xi-square", f"xi = {xi} is a square in F_q")


def omega(t: FieldTower, xi: int) -> int:
    """Canonical w in F_{q^2} \\ F_q with w^2 = 1/xi (smaller of the two roots)."""
    check_nonsquare(t, xi)
    target = t.inv(xi)
    ell = int(t.log[target])
    assert ell % 2 == 0  # subfield elements are squares up here
    z = int(t.exp[ell // 2])
    w = min(z, t.negate(z))
    assert t.in_subfield(w, 2) and not t.in_subfield(w, 1)
    return w


def phi_vec(t: FieldTower, v, xi: int):
    """Pair coordinates of a 4-vector: (x0+x3 + (x1+xi*x2) w, x0-x3 + (x1-xi*x2) w)."""
    _check_vec(t, v, "phi argument")
    w = omega(t, xi)
    x0, x1, x2, x3 = v
    xi_x2 = t.mul(xi, x2)
    big_x = t.add(t.add(x0, x3), t.mul(t.add(x1, xi_x2), w))
    big_y = t.add(t.sub(x0, x3), t.mul(t.sub(x1, xi_x2), w))
    return big_x, big_y


def _split_on_omega(t: FieldTower, z: int, w: int):
    """z = z0 + z1*w with z0, z1 in F_{q^3}; uses w^(q^3) = -w."""
    zc = t.frobenius(z, 3)
    half = t.inv(t.add(1, 1))
    z0 = t.mul(half, t.add(z, zc))
    z1 = t.div(t.mul(half, t.sub(z, zc)), w)
    assert t.in_subfield(z0, 3) and t.in_subfield(z1, 3)
    return z0, z1


def phi_inv_vec(t: FieldTower, big_x: int, big_y: int, xi: int):
    w = omega(t, xi)
    half = t.inv(t.add(1, 1))
    s = t.mul(half, t.add(big_x, big_y))
    d = t.mul(half, t.sub(big_x, big_y))
    x0, x1 = _split_on_omega(t, s, w)
    x3, x2_scaled = _split_on_omega(t, d, w)
    return (x0, x1, t.div(x2_scaled, xi), x3)


def mk_pair(t: FieldTower, x: int, y: int) -> PairPoint:
    """Canonical pair representative: reduce the leading log modulo q^3 + 1."""
    if x == 0 and y == 0:
        raise ParameterError("zero-vector", "projective objects need a nonzero vector")
    m = t.q**3 + 1
    if x:
        xc = int(t.exp[int(t.log[x]) % m])
        lam = t.div(xc, x)
        return PairPoint(xc, t.mul(lam, y))
    yc = int(t.exp[int(t.log[y]) % m])
    return PairPoint(0, yc)


def to_pair(t: FieldTower, p: Point, xi: int) -> PairPoint:
    return mk_pair(t, *phi_vec(t, p.coords, xi))


def from_pair(t: FieldTower, pp: PairPoint, xi: int) -> Point:
    return mk_point(t, phi_inv_vec(t, pp.x, pp.y, xi))


def pair_quadric_value(t: FieldTower, x: int, y: int) -> int:
    e = t.q**3 + 1
    nx = t.pow_int(x, e) if x else 0
    ny = t.pow_int(y, e) if y else 0
    return t.sub(nx, ny)


@dataclasses.dataclass(frozen=True)
class PairCollineation:
    """Semilinear map in pair coordinates fixing each ruling family setwise.

    tau indexes the companion automorphism z -> z^(p^tau) of F_{q^6}.
    """

    a: int
    b: int
    c: int
    d: int
    tau: int


def mk_collineation(t: FieldTower, a: int, b: int, c: int, d: int, tau: int) -> PairCollineation:
    e = t.q**3 + 1
    for z, what in ((a, "a"), (b, "b"), (c, "c"), (d, "d")):
        if not (0 <= z < t.order):
            raise ParameterError("pair-coeff", f"coefficient {what} out of range")
    na = t.pow_int(a, e) if a else 0
    nb = t.pow_int(b, e) if b else 0
    nc = t.pow_int(c, e) if c else 0
    nd = t.pow_int(d, e) if d else 0
    if na == nb or nc == nd:
        raise ParameterError("pair-degenerate", "coefficient pairs need distinct (q^3+1)-powers")
    return PairCollineation(a, b, c, d, tau % t.n)


def apply_collineation(t: FieldTower, g: PairCollineation, x: int, y: int):
    """Image of the pair vector (x, y)."""
    xt = t.frobenius_p(x, g.tau)
    yt = t.frobenius_p(y, g.tau)
    xtc = t.frobenius(xt, 3)
    ytc = t.frobenius(yt, 3)
    ct = t.frobenius_p(g.c, g.tau)
    dt = t.frobenius_p(g.d, g.tau)
    ctc = t.frobenius(ct, 3)
    dtc = t.frobenius(dt, 3)
    x2 = 0
    for coeff, var in ((t.mul(g.a, ct), xt), (t.mul(g.b, dtc), xtc),
                       (t.mul(g.a, dtc), yt), (t.mul(g.b, ct), ytc)):
        x2 = t.add(x2, t.mul(coeff, var))
    y2 = 0
    for coeff, var in ((t.mul(g.a, dt), xt), (t.mul(g.b, ctc), xtc),
                       (t.mul(g.a, ctc), yt), (t.mul(g.b, dt), ytc)):
        y2 = t.add(y2, t.mul(coeff, var))
    return x2, y2

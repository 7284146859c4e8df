"""Constructors for the presemifield families under comparison.

Two six-dimensional families are built from twisted difference maps on
F_{q^3}:

* the single-twist family ("d-a"): matrices [[x, y], [A(y), xi*A(x)]]
  with A(x) = x^{q^r} - a*x^{q^{3-r}};
* the double-twist family ("d-ab"): matrices [[x, y], [A(y), xi*B(x)]]
  with A built from b^2 and B(x) = 2*H^{-1}(x) - x for the twist
  H(x) = x - b*x^{q^{3-r}}.

Alongside them live the reference constructions they are measured
against: the known semifield with nuclei (q^3, q^2, q, q) whose linear
set contains a full line ("f4a"), and the scattered-type canonical
family x*y = (lam*y + alpha*y^sigma)*x + y*x^{q^3} with the two
parameter choices that have known members ("s1", "s2").

Each constructor returns a SpreadSet whose meta dict records the family
tag and parameters; closed-form geometric data for the families (their
transversal lines and companion semilinear maps) is exposed as plain
functions so the checking layer can compare recovered structures against
the stated ones.
"""

from __future__ import annotations

from . import geometry, qpoly
from .errors import ParameterError, StructureError
from .field import FieldTower
from .spread import SpreadSet

__all__ = [
    "valid_d_a_params",
    "valid_d_ab_params",
    "make_d_a",
    "make_d_ab",
    "make_f4a",
    "make_canonical",
    "make_s1",
    "make_s2",
    "s1_norm_targets",
    "s2_norm_target",
    "smallest_with_norm",
    "lambda_bar",
    "d_a_transversals",
    "d_ab_transversals",
    "d_a_transversal_map",
    "d_ab_transversal_map",
    "d_a_normalizer",
    "d_ab_axis_lines",
]


def _check_xi(t: FieldTower, xi):
    if xi is None:
        return t.smallest_nonsquare()
    geometry.check_nonsquare(t, xi)
    return xi


# ------------------------------------------------------------ twist families


def valid_d_a_params(t: FieldTower) -> list:
    """All admissible twist parameters a: nonzero with N_{q^3/q}(a) != 1."""
    return [int(a) for a in t.members(3) if a != 0 and t.norm(int(a)) != 1]


def make_d_a(t: FieldTower, a: int, r: int, xi: int | None = None) -> SpreadSet:
    xi = _check_xi(t, xi)
    t._require(a, 3, "twist parameter")
    if a == 0 or t.norm(a) == 1:
        raise ParameterError("a-norm", "need nonzero a with N(a) != 1")
    A = qpoly.frob_diff(t, a, r)
    mats = [(e, 0, 0, t.mul(xi, A(e))) for e in t.q3_basis()]
    mats += [(0, e, A(e), 0) for e in t.q3_basis()]
    meta = {"family": "d-a", "q": t.q, "r": r, "a": a, "xi": xi}
    return SpreadSet(t, mats, meta)


def valid_d_ab_params(t: FieldTower) -> list:
    """All admissible b: nonzero with N_{q^3/q}(b) != 1, -1.  Empty at q = 3."""
    bad = (1, t.negate(1))
    return [int(b) for b in t.members(3) if b != 0 and t.norm(int(b)) not in bad]


def make_d_ab(t: FieldTower, b: int, r: int, xi: int | None = None) -> SpreadSet:
    xi = _check_xi(t, xi)
    t._require(b, 3, "twist parameter")
    if b == 0 or t.norm(b) in (1, t.negate(1)):
        raise ParameterError("b-norm", "need nonzero b with N(b) != 1, -1")
    b2 = t.mul(b, b)
    A = qpoly.frob_diff(t, b2, r)
    B = qpoly.reflect(t, b, r)
    mats = [(e, 0, 0, t.mul(xi, B(e))) for e in t.q3_basis()]
    mats += [(0, e, A(e), 0) for e in t.q3_basis()]
    meta = {"family": "d-ab", "q": t.q, "r": r, "b": b, "xi": xi}
    return SpreadSet(t, mats, meta)


# -------------------------------------------------- two-term reference forms
#
# Both reference constructions multiply by maps of the shape
# x -> c*x + d*x^{q^3} on F_{q^6}.  Such maps are F_{q^3}-linear, so their
# matrices over a basis {1, w} of F_{q^6} / F_{q^3} form the spread set.


def _splitter(t: FieldTower):
    """Basis completion w of F_{q^6} over F_{q^3} and the coordinate map."""
    w = next(c for c in range(t.order) if not t.in_subfield(c, 3))
    dwi = t.inv(t.sub(w, t.frobenius(w, 3)))

    def split(z):
        z2 = t.mul(t.sub(z, t.frobenius(z, 3)), dwi)
        z1 = t.sub(z, t.mul(z2, w))
        return z1, z2

    return w, split


def _two_term_matrix(t, w, split, c, d):
    r0 = split(t.add(c, d))
    r1 = split(t.add(t.mul(c, w), t.mul(d, t.frobenius(w, 3))))
    return (r0[0], r0[1], r1[0], r1[1])


def _f4a_shift(t: FieldTower) -> int:
    """Smallest s in F_q^* making X^3 - s*X - 1 irreducible over F_q."""
    for s in t.members(1):
        s = int(s)
        if s == 0:
            continue
        if all(
            t.sub(t.sub(t.pow_int(int(z), 3), t.mul(s, int(z))), 1) != 0
            for z in t.members(1)
        ):
            return s
    raise StructureError("f4a-shift", "no shift gives an irreducible cubic")


def make_f4a(t: FieldTower, sigma: int | None = None) -> SpreadSet:
    """The reference presemifield with nuclei (q^3, q^2, q, q).

    Multiplication sends x to (alpha + beta*u + gamma*u^2)*x
    + gamma*b*x^{q^3}, where y = alpha + beta*u + gamma*(b + u^2) with
    alpha, beta, gamma in F_{q^2}; u is a root of the irreducible cubic
    X^3 - sigma*X - 1 and b solves N_{q^6/q^3}(b) = sigma^2 + 9u
    + 3*sigma*u^2.  The smallest admissible sigma and b are chosen so the
    construction is reproducible.
    """
    p = t.p
    if sigma is None:
        sigma = _f4a_shift(t)
    else:
        t._require(sigma, 1, "cubic shift")
        if sigma == 0 or any(
            t.sub(t.sub(t.pow_int(int(z), 3), t.mul(sigma, int(z))), 1) == 0
            for z in t.members(1)
        ):
            raise ParameterError("sigma-reducible", "the cubic must be irreducible")
    u = next(
        (
            int(x)
            for x in t.members(3)
            if not t.in_subfield(int(x), 1)
            and t.sub(t.sub(t.pow_int(int(x), 3), t.mul(sigma, int(x))), 1) == 0
        ),
        None,
    )
    if u is None:
        raise StructureError("f4a-root", "the cubic has no root of degree 3")
    u2 = t.mul(u, u)
    w_target = t.add(
        t.add(t.mul(sigma, sigma), t.mul(9 % p, u)),
        t.mul(t.mul(3 % p, sigma), u2),
    )
    # candidates for b: the fiber of the norm onto F_{q^3}
    q3 = t.q**3
    n1 = t.order - 1
    lw = int(t.log[w_target])
    cands = sorted(
        int(t.exp[(lw // (q3 + 1) + k * (q3 - 1)) % n1]) for k in range(q3 + 1)
    )
    b = None
    for cand in cands:
        v = (1, u, t.add(cand, u2))
        rows = [
            v,
            tuple(t.frobenius(x, 2) for x in v),
            tuple(t.frobenius(x, 4) for x in v),
        ]
        if geometry.det3(t, rows) != 0:
            b = cand
            break
    if b is None:
        raise StructureError("f4a-basis", "no norm solution completes a basis")
    w, split = _splitter(t)
    zeta = t.subfield_generator(2)
    mats = []
    for al, be, ga in ((1, 0, 0), (zeta, 0, 0), (0, 1, 0), (0, zeta, 0), (0, 0, 1), (0, 0, zeta)):
        c = t.add(t.add(al, t.mul(be, u)), t.mul(ga, u2))
        d = t.mul(ga, b)
        mats.append(_two_term_matrix(t, w, split, c, d))
    meta = {"family": "f4a", "q": t.q, "sigma": sigma, "u": u, "b": b, "split_basis": w}
    return SpreadSet(t, mats, meta)


def make_canonical(
    t: FieldTower, lam: int, alpha: int, sigma_exp: int
) -> SpreadSet:
    """Scattered-type canonical form x*y = (lam*y + alpha*y^sigma)*x + y*x^{q^3},
    with sigma = q^sigma_exp, sigma_exp in {2, 4}."""
    if sigma_exp not in (2, 4):
        raise ParameterError("sigma-exp", "companion exponent must be 2 or 4")
    t._require(lam, 6, "lambda")
    t._require(alpha, 6, "alpha")
    if alpha == 0:
        raise ParameterError("alpha-zero", "alpha must be nonzero")
    w, split = _splitter(t)
    g = t.generator
    mats = []
    for j in range(6):
        y = t.pow_int(g, j)
        c = t.add(t.mul(lam, y), t.mul(alpha, t.frobenius(y, sigma_exp)))
        mats.append(_two_term_matrix(t, w, split, c, y))
    meta = {
        "family": "canonical",
        "q": t.q,
        "lambda": lam,
        "alpha": alpha,
        "sigma_exp": sigma_exp,
    }
    return SpreadSet(t, mats, meta)


def smallest_with_norm(t: FieldTower, target: int) -> int:
    """Smallest code in F_{q^6} whose norm onto F_{q^3} is the target."""
    t._require(target, 3, "norm target")
    if target == 0:
        raise ParameterError("norm-domain", "the norm target must be nonzero")
    q3 = t.q**3
    n1 = t.order - 1
    lt = int(t.log[target])
    return min(int(t.exp[(lt // (q3 + 1) + k * (q3 - 1)) % n1]) for k in range(q3 + 1))


def s1_norm_targets(t: FieldTower) -> list:
    """The one or two norm values that define the first canonical example:
    inverses of 2*(1 - eta) over the primitive sixth roots of unity eta."""
    if t.q % 6 != 1:
        raise ParameterError("congruence", "needs q = 1 (mod 6)")
    etas = [
        int(z)
        for z in t.members(1)
        if z != 0
        and t.pow_int(int(z), 6) == 1
        and t.pow_int(int(z), 3) != 1
        and t.pow_int(int(z), 2) != 1
    ]
    return sorted(t.inv(t.mul(2 % t.p, t.sub(1, eta))) for eta in etas)


def make_s1(t: FieldTower, index: int = 0) -> SpreadSet:
    targets = s1_norm_targets(t)
    if not 0 <= index < len(targets):
        raise ParameterError("s1-index", f"index must be in 0..{len(targets) - 1}")
    lam = smallest_with_norm(t, targets[index])
    s = make_canonical(t, lam, lam, 2)
    s.meta.update({"family": "s1", "norm": targets[index], "index": index})
    return s


def s2_norm_target(t: FieldTower) -> int:
    """The norm value that defines the second canonical example:
    the inverse of -(u + u^2) for a degree-3 root u of X^3 - X - 1."""
    if t.q % 3 != 0:
        raise ParameterError("congruence", "needs q = 0 (mod 3)")
    u = next(
        (
            int(x)
            for x in t.members(3)
            if not t.in_subfield(int(x), 1)
            and t.sub(t.sub(t.pow_int(int(x), 3), int(x)), 1) == 0
        ),
        None,
    )
    if u is None:
        raise StructureError("s2-root", "X^3 - X - 1 has no root of degree 3")
    return t.inv(t.negate(t.add(u, t.mul(u, u))))


def make_s2(t: FieldTower) -> SpreadSet:
    target = s2_norm_target(t)
    lam = smallest_with_norm(t, target)
    s = make_canonical(t, lam, lam, 2)
    s.meta.update({"family": "s2", "norm": target})
    return s


# ------------------------------------------------- closed-form geometric data


def lambda_bar(t: FieldTower, na: int) -> int:
    """(N(a) - 1) / (N(a) + 1): the canonical-form parameter of a scattered
    single-twist presemifield with twist norm na."""
    return t.div(t.sub(na, 1), t.add(na, 1))


def d_a_transversals(t: FieldTower, a: int, r: int, xi: int):
    """The stated transversal pair of the single-twist pseudoregulus."""
    ar1 = t.mul(t.frobenius(a, r), a)
    amr = t.frobenius(a, 3 - r)
    t1 = geometry.mk_line(
        t, (1, 0, 0, t.negate(t.mul(xi, ar1))), (0, 1, t.negate(ar1), 0)
    )
    t2 = geometry.mk_line(t, (t.div(amr, xi), 0, 0, 1), (0, amr, 1, 0))
    return t1, t2


def d_a_transversal_map(t: FieldTower, a: int, r: int, xi: int):
    """Semilinear companion map between the two transversals; a point of the
    first transversal is determined by (v0, v1) = (x, y)."""
    amr = t.frobenius(a, 3 - r)

    def f(v):
        xr = t.frobenius(v[0], r)
        yr = t.frobenius(v[1], r)
        return (t.mul(amr, xr), t.mul(amr, yr), yr, t.mul(xi, xr))

    return f


def d_a_normalizer(t: FieldTower, a: int, r: int, xi: int) -> "geometry.PairCollineation":
    """Pair-model collineation moving the transversal images onto the
    reference lines {(z, 0)} and {(lambda_bar * z, z)}."""
    ar1 = t.mul(t.frobenius(a, r), a)
    c = t.sub(1, t.mul(xi, ar1))
    d = t.negate(t.add(1, t.mul(xi, ar1)))
    return geometry.mk_collineation(t, 1, 0, c, d, 0)


def d_ab_transversals(t: FieldTower, b: int, r: int, xi: int):
    """The stated transversal pair of the double-twist pseudoregulus."""
    b2 = t.mul(b, b)
    c1 = t.inv(t.frobenius(b2, 3 - r))
    c2 = t.negate(t.mul(b2, t.frobenius(b2, r)))
    t1 = geometry.mk_line(t, (1, 0, 0, xi), (0, 1, c1, 0))
    t2 = geometry.mk_line(t, (1, 0, 0, t.negate(xi)), (0, 1, c2, 0))
    return t1, t2


def d_ab_transversal_map(t: FieldTower, b: int, r: int, xi: int):
    """Semilinear companion map between the double-twist transversals."""
    b2 = t.mul(b, b)
    ib2r = t.inv(t.frobenius(b2, r))

    def f(v):
        xm = t.frobenius(v[0], 3 - r)
        ym = t.frobenius(v[1], 3 - r)
        return (
            t.negate(t.mul(b, xm)),
            t.mul(ib2r, ym),
            t.negate(t.mul(b2, ym)),
            t.mul(xi, t.mul(b, xm)),
        )

    return f


def d_ab_axis_lines(t: FieldTower):
    """The two weight-3 axis lines of a double-twist linear set: the line
    X1 = X2 = 0 and its polar X0 = X3 = 0."""
    s = geometry.mk_line(t, (1, 0, 0, 0), (0, 0, 0, 1))
    s_perp = geometry.mk_line(t, (0, 1, 0, 0), (0, 0, 1, 0))
    return s, s_perp

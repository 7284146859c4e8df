"""F_q-linear maps of F_{q^3} written as q-twisted polynomials.

A map x -> c0*x + c1*x^q + c2*x^(q^2) is stored by its coefficient triple
(c0, c1, c2), entries in F_{q^3}.  Every F_q-linear endomorphism of F_{q^3}
has exactly one expression of this shape, so the triple doubles as a normal
form: two QPoly values are equal iff the maps are.

Composition stays inside the representation.  Inversion goes through the
3x3 matrix over F_q and comes back by interpolating the twisted coefficients
on the fixed basis of the tower.
"""

from __future__ import annotations

import dataclasses

from . import linalg
from .errors import DomainError, ParameterError
from .field import FieldTower


@dataclasses.dataclass(frozen=True)
class QPoly:
    tower: FieldTower = dataclasses.field(repr=False, compare=False)
    coeffs: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if len(self.coeffs) != 3:
            raise ParameterError("coeff-count", f"need 3 coefficients, got {len(self.coeffs)}")
        cs = tuple(int(c) for c in self.coeffs)
        for c in cs:
            self.tower._require(c, 3, "twisted coefficient")
        object.__setattr__(self, "coeffs", cs)

    def __call__(self, x: int) -> int:
        t = self.tower
        t._require(x, 3, "twisted polynomial argument")
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c:
                acc = t.add(acc, t.mul(c, t.frobenius(x, i)))
        return acc

    def add(self, other: "QPoly") -> "QPoly":
        t = self.tower
        return QPoly(t, tuple(t.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: int) -> "QPoly":
        t = self.tower
        return QPoly(t, tuple(t.mul(c, a) for a in self.coeffs))

    def compose(self, other: "QPoly") -> "QPoly":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        t = self.tower
        out = [0, 0, 0]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                k = (i + j) % 3
                out[k] = t.add(out[k], t.mul(a, t.frobenius(b, i)))
        return QPoly(t, tuple(out))

    def matrix3(self):
        """Matrix over F_q on coordinate columns w.r.t. tower.q3_basis()."""
        t = self.tower
        cols = [t.coords3(self(b)) for b in t.q3_basis()]
        return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))

    def is_bijective(self) -> bool:
        return linalg.inverse(self.tower, self.matrix3()) is not None

    def kernel_witness(self):
        """A nonzero x with f(x) = 0, or None when f is bijective."""
        t = self.tower
        vecs = linalg.kernel(t, self.matrix3())
        if not vecs:
            return None
        x = 0
        for c, e in zip(vecs[0], t.q3_basis()):
            x = t.add(x, t.mul(c, e))
        return x

    def invert(self) -> "QPoly":
        """Compositional inverse; DomainError with a kernel witness if singular."""
        t = self.tower
        minv = linalg.inverse(t, self.matrix3())
        if minv is None:
            w = self.kernel_witness()
            raise DomainError(
                "singular-map", f"twisted polynomial {self.coeffs} is singular, kernel contains {w}"
            )
        basis = t.q3_basis()
        # column j of minv holds the coordinates of g(basis_j); interpolate the
        # twisted coefficients of g from those three values
        rows, rhs = [], []
        for j, b in enumerate(basis):
            z = 0
            for i, e in enumerate(basis):
                z = t.add(z, t.mul(minv[i][j], e))
            rows.append(tuple(t.frobenius(b, i) for i in range(3)))
            rhs.append(z)
        d = linalg.solve(t, rows, rhs)
        assert d is not None
        g = QPoly(t, d)
        assert g.compose(self).coeffs == (1, 0, 0)
        assert self.compose(g).coeffs == (1, 0, 0)
        return g


def identity(tower: FieldTower) -> QPoly:
    return QPoly(tower, (1, 0, 0))


def _check_r(r: int) -> None:
    if r not in (1, 2):
        raise ParameterError("r-range", f"twist index r must be 1 or 2, got {r}")


def frob_diff(tower: FieldTower, a: int, r: int) -> QPoly:
    """x -> x^(q^r) - a * x^(q^-r).

    Singular exactly when N_{q^3/q}(a) = 1.
    """
    _check_r(r)
    tower._require(a, 3, "frob_diff coefficient")
    c = [0, 0, 0]
    c[r] = 1
    c[3 - r] = tower.negate(a)
    return QPoly(tower, tuple(c))


def twist(tower: FieldTower, b: int, r: int, sign: int = 1) -> QPoly:
    """x -> x + sign * b * x^(q^-r), sign in {+1, -1}."""
    _check_r(r)
    if sign not in (1, -1):
        raise ParameterError("sign", f"sign must be +1 or -1, got {sign}")
    tower._require(b, 3, "twist coefficient")
    c = [0, 0, 0]
    c[0] = 1
    c[3 - r] = b if sign == 1 else tower.negate(b)
    return QPoly(tower, tuple(c))


def reflect(tower: FieldTower, b: int, r: int) -> QPoly:
    """2 * twist(b, r, -1)^(-1) - id.

    Defined when N_{q^3/q}(b) != 1 (the inner map must be invertible) and
    itself bijective when additionally N_{q^3/q}(b) != -1; composing with
    twist(b, r, -1) on the right gives twist(b, r, +1), which is what the
    tests pin down.
    """
    t = tower
    hinv = twist(t, b, r, -1).invert()
    two = t.add(1, 1)
    d0, d1, d2 = hinv.coeffs
    return QPoly(t, (t.sub(t.mul(two, d0), 1), t.mul(two, d1), t.mul(two, d2)))

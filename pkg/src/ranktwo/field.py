"""Exact arithmetic in the tower F_p <= F_q <= F_{q^2}, F_{q^3} <= F_{q^6}, q = p^h.

Everything lives inside one ambient field F_{p^{6h}} whose elements are encoded
as canonical integers sum_i c_i p^i, where (c_0, ..., c_{6h-1}) are the
coordinates with respect to the polynomial basis 1, x, x^2, ... modulo a fixed
irreducible polynomial.  The modulus is pinned deterministically: the
lexicographically smallest monic irreducible of degree 6h over F_p, coefficient
vectors compared constant term first.  Two builds of the same (p, h) therefore
agree bit for bit, and an integer crossing a process or file boundary means the
same field element everywhere.

Multiplication runs on discrete-log tables for a fixed generator; scalar
addition uses a Zech-logarithm table and bulk (numpy) addition uses base-p
digit tables.  Subfields F_{q^k}, k in {1, 2, 3, 6}, are precomputed as boolean
masks and sorted member arrays, so membership, norms, traces, Frobenius powers
and square tests all reduce to integer arithmetic on logarithms.

Supported towers are small by design: p odd and p^{6h} <= 531441 = 9^6, which
admits exactly (p, h) in {(3,1), (5,1), (7,1), (3,2)}.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .errors import CacheError, DomainError, FieldParameterError

DEFAULT_MAX_ORDER = 9**6

_CACHE_MAGIC = b"SFZT"
_CACHE_VERSION = 1
_CACHE_ENV = "RANKTWO_CACHE"


# ---------------------------------------------------------------- small number theory

def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------- polynomial helpers
# Polynomials over F_p as tuples of ints, constant term first, no trailing zeros.

def _ptrim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            a[i] = 0
            for j in range(df):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _ptrim(a)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    r = (1,)
    while e:
        if e & 1:
            r = _pmulmod(r, a, f, p)
        a = _pmulmod(a, a, f, p)
        e >>= 1
    return r


def _pgcd(a, b, p):
    while b:
        # a mod b with b made monic
        lead = b[-1]
        inv = pow(lead, p - 2, p)
        bm = tuple((c * inv) % p for c in b)
        a, b = b, _pmod(a, bm, p)
    return a


def _is_irreducible(f, p):
    """Rabin test for a monic f of degree n (n = 6 or 12 here)."""
    n = len(f) - 1
    x = (0, 1)
    # chain y_k = x^(p^k) mod f
    y = x
    chain = {}
    for k in range(1, n + 1):
        y = _ppowmod(y, p, f, p)
        chain[k] = y
    if _ptrim(tuple((a - b) % p for a, b in _zipw(chain[n], x, p))) != ():
        return False
    for ell in _prime_factors(n):
        d = tuple((a - b) % p for a, b in _zipw(chain[n // ell], x, p))
        g = _pgcd(f, _ptrim(d), p)
        if len(g) - 1 != 0:
            return False
    return True


def _zipw(a, b, p):
    m = max(len(a), len(b))
    a = tuple(a) + (0,) * (m - len(a))
    b = tuple(b) + (0,) * (m - len(b))
    return zip(a, b)


def _find_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidate coefficient vectors (c_0, ..., c_{n-1}) are compared constant
    term first, so the search is a plain odometer with c_{n-1} spinning
    fastest.
    """
    lows = list(range(p))
    vec = [0] * n
    while True:
        # candidates with constant term 0 are divisible by x; skip whole block
        if vec[0] == 0:
            vec[0] = 1
        f = tuple(vec) + (1,)
        # cheap root screen before the Rabin test
        has_root = any(
            sum(c * pow(a, i, p) for i, c in enumerate(f)) % p == 0 for a in lows
        )
        if not has_root and _is_irreducible(f, p):
            return f
        # odometer increment, last coordinate fastest
        i = n - 1
        while i >= 0:
            vec[i] += 1
            if vec[i] < p:
                break
            vec[i] = 0
            i -= 1
        if i < 0:
            raise FieldParameterError("no-modulus", f"no irreducible of degree {n} over F_{p}")


def _find_generator(p: int, f: tuple[int, ...]) -> int:
    n = len(f) - 1
    order = p**n - 1
    facs = _prime_factors(order)
    code = 2
    while code < p**n:
        poly = _ptrim(_code_digits(code, p, n))
        ok = all(_ppowmod(poly, order // ell, f, p) != (1,) for ell in facs)
        if ok:
            return code
        code += 1
    raise FieldParameterError("no-generator", "multiplicative group has no generator?!")


def _code_digits(code: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(code % p)
        code //= p
    return tuple(out)


# ---------------------------------------------------------------- the tower


class FieldTower:
    """Immutable arithmetic context for F_{p^{6h}} and its subfield chain.

    Instances are built by :func:`build_tower` (or loaded from cache) and are
    safe to share across threads and to pickle into worker processes: every
    table is written once during construction and only read afterwards.
    """

    def __init__(self, p, h, modulus, generator, exp):
        self.p = int(p)
        self.h = int(h)
        self.q = self.p**self.h
        self.n = 6 * self.h
        self.order = self.p**self.n
        self.modulus = tuple(int(c) for c in modulus)
        self.generator = int(generator)

        N = self.order
        self.exp = exp  # int32, length N-1, exp[k] = code of g^k
        log = np.full(N, -1, dtype=np.int64)
        log[exp] = np.arange(N - 1, dtype=np.int64)
        self.log = log

        pvec = self.p ** np.arange(self.n, dtype=np.int64)
        self.pvec = pvec
        codes = np.arange(N, dtype=np.int64)
        self.digits = ((codes[:, None] // pvec[None, :]) % self.p).astype(np.int8)

        self.neg = ((self.p - self.digits) % self.p).astype(np.int64) @ pvec
        self.neg = self.neg.astype(np.int32)

        inv = np.zeros(N, dtype=np.int32)
        inv[exp] = exp[(-(np.arange(N - 1, dtype=np.int64))) % (N - 1)]
        self.inv_table = inv  # inv_table[0] = 0 sentinel, guarded in inv()

        # Zech logarithms: zech[k] = log(1 + g^k), -1 when 1 + g^k = 0
        one_plus = self._bulk_add_codes(np.ones(N - 1, dtype=np.int32), exp)
        self.zech = np.where(one_plus == 0, -1, log[one_plus]).astype(np.int64)

        # subfield masks and member lists
        self.masks = {}
        self.members_by_deg = {}
        for k in (1, 2, 3, 6):
            sub = self.q**k
            step = (N - 1) // (sub - 1)
            mask = np.zeros(N, dtype=bool)
            mask[0] = True
            mask[exp[np.arange(0, N - 1, step)]] = True
            members = np.sort(np.nonzero(mask)[0]).astype(np.int32)
            if members.size != sub:
                raise FieldParameterError("subfield-size", f"F_q^{k} mask has {members.size} members")
            self.masks[k] = mask
            self.members_by_deg[k] = members

        # rank of a code inside the sorted F_{q^3} member list, -1 elsewhere
        rank3 = np.full(N, -1, dtype=np.int32)
        rank3[self.members_by_deg[3]] = np.arange(self.q**3, dtype=np.int32)
        self.rank3 = rank3

        self._bulk = None
        self._coords3 = None
        self._nonsquare = None

    # -------------------------------------------------- scalar arithmetic

    def add(self, x: int, y: int) -> int:
        if x == 0:
            return int(y)
        if y == 0:
            return int(x)
        N1 = self.order - 1
        lx = int(self.log[x])
        d = (int(self.log[y]) - lx) % N1
        z = int(self.zech[d])
        if z < 0:
            return 0
        return int(self.exp[(lx + z) % N1])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, int(self.neg[y]))

    def negate(self, x: int) -> int:
        return int(self.neg[x])

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        N1 = self.order - 1
        return int(self.exp[(int(self.log[x]) + int(self.log[y])) % N1])

    def inv(self, x: int) -> int:
        if x == 0:
            raise DomainError("zero-division", "0 has no inverse")
        return int(self.inv_table[x])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow_int(self, x: int, e: int) -> int:
        if x == 0:
            if e > 0:
                return 0
            raise DomainError("zero-division", "0**e undefined for e <= 0")
        N1 = self.order - 1
        return int(self.exp[(int(self.log[x]) * e) % N1])

    def frobenius(self, x: int, k: int) -> int:
        """x^(q^k); k may be negative, reduced mod 6 in the ambient field."""
        return self.pow_int(x, self.q ** (k % 6)) if x else 0

    def frobenius_p(self, x: int, t: int) -> int:
        """x^(p^t), the absolute automorphism; t reduced mod 6h."""
        return self.pow_int(x, self.p ** (t % self.n)) if x else 0

    # -------------------------------------------------- subfields, norms, traces

    def in_subfield(self, x: int, k: int) -> bool:
        return bool(self.masks[k][x])

    def members(self, k: int) -> np.ndarray:
        return self.members_by_deg[k]

    def _require(self, x, k, what):
        if not (0 <= x < self.order) or not self.masks[k][x]:
            raise DomainError("not-in-subfield", f"{what}: {x} is not in F_q^{k}")

    def norm(self, x: int, from_deg: int = 3, to_deg: int = 1) -> int:
        """Relative norm F_{q^from} -> F_{q^to}; to_deg must divide from_deg."""
        if from_deg % to_deg:
            raise DomainError("bad-degrees", f"norm {from_deg}->{to_deg}")
        self._require(x, from_deg, "norm")
        if x == 0:
            return 0
        Q = self.q**to_deg
        d = from_deg // to_deg
        e = (Q**d - 1) // (Q - 1)
        return self.pow_int(x, e)

    def trace(self, x: int, from_deg: int = 3, to_deg: int = 1) -> int:
        if from_deg % to_deg:
            raise DomainError("bad-degrees", f"trace {from_deg}->{to_deg}")
        self._require(x, from_deg, "trace")
        acc = 0
        for i in range(from_deg // to_deg):
            acc = self.add(acc, self.pow_int(x, self.q ** (to_deg * i)) if x else 0)
        return acc

    def is_square_q(self, x: int) -> bool:
        """Square test in F_q^* (errors outside it)."""
        if x == 0 or not self.masks[1][x]:
            raise DomainError("not-in-subfield", f"square test needs x in F_q^*, got {x}")
        return self.pow_int(x, (self.q - 1) // 2) == 1

    def smallest_nonsquare(self) -> int:
        if self._nonsquare is None:
            for x in self.members_by_deg[1][1:]:
                if not self.is_square_q(int(x)):
                    self._nonsquare = int(x)
                    break
        return self._nonsquare

    # -------------------------------------------------- encodings and bases

    def encode(self, coeffs) -> int:
        if len(coeffs) != self.n or any(not (0 <= c < self.p) for c in coeffs):
            raise DomainError("bad-coeffs", "need 6h base-p digits")
        return int(sum(c * self.p**i for i, c in enumerate(coeffs)))

    def decode(self, x: int) -> tuple[int, ...]:
        if not (0 <= x < self.order):
            raise DomainError("bad-code", f"{x} outside [0, p^6h)")
        return tuple(int(d) for d in self.digits[x])

    def subfield_generator(self, k: int) -> int:
        """Smallest member of F_{q^k} outside the next subfield down."""
        inner = {2: 1, 3: 1, 6: 3}[k]
        for x in self.members_by_deg[k]:
            if not self.masks[inner][x]:
                return int(x)
        raise FieldParameterError("subfield-order", "no proper member found")

    def q3_basis(self) -> tuple[int, int, int]:
        """Deterministic F_q-basis (1, s, s^2) of F_{q^3}."""
        s = self.subfield_generator(3)
        return (1, s, self.mul(s, s))

    def coords3(self, x: int) -> tuple[int, int, int]:
        """F_q-coordinates of x in F_{q^3} with respect to q3_basis()."""
        if self._coords3 is None:
            self._build_coords3()
        self._require(x, 3, "coords3")
        packed = int(self._coords3[x])
        q = self.q
        fq = self.members_by_deg[1]
        return (int(fq[packed // (q * q)]), int(fq[(packed // q) % q]), int(fq[packed % q]))

    def _build_coords3(self):
        b = self.q3_basis()
        fq = self.members_by_deg[1]
        table = np.full(self.order, -1, dtype=np.int32)
        for i, ci in enumerate(fq):
            xi = self.mul(int(ci), b[0])
            for j, cj in enumerate(fq):
                xij = self.add(xi, self.mul(int(cj), b[1]))
                for k, ck in enumerate(fq):
                    code = self.add(xij, self.mul(int(ck), b[2]))
                    table[code] = (i * self.q + j) * self.q + k
        self._coords3 = table

    # -------------------------------------------------- bulk numpy arithmetic

    def _bulk_add_codes(self, a, b):
        d = (self.digits[a].astype(np.int16) + self.digits[b]) % self.p
        return (d.astype(np.int64) @ self.pvec).astype(np.int32)

    @property
    def bulk(self):
        if self._bulk is None:
            from .bulk import Bulk

            self._bulk = Bulk(self)
        return self._bulk

    def __repr__(self):
        return f"FieldTower(p={self.p}, h={self.h}, q={self.q}, modulus={self.modulus})"


# ---------------------------------------------------------------- construction


def build_tower(p: int, h: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldTower:
    """Construct the tower for q = p^h, tables and all.

    p must be an odd prime and p^{6h} may not exceed ``max_order`` (default
    9^6): beyond that the exhaustive scans this package runs stop being a
    desk-scale computation.
    """
    if h < 1:
        raise FieldParameterError("h-positive", f"h must be >= 1, got {h}")
    if p % 2 == 0:
        raise FieldParameterError("p-even", f"p must be odd, got {p} (even characteristic unsupported)")
    if not _is_prime(p):
        raise FieldParameterError("p-not-prime", f"p must be prime, got {p}")
    if p ** (6 * h) > max_order:
        raise FieldParameterError(
            "order-bound", f"p^(6h) = {p ** (6 * h)} exceeds the bound {max_order}"
        )

    n = 6 * h
    modulus = _find_modulus(p, n)
    generator = _find_generator(p, modulus)
    exp = _exp_table(p, n, modulus, generator)
    return FieldTower(p, h, modulus, generator, exp)


def _exp_table(p, n, modulus, generator):
    """exp[k] = canonical code of g^k, built by doubling blocks of columns."""
    N = p**n
    g_poly = _ptrim(_code_digits(generator, p, n))
    # multiplication-by-g matrix in the polynomial basis
    M = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        col = _pmod(_pmul(g_poly, (0,) * j + (1,), p), modulus, p)
        for i, c in enumerate(col):
            M[i, j] = c
    cols = np.zeros((n, 1), dtype=np.int64)
    cols[0, 0] = 1  # g^0
    G = M
    while cols.shape[1] < N - 1:
        take = min(cols.shape[1], N - 1 - cols.shape[1])
        new = (G @ cols[:, :take]) % p
        cols = np.concatenate([cols, new], axis=1)
        if cols.shape[1] >= N - 1:
            break
        G = (G @ G) % p
    cols = cols[:, : N - 1]
    pvec = p ** np.arange(n, dtype=np.int64)
    exp = (pvec @ cols).astype(np.int32)
    if np.unique(exp).size != N - 1:
        raise FieldParameterError("bad-generator", "exp table is not a bijection")
    return exp


# ---------------------------------------------------------------- cache files


def default_cache_dir() -> str:
    env = os.environ.get(_CACHE_ENV)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "ranktwo")


def tower_cache_path(p: int, h: int, cache_dir: str | None = None) -> str:
    d = cache_dir or default_cache_dir()
    return os.path.join(d, f"tower_p{p}_h{h}.sfzt")


def save_tower(tower: FieldTower, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    header = struct.pack(
        "<4sIIII",
        _CACHE_MAGIC,
        _CACHE_VERSION,
        tower.p,
        tower.h,
        len(tower.modulus),
    )
    body = struct.pack(f"<{len(tower.modulus)}I", *tower.modulus)
    body += struct.pack("<I", tower.generator)
    exp_bytes = tower.exp.astype("<i4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body)
        fh.write(struct.pack("<Q", len(exp_bytes)))
        fh.write(exp_bytes)


def load_tower(path: str, p: int, h: int) -> FieldTower:
    """Load a cached tower, validating that it matches the requested (p, h)."""
    with open(path, "rb") as fh:
        head = fh.read(20)
        if len(head) != 20:
            raise CacheError("cache-truncated", f"{path}: short header")
        magic, version, fp, fh_, mlen = struct.unpack("<4sIIII", head)
        if magic != _CACHE_MAGIC:
            raise CacheError("cache-magic", f"{path}: bad magic {magic!r}")
        if version != _CACHE_VERSION:
            raise CacheError("cache-version", f"{path}: version {version}")
        if (fp, fh_) != (p, h):
            raise CacheError("cache-mismatch", f"{path}: holds (p={fp}, h={fh_}), wanted (p={p}, h={h})")
        modulus = struct.unpack(f"<{mlen}I", fh.read(4 * mlen))
        expected = _find_modulus(p, 6 * h)
        if tuple(modulus) != expected:
            raise CacheError("cache-modulus", f"{path}: modulus differs from the canonical one")
        (generator,) = struct.unpack("<I", fh.read(4))
        (nbytes,) = struct.unpack("<Q", fh.read(8))
        exp = np.frombuffer(fh.read(nbytes), dtype="<i4").astype(np.int32)
    N = p ** (6 * h)
    if exp.size != N - 1:
        raise CacheError("cache-truncated", f"{path}: exp table has {exp.size} entries")
    return FieldTower(p, h, modulus, generator, exp)


def cached_tower(p: int, h: int, cache_dir: str | None = None, max_order: int = DEFAULT_MAX_ORDER) -> FieldTower:
    """Load from the cache directory if possible, else build and store."""
    path = tower_cache_path(p, h, cache_dir)
    if os.path.exists(path):
        return load_tower(path, p, h)
    tower = build_tower(p, h, max_order=max_order)
    save_tower(tower, path)
    return tower


_memo: dict[tuple[int, int], FieldTower] = {}


def get_tower(p: int, h: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldTower:
    """In-process memoized build; the workhorse entry point for library code."""
    key = (p, h)
    if key not in _memo:
        _memo[key] = build_tower(p, h, max_order=max_order)
    return _memo[key]

"""Finite field towers with polynomial-basis representation.

A tower is built by repeated extension: F_p, then F_q = F_p[x]/(f), then
F_Q = F_q[y]/(g), each modulus being the lexicographically smallest monic
irreducible of the requested degree (coefficients low-to-high, compared
high-to-low, each coefficient by its integer encoding), so two independent
builds of the same (p, degrees) tower agree exactly.

Internally every element is a flat int64 coefficient vector over F_p in the
nested basis {b_s * beta^t} (index t*deg(base)+s).  Embedding a subfield
element is then just zero-padding, and the fold/unfold bijections in the fold
module are pure reshapes.  Multiplication is driven by a per-field structure
tensor S with e_i*e_j = sum_k S[i,j,k] e_k, shared with the matrix kernels.

Integer encoding: int(e) = sum_i vec[i] * p**i, i.e. the base-p positional
value of the flat coefficient vector (so in F_4, 2 ≡ x and 3 ≡ x+1).

Desk-scale guards: p < 2**21 keeps all kernel intermediates inside int64;
total extension degrees beyond ~64 are untested territory.
"""

from __future__ import annotations

import functools

import numpy as np

from . import backend
from .errors import DivideByZero, IncompatibleFields, NotInSubfield, NotPrime

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class Field:
    """Shared behavior of prime and extension fields.

    Attributes: p (characteristic), base (None for the prime field), degree
    (over the immediate base), total_degree D (over F_p), order (Python int),
    S (D,D,D structure tensor).
    """

    p: int
    base: Field | None
    degree: int
    total_degree: int
    order: int
    S: np.ndarray

    # -- scalar helpers on flat coefficient vectors ----------------------

    def vec_mul(self, u, v):
        return backend.K.elem_mul(u, v, self.S, self.p)

    def vec_inv(self, u):
        if not u.any():
            raise DivideByZero(f"inverse of zero in {self}")
        return backend.K.inv_elem(u, self.S, self.p)

    def vec_pow(self, u, e: int):
        if e < 0:
            u = self.vec_inv(u)
            e = -e
        r = self.one().vec.copy()
        b = u % self.p
        while e:
            if e & 1:
                r = self.vec_mul(r, b)
            b = self.vec_mul(b, b)
            e >>= 1
        return r

    # -- element constructors --------------------------------------------

    def elem(self, value) -> Elem:
        """Build an element from an integer encoding, a coefficient list over
        the immediate base (integer-encoded, low-to-high), or another Elem."""
        d = self.total_degree
        if isinstance(value, Elem):
            return self._coerce(value)
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.order:
                raise ValueError(f"{value} outside [0, {self.order})")
            vec = np.zeros(d, dtype=np.int64)
            for i in range(d):
                value, vec[i] = divmod(value, self.p)
            return Elem(self, vec)
        if isinstance(value, (list, tuple)):
            if self.base is None:
                raise ValueError("coefficient lists need an extension field")
            if len(value) > self.degree:
                raise ValueError("too many coefficients")
            db = self.base.total_degree
            vec = np.zeros(d, dtype=np.int64)
            for t, c in enumerate(value):
                vec[t * db:(t + 1) * db] = self.base.elem(c).vec
            return Elem(self, vec)
        raise TypeError(f"cannot build element from {type(value).__name__}")

    def _coerce(self, e: Elem) -> Elem:
        if e.field == self:
            return Elem(self, e.vec)
        if self.is_extension_of(e.field):
            vec = np.zeros(self.total_degree, dtype=np.int64)
            vec[:e.field.total_degree] = e.vec
            return Elem(self, vec)
        raise IncompatibleFields(f"{e.field} does not embed in {self}")

    def zero(self) -> Elem:
        return Elem(self, np.zeros(self.total_degree, dtype=np.int64))

    def one(self) -> Elem:
        v = np.zeros(self.total_degree, dtype=np.int64)
        v[0] = 1
        return Elem(self, v)

    def basis_elem(self, i: int) -> Elem:
        """i-th element of the polynomial basis over the immediate base."""
        if not 0 <= i < self.degree:
            raise ValueError(f"basis index {i} outside [0, {self.degree})")
        db = 1 if self.base is None else self.base.total_degree
        v = np.zeros(self.total_degree, dtype=np.int64)
        v[i * db] = 1
        return Elem(self, v)

    def random_elem(self, rng) -> Elem:
        return Elem(self, rng.integers(0, self.p, self.total_degree, dtype=np.int64))

    # -- tower relations ---------------------------------------------------

    def ancestry(self) -> list[Field]:
        chain = [self]
        while chain[-1].base is not None:
            chain.append(chain[-1].base)
        return chain

    def is_extension_of(self, other: Field) -> bool:
        return any(f == other for f in self.ancestry())

    def descriptor(self) -> dict:
        """JSON-ready construction record: characteristic plus modulus chain."""
        moduli = []
        f = self
        while f.base is not None:
            moduli.append([int(c) for c in f.modulus])
            f = f.base
        return {"p": self.p, "moduli": moduli[::-1]}

    def __eq__(self, other):
        return isinstance(other, Field) and self._key == other._key

    def __hash__(self):
        return hash(self._key)


class PrimeField(Field):
    def __init__(self, p: int):
        if p >= 1 << 21:
            raise ValueError(f"p={p} exceeds the 2**21 kernel guard")
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        self.base = None
        self.degree = 1
        self.total_degree = 1
        self.order = p
        self.S = np.ones((1, 1, 1), dtype=np.int64)
        self._key = (p, ())

    def frob_vec(self, u, j: int):
        return u.copy()

    def __repr__(self):
        return f"GF({self.p})"


class ExtField(Field):
    """Extension of `base` by a monic irreducible modulus (low-to-high Elems)."""

    def __init__(self, base: Field, modulus):
        modulus = tuple(base.elem(c) for c in modulus)
        degree = len(modulus) - 1
        if degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if modulus[-1] != base.one():
            raise ValueError("modulus must be monic")
        if degree > 1 and not _is_irreducible([c.vec for c in modulus], base):
            raise ValueError("modulus is reducible")
        self.p = base.p
        self.base = base
        self.degree = degree
        self.modulus = modulus
        self.total_degree = degree * base.total_degree
        self.order = base.order ** degree
        self._key = (self.p, tuple(
            tuple(int(c) for c in f.modulus) for f in self.ancestry()[-2::-1]
        ))
        self.S = self._build_structure()
        self._frob_mats = {0: np.eye(self.total_degree, dtype=np.int64),
                           1: self._build_frobenius()}

    def _build_structure(self):
        base, p = self.base, self.p
        e, db = self.degree, base.total_degree
        d = self.total_degree
        sb = base.S
        fvecs = np.stack([c.vec for c in self.modulus])
        # rep[j] = coordinates of beta^j over the base, j < 2e-1
        rep = np.zeros((2 * e - 1, e, db), dtype=np.int64)
        for j in range(e):
            rep[j, j, 0] = 1
        for j in range(e, 2 * e - 1):
            cur = np.zeros((e, db), dtype=np.int64)
            cur[1:] = rep[j - 1, :-1]
            carry = rep[j - 1, e - 1]
            if carry.any():
                # the beta^e coefficient folds back through the monic modulus
                for t in range(e):
                    cur[t] = (cur[t] - backend.K.elem_mul(carry, fvecs[t], sb, p)) % p
            rep[j] = cur
        S = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            t, s = divmod(i, db)
            for j in range(i + 1):
                t2, s2 = divmod(j, db)
                w = sb[s, s2]
                rr = rep[t + t2]
                row = np.zeros(d, dtype=np.int64)
                for big in range(e):
                    if rr[big].any():
                        row[big * db:(big + 1) * db] = backend.K.elem_mul(w, rr[big], sb, p)
                S[i, j] = row
                S[j, i] = row
        return np.ascontiguousarray(S)

    def _build_frobenius(self):
        d = self.total_degree
        fm = np.zeros((d, d), dtype=np.int64)
        bo = self.base.order
        for i in range(d):
            v = np.zeros(d, dtype=np.int64)
            v[i] = 1
            fm[i] = self.vec_pow(v, bo)
        return fm

    def frob_mat(self, j: int):
        """Row-action matrix of x -> x**(|base|**j); apply as vec @ M."""
        j %= self.degree
        m = max(k for k in self._frob_mats if k <= j)
        while m < j:
            self._frob_mats[m + 1] = self._frob_mats[m] @ self._frob_mats[1] % self.p
            m += 1
        return self._frob_mats[j]

    def frob_vec(self, u, j: int):
        return u @ self.frob_mat(j) % self.p

    def embed(self, a: Elem) -> Elem:
        if not self.is_extension_of(a.field):
            raise IncompatibleFields(f"{a.field} is not below {self}")
        return self._coerce(a)

    def project(self, a: Elem) -> Elem:
        """Inverse of embed onto the immediate base field."""
        a = self._coerce(a)
        db = self.base.total_degree
        if a.vec[db:].any():
            raise NotInSubfield(f"{int(a)} has no preimage in {self.base}")
        return Elem(self.base, a.vec[:db].copy())

    def __repr__(self):
        return f"GF({self.p}^{self.total_degree})"


class Elem:
    """Immutable field element: a flat coefficient vector plus its field."""

    __slots__ = ("field", "vec")

    def __init__(self, field: Field, vec: np.ndarray):
        self.field = field
        self.vec = vec % field.p

    def _pair(self, other):
        if not isinstance(other, Elem):
            raise TypeError(f"expected Elem, got {type(other).__name__}")
        f = common_field(self.field, other.field)
        return f, f._coerce(self).vec, f._coerce(other).vec

    def __add__(self, other):
        f, u, v = self._pair(other)
        return Elem(f, (u + v) % f.p)

    def __sub__(self, other):
        f, u, v = self._pair(other)
        return Elem(f, (u - v) % f.p)

    def __neg__(self):
        return Elem(self.field, -self.vec % self.field.p)

    def __mul__(self, other):
        f, u, v = self._pair(other)
        return Elem(f, f.vec_mul(u, v))

    def __truediv__(self, other):
        f, u, v = self._pair(other)
        return Elem(f, f.vec_mul(u, f.vec_inv(v)))

    def inverse(self):
        return Elem(self.field, self.field.vec_inv(self.vec))

    def __pow__(self, e: int):
        return Elem(self.field, self.field.vec_pow(self.vec, e))

    def frobenius(self, i: int = 1):
        """a**(|base|**i), the i-th Frobenius power over the immediate base."""
        return Elem(self.field, self.field.frob_vec(self.vec, i))

    @property
    def coeffs(self):
        """Coefficients over the immediate base field, low-to-high."""
        f = self.field
        if f.base is None:
            return [self]
        db = f.base.total_degree
        return [Elem(f.base, self.vec[t * db:(t + 1) * db].copy())
                for t in range(f.degree)]

    def __int__(self):
        v = 0
        for c in self.vec[::-1]:
            v = v * self.field.p + int(c)
        return v

    def __eq__(self, other):
        if not isinstance(other, Elem):
            return NotImplemented
        try:
            f, u, v = self._pair(other)
        except IncompatibleFields:
            return False
        return bool((u == v).all())

    def __hash__(self):
        return hash((self.field, int(self)))

    def __bool__(self):
        return bool(self.vec.any())

    def __repr__(self):
        return f"{int(self)}:{self.field!r}"


def common_field(f1: Field, f2: Field) -> Field:
    if f1 == f2:
        return f1
    if f1.is_extension_of(f2):
        return f1
    if f2.is_extension_of(f1):
        return f2
    raise IncompatibleFields(f"{f1} and {f2} are not on one tower branch")


# ---------------------------------------------------------------------------
# polynomial arithmetic over a field, used only to find/verify moduli

def _pdeg(a):
    for i in range(len(a) - 1, -1, -1):
        if a[i].any():
            return i
    return -1


def _prem(a, f, field):
    """Remainder of a modulo monic f (lists of flat vecs, low-to-high)."""
    a = [v.copy() for v in a]
    e = len(f) - 1
    for j in range(len(a) - 1, e - 1, -1):
        c = a[j]
        if not c.any():
            continue
        for t in range(e):
            a[j - e + t] = (a[j - e + t] - field.vec_mul(c, f[t])) % field.p
        a[j][:] = 0
    return a[:e]


def _pmulmod(a, b, f, field):
    n = len(a) + len(b) - 1
    out = [np.zeros(field.total_degree, dtype=np.int64) for _ in range(n)]
    for i, ai in enumerate(a):
        if not ai.any():
            continue
        for j, bj in enumerate(b):
            if bj.any():
                out[i + j] = (out[i + j] + field.vec_mul(ai, bj)) % field.p
    return _prem(out, f, field)


def _ppow_x(exp: int, f, field):
    """x**exp modulo monic f."""
    e = len(f) - 1
    one = field.one().vec
    r = [one.copy()] + [np.zeros_like(one) for _ in range(e - 1)]
    x = [np.zeros_like(one) for _ in range(max(e, 2))]
    x[1] = one.copy()
    b = _prem(x, f, field)
    while exp:
        if exp & 1:
            r = _pmulmod(r, b, f, field)
        exp >>= 1
        if exp:
            b = _pmulmod(b, b, f, field)
    return r


def _pgcd(a, b, field):
    a, b = [v.copy() for v in a], [v.copy() for v in b]
    while _pdeg(b) >= 0:
        db = _pdeg(b)
        inv = field.vec_inv(b[db])
        bm = [field.vec_mul(v, inv) for v in b[:db + 1]]
        da = _pdeg(a)
        while da >= db:
            c = a[da]
            if c.any():
                for t in range(db + 1):
                    a[da - db + t] = (a[da - db + t] - field.vec_mul(c, bm[t])) % field.p
            da -= 1
        a, b = bm, a
    return a[:_pdeg(a) + 1]


def _is_irreducible(fvecs, field) -> bool:
    """Rabin test for a monic polynomial over `field` (flat-vec coeff list)."""
    e = len(fvecs) - 1
    if e == 1:
        return True
    q0 = field.order
    one = field.one().vec
    for r in sorted(set(_prime_factors(e)), reverse=True):
        h = _ppow_x(q0 ** (e // r), fvecs, field)
        h[1] = (h[1] - one) % field.p
        if _pdeg(_pgcd(fvecs, h, field)) != 0:
            return False
    h = _ppow_x(q0 ** e, fvecs, field)
    h[1] = (h[1] - one) % field.p
    return _pdeg(h) == -1


def _no_irreducible_binomials(field: Field, degree: int) -> bool:
    """True when no x**degree + c over `field` can be irreducible.

    If some prime r divides `degree` but not `order - 1`, the r-th power map
    is a bijection, so every candidate constant is an r-th power b**r and
    x**degree - b**r keeps the factor x**(degree/r) - b.  If 4 divides
    `degree` and order = 3 mod 4, a binomial splits either as a difference
    of squares or by the identity
    x**4 + 4b**4 = (x**2 + 2bx + 2b**2)(x**2 - 2bx + 2b**2).
    Skipping these candidates never changes the polynomial found, it only
    avoids an order-of-the-field scan of guaranteed rejections.
    """
    q = field.order
    if any((q - 1) % r for r in set(_prime_factors(degree))):
        return True
    return degree % 4 == 0 and q % 4 == 3


def find_irreducible(field: Field, degree: int) -> list[Elem]:
    """Lexicographically smallest monic irreducible of `degree` over `field`.

    Returns the coefficient list low-to-high (length degree+1, leading one).
    Candidates are scanned in ascending integer encoding of the non-leading
    coefficient vector, which orders them high-coefficient-first.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    one = field.one()
    bound = field.order ** degree
    v = 0
    if degree >= 2 and _no_irreducible_binomials(field, degree):
        v = field.order
    while v < bound:
        digits = []
        rest = v
        for _ in range(degree):
            rest, d = divmod(rest, field.order)
            digits.append(field.elem(d))
        cand = digits + [one]
        if degree == 1 or _is_irreducible([c.vec for c in cand], field):
            return cand
        v += 1
    raise RuntimeError("no irreducible polynomial found")  # unreachable


@functools.lru_cache(maxsize=None)
def extend(base: Field, degree: int) -> ExtField:
    """Degree-`degree` extension of `base` by the smallest monic irreducible."""
    return ExtField(base, find_irreducible(base, degree))


@functools.lru_cache(maxsize=None)
def make_prime_field(p: int) -> PrimeField:
    return PrimeField(p)


class FieldTower:
    """The three-level tower F_p < F_q = F_p^n < F_Q = F_q^N."""

    def __init__(self, p: int, n: int, N: int):
        self.p, self.n, self.N = p, n, N
        self.fp = make_prime_field(p)
        self.fq = extend(self.fp, n)
        self.fQ = extend(self.fq, N)

    def __repr__(self):
        return f"FieldTower(p={self.p}, n={self.n}, N={self.N})"


def field_from_descriptor(desc: dict) -> Field:
    f: Field = make_prime_field(desc["p"])
    for coeffs in desc.get("moduli", []):
        f = ExtField(f, [f.elem(c) for c in coeffs])
    return f

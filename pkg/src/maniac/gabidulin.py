"""Gabidulin rank-metric codes over a field extension.

A codeword column is the evaluation of a linearized message polynomial
f(y) = sum_a X[a] y^(q0^a) at m generator points that are linearly
independent over the base field (q0 = base order).  Transmitted matrices are
the unfolded base-field form, so the rank of an additive error matrix over
the base field is the distance that matters.

The decoder accepts side information: known error locations (columns L) and
known error value rows (V).  It projects the received word against the known
locations, annihilates the known values with a subspace polynomial, solves a
small homogeneous interpolation system per codeword column, and divides out
the error locator.  A final verification step re-encodes the candidate and
checks that the residual admits an error decomposition within the budget
2*tau - mu - delta <= d - 1, so a returned message is never silently wrong:
two candidates passing the check would contradict the minimum distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadDimensions,
    DecodeFailure,
    DimensionMismatch,
    IncompatibleFields,
    SearchSpaceTooLarge,
)
from .fields import Elem, ExtField
from .fold import FoldSpec, fold, unfold
from .matrix import Mat, hstack, left_nullspace, rank, rre


class GabidulinCode:
    """Length-m, dimension-R rank-metric code with minimum distance m - R + 1.

    Generators are the first m polynomial-basis elements of `ext`, so the
    generator matrix is the Moore matrix G[i][j] = g_i^(q0^j).
    """

    def __init__(self, ext: ExtField, m: int, R: int):
        if not 1 <= R <= m <= ext.degree:
            raise BadDimensions(
                f"need 1 <= R <= m <= {ext.degree}, got m={m}, R={R}")
        self.ext = ext
        self.base = ext.base
        self.m = m
        self.R = R
        self.d = m - R + 1
        self.gens = [ext.basis_elem(i) for i in range(m)]
        self.gmat = Mat.from_rows(ext, [[g] for g in self.gens])
        self.G = hstack(*[self.gmat.frobenius(j) for j in range(R)])
        self._spec = FoldSpec.into(ext)
        if rank(unfold(self.gmat, self._spec)) != m:
            raise BadDimensions("generators not independent over the base")

    def __repr__(self):
        return f"GabidulinCode(m={self.m}, R={self.R}, d={self.d} over {self.ext!r})"


def make_code(ext: ExtField, m: int, R: int) -> GabidulinCode:
    return GabidulinCode(ext, m, R)


@dataclass(frozen=True)
class SideInfo:
    """Known error structure: location columns L (m x mu over the base) and
    value rows V (delta x w over the base, rows independent)."""

    L: Mat
    V: Mat

    def __post_init__(self):
        if self.V.nrows and rank(self.V) != self.V.nrows:
            raise BadDimensions("side info value rows must be independent")

    @property
    def mu(self) -> int:
        return self.L.ncols

    @property
    def delta(self) -> int:
        return self.V.nrows

    @classmethod
    def empty(cls, code: GabidulinCode, width: int) -> SideInfo:
        return cls(Mat.zeros(code.base, code.m, 0),
                   Mat.zeros(code.base, 0, width))


@dataclass(frozen=True)
class DecodeDiagnostics:
    tau: int
    mu: int
    delta: int
    success: bool


@dataclass(frozen=True)
class BruteForceResult:
    X: Mat
    distance: int
    ambiguous: bool


def encode(code: GabidulinCode, X: Mat) -> Mat:
    """R x c message columns -> unfolded m x (c*ext.degree) base-field block."""
    if X.field != code.ext:
        raise IncompatibleFields(f"message must live in {code.ext!r}")
    if X.nrows != code.R:
        raise DimensionMismatch(f"message needs {code.R} rows, got {X.nrows}")
    return unfold(code.G @ X, code._spec)


# --- skew (linearized) polynomial helpers ------------------------------------
# A skew polynomial is a list of Elems: coeffs[a] multiplies the a-th
# Frobenius power, f(y) = sum_a coeffs[a] * y^(q0^a).

def _sdeg(coeffs) -> int:
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i]:
            return i
    return -1


def _skew_mul(f, g, ext: ExtField):
    """Composition (f o g) as skew polynomials."""
    out = [ext.zero() for _ in range(len(f) + len(g) - 1)]
    for a, fa in enumerate(f):
        if not fa:
            continue
        for b, gb in enumerate(g):
            if gb:
                out[a + b] = out[a + b] + fa * gb.frobenius(a)
    return out


def _skew_leftdiv(den, num, ext: ExtField):
    """Quotient and remainder with num = den o q + r, deg r < deg den."""
    a0 = _sdeg(den)
    if a0 < 0:
        raise ZeroDivisionError("skew division by zero")
    den = den[:a0 + 1]
    lead_inv = den[a0].inverse()
    num = list(num)
    q = [ext.zero() for _ in range(max(len(num) - a0, 1))]
    dn = _sdeg(num)
    while dn >= a0:
        b = dn - a0
        qb = (lead_inv * num[dn]).frobenius(-a0)
        q[b] = qb
        mono = [ext.zero()] * b + [qb]
        sub = _skew_mul(den, mono, ext)
        for i, s in enumerate(sub):
            num[i] = num[i] - s
        dn = _sdeg(num)
    return q, num


def _lin_eval_elem(coeffs, x: Elem) -> Elem:
    acc = x.field.zero()
    for a, ca in enumerate(coeffs):
        if ca:
            acc = acc + ca * x.frobenius(a)
    return acc


def _lin_eval_mat(coeffs, m: Mat) -> Mat:
    acc = Mat.zeros(m.field, m.nrows, m.ncols)
    for a, ca in enumerate(coeffs):
        if ca:
            acc = acc + m.frobenius(a).scale(ca)
    return acc


def _min_subspace_poly(values, ext: ExtField):
    """Smallest monic skew polynomial vanishing on the span of `values`."""
    q0 = ext.base.order
    pi = [ext.one()]
    for v in values:
        w = _lin_eval_elem(pi, v)
        if w:
            step = [-(w ** (q0 - 1)), ext.one()]
            pi = _skew_mul(step, pi, ext)
    return pi


def _right_nullspace(a: Mat) -> Mat:
    return left_nullspace(a.transpose()).transpose()


# --- decoding -----------------------------------------------------------------

def decode(code: GabidulinCode, received: Mat, side: SideInfo | None = None):
    """Recover the message from an unfolded received block plus side info.

    Returns (X, DecodeDiagnostics); raises DecodeFailure when no message
    fits the error budget 2*tau - mu - delta <= d - 1.
    """
    ext, base, m, R = code.ext, code.base, code.m, code.R
    if received.field != base:
        raise IncompatibleFields(f"received block must live in {base!r}")
    if received.nrows != m:
        raise DimensionMismatch(f"received needs {m} rows, got {received.nrows}")
    if side is None:
        side = SideInfo.empty(code, received.ncols)
    if side.L.field != base or side.V.field != base:
        raise IncompatibleFields("side info must live in the base field")
    if side.L.nrows != m or side.V.ncols != received.ncols:
        raise DimensionMismatch("side info shapes do not match the received block")
    mu, delta = side.mu, side.delta

    yf = fold(received, code._spec)
    c = yf.ncols
    if mu:
        proj = left_nullspace(side.L)
    else:
        proj = Mat.identity(base, m)
    mp = proj.nrows
    yp = proj @ yf
    gp = proj @ code.gmat
    vf = fold(side.V, code._spec) if delta else None

    def fail(reason, tau=-1):
        raise DecodeFailure(reason, DecodeDiagnostics(tau, mu, delta, False))

    if mp < 1 <= R:
        fail("all rows erased")

    cols = []
    for j in range(c):
        if delta:
            lam_d = _min_subspace_poly([vf[i, j] for i in range(delta)], ext)
        else:
            lam_d = [ext.one()]
        dj = _sdeg(lam_d)
        t = max(0, (mp - dj - R) // 2)
        w_col = _lin_eval_mat(lam_d, yp[:, j:j + 1])
        sys_cols = [w_col.frobenius(a) for a in range(t + 1)]
        sys_cols += [-(gp.frobenius(b)) for b in range(t + dj + R)]
        system = hstack(*sys_cols)
        kernel = left_nullspace(system.transpose())
        fj = None
        for krow in range(kernel.nrows):
            lam_u = [kernel[krow, a] for a in range(t + 1)]
            psi = [kernel[krow, t + 1 + b] for b in range(t + dj + R)]
            if _sdeg(lam_u) < 0:
                continue
            den = _skew_mul(lam_u, lam_d, ext)
            quot, rem = _skew_leftdiv(den, psi, ext)
            if _sdeg(rem) >= 0 or _sdeg(quot) >= R:
                continue
            fj = quot[:R] + [ext.zero()] * (R - len(quot[:R]))
            break
        if fj is None:
            fail(f"interpolation failed on column {j}")
        cols.append(fj)

    X = Mat.from_rows(ext, [[cols[j][a] for j in range(c)] for a in range(R)])

    # verification: the residual must fit the budget relative to the side info
    residual = received - encode(code, X)
    if delta:
        qv = _right_nullspace(side.V)
        core = proj @ residual @ qv
    else:
        core = proj @ residual
    tau_hat = mu + delta + rank(core)
    if 2 * tau_hat - mu - delta > code.d - 1:
        fail("residual outside the decoding budget", tau_hat)
    return X, DecodeDiagnostics(tau_hat, mu, delta, True)


_BRUTE_FORCE_LIMIT = 1 << 16


def brute_force_decode(code: GabidulinCode, received: Mat) -> BruteForceResult:
    """Exhaustive nearest-codeword search in rank distance (test oracle)."""
    ext, m = code.ext, code.m
    if received.field != code.base:
        raise IncompatibleFields(f"received block must live in {code.base!r}")
    c = received.ncols // ext.degree
    total = ext.order ** (code.R * c)
    if total > _BRUTE_FORCE_LIMIT:
        raise SearchSpaceTooLarge(f"{total} candidate messages")
    best, best_rank, ties = None, m + 1, 0
    for v in range(total):
        digits = []
        rest = v
        for _ in range(code.R * c):
            rest, d = divmod(rest, ext.order)
            digits.append(d)
        X = Mat.from_rows(ext, [digits[i * c:(i + 1) * c] for i in range(code.R)])
        dist = rank(received - encode(code, X))
        if dist < best_rank:
            best, best_rank, ties = X, dist, 1
        elif dist == best_rank:
            ties += 1
    return BruteForceResult(best, best_rank, ties > 1)

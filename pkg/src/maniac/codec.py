"""Two-source rank-metric codec over a random-linear-coded network.

Two senders encode independent payloads with Gabidulin codes that live on
different floors of one field tower: source 1 over the intermediate field,
source 2 over the top field.  The tower layout makes source 2's codeword
survive mixing by intermediate-field matrices, so a receiver that sees only
a random joint mixture (plus up to z injected packets) can peel X2 first and
X1 second.

Both decoders follow that order.  The coherent decoder knows the transfer
matrices T1, T2 and inverts the combined map directly.  The non-coherent
decoder sees only lifted headers; it reduces the received block to row
echelon form, reads off error locations and known error values from the
pivot structure (`rre_extract`), and hands both to the generalized Gabidulin
decoder as side information.  Stage 2 subtracts the re-encoded X2
contribution and runs the standard single-source lifted reduction over the
prime field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DecodeFailure,
    MalformedRre,
    RateRegionViolation,
    ShapeMismatch,
    SingularD,
    Stage1Failure,
    Stage2Failure,
)
from .fields import FieldTower
from .gabidulin import GabidulinCode, SideInfo, decode, encode
from .fold import fold_to, unfold_to
from .matrix import Mat, hstack, left_inverse, rank, rre
from .netsim import CutProfile


@dataclass(frozen=True)
class ManiacParams:
    """Derived code geometry for one (p, z, R1, R2, k) design point.

    n and N are the two codeword lengths (each rate plus 2z redundancy),
    ell = k*n*N is the payload width in prime-field symbols, and C is the
    number of packets the receiver collects.  code1 sends R1 rows over the
    intermediate field, code2 sends R2 rows over the top field; both have
    minimum rank distance 2z + 1.
    """

    p: int
    z: int
    R1: int
    R2: int
    k: int
    n: int
    N: int
    ell: int
    C: int
    tower: FieldTower
    code1: GabidulinCode
    code2: GabidulinCode


def derive_params(p: int, z: int, R1: int, R2: int, k: int,
                  cuts: CutProfile) -> ManiacParams:
    """Validate a rate point against the network cuts and build the codes."""
    if R1 < 1 or R2 < 1:
        raise ValueError(f"rates must be positive, got R1={R1}, R2={R2}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if z < 0:
        raise ValueError(f"z must be nonnegative, got {z}")
    if R1 > cuts.C1 - 2 * z:
        raise RateRegionViolation(
            f"R1 <= C1 - 2z violated: {R1} > {cuts.C1 - 2 * z}")
    if R2 > cuts.C2 - 2 * z:
        raise RateRegionViolation(
            f"R2 <= C2 - 2z violated: {R2} > {cuts.C2 - 2 * z}")
    if R1 + R2 + 2 * z != cuts.C:
        raise RateRegionViolation(
            f"R1 + R2 + 2z = C violated: {R1 + R2 + 2 * z} != {cuts.C}")
    n = R1 + 2 * z
    N = R2 + 2 * z
    tower = FieldTower(p, n, N)
    code1 = GabidulinCode(tower.fq, n, R1)
    code2 = GabidulinCode(tower.fQ, N, R2)
    return ManiacParams(p=p, z=z, R1=R1, R2=R2, k=k, n=n, N=N,
                        ell=k * n * N, C=R1 + R2 + 2 * z,
                        tower=tower, code1=code1, code2=code2)


def _check_shape(name: str, m: Mat, field, rows: int, cols: int):
    if m.field != field:
        raise ShapeMismatch(f"{name} must live in {field!r}, got {m.field!r}")
    if m.nrows != rows or m.ncols != cols:
        raise ShapeMismatch(
            f"{name} must be {rows}x{cols}, got {m.nrows}x{m.ncols}")


def s1_encode(params: ManiacParams, X1: Mat) -> Mat:
    """Source 1 payload X1 (R1 x kN over F_q) -> M1 (n x ell over F_p)."""
    _check_shape("X1", X1, params.tower.fq, params.R1, params.k * params.N)
    return encode(params.code1, X1)


def s2_encode(params: ManiacParams, X2: Mat) -> Mat:
    """Source 2 payload X2 (R2 x k over F_Q) -> M2 (N x ell over F_p).

    Encoding leaves the codeword one tower level down (over F_q); a second
    unfold takes it the rest of the way to prime-field packets.
    """
    _check_shape("X2", X2, params.tower.fQ, params.R2, params.k)
    return unfold_to(encode(params.code2, X2), params.tower.fp)


def lift_headers(params: ManiacParams, M1: Mat, M2: Mat) -> tuple[Mat, Mat]:
    """Prepend identity headers so the receiver can recover the transforms."""
    fp, n, N, ell = params.tower.fp, params.n, params.N, params.ell
    _check_shape("M1", M1, fp, n, ell)
    _check_shape("M2", M2, fp, N, ell)
    H1 = hstack(Mat.identity(fp, n), Mat.zeros(fp, n, N), M1)
    H2 = hstack(Mat.zeros(fp, N, n), Mat.identity(fp, N), M2)
    return H1, H2


@dataclass(frozen=True)
class Stage1Extract:
    """Pivot-structure decomposition of a row-reduced received block.

    T_RRE / M_RRE are the lead and payload blocks of the reshaped echelon
    form [I + L_hat @ U_mu^T | r ; O | E_hat].  L_hat columns mark error
    locations (mu of them, one per missing lead pivot), E_hat rows are known
    error values (delta of them, one per payload pivot), r is the message
    estimate, and U_mu holds the mu identity columns at the non-pivot
    positions.
    """

    T_RRE: Mat
    M_RRE: Mat
    L_hat: Mat
    r: Mat
    E_hat: Mat
    U_mu: Mat
    mu: int
    delta: int


def rre_extract(ya: Mat, lead: int) -> Stage1Extract:
    """Reduce ya and split it into (L_hat, r, E_hat) side information.

    `lead` is the width of the identity-carrying block (the first `lead`
    columns); everything to the right is payload.  The output satisfies
    U_mu^T @ r = O and U_mu^T @ L_hat = -I, which is checked on every call.
    """
    f = ya.field
    if not 1 <= lead <= ya.ncols:
        raise ShapeMismatch(
            f"lead width {lead} outside 1..{ya.ncols}")
    payload = ya.ncols - lead
    res = rre(ya)
    red = res.reduced
    lead_piv = [c for c in res.pivots if c < lead]
    pay_piv = [c for c in res.pivots if c >= lead]
    mu = lead - len(lead_piv)
    delta = len(pay_piv)
    non_piv = sorted(set(range(lead)) - set(lead_piv))

    # Reshape the nonzero echelon rows into the block form: each lead-pivot
    # row sits at its pivot's row index, non-pivot rows are zero, and the
    # payload-pivot rows drop to the bottom as known error values.
    d = f.total_degree
    data = np.zeros((lead + delta, ya.ncols, d), dtype=np.int64)
    nxt = lead
    for i, c in enumerate(res.pivots):
        if c < lead:
            data[c] = red.data[i]
        else:
            if red.data[i, :lead].any():
                raise MalformedRre(
                    f"payload-pivot row {i} has nonzero lead part")
            data[nxt] = red.data[i]
            nxt += 1
    form = Mat(f, data)
    T_RRE = form[:, :lead]
    M_RRE = form[:, lead:]
    r = M_RRE[:lead, :]
    E_hat = M_RRE[lead:, :]

    u_data = np.zeros((lead, mu, d), dtype=np.int64)
    l_data = np.zeros((lead, mu, d), dtype=np.int64)
    for t, c in enumerate(non_piv):
        u_data[c, t, 0] = 1
        l_data[:, t] = data[:lead, c]
        l_data[c, t, 0] = (l_data[c, t, 0] - 1) % f.p
    U_mu = Mat(f, u_data)
    L_hat = Mat(f, l_data)

    ident = Mat.identity(f, lead)
    if not (T_RRE[:lead, :] - ident - L_hat @ U_mu.transpose()).is_zero():
        raise MalformedRre("lead block is not I + L_hat @ U_mu^T")
    if not T_RRE[lead:, :].is_zero():
        raise MalformedRre("rows below the lead block are not zero")
    if not (U_mu.transpose() @ r).is_zero():
        raise MalformedRre("U_mu^T @ r != 0")
    if mu and not (U_mu.transpose() @ L_hat + Mat.identity(f, mu)).is_zero():
        raise MalformedRre("U_mu^T @ L_hat != -I")
    if delta and rank(E_hat) != delta:
        raise MalformedRre("E_hat rows are dependent")
    assert r.ncols == payload and E_hat.ncols == payload
    return Stage1Extract(T_RRE=T_RRE, M_RRE=M_RRE, L_hat=L_hat, r=r,
                         E_hat=E_hat, U_mu=U_mu, mu=mu, delta=delta)


def coherent_decode(params: ManiacParams, Y: Mat, T1: Mat, T2: Mat):
    """Decode (X1, X2) given the receiver block and known transforms.

    Raises SingularD when the combined map cannot be inverted,
    NotFullColumnRank when T1 alone cannot, and DecodeFailure when a
    Gabidulin stage finds no codeword in budget.
    """
    tw = params.tower
    _check_shape("Y", Y, tw.fp, params.C, params.ell)
    _check_shape("T1", T1, tw.fp, params.C, params.n)
    _check_shape("T2", T2, tw.fp, params.C, params.N)

    yf = fold_to(Y, tw.fq)
    D = hstack(T1 @ params.code1.G, T2.to_field(tw.fq))
    res = rre(D)
    if res.rank < params.C:
        raise SingularD(f"joint transform rank {res.rank} < {params.C}")
    w = res.transform @ yf
    X2, _ = decode(params.code2, w[params.R1:, :])

    M2 = s2_encode(params, X2)
    li = left_inverse(T1)
    X1, _ = decode(params.code1, li @ (Y - T2 @ M2))
    return X1, X2


def noncoherent_decode(params: ManiacParams, Y: Mat):
    """Decode (X1, X2) from a lifted-header receiver block, transforms unknown.

    Stage 1 rewrites the block over F_q so the first C columns act as a
    corrupted identity, extracts side information from the echelon pivot
    structure, and decodes X2.  Stage 2 subtracts the X2 contribution and
    repeats the same reduction over F_p with lead width n to decode X1.
    Failures carry the stage label.
    """
    tw = params.tower
    n, N, ell, C = params.n, params.N, params.ell, params.C
    _check_shape("Y", Y, tw.fp, C, n + N + ell)
    y1 = Y[:, :n]
    y2 = Y[:, n:n + N]
    y3 = Y[:, n + N:]

    ya = hstack(y1 @ params.code1.G, y2.to_field(tw.fq), fold_to(y3, tw.fq))
    ext = rre_extract(ya, C)
    side = SideInfo(ext.L_hat[params.R1:, :], ext.E_hat)
    try:
        X2, _ = decode(params.code2, ext.r[params.R1:, :], side)
    except DecodeFailure as e:
        raise Stage1Failure(f"X2 stage: {e.args[0]}", e) from e

    M2 = s2_encode(params, X2)
    yprime = hstack(y1, y3 - y2 @ M2)
    ext2 = rre_extract(yprime, n)
    try:
        X1, _ = decode(params.code1, ext2.r, SideInfo(ext2.L_hat, ext2.E_hat))
    except DecodeFailure as e:
        raise Stage2Failure(f"X1 stage: {e.args[0]}", e) from e
    return X1, X2


def success_lower_bound(params: ManiacParams, num_edges: int) -> float:
    """Success probability floor 1 - 2*|edges|/p for either decoder."""
    return 1.0 - 2.0 * num_edges / params.p


def binomial_margin(bound: float, trials: int) -> float:
    """Three-sigma half-width for an empirical rate near `bound`."""
    return 3.0 * math.sqrt(max(bound * (1.0 - bound), 0.0) / trials)

"""Exact matrices over tower fields.

A Mat stores its entries as an (rows, cols, D) int64 array of flat F_p
coefficient vectors, so products and row reduction run through the shared
backend kernels without per-element Python objects.  All results are exact;
there is no floating point anywhere.

The reduced row echelon form tracks its transform: rre(A) returns (R, T,
pivots) with T @ A = R and T invertible, which is what the decoder needs to
split a received block into combination and payload parts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import (
    DimensionMismatch,
    NotFullColumnRank,
    NotInSubfield,
)
from .fields import Elem, Field, common_field, field_from_descriptor


class Mat:
    __slots__ = ("field", "data")

    def __init__(self, field: Field, data: np.ndarray):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim != 3 or data.shape[2] != field.total_degree:
            raise DimensionMismatch(
                f"expected (r, c, {field.total_degree}) data, got {data.shape}")
        self.field = field
        self.data = np.ascontiguousarray(data % field.p)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Mat:
        return cls(field, np.zeros((rows, cols, field.total_degree), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> Mat:
        d = np.zeros((n, n, field.total_degree), dtype=np.int64)
        d[np.arange(n), np.arange(n), 0] = 1
        return cls(field, d)

    @classmethod
    def from_rows(cls, field: Field, rows) -> Mat:
        rows = [[field.elem(v) for v in row] for row in rows]
        if not rows:
            return cls.zeros(field, 0, 0)
        c = len(rows[0])
        if any(len(r) != c for r in rows):
            raise DimensionMismatch("ragged rows")
        d = np.zeros((len(rows), c, field.total_degree), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                d[i, j] = e.vec
        return cls(field, d)

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, rng) -> Mat:
        return cls(field, rng.integers(
            0, field.p, (rows, cols, field.total_degree), dtype=np.int64))

    # -- shape and access ---------------------------------------------------

    @property
    def shape(self):
        return self.data.shape[:2]

    @property
    def nrows(self):
        return self.data.shape[0]

    @property
    def ncols(self):
        return self.data.shape[1]

    def __getitem__(self, key) -> Elem | Mat:
        i, j = key
        if isinstance(i, int) and isinstance(j, int):
            return Elem(self.field, self.data[i, j].copy())
        if isinstance(i, int):
            i = slice(i, i + 1)
        if isinstance(j, int):
            j = slice(j, j + 1)
        return Mat(self.field, self.data[i, j])

    def row(self, i: int) -> Mat:
        return Mat(self.field, self.data[i:i + 1])

    def col(self, j: int) -> Mat:
        return Mat(self.field, self.data[:, j:j + 1])

    def transpose(self) -> Mat:
        return Mat(self.field, self.data.transpose(1, 0, 2))

    def copy(self) -> Mat:
        return Mat(self.field, self.data)

    def is_zero(self) -> bool:
        return not self.data.any()

    # -- field movement ------------------------------------------------------

    def to_field(self, field: Field) -> Mat:
        """Entrywise embedding into an extension on the same tower branch."""
        if field == self.field:
            return self
        if not field.is_extension_of(self.field):
            raise NotInSubfield(f"{self.field} does not embed in {field}")
        r, c, d = self.data.shape
        out = np.zeros((r, c, field.total_degree), dtype=np.int64)
        out[:, :, :d] = self.data
        return Mat(field, out)

    def project(self) -> Mat:
        """Entrywise inverse of embedding, one tower level down."""
        base = self.field.base
        if base is None:
            raise NotInSubfield("prime field has no base to project onto")
        db = base.total_degree
        if self.data[:, :, db:].any():
            raise NotInSubfield("entry outside the base field")
        return Mat(base, self.data[:, :, :db])

    def frobenius(self, j: int) -> Mat:
        """Entrywise x -> x**(|base|**j)."""
        if self.field.base is None:
            return self.copy()
        fm = self.field.frob_mat(j)
        r, c, d = self.data.shape
        out = self.data.reshape(-1, d) @ fm % self.field.p
        return Mat(self.field, out.reshape(r, c, d))

    def _pair(self, other: Mat):
        f = common_field(self.field, other.field)
        return f, self.to_field(f), other.to_field(f)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: Mat) -> Mat:
        f, a, b = self._pair(other)
        if a.shape != b.shape:
            raise DimensionMismatch(f"{a.shape} + {b.shape}")
        return Mat(f, (a.data + b.data) % f.p)

    def __sub__(self, other: Mat) -> Mat:
        f, a, b = self._pair(other)
        if a.shape != b.shape:
            raise DimensionMismatch(f"{a.shape} - {b.shape}")
        return Mat(f, (a.data - b.data) % f.p)

    def __neg__(self) -> Mat:
        return Mat(self.field, -self.data % self.field.p)

    def __matmul__(self, other: Mat) -> Mat:
        f, a, b = self._pair(other)
        if a.ncols != b.nrows:
            raise DimensionMismatch(f"{a.shape} @ {b.shape}")
        return Mat(f, backend.K.mat_mul(a.data, b.data, f.S, f.p))

    def scale(self, e) -> Mat:
        if not isinstance(e, Elem):
            e = self.field.elem(e)
        f = common_field(self.field, e.field)
        a = self.to_field(f)
        ev = np.ascontiguousarray(f._coerce(e).vec.reshape(1, 1, -1))
        prod = backend.K.mat_mul(ev, a.data.reshape(1, -1, f.total_degree),
                                 f.S, f.p)
        return Mat(f, prod.reshape(a.data.shape))

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        try:
            _, a, b = self._pair(other)
        except Exception:
            return False
        return a.shape == b.shape and bool((a.data == b.data).all())

    def __repr__(self):
        r, c = self.shape
        return f"Mat({r}x{c} over {self.field!r})"

    # -- serialization ----------------------------------------------------------

    def to_obj(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "shape": [self.nrows, self.ncols],
            "entries": [[int(self[i, j]) for j in range(self.ncols)]
                        for i in range(self.nrows)],
        }

    @classmethod
    def from_obj(cls, obj: dict, field: Field | None = None) -> Mat:
        f = field if field is not None else field_from_descriptor(obj["field"])
        r, c = obj["shape"]
        rows = obj["entries"]
        if len(rows) != r or any(len(row) != c for row in rows):
            raise DimensionMismatch("entry grid does not match declared shape")
        return cls.from_rows(f, rows)


def hstack(*mats: Mat) -> Mat:
    f = mats[0].field
    for m in mats[1:]:
        f = common_field(f, m.field)
    parts = [m.to_field(f) for m in mats]
    r = parts[0].nrows
    if any(m.nrows != r for m in parts):
        raise DimensionMismatch("hstack needs equal row counts")
    return Mat(f, np.concatenate([m.data for m in parts], axis=1))


def vstack(*mats: Mat) -> Mat:
    f = mats[0].field
    for m in mats[1:]:
        f = common_field(f, m.field)
    parts = [m.to_field(f) for m in mats]
    c = parts[0].ncols
    if any(m.ncols != c for m in parts):
        raise DimensionMismatch("vstack needs equal column counts")
    return Mat(f, np.concatenate([m.data for m in parts], axis=0))


@dataclass(frozen=True)
class RreResult:
    """T @ original = reduced, with T invertible and pivots ascending."""
    reduced: Mat
    transform: Mat
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rre(a: Mat) -> RreResult:
    r, t, piv = backend.K.rre(a.data, a.field.S, a.field.p)
    return RreResult(Mat(a.field, r), Mat(a.field, t), tuple(int(x) for x in piv))


def rank(a: Mat) -> int:
    return rre(a).rank


def left_inverse(a: Mat) -> Mat:
    """L with L @ a = identity; a must have full column rank."""
    res = rre(a)
    if res.rank < a.ncols:
        raise NotFullColumnRank(
            f"rank {res.rank} < {a.ncols} columns")
    return res.transform[0:a.ncols, :]


def left_nullspace(a: Mat) -> Mat:
    """Rows spanning {x : x @ a = 0}; shape (nrows - rank, nrows)."""
    res = rre(a)
    return res.transform[res.rank:a.nrows, :]


def row_space_distance(a: Mat, b: Mat) -> int:
    """Subspace distance between the row spaces: dim of the symmetric
    difference, computed as 2*rank([a; b]) - rank(a) - rank(b)."""
    if a.ncols != b.ncols:
        raise DimensionMismatch("row spaces live in different ambient spaces")
    return 2 * rank(vstack(a, b)) - rank(a) - rank(b)

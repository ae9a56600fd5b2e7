"""Folding between a field and one of its extensions.

Folding groups each run of `block` consecutive columns of a matrix over the
base field into a single column over the extension, reading the run
big-endian: the first column of a run carries the highest basis power.  With
the nested flat coordinates used by the field tower this is a pure reshape
plus a block reversal, so both directions are exact bijections and cost
nothing but a copy.

Example over F_2 -> F_4 (2 = x, 3 = x+1):

    [[1, 0],          [[2],
     [1, 1]]   fold     [3]]
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ColumnCountNotDivisible, IncompatibleFields
from .fields import ExtField, Field
from .matrix import Mat


@dataclass(frozen=True)
class FoldSpec:
    """One tower step: src = dst.base, block = dst.degree."""
    src: Field
    dst: ExtField
    block: int

    def __post_init__(self):
        if self.dst.base != self.src:
            raise IncompatibleFields("dst must extend src directly")
        if self.dst.degree != self.block:
            raise ValueError(f"block {self.block} != extension degree {self.dst.degree}")

    @classmethod
    def into(cls, dst: ExtField) -> FoldSpec:
        return cls(dst.base, dst, dst.degree)


def fold(a: Mat, spec: FoldSpec) -> Mat:
    if a.field != spec.src:
        raise IncompatibleFields(f"matrix over {a.field}, spec folds from {spec.src}")
    r, c, d = a.data.shape
    blk = spec.block
    if c % blk:
        raise ColumnCountNotDivisible(f"{c} columns not divisible by block {blk}")
    stacked = a.data.reshape(r, c // blk, blk, d)[:, :, ::-1, :]
    return Mat(spec.dst, stacked.reshape(r, c // blk, blk * d))


def unfold(b: Mat, spec: FoldSpec) -> Mat:
    if b.field != spec.dst:
        raise IncompatibleFields(f"matrix over {b.field}, spec unfolds from {spec.dst}")
    r, c, d = b.data.shape
    blk = spec.block
    split = b.data.reshape(r, c, blk, d // blk)[:, :, ::-1, :]
    return Mat(spec.src, split.reshape(r, c * blk, d // blk))


def fold_to(a: Mat, dst: Field) -> Mat:
    """Fold through as many tower levels as it takes to land in dst."""
    steps = []
    f = dst
    while f != a.field:
        if not isinstance(f, ExtField):
            raise IncompatibleFields(f"{a.field} is not below {dst}")
        steps.append(FoldSpec.into(f))
        f = f.base
    for spec in reversed(steps):
        a = fold(a, spec)
    return a


def unfold_to(b: Mat, dst: Field) -> Mat:
    """Unfold through as many tower levels as it takes to land in dst."""
    if not b.field.is_extension_of(dst):
        raise IncompatibleFields(f"{dst} is not below {b.field}")
    while b.field != dst:
        b = unfold(b, FoldSpec.into(b.field))
    return b

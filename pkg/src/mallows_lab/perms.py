"""Permutations, inversion-count bijections, patterns, and block structure.

Conventions, used throughout the library:

* one-line notation with 1-based values: the permutation 2413 maps
  position 1 to 2, position 2 to 4, and so on;
* the left inversion count l[i] is the number of earlier positions
  holding a larger value, the right inversion count r[i] the number of
  later positions holding a smaller value;
* left counts satisfy l[i] <= i-1, right counts r[i] <= n-i, and each
  admissible sequence corresponds to exactly one permutation.

All objects are immutable values; operations are pure functions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import IndexOutOfRange, NotAPermutation, RangeViolation


class Side(enum.Enum):
    """Which inversion-count sequence a value refers to."""

    LEFT = "left"
    RIGHT = "right"


def _as_side(side) -> Side:
    if isinstance(side, Side):
        return side
    return Side(str(side).lower())


class Permutation:
    """Immutable permutation of {1, ..., n} in one-line notation."""

    __slots__ = ("values",)

    def __init__(self, values, *, validate: bool = True):
        arr = np.ascontiguousarray(values, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise NotAPermutation("a permutation needs at least one value")
        if validate:
            n = arr.size
            if arr.min() < 1 or arr.max() > n:
                raise NotAPermutation(f"values are not a bijection of 1..{n}: out of range")
            if np.bincount(arr, minlength=n + 1).max() > 1:
                raise NotAPermutation(f"values are not a bijection of 1..{n}: duplicate")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def size(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __call__(self, i: int) -> int:
        """Value at 1-based position i."""
        if not 1 <= i <= self.size:
            raise IndexOutOfRange(f"position {i} outside 1..{self.size}")
        return int(self.values[i - 1])

    def __eq__(self, other) -> bool:
        if isinstance(other, Permutation):
            return np.array_equal(self.values, other.values)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)

    def to_text(self) -> str:
        """Comma-separated one-line notation, e.g. '2,4,1,3'."""
        return ",".join(str(int(v)) for v in self.values)

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        try:
            vals = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError as exc:
            raise NotAPermutation(f"cannot parse {text!r}") from exc
        return cls(vals)

    def __repr__(self) -> str:
        return f"Permutation('{self.to_text()}')"


@dataclass(frozen=True)
class InversionCounts:
    """A left or right inversion-count sequence (the image of a permutation)."""

    side: Side
    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.counts, dtype=np.int64)
        n = arr.size
        if n == 0:
            raise RangeViolation("empty count sequence")
        idx = np.arange(n, dtype=np.int64)
        if np.any(arr < 0):
            raise RangeViolation("negative inversion count")
        if self.side is Side.LEFT:
            bad = np.nonzero(arr > idx)[0]
        else:
            bad = np.nonzero(arr > n - 1 - idx)[0]
        if bad.size:
            i = int(bad[0])
            raise RangeViolation(
                f"{self.side.value} count {int(arr[i])} at position {i + 1} exceeds its range"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)

    def to_text(self) -> str:
        tag = "L" if self.side is Side.LEFT else "R"
        return tag + ":" + ",".join(str(int(c)) for c in self.counts)

    @classmethod
    def from_text(cls, text: str) -> "InversionCounts":
        tag, _, body = text.partition(":")
        side = {"L": Side.LEFT, "R": Side.RIGHT}.get(tag.strip().upper())
        if side is None:
            raise RangeViolation(f"unknown side tag in {text!r}")
        return cls(side, np.array([int(t) for t in body.split(",")], dtype=np.int64))


@dataclass(frozen=True)
class BlockDecomposition:
    """Maximal decomposition of a permutation into indecomposable factors."""

    blocks: tuple[Permutation, ...]
    offsets: np.ndarray = field(repr=False)  # cumulative sizes, length len(blocks)


def identity(n: int) -> Permutation:
    if n < 1:
        raise NotAPermutation("size must be >= 1")
    return Permutation(np.arange(1, n + 1), validate=False)


def from_one_line(values: Sequence[int]) -> Permutation:
    """Validating constructor from one-line notation."""
    return Permutation(values)


def inversion_counts(p: Permutation, side=Side.RIGHT) -> InversionCounts:
    """Left or right inversion counts of p; either side sums to inv(p)."""
    side = _as_side(side)
    if side is Side.LEFT:
        counts = _kernels.left_counts(p.values)
    else:
        counts = _kernels.right_counts(p.values)
    return InversionCounts(side, counts)


def inversion_counts_reference(p: Permutation, side=Side.RIGHT) -> InversionCounts:
    """Quadratic pairwise-comparison implementation, kept as an oracle."""
    side = _as_side(side)
    v = p.values
    less = v[:, None] > v[None, :]  # less[i, j]: v[i] > v[j]
    if side is Side.LEFT:
        counts = np.array([int(less[:i, i].sum()) for i in range(len(v))])
    else:
        counts = np.array([int(less[i, i + 1 :].sum()) for i in range(len(v))])
    return InversionCounts(side, counts.astype(np.int64))


def _right_decode(counts: np.ndarray) -> np.ndarray:
    return _kernels.decode_select(counts, counts.size)


def _coerce_counts(c, side: Side) -> np.ndarray:
    if isinstance(c, InversionCounts):
        if c.side is not side:
            raise RangeViolation(f"expected {side.value} counts, got {c.side.value}")
        return c.counts
    return InversionCounts(side, np.asarray(c, dtype=np.int64)).counts


def from_right_inversions(c) -> Permutation:
    """Unique permutation whose right inversion counts are c.

    Insertion procedure: the value at position k is the (c[k]+1)-st
    smallest value not used by positions before k.
    """
    counts = _coerce_counts(c, Side.RIGHT)
    return Permutation(_right_decode(counts), validate=False)


def from_left_inversions(c) -> Permutation:
    """Unique permutation whose left inversion counts are c.

    Uses the duality with the right-side decoder: rotating a permutation
    by 180 degrees (reverse positions and complement values) turns its
    right counts, read backwards, into left counts.
    """
    counts = _coerce_counts(c, Side.LEFT)
    p = _right_decode(counts[::-1].copy())
    n = counts.size
    return Permutation((n + 1) - p[::-1], validate=False)


def prefix_values_from_right_inversions(r) -> np.ndarray:
    """First n values of the infinite insertion over positive integers.

    r may be any nonnegative integers (prefix counts of an infinite
    permutation); the k-th value is the (r[k]+1)-st smallest positive
    integer not used so far, so values are distinct and v[k] <= k + r[k].
    """
    arr = np.ascontiguousarray(r, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise RangeViolation("need a nonempty 1-D count sequence")
    if np.any(arr < 0):
        raise RangeViolation("negative inversion count")
    universe = arr.size + int(arr.max())
    return _kernels.decode_select(arr, universe)


def rank_reduce(values) -> Permutation:
    """Pattern of a sequence of distinct integers (rank reduction)."""
    arr = np.asarray(values, dtype=np.int64)
    out = np.empty(arr.size, dtype=np.int64)
    out[np.argsort(arr, kind="stable")] = np.arange(1, arr.size + 1)
    return Permutation(out, validate=False)


def pattern_at(p: Permutation, indices: Iterable[int]) -> Permutation:
    """Pattern induced by p on a strictly increasing 1-based index set."""
    idx = np.asarray(list(indices), dtype=np.int64)
    if idx.size == 0:
        raise IndexOutOfRange("index set must be nonempty")
    if np.any(idx < 1) or np.any(idx > p.size):
        raise IndexOutOfRange(f"indices escape 1..{p.size}")
    if np.any(np.diff(idx) <= 0):
        raise IndexOutOfRange("indices must be strictly increasing")
    return rank_reduce(p.values[idx - 1])


def direct_sum(parts: Sequence[Permutation]) -> Permutation:
    """Concatenation with value shifts; associative."""
    if not parts:
        raise NotAPermutation("direct sum of an empty list")
    pieces = []
    offset = 0
    for part in parts:
        pieces.append(part.values + offset)
        offset += part.size
    return Permutation(np.concatenate(pieces), validate=False)


def reverse(p: Permutation) -> Permutation:
    """Position reversal; inv(p) + inv(reverse(p)) = C(n, 2)."""
    return Permutation(p.values[::-1].copy(), validate=False)


def reverse_complement(p: Permutation) -> Permutation:
    """180-degree rotation: reverse positions and complement values.

    This is the operation whose left counts are the reversed right counts
    of p (position reversal alone does not have that property).
    """
    return Permutation((p.size + 1) - p.values[::-1], validate=False)


def block_decomposition(p: Permutation) -> BlockDecomposition:
    """Maximal factorization of p as a direct sum of indecomposable blocks.

    A boundary closes at position m exactly when the running maximum of
    i + r_i (equivalently, of the first m values) equals m; this needs
    O(1) state per element, so the same rule segments unbounded
    right-inversion streams.
    """
    runmax = np.maximum.accumulate(p.values)
    ends = np.nonzero(runmax == np.arange(1, p.size + 1))[0] + 1
    blocks = []
    start = 0
    for end in ends:
        # a complete block holds exactly the values start+1 .. end
        blocks.append(Permutation(p.values[start:end] - start, validate=False))
        start = int(end)
    return BlockDecomposition(tuple(blocks), offsets=np.asarray(ends, dtype=np.int64))


def is_indecomposable(p: Permutation) -> bool:
    """True iff no proper prefix of p uses exactly the values 1..k."""
    runmax = np.maximum.accumulate(p.values[:-1])
    return not np.any(runmax == np.arange(1, p.size))


def block_count(p: Permutation) -> int:
    runmax = np.maximum.accumulate(p.values)
    return int(np.count_nonzero(runmax == np.arange(1, p.size + 1)))

"""Exact random generation for the Mallows family.

The distribution on S_n gives each permutation probability proportional
to q^inv; all samplers here are exact (no Markov chains):

* ``sample_mallows`` draws independent truncated geometrics for the left
  or right inversion counts and inverts the insertion bijection;
* ``sample_infinite_prefix`` builds the first n values of the infinite
  permutation from i.i.d. geometric right counts and rank-reduces;
* ``sample_block`` streams geometric counts until the first block closes,
  yielding the regenerative unit;
* ``sample_block_sum`` returns the block decomposition of a prefix:
  complete blocks, the leftover pattern, and the block count.

q must lie in (0, 1]; q = 1 short-circuits to uniform, q = 0 (identity)
and q > 1 (use the reversal identity) are rejected here. ``*_batch``
variants vectorize over replicates for Monte Carlo work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, DomainError
from .perms import (
    Permutation,
    Side,
    _as_side,
    from_left_inversions,
    from_right_inversions,
    identity,
    prefix_values_from_right_inversions,
    rank_reduce,
)
from .rng import RngStream

BLOCK_SIZE_CAP = 10**7


@dataclass(frozen=True)
class MallowsParams:
    """Size and bias parameter; q in (0, 1], with q = 1 the uniform case."""

    n: int | None
    q: float

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        _check_q(self.q, allow_one=True)


@dataclass(frozen=True)
class BlockSumSample:
    """A Mallows sample exposed as complete blocks plus a remainder."""

    blocks: tuple[Permutation, ...]
    remainder: Permutation | None
    k_n: int

    def reassemble(self) -> Permutation:
        from .perms import direct_sum

        parts = list(self.blocks)
        if self.remainder is not None:
            parts.append(self.remainder)
        return direct_sum(parts)


def _check_q(q: float, allow_one: bool) -> None:
    top = 1.0 if allow_one else 1.0 - 1e-323
    if not (0.0 < q <= 1.0) or (not allow_one and q >= 1.0):
        raise DomainError(
            f"q={q} outside the supported range (0, 1{']' if allow_one else ')'}"
        )


def tgeom_pmf(k: int, q: float, j: int) -> float:
    """Mass at j of the geometric law conditioned to {1, ..., k}.

    P(j) = (1-q) q^(j-1) / (1 - q^k); the uniform 1/k at q = 1. Stable
    arbitrarily close to q = 1 (log-space evaluation).
    """
    if k < 1 or not 1 <= j <= k:
        raise DomainError(f"need 1 <= j <= k, got j={j}, k={k}")
    _check_q(q, allow_one=True)
    if q == 1.0:
        return 1.0 / k
    lq = np.log1p(-(1.0 - q))
    return float(np.exp((j - 1) * lq) * (1.0 - q) / -np.expm1(k * lq))


def tgeom_sample(k: int, q: float, rng: RngStream) -> int:
    """One draw from the truncated geometric on {1, ..., k}."""
    return int(tgeom_batch(np.array([k], dtype=np.int64), q, 1, rng)[0, 0])


def tgeom_batch(ks: np.ndarray, q: float, reps: int, rng: RngStream) -> np.ndarray:
    """(reps, len(ks)) draws, column i truncated at ks[i]; inverse CDF."""
    ks = np.asarray(ks, dtype=np.int64)
    if np.any(ks < 1):
        raise DomainError("truncation levels must be >= 1")
    _check_q(q, allow_one=True)
    u = rng.random((reps, ks.size))
    if q == 1.0:
        return np.minimum((u * ks).astype(np.int64) + 1, ks)
    lq = np.log1p(-(1.0 - q))
    tail = np.expm1(ks * lq)  # q^k - 1, accurate near q = 1
    j = np.ceil(np.log1p(u * tail) / lq).astype(np.int64)
    return np.clip(j, 1, ks)


def geom_batch(q: float, rng: RngStream, size) -> np.ndarray:
    """Geometric draws on {1, 2, ...} with success probability 1 - q."""
    _check_q(q, allow_one=False)
    lq = np.log1p(-(1.0 - q))
    u = rng.random(size)
    return np.maximum(np.ceil(np.log1p(-u) / lq).astype(np.int64), 1)


def sample_mallows(n: int, q: float, rng: RngStream, side=Side.RIGHT) -> Permutation:
    """One exact Mallows(n, q) permutation.

    side selects which inversion-count construction is inverted; both
    give the same distribution. q = 1 delegates to ``sample_uniform``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if q == 1.0:
        return sample_uniform(n, rng)
    side = _as_side(side)
    if side is Side.LEFT:
        draws = tgeom_batch(np.arange(1, n + 1), q, 1, rng)[0]
        return from_left_inversions(draws - 1)
    draws = tgeom_batch(np.arange(n, 0, -1), q, 1, rng)[0]
    return from_right_inversions(draws - 1)


def sample_uniform(n: int, rng: RngStream) -> Permutation:
    """Uniform permutation via the left insertion with uniform inserts."""
    if n < 1:
        raise DomainError("n must be >= 1")
    lcounts = rng.integers(0, np.arange(1, n + 1))
    return from_left_inversions(lcounts)


def sample_infinite_prefix(n: int, q: float, rng: RngStream) -> Permutation:
    """Pattern of the first n values of the infinite permutation.

    Draws i.i.d. geometric right counts, runs the unbounded insertion,
    and rank-reduces; the result is again exactly Mallows(n, q).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    r = geom_batch(q, rng, n) - 1
    return rank_reduce(prefix_values_from_right_inversions(r))


def sample_block(q: float, rng: RngStream, cap: int = BLOCK_SIZE_CAP) -> Permutation:
    """The first indecomposable factor of the infinite permutation.

    Streams geometric right counts until the running maximum of i + r_i
    returns to i; P(size 1) = 1 - q. `cap` guards runaway blocks when q
    is misused too close to 1.
    """
    _check_q(q, allow_one=False)
    buf: list[np.ndarray] = []
    total = 0
    runmax = 0
    while True:
        chunk = geom_batch(q, rng, 32) - 1
        t = np.maximum.accumulate(np.arange(total + 1, total + 33) + chunk)
        runmax = np.maximum.accumulate(np.maximum(t, runmax))
        hits = np.nonzero(runmax == np.arange(total + 1, total + 33))[0]
        if hits.size:
            end = int(hits[0]) + 1
            buf.append(chunk[:end])
            counts = np.concatenate(buf)
            return from_right_inversions(counts)
        buf.append(chunk)
        total += 32
        runmax = int(runmax[-1])
        if total > cap:
            raise BudgetExceeded(f"block exceeded {cap} elements; q={q} too close to 1?")


def sample_block_sum(n: int, q: float, rng: RngStream) -> BlockSumSample:
    """Blocks-and-remainder form of a Mallows(n, q) sample.

    Reassembling (direct sum of blocks then remainder) is distributed as
    Mallows(n, q); k_n counts the complete blocks.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    _check_q(q, allow_one=False)
    r = geom_batch(q, rng, n) - 1
    ends = _kernels.block_boundaries(r)
    blocks = []
    start = 0
    for end in ends:
        end = int(end)
        blocks.append(from_right_inversions(r[start:end]))
        start = end
    remainder = None
    if start < n:
        remainder = rank_reduce(prefix_values_from_right_inversions(r[start:]))
    return BlockSumSample(tuple(blocks), remainder, len(blocks))


# ---------------------------------------------------------------------------
# Batch lanes (one row per replicate) for Monte Carlo pipelines.
# ---------------------------------------------------------------------------


def sample_mallows_batch(
    n: int, q: float, reps: int, rng: RngStream, side=Side.LEFT
) -> np.ndarray:
    """(reps, n) matrix of independent Mallows(n, q) one-line rows."""
    side = _as_side(side)
    if q == 1.0:
        return sample_uniform_batch(n, reps, rng)
    if side is Side.LEFT:
        lrows = tgeom_batch(np.arange(1, n + 1), q, reps, rng) - 1
        vals = _kernels.decode_right_rows(np.ascontiguousarray(lrows[:, ::-1]))
        return (n + 1) - vals[:, ::-1]
    rrows = tgeom_batch(np.arange(n, 0, -1), q, reps, rng) - 1
    return _kernels.decode_right_rows(rrows)


def sample_uniform_batch(n: int, reps: int, rng: RngStream) -> np.ndarray:
    lrows = rng.integers(0, np.arange(1, n + 1), size=(reps, n))
    vals = _kernels.decode_right_rows(np.ascontiguousarray(lrows[:, ::-1]))
    return (n + 1) - vals[:, ::-1]


def mallows_inv_batch(n: int, q: float, reps: int, rng: RngStream) -> np.ndarray:
    """Inversion numbers of `reps` independent samples, without decoding.

    The inversion number is the sum of the drawn left variables minus n,
    so only the truncated geometrics are generated.
    """
    if q == 1.0:
        lrows = rng.integers(0, np.arange(1, n + 1), size=(reps, n))
        return lrows.sum(axis=1)
    draws = tgeom_batch(np.arange(1, n + 1), q, reps, rng)
    return draws.sum(axis=1) - n


def sample_infinite_prefix_batch(n: int, q: float, reps: int, rng: RngStream) -> np.ndarray:
    """(reps, n) one-line rows sampled through the infinite insertion."""
    rrows = geom_batch(q, rng, (reps, n)) - 1
    vals = _kernels.decode_prefix_rows(rrows)
    ranks = np.empty_like(vals)
    order = np.argsort(vals, axis=1, kind="stable")
    np.put_along_axis(ranks, order, np.arange(1, n + 1)[None, :], axis=1)
    return ranks


def sample_block_sum_batch(
    n: int, q: float, reps: int, rng: RngStream
) -> tuple[np.ndarray, np.ndarray]:
    """Reassembled block-sum rows plus the per-row complete-block count."""
    rrows = geom_batch(q, rng, (reps, n)) - 1
    return _kernels.block_sum_rows(rrows)

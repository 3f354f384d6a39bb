"""The continuous-time coupling of Mallows permutations across q.

Each right-inversion coordinate runs an independent pure-birth process
started at 1 with rate j/(1-t) from state j, so the state at time t is
geometric on {1, 2, ...} with parameter 1-t. Reading the states minus
one as right-inversion counts and applying the unbounded insertion gives
a permutation process whose [n]-pattern is Mallows(n, t) at every t.

Paths carry exact jump times: from state j at time s the next jump is
1 - (1-s) * U^(1/j), accepted while below the horizon. Everything here
is a deterministic function of the supplied stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, OutOfHorizon
from .patterns import occ
from .perms import Permutation, block_count, rank_reduce
from .rng import RngStream


@dataclass(frozen=True)
class BirthPath:
    """Sorted jump times of one birth-process coordinate."""

    jump_times: np.ndarray = field(repr=False)
    horizon: float

    def __post_init__(self):
        t = np.ascontiguousarray(self.jump_times, dtype=np.float64)
        if not 0.0 < self.horizon < 1.0:
            raise DomainError("horizon must lie in (0, 1)")
        if t.size and (t[0] <= 0.0 or t[-1] >= self.horizon or np.any(np.diff(t) <= 0)):
            raise DomainError("jump times must be strictly increasing inside (0, horizon)")
        t.flags.writeable = False
        object.__setattr__(self, "jump_times", t)

    def state(self, t: float) -> int:
        return eval_state(self, t)


@dataclass(frozen=True)
class ProcessPrefix:
    """Bundle of n independent birth paths (coordinates 1..n)."""

    n: int
    horizon: float
    jump_offsets: np.ndarray = field(repr=False)  # length n+1, CSR into jump_times
    jump_times: np.ndarray = field(repr=False)

    def path(self, i: int) -> BirthPath:
        """Path of coordinate i (1-based)."""
        if not 1 <= i <= self.n:
            raise DomainError(f"coordinate {i} outside 1..{self.n}")
        lo, hi = self.jump_offsets[i - 1], self.jump_offsets[i]
        return BirthPath(self.jump_times[lo:hi].copy(), self.horizon)

    def states_at(self, t: float, n: int | None = None) -> np.ndarray:
        """Vector of path states at time t (first n coordinates)."""
        if not 0.0 <= t <= self.horizon:
            raise OutOfHorizon(f"t={t} outside [0, {self.horizon}]")
        n = self.n if n is None else n
        cut = np.concatenate(([0], np.cumsum(self.jump_times <= t)))
        off = self.jump_offsets[: n + 1]
        return 1 + cut[off[1:]] - cut[off[:-1]]


def sample_birth_path(horizon: float, rng: RngStream) -> BirthPath:
    """Exact forward simulation of one coordinate up to the horizon."""
    if not 0.0 < horizon < 1.0:
        raise DomainError("horizon must lie in (0, 1)")
    times = []
    t, j = 0.0, 1
    while True:
        t = 1.0 - (1.0 - t) * rng.random() ** (1.0 / j)
        if t >= horizon:
            return BirthPath(np.array(times), horizon)
        times.append(t)
        j += 1


def extend_birth_path(path: BirthPath, new_horizon: float, rng: RngStream) -> BirthPath:
    """Continue a path beyond its horizon with fresh jumps from the last state."""
    if new_horizon <= path.horizon:
        raise DomainError("new horizon must exceed the current one")
    if not new_horizon < 1.0:
        raise DomainError("horizon must stay below 1")
    times = list(path.jump_times)
    t = path.horizon
    j = len(times) + 1
    # The no-jump event on [last jump, horizon) was already decided; the
    # memoryless structure lets the continuation restart at the horizon.
    while True:
        t = 1.0 - (1.0 - t) * rng.random() ** (1.0 / j)
        if t >= new_horizon:
            return BirthPath(np.array(times), new_horizon)
        times.append(t)
        j += 1


def eval_state(path: BirthPath, t: float) -> int:
    """1 + number of jumps at or before t; right-continuous in t."""
    if not 0.0 <= t <= path.horizon:
        raise OutOfHorizon(f"t={t} outside [0, {path.horizon}]")
    return 1 + int(np.searchsorted(path.jump_times, t, side="right"))


def sample_process_prefix(n: int, horizon: float, rng: RngStream) -> ProcessPrefix:
    """Simulate n independent coordinates, vectorized over lanes."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 < horizon < 1.0:
        raise DomainError("horizon must lie in (0, 1)")
    lanes = np.arange(n)
    t = np.zeros(n)
    j = np.ones(n)
    out_lane: list[np.ndarray] = []
    out_time: list[np.ndarray] = []
    active = lanes
    while active.size:
        u = rng.random(active.size)
        t_next = 1.0 - (1.0 - t[active]) * u ** (1.0 / j[active])
        hit = t_next < horizon
        survivors = active[hit]
        t[survivors] = t_next[hit]
        j[survivors] += 1.0
        out_lane.append(survivors)
        out_time.append(t_next[hit])
        active = survivors
    lane = np.concatenate(out_lane) if out_lane else np.empty(0, dtype=np.int64)
    time = np.concatenate(out_time) if out_time else np.empty(0)
    order = np.argsort(lane, kind="stable")  # per-lane round order is time order
    lane, time = lane[order], time[order]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(offsets, lane + 1, 1)
    offsets = np.cumsum(offsets)
    return ProcessPrefix(n, horizon, offsets, time)


def tau_nt(prefix: ProcessPrefix, n: int, t: float) -> Permutation:
    """Pattern on the first n coordinates at time t; Mallows(n, t) in law."""
    if n > prefix.n:
        raise DomainError(f"prefix holds {prefix.n} coordinates, need {n}")
    r = prefix.states_at(t, n) - 1
    m = n + int(r.max(initial=0))
    return rank_reduce(_kernels.decode_select(r.astype(np.int64), m))


@dataclass(frozen=True)
class QBlockProcess:
    """One regenerative factor of the process, restricted to [0, q].

    Right-inversion counts of the factor at time t are the path states
    minus one; at t = q the factor is an indecomposable permutation.
    """

    size: int
    horizon: float
    jump_offsets: np.ndarray = field(repr=False)
    jump_times: np.ndarray = field(repr=False)

    def states_at(self, t: float) -> np.ndarray:
        if not 0.0 <= t <= self.horizon:
            raise OutOfHorizon(f"t={t} outside [0, {self.horizon}]")
        cut = np.concatenate(([0], np.cumsum(self.jump_times <= t)))
        return 1 + cut[self.jump_offsets[1:]] - cut[self.jump_offsets[:-1]]

    def permutation_at(self, t: float) -> Permutation:
        r = (self.states_at(t) - 1).astype(np.int64)
        return Permutation(_kernels.decode_select(r, self.size), validate=False)

    def inv_at(self, t: float) -> int:
        return int((self.states_at(t) - 1).sum())


@dataclass(frozen=True)
class QBlockBundle:
    """Complete q-blocks cut from a prefix, plus the unused tail length."""

    q: float
    blocks: tuple[QBlockProcess, ...]
    tail: int  # coordinates after the last complete block


def cut_q_blocks(prefix: ProcessPrefix, q: float) -> QBlockBundle:
    """Cut the prefix into i.i.d. block processes using states at time q."""
    if q > prefix.horizon:
        raise OutOfHorizon(f"q={q} beyond horizon {prefix.horizon}")
    r = prefix.states_at(q) - 1
    ends = _kernels.block_boundaries(r.astype(np.int64))
    blocks = []
    start = 0
    for end in ends:
        end = int(end)
        lo, hi = prefix.jump_offsets[start], prefix.jump_offsets[end]
        blocks.append(
            QBlockProcess(
                size=end - start,
                horizon=q,
                jump_offsets=(prefix.jump_offsets[start : end + 1] - lo),
                jump_times=prefix.jump_times[lo:hi],
            )
        )
        start = end
    return QBlockBundle(q, tuple(blocks), prefix.n - start)


def transition_pmf(k: int, s: float, t: float, j: int) -> float:
    """P(state at t = j | state at s = k) for the birth process.

    Sum of k i.i.d. geometrics with parameter (1-t)/(1-s):
    C(j-1, k-1) ((t-s)/(1-s))^(j-k) ((1-t)/(1-s))^k for j >= k.
    """
    if not (0.0 <= s <= t < 1.0):
        raise DomainError("need 0 <= s <= t < 1")
    if k < 1 or j < k:
        raise DomainError("need j >= k >= 1")
    if t == s:
        return 1.0 if j == k else 0.0
    p_up = (t - s) / (1.0 - s)
    p_stay = (1.0 - t) / (1.0 - s)
    return float(math.comb(j - 1, k - 1) * p_up ** (j - k) * p_stay**k)


def increment_moments(s: float, t: float) -> tuple[float, float]:
    """Mean and variance of state(t) - state(s) for a path started at 1."""
    if not (0.0 <= s <= t < 1.0):
        raise DomainError("need 0 <= s <= t < 1")
    mean = (t - s) / ((1.0 - s) * (1.0 - t))
    var = (t - s) * (1.0 + s * t - 2.0 * s) / ((1.0 - s) ** 2 * (1.0 - t) ** 2)
    return mean, var


@dataclass(frozen=True)
class ProcessPoint:
    t: float
    occ: int
    e_estimate: float | None
    centered: float | None


def occ_process(
    pi: Permutation,
    n: int,
    grid: Sequence[float],
    prefix: ProcessPrefix,
    e_estimates: Sequence[float] | None = None,
) -> list[ProcessPoint]:
    """occ(pi, tau_{n,t}) along a sorted time grid.

    The permutation and its count are recomputed from scratch at each
    grid time (grid times falling on a jump evaluate right-continuously).
    With per-time estimates of the limit rate e, also emits the centered
    value occ - C(n, d) * e_t, d = number of blocks of pi.
    """
    grid = list(grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be sorted")
    if grid and (grid[0] < 0.0 or grid[-1] > prefix.horizon):
        raise OutOfHorizon("grid escapes [0, horizon]")
    if e_estimates is not None and len(e_estimates) != len(grid):
        raise DomainError("need one e estimate per grid time")
    d = block_count(pi)
    scale = math.comb(n, d)
    points = []
    for idx, t in enumerate(grid):
        perm = tau_nt(prefix, n, t)
        count = occ(pi, perm)
        if e_estimates is None:
            points.append(ProcessPoint(t, count, None, None))
        else:
            e = float(e_estimates[idx])
            points.append(ProcessPoint(t, count, e, count - scale * e))
    return points

"""Counting classical pattern occurrences.

occ(pi, p) is the number of index subsets of p whose induced pattern is
pi. Exact routes provided here:

* ``occ_bruteforce`` - pruned subset enumeration, the universal oracle;
* ``occ3_all`` - all six size-3 patterns in O(n log n);
* ``occ_increasing`` - increasing subsequences of a fixed length r;
* ``occ_blockwise`` - the ordered-blocks approximation used over direct
  sums (a stopped U-statistic in disguise).

Counts are Python ints (arbitrary precision); int64 fast paths are used
only when provably overflow-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, PreconditionViolated
from .fenwick import FenwickTree
from .perms import Permutation, Side, inversion_counts

#: order in which occ3_all reports the six size-3 patterns
PATTERNS3 = (
    Permutation((1, 2, 3)),
    Permutation((1, 3, 2)),
    Permutation((2, 1, 3)),
    Permutation((2, 3, 1)),
    Permutation((3, 1, 2)),
    Permutation((3, 2, 1)),
)

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class PatternCount:
    pattern: Permutation
    count: int


def inv(p: Permutation) -> int:
    """Number of inversions of p; equals occ(21, p)."""
    return int(_kernels.inv_count(p.values))


def occ_bruteforce(pi: Permutation, p: Permutation, budget: int = 10**9) -> int:
    """Exact occurrence count by subset enumeration with pruning.

    A partial index tuple is abandoned as soon as the relative order of
    its values stops matching the prefix of pi. Raises BudgetExceeded if
    C(n, r) or the number of expanded partial tuples passes `budget`.
    """
    r, n = pi.size, p.size
    if r > n:
        return 0
    if math.comb(n, r) > budget:
        raise BudgetExceeded(f"C({n},{r}) exceeds enumeration budget {budget}")
    piv = pi.values
    pv = p.values
    # rank of the t-th pattern value among the first t pattern values
    pref_rank = [int(np.sum(piv[: t + 1] <= piv[t])) for t in range(r)]

    expanded = 0
    count = 0
    chosen_vals: list[int] = []
    # stack of position iterators, depth-first
    stack = [iter(range(n - r + 1))]
    while stack:
        t = len(stack) - 1
        it = stack[-1]
        advanced = False
        for i in it:
            expanded += 1
            if expanded > budget:
                raise BudgetExceeded(f"enumeration exceeded budget {budget}")
            v = pv[i]
            rank = 1 + sum(1 for w in chosen_vals if w < v)
            if rank != pref_rank[t]:
                continue
            if t + 1 == r:
                count += 1
                continue
            chosen_vals.append(v)
            stack.append(iter(range(i + 1, n - (r - t - 2))))
            advanced = True
            break
        if not advanced:
            stack.pop()
            if chosen_vals:
                chosen_vals.pop()
    return count


def occ3_all(p: Permutation) -> tuple[PatternCount, ...]:
    """Counts of all six size-3 patterns, order (123,132,213,231,312,321)."""
    n = p.size
    if n < 3:
        return tuple(PatternCount(pi, 0) for pi in PATTERNS3)
    if math.comb(n, 3) >= _INT64_SAFE:
        raise BudgetExceeded("size-3 counts would overflow the int64 fast path")
    counts = occ3_counts(p.values)
    return tuple(PatternCount(pi, int(c)) for pi, c in zip(PATTERNS3, counts))


def occ3_counts(values: np.ndarray, lcnt: np.ndarray | None = None) -> np.ndarray:
    """int64 array of the six size-3 counts; lcnt may be supplied if known."""
    if lcnt is None:
        lcnt = _kernels.left_counts(values)
    rcnt = _kernels.right_counts(values)
    return _kernels.occ3_combine(values, lcnt, rcnt)


def occ_increasing(r: int, p: Permutation) -> int:
    """Number of increasing subsequences of length r (occ of the identity)."""
    n = p.size
    if not 1 <= r <= n:
        raise PreconditionViolated(f"need 1 <= r <= {n}, got {r}")
    if r == 1:
        return n
    if max(math.comb(n, k) for k in range(1, r + 1)) < _INT64_SAFE:
        return int(_kernels.occ_increasing_i64(p.values, r))
    # big-integer fallback: same layered DP with Python ints
    vals = p.values
    layer = [1] * n
    for _ in range(2, r + 1):
        tree = FenwickTree(n)
        nxt = [0] * n
        for j in range(n):
            v = int(vals[j])
            nxt[j] = tree.prefix_sum(v - 1)
            tree.add(v, layer[j])
        layer = nxt
    return sum(layer)


def occ(pi: Permutation, p: Permutation, budget: int = 10**9) -> int:
    """Exact occ(pi, p) through the cheapest applicable exact route."""
    r = pi.size
    if r > p.size:
        return 0
    if r == 1:
        return p.size
    if r == 2:
        iv = inv(p)
        return iv if pi.as_tuple() == (2, 1) else math.comb(p.size, 2) - iv
    if tuple(pi.values) == tuple(range(1, r + 1)):
        return occ_increasing(r, p)
    if r == 3:
        for pc in occ3_all(p):
            if pc.pattern == pi:
                return pc.count
    return occ_bruteforce(pi, p, budget=budget)


def occ_blockwise(pi_blocks: Sequence[Permutation], blocks: Sequence[Permutation]) -> int:
    """Ordered-blocks occurrence count over a direct-sum decomposition.

    Counts index sets that pick each pattern block inside a distinct
    source block, in increasing block order:
    sum over k_1 < ... < k_d of prod_j occ(pi_j, B_{k_j}), evaluated by a
    d-stage prefix dynamic program in O(K * d) after per-block counts.
    This undercounts occ(pi, direct_sum(blocks)) by occurrences that
    straddle or share blocks.
    """
    d = len(pi_blocks)
    if d == 0:
        raise PreconditionViolated("need at least one pattern block")
    acc = [0] * (d + 1)
    acc[0] = 1
    per_block_cache: dict[tuple[int, ...], list[int]] = {}
    for blk in blocks:
        key = blk.as_tuple()
        counts = per_block_cache.get(key)
        if counts is None:
            counts = [occ(pj, blk) for pj in pi_blocks]
            per_block_cache[key] = counts
        for j in range(d, 0, -1):
            c = counts[j - 1]
            if c:
                acc[j] += acc[j - 1] * c
    return acc[d]


def occ_swap_delta_bound(pi: Permutation, p: Permutation, p_prime: Permutation) -> int:
    """Certified bound 2 * (inv(p') - inv(p)) * n^(r-1) on |occ(pi,p) - occ(pi,p')|.

    Requires the right inversion counts of p to be dominated componentwise
    by those of p'; then p' is reachable from p by inv(p') - inv(p) single
    value swaps, each moving at most 2 * n^(r-1) occurrences.
    """
    if p.size != p_prime.size:
        raise PreconditionViolated("p and p' must have equal size")
    r1 = inversion_counts(p, Side.RIGHT).counts
    r2 = inversion_counts(p_prime, Side.RIGHT).counts
    if np.any(r1 > r2):
        raise PreconditionViolated("right counts of p must be dominated by those of p'")
    n, r = p.size, pi.size
    return 2 * int(np.sum(r2 - r1)) * n ** (r - 1)

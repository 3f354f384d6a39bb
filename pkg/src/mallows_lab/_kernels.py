"""Sequential array kernels behind the permutation and block machinery.

Every function here works on plain int64 numpy arrays with 0-based
positions and 1-based values, and is written in the numba-compilable
subset of Python. When numba is importable the kernels are jitted (and
cached on disk); otherwise the pure-Python versions run unchanged, just
slower. Public modules wrap these with validation and nicer types.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def decode_select(r, m):
    """Values of the insertion procedure: v[k] = (r[k]+1)-st unused in [1..m].

    Fenwick tree over the universe [1..m] initialized with all-ones
    frequencies (tree[i] = i & -i), with a bit-descending select. Callers
    guarantee r[k] + 1 never exceeds the number of unused values.
    """
    n = r.shape[0]
    tree = np.empty(m + 1, np.int64)
    tree[0] = 0
    for i in range(1, m + 1):
        tree[i] = i & (-i)
    top = 1
    while top * 2 <= m:
        top *= 2
    out = np.empty(n, np.int64)
    for k in range(n):
        remaining = r[k] + 1
        pos = 0
        step = top
        while step > 0:
            nxt = pos + step
            if nxt <= m and tree[nxt] < remaining:
                pos = nxt
                remaining -= tree[nxt]
            step >>= 1
        v = pos + 1
        out[k] = v
        i = v
        while i <= m:
            tree[i] -= 1
            i += i & (-i)
    return out


@njit(cache=True)
def left_counts(values):
    """l[i] = number of j < i with values[j] > values[i]."""
    n = values.shape[0]
    tree = np.zeros(n + 1, np.int64)
    out = np.empty(n, np.int64)
    for i in range(n):
        v = values[i]
        s = 0
        j = v
        while j > 0:
            s += tree[j]
            j -= j & (-j)
        out[i] = i - s
        j = v
        while j <= n:
            tree[j] += 1
            j += j & (-j)
    return out


@njit(cache=True)
def right_counts(values):
    """r[i] = number of j > i with values[j] < values[i]."""
    n = values.shape[0]
    tree = np.zeros(n + 1, np.int64)
    out = np.empty(n, np.int64)
    for i in range(n - 1, -1, -1):
        v = values[i]
        s = 0
        j = v - 1
        while j > 0:
            s += tree[j]
            j -= j & (-j)
        out[i] = s
        j = v
        while j <= n:
            tree[j] += 1
            j += j & (-j)
    return out


@njit(cache=True)
def inv_count(values):
    """Total number of inversions, via a Fenwick pass."""
    n = values.shape[0]
    tree = np.zeros(n + 1, np.int64)
    total = np.int64(0)
    for i in range(n):
        v = values[i]
        s = 0
        j = v
        while j > 0:
            s += tree[j]
            j -= j & (-j)
        total += i - s
        j = v
        while j <= n:
            tree[j] += 1
            j += j & (-j)
    return total


@njit(cache=True)
def occ_increasing_i64(values, r):
    """Number of increasing subsequences of length r (int64 arithmetic).

    Layered dynamic program: layer t holds, per position, the number of
    increasing subsequences of length t ending there; each layer is one
    Fenwick pass over values. Caller guarantees no int64 overflow.
    """
    n = values.shape[0]
    f = np.ones(n, np.int64)
    for _layer in range(2, r + 1):
        tree = np.zeros(n + 1, np.int64)
        g = np.empty(n, np.int64)
        for j in range(n):
            v = values[j]
            s = np.int64(0)
            idx = v - 1
            while idx > 0:
                s += tree[idx]
                idx -= idx & (-idx)
            g[j] = s
            idx = v
            while idx <= n:
                tree[idx] += f[j]
                idx += idx & (-idx)
        f = g
    total = np.int64(0)
    for j in range(n):
        total += f[j]
    return total


@njit(cache=True)
def block_boundaries(r):
    """End positions (1-based, exclusive) of complete blocks in a
    right-inversion stream: position m closes a block iff
    max_{i<=m}(i + r_i) == m."""
    n = r.shape[0]
    ends = np.empty(n, np.int64)
    nb = 0
    runmax = np.int64(0)
    for i in range(n):
        t = (i + 1) + r[i]
        if t > runmax:
            runmax = t
        if runmax == i + 1:
            ends[nb] = i + 1
            nb += 1
    return ends[:nb]


@njit(cache=True)
def block_chunk_stats(r):
    """Per-block statistics for every complete block in a stream chunk.

    Returns (consumed, sizes, invs, occ231, occ312, occ321): `consumed`
    is the stream length covered by complete blocks; the trailing
    incomplete block is ignored. Size-3 pattern counts come from the
    decoded block via the left/right smaller/larger per-position counts.
    """
    ends = block_boundaries(r)
    nb = ends.shape[0]
    sizes = np.empty(nb, np.int64)
    invs = np.empty(nb, np.int64)
    occ231 = np.empty(nb, np.int64)
    occ312 = np.empty(nb, np.int64)
    occ321 = np.empty(nb, np.int64)
    maxm = np.int64(1)
    start = np.int64(0)
    for b in range(nb):
        m = ends[b] - start
        if m > maxm:
            maxm = m
        start = ends[b]
    used = np.zeros(maxm + 1, np.uint8)
    start = np.int64(0)
    for b in range(nb):
        end = ends[b]
        m = end - start
        sizes[b] = m
        s_inv = np.int64(0)
        for i in range(start, end):
            s_inv += r[i]
        invs[b] = s_inv
        if m < 3:
            occ231[b] = 0
            occ312[b] = 0
            occ321[b] = 0
        else:
            for v in range(1, m + 1):
                used[v] = 0
            o321 = np.int64(0)
            o231p = np.int64(0)  # sum C(larger-before, 2)
            o312p = np.int64(0)  # sum C(smaller-after, 2)
            for j in range(m):
                need = r[start + j] + 1
                cnt = 0
                v = 0
                for vv in range(1, m + 1):
                    if used[vv] == 0:
                        cnt += 1
                        if cnt == need:
                            v = vv
                            break
                used[v] = 1
                c = r[start + j]          # smaller values after j (block complete)
                a = v - 1 - c             # smaller values before j
                bb = j - a                # larger values before j
                o321 += bb * c
                o312p += (c * (c - 1)) // 2
                o231p += (bb * (bb - 1)) // 2
            occ321[b] = o321
            occ312[b] = o312p - o321
            occ231[b] = o231p - o321
        start = end
    consumed = np.int64(0)
    if nb > 0:
        consumed = ends[nb - 1]
    return consumed, sizes, invs, occ231, occ312, occ321


@njit(cache=True)
def occ3_combine(values, lcnt, rcnt):
    """All six size-3 pattern counts from per-position pair statistics.

    For each position: a = smaller-before, b = larger-before,
    c = smaller-after, d = larger-after. Using the middle element,
    occ(123) = sum a*d and occ(321) = sum b*c; the other four follow by
    classifying triples by their extreme element:
    sum C(d,2) = occ(123)+occ(132), sum C(a,2) = occ(123)+occ(213),
    sum C(b,2) = occ(231)+occ(321), sum C(c,2) = occ(312)+occ(321).
    Returns counts in the order (123, 132, 213, 231, 312, 321).
    """
    n = values.shape[0]
    o123 = np.int64(0)
    o321 = np.int64(0)
    sa = np.int64(0)
    sb = np.int64(0)
    sc = np.int64(0)
    sd = np.int64(0)
    for j in range(n):
        b = lcnt[j]
        a = j - b
        c = rcnt[j]
        d = (n - 1 - j) - c
        o123 += a * d
        o321 += b * c
        sa += (a * (a - 1)) // 2
        sb += (b * (b - 1)) // 2
        sc += (c * (c - 1)) // 2
        sd += (d * (d - 1)) // 2
    out = np.empty(6, np.int64)
    out[0] = o123
    out[1] = sd - o123
    out[2] = sa - o123
    out[3] = sb - o321
    out[4] = sc - o321
    out[5] = o321
    return out


@njit(cache=True)
def decode_right_rows(r_rows):
    """Row-wise finite insertion decode: one permutation per row."""
    reps, n = r_rows.shape
    out = np.empty((reps, n), np.int64)
    for i in range(reps):
        out[i] = decode_select(r_rows[i], n)
    return out


@njit(cache=True)
def decode_prefix_rows(r_rows):
    """Row-wise unbounded insertion decode (values may exceed n)."""
    reps, n = r_rows.shape
    out = np.empty((reps, n), np.int64)
    for i in range(reps):
        mx = np.int64(0)
        for j in range(n):
            if r_rows[i, j] > mx:
                mx = r_rows[i, j]
        out[i] = decode_select(r_rows[i], n + mx)
    return out


@njit(cache=True)
def block_sum_rows(r_rows):
    """Batch reassembly of block-sum samples from right-inversion rows.

    For each row: cut complete blocks at the running-max boundaries,
    decode each block on its own universe [1..M], decode the remainder by
    the unbounded insertion and rank-reduce it, then concatenate with
    value shifts. Returns (values_rows, block_counts).
    """
    reps, n = r_rows.shape
    out = np.empty((reps, n), np.int64)
    kn = np.empty(reps, np.int64)
    for row in range(reps):
        r = r_rows[row]
        ends = block_boundaries(r)
        nb = ends.shape[0]
        kn[row] = nb
        start = np.int64(0)
        for b in range(nb):
            end = ends[b]
            vals = decode_select(r[start:end], end - start)
            for i in range(end - start):
                out[row, start + i] = vals[i] + start
            start = end
        if start < n:
            length = n - start
            maxr = np.int64(0)
            for i in range(start, n):
                if r[i] > maxr:
                    maxr = r[i]
            vals = decode_select(r[start:n], length + maxr)
            # rank-reduce the remainder, then shift above the blocks
            order = np.argsort(vals)
            for rank in range(length):
                out[row, start + order[rank]] = rank + 1 + start
    return out, kn

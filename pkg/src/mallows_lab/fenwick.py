"""Fenwick (binary indexed) tree with prefix sums and order-statistic select.

This is the pure-Python reference structure; the hot loops in
``_kernels`` re-implement the same logic over raw arrays for speed.
Values may be Python ints, so cumulative counts never overflow.
"""

from __future__ import annotations


class FenwickTree:
    """Cumulative frequency table over indices 1..size."""

    def __init__(self, size: int):
        if size <= 0:
            raise ValueError("size must be positive")
        self.size = size
        self._tree = [0] * (size + 1)
        # Highest power of two <= size, used by select().
        self._top = 1 << (size.bit_length() - 1)

    @classmethod
    def ones(cls, size: int) -> "FenwickTree":
        """Tree with frequency 1 at every index (built in O(size))."""
        t = cls(size)
        for i in range(1, size + 1):
            t._tree[i] += 1
            parent = i + (i & -i)
            if parent <= size:
                t._tree[parent] += t._tree[i]
        return t

    def add(self, index: int, delta) -> None:
        """Add delta to the frequency at index (1-based)."""
        while index <= self.size:
            self._tree[index] += delta
            index += index & -index

    def prefix_sum(self, index: int):
        """Sum of frequencies over 1..index; 0 when index <= 0."""
        total = 0
        index = min(index, self.size)
        while index > 0:
            total += self._tree[index]
            index -= index & -index
        return total

    def select(self, k: int) -> int:
        """Smallest index whose cumulative frequency is >= k (k >= 1).

        Assumes nonnegative frequencies and k <= total frequency.
        """
        pos = 0
        remaining = k
        step = self._top
        while step > 0:
            nxt = pos + step
            if nxt <= self.size and self._tree[nxt] < remaining:
                pos = nxt
                remaining -= self._tree[nxt]
            step >>= 1
        return pos + 1

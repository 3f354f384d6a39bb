"""Closed forms for the inversion number of a Mallows permutation.

Exact mean and variance come from the independent truncated-geometric
representation of the left inversion counts:

    E inv = (n-1) q/(1-q) - sum_{j=2}^{n} j q^j / (1-q^j)
    Var inv = (n-1) q/(1-q)^2 - sum_{j=2}^{n} j^2 q^j / (1-q^j)^2

The two terms cancel catastrophically as q -> 1, so the series are
evaluated in mpmath extended precision. The leading-order expressions
n^2/4 - (1-q) n^3/36 and n^3/36 cover the regime n(1-q) -> 0.
"""

from __future__ import annotations

import mpmath

from .errors import DomainError

_DPS = 50


def _check(n: int, q: float) -> None:
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 < q <= 1.0:
        raise DomainError(f"q={q} outside (0, 1]")


def inv_mean_exact(n: int, q: float) -> float:
    """Exact E[inv] for Mallows(n, q); q = 1 gives the uniform n(n-1)/4."""
    _check(n, q)
    if q == 1.0:
        return n * (n - 1) / 4.0
    with mpmath.workdps(_DPS):
        qm = mpmath.mpf(q)
        total = (n - 1) * qm / (1 - qm)
        qj = qm
        for j in range(2, n + 1):
            qj *= qm
            total -= j * qj / (1 - qj)
        return float(total)


def inv_var_exact(n: int, q: float) -> float:
    """Exact Var[inv] for Mallows(n, q); q = 1 gives n(n-1)(2n+5)/72."""
    _check(n, q)
    if q == 1.0:
        return n * (n - 1) * (2 * n + 5) / 72.0
    with mpmath.workdps(_DPS):
        qm = mpmath.mpf(q)
        total = (n - 1) * qm / (1 - qm) ** 2
        qj = qm
        for j in range(2, n + 1):
            qj *= qm
            total -= j * j * qj / (1 - qj) ** 2
        return float(total)


def inv_asymptotics(n: int, q: float) -> tuple[float, float]:
    """Leading-order (mean, variance) of inv when n(1-q) is small:
    (n^2/4 - (1-q) n^3/36, n^3/36)."""
    eps = 1.0 - q
    return n * n / 4.0 - eps * n**3 / 36.0, n**3 / 36.0

"""Streaming moment accumulation and normality diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .errors import InsufficientSamples


@dataclass
class MomentAccumulator:
    """Power sums up to order four, merged order-independently.

    Sums are kept in extended precision (long double) and added in a
    fixed order (chunk partial sums, then merge), so integer-valued
    inputs accumulate exactly and merges are bit-stable.
    """

    count: int = 0
    s1: np.longdouble = field(default_factory=lambda: np.longdouble(0))
    s2: np.longdouble = field(default_factory=lambda: np.longdouble(0))
    s3: np.longdouble = field(default_factory=lambda: np.longdouble(0))
    s4: np.longdouble = field(default_factory=lambda: np.longdouble(0))

    def update(self, samples) -> "MomentAccumulator":
        x = np.asarray(samples, dtype=np.longdouble).ravel()
        self.count += x.size
        self.s1 += x.sum()
        x2 = x * x
        self.s2 += x2.sum()
        self.s3 += (x2 * x).sum()
        self.s4 += (x2 * x2).sum()
        return self

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        out = MomentAccumulator(self.count + other.count)
        out.s1 = self.s1 + other.s1
        out.s2 = self.s2 + other.s2
        out.s3 = self.s3 + other.s3
        out.s4 = self.s4 + other.s4
        return out

    # central moments ----------------------------------------------------
    def mean(self) -> float:
        self._need(1)
        return float(self.s1 / self.count)

    def variance(self) -> float:
        """Unbiased (ddof=1) sample variance."""
        self._need(2)
        n = self.count
        m = self.s1 / n
        return float((self.s2 - n * m * m) / (n - 1))

    def central_moment(self, k: int) -> float:
        self._need(2)
        n = np.longdouble(self.count)
        m = self.s1 / n
        if k == 2:
            return float(self.s2 / n - m * m)
        if k == 3:
            return float(self.s3 / n - 3 * m * self.s2 / n + 2 * m**3)
        if k == 4:
            return float(self.s4 / n - 4 * m * self.s3 / n + 6 * m * m * self.s2 / n - 3 * m**4)
        raise ValueError("central moments available for k in {2, 3, 4}")

    def skewness(self) -> float:
        m2 = self.central_moment(2)
        return self.central_moment(3) / m2**1.5 if m2 > 0 else math.nan

    def excess_kurtosis(self) -> float:
        m2 = self.central_moment(2)
        return self.central_moment(4) / (m2 * m2) - 3.0 if m2 > 0 else math.nan

    def _need(self, k: int) -> None:
        if self.count < k:
            raise InsufficientSamples(f"need at least {k} samples, have {self.count}")


@dataclass
class CrossMomentAccumulator:
    """First and second mixed moments of fixed-length sample vectors."""

    dim: int
    count: int = 0
    s1: np.ndarray = None  # (dim,), long double
    s2: np.ndarray = None  # (dim, dim), long double

    def __post_init__(self):
        if self.s1 is None:
            self.s1 = np.zeros(self.dim, dtype=np.longdouble)
        if self.s2 is None:
            self.s2 = np.zeros((self.dim, self.dim), dtype=np.longdouble)

    def update(self, rows) -> "CrossMomentAccumulator":
        x = np.asarray(rows, dtype=np.longdouble)
        if x.ndim == 1:
            x = x[None, :]
        self.count += x.shape[0]
        self.s1 += x.sum(axis=0)
        self.s2 += x.T @ x
        return self

    def merge(self, other: "CrossMomentAccumulator") -> "CrossMomentAccumulator":
        out = CrossMomentAccumulator(self.dim, self.count + other.count)
        out.s1 = self.s1 + other.s1
        out.s2 = self.s2 + other.s2
        return out

    def mean(self) -> np.ndarray:
        if self.count < 1:
            raise InsufficientSamples("empty accumulator")
        return np.asarray(self.s1 / self.count, dtype=np.float64)

    def covariance(self) -> np.ndarray:
        """Unbiased (ddof=1) covariance matrix."""
        if self.count < 2:
            raise InsufficientSamples("need at least two samples")
        n = self.count
        m = self.s1 / n
        cov = (self.s2 - n * np.outer(m, m)) / (n - 1)
        return np.asarray(cov, dtype=np.float64)


@dataclass(frozen=True)
class CltDiagnostics:
    skewness: float
    excess_kurtosis: float
    ks_statistic: float
    count: int
    degenerate: bool

    def passes(
        self, skew_tol: float = 0.1, kurt_tol: float = 0.2, ks_factor: float = 1.5
    ) -> bool:
        """Default acceptance thresholds: |skew| < 0.1, |ex.kurt| < 0.2,
        KS < ks_factor / sqrt(count)."""
        if self.degenerate:
            return False
        return (
            abs(self.skewness) < skew_tol
            and abs(self.excess_kurtosis) < kurt_tol
            and self.ks_statistic < ks_factor / math.sqrt(self.count)
        )


def clt_diagnostics(samples) -> CltDiagnostics:
    """Standardized moments and a KS distance against the fitted normal."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < 100:
        raise InsufficientSamples(f"need at least 100 samples, have {x.size}")
    sd = x.std(ddof=1)
    if sd == 0.0:
        return CltDiagnostics(math.nan, math.nan, math.nan, x.size, degenerate=True)
    acc = MomentAccumulator().update(x)
    ks = scipy.stats.kstest(x, "norm", args=(x.mean(), sd)).statistic
    return CltDiagnostics(acc.skewness(), acc.excess_kurtosis(), float(ks), x.size, False)

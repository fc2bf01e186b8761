"""Frozen per-column summaries that scale numeric distances.

All scaling constants (range, IQR, kernel bandwidth, neighbourhood radii) are
computed once from a declared reference sample and then reused for every pair,
so distances stay comparable across pairs and across processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Column, DataError, Kind

__all__ = [
    "ColumnStats",
    "compute_stats",
    "silverman_bandwidth",
    "default_k",
    "knn_threshold",
]


@dataclass(frozen=True)
class ColumnStats:
    """Summary of the observed values of one numeric column.

    Quantiles use linear interpolation between order statistics (the
    ``numpy.quantile`` default); ``sd`` is the n-1 denominator estimate, 0.0
    for a single observation.  ``sorted_values`` keeps the observed sample in
    ascending order for neighbourhood queries.
    """

    n: int
    vmin: float
    vmax: float
    vrange: float
    q25: float
    q75: float
    iqr: float
    sd: float
    mean: float
    sorted_values: np.ndarray

    def __post_init__(self) -> None:
        sv = np.asarray(self.sorted_values, dtype=np.float64)
        sv.setflags(write=False)
        object.__setattr__(self, "sorted_values", sv)


def compute_stats(values: Column | np.ndarray) -> ColumnStats:
    """Stats over the observed cells of a numeric column (or raw array).

    Raw arrays may contain ``nan`` for missing.  Errors if nothing is observed.
    """
    if isinstance(values, Column):
        if values.kind.kind is not Kind.NUMERIC:
            raise DataError(f"column {values.name!r} is not numeric")
        arr = values.values[~values.missing]
    else:
        arr = np.asarray(values, dtype=np.float64)
        arr = arr[~np.isnan(arr)]
    if arr.size == 0:
        raise DataError("no observed values to summarise")
    sv = np.sort(arr)
    n = int(sv.size)
    q25, q75 = (float(q) for q in np.quantile(sv, [0.25, 0.75]))
    sd = float(np.std(sv, ddof=1)) if n > 1 else 0.0
    return ColumnStats(
        n=n,
        vmin=float(sv[0]),
        vmax=float(sv[-1]),
        vrange=float(sv[-1] - sv[0]),
        q25=q25,
        q75=q75,
        iqr=q75 - q25,
        sd=sd,
        mean=float(np.mean(sv)),
        sorted_values=sv,
    )


def silverman_bandwidth(stats: ColumnStats, c: float = 1.06) -> float:
    """Rule-of-thumb kernel bandwidth ``c * n^(-1/5) * min(sd, IQR/1.34)``.

    When exactly one of sd and IQR/1.34 is zero the other is used, so a heavy
    central tie or a tiny sample does not force the bandwidth to zero; if both
    are zero the bandwidth is zero.  Needs at least two observations.
    """
    if c <= 0:
        raise ValueError(f"bandwidth factor must be positive, got {c}")
    if stats.n < 2:
        raise DataError("bandwidth needs at least two observed values")
    a, b = stats.sd, stats.iqr / 1.34
    if a == 0.0 and b == 0.0:
        base = 0.0
    elif a == 0.0 or b == 0.0:
        base = a + b
    else:
        base = min(a, b)
    return c * stats.n ** (-0.2) * base


def default_k(n: int) -> int:
    """Neighbourhood size ``round(sqrt(n))`` clamped to ``[1, n - 1]``."""
    if n < 1:
        raise ValueError(f"need at least one value, got n={n}")
    if n == 1:
        return 1
    return max(1, min(int(round(math.sqrt(n))), n - 1))


def knn_threshold(stats: ColumnStats, x: float, k: int) -> float:
    """Distance from ``x`` to its k-th nearest value in the reference sample.

    When ``x`` itself occurs in the sample, one occurrence is set aside so a
    point is never its own neighbour.  Equidistant values count once each, in
    value order, which makes the result independent of input ordering.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sv = stats.sorted_values
    n = sv.size
    i = int(np.searchsorted(sv, x, side="left"))
    skip = i if i < n and sv[i] == x else -1  # one self-occurrence excluded
    avail = n - (1 if skip >= 0 else 0)
    if avail < k:
        raise DataError(f"need {k} neighbours but only {avail} candidates")

    # two-pointer walk outward from the insertion point, skipping the
    # excluded occurrence; lo/hi are the next candidates on each side
    lo, hi = i - 1, i
    if hi == skip:
        hi += 1
    last = 0.0
    for _ in range(k):
        dlo = x - sv[lo] if lo >= 0 else math.inf
        dhi = sv[hi] - x if hi < n else math.inf
        if dlo <= dhi:
            last = dlo
            lo -= 1
            if lo == skip:
                lo -= 1
        else:
            last = dhi
            hi += 1
            if hi == skip:
                hi += 1
    return float(last)

"""Per-variable distance contributions on the [0, 1] scale.

Every function returns a :class:`Contribution` ``(d, delta)``.  ``delta`` is 1
when the pair is informative for that variable and 0 when it must be skipped:
either cell missing, or an asymmetric binary pair with both cells 0.  When
``delta`` is 0 the reported ``d`` is 0 by convention and never enters any sum.

Numeric distances start from ``a = |x_i - x_j|`` and differ in how ``a`` is
scaled and where it is cut off:

* standard:     ``a / range``, capped at 1,
* iqr_capped:   ``a / IQR`` while ``a < IQR``, else 1,
* kde_window:   0 up to a kernel bandwidth ``h``, 1 from the scale divisor
                ``g`` on, linear ``a / g`` in between,
* knn_window:   like kde_window but the dead zone is the distance to the
                k-th nearest reference value of ``x_i`` (of either point when
                symmetrised).

``g`` is the range or the IQR of the reference sample, per configuration.
A zero divisor degenerates the pair to 0 when ``a`` is 0 and 1 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .colstats import ColumnStats, knn_threshold
from .dataset import DataError

__all__ = [
    "Contribution",
    "Scaling",
    "Variant",
    "NumericMethod",
    "OrdinalPolicy",
    "OrdinalScale",
    "dist_binary_symmetric",
    "dist_binary_asymmetric",
    "dist_nominal",
    "dist_ordinal",
    "dist_numeric",
    "numeric_kernel",
]


class Contribution(NamedTuple):
    d: float
    delta: int


_SKIP = Contribution(0.0, 0)


class Scaling(str, Enum):
    """Divisor used by the numeric distance: total range or IQR."""

    RANGE = "range"
    IQR = "iqr"


class Variant(str, Enum):
    STANDARD = "standard"
    IQR_CAPPED = "iqr_capped"
    KDE_WINDOW = "kde_window"
    KNN_WINDOW = "knn_window"


@dataclass(frozen=True)
class NumericMethod:
    """Numeric distance variant plus its parameters.

    ``standard`` always scales by the range and ``iqr_capped`` by the IQR;
    the window variants take either, via ``scaling``.  ``c`` is the bandwidth
    factor for kde_window.  ``k`` is the neighbourhood size for knn_window;
    leave it None to use the square-root rule at evaluation time.
    ``symmetric_knn`` widens the knn dead zone to either point's
    neighbourhood, restoring symmetry at the cost of the directional reading.
    """

    variant: Variant = Variant.STANDARD
    scaling: Scaling = Scaling.RANGE
    c: float = 1.06
    k: int | None = None
    symmetric_knn: bool = False

    def __post_init__(self) -> None:
        if self.variant is Variant.STANDARD and self.scaling is not Scaling.RANGE:
            raise ValueError("standard scaling is always by range")
        if self.variant is Variant.IQR_CAPPED and self.scaling is not Scaling.IQR:
            raise ValueError("iqr_capped scaling is always by IQR")
        if self.c <= 0:
            raise ValueError(f"bandwidth factor must be positive, got {self.c}")
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")

    @classmethod
    def standard(cls) -> "NumericMethod":
        return cls(Variant.STANDARD, Scaling.RANGE)

    @classmethod
    def iqr_capped(cls) -> "NumericMethod":
        return cls(Variant.IQR_CAPPED, Scaling.IQR)

    @classmethod
    def kde(cls, c: float = 1.06, scaling: Scaling = Scaling.RANGE) -> "NumericMethod":
        return cls(Variant.KDE_WINDOW, scaling, c=c)

    @classmethod
    def knn(
        cls,
        k: int | None = None,
        scaling: Scaling = Scaling.RANGE,
        symmetric: bool = False,
    ) -> "NumericMethod":
        return cls(Variant.KNN_WINDOW, scaling, k=k, symmetric_knn=symmetric)

    def divisor(self, stats: ColumnStats) -> float:
        return stats.vrange if self.scaling is Scaling.RANGE else stats.iqr


class OrdinalPolicy(str, Enum):
    """How ordinal categories become numbers before taking distances.

    ``ratio`` spreads the declared categories evenly over [0, 1];
    ``midrank`` ranks the observed cells and scales rank differences by the
    observed rank spread, so the spacing follows the data.
    """

    RATIO = "ratio"
    MIDRANK = "midrank"


@dataclass(frozen=True)
class OrdinalScale:
    """Per-category scores for one ordinal column under one policy.

    ``score[c]`` is the transformed value of category code ``c`` (nan when the
    policy cannot place the category, e.g. a midrank for an unseen category);
    ``spread`` is the divisor applied to score differences (1.0 for ratio
    scores, observed midrank spread for midranks).
    """

    score: np.ndarray
    spread: float

    def __post_init__(self) -> None:
        s = np.asarray(self.score, dtype=np.float64)
        s.setflags(write=False)
        object.__setattr__(self, "score", s)


def dist_binary_symmetric(x_i: object, x_j: object) -> Contribution:
    """Simple matching on 0/1: equal -> 0, unequal -> 1."""
    if x_i is None or x_j is None:
        return _SKIP
    return Contribution(0.0 if x_i == x_j else 1.0, 1)


def dist_binary_asymmetric(x_i: object, x_j: object) -> Contribution:
    """Like simple matching, but a double absence (0, 0) is uninformative."""
    if x_i is None or x_j is None:
        return _SKIP
    zero = (0, 0.0, "0")
    if x_i in zero and x_j in zero:
        return _SKIP
    return Contribution(0.0 if x_i == x_j else 1.0, 1)


def dist_nominal(x_i: object, x_j: object) -> Contribution:
    """Simple matching on category labels."""
    if x_i is None or x_j is None:
        return _SKIP
    return Contribution(0.0 if x_i == x_j else 1.0, 1)


def dist_ordinal(x_i: int | None, x_j: int | None, scale: OrdinalScale) -> Contribution:
    """Absolute score difference over the scale's spread, for category codes.

    Skips the pair when either cell is missing, when the scale cannot place a
    code, or when the spread is zero (a single observed rank carries no
    ordering information).
    """
    if x_i is None or x_j is None:
        return _SKIP
    si, sj = scale.score[int(x_i)], scale.score[int(x_j)]
    if np.isnan(si) or np.isnan(sj) or scale.spread == 0.0:
        return _SKIP
    return Contribution(abs(si - sj) / scale.spread, 1)


def _numeric_scalar(
    a: float,
    variant: Variant,
    divisor: float,
    h: float,
    thr: float,
) -> float:
    if variant is Variant.STANDARD:
        return (0.0 if a == 0.0 else 1.0) if divisor == 0.0 else min(a / divisor, 1.0)
    if variant is Variant.IQR_CAPPED:
        return (0.0 if a == 0.0 else 1.0) if divisor == 0.0 else (a / divisor if a < divisor else 1.0)
    cut = h if variant is Variant.KDE_WINDOW else thr
    if a <= cut:
        return 0.0
    if a >= divisor:  # covers divisor == 0 (a > cut >= 0 there)
        return 1.0
    return a / divisor


def dist_numeric(
    x_i: float | None,
    x_j: float | None,
    method: NumericMethod,
    stats: ColumnStats,
    *,
    h: float | None = None,
    k: int | None = None,
) -> Contribution:
    """Scaled numeric distance between two cells under ``method``.

    ``stats`` is the frozen reference-sample summary supplying the divisor,
    the bandwidth inputs and the neighbourhood sample.  ``h`` overrides the
    computed kde bandwidth; ``k`` overrides the method's neighbourhood size.
    For knn_window the dead zone is evaluated around ``x_i`` (the first
    argument), or around both points when the method is symmetrised.
    """
    if x_i is None or x_j is None:
        return _SKIP
    xi, xj = float(x_i), float(x_j)
    if np.isnan(xi) or np.isnan(xj):
        return _SKIP
    a = abs(xi - xj)
    divisor = method.divisor(stats)
    thr = 0.0
    if method.variant is Variant.KDE_WINDOW:
        if h is None:
            from .colstats import silverman_bandwidth

            h = silverman_bandwidth(stats, method.c)
    elif method.variant is Variant.KNN_WINDOW:
        kk = k if k is not None else method.k
        if kk is None:
            from .colstats import default_k

            kk = default_k(stats.n)
        thr = knn_threshold(stats, xi, kk)
        if method.symmetric_knn:
            thr = max(thr, knn_threshold(stats, xj, kk))
    return Contribution(_numeric_scalar(a, method.variant, divisor, h or 0.0, thr), 1)


def numeric_kernel(
    a: np.ndarray,
    variant: Variant,
    divisor: float,
    h: float = 0.0,
    thr: np.ndarray | float = 0.0,
) -> np.ndarray:
    """Vectorised numeric distance for an array of absolute differences.

    ``thr`` may be scalar or broadcastable to ``a`` (per-pair knn radii).
    Entries where ``a`` is nan (a missing cell) produce unspecified values;
    callers must mask them out via their validity array.
    """
    a = np.asarray(a, dtype=np.float64)
    if variant is Variant.STANDARD:
        if divisor == 0.0:
            return (a != 0.0).astype(np.float64)
        return np.minimum(a / divisor, 1.0)
    if variant is Variant.IQR_CAPPED:
        if divisor == 0.0:
            return (a != 0.0).astype(np.float64)
        return np.where(a < divisor, a / divisor, 1.0)
    cut = h if variant is Variant.KDE_WINDOW else thr
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = a / divisor if divisor != 0.0 else np.full_like(a, np.inf)
    out = np.where(a >= divisor, 1.0, mid)
    return np.where(a <= cut, 0.0, out)

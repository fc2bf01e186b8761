"""Weighted Gower aggregation, conditional distances, matrices and matching.

The central object is :class:`PairwiseGower`: it freezes two datasets, a
:class:`DistanceConfig` and the per-column statistics, then serves distances
between any row of the first dataset and any row of the second.  Distances
are computed column-wise over blocks of rows, so the hot path is a handful of
numpy operations per column rather than a per-pair loop.

A pair's distance is the weighted mean of its per-variable contributions,
restricted to variables that are informative for that pair.  When no variable
is informative the distance is undefined; matrices report ``nan`` there and
matching treats it as infinitely far.

Conditional distances run in two stages: an unweighted categorical screen
that picks each recipient's donor pool (widening the agreement threshold
until the pool is non-empty), then an unweighted numeric-only distance inside
the pool, with everyone else pushed to the maximum distance of 1.
"""

from __future__ import annotations

import math
import multiprocessing as mp
from dataclasses import dataclass, field
from hashlib import blake2b
from typing import Literal, Mapping, Sequence

import numpy as np

from .colstats import ColumnStats, compute_stats, default_k, knn_threshold, silverman_bandwidth
from .dataset import Column, DataError, Dataset, Kind, dummy_encode
from .pervar import (
    NumericMethod,
    OrdinalPolicy,
    OrdinalScale,
    Scaling,
    Variant,
    numeric_kernel,
)
from .dataset import midranks_by_code

__all__ = [
    "DistanceConfig",
    "MatchResult",
    "PairwiseGower",
    "StatsFrom",
    "gower_distance",
    "distance_matrix",
    "top_n_matches",
    "DummyEquivalenceReport",
    "dummy_equivalence_report",
]

StatsFrom = Literal["union", "recipients", "donors"]

_BLOCK = 256  # rows per evaluation block; bounds transient memory


@dataclass(frozen=True)
class DistanceConfig:
    """What to compare and how.

    ``include`` restricts the distance to the named columns (None = all).
    ``weights`` maps column names to non-negative weights, default 1.0 each;
    scaling all weights by a common factor changes nothing.  The numeric
    method applies to every numeric column unless overridden per column, and
    likewise for the ordinal policy.

    With ``conditional`` the two-stage distance replaces plain aggregation:
    categorical columns drive donor-pool selection and numeric columns the
    final distance, scaled by range or IQR per ``conditional_scaling``.
    Both stages are unweighted, so explicit weights are rejected.  Ordinal
    columns sit on the categorical side unless ``ordinal_as_numeric`` moves
    them over.

    ``tie_seed`` feeds the tie-break order used when equally distant donors
    compete for the last match slot.
    """

    include: tuple[str, ...] | None = None
    weights: Mapping[str, float] = field(default_factory=dict)
    numeric_method: NumericMethod = field(default_factory=NumericMethod.standard)
    numeric_overrides: Mapping[str, NumericMethod] = field(default_factory=dict)
    ordinal_policy: OrdinalPolicy = OrdinalPolicy.RATIO
    ordinal_overrides: Mapping[str, OrdinalPolicy] = field(default_factory=dict)
    conditional: bool = False
    conditional_scaling: Scaling = Scaling.RANGE
    ordinal_as_numeric: bool = False
    tie_seed: int = 0

    def __post_init__(self) -> None:
        if self.include is not None and len(self.include) == 0:
            raise ValueError("include must name at least one column")
        for name, w in self.weights.items():
            if not (w >= 0):
                raise ValueError(f"weight for {name!r} must be >= 0, got {w}")
        if self.conditional and self.weights:
            raise ValueError("conditional distance is unweighted; do not pass weights")

    def method_for(self, name: str) -> NumericMethod:
        return self.numeric_overrides.get(name, self.numeric_method)

    def policy_for(self, name: str) -> OrdinalPolicy:
        return self.ordinal_overrides.get(name, self.ordinal_policy)


@dataclass(frozen=True)
class MatchResult:
    """Top-n donors per recipient, best first.

    ``indices[r, k]`` is the donor row of recipient r's k-th closest match
    and ``distances[r, k]`` its distance.  ``ties_at_cut[r]`` counts the
    equally distant donors that competed for the final slot(s) when a random
    selection among them was needed, else 0.
    """

    indices: np.ndarray
    distances: np.ndarray
    ties_at_cut: np.ndarray

    def __post_init__(self) -> None:
        if self.indices.shape != self.distances.shape:
            raise ValueError("indices and distances must have matching shapes")
        if self.ties_at_cut.shape != (self.indices.shape[0],):
            raise ValueError("ties_at_cut must have one entry per recipient")

    @property
    def n_recipients(self) -> int:
        return self.indices.shape[0]


# ---------------------------------------------------------------------------
# per-column evaluation plans


@dataclass
class _NumericPlan:
    a_vals: np.ndarray
    b_vals: np.ndarray
    method: NumericMethod
    divisor: float
    h: float
    k: int
    stats: ColumnStats
    b_thresholds: np.ndarray | None = None  # lazy, symmetric knn only

    def block(self, rows: np.ndarray, engine: "PairwiseGower") -> tuple[np.ndarray, np.ndarray]:
        xa = self.a_vals[rows]
        diff = np.abs(xa[:, None] - self.b_vals[None, :])
        valid = ~np.isnan(diff)
        thr: np.ndarray | float = 0.0
        if self.method.variant is Variant.KNN_WINDOW:
            ta = np.zeros(xa.shape[0])
            for r, x in enumerate(xa):
                if not np.isnan(x):
                    ta[r] = knn_threshold(self.stats, float(x), self.k)
            thr = ta[:, None]
            if self.method.symmetric_knn:
                if self.b_thresholds is None:
                    tb = np.zeros(self.b_vals.shape[0])
                    for j, x in enumerate(self.b_vals):
                        if not np.isnan(x):
                            tb[j] = knn_threshold(self.stats, float(x), self.k)
                    self.b_thresholds = tb
                thr = np.maximum(thr, self.b_thresholds[None, :])
        d = numeric_kernel(diff, self.method.variant, self.divisor, self.h, thr)
        return np.where(valid, d, 0.0), valid.astype(np.float64)


@dataclass
class _CategoricalPlan:
    a_codes: np.ndarray
    b_codes: np.ndarray
    asymmetric: bool

    def block(self, rows: np.ndarray, engine: "PairwiseGower") -> tuple[np.ndarray, np.ndarray]:
        ca = self.a_codes[rows][:, None]
        cb = self.b_codes[None, :]
        valid = (ca >= 0) & (cb >= 0)
        if self.asymmetric:
            valid &= ~((ca == 0) & (cb == 0))
        d = ((ca != cb) & valid).astype(np.float64)
        return d, valid.astype(np.float64)


@dataclass
class _OrdinalPlan:
    a_scores: np.ndarray
    b_scores: np.ndarray
    spread: float

    def block(self, rows: np.ndarray, engine: "PairwiseGower") -> tuple[np.ndarray, np.ndarray]:
        sa = self.a_scores[rows]
        diff = np.abs(sa[:, None] - self.b_scores[None, :])
        valid = ~np.isnan(diff)
        if self.spread == 0.0:
            return np.zeros_like(diff), np.zeros_like(diff)
        d = np.where(valid, diff / self.spread, 0.0)
        return d, valid.astype(np.float64)


def _scored(codes: np.ndarray, score: np.ndarray) -> np.ndarray:
    # codes use -1 for missing; an appended nan slot catches them
    padded = np.append(score, np.nan)
    return padded[codes]


class PairwiseGower:
    """Distance oracle between rows of ``a`` (recipients) and ``b`` (donors).

    All scaling statistics are resolved once at construction, from the rows
    named by ``stats_from`` ("union" pools both sides; a dataset compared
    with itself is pooled once) or from an explicit ``stats`` mapping, and
    never change afterwards.  Evaluation is pure, so rows can be computed in
    any order, by any number of processes, with identical results.
    """

    def __init__(
        self,
        a: Dataset,
        b: Dataset | None = None,
        config: DistanceConfig | None = None,
        *,
        stats: Mapping[str, ColumnStats] | None = None,
        stats_from: StatsFrom = "union",
    ) -> None:
        self._a = a
        self._b = a if b is None else b
        self._cfg = config or DistanceConfig()
        if stats_from not in ("union", "recipients", "donors"):
            raise ValueError(f"stats_from must be union/recipients/donors, got {stats_from!r}")
        if self._a.n_rows == 0 or self._b.n_rows == 0:
            raise DataError("both datasets need at least one row")
        self._names = self._resolve_columns()
        self._weights = self._resolve_weights()
        self._stats: dict[str, ColumnStats] = {}
        self._plans = {
            name: self._build_plan(name, stats, stats_from) for name in self._names
        }
        self._donor_bytes: list[bytes] | None = None
        if self._cfg.conditional:
            self._split_conditional()

    # -- construction helpers ------------------------------------------------

    def _resolve_columns(self) -> tuple[str, ...]:
        names = self._cfg.include if self._cfg.include is not None else self._a.names
        chosen = []
        for name in names:
            if name not in self._a or name not in self._b:
                raise DataError(f"column {name!r} not present on both sides")
            ka, kb = self._a.column(name).kind, self._b.column(name).kind
            if ka != kb:
                raise DataError(f"column {name!r} has different kinds on the two sides")
            chosen.append(name)
        return tuple(chosen)

    def _resolve_weights(self) -> dict[str, float]:
        unknown = set(self._cfg.weights) - set(self._names)
        if unknown:
            raise ValueError(f"weights for columns not in use: {sorted(unknown)}")
        w = {name: float(self._cfg.weights.get(name, 1.0)) for name in self._names}
        if all(v == 0.0 for v in w.values()):
            raise ValueError("all weights are zero")
        return w

    def _ref_rows(self, name: str, stats_from: StatsFrom) -> np.ndarray:
        ca, cb = self._a.column(name), self._b.column(name)
        if stats_from == "recipients":
            return ca.values[~ca.missing]
        if stats_from == "donors":
            return cb.values[~cb.missing]
        if self._b is self._a:
            return ca.values[~ca.missing]
        return np.concatenate([ca.values[~ca.missing], cb.values[~cb.missing]])

    def _build_plan(
        self,
        name: str,
        stats: Mapping[str, ColumnStats] | None,
        stats_from: StatsFrom,
    ):
        ca, cb = self._a.column(name), self._b.column(name)
        kind = ca.kind.kind
        if kind is Kind.NUMERIC:
            if stats is not None and name in stats:
                st = stats[name]
            else:
                pool = self._ref_rows(name, stats_from)
                if pool.size == 0:
                    raise DataError(f"column {name!r}: no observed values for statistics")
                st = compute_stats(pool)
            self._stats[name] = st
            method = self._cfg.method_for(name)
            if self._cfg.conditional:
                # the conditional final stage admits only the plain scaled
                # distance, by range or IQR
                method = (
                    NumericMethod.standard()
                    if self._cfg.conditional_scaling is Scaling.RANGE
                    else NumericMethod.iqr_capped()
                )
            h = 0.0
            if method.variant is Variant.KDE_WINDOW:
                h = silverman_bandwidth(st, method.c)
            k = method.k if method.k is not None else default_k(st.n)
            return _NumericPlan(
                ca.values, cb.values, method, method.divisor(st), h, k, st
            )
        if kind is Kind.ORDINAL:
            ncat = ca.kind.n_categories
            if self._cfg.policy_for(name) is OrdinalPolicy.RATIO:
                score = np.arange(ncat, dtype=np.float64) / (ncat - 1)
                spread = 1.0
            else:
                pool = self._ref_rows(name, stats_from).astype(np.int64)
                score = midranks_by_code(pool[pool >= 0], ncat)
                seen = score[~np.isnan(score)]
                spread = float(seen.max() - seen.min()) if seen.size else 0.0
            return _OrdinalPlan(_scored(ca.values, score), _scored(cb.values, score), spread)
        return _CategoricalPlan(ca.values, cb.values, kind is Kind.BINARY_ASYMMETRIC)

    def _split_conditional(self) -> None:
        cat, num = [], []
        for name in self._names:
            kind = self._a.column(name).kind.kind
            numeric_side = kind is Kind.NUMERIC or (
                kind is Kind.ORDINAL and self._cfg.ordinal_as_numeric
            )
            (num if numeric_side else cat).append(name)
        if not num:
            raise DataError("conditional distance needs at least one numeric column")
        if not cat:
            raise DataError("conditional distance needs at least one categorical column")
        self._cat_names = tuple(cat)
        self._num_names = tuple(num)

    # -- evaluation ----------------------------------------------------------

    @property
    def n_recipients(self) -> int:
        return self._a.n_rows

    @property
    def n_donors(self) -> int:
        return self._b.n_rows

    @property
    def stats(self) -> Mapping[str, ColumnStats]:
        return dict(self._stats)

    def _accumulate(self, rows: np.ndarray, names: Sequence[str], weighted: bool) -> np.ndarray:
        num = np.zeros((rows.shape[0], self.n_donors))
        den = np.zeros_like(num)
        for name in names:
            w = self._weights[name] if weighted else 1.0
            if w == 0.0:
                continue
            d, valid = self._plans[name].block(rows, self)
            num += w * d
            den += w * valid
        with np.errstate(invalid="ignore"):
            out = num / den
        out[den == 0.0] = np.nan
        return out

    def _block(self, rows: np.ndarray) -> np.ndarray:
        if self._cfg.conditional:
            return self._block_conditional(rows)
        return self._accumulate(rows, self._names, weighted=True)

    def _block_conditional(self, rows: np.ndarray) -> np.ndarray:
        d_cat = self._accumulate(rows, self._cat_names, weighted=False)
        d_num = self._accumulate(rows, self._num_names, weighted=False)
        p = len(self._cat_names)
        out = np.ones_like(d_cat)
        for r in range(rows.shape[0]):
            crow = d_cat[r]
            finite = ~np.isnan(crow)
            if not finite.any():
                continue  # nothing comparable categorically: no donor qualifies
            dmin = crow[finite].min()
            m = next(mm for mm in range(1, p + 1) if dmin <= mm / p)
            qual = finite & (crow <= m / p)
            out[r, qual] = d_num[r, qual]
        return out

    def row(self, i: int) -> np.ndarray:
        """Distances from recipient ``i`` to every donor (nan = undefined)."""
        return self._block(np.array([i]))[0]

    def distance(self, i: int, j: int) -> float | None:
        d = float(self.row(i)[j])
        return None if math.isnan(d) else d

    def matrix(self, workers: int = 1) -> np.ndarray:
        """Dense recipient-by-donor matrix; identical for any worker count."""
        spans = _spans(self.n_recipients)
        blocks = _run_spans(self, _matrix_span, spans, workers)
        return np.vstack(blocks)

    def top_n(self, n: int, seed: int | None = None, workers: int = 1) -> MatchResult:
        """The ``n`` closest donors per recipient.

        Donors at undefined distance are never matched; a recipient with
        fewer than ``n`` reachable donors is an error.  Equally distant
        donors competing for the last slot are ordered by a keyed hash of
        (seed, recipient, donor row content), which makes the choice
        reproducible and independent of donor row order.
        """
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if n > self.n_donors:
            raise ValueError(f"n={n} exceeds donor count {self.n_donors}")
        tie_seed = self._cfg.tie_seed if seed is None else seed
        spans = _spans(self.n_recipients)
        parts = _run_spans(self, _topn_span, [(s, n, tie_seed) for s in spans], workers)
        idx = np.vstack([p[0] for p in parts])
        dist = np.vstack([p[1] for p in parts])
        ties = np.concatenate([p[2] for p in parts])
        return MatchResult(idx, dist, ties)

    def _topn_block(self, lo: int, hi: int, n: int, tie_seed: int):
        D = self._block(np.arange(lo, hi))
        dv = np.where(np.isnan(D), np.inf, D)
        m = hi - lo
        idx = np.empty((m, n), dtype=np.int64)
        dist = np.empty((m, n))
        ties = np.zeros(m, dtype=np.int64)
        order = np.argsort(dv, axis=1, kind="stable")
        for r in range(m):
            row_order = order[r]
            row_d = dv[r, row_order]
            reachable = int(np.searchsorted(row_d, np.inf, side="left"))
            if reachable < n:
                raise DataError(
                    f"recipient {lo + r} has {reachable} donors at defined distance,"
                    f" fewer than the requested {n}"
                )
            chosen = self._rank_with_ties(lo + r, row_order, row_d, n, tie_seed, ties, r)
            idx[r] = chosen
            dist[r] = dv[r, chosen]
        return idx, dist, ties

    def _rank_with_ties(
        self,
        rec: int,
        row_order: np.ndarray,
        row_d: np.ndarray,
        n: int,
        tie_seed: int,
        ties: np.ndarray,
        r: int,
    ) -> np.ndarray:
        out: list[int] = []
        i = 0
        while len(out) < n:
            j = int(np.searchsorted(row_d, row_d[i], side="right"))
            run = row_order[i:j]
            need = n - len(out)
            if j - i <= need:
                out.extend(run.tolist())
            else:
                out.extend(self._tie_order(rec, run, tie_seed)[:need])
                ties[r] = j - i
            i = j
        return np.asarray(out, dtype=np.int64)

    def _tie_order(self, rec: int, candidates: np.ndarray, tie_seed: int) -> list[int]:
        table = self._donor_key_table()
        prefix = int(tie_seed).to_bytes(8, "little", signed=True) + int(rec).to_bytes(
            8, "little", signed=True
        )

        def key(j: int) -> tuple[bytes, bytes]:
            h = blake2b(prefix + table[j], digest_size=8).digest()
            return (h, table[j])

        return sorted(candidates.tolist(), key=key)

    def _donor_key_table(self) -> list[bytes]:
        # donor identity is row content, so reordering donors reorders
        # nothing but the index labels
        if self._donor_bytes is None:
            nb = self.n_donors
            parts = []
            for c in self._b.columns:
                parts.append(np.ascontiguousarray(c.values).view(np.uint8).reshape(nb, 8))
                parts.append(c.missing.astype(np.uint8).reshape(nb, 1))
            table = np.hstack(parts)
            self._donor_bytes = [table[j].tobytes() for j in range(nb)]
        return self._donor_bytes


# ---------------------------------------------------------------------------
# parallel drivers (fork-based; workers see the engine via module global)

_WORKER_ENGINE: PairwiseGower | None = None


def _worker_init(engine: PairwiseGower) -> None:
    global _WORKER_ENGINE
    _WORKER_ENGINE = engine


def _matrix_span(engine: PairwiseGower, span: tuple[int, int]) -> np.ndarray:
    return engine._block(np.arange(*span))


def _topn_span(engine: PairwiseGower, args) -> tuple:
    (lo, hi), n, tie_seed = args
    return engine._topn_block(lo, hi, n, tie_seed)


def _pool_matrix(span) -> np.ndarray:
    assert _WORKER_ENGINE is not None
    return _matrix_span(_WORKER_ENGINE, span)


def _pool_topn(args) -> tuple:
    assert _WORKER_ENGINE is not None
    return _topn_span(_WORKER_ENGINE, args)


def _spans(n: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + _BLOCK, n)) for lo in range(0, n, _BLOCK)]


def _run_spans(engine: PairwiseGower, fn, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(engine, it) for it in items]
    try:
        ctx = mp.get_context("fork")
    except ValueError:  # pragma: no cover - non-posix fallback
        ctx = mp.get_context()
    pool_fn = _pool_matrix if fn is _matrix_span else _pool_topn
    with ctx.Pool(workers, initializer=_worker_init, initargs=(engine,)) as pool:
        return pool.map(pool_fn, items)


# ---------------------------------------------------------------------------
# convenience entry points


def gower_distance(
    a: Dataset,
    i: int,
    b: Dataset,
    j: int,
    config: DistanceConfig | None = None,
    *,
    stats: Mapping[str, ColumnStats] | None = None,
    stats_from: StatsFrom = "union",
) -> float | None:
    """Distance between one row of ``a`` and one row of ``b``; None if undefined."""
    eng = PairwiseGower(a, b, config, stats=stats, stats_from=stats_from)
    return eng.distance(i, j)


def distance_matrix(
    a: Dataset,
    b: Dataset | None = None,
    config: DistanceConfig | None = None,
    *,
    stats: Mapping[str, ColumnStats] | None = None,
    stats_from: StatsFrom = "union",
    workers: int = 1,
) -> np.ndarray:
    """Dense distance matrix of ``a`` against ``b`` (or against itself)."""
    eng = PairwiseGower(a, b, config, stats=stats, stats_from=stats_from)
    return eng.matrix(workers=workers)


def top_n_matches(
    recipients: Dataset,
    donors: Dataset,
    n: int,
    config: DistanceConfig | None = None,
    *,
    seed: int | None = None,
    stats: Mapping[str, ColumnStats] | None = None,
    stats_from: StatsFrom = "union",
    workers: int = 1,
) -> MatchResult:
    """Top-``n`` closest donors for every recipient row."""
    eng = PairwiseGower(recipients, donors, config, stats=stats, stats_from=stats_from)
    return eng.top_n(n, seed=seed, workers=workers)


# ---------------------------------------------------------------------------
# dummy-coding diagnostic


@dataclass(frozen=True)
class DummyEquivalenceReport:
    """Pairwise categorical distances next to their dummy-coded counterparts.

    For each row pair the report carries simple matching on the original
    columns (``d_sm``, mismatch fraction over the columns observed on both
    rows) and three distances computed on the one-hot expansion: Dice,
    Manhattan and squared Euclidean.  The ratio columns divide the latter by
    Dice, and ``d_sm`` is first multiplied by the pair's observed column
    count; ratios are nan for identical pairs (Dice 0).
    """

    i: np.ndarray
    j: np.ndarray
    d_sm: np.ndarray
    d_dice: np.ndarray
    d_manh: np.ndarray
    d_euc2: np.ndarray

    @property
    def ratio_manh(self) -> np.ndarray:
        return _safe_div(self.d_manh, self.d_dice)

    @property
    def ratio_euc2(self) -> np.ndarray:
        return _safe_div(self.d_euc2, self.d_dice)

    def ratio_sm_p(self, p_eff: np.ndarray | None = None) -> np.ndarray:
        p = self._p_eff if p_eff is None else p_eff
        return _safe_div(self.d_sm * p, self.d_dice)

    _p_eff: np.ndarray = field(default_factory=lambda: np.array([]))

    def rows(self):
        for t in range(self.i.shape[0]):
            yield {
                "i": int(self.i[t]),
                "j": int(self.j[t]),
                "d_sm": float(self.d_sm[t]),
                "d_dice": float(self.d_dice[t]),
                "d_manh": float(self.d_manh[t]),
                "d_euc2": float(self.d_euc2[t]),
                "ratio_manh": float(self.ratio_manh[t]),
                "ratio_euc2": float(self.ratio_euc2[t]),
                "ratio_sm_p": float(self.ratio_sm_p()[t]),
            }


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore", divide="ignore"):
        out = num / den
    out[den == 0.0] = np.nan
    return out


def dummy_equivalence_report(data: Dataset) -> DummyEquivalenceReport:
    """Compare categorical distance measures with their dummy-coded forms.

    Every column must be categorical; each is expanded into per-category
    indicators and the dummy-based distances are computed literally from the
    indicator vectors, pair by pair, restricted to columns observed on both
    rows.  Binary columns are treated as two-category variables here.
    """
    for c in data:
        if not c.kind.kind.is_categorical:
            raise DataError(f"column {c.name!r} is numeric; the report needs categoricals")
    codes = np.stack([c.values for c in data], axis=1)
    n, p = codes.shape
    sizes = np.array([c.kind.n_categories for c in data])
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = {k: np.zeros(len(pairs)) for k in ("d_sm", "d_dice", "d_manh", "d_euc2", "p_eff")}
    ii = np.zeros(len(pairs), dtype=np.int64)
    jj = np.zeros(len(pairs), dtype=np.int64)
    for t, (i, j) in enumerate(pairs):
        ci, cj = codes[i], codes[j]
        obs = (ci >= 0) & (cj >= 0)
        p_eff = int(obs.sum())
        ii[t], jj[t] = i, j
        out["p_eff"][t] = p_eff
        if p_eff == 0:
            for k in ("d_sm", "d_dice", "d_manh", "d_euc2"):
                out[k][t] = np.nan
            continue
        u = np.concatenate([np.eye(sizes[c])[ci[c]] for c in range(p) if obs[c]])
        v = np.concatenate([np.eye(sizes[c])[cj[c]] for c in range(p) if obs[c]])
        both = float((u * v).sum())
        only_u = float((u * (1 - v)).sum())
        only_v = float(((1 - u) * v).sum())
        out["d_manh"][t] = float(np.abs(u - v).sum())
        out["d_euc2"][t] = float(((u - v) ** 2).sum())
        denom = 2 * both + only_u + only_v
        out["d_dice"][t] = 1.0 - (2 * both / denom) if denom else 0.0
        out["d_sm"][t] = float(((ci != cj) & obs).sum()) / p_eff
    return DummyEquivalenceReport(
        i=ii,
        j=jj,
        d_sm=out["d_sm"],
        d_dice=out["d_dice"],
        d_manh=out["d_manh"],
        d_euc2=out["d_euc2"],
        _p_eff=out["p_eff"],
    )

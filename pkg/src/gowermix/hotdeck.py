"""Nearest-neighbour donor imputation for a single target column.

Rows observed on the target act as donors, rows missing it as recipients.
Each recipient receives the target value of its closest donor under the
configured distance over the remaining columns.  Only missing target cells
change; every other cell of the dataset is returned untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .aggregate import DistanceConfig, PairwiseGower
from .colstats import ColumnStats
from .dataset import Column, DataError, Dataset

__all__ = ["ImputationResult", "nn_hotdeck"]


@dataclass(frozen=True)
class ImputationResult:
    """Completed dataset plus an audit trail of who donated to whom.

    Indices refer to rows of the original dataset: ``recipient_rows[r]``
    received the target value of ``donor_rows[r]`` at distance
    ``distances[r]``.  ``ties_at_selection[r]`` counts the equally close
    donors the winner was drawn from when there was a draw, else 0.
    """

    completed: Dataset
    target: str
    recipient_rows: np.ndarray
    donor_rows: np.ndarray
    distances: np.ndarray
    ties_at_selection: np.ndarray

    @property
    def n_imputed(self) -> int:
        return int(self.recipient_rows.shape[0])


def nn_hotdeck(
    data: Dataset,
    target: str,
    config: DistanceConfig | None = None,
    *,
    seed: int | None = None,
    pooled_stats: bool = False,
    max_uses: int | None = None,
    stats: Mapping[str, ColumnStats] | None = None,
    workers: int = 1,
) -> ImputationResult:
    """Fill every missing cell of ``target`` from its nearest donor.

    Distances use the configured columns minus the target itself.  Scaling
    statistics come from the donor rows, which define the reference
    distribution the recipients are matched into; ``pooled_stats`` widens
    them to all rows.  ``max_uses`` caps how many recipients any one donor
    may serve, processed in recipient order, so a capped donor falls back to
    each later recipient's next-closest choice.

    Errors if the target has no missing cells (nothing to do), no observed
    cells (no donors), or if some recipient is missing every distance column.
    """
    if target not in data:
        raise DataError(f"target column {target!r} not in dataset")
    tcol = data.column(target)
    rec_rows = np.flatnonzero(tcol.missing)
    don_rows = np.flatnonzero(~tcol.missing)
    if rec_rows.size == 0:
        raise DataError(f"target {target!r} has no missing values; nothing to impute")
    if don_rows.size == 0:
        raise DataError(f"target {target!r} has no observed values; no donors available")

    cfg = config or DistanceConfig()
    if cfg.include is not None:
        feature_names = tuple(n for n in cfg.include if n != target)
        if not feature_names:
            raise DataError("no distance columns left after excluding the target")
    else:
        feature_names = tuple(n for n in data.names if n != target)
        if not feature_names:
            raise DataError("dataset has no columns besides the target")
    cfg = _with_include(cfg, feature_names)

    # a recipient with nothing observed among the distance columns can never
    # be placed; reject up-front rather than failing mid-match
    feat_missing = np.logical_and.reduce(
        [data.column(n).missing for n in feature_names]
    )
    dead = rec_rows[feat_missing[rec_rows]]
    if dead.size:
        raise DataError(
            f"rows {dead[:5].tolist()} are missing the target and every distance column"
        )

    recipients = data.take(rec_rows)
    donors = data.take(don_rows)
    engine = PairwiseGower(
        recipients,
        donors,
        cfg,
        stats=stats,
        stats_from="union" if pooled_stats else "donors",
    )
    tie_seed = cfg.tie_seed if seed is None else seed

    if max_uses is None:
        match = engine.top_n(1, seed=tie_seed, workers=workers)
        chosen = match.indices[:, 0]
        dist = match.distances[:, 0]
        ties = match.ties_at_cut
    else:
        chosen, dist, ties = _capped_assignment(engine, tie_seed, max_uses)

    values = tcol.values.copy()
    missing = tcol.missing.copy()
    values[rec_rows] = tcol.values[don_rows[chosen]]
    missing[rec_rows] = False
    completed = data.replace(Column(target, tcol.kind, values, missing))
    return ImputationResult(
        completed=completed,
        target=target,
        recipient_rows=rec_rows,
        donor_rows=don_rows[chosen],
        distances=dist,
        ties_at_selection=ties,
    )


def _with_include(cfg: DistanceConfig, names: tuple[str, ...]) -> DistanceConfig:
    return DistanceConfig(
        include=names,
        weights={k: v for k, v in cfg.weights.items() if k in names},
        numeric_method=cfg.numeric_method,
        numeric_overrides=cfg.numeric_overrides,
        ordinal_policy=cfg.ordinal_policy,
        ordinal_overrides=cfg.ordinal_overrides,
        conditional=cfg.conditional,
        conditional_scaling=cfg.conditional_scaling,
        ordinal_as_numeric=cfg.ordinal_as_numeric,
        tie_seed=cfg.tie_seed,
    )


def _capped_assignment(
    engine: PairwiseGower, tie_seed: int, max_uses: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if max_uses < 1:
        raise ValueError(f"max_uses must be >= 1, got {max_uses}")
    n_rec, n_don = engine.n_recipients, engine.n_donors
    if n_rec > n_don * max_uses:
        raise DataError(
            f"{n_rec} recipients cannot be served by {n_don} donors used at most {max_uses}x"
        )
    uses = np.zeros(n_don, dtype=np.int64)
    chosen = np.empty(n_rec, dtype=np.int64)
    dist = np.empty(n_rec)
    ties = np.zeros(n_rec, dtype=np.int64)
    for r in range(n_rec):
        row = engine.row(r)
        row = np.where(np.isnan(row), np.inf, row)
        row[uses >= max_uses] = np.inf
        best = row.min()
        if not np.isfinite(best):
            raise DataError(f"recipient row {r}: no available donor at defined distance")
        cand = np.flatnonzero(row == best)
        if cand.size > 1:
            pick = engine._tie_order(r, cand, tie_seed)[0]
            ties[r] = cand.size
        else:
            pick = int(cand[0])
        chosen[r] = pick
        dist[r] = best
        uses[pick] += 1
    return chosen, dist, ties

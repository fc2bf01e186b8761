"""Monte Carlo studies of donor imputation quality.

The artificial pipeline draws a correlated Gaussian sample (target ``Y`` and
matching variables ``X1``..``X5``), turns most X columns into equal-width
categories, optionally contaminates ``X1`` with outliers, deletes a fixed
share of ``Y`` under a chosen missingness mechanism, imputes with every
configured method on the same masked data, and scores the completions with
four metrics:

* ``rho``   mean per-replication Pearson correlation between deleted true
            values and their imputations,
* ``sB``    mean deviation of the completed-sample mean from the true mean,
* ``sRMSE`` root mean square of those deviations,
* ``sDQ``   mean deviation of 41 completed-sample quantiles from reference
            quantiles,
* ``sRSDQ`` mean per-replication RMS of those quantile deviations.

The user-data pipeline applies the same delete/impute/score loop to a
supplied dataset with a fully observed target, using the full sample itself
as the reference distribution.

Every replication owns an RNG stream derived from (master seed, replication
index) and metric reductions run in replication order with compensated
summation, so reports are bit-identical no matter how many worker processes
are used.
"""

from __future__ import annotations

import math
import multiprocessing as mp
import warnings
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist
from typing import Mapping, Sequence

import numpy as np

from .aggregate import DistanceConfig
from .dataset import Column, DataError, Dataset, Kind, VariableKind
from .hotdeck import nn_hotdeck
from .pervar import NumericMethod, Scaling

__all__ = [
    "MU",
    "SIGMA",
    "CORRELATION",
    "PROB_LEVELS",
    "Mechanism",
    "Categorization",
    "SimScenario",
    "MethodSpec",
    "MethodMetrics",
    "SimReport",
    "all_method_specs",
    "parse_methods",
    "generate_mvn_sample",
    "categorize_equal_width",
    "inject_outliers",
    "delete_values",
    "metric_mean_reproduction",
    "metric_quantile_reproduction",
    "reference_quantiles_empirical",
    "reference_quantiles_theoretical",
    "simulate_replication",
    "run_study",
    "run_user_study",
]

MU = 100.0
SIGMA = 20.0

# correlation of (Y, X1, X2, X3, X4, X5); X1 and X3 are the strong
# predictors of Y, the X pairs are mildly correlated
CORRELATION = np.array(
    [
        [1.0, 0.8, 0.4, 0.8, 0.4, 0.5],
        [0.8, 1.0, 0.2, 0.4, 0.2, 0.3],
        [0.4, 0.2, 1.0, 0.2, 0.2, 0.3],
        [0.8, 0.4, 0.2, 1.0, 0.2, 0.2],
        [0.4, 0.2, 0.2, 0.2, 1.0, 0.2],
        [0.5, 0.3, 0.3, 0.2, 0.2, 1.0],
    ]
)

SIM_COLUMNS = ("Y", "X1", "X2", "X3", "X4", "X5")

PROB_LEVELS = np.arange(41) / 40.0


class Mechanism(str, Enum):
    MCAR = "mcar"
    MAR = "mar"
    MNAR = "mnar"


class Categorization(str, Enum):
    """Which X columns are categorized, and how finely.

    ``four_cat`` turns X2..X5 into 4, 6, 2 and 4 equal-width classes
    (X1 stays numeric); ``three_cat`` categorizes only X3..X5 (6, 2, 4),
    keeping X1 and X2 numeric.
    """

    FOUR_CAT = "fourcat"
    THREE_CAT = "threecat"


_CAT_CLASSES: dict[Categorization, dict[str, int]] = {
    Categorization.FOUR_CAT: {"X2": 4, "X3": 6, "X4": 2, "X5": 4},
    Categorization.THREE_CAT: {"X3": 6, "X4": 2, "X5": 4},
}


@dataclass(frozen=True)
class SimScenario:
    """One artificial-study configuration.

    ``reference_quantiles`` picks the target distribution the quantile
    metrics compare against: ``empirical`` uses each replication's complete
    sample (its own 41 quantiles), ``theoretical`` uses N(100, 20) quantiles
    at the interior levels with the realized min/max at the endpoints.
    ``mar_driver`` names the column whose values drive MAR deletion.
    """

    n: int = 500
    reps: int = 1000
    categorization: Categorization = Categorization.FOUR_CAT
    outliers: bool = False
    outlier_rate: float = 0.02
    outlier_mean: float = 200.0
    outlier_sd: float = 20.0
    missing_fraction: float = 1.0 / 3.0
    mechanism: Mechanism = Mechanism.MCAR
    mar_driver: str | None = None
    seed: int = 0
    reference_quantiles: str = "empirical"

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 <= self.outlier_rate <= 1.0:
            raise ValueError(f"outlier_rate must be in [0,1], got {self.outlier_rate}")
        if not 0.0 < self.missing_fraction < 1.0:
            raise ValueError(
                f"missing_fraction must be in (0,1), got {self.missing_fraction}"
            )
        if self.reference_quantiles not in ("empirical", "theoretical"):
            raise ValueError("reference_quantiles must be 'empirical' or 'theoretical'")
        if self.mechanism is Mechanism.MAR and self.mar_driver is None:
            raise ValueError("MAR needs mar_driver to name the driving column")


_METHOD_NAMES = ("no.mod", "kde1", "kde2", "knn", "cond.dist")


@dataclass(frozen=True)
class MethodSpec:
    """One imputation method column of the study report.

    ``no.mod`` is the plain scaled distance, ``kde1``/``kde2`` the kernel
    window with bandwidth factors 1.06 / 0.9, ``knn`` the square-root-rule
    neighbourhood window, ``cond.dist`` the two-stage conditional distance.
    Each runs with range or IQR scaling.
    """

    name: str
    scaling: Scaling = Scaling.RANGE

    def __post_init__(self) -> None:
        if self.name not in _METHOD_NAMES:
            raise ValueError(f"unknown method {self.name!r}; pick from {_METHOD_NAMES}")

    @property
    def label(self) -> str:
        return f"{self.name}/{self.scaling.value}"

    def to_config(self, tie_seed: int = 0) -> DistanceConfig:
        if self.name == "cond.dist":
            return DistanceConfig(
                conditional=True, conditional_scaling=self.scaling, tie_seed=tie_seed
            )
        if self.name == "no.mod":
            method = (
                NumericMethod.standard()
                if self.scaling is Scaling.RANGE
                else NumericMethod.iqr_capped()
            )
        elif self.name == "kde1":
            method = NumericMethod.kde(1.06, self.scaling)
        elif self.name == "kde2":
            method = NumericMethod.kde(0.9, self.scaling)
        else:
            method = NumericMethod.knn(None, self.scaling)
        return DistanceConfig(numeric_method=method, tie_seed=tie_seed)


def all_method_specs() -> tuple[MethodSpec, ...]:
    """The full 5 x 2 method grid, range scalings first."""
    return tuple(
        MethodSpec(name, scaling)
        for scaling in (Scaling.RANGE, Scaling.IQR)
        for name in _METHOD_NAMES
    )


def parse_methods(text: str) -> tuple[MethodSpec, ...]:
    """Parse "name:scaling,name:scaling,..." or "all" into method specs."""
    if text.strip() == "all":
        return all_method_specs()
    specs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, scal = part.partition(":")
        scaling = Scaling(scal) if scal else Scaling.RANGE
        specs.append(MethodSpec(name, scaling))
    if not specs:
        raise ValueError("no methods given")
    return tuple(specs)


@dataclass(frozen=True)
class MethodMetrics:
    method: str
    scaling: str
    rho: float
    rho_valid_reps: int
    sB: float
    sRMSE: float
    sDQ: float
    sRSDQ: float


@dataclass(frozen=True)
class SimReport:
    """Study results plus the configuration that produced them."""

    scenario: Mapping[str, object]
    reps: int
    results: tuple[MethodMetrics, ...]
    trace: tuple[Mapping[str, object], ...] | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "kind": "simulation-report",
            "scenario": dict(self.scenario),
            "reps": self.reps,
            "methods": [
                {
                    "method": m.method,
                    "scaling": m.scaling,
                    "rho": m.rho,
                    "rho_valid_reps": m.rho_valid_reps,
                    "sB": m.sB,
                    "sRMSE": m.sRMSE,
                    "sDQ": m.sDQ,
                    "sRSDQ": m.sRSDQ,
                }
                for m in self.results
            ],
        }
        if self.trace is not None:
            out["trace"] = [dict(t) for t in self.trace]
        return out


# ---------------------------------------------------------------------------
# pipeline stages


def _require_spd(corr: np.ndarray) -> None:
    eig = np.linalg.eigvalsh(corr)
    if eig.min() <= 0:
        raise ValueError(f"correlation matrix is not positive definite (min eig {eig.min()})")


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def generate_mvn_sample(n: int, seed_or_rng=0) -> Dataset:
    """Draw ``n`` rows of (Y, X1..X5), mean 100, sd 20, fixed correlation."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = _as_rng(seed_or_rng)
    _require_spd(CORRELATION)
    cov = SIGMA * SIGMA * CORRELATION
    chol = np.linalg.cholesky(cov)
    z = rng.standard_normal((n, len(SIM_COLUMNS)))
    sample = MU + z @ chol.T
    cols = tuple(
        Column(name, VariableKind(Kind.NUMERIC), sample[:, i], np.zeros(n, dtype=bool))
        for i, name in enumerate(SIM_COLUMNS)
    )
    return Dataset(cols)


def categorize_equal_width(col: Column, classes: int) -> Column:
    """Cut a numeric column into ``classes`` equal-width nominal classes.

    Breakpoints sit at ``min + i*(max-min)/classes``; a value exactly on a
    break goes to the upper class, and the maximum lands in the last class.
    Labels are "c1".."cK".  Missing cells stay missing.
    """
    if col.kind.kind is not Kind.NUMERIC:
        raise DataError(f"column {col.name!r} is not numeric")
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    obs = col.values[~col.missing]
    if obs.size == 0:
        raise DataError(f"column {col.name!r} has no observed cells")
    lo, hi = float(obs.min()), float(obs.max())
    if lo == hi:
        raise DataError(f"column {col.name!r} is constant; equal-width classes undefined")
    breaks = lo + (hi - lo) * np.arange(1, classes) / classes
    codes = np.searchsorted(breaks, col.values, side="right").astype(np.int64)
    codes[col.missing] = -1
    labels = tuple(f"c{i + 1}" for i in range(classes))
    return Column(col.name, VariableKind(Kind.NOMINAL, labels), codes, col.missing.copy())


def inject_outliers(
    col: Column,
    rate: float,
    mu_o: float,
    sigma_o: float,
    seed_or_rng=0,
) -> tuple[Column, np.ndarray]:
    """Replace ``round(rate*n)`` uniformly chosen cells by N(mu_o, sigma_o) draws.

    Returns the contaminated column and the replaced row indices.  A positive
    rate that rounds to zero replacements warns and changes nothing.
    """
    if col.kind.kind is not Kind.NUMERIC:
        raise DataError(f"column {col.name!r} is not numeric")
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0,1], got {rate}")
    rng = _as_rng(seed_or_rng)
    n = len(col)
    count = round(rate * n)
    if count == 0:
        if rate > 0:
            warnings.warn(
                f"outlier rate {rate} rounds to zero replacements at n={n}", stacklevel=2
            )
        return col, np.array([], dtype=np.int64)
    rows = np.sort(rng.choice(n, size=count, replace=False))
    vals = col.values.copy()
    vals[rows] = rng.normal(mu_o, sigma_o, size=count)
    return Column(col.name, col.kind, vals, col.missing.copy()), rows


def delete_values(
    target: Column,
    mechanism: Mechanism,
    driver: Column | None,
    fraction: float,
    seed_or_rng=0,
) -> np.ndarray:
    """Choose exactly ``round(fraction*n)`` rows of a complete column to mask.

    MCAR draws uniformly.  MAR and MNAR draw without replacement with
    probability proportional to the driver's shifted-positive values
    (``v - min + 1e-6 * range``); MNAR drives on the target itself.  A flat
    driver degenerates to uniform drawing.  Returns the boolean mask.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0,1), got {fraction}")
    if target.missing.any():
        raise DataError(f"target {target.name!r} must be fully observed before deletion")
    rng = _as_rng(seed_or_rng)
    n = len(target)
    count = round(fraction * n)
    if count < 1 or count >= n:
        raise DataError(f"fraction {fraction} leaves nothing to delete or keep at n={n}")
    if mechanism is Mechanism.MCAR:
        rows = rng.choice(n, size=count, replace=False)
    else:
        if mechanism is Mechanism.MNAR:
            driver = target
        if driver is None:
            raise DataError("MAR deletion needs a driver column")
        if driver.kind.kind is not Kind.NUMERIC:
            raise DataError(f"driver {driver.name!r} must be numeric")
        if driver.missing.any():
            raise DataError(f"driver {driver.name!r} has missing values")
        if len(driver) != n:
            raise DataError("driver and target lengths differ")
        v = driver.values
        w = v - v.min() + 1e-6 * (v.max() - v.min())
        total = w.sum()
        if total <= 0:
            rows = rng.choice(n, size=count, replace=False)
        else:
            rows = rng.choice(n, size=count, replace=False, p=w / total)
    mask = np.zeros(n, dtype=bool)
    mask[rows] = True
    return mask


# ---------------------------------------------------------------------------
# metrics


def metric_mean_reproduction(
    rep_values: Sequence[np.ndarray], mu: float
) -> tuple[float, float]:
    """(sB, sRMSE) of the per-replication completed-sample means around ``mu``."""
    if len(rep_values) == 0:
        raise ValueError("no replications")
    devs = [float(np.mean(v)) - mu for v in rep_values]
    r = len(devs)
    s_b = math.fsum(devs) / r
    s_rmse = math.sqrt(math.fsum(d * d for d in devs) / r)
    return s_b, s_rmse


def metric_quantile_reproduction(
    rep_values: Sequence[np.ndarray],
    references: np.ndarray | Sequence[np.ndarray],
) -> tuple[float, float]:
    """(sDQ, sRSDQ) of completed-sample quantiles against reference quantiles.

    41 levels 0, 0.025, ..., 1.  ``references`` is either one quantile vector
    shared by every replication or one vector per replication.
    """
    if len(rep_values) == 0:
        raise ValueError("no replications")
    if isinstance(references, np.ndarray) and references.ndim == 1:
        refs = [references] * len(rep_values)
    else:
        refs = [np.asarray(r, dtype=np.float64) for r in references]
        if len(refs) != len(rep_values):
            raise ValueError("need one reference vector per replication")
    means, rmss = [], []
    for vals, ref in zip(rep_values, refs):
        diffs = np.quantile(np.asarray(vals, dtype=np.float64), PROB_LEVELS) - ref
        means.append(float(np.mean(diffs)))
        rmss.append(float(np.sqrt(np.mean(diffs * diffs))))
    r = len(means)
    return math.fsum(means) / r, math.fsum(rmss) / r


def reference_quantiles_empirical(complete: np.ndarray) -> np.ndarray:
    """The 41 sample quantiles of a complete target sample."""
    return np.quantile(np.asarray(complete, dtype=np.float64), PROB_LEVELS)


def reference_quantiles_theoretical(
    complete: np.ndarray, mu: float = MU, sigma: float = SIGMA
) -> np.ndarray:
    """N(mu, sigma) quantiles inside, the realized extremes at levels 0 and 1.

    The Gaussian quantile function is infinite at the endpoint levels, so the
    realized complete-sample min and max stand in there.
    """
    dist = NormalDist(mu, sigma)
    q = np.array([dist.inv_cdf(p) if 0.0 < p < 1.0 else 0.0 for p in PROB_LEVELS])
    q[0] = float(np.min(complete))
    q[-1] = float(np.max(complete))
    return q


# ---------------------------------------------------------------------------
# replication pipeline


def _rep_rng(seed: int, rep: int, lane: int = 0) -> np.random.Generator:
    key = (rep,) if lane == 0 else (rep, lane)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _tie_seed(seed: int, rep: int, method_index: int) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=(rep, 1000 + method_index))
    return int(ss.generate_state(1)[0])


@dataclass(frozen=True)
class _RepData:
    masked: Dataset
    complete_y: np.ndarray
    mask: np.ndarray

    @property
    def truth(self) -> np.ndarray:
        return self.complete_y[self.mask]


def _build_rep_data(scenario: SimScenario, rep: int) -> _RepData:
    rng = _rep_rng(scenario.seed, rep)
    data = generate_mvn_sample(scenario.n, rng)
    if scenario.outliers:
        contaminated, _ = inject_outliers(
            data.column("X1"),
            scenario.outlier_rate,
            scenario.outlier_mean,
            scenario.outlier_sd,
            rng,
        )
        data = data.replace(contaminated)
    for name, classes in _CAT_CLASSES[scenario.categorization].items():
        data = data.replace(categorize_equal_width(data.column(name), classes))
    ycol = data.column("Y")
    driver = data.column(scenario.mar_driver) if scenario.mechanism is Mechanism.MAR else None
    mask = delete_values(ycol, scenario.mechanism, driver, scenario.missing_fraction, rng)
    complete_y = ycol.values.copy()
    masked_y = Column("Y", ycol.kind, np.where(mask, np.nan, complete_y), mask)
    return _RepData(data.replace(masked_y), complete_y, mask)


def _impute_y(rep_data: _RepData, spec: MethodSpec, tie_seed: int) -> np.ndarray:
    result = nn_hotdeck(
        rep_data.masked, "Y", spec.to_config(tie_seed), seed=tie_seed
    )
    return result.completed.column("Y").values


def _pearson(truth: np.ndarray, imputed: np.ndarray) -> float:
    if truth.size < 2 or np.std(truth) == 0.0 or np.std(imputed) == 0.0:
        return float("nan")
    return float(np.corrcoef(truth, imputed)[0, 1])


def simulate_replication(
    scenario: SimScenario, methods: Sequence[MethodSpec], rep: int
) -> tuple[_RepData, dict[str, np.ndarray]]:
    """One full replication: masked data plus completed target per method.

    All methods impute the same masked data, so their results are directly
    paired.  Mainly a test and inspection hook; :func:`run_study` consumes
    the same stages.
    """
    rep_data = _build_rep_data(scenario, rep)
    completed = {
        spec.label: _impute_y(rep_data, spec, _tie_seed(scenario.seed, rep, m))
        for m, spec in enumerate(methods)
    }
    return rep_data, completed


def _rep_metrics(scenario: SimScenario, methods: Sequence[MethodSpec], rep: int) -> list:
    rep_data = _build_rep_data(scenario, rep)
    if scenario.reference_quantiles == "empirical":
        ref = reference_quantiles_empirical(rep_data.complete_y)
    else:
        ref = reference_quantiles_theoretical(rep_data.complete_y)
    truth = rep_data.truth
    out = []
    for m, spec in enumerate(methods):
        y = _impute_y(rep_data, spec, _tie_seed(scenario.seed, rep, m))
        diffs = np.quantile(y, PROB_LEVELS) - ref
        out.append(
            (
                _pearson(truth, y[rep_data.mask]),
                float(np.mean(y)) - MU,
                float(np.mean(diffs)),
                float(np.sqrt(np.mean(diffs * diffs))),
            )
        )
    return out


# worker-side state for fork-based parallel replication
_SIM_STATE: tuple | None = None


def _sim_init(state: tuple) -> None:
    global _SIM_STATE
    _SIM_STATE = state


def _sim_rep(rep: int) -> list:
    assert _SIM_STATE is not None
    kind, args = _SIM_STATE
    if kind == "artificial":
        scenario, methods = args
        return _rep_metrics(scenario, methods, rep)
    data, target, scenario, methods = args
    return _user_rep_metrics(data, target, scenario, methods, rep)


def _map_reps(state: tuple, reps: int, workers: int) -> list[list]:
    if workers <= 1 or reps <= 1:
        _sim_init(state)
        return [_sim_rep(rep) for rep in range(reps)]
    try:
        ctx = mp.get_context("fork")
    except ValueError:  # pragma: no cover - non-posix fallback
        ctx = mp.get_context()
    with ctx.Pool(workers, initializer=_sim_init, initargs=(state,)) as pool:
        return pool.map(_sim_rep, range(reps))


def _reduce_report(
    scenario_echo: Mapping[str, object],
    methods: Sequence[MethodSpec],
    per_rep: list[list],
    trace: bool,
) -> SimReport:
    reps = len(per_rep)
    results = []
    for m, spec in enumerate(methods):
        rhos = [per_rep[h][m][0] for h in range(reps)]
        devs = [per_rep[h][m][1] for h in range(reps)]
        dqm = [per_rep[h][m][2] for h in range(reps)]
        dqr = [per_rep[h][m][3] for h in range(reps)]
        valid = [r for r in rhos if not math.isnan(r)]
        results.append(
            MethodMetrics(
                method=spec.name,
                scaling=spec.scaling.value,
                rho=math.fsum(valid) / len(valid) if valid else float("nan"),
                rho_valid_reps=len(valid),
                sB=math.fsum(devs) / reps,
                sRMSE=math.sqrt(math.fsum(d * d for d in devs) / reps),
                sDQ=math.fsum(dqm) / reps,
                sRSDQ=math.fsum(dqr) / reps,
            )
        )
    rows = None
    if trace:
        rows = tuple(
            {
                "rep": h,
                "method": spec.name,
                "scaling": spec.scaling.value,
                "rho": per_rep[h][m][0],
                "mean_dev": per_rep[h][m][1],
                "dq_mean": per_rep[h][m][2],
                "dq_rms": per_rep[h][m][3],
            }
            for h in range(reps)
            for m, spec in enumerate(methods)
        )
    return SimReport(dict(scenario_echo), reps, tuple(results), rows)


def run_study(
    scenario: SimScenario,
    methods: Sequence[MethodSpec] | None = None,
    *,
    workers: int = 1,
    trace: bool = False,
) -> SimReport:
    """Run the artificial study for every method on shared per-rep data."""
    specs = tuple(methods) if methods is not None else all_method_specs()
    if not specs:
        raise ValueError("no methods to run")
    per_rep = _map_reps(("artificial", (scenario, specs)), scenario.reps, workers)
    echo = {
        "source": "artificial",
        "n": scenario.n,
        "reps": scenario.reps,
        "categorization": scenario.categorization.value,
        "outliers": scenario.outliers,
        "outlier_rate": scenario.outlier_rate,
        "outlier_mean": scenario.outlier_mean,
        "outlier_sd": scenario.outlier_sd,
        "missing_fraction": scenario.missing_fraction,
        "mechanism": scenario.mechanism.value,
        "mar_driver": scenario.mar_driver,
        "seed": scenario.seed,
        "reference_quantiles": scenario.reference_quantiles,
    }
    return _reduce_report(echo, specs, per_rep, trace)


# ---------------------------------------------------------------------------
# user-data pipeline


def _user_rep_metrics(
    data: Dataset,
    target: str,
    scenario: SimScenario,
    methods: Sequence[MethodSpec],
    rep: int,
) -> list:
    rng = _rep_rng(scenario.seed, rep)
    tcol = data.column(target)
    driver = data.column(scenario.mar_driver) if scenario.mechanism is Mechanism.MAR else None
    mask = delete_values(tcol, scenario.mechanism, driver, scenario.missing_fraction, rng)
    complete = tcol.values.copy()
    masked_col = Column(target, tcol.kind, np.where(mask, np.nan, complete), mask)
    masked = data.replace(masked_col)
    mu = float(np.mean(complete))
    ref = reference_quantiles_empirical(complete)
    truth = complete[mask]
    out = []
    for m, spec in enumerate(methods):
        res = nn_hotdeck(
            masked, target, spec.to_config(_tie_seed(scenario.seed, rep, m)),
        )
        y = res.completed.column(target).values
        diffs = np.quantile(y, PROB_LEVELS) - ref
        out.append(
            (
                _pearson(truth, y[mask]),
                float(np.mean(y)) - mu,
                float(np.mean(diffs)),
                float(np.sqrt(np.mean(diffs * diffs))),
            )
        )
    return out


def run_user_study(
    data: Dataset,
    target: str,
    scenario: SimScenario,
    methods: Sequence[MethodSpec] | None = None,
    *,
    workers: int = 1,
    trace: bool = False,
) -> SimReport:
    """Delete-and-reimpute study on a user dataset with a complete target.

    Per replication, ``missing_fraction`` of the target is deleted under the
    scenario's mechanism and every method refills it; metrics compare against
    the full sample's own mean and quantiles.  The scenario's artificial
    fields (n, categorization, outliers) are ignored here.
    """
    if target not in data:
        raise DataError(f"target column {target!r} not in dataset")
    tcol = data.column(target)
    if tcol.kind.kind is not Kind.NUMERIC:
        raise DataError(f"target column {target!r} must be numeric")
    if tcol.missing.any():
        raise DataError(f"target column {target!r} must be fully observed")
    if scenario.reference_quantiles != "empirical":
        raise ValueError("user-data studies support only empirical reference quantiles")
    specs = tuple(methods) if methods is not None else all_method_specs()
    if not specs:
        raise ValueError("no methods to run")
    per_rep = _map_reps(
        ("user", (data, target, scenario, specs)), scenario.reps, workers
    )
    echo = {
        "source": "user-data",
        "target": target,
        "n": data.n_rows,
        "reps": scenario.reps,
        "missing_fraction": scenario.missing_fraction,
        "mechanism": scenario.mechanism.value,
        "mar_driver": scenario.mar_driver,
        "seed": scenario.seed,
        "reference_quantiles": scenario.reference_quantiles,
    }
    return _reduce_report(echo, specs, per_rep, trace)

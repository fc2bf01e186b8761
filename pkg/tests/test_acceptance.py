"""Release gate: eight end-to-end checks, one printed verdict line each.

Verdicts collect in ``VERDICTS``; the conftest terminal-summary hook prints
them after the run, so a plain ``pytest tests/test_acceptance.py`` always ends
with the numbered PASS/FAIL block.  Checks 2, 3 and 7 re-run the artificial
study at full scale and take a few seconds each.
"""

import math
import os
import time
from dataclasses import replace

import numpy as np
import pytest

import oracle_bruteforce as bf
from gowermix import (
    Column,
    Dataset,
    DistanceConfig,
    Kind,
    Mechanism,
    NumericMethod,
    PairwiseGower,
    PROB_LEVELS,
    SimScenario,
    VariableKind,
    delete_values,
    generate_mvn_sample,
    metric_mean_reproduction,
    metric_quantile_reproduction,
    parse_methods,
    run_study,
)
from gowermix.cli import main as cli_main
from helpers import build_config, instance_datasets, random_instance
from oracle_bruteforce import oracle_matrix


VERDICTS: list[str] = []


def _verdict(num, label, ok, detail="", word=None):
    word = word or ("PASS" if ok else "FAIL")
    tail = f" ({detail})" if detail else ""
    line = f"[acceptance {num}] {label}: {word}{tail}"
    VERDICTS.append(line)
    print(line)


def _same(a, b, tol):
    both_nan = np.isnan(a) & np.isnan(b)
    with np.errstate(invalid="ignore"):
        close = np.abs(a - b) <= tol
    return a.shape == b.shape and bool(np.all(both_nan | close))


@pytest.fixture(scope="module")
def study_plain():
    scn = SimScenario(n=500, reps=200, seed=0)
    return run_study(scn, parse_methods("no.mod:range,cond.dist:range"), workers=1)


@pytest.fixture(scope="module")
def study_outliers():
    scn = SimScenario(n=500, reps=200, seed=0, outliers=True)
    return run_study(scn, parse_methods("no.mod:range,no.mod:iqr"), workers=1)


# ---------------------------------------------------------------- check 1

SEX_AGE_GRID = [
    ("M", 15.0, "M", 15.0, 0.0000),
    ("M", 15.0, "M", 36.0, 0.1235),
    ("M", 15.0, "M", 58.0, 0.2529),
    ("M", 15.0, "M", 78.0, 0.3706),
    ("M", 15.0, "M", 100.0, 0.5000),
    ("M", 15.0, "F", 15.0, 0.5000),
    ("M", 15.0, "F", 36.0, 0.6235),
    ("M", 15.0, "F", 58.0, 0.7529),
    ("M", 15.0, "F", 78.0, 0.8706),
    ("M", 15.0, "F", 100.0, 1.0000),
]
AGE_ONLY = [0.0000, 0.2471, 0.5059, 0.7412, 1.0000] * 2


def _sex_age_datasets():
    sex_kind = VariableKind(Kind.NOMINAL, categories=("M", "F"))
    age_kind = VariableKind(Kind.NUMERIC)

    def side(sexes, ages):
        return Dataset((
            Column.from_cells("sex", sex_kind, list(sexes)),
            Column.from_cells("age", age_kind, list(ages)),
        ))

    rec = side((r[0] for r in SEX_AGE_GRID), (r[1] for r in SEX_AGE_GRID))
    don = side((r[2] for r in SEX_AGE_GRID), (r[3] for r in SEX_AGE_GRID))
    return rec, don


def test_1_sex_age_golden_grid():
    rec, don = _sex_age_datasets()
    got = np.diagonal(PairwiseGower(rec, don, DistanceConfig()).matrix())
    want = [r[4] for r in SEX_AGE_GRID]
    overall_ok = [round(float(g), 4) == w for g, w in zip(got, want)]

    age_cfg = DistanceConfig(include=("age",))
    age = np.diagonal(PairwiseGower(rec, don, age_cfg).matrix())
    age_ok = [round(float(g), 4) == w for g, w in zip(age, AGE_ONLY)]

    ok = all(overall_ok) and all(age_ok)
    _verdict(1, "sex/age golden grid to 4 decimals", ok)
    assert overall_ok == [True] * 10, list(map(float, got))
    assert age_ok == [True] * 10, list(map(float, age))


# ---------------------------------------------------------------- checks 2-3


def test_2_study_correlation_targets(study_plain):
    rows = {f"{m.method}/{m.scaling}": m for m in study_plain.results}
    nomod = rows["no.mod/range"].rho
    cond = rows["cond.dist/range"].rho
    ok_nomod = abs(nomod - 0.8913) <= 0.02
    ok_cond = abs(cond - 0.8167) <= 0.03
    ok_order = cond < nomod
    ok = ok_nomod and ok_cond and ok_order
    _verdict(2, "200-rep correlation targets",
             ok, f"no.mod {nomod:.4f} vs 0.8913, cond.dist {cond:.4f} vs 0.8167")
    assert ok_nomod, nomod
    assert ok_cond, cond
    assert ok_order, (cond, nomod)


def test_3_iqr_beats_range_with_outliers(study_outliers):
    rows = {f"{m.method}/{m.scaling}": m for m in study_outliers.results}
    dq_range = rows["no.mod/range"].sDQ
    dq_iqr = rows["no.mod/iqr"].sDQ
    ok = abs(dq_iqr) < abs(dq_range)
    _verdict(3, "outlier study: |sDQ| iqr < range",
             ok, f"iqr {dq_iqr:+.5f}, range {dq_range:+.5f}")
    assert ok, (dq_iqr, dq_range)


# ---------------------------------------------------------------- check 4

_LAW_KINDS = ("numeric", "nominal", "ordinal", "binary_symmetric", "binary_asymmetric")
_LAW_LABELS = {"nominal": ("a", "b", "c", "d"), "ordinal": ("lo", "mid", "hi")}


def _law_column(rng, name, kind, n, miss):
    cats = _LAW_LABELS.get(kind)
    vk = VariableKind(Kind(kind), categories=cats)
    gone = rng.random(n) < miss
    if kind == "numeric":
        vals = np.round(rng.normal(50.0, 12.0, n), 3)
        cells = [None if g else float(v) for g, v in zip(gone, vals)]
    elif cats is not None:
        picks = rng.integers(0, len(cats), n)
        cells = [None if g else cats[p] for g, p in zip(gone, picks)]
    else:
        ones = rng.random(n) < 0.35
        cells = [None if g else int(o) for g, o in zip(gone, ones)]
    return Column.from_cells(name, vk, cells)


def _law_dataset(rng, n, kinds):
    cols = [_law_column(rng, f"v{i}", k, n, 0.0 if i == 0 else 0.1)
            for i, k in enumerate(kinds)]
    return Dataset(tuple(cols))


def _affine_numeric(col, a, b):
    vals = np.where(col.missing, np.nan, a * col.values + b)
    return Column(col.name, col.kind, vals, col.missing.copy())


def test_4_distance_laws_bulk():
    rng = np.random.default_rng(44_000)
    methods = [NumericMethod.standard(), NumericMethod.iqr_capped(), NumericMethod.kde()]
    total_rows = 0
    for i in range(25):
        kinds = ["numeric"] + [str(rng.choice(_LAW_KINDS))
                               for _ in range(int(rng.integers(2, 6)))]
        names = [f"v{j}" for j in range(len(kinds))]
        rec = _law_dataset(rng, 200, kinds)
        don = _law_dataset(rng, 220, kinds)
        total_rows += 420
        cfg = DistanceConfig(numeric_method=methods[i % 3])

        m = PairwiseGower(rec, don, cfg).matrix()
        finite = m[np.isfinite(m)]
        assert finite.min() >= -1e-12 and finite.max() <= 1 + 1e-12

        selfm = PairwiseGower(rec, None, cfg).matrix()
        diag = np.diagonal(selfm)
        assert np.all(np.abs(diag[np.isfinite(diag)]) <= 1e-12)
        assert _same(selfm, selfm.T, 1e-12)

        # positive affine maps of a numeric column leave its distances alone
        scale_a, shift_b = 3.5, -41.0
        rec2 = rec.replace(_affine_numeric(rec.column("v0"), scale_a, shift_b))
        don2 = don.replace(_affine_numeric(don.column("v0"), scale_a, shift_b))
        num_cfg = replace(cfg, include=("v0",))
        before = PairwiseGower(rec, don, num_cfg).matrix()
        after = PairwiseGower(rec2, don2, num_cfg).matrix()
        assert _same(before, after, 1e-9)

        # a column missing for every pair is the same as leaving it out
        blank = names[1]
        gone = Column.from_cells(blank, rec.column(blank).kind, [None] * 200)
        rec3 = rec.replace(gone)
        without = replace(cfg, include=tuple(n for n in names if n != blank))
        assert _same(
            PairwiseGower(rec3, don, cfg).matrix(),
            PairwiseGower(rec, don, without).matrix(),
            1e-12,
        )

        # weights are scale-free, and a zero weight equals dropping the column
        w = {name: float(rng.choice([0.5, 1.0, 2.0])) for name in names}
        base = PairwiseGower(rec, don, replace(cfg, weights=w)).matrix()
        tripled = {k: 3.0 * v for k, v in w.items()}
        assert _same(base, PairwiseGower(rec, don, replace(cfg, weights=tripled)).matrix(), 1e-12)
        zeroed = dict.fromkeys(names, 1.0)
        zeroed[names[-1]] = 0.0
        dropped = replace(cfg, include=tuple(names[:-1]))
        assert _same(
            PairwiseGower(rec, don, replace(cfg, weights=zeroed)).matrix(),
            PairwiseGower(rec, don, dropped).matrix(),
            1e-12,
        )

    ok = total_rows >= 10_000
    _verdict(4, "distance laws over random mixed data", ok, f"{total_rows} rows")
    assert ok, total_rows


# ---------------------------------------------------------------- check 5


def _matches_bruteforce(inst, tol=1e-12):
    a, b = instance_datasets(inst)
    got = PairwiseGower(a, b, build_config(inst), stats_from=inst["stats_from"]).matrix()
    want = oracle_matrix(inst)
    for i in range(got.shape[0]):
        for j in range(got.shape[1]):
            w = want[i][j]
            g = float(got[i, j])
            if w is None:
                if not math.isnan(g):
                    return False
            elif not abs(g - w) <= tol:
                return False
    return True


def test_5_bruteforce_equivalence():
    checked = 0
    ok = True
    for s in range(60):
        ok = ok and _matches_bruteforce(random_instance(np.random.default_rng(20_000 + s)))
        checked += 1
    for s in range(30):
        inst = random_instance(np.random.default_rng(21_000 + s), conditional=True)
        ok = ok and _matches_bruteforce(inst)
        checked += 1

    # hand case: the categorical screen has to widen twice before a donor fits
    cols = [
        {"name": "sex", "kind": "nominal", "categories": ["m", "f"]},
        {"name": "region", "kind": "nominal", "categories": ["n", "s"]},
        {"name": "age", "kind": "numeric"},
    ]
    inst = {
        "columns": cols,
        "a": [["m", "n", 10.0]],
        "b": [["f", "s", 30.0], ["f", "n", 12.0]],
        "stats_from": "union",
        "conditional": True,
        "conditional_scaling": "range",
        "ordinal_as_numeric": False,
        "weights": None,
    }
    a, b = instance_datasets(inst)
    row = PairwiseGower(a, b, build_config(inst), stats_from="union").matrix()[0]
    hand_ok = row[0] == 1.0 and abs(row[1] - 0.1) <= 1e-12
    ok = ok and hand_ok and _matches_bruteforce(inst)
    checked += 1

    _verdict(5, "engine == brute-force oracle to 1e-12", ok, f"{checked} instances")
    assert ok


# ---------------------------------------------------------------- check 6


def test_6_simulation_machinery(study_plain, study_outliers):
    sample = generate_mvn_sample(100_000, 321)
    names = [c.name for c in sample.columns]
    moments_ok = True
    for name in names:
        v = sample.column(name).values
        moments_ok = moments_ok and abs(v.mean() - 100.0) <= 0.3
        moments_ok = moments_ok and abs(v.std(ddof=1) - 20.0) <= 0.2
    r = np.corrcoef(sample.column("Y").values, sample.column("X1").values)[0, 1]
    corr_ok = abs(r - 0.8) <= 0.02
    again = generate_mvn_sample(100_000, 321)
    seed_ok = all(
        np.array_equal(sample.column(n).values, again.column(n).values) for n in names
    )

    y500 = sample.column("Y").values[:500]
    ycol = Column("Y", VariableKind(Kind.NUMERIC), y500.copy(), np.zeros(500, bool))
    mask = delete_values(ycol, Mechanism.MCAR, None, 1 / 3, 5)
    mcar_ok = int(mask.sum()) == 167

    gaps = []
    for rep in range(500):
        vals = np.random.default_rng(rep).normal(100.0, 20.0, 150)
        col = Column("y", VariableKind(Kind.NUMERIC), vals.copy(), np.zeros(150, bool))
        m = delete_values(col, Mechanism.MNAR, None, 1 / 3, rep)
        gaps.append(vals[m].mean() - vals[~m].mean())
    mnar_ok = float(np.mean(gaps)) > 0.0

    ident_ok = all(
        row.sRMSE >= abs(row.sB) - 1e-12
        for report in (study_plain, study_outliers)
        for row in report.results
    )
    arrs = [np.array([101.0, 99.0, 104.0]), np.array([97.0, 98.0, 102.0])]
    sB, sRMSE = metric_mean_reproduction(arrs, 100.0)
    means = [float(a.mean()) - 100.0 for a in arrs]
    toy_mean_ok = (
        abs(sB - math.fsum(means) / 2) <= 1e-12
        and abs(sRMSE - math.sqrt(math.fsum(m * m for m in means) / 2)) <= 1e-12
    )

    vals = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0])
    ref = np.linspace(0.0, 10.0, 41)
    s_dq, s_rsdq = metric_quantile_reproduction([vals], ref)
    diffs = [bf.quantile7(vals.tolist(), float(p)) - r for p, r in zip(PROB_LEVELS, ref)]
    toy_q_ok = (
        abs(s_dq - math.fsum(diffs) / 41) <= 1e-12
        and abs(s_rsdq - math.sqrt(math.fsum(d * d for d in diffs) / 41)) <= 1e-12
    )

    ok = all([moments_ok, corr_ok, seed_ok, mcar_ok, mnar_ok, ident_ok, toy_mean_ok, toy_q_ok])
    _verdict(6, "simulation machinery", ok,
             f"corr(Y,X1)={r:.4f}, MNAR gap={np.mean(gaps):+.2f}")
    assert moments_ok and corr_ok and seed_ok
    assert mcar_ok and mnar_ok
    assert ident_ok and toy_mean_ok and toy_q_ok


# ---------------------------------------------------------------- check 7


def _tie_heavy_datasets():
    sex_kind = VariableKind(Kind.NOMINAL, categories=("M", "F"))
    age_kind = VariableKind(Kind.NUMERIC)

    def side(rows):
        return Dataset((
            Column.from_cells("sex", sex_kind, [r[0] for r in rows]),
            Column.from_cells("age", age_kind, [r[1] for r in rows]),
        ))

    rec = side([("M", 10.0), ("F", 20.0)])
    base = [("M", 10.0), ("M", 20.0), ("F", 10.0), ("F", 20.0),
            ("M", 15.0), ("F", 15.0), ("M", 12.5), ("F", 17.5)]
    rows = [base[i % 8] for i in range(40)]
    return rec, side(rows), rows


def test_7_determinism_and_parallel_safety(tmp_path):
    outs = []
    for w in (1, 4, 16):
        p = tmp_path / f"rep_w{w}.json"
        rc = cli_main(["simulate", "--reps", "50", "--seed", "7",
                       "--workers", str(w), "--out", str(p)])
        assert rc == 0
        outs.append(p.read_bytes())
    bytes_ok = outs[0] == outs[1] == outs[2]

    rec, don, rows = _tie_heavy_datasets()
    cfg = DistanceConfig()
    first = PairwiseGower(rec, don, cfg).top_n(6, seed=3)
    second = PairwiseGower(rec, don, cfg).top_n(6, seed=3)
    repeat_ok = (
        np.array_equal(first.indices, second.indices)
        and np.array_equal(first.distances, second.distances)
        and np.array_equal(first.ties_at_cut, second.ties_at_cut)
    )

    perm = np.random.default_rng(9).permutation(40)
    shuffled = don.take(perm)
    third = PairwiseGower(rec, shuffled, cfg).top_n(6, seed=3)
    perm_ok = np.array_equal(first.distances, third.distances) and np.array_equal(
        first.ties_at_cut, third.ties_at_cut
    )
    for i in range(first.indices.shape[0]):
        picked = [rows[j] for j in first.indices[i]]
        picked_shuffled = [rows[perm[j]] for j in third.indices[i]]
        perm_ok = perm_ok and picked == picked_shuffled

    ok = bytes_ok and repeat_ok and perm_ok
    _verdict(7, "byte-identical reports, stable tie-breaks", ok,
             "workers 1/4/16 compared")
    assert bytes_ok
    assert repeat_ok
    assert perm_ok


# ---------------------------------------------------------------- check 8


def _benchmark_pair():
    rng = np.random.default_rng(99)

    def build(n):
        cols = [
            Column.from_cells("num1", VariableKind(Kind.NUMERIC),
                              [float(v) for v in rng.normal(100, 20, n)]),
            Column.from_cells("num2", VariableKind(Kind.NUMERIC),
                              [float(v) for v in rng.exponential(30, n)]),
        ]
        for name, k in (("c4", 4), ("c6", 6), ("c2", 2), ("c3", 3)):
            labels = tuple(f"c{i}" for i in range(k))
            vk = VariableKind(Kind.NOMINAL, categories=labels)
            cols.append(Column.from_cells(
                name, vk, [labels[v] for v in rng.integers(0, k, n)]))
        return Dataset(tuple(cols))

    return build(1000), build(7000)


def test_8_large_matching_single_thread():
    rec, don = _benchmark_pair()
    eng = PairwiseGower(rec, don, DistanceConfig())
    t0 = time.perf_counter()
    eng.top_n(5, workers=1)
    elapsed = time.perf_counter() - t0
    ok = elapsed < 10.0
    _verdict(8, "1000x7000 top-5 under 10 s single-threaded", ok, f"{elapsed:.2f} s")
    assert ok, elapsed


def test_8_worker_speedup():
    cpus = os.cpu_count() or 1
    if cpus < 4:
        _verdict(8, "plus >= 3x speedup at 4 workers", True,
                 f"host has {cpus} CPU{'s' if cpus > 1 else ''}, needs 4", word="SKIP")
        pytest.skip(f"speedup needs >= 4 CPUs, host has {cpus}")
    rec, don = _benchmark_pair()
    eng = PairwiseGower(rec, don, DistanceConfig())
    t0 = time.perf_counter()
    eng.top_n(5, workers=1)
    single = time.perf_counter() - t0
    t0 = time.perf_counter()
    eng.top_n(5, workers=4)
    quad = time.perf_counter() - t0
    ok = single / quad >= 3.0
    _verdict(8, "plus >= 3x speedup at 4 workers", ok, f"{single / quad:.1f}x")
    assert ok, (single, quad)

"""Command-line front end: stats, dist, match, impute, simulate, dummy-report.

Exit codes: 0 success, 1 usage problems (bad flags, missing required options,
invalid combinations), 2 data problems (malformed CSV/schema, values that
violate the schema, unsatisfiable matching).  Every randomized behaviour is
seeded; the default seed is 0, so runs are reproducible unless --seed varies.

A TOML file passed as --config supplies defaults for any flag, with a
[common] table applied to every subcommand and one table per subcommand;
explicit flags always win.  Matrices, matches and datasets are written as
CSV with 6-decimal numbers; reports are JSON at full precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python 3.10
    import tomli as tomllib  # type: ignore[no-redef]

import numpy as np

from .aggregate import (
    DistanceConfig,
    PairwiseGower,
    dummy_equivalence_report,
)
from .colstats import compute_stats, default_k, silverman_bandwidth
from .dataset import (
    DataError,
    Dataset,
    Kind,
    Schema,
    SchemaError,
    load_dataset,
)
from .hotdeck import nn_hotdeck
from .pervar import NumericMethod, Scaling
from .simulate import (
    Categorization,
    Mechanism,
    SimScenario,
    parse_methods,
    run_study,
    run_user_study,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise _UsageError(f"{self.prog}: {message}")


_METHOD_CHOICES = ("std", "iqr", "kde1", "kde2", "knn", "cond")


def _add_io_flags(p: argparse.ArgumentParser, *names: str) -> None:
    flags = {
        "schema": (["--schema"], {"metavar": "JSON", "help": "column schema file"}),
        "data": (["--data"], {"metavar": "CSV", "help": "input dataset"}),
        "recipients": (["--recipients"], {"metavar": "CSV", "help": "recipient rows"}),
        "donors": (["--donors"], {"metavar": "CSV", "help": "donor rows"}),
        "out": (["--out"], {"metavar": "PATH", "help": "output file"}),
        "seed": (["--seed"], {"type": int, "help": "RNG seed (default 0)"}),
        "workers": (["--workers"], {"type": int, "help": "worker processes (default 1)"}),
        "config": (["--config"], {"metavar": "TOML", "help": "config file of flag defaults"}),
    }
    for name in names:
        args, kw = flags[name]
        p.add_argument(*args, default=None, **kw)


def _add_method_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=_METHOD_CHOICES, default=None,
                   help="distance method (default std)")
    p.add_argument("--scale", choices=["range", "iqr"], default=None,
                   help="numeric scaling divisor (default per method)")
    p.add_argument("--knn-k", type=int, default=None, dest="knn_k",
                   help="neighbourhood size for knn (default sqrt rule)")
    p.add_argument("--weights", metavar="JSON", default=None,
                   help="JSON file mapping column to weight")
    p.add_argument("--force", action="store_true", default=None,
                   help="allow std with --scale iqr (switches to the IQR-capped distance)")


def _build_parser() -> tuple[_Parser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="gowermix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)
    subs: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("stats",
                       help="per-column scaling statistics as JSON")
    _add_io_flags(p, "data", "schema", "out", "config")
    subs["stats"] = p

    p = sub.add_parser("dist", help="dense distance matrix CSV")
    _add_io_flags(p, "recipients", "donors", "schema", "out", "workers", "config")
    _add_method_flags(p)
    p.add_argument("--stats-from", choices=["union", "recipients", "donors"],
                   default=None, dest="stats_from",
                   help="rows defining the scaling statistics (default union)")
    subs["dist"] = p

    p = sub.add_parser("match", help="top-n donor matches CSV")
    _add_io_flags(p, "recipients", "donors", "schema", "out", "seed", "workers", "config")
    _add_method_flags(p)
    p.add_argument("--stats-from", choices=["union", "recipients", "donors"],
                   default=None, dest="stats_from")
    p.add_argument("--top-n", type=int, default=None, dest="top_n",
                   help="matches per recipient")
    subs["match"] = p

    p = sub.add_parser("impute",
                       help="fill a target column from nearest donors")
    _add_io_flags(p, "data", "schema", "out", "seed", "workers", "config")
    _add_method_flags(p)
    p.add_argument("--target", default=None, help="column to impute")
    p.add_argument("--pooled-stats", action="store_true", default=None,
                   dest="pooled_stats",
                   help="scale by all rows instead of donor rows only")
    p.add_argument("--max-uses", type=int, default=None, dest="max_uses",
                   help="cap on how many recipients one donor may serve")
    p.add_argument("--donor-map", metavar="CSV", default=None, dest="donor_map",
                   help="also write recipient/donor assignment CSV")
    subs["impute"] = p

    p = sub.add_parser("simulate",
                       help="imputation quality study (artificial or user data)")
    _add_io_flags(p, "data", "schema", "out", "seed", "workers", "config")
    p.add_argument("--scenario", choices=["fourcat", "threecat"], default=None,
                   help="artificial categorization layout (default fourcat)")
    p.add_argument("--outliers", action="store_true", default=None,
                   help="contaminate X1 with outliers")
    p.add_argument("--mechanism", choices=["mcar", "mar", "mnar"], default=None,
                   help="missingness mechanism (default mcar)")
    p.add_argument("--driver", default=None, help="driver column for MAR")
    p.add_argument("--reps", type=int, default=None, help="replications (default 200)")
    p.add_argument("--n", type=int, default=None, help="artificial sample size (default 500)")
    p.add_argument("--methods", default=None,
                   help='"all" or comma list like no.mod:range,cond.dist:iqr')
    p.add_argument("--reference-quantiles", choices=["empirical", "theoretical"],
                   default=None, dest="reference_quantiles",
                   help="reference for the quantile metrics (default empirical)")
    p.add_argument("--target", default=None, help="target column for user-data studies")
    p.add_argument("--trace", action="store_true", default=None,
                   help="include per-replication metric rows in the report")
    subs["simulate"] = p

    p = sub.add_parser("dummy-report",
                       help="categorical vs dummy-coded distance ratios CSV")
    _add_io_flags(p, "data", "schema", "out", "config")
    subs["dummy-report"] = p

    return parser, subs


# ---------------------------------------------------------------------------
# config file merging


def _load_config(path: str, cmd: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise _UsageError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise _UsageError(f"config file {path}: {exc}") from None
    merged: dict = {}
    for section in ("common", cmd):
        table = raw.get(section, {})
        if not isinstance(table, dict):
            raise _UsageError(f"config section [{section}] must be a table")
        for key, val in table.items():
            merged[key.replace("-", "_")] = val
    return merged


def _apply_config(ns: argparse.Namespace, cmd: str) -> None:
    if getattr(ns, "config", None) is None:
        return
    values = _load_config(ns.config, cmd)
    known = {k for k in vars(ns) if k not in ("cmd", "config")}
    unknown = set(values) - known
    if unknown:
        raise _UsageError(f"config file sets unknown keys for {cmd}: {sorted(unknown)}")
    for key, val in values.items():
        if getattr(ns, key) is None:
            setattr(ns, key, val)


def _require(ns: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(ns, name) is None:
            flag = "--" + name.replace("_", "-")
            raise _UsageError(f"gowermix {ns.cmd}: {flag} is required")


def _default(ns: argparse.Namespace, **defaults) -> None:
    for key, val in defaults.items():
        if getattr(ns, key) is None:
            setattr(ns, key, val)


# ---------------------------------------------------------------------------
# shared pieces


def _read(ns: argparse.Namespace, attr: str) -> Dataset:
    schema = Schema.from_json(ns.schema)
    return load_dataset(getattr(ns, attr), schema)


def _distance_config(ns: argparse.Namespace) -> DistanceConfig:
    method, scale = ns.method, ns.scale
    if method == "std":
        if scale == "iqr":
            if not ns.force:
                raise _UsageError(
                    "std always scales by range; --scale iqr needs --force, "
                    "which switches to the IQR-capped distance"
                )
            method = "iqr"
        scale = "range"
    scaling = Scaling(scale) if scale else Scaling.RANGE
    weights = {}
    if ns.weights:
        try:
            weights = json.loads(Path(ns.weights).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise _UsageError(f"weights file not found: {ns.weights}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"weights file {ns.weights}: {exc}") from exc
        if not isinstance(weights, dict):
            raise DataError("weights file must be a JSON object of column: weight")
        weights = {str(k): float(v) for k, v in weights.items()}
    if method == "cond":
        return DistanceConfig(conditional=True, conditional_scaling=scaling, weights=weights)
    if method == "iqr":
        if ns.scale == "range":
            raise _UsageError("method iqr always scales by IQR; drop --scale range")
        nm = NumericMethod.iqr_capped()
    elif method == "kde1":
        nm = NumericMethod.kde(1.06, scaling)
    elif method == "kde2":
        nm = NumericMethod.kde(0.9, scaling)
    elif method == "knn":
        nm = NumericMethod.knn(ns.knn_k, scaling)
    else:
        nm = NumericMethod.standard()
    return DistanceConfig(numeric_method=nm, weights=weights)


def _fmt(d: float) -> str:
    return "NA" if np.isnan(d) else f"{d:.6f}"


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_stats(ns: argparse.Namespace) -> int:
    _require(ns, "data", "schema")
    data = _read(ns, "data")
    report: dict[str, object] = {}
    for col in data:
        if col.kind.kind is not Kind.NUMERIC:
            continue
        st = compute_stats(col)
        entry = {
            "n": st.n,
            "min": st.vmin,
            "max": st.vmax,
            "range": st.vrange,
            "q25": st.q25,
            "q75": st.q75,
            "iqr": st.iqr,
            "sd": st.sd,
            "mean": st.mean,
            "k_default": default_k(st.n),
        }
        if st.n >= 2:
            entry["h_c1.06"] = silverman_bandwidth(st, 1.06)
            entry["h_c0.9"] = silverman_bandwidth(st, 0.9)
        report[col.name] = entry
    _write_text(ns.out, json.dumps(report, indent=2) + "\n")
    return 0


def _cmd_dist(ns: argparse.Namespace) -> int:
    _require(ns, "recipients", "donors", "schema", "out")
    _default(ns, method="std", stats_from="union", workers=1)
    recipients = _read(ns, "recipients")
    donors = _read(ns, "donors")
    engine = PairwiseGower(
        recipients, donors, _distance_config(ns), stats_from=ns.stats_from
    )
    matrix = engine.matrix(workers=ns.workers)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in matrix:
        w.writerow([_fmt(d) for d in row])
    Path(ns.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def _cmd_match(ns: argparse.Namespace) -> int:
    _require(ns, "recipients", "donors", "schema", "out", "top_n")
    _default(ns, method="std", stats_from="union", workers=1, seed=0)
    recipients = _read(ns, "recipients")
    donors = _read(ns, "donors")
    engine = PairwiseGower(
        recipients, donors, _distance_config(ns), stats_from=ns.stats_from
    )
    res = engine.top_n(ns.top_n, seed=ns.seed, workers=ns.workers)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["recipient", "rank", "donor", "distance"])
    for r in range(res.n_recipients):
        for rank in range(ns.top_n):
            w.writerow(
                [r, rank + 1, int(res.indices[r, rank]), _fmt(res.distances[r, rank])]
            )
    Path(ns.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def _dataset_csv(data: Dataset, schema: Schema) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(data.names)
    for i in range(data.n_rows):
        row = []
        for col in data:
            v = col.cell(i)
            if v is None:
                row.append(schema[col.name].missing_token)
            elif isinstance(v, float):
                row.append(f"{v:.6f}")
            else:
                row.append(v)
        w.writerow(row)
    return buf.getvalue()


def _cmd_impute(ns: argparse.Namespace) -> int:
    _require(ns, "data", "schema", "target", "out")
    _default(ns, method="std", workers=1, seed=0, pooled_stats=False)
    schema = Schema.from_json(ns.schema)
    data = load_dataset(ns.data, schema)
    result = nn_hotdeck(
        data,
        ns.target,
        _distance_config(ns),
        seed=ns.seed,
        pooled_stats=bool(ns.pooled_stats),
        max_uses=ns.max_uses,
        workers=ns.workers,
    )
    Path(ns.out).write_text(_dataset_csv(result.completed, schema), encoding="utf-8")
    if ns.donor_map:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["recipient_row", "donor_row", "distance", "ties"])
        for r in range(result.n_imputed):
            w.writerow(
                [
                    int(result.recipient_rows[r]),
                    int(result.donor_rows[r]),
                    _fmt(result.distances[r]),
                    int(result.ties_at_selection[r]),
                ]
            )
        Path(ns.donor_map).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def _cmd_simulate(ns: argparse.Namespace) -> int:
    _default(
        ns,
        scenario="fourcat",
        mechanism="mcar",
        reps=200,
        n=500,
        seed=0,
        methods="all",
        reference_quantiles="empirical",
        workers=1,
        outliers=False,
        trace=False,
    )
    specs = parse_methods(ns.methods)
    scenario = SimScenario(
        n=ns.n,
        reps=ns.reps,
        categorization=Categorization(ns.scenario),
        outliers=bool(ns.outliers),
        mechanism=Mechanism(ns.mechanism),
        mar_driver=ns.driver,
        seed=ns.seed,
        reference_quantiles=ns.reference_quantiles,
    )
    if ns.data is not None:
        _require(ns, "schema", "target")
        data = _read(ns, "data")
        report = run_user_study(
            data, ns.target, scenario, specs, workers=ns.workers, trace=bool(ns.trace)
        )
    else:
        report = run_study(scenario, specs, workers=ns.workers, trace=bool(ns.trace))
    _write_text(ns.out, json.dumps(report.to_dict(), indent=2) + "\n")
    return 0


def _cmd_dummy_report(ns: argparse.Namespace) -> int:
    _require(ns, "data", "schema", "out")
    data = _read(ns, "data")
    report = dummy_equivalence_report(data)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["i", "j", "d_sm", "d_dice", "d_manh", "d_euc2",
         "ratio_manh", "ratio_euc2", "ratio_sm_p"]
    )
    for row in report.rows():
        w.writerow(
            [row["i"], row["j"]]
            + [_fmt(row[k]) for k in
               ("d_sm", "d_dice", "d_manh", "d_euc2",
                "ratio_manh", "ratio_euc2", "ratio_sm_p")]
        )
    Path(ns.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


_DISPATCH = {
    "stats": _cmd_stats,
    "dist": _cmd_dist,
    "match": _cmd_match,
    "impute": _cmd_impute,
    "simulate": _cmd_simulate,
    "dummy-report": _cmd_dummy_report,
}


def main(argv: list[str] | None = None) -> int:
    parser, _ = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.cmd is None:
            parser.print_usage(sys.stderr)
            return 1
        _apply_config(ns, ns.cmd)
        return _DISPATCH[ns.cmd](ns)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (DataError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return 0 if code in (None, 0) else int(code)


if __name__ == "__main__":
    raise SystemExit(main())

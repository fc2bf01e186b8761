"""Builders shared across test modules.

``build_dataset``/``build_config`` turn the plain instance dicts understood by
``oracle_bruteforce`` into package objects, so both implementations can be fed
from one description.  ``random_instance`` draws small mixed-type instances
with missing cells, degenerate columns and every numeric method in rotation.
"""

from __future__ import annotations

import numpy as np

from gowermix import (
    Column,
    Dataset,
    DistanceConfig,
    Kind,
    NumericMethod,
    OrdinalPolicy,
    Scaling,
    Variant,
    VariableKind,
)


def make_kind(col: dict) -> VariableKind:
    cats = col.get("categories")
    return VariableKind(Kind(col["kind"]), tuple(cats) if cats is not None else None)


def build_dataset(columns: list[dict], rows: list[list]) -> Dataset:
    cols = []
    for idx, c in enumerate(columns):
        cols.append(Column.from_cells(c["name"], make_kind(c), [r[idx] for r in rows]))
    return Dataset(tuple(cols))


def _method_from_dict(m: dict | None) -> NumericMethod:
    if m is None:
        return NumericMethod.standard()
    variant = Variant(m["variant"])
    if variant is Variant.STANDARD:
        return NumericMethod.standard()
    if variant is Variant.IQR_CAPPED:
        return NumericMethod.iqr_capped()
    scaling = Scaling(m.get("scaling", "range"))
    if variant is Variant.KDE_WINDOW:
        return NumericMethod.kde(c=m.get("c", 1.06), scaling=scaling)
    return NumericMethod.knn(
        k=m.get("k"), scaling=scaling, symmetric=bool(m.get("symmetric"))
    )


def build_config(inst: dict) -> DistanceConfig:
    columns = inst["columns"]
    overrides = {
        c["name"]: _method_from_dict(c.get("method"))
        for c in columns
        if c["kind"] == "numeric" and not inst.get("conditional")
    }
    policies = {
        c["name"]: OrdinalPolicy(c.get("policy", "ratio"))
        for c in columns
        if c["kind"] == "ordinal"
    }
    return DistanceConfig(
        weights=dict(inst.get("weights") or {}),
        numeric_overrides=overrides,
        ordinal_overrides=policies,
        conditional=bool(inst.get("conditional")),
        conditional_scaling=Scaling(inst.get("conditional_scaling", "range")),
        ordinal_as_numeric=bool(inst.get("ordinal_as_numeric")),
    )


def instance_datasets(inst: dict) -> tuple[Dataset, Dataset | None]:
    a = build_dataset(inst["columns"], inst["a"])
    b = None if inst.get("b") is None else build_dataset(inst["columns"], inst["b"])
    return a, b


_NUMERIC_METHODS = [
    {"variant": "standard", "scaling": "range"},
    {"variant": "iqr_capped", "scaling": "iqr"},
    {"variant": "kde_window", "scaling": "range", "c": 1.06},
    {"variant": "kde_window", "scaling": "iqr", "c": 0.9},
    {"variant": "knn_window", "scaling": "range", "k": 1, "symmetric": False},
    {"variant": "knn_window", "scaling": "range", "k": 2, "symmetric": True},
    {"variant": "knn_window", "scaling": "iqr", "k": 2, "symmetric": False},
    {"variant": "knn_window", "scaling": "iqr", "k": 1, "symmetric": True},
]


def _random_column(rng: np.random.Generator, idx: int, kind: str) -> dict:
    col: dict = {"name": f"c{idx}", "kind": kind}
    if kind == "nominal":
        col["categories"] = [f"n{t}" for t in range(rng.integers(2, 4))]
    elif kind == "ordinal":
        col["categories"] = [f"o{t}" for t in range(rng.integers(2, 5))]
        col["policy"] = str(rng.choice(["ratio", "midrank"]))
    elif kind == "numeric":
        col["method"] = _NUMERIC_METHODS[rng.integers(len(_NUMERIC_METHODS))]
    return col


def _random_cell(rng: np.random.Generator, col: dict):
    kind = col["kind"]
    if kind in ("binary_symmetric", "binary_asymmetric"):
        return int(rng.integers(2))
    if kind in ("nominal", "ordinal"):
        cats = col["categories"]
        return cats[rng.integers(len(cats))]
    # an integer grid keeps ties and zero ranges in play
    if rng.random() < 0.7:
        return float(rng.integers(0, 10))
    return float(np.round(rng.uniform(0.0, 10.0), 3))


def _random_rows(rng: np.random.Generator, columns: list[dict], n: int) -> list[list]:
    rows = []
    for r in range(n):
        row = []
        for col in columns:
            # the first three rows stay observed so every reference pool has
            # enough values for bandwidths and neighbourhoods
            if r >= 3 and rng.random() < 0.3:
                row.append(None)
            else:
                row.append(_random_cell(rng, col))
        if all(v is None for v in row):
            keep = int(rng.integers(len(columns)))
            row[keep] = _random_cell(rng, columns[keep])
        rows.append(row)
    return rows


_KINDS = ["binary_symmetric", "binary_asymmetric", "nominal", "ordinal", "numeric"]


def random_instance(rng: np.random.Generator, *, conditional: bool = False) -> dict:
    if conditional:
        # first two columns guarantee one numeric and one categorical side
        n_cols = int(rng.integers(2, 5))
        kinds = ["numeric", str(rng.choice(_KINDS[:4]))]
        kinds += [str(rng.choice(_KINDS)) for _ in range(n_cols - 2)]
    else:
        n_cols = int(rng.integers(1, 5))
        kinds = [str(rng.choice(_KINDS)) for _ in range(n_cols)]
    columns = [_random_column(rng, i, k) for i, k in enumerate(kinds)]
    n_a = int(rng.integers(3, 7))
    self_pair = bool(rng.random() < 0.25)
    inst: dict = {
        "columns": columns,
        "a": _random_rows(rng, columns, n_a),
        "b": None if self_pair else _random_rows(rng, columns, int(rng.integers(3, 7))),
        "stats_from": str(rng.choice(["union", "recipients", "donors"])),
        "conditional": conditional,
        "conditional_scaling": str(rng.choice(["range", "iqr"])),
        "ordinal_as_numeric": bool(conditional and rng.random() < 0.3),
        "weights": None,
    }
    if not conditional and rng.random() < 0.5:
        w = {c["name"]: float(rng.choice([0.0, 0.5, 1.0, 2.0])) for c in columns}
        if all(v == 0.0 for v in w.values()):
            w[columns[0]["name"]] = 1.0
        inst["weights"] = w
    if conditional and inst["ordinal_as_numeric"]:
        # moving ordinals across must not empty the categorical side
        cat_left = [
            c for c in columns if c["kind"] in ("binary_symmetric", "binary_asymmetric", "nominal")
        ]
        if not cat_left:
            inst["ordinal_as_numeric"] = False
    return inst

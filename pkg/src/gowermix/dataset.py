"""Typed columns for mixed-type data with explicit missingness.

A :class:`Dataset` is an ordered collection of equal-length :class:`Column`
objects.  Each column carries a :class:`VariableKind` that fixes how cells are
stored and, downstream, how per-variable distances are computed:

* numeric columns hold ``float64`` values (``nan`` where missing),
* categorical columns (binary, nominal, ordinal) hold integer codes into the
  declared category tuple (``-1`` where missing).

Missingness is always tracked by an explicit boolean mask; the sentinel values
are kept consistent with the mask so vectorised kernels can use either.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "Kind",
    "VariableKind",
    "Column",
    "Dataset",
    "ColumnSchema",
    "Schema",
    "SchemaError",
    "DataError",
    "load_dataset",
    "save_dataset",
    "ordinal_to_ratio",
    "ordinal_to_midrank",
    "dummy_encode",
]


class SchemaError(ValueError):
    """A schema file or VariableKind declaration is malformed."""


class DataError(ValueError):
    """Data does not conform to its declared schema."""


class Kind(str, Enum):
    """Measurement level of a variable."""

    BINARY_SYMMETRIC = "binary_symmetric"
    BINARY_ASYMMETRIC = "binary_asymmetric"
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    NUMERIC = "numeric"

    @property
    def is_categorical(self) -> bool:
        return self is not Kind.NUMERIC

    @property
    def is_binary(self) -> bool:
        return self in (Kind.BINARY_SYMMETRIC, Kind.BINARY_ASYMMETRIC)


@dataclass(frozen=True)
class VariableKind:
    """Kind plus, for nominal/ordinal variables, the declared category labels.

    Ordinal categories are declared lowest-first; their order is meaningful.
    Binary variables always use the implicit categories ``0`` and ``1`` and
    must not declare their own.
    """

    kind: Kind
    categories: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind in (Kind.NOMINAL, Kind.ORDINAL):
            if self.categories is None or len(self.categories) < 2:
                raise SchemaError(
                    f"{self.kind.value} variables need at least two declared categories"
                )
            if len(set(self.categories)) != len(self.categories):
                raise SchemaError("category labels must be unique")
        elif self.categories is not None:
            raise SchemaError(f"{self.kind.value} variables do not take categories")

    @property
    def n_categories(self) -> int:
        if self.kind.is_binary:
            return 2
        if self.categories is None:
            raise SchemaError("numeric variables have no categories")
        return len(self.categories)

    def labels(self) -> tuple[str, ...]:
        """Labels used for code lookup and dummy naming ("0"/"1" for binary)."""
        if self.kind.is_binary:
            return ("0", "1")
        if self.categories is None:
            raise SchemaError("numeric variables have no categories")
        return self.categories


def _as_bool_mask(mask: Sequence[bool] | np.ndarray, n: int) -> np.ndarray:
    out = np.asarray(mask, dtype=bool)
    if out.shape != (n,):
        raise DataError(f"missing mask has shape {out.shape}, expected ({n},)")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Column:
    """One named, typed column with an aligned missingness mask.

    ``values`` is ``float64`` for numeric columns and integer codes for
    categorical ones.  Cells flagged missing hold the sentinel (``nan`` / -1).
    Arrays are read-only; derive new columns instead of mutating.
    """

    name: str
    kind: VariableKind
    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self) -> None:
        if not self.name:
            raise SchemaError("column name must be non-empty")
        vals = np.asarray(self.values)
        n = vals.shape[0] if vals.ndim == 1 else -1
        if vals.ndim != 1:
            raise DataError(f"column {self.name!r}: values must be one-dimensional")
        mask = _as_bool_mask(self.missing, n)
        if self.kind.kind is Kind.NUMERIC:
            vals = vals.astype(np.float64, copy=True)
            obs = vals[~mask]
            if not np.all(np.isfinite(obs)):
                raise DataError(f"column {self.name!r}: non-finite numeric value")
            vals[mask] = np.nan
        else:
            vals = vals.astype(np.int64, copy=True)
            ncat = self.kind.n_categories
            obs = vals[~mask]
            if obs.size and (obs.min() < 0 or obs.max() >= ncat):
                raise DataError(
                    f"column {self.name!r}: code outside 0..{ncat - 1}"
                )
            vals[mask] = -1
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "missing", mask)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def n_observed(self) -> int:
        return int((~self.missing).sum())

    def cell(self, i: int) -> float | str | None:
        """Cell value as a python object (label for categoricals), None if missing."""
        if self.missing[i]:
            return None
        if self.kind.kind is Kind.NUMERIC:
            return float(self.values[i])
        return self.kind.labels()[int(self.values[i])]

    @classmethod
    def from_cells(
        cls, name: str, kind: VariableKind, cells: Iterable[float | str | None]
    ) -> "Column":
        """Build a column from python cell values; ``None`` marks missing.

        Numeric cells accept anything ``float()`` accepts; categorical cells
        must be declared labels (binary: 0/1, as int or string).
        """
        cells = list(cells)
        n = len(cells)
        missing = np.array([c is None for c in cells], dtype=bool)
        if kind.kind is Kind.NUMERIC:
            vals = np.full(n, np.nan)
            for i, c in enumerate(cells):
                if c is None:
                    continue
                try:
                    vals[i] = float(c)  # type: ignore[arg-type]
                except (TypeError, ValueError) as exc:
                    raise DataError(f"column {name!r}, row {i}: {c!r} is not numeric") from exc
        else:
            labels = kind.labels()
            lookup = {lab: code for code, lab in enumerate(labels)}
            if kind.kind.is_binary:
                lookup.update({0: 0, 1: 1, 0.0: 0, 1.0: 1})
            vals = np.full(n, -1, dtype=np.int64)
            for i, c in enumerate(cells):
                if c is None:
                    continue
                try:
                    vals[i] = lookup[c]  # type: ignore[index]
                except (KeyError, TypeError):
                    raise DataError(
                        f"column {name!r}, row {i}: {c!r} is not a declared category"
                    ) from None
        return cls(name, kind, vals, missing)


@dataclass(frozen=True)
class Dataset:
    """Equal-length columns with unique names; rows are implicit by position.

    Construction rejects rows that are missing in every column, since such a
    row can never take part in any distance.
    """

    columns: tuple[Column, ...]

    def __post_init__(self) -> None:
        cols = tuple(self.columns)
        if not cols:
            raise DataError("dataset needs at least one column")
        names = [c.name for c in cols]
        if len(set(names)) != len(names):
            raise DataError("duplicate column names")
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise DataError("columns have unequal lengths")
        all_missing = np.logical_and.reduce([c.missing for c in cols])
        if all_missing.any():
            rows = np.flatnonzero(all_missing)[:5].tolist()
            raise DataError(f"rows {rows} are missing in every column")
        object.__setattr__(self, "columns", cols)

    def __len__(self) -> int:
        return len(self.columns[0])

    @property
    def n_rows(self) -> int:
        return len(self)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __iter__(self) -> Iterator[Column]:
        return iter(self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def drop(self, name: str) -> "Dataset":
        if name not in self:
            raise KeyError(name)
        return Dataset(tuple(c for c in self.columns if c.name != name))

    def replace(self, col: Column) -> "Dataset":
        """New dataset with the same-named column swapped out."""
        if col.name not in self:
            raise KeyError(col.name)
        return Dataset(tuple(col if c.name == col.name else c for c in self.columns))

    def take(self, rows: np.ndarray | Sequence[int]) -> "Dataset":
        idx = np.asarray(rows, dtype=np.int64)
        return Dataset(
            tuple(
                Column(c.name, c.kind, c.values[idx], c.missing[idx])
                for c in self.columns
            )
        )


# ---------------------------------------------------------------------------
# schema files


@dataclass(frozen=True)
class ColumnSchema:
    """Declared kind of one CSV column plus the token that encodes missing."""

    kind: VariableKind
    missing_token: str = ""


_KIND_ALIASES = {k.value: k for k in Kind}


@dataclass(frozen=True)
class Schema:
    """Column-name to :class:`ColumnSchema` mapping, in file order."""

    entries: tuple[tuple[str, ColumnSchema], ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate column in schema")
        if not names:
            raise SchemaError("schema declares no columns")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def __getitem__(self, name: str) -> ColumnSchema:
        for n, s in self.entries:
            if n == name:
                return s
        raise KeyError(name)

    @classmethod
    def from_mapping(cls, spec: Mapping[str, object]) -> "Schema":
        entries = []
        for name, raw in spec.items():
            if not isinstance(raw, Mapping):
                raise SchemaError(f"schema entry {name!r} must be an object")
            unknown = set(raw) - {"kind", "categories", "missing_token"}
            if unknown:
                raise SchemaError(f"schema entry {name!r}: unknown keys {sorted(unknown)}")
            kind_name = raw.get("kind")
            if kind_name not in _KIND_ALIASES:
                raise SchemaError(
                    f"schema entry {name!r}: kind must be one of {sorted(_KIND_ALIASES)}"
                )
            cats = raw.get("categories")
            vkind = VariableKind(
                _KIND_ALIASES[kind_name],  # type: ignore[index]
                tuple(str(c) for c in cats) if cats is not None else None,
            )
            token = raw.get("missing_token", "")
            if not isinstance(token, str):
                raise SchemaError(f"schema entry {name!r}: missing_token must be a string")
            entries.append((str(name), ColumnSchema(vkind, token)))
        return cls(tuple(entries))

    @classmethod
    def from_json(cls, source: str | Path | io.TextIOBase) -> "Schema":
        if isinstance(source, (str, Path)):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = source.read()
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"schema is not valid JSON: {exc}") from exc
        if not isinstance(spec, dict):
            raise SchemaError("schema JSON must be an object mapping column -> spec")
        return cls.from_mapping(spec)

    def to_json(self) -> str:
        out: dict[str, dict[str, object]] = {}
        for name, cs in self.entries:
            entry: dict[str, object] = {"kind": cs.kind.kind.value}
            if cs.kind.categories is not None:
                entry["categories"] = list(cs.kind.categories)
            if cs.missing_token:
                entry["missing_token"] = cs.missing_token
            out[name] = entry
        return json.dumps(out, indent=2)


# ---------------------------------------------------------------------------
# CSV round trip


def load_dataset(source: str | Path | io.TextIOBase, schema: Schema) -> Dataset:
    """Parse an RFC-4180 CSV with a header row against ``schema``.

    Every CSV column must be declared and every declared column present.
    A field equal to the column's missing token (default: empty) is missing.
    Binary cells must be the tokens ``0`` or ``1``.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(source))
    if not rows:
        raise DataError("CSV is empty (no header row)")
    header = rows[0]
    if len(set(header)) != len(header):
        raise DataError("CSV header has duplicate column names")
    declared = set(schema.names)
    present = set(header)
    if present - declared:
        raise SchemaError(f"CSV columns not in schema: {sorted(present - declared)}")
    if declared - present:
        raise SchemaError(f"schema columns not in CSV: {sorted(declared - present)}")

    body = rows[1:]
    for r, row in enumerate(body):
        if len(row) != len(header):
            raise DataError(f"row {r + 1}: expected {len(header)} fields, got {len(row)}")

    columns = []
    for j, name in enumerate(header):
        cs = schema[name]
        raw = [row[j] for row in body]
        cells: list[float | str | None] = []
        for r, tok in enumerate(raw):
            if tok == cs.missing_token:
                cells.append(None)
            elif cs.kind.kind is Kind.NUMERIC:
                try:
                    v = float(tok)
                except ValueError:
                    raise DataError(f"column {name!r}, row {r + 1}: {tok!r} is not numeric") from None
                cells.append(v)
            else:
                cells.append(tok)
        columns.append(Column.from_cells(name, cs.kind, cells))
    return Dataset(tuple(columns))


def _format_cell(col: Column, i: int, token: str) -> str:
    v = col.cell(i)
    if v is None:
        return token
    if isinstance(v, float):
        return repr(v)
    return v


def save_dataset(
    dataset: Dataset, dest: str | Path | io.TextIOBase, schema: Schema | None = None
) -> None:
    """Write ``dataset`` back to CSV; loading the result reproduces every cell.

    Missing cells are written as each column's missing token (empty when no
    schema is given).  Numeric cells use shortest round-trip formatting.
    """
    tokens = {c.name: (schema[c.name].missing_token if schema else "") for c in dataset}

    def write(fh: io.TextIOBase) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(dataset.names)
        for i in range(dataset.n_rows):
            w.writerow([_format_cell(c, i, tokens[c.name]) for c in dataset])

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write(fh)
    else:
        write(dest)


# ---------------------------------------------------------------------------
# ordinal transforms and dummy coding


def ordinal_to_ratio(col: Column, *, use_observed_max: bool = False) -> Column:
    """Map ordinal codes to equally spaced scores in [0, 1].

    A cell in category position o (1-based, declared order) becomes
    ``(o - 1) / (C - 1)``.  C is the declared category count, so the score of
    a cell does not depend on which categories happen to occur.  With
    ``use_observed_max`` the divisor instead uses the highest observed
    position; if only one position occurs, all scores collapse to 0.
    """
    if col.kind.kind is not Kind.ORDINAL:
        raise DataError(f"column {col.name!r} is not ordinal")
    pos = col.values.astype(np.float64) + 1.0
    if use_observed_max:
        obs = pos[~col.missing]
        if obs.size == 0:
            raise DataError(f"column {col.name!r} has no observed cells")
        c = float(obs.max())
    else:
        c = float(col.kind.n_categories)
    denom = c - 1.0
    z = np.zeros_like(pos) if denom == 0 else (pos - 1.0) / denom
    return Column(col.name, VariableKind(Kind.NUMERIC), z, col.missing.copy())


def ordinal_to_midrank(col: Column) -> Column:
    """Replace ordinal codes by the midrank of their category.

    Every cell in a category gets the average of the rank positions that the
    category's cells occupy when the observed column is sorted; ties therefore
    share one value.  Missing cells stay missing.
    """
    if col.kind.kind is not Kind.ORDINAL:
        raise DataError(f"column {col.name!r} is not ordinal")
    obs = col.values[~col.missing]
    if obs.size == 0:
        raise DataError(f"column {col.name!r} has no observed cells")
    mid = midranks_by_code(obs, col.kind.n_categories)
    vals = np.full(len(col), np.nan)
    vals[~col.missing] = mid[col.values[~col.missing]]
    return Column(col.name, VariableKind(Kind.NUMERIC), vals, col.missing.copy())


def midranks_by_code(observed_codes: np.ndarray, n_categories: int) -> np.ndarray:
    """Midrank per category code for a pool of observed ordinal codes.

    Codes absent from the pool map to ``nan`` (their rank is undefined).
    """
    counts = np.bincount(observed_codes, minlength=n_categories).astype(np.float64)
    below = np.concatenate(([0.0], np.cumsum(counts)[:-1]))
    mid = below + (counts + 1.0) / 2.0
    mid[counts == 0] = np.nan
    return mid


def dummy_encode(col: Column) -> tuple[Column, ...]:
    """Indicator columns, one per category, named ``<col>=<label>``.

    Indicators are asymmetric-binary: a 1 marks presence of that category.
    Missing cells stay missing in every indicator.
    """
    if not col.kind.kind.is_categorical:
        raise DataError(f"column {col.name!r} is not categorical")
    out = []
    for code, label in enumerate(col.kind.labels()):
        vals = (col.values == code).astype(np.int64)
        vals[col.missing] = -1
        out.append(
            Column(
                f"{col.name}={label}",
                VariableKind(Kind.BINARY_ASYMMETRIC),
                vals,
                col.missing.copy(),
            )
        )
    return tuple(out)

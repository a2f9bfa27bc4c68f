"""Tabular ingestion, two-class reduction, encoding and CV plans."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import NEGATIVE, POSITIVE, Dataset

NUMERIC = "numeric"
CATEGORICAL = "categorical"
DEFAULT_MISSING = ("?", "")
MISSING_CATEGORY = "<missing>"


class DataError(ValueError):
    """Malformed or unusable input data."""


@dataclass(frozen=True)
class RawTable:
    """Rectangular table of text cells; ``None`` marks a missing cell."""

    columns: tuple
    kinds: dict
    rows: tuple
    class_index: int
    name: str = "table"
    target: str | None = None

    @property
    def class_name(self):
        return self.columns[self.class_index]

    def feature_columns(self):
        return [j for j in range(len(self.columns)) if j != self.class_index]

    def class_values(self):
        return [row[self.class_index] for row in self.rows]

    def take(self, indices):
        return RawTable(
            self.columns,
            self.kinds,
            tuple(self.rows[i] for i in indices),
            self.class_index,
            self.name,
            self.target,
        )


def _parses_as_real(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, class_column=-1, kinds=None, delimiter=",", missing=DEFAULT_MISSING):
    """Read a delimited file with a header row into a :class:`RawTable`.

    ``class_column`` is a header name or a (possibly negative) column index.
    A column is numeric when every non-missing cell parses as a real number.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            records = list(csv.reader(fh, delimiter=delimiter))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    records = [r for r in records if r]
    if not records:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in records[0]]
    width = len(header)
    missing = set(missing)
    rows = []
    for i, rec in enumerate(records[1:], start=1):
        if len(rec) != width:
            raise DataError(
                f"{path}: ragged row at row {i} ({len(rec)} cells, header has {width})"
            )
        rows.append(tuple(None if c.strip() in missing else c.strip() for c in rec))
    if not rows:
        raise DataError(f"{path}: header but no data rows")

    if isinstance(class_column, str):
        if class_column not in header:
            raise DataError(f"{path}: unknown class column {class_column!r}")
        class_index = header.index(class_column)
    else:
        if not -width <= class_column < width:
            raise DataError(f"{path}: class column index {class_column} out of range")
        class_index = class_column % width

    inferred = {}
    for j, name in enumerate(header):
        if j == class_index:
            inferred[name] = CATEGORICAL
            continue
        cells = [r[j] for r in rows if r[j] is not None]
        inferred[name] = NUMERIC if all(_parses_as_real(c) for c in cells) else CATEGORICAL
    for name, kind in (kinds or {}).items():
        if name not in inferred:
            raise DataError(f"{path}: kind override for unknown column {name!r}")
        if kind not in (NUMERIC, CATEGORICAL):
            raise DataError(f"{path}: unknown column kind {kind!r} for {name!r}")
        if kind == NUMERIC:
            j = header.index(name)
            for i, r in enumerate(rows, start=1):
                if r[j] is not None and not _parses_as_real(r[j]):
                    raise DataError(f"{path}: non-numeric cell {r[j]!r} at row {i}, column {name!r}")
        inferred[name] = kind
    return RawTable(tuple(header), inferred, tuple(rows), class_index, name=path.stem)


def binarize(table, target=None):
    """Keep the two most frequent classes; the more frequent one is the target.

    Frequency ties are broken by lexicographic class name. ``target`` may
    name either of the two retained classes to override the default.
    """
    counts = Counter(v for v in table.class_values() if v is not None)
    if len(counts) < 2:
        raise DataError(
            f"{table.name}: need at least 2 distinct classes, found {sorted(counts)}"
        )
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    keep = {ranked[0][0], ranked[1][0]}
    if target is None:
        target = ranked[0][0]
    elif target not in keep:
        raise DataError(f"{table.name}: target {target!r} is not one of the two main classes")
    idx = [i for i, v in enumerate(table.class_values()) if v in keep]
    out = table.take(idx)
    return RawTable(out.columns, out.kinds, out.rows, out.class_index, out.name, target)


@dataclass(frozen=True)
class Encoder:
    """Column transforms fitted on a positives-only training portion."""

    columns: tuple
    kinds: dict
    class_index: int
    target: str
    medians: dict = field(default_factory=dict)
    mins: dict = field(default_factory=dict)
    maxs: dict = field(default_factory=dict)
    categories: dict = field(default_factory=dict)

    @property
    def feature_names(self):
        names = []
        for j, col in enumerate(self.columns):
            if j == self.class_index:
                continue
            if self.kinds[col] == NUMERIC:
                names.append(col)
            else:
                names.extend(f"{col}={c}" for c in self.categories[col])
        return tuple(names)

    def transform(self, table, name=None):
        n = len(table.rows)
        blocks = []
        for j, col in enumerate(self.columns):
            if j == self.class_index:
                continue
            cells = [r[j] for r in table.rows]
            if self.kinds[col] == NUMERIC:
                v = np.array(
                    [self.medians[col] if c is None else float(c) for c in cells],
                    dtype=np.float64,
                )
                lo, hi = self.mins[col], self.maxs[col]
                if hi > lo:
                    v = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
                else:
                    v = np.zeros(n)
                blocks.append(v.reshape(-1, 1))
            else:
                cats = self.categories[col]
                pos = {c: k for k, c in enumerate(cats)}
                onehot = np.zeros((n, len(cats)))
                for i, c in enumerate(cells):
                    k = pos.get(MISSING_CATEGORY if c is None else c)
                    if k is not None:
                        onehot[i, k] = 1.0
                blocks.append(onehot)
        X = np.hstack(blocks) if blocks else np.zeros((n, 0))
        y = np.array(
            [POSITIVE if v == self.target else NEGATIVE for v in table.class_values()],
            dtype=np.int64,
        )
        return Dataset(X, y, name or table.name, self.feature_names)


def fit_encoder(table, fit_rows=None):
    """Fit imputation, one-hot vocabularies and min-max ranges.

    Statistics come from the target-class rows among ``fit_rows`` (all rows
    when omitted), so negatives never influence the transform.
    """
    if table.target is None:
        raise DataError(f"{table.name}: binarize the table before encoding")
    fit_rows = range(len(table.rows)) if fit_rows is None else fit_rows
    rows = [table.rows[i] for i in fit_rows if table.rows[i][table.class_index] == table.target]
    if not rows:
        raise DataError(f"{table.name}: no target-class rows to fit the encoder on")
    medians, mins, maxs, categories = {}, {}, {}, {}
    for j, col in enumerate(table.columns):
        if j == table.class_index:
            continue
        cells = [r[j] for r in rows]
        if table.kinds[col] == NUMERIC:
            vals = [float(c) for c in cells if c is not None]
            if not vals:
                raise DataError(f"{table.name}: column {col!r} is entirely missing")
            med = float(np.median(vals))
            filled = [med if c is None else float(c) for c in cells]
            medians[col], mins[col], maxs[col] = med, min(filled), max(filled)
        else:
            seen = sorted({c for c in cells if c is not None})
            if not seen and all(c is None for c in cells):
                raise DataError(f"{table.name}: column {col!r} is entirely missing")
            if any(c is None for c in cells):
                seen.append(MISSING_CATEGORY)
            categories[col] = tuple(seen)
    return Encoder(
        table.columns, dict(table.kinds), table.class_index, table.target,
        medians, mins, maxs, categories,
    )


def encode_and_normalize(table, fit_rows=None):
    """Encode a binarized table; returns ``(dataset, encoder)``."""
    encoder = fit_encoder(table, fit_rows)
    return encoder.transform(table), encoder


@dataclass(frozen=True)
class CVPlan:
    """Repetitions of a two-way split; each yields two train/test folds."""

    repetitions: tuple
    seed: int

    def folds(self):
        """Yield ``(repetition, fold, train_idx, test_idx)``."""
        for r, (a, b) in enumerate(self.repetitions):
            yield r, 0, a, b
            yield r, 1, b, a

    def __eq__(self, other):
        if not isinstance(other, CVPlan):
            return NotImplemented
        return self.seed == other.seed and len(self.repetitions) == len(other.repetitions) and all(
            np.array_equal(a1, a2) and np.array_equal(b1, b2)
            for (a1, b1), (a2, b2) in zip(self.repetitions, other.repetitions)
        )

    __hash__ = None


def _rng(seed, *stream):
    if seed < 0:
        raise ValueError("seeds must be nonnegative integers")
    return np.random.default_rng([seed, *stream])


def make_5x2_plan(n, seed, repetitions=5):
    """Five shuffled halvings of ``range(n)``; the first half gets the odd element."""
    if n < 4:
        raise ValueError(f"5x2 cross-validation needs n >= 4, got {n}")
    reps = []
    for r in range(repetitions):
        perm = _rng(seed, r).permutation(n)
        half = (n + 1) // 2
        reps.append((np.sort(perm[:half]), np.sort(perm[half:])))
    return CVPlan(tuple(reps), seed)


def make_kfold_plan(indices, k, seed):
    """Shuffled k-fold partition of ``indices`` as ``[(train, holdout), ...]``.

    Holdout sizes differ by at most one, larger folds first.
    """
    indices = np.asarray(indices, dtype=np.int64)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if k > len(indices):
        raise ValueError(f"k={k} exceeds the number of indices ({len(indices)})")
    perm = _rng(seed).permutation(indices)
    holdouts = np.array_split(perm, k)
    plan = []
    for i, hold in enumerate(holdouts):
        train = np.concatenate([h for j, h in enumerate(holdouts) if j != i])
        plan.append((np.sort(train), np.sort(hold)))
    return plan


def load_dataset(path, class_column=-1, delimiter=",", missing=DEFAULT_MISSING, target=None):
    """Convenience: load, binarize and return the raw table ready for encoding."""
    return binarize(load_csv(path, class_column, None, delimiter, missing), target)


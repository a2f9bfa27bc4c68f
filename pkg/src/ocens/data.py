"""Core value types: instances, datasets, scores and votes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

POSITIVE = 1
NEGATIVE = 0
UNLABELED = -1


def score_to_vote(score, theta):
    """Indicator ``score >= theta``; works on scalars and arrays alike."""
    vote = np.asarray(score) >= np.asarray(theta)
    if vote.ndim == 0:
        return int(vote)
    return vote.astype(np.int64)


def _check_unit(value, what):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{what} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class Score:
    value: float

    def __post_init__(self):
        _check_unit(self.value, "score")


@dataclass(frozen=True)
class Threshold:
    theta: float

    def __post_init__(self):
        _check_unit(self.theta, "threshold")


@dataclass(frozen=True)
class Instance:
    features: np.ndarray
    label: int = UNLABELED


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense feature matrix plus per-row labels.

    ``X`` has shape ``(n, D)``; ``y`` holds ``POSITIVE``, ``NEGATIVE`` or
    ``UNLABELED`` per row. Arrays are made read-only on construction.
    """

    X: np.ndarray
    y: np.ndarray
    name: str = "dataset"
    feature_names: tuple = field(default=())

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64, copy=True)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.array(self.y, dtype=np.int64, copy=True).reshape(-1)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ValueError("a dataset needs a nonempty 2-D feature matrix")
        if y.shape[0] != X.shape[0]:
            raise ValueError(f"{X.shape[0]} rows but {y.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        if not np.all(np.isin(y, (POSITIVE, NEGATIVE, UNLABELED))):
            raise ValueError("labels must be POSITIVE, NEGATIVE or UNLABELED")
        names = tuple(self.feature_names) or tuple(f"x{j}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise ValueError("feature_names length does not match dimensionality")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    def __len__(self):
        return self.X.shape[0]

    def __getitem__(self, i):
        return Instance(self.X[i], int(self.y[i]))

    @property
    def dim(self):
        return self.X.shape[1]

    def subset(self, indices):
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx], self.name, self.feature_names)

    def positives(self):
        """Positives-only view: the only thing a one-class learner may see."""
        return self.subset(np.flatnonzero(self.y == POSITIVE))

    def negatives(self):
        return self.subset(np.flatnonzero(self.y == NEGATIVE))

    def census(self):
        return {
            "positive": int(np.sum(self.y == POSITIVE)),
            "negative": int(np.sum(self.y == NEGATIVE)),
            "unlabeled": int(np.sum(self.y == UNLABELED)),
        }

    @classmethod
    def from_positives(cls, X, name="positives", feature_names=()):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        return cls(X, np.full(X.shape[0], POSITIVE), name, feature_names)


def require_positive_view(data):
    """Return the feature matrix of a positives-only view or raise.

    Plain arrays are accepted and treated as target-class samples.
    """
    if isinstance(data, Dataset):
        if np.any(data.y != POSITIVE):
            raise ValueError(
                f"training view is not positives-only: census {data.census()}"
            )
        return data.X
    X = np.asarray(data, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    return X

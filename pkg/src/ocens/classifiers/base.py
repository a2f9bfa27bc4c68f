from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from ..data import Dataset, Instance, score_to_vote

PGA = "PGA"
GDE = "GDE"
DENSITY_AGG = "DENSITY_AGG"
OCSVM = "OCSVM"
ALGORITHMS = (PGA, GDE, DENSITY_AGG, OCSVM)


@dataclass(frozen=True)
class ClassifierSpec:
    """Algorithm tag, hyperparameters and a display name."""

    algorithm: str
    params: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if not self.name:
            object.__setattr__(self, "name", self.algorithm)
        object.__setattr__(self, "params", dict(self.params))

    def __hash__(self):
        return hash((self.algorithm, self.name, tuple(sorted(self.params.items()))))


def as_matrix(x, dim=None):
    """Coerce an Instance, Dataset, vector or matrix into a 2-D float array."""
    if isinstance(x, Instance):
        x = x.features
    elif isinstance(x, Dataset):
        x = x.X
    X = np.asarray(x, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected a vector or matrix, got shape {X.shape}")
    if dim is not None and X.shape[1] != dim:
        raise ValueError(f"dimensionality mismatch: model expects {dim}, got {X.shape[1]}")
    return X


def pairwise_distances(A, B):
    """Euclidean distance matrix between the rows of ``A`` and ``B``."""
    return cdist(A, B)


def nearest_other_distances(X, k=1):
    """Mean distance from each row to its ``k`` nearest *other* rows."""
    D = pairwise_distances(X, X)
    np.fill_diagonal(D, np.inf)
    k = min(k, X.shape[0] - 1)
    return np.mean(np.sort(D, axis=1)[:, :k], axis=1)


class TrainedClassifier:
    """A fitted one-class model producing scores in [0, 1].

    Subclasses set ``algorithm``, ``theta``, ``params``, ``dim`` and
    implement ``_score(X)`` plus the ``state``/``from_state`` pair used by
    serialization.
    """

    algorithm = None

    def __init__(self, theta, params, dim, name=""):
        self.theta = float(theta)
        self.params = dict(params)
        self.dim = int(dim)
        self.name = name or self.algorithm

    def score(self, x):
        """Score one instance (returns a float) or a batch (returns an array)."""
        single = isinstance(x, Instance) or (
            not isinstance(x, Dataset) and np.ndim(x) == 1
        )
        s = np.clip(self._score(as_matrix(x, self.dim)), 0.0, 1.0)
        return float(s[0]) if single else s

    def predict(self, x):
        return score_to_vote(self.score(x), self.theta)

    def _score(self, X):
        raise NotImplementedError

    def state(self):
        raise NotImplementedError

    @classmethod
    def from_state(cls, theta, params, dim, name, state):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} dim={self.dim} theta={self.theta:.4g}>"

"""Global density estimation via r-ball neighbour counts."""

from __future__ import annotations

import math

import numpy as np

from ..data import require_positive_view
from .base import GDE, TrainedClassifier, nearest_other_distances, pairwise_distances


class GDEModel(TrainedClassifier):
    """Compares the r-ball count of a point with the training counts.

    ``z`` standardises the count against the leave-self-out training
    counts. Only the sparse side is penalised: ``score = exp(-min(z, 0)**2)``
    with threshold 1/2, so points at or above the mean count score 1 and a
    point is rejected once ``z < -sqrt(ln 2)``. When every training
    count is equal (``count_std == 0``) a point is accepted iff its count
    is at least ``count_mean - 1`` and rejected points score below 1/2,
    decaying with the shortfall.
    """

    algorithm = GDE

    def __init__(self, X, radius, count_mean, count_std, name=""):
        super().__init__(0.5, {}, X.shape[1], name)
        self.X = X
        self.radius = float(radius)
        self.count_mean = float(count_mean)
        self.count_std = float(count_std)

    def neighbour_counts(self, X):
        return np.sum(pairwise_distances(X, self.X) <= self.radius, axis=1)

    def score_counts(self, counts):
        counts = np.asarray(counts, dtype=np.float64)
        if self.count_std > 0:
            z = (counts - self.count_mean) / self.count_std
            z = np.minimum(z, 0.0)
            return np.exp(-(z * z))
        shortfall = (self.count_mean - 1.0) - counts
        return np.where(shortfall <= 0, 1.0, 0.5 * np.exp(-np.maximum(shortfall, 0.0)))

    def _score(self, X):
        return self.score_counts(self.neighbour_counts(X))

    def state(self):
        return {
            "X": self.X,
            "radius": self.radius,
            "count_mean": self.count_mean,
            "count_std": self.count_std,
        }

    @classmethod
    def from_state(cls, theta, params, dim, name, state):
        return cls(state["X"], state["radius"], state["count_mean"], state["count_std"], name)


def train_gde(positives, name="GDE"):
    X = require_positive_view(positives)
    n = X.shape[0]
    if n < 2:
        raise ValueError("GDE needs at least 2 positives")
    radius = 2.0 * float(np.mean(nearest_other_distances(X, 1)))
    counts = np.sum(pairwise_distances(X, X) <= radius, axis=1) - 1
    mean = float(np.mean(counts))
    std = float(np.std(counts, ddof=1))
    if not math.isfinite(std) or std < 1e-12:
        std = 0.0
    return GDEModel(X.copy(), radius, mean, std, name)

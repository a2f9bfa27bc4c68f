"""Peer-group analysis turned into a one-class classifier."""

from __future__ import annotations

import numpy as np

from ..data import require_positive_view
from .base import PGA, TrainedClassifier, nearest_other_distances, pairwise_distances


class PGAModel(TrainedClassifier):
    """Scores a point by how its nearest-neighbour distance ranks among the
    training points' own nearest-neighbour distances.

    ``score(x) = 1 - ECDF(d_x)`` with a strict-inequality ECDF, so a point
    sitting on a training sample scores 1 and a point farther out than
    every training gap scores 0. The threshold is ``p_alpha``: rejection
    means ``d_x`` lies in the upper ``p_alpha`` tail of the gaps.
    """

    algorithm = PGA

    def __init__(self, X, gaps, p_alpha, k_nn, name=""):
        super().__init__(p_alpha, {"p_alpha": p_alpha, "k_nn": k_nn}, X.shape[1], name)
        self.X = X
        self.gaps = np.sort(gaps)
        self.k_nn = int(k_nn)

    def distance_to_sample(self, X):
        D = pairwise_distances(X, self.X)
        k = min(self.k_nn, self.X.shape[0])
        return np.mean(np.sort(D, axis=1)[:, :k], axis=1)

    def _score(self, X):
        d = self.distance_to_sample(X)
        below = np.searchsorted(self.gaps, d, side="left")
        return 1.0 - below / len(self.gaps)

    def state(self):
        return {"X": self.X, "gaps": self.gaps}

    @classmethod
    def from_state(cls, theta, params, dim, name, state):
        return cls(state["X"], state["gaps"], params["p_alpha"], params["k_nn"], name)


def train_pga(positives, p_alpha=0.01, k_nn=1, name="PGA"):
    X = require_positive_view(positives)
    if X.shape[0] < 2:
        raise ValueError("PGA needs at least 2 positives")
    if not 0.0 < p_alpha < 1.0:
        raise ValueError(f"p_alpha must lie in (0, 1), got {p_alpha}")
    if k_nn < 1:
        raise ValueError(f"k_nn must be >= 1, got {k_nn}")
    gaps = nearest_other_distances(X, k_nn)
    return PGAModel(X.copy(), gaps, float(p_alpha), int(k_nn), name)

"""Per-attribute histogram density aggregator.

A stand-in for an unpublished density aggregator: each encoded feature gets a Laplace-smoothed
equal-width histogram on [0, 1]; the per-feature densities of a point are
pooled with a harmonic or geometric mean, normalised by the largest pooled
value seen in training, and thresholded so that a fraction ``s`` of the
training positives is rejected.
"""

from __future__ import annotations

import math

import numpy as np

from ..data import require_positive_view
from .base import DENSITY_AGG, TrainedClassifier

HARMONIC = "harmonic"
GEOMETRIC = "geometric"


def rejection_count(s, n):
    # 0.02 * 100 must give 2, not 3
    return min(n, int(math.ceil(s * n - 1e-9)))


class DensityAggModel(TrainedClassifier):
    algorithm = DENSITY_AGG

    def __init__(self, densities, psi, s, max_raw, theta, name=""):
        super().__init__(theta, {"psi": psi, "s": s}, densities.shape[0], name)
        self.densities = densities
        self.psi = psi
        self.s = float(s)
        self.max_raw = float(max_raw)

    @property
    def n_bins(self):
        return self.densities.shape[1]

    @property
    def floor_density(self):
        """Density of an empty bin: the smoothing mass alone."""
        return self.s / (1.0 + self.s)

    def feature_densities(self, X):
        bins = np.clip(np.floor(X * self.n_bins), 0, self.n_bins - 1).astype(np.int64)
        dens = self.densities[np.arange(self.dim)[None, :], bins]
        # the histograms have no support outside [0, 1]
        outside = (X < 0.0) | (X > 1.0)
        return np.where(outside, self.floor_density, dens)

    def raw_score(self, X):
        dens = self.feature_densities(X)
        if self.psi == HARMONIC:
            return self.dim / np.sum(1.0 / dens, axis=1)
        return np.exp(np.mean(np.log(dens), axis=1))

    def _score(self, X):
        return np.clip(self.raw_score(X) / self.max_raw, 0.0, 1.0)

    def state(self):
        return {"densities": self.densities, "max_raw": self.max_raw}

    @classmethod
    def from_state(cls, theta, params, dim, name, state):
        return cls(state["densities"], params["psi"], params["s"], state["max_raw"], theta, name)


def train_density_agg(positives, psi=HARMONIC, s=0.02, name="DENSITY_AGG"):
    X = require_positive_view(positives)
    n, dim = X.shape
    if n < 2:
        raise ValueError("the density aggregator needs at least 2 positives")
    if psi not in (HARMONIC, GEOMETRIC):
        raise ValueError(f"psi must be {HARMONIC!r} or {GEOMETRIC!r}, got {psi!r}")
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    n_bins = int(math.ceil(math.sqrt(n)))
    bins = np.clip(np.floor(X * n_bins), 0, n_bins - 1).astype(np.int64)
    counts = np.zeros((dim, n_bins))
    for j in range(dim):
        counts[j] = np.bincount(bins[:, j], minlength=n_bins)
    pseudo = s * n
    densities = (counts + pseudo / n_bins) / (n + pseudo) * n_bins

    model = DensityAggModel(densities, psi, s, 1.0, 0.0, name)
    raw = model.raw_score(X)
    model.max_raw = float(np.max(raw))
    train_scores = np.sort(np.clip(raw / model.max_raw, 0.0, 1.0))
    m = rejection_count(s, n)
    model.theta = float(train_scores[m]) if m < n else 1.0
    return model

"""Estimated best-classifier ensemble: delegate to the member that looks
best under a positives-only 5x2 estimate."""

from __future__ import annotations

import numpy as np

from .. import classifiers
from ..data import Dataset, require_positive_view
from ..dataset_io import make_5x2_plan
from ..estimation import DEFAULT_PRIOR, OCF, estimate_member_performance


def select_dominant(values):
    """Index of the largest estimate; the earliest wins ties."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("no estimates to choose from")
    return int(np.argmax(values))


class ESBEModel:
    def __init__(self, members, dominant, estimates):
        self.members = list(members)
        self.dominant = int(dominant)
        self.estimates = list(estimates)

    @property
    def dominant_member(self):
        return self.members[self.dominant]

    @property
    def theta(self):
        return self.dominant_member.theta

    def score(self, x):
        return self.dominant_member.score(x)

    def predict(self, x):
        return self.dominant_member.predict(x)


def train_esbe(specs, positives, metric=OCF, prior=DEFAULT_PRIOR, seed=0, members=None):
    """Pick the dominant member and fit every member on all positives.

    Pass already-fitted ``members`` (same order as ``specs``) to skip the
    final refit.
    """
    if not specs:
        raise ValueError("ESBE needs at least one member spec")
    X = require_positive_view(positives)
    view = positives if isinstance(positives, Dataset) else Dataset.from_positives(X)
    plan = make_5x2_plan(X.shape[0], seed)
    if len(specs) == 1:
        estimates = []
        dominant = 0
    else:
        estimates = [
            estimate_member_performance(s, view, metric, prior, plan) for s in specs
        ]
        dominant = select_dominant([e.value for e in estimates])
    if members is None:
        members = [classifiers.train(s, view) for s in specs]
    return ESBEModel(members, dominant, estimates)

"""Positives-only performance estimates (OCA, OCF) and member weights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import classifiers
from .data import require_positive_view, Dataset
from .dataset_io import CVPlan, make_5x2_plan

OCA = "OCA"
OCF = "OCF"
METRICS = (OCA, OCF)
DEFAULT_PRIOR = 0.5


class FoldError(RuntimeError):
    def __init__(self, fold, cause):
        super().__init__(f"training failed in fold {fold}: {cause}")
        self.fold = fold


@dataclass(frozen=True)
class PerformanceEstimate:
    metric: str
    value: float
    p1: float
    fnr: float
    tpr: float
    prior: float


def oca(p1, fnr, prior):
    """One minus the rewritten error ``P[f=1] - P[Y=1] + 2 P[f=0|Y=1] P[Y=1]``."""
    error = p1 - prior + 2.0 * fnr * prior
    return min(1.0, max(0.0, 1.0 - error))


def ocf(tpr, p1):
    """``tpr**2 / P[f=1]``, clamped; zero when nothing is accepted."""
    if p1 <= 0:
        return 0.0
    return min(1.0, max(0.0, tpr * tpr / p1))


def performance_from_votes(positive_votes, metric=OCF, prior=DEFAULT_PRIOR, unlabeled_votes=None):
    """Turn pooled holdout votes into an estimate.

    Without unlabeled votes, ``P[f(x)=1]`` is taken as the acceptance rate
    on held-out positives, so OCF collapses to the TPR.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if not 0.0 < prior <= 1.0:
        raise ValueError(f"prior must lie in (0, 1], got {prior}")
    votes = np.asarray(positive_votes)
    if votes.size == 0:
        raise ValueError("no holdout votes to estimate from")
    accepted = int(np.count_nonzero(votes))
    tpr = accepted / votes.size
    fnr = (votes.size - accepted) / votes.size
    if unlabeled_votes is not None and len(unlabeled_votes):
        p1 = float(np.mean(np.asarray(unlabeled_votes) != 0))
    else:
        p1 = tpr
    if metric == OCA:
        value = oca(p1, fnr, prior)
    elif unlabeled_votes is None or not len(unlabeled_votes):
        value = tpr  # tpr**2 / tpr, without the rounding
    else:
        value = ocf(tpr, p1)
    return PerformanceEstimate(metric, value, p1, fnr, tpr, prior)


def _iter_folds(plan):
    if isinstance(plan, CVPlan):
        for _, _, train, hold in plan.folds():
            yield train, hold
    else:
        yield from plan


def estimate_member_performance(spec, positives, metric=OCF, prior=DEFAULT_PRIOR, plan=None,
                                unlabeled=None, seed=0):
    """Cross-validated OCA/OCF of one member using positives only.

    ``plan`` is a :class:`CVPlan` or a list of ``(train, holdout)`` index
    pairs over ``positives``; a 5x2 plan seeded by ``seed`` by default.
    """
    X = require_positive_view(positives)
    if plan is None:
        plan = make_5x2_plan(X.shape[0], seed)
    view = positives if isinstance(positives, Dataset) else Dataset.from_positives(X)
    U = None
    if unlabeled is not None:
        U = unlabeled.X if isinstance(unlabeled, Dataset) else np.asarray(unlabeled, float)
    pos_votes, unl_votes = [], []
    for fold, (train, hold) in enumerate(_iter_folds(plan)):
        try:
            model = classifiers.train(spec, view.subset(train))
        except Exception as exc:
            raise FoldError(fold, exc) from exc
        pos_votes.append(model.predict(X[hold]))
        if U is not None:
            unl_votes.append(model.predict(U))
    unl = np.concatenate(unl_votes) if unl_votes else None
    return performance_from_votes(np.concatenate(pos_votes), metric, prior, unl)


def compute_weights(perfs):
    """Normalise performance values to weights summing to one.

    Accepts estimates or plain numbers; an all-zero vector gives uniform
    weights.
    """
    values = np.array(
        [p.value if isinstance(p, PerformanceEstimate) else float(p) for p in perfs],
        dtype=np.float64,
    )
    if values.size == 0:
        raise ValueError("need at least one performance value")
    if np.any(values < 0):
        raise ValueError("performance values must be nonnegative")
    total = values.sum()
    if total <= 0:
        return np.full(values.size, 1.0 / values.size)
    alpha = values / total
    # push the residual onto the largest weight so the sum is 1 to the ulp
    alpha[np.argmax(alpha)] += 1.0 - alpha.sum()
    return alpha

"""Meta-learning ensemble over aggregate statistics of member outputs.

Members are fitted in an inner k-fold loop; every held-out positive yields
one meta-instance of eight aggregates of the member scores (vote count,
plain/weighted sums, weighted squares and logs, and three variances). A
one-class meta-classifier is fitted on those meta-instances, and the
members are refitted on all positives for prediction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .. import classifiers
from ..classifiers import DENSITY_AGG, HARMONIC, ClassifierSpec
from ..classifiers.serialize import decode_value, encode_value, model_from_document, model_to_document
from ..data import Dataset, require_positive_view, score_to_vote
from ..dataset_io import make_kfold_plan
from ..estimation import DEFAULT_PRIOR, OCF, FoldError, compute_weights, performance_from_votes

META_FEATURES = (
    "sum_votes",
    "sum_predictions",
    "sum_weighted_predictions",
    "sum_power_weighted_predictions",
    "sum_log_weighted_predictions",
    "var_votes",
    "var_predictions",
    "var_weighted_predictions",
)
N_META = len(META_FEATURES)
LOG_FLOOR = 1e-6
TUPSO_FORMAT = "ocens-tupso"


def default_meta_spec():
    return ClassifierSpec(DENSITY_AGG, {"psi": HARMONIC, "s": 0.02}, "META_DENS")


def extract_meta_features(scores, alpha):
    """Eight aggregates per row of an ``(n, k)`` score matrix.

    A 1-D score vector gives a 1-D result. Variances divide by ``k``.
    """
    P = np.asarray(scores, dtype=np.float64)
    single = P.ndim == 1
    P = np.atleast_2d(P)
    a = np.asarray(alpha, dtype=np.float64)
    if a.shape != (P.shape[1],):
        raise ValueError(f"{P.shape[1]} member scores but {a.size} weights")
    votes = (P >= 0.5).astype(np.float64)
    weighted = P * a[None, :]
    F = np.column_stack([
        votes.sum(axis=1),
        P.sum(axis=1),
        weighted.sum(axis=1),
        (a[None, :] * P * P).sum(axis=1),
        (a[None, :] * np.log(np.clip(P, LOG_FLOOR, 1.0))).sum(axis=1),
        votes.var(axis=1),
        P.var(axis=1),
        weighted.var(axis=1),
    ])
    return F[0] if single else F


@dataclass(frozen=True)
class InnerFoldOutputs:
    """Held-out member scores and votes, one row per training positive."""

    scores: np.ndarray
    votes: np.ndarray


def inner_fold_outputs(specs, positives, k_inner=10, seed=0):
    X = require_positive_view(positives)
    view = positives if isinstance(positives, Dataset) else Dataset.from_positives(X)
    n, m = X.shape[0], len(specs)
    scores = np.full((n, m), np.nan)
    votes = np.zeros((n, m), dtype=np.int64)
    for fold, (train, hold) in enumerate(make_kfold_plan(np.arange(n), k_inner, seed)):
        fold_view = view.subset(train)
        for j, spec in enumerate(specs):
            try:
                model = classifiers.train(spec, fold_view)
            except Exception as exc:
                raise FoldError(fold, exc) from exc
            s = model.score(X[hold])
            scores[hold, j] = s
            votes[hold, j] = s >= model.theta
    return InnerFoldOutputs(scores, votes)


def build_meta_dataset(specs, positives, k_inner, alpha, seed=0, outputs=None):
    """Meta-dataset with exactly one positive meta-instance per training positive."""
    if outputs is None:
        outputs = inner_fold_outputs(specs, positives, k_inner, seed)
    F = extract_meta_features(outputs.scores, alpha)
    return Dataset.from_positives(F, "meta", META_FEATURES)


def _fit_scaler(F):
    lo, hi = F.min(axis=0), F.max(axis=0)
    return lo, hi


def _apply_scaler(F, lo, hi):
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (F - lo) / safe, 0.0)


class TupsoModel:
    def __init__(self, members, alpha, f_t, feature_mask, scale_lo, scale_hi, meta_model,
                 metric=OCF, k_inner=10, estimates=()):
        self.members = list(members)
        self.alpha = np.asarray(alpha, dtype=np.float64)
        self.f_t = np.asarray(f_t, dtype=np.float64)
        self.feature_mask = tuple(int(i) for i in feature_mask)
        self.scale_lo = np.asarray(scale_lo, dtype=np.float64)
        self.scale_hi = np.asarray(scale_hi, dtype=np.float64)
        self.meta_model = meta_model
        self.metric = metric
        self.k_inner = int(k_inner)
        self.estimates = list(estimates)
        if len(self.alpha) != len(self.members):
            raise ValueError("one weight per member required")

    @property
    def theta(self):
        return self.meta_model.theta

    def member_scores(self, X):
        return np.column_stack([m.score(classifiers.base.as_matrix(X, m.dim)) for m in self.members])

    def meta_features(self, X):
        F = extract_meta_features(self.member_scores(X), self.alpha)[:, self.feature_mask]
        return _apply_scaler(F, self.scale_lo, self.scale_hi)

    def score(self, x):
        single = np.ndim(getattr(x, "features", x)) == 1 and not isinstance(x, Dataset)
        s = self.meta_model.score(self.meta_features(classifiers.base.as_matrix(x)))
        return float(s[0]) if single else s

    def predict(self, x):
        return score_to_vote(self.score(x), self.theta)

    def to_document(self):
        return {
            "format": TUPSO_FORMAT,
            "version": 1,
            "metric": self.metric,
            "k_inner": self.k_inner,
            "alpha": encode_value(self.alpha),
            "f_t": encode_value(self.f_t),
            "feature_mask": list(self.feature_mask),
            "scale_lo": encode_value(self.scale_lo),
            "scale_hi": encode_value(self.scale_hi),
            "members": [model_to_document(m) for m in self.members],
            "meta_model": model_to_document(self.meta_model),
        }

    @classmethod
    def from_document(cls, doc):
        if doc.get("format") != TUPSO_FORMAT or doc.get("version") != 1:
            raise ValueError("not a version-1 TUPSO document")
        return cls(
            [model_from_document(d) for d in doc["members"]],
            decode_value(doc["alpha"]),
            decode_value(doc["f_t"]),
            doc["feature_mask"],
            decode_value(doc["scale_lo"]),
            decode_value(doc["scale_hi"]),
            model_from_document(doc["meta_model"]),
            doc["metric"],
            doc["k_inner"],
        )

    def dumps(self):
        return json.dumps(self.to_document(), indent=1, sort_keys=True)

    @classmethod
    def loads(cls, text):
        return cls.from_document(json.loads(text))


def train_tupso(specs, positives, k_inner=10, metric=OCF, meta_spec=None, feature_mask=None,
                prior=DEFAULT_PRIOR, seed=0, members=None):
    """Fit the meta-learning ensemble on a positives-only view.

    Member weights come from the chosen estimator applied to the inner-fold
    holdout votes. ``feature_mask`` selects meta-features by index (0-7) or
    name; all eight by default. Pre-fitted ``members`` skip the final refit.
    """
    if not specs:
        raise ValueError("TUPSO needs at least one member spec")
    X = require_positive_view(positives)
    view = positives if isinstance(positives, Dataset) else Dataset.from_positives(X)
    meta_spec = meta_spec or default_meta_spec()
    if feature_mask is None:
        mask = tuple(range(N_META))
    else:
        mask = tuple(
            META_FEATURES.index(f) if isinstance(f, str) else int(f) for f in feature_mask
        )
        if not mask or any(not 0 <= i < N_META for i in mask):
            raise ValueError(f"invalid meta-feature mask {feature_mask!r}")

    outputs = inner_fold_outputs(specs, view, k_inner, seed)
    estimates = [
        performance_from_votes(outputs.votes[:, j], metric, prior) for j in range(len(specs))
    ]
    alpha = compute_weights(estimates)
    f_t = np.array([e.tpr for e in estimates])
    meta = build_meta_dataset(specs, view, k_inner, alpha, seed, outputs)
    F = meta.X[:, mask]
    lo, hi = _fit_scaler(F)
    meta_view = Dataset.from_positives(
        _apply_scaler(F, lo, hi), "meta", [META_FEATURES[i] for i in mask]
    )
    meta_model = classifiers.train(meta_spec, meta_view)
    if members is None:
        members = [classifiers.train(s, view) for s in specs]
    return TupsoModel(members, alpha, f_t, mask, lo, hi, meta_model, metric, k_inner, estimates)


def tupso_score(model, x):
    return model.score(x)

"""Static combining rules over member scores and votes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAJORITY = "majority_vote"
MEAN_VOTE = "mean_vote"
WEIGHTED_MEAN_VOTE = "weighted_mean_vote"
AVERAGE = "average"
MAX = "max"
PRODUCT = "product"
EXCLUSIVE = "exclusive_vote"
WEIGHTED_VOTE_PRODUCT = "weighted_vote_product"

RULES = (
    MAJORITY,
    MEAN_VOTE,
    WEIGHTED_MEAN_VOTE,
    AVERAGE,
    MAX,
    PRODUCT,
    EXCLUSIVE,
    WEIGHTED_VOTE_PRODUCT,
)
WEIGHTED_RULES = (WEIGHTED_MEAN_VOTE, WEIGHTED_VOTE_PRODUCT)


@dataclass(frozen=True)
class MemberOutputs:
    """Scores of ``k`` members on one instance, their thresholds and, for the
    weighted rules, each member's accepted-target fraction."""

    scores: tuple
    thetas: tuple
    f_t: tuple | None = None

    def __post_init__(self):
        k = len(self.scores)
        if k < 1 or len(self.thetas) != k or (self.f_t is not None and len(self.f_t) != k):
            raise ValueError("scores, thetas and f_t must have equal length k >= 1")


def combine_batch(rule, scores, thetas, f_t=None):
    """Apply ``rule`` row-wise to an ``(n, k)`` score matrix."""
    P = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    k = P.shape[1]
    V = (P >= np.asarray(thetas, dtype=np.float64)[None, :]).astype(np.float64)
    n_votes = V.sum(axis=1)
    if rule in WEIGHTED_RULES:
        if f_t is None:
            raise ValueError(f"rule {rule!r} needs the members' accepted-target fractions")
        f = np.asarray(f_t, dtype=np.float64)[None, :]

    if rule == MAJORITY:
        out = (n_votes >= k / 2.0).astype(np.float64)
    elif rule == MEAN_VOTE:
        out = n_votes / k
    elif rule == WEIGHTED_MEAN_VOTE:
        out = np.sum(f * V + (1.0 - f) * (1.0 - V), axis=1) / k
    elif rule == AVERAGE:
        out = P.mean(axis=1)
    elif rule == MAX:
        out = P.max(axis=1)
    elif rule == PRODUCT:
        out = P.prod(axis=1)
    elif rule == EXCLUSIVE:
        out = (n_votes == 1).astype(np.float64)
    elif rule == WEIGHTED_VOTE_PRODUCT:
        # indicators multiply, as printed: only unanimous acceptance scores > 0
        accept = np.prod(f * V, axis=1)
        reject = np.prod((1.0 - f) * (1.0 - V), axis=1)
        denom = accept + reject
        out = np.divide(accept, denom, out=np.zeros_like(accept), where=denom > 0)
    else:
        raise ValueError(f"unknown combining rule {rule!r}; expected one of {RULES}")
    return np.clip(out, 0.0, 1.0)


def combine_fixed(rule, outputs):
    """Combined score in [0, 1] for a single instance.

    Plain-Python twin of :func:`combine_batch`; the arithmetic is done in
    the same order so both agree bit for bit.
    """
    P = [float(p) for p in outputs.scores]
    V = [1.0 if p >= t else 0.0 for p, t in zip(P, outputs.thetas)]
    k = len(P)
    n_votes = sum(V)
    if rule in WEIGHTED_RULES:
        if outputs.f_t is None:
            raise ValueError(f"rule {rule!r} needs the members' accepted-target fractions")
        f = [float(x) for x in outputs.f_t]

    if rule == MAJORITY:
        out = 1.0 if n_votes >= k / 2.0 else 0.0
    elif rule == MEAN_VOTE:
        out = n_votes / k
    elif rule == WEIGHTED_MEAN_VOTE:
        out = sum(fi * v + (1.0 - fi) * (1.0 - v) for fi, v in zip(f, V)) / k
    elif rule == AVERAGE:
        out = sum(P) / k
    elif rule == MAX:
        out = max(P)
    elif rule == PRODUCT:
        out = math.prod(P)
    elif rule == EXCLUSIVE:
        out = 1.0 if n_votes == 1 else 0.0
    elif rule == WEIGHTED_VOTE_PRODUCT:
        accept = math.prod(fi * v for fi, v in zip(f, V))
        reject = math.prod((1.0 - fi) * (1.0 - v) for fi, v in zip(f, V))
        denom = accept + reject
        out = accept / denom if denom > 0 else 0.0
    else:
        raise ValueError(f"unknown combining rule {rule!r}; expected one of {RULES}")
    return min(1.0, max(0.0, out))


class FixedRuleEnsemble:
    """Trained members glued together by one static rule."""

    def __init__(self, rule, members, f_t=None):
        if rule not in RULES:
            raise ValueError(f"unknown combining rule {rule!r}")
        self.rule = rule
        self.members = list(members)
        self.f_t = None if f_t is None else np.asarray(f_t, dtype=np.float64)

    def score(self, X):
        S = np.column_stack([m.score(X) for m in self.members])
        return combine_batch(self.rule, S, [m.theta for m in self.members], self.f_t)

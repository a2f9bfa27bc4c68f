"""AUC, multi-dataset ranking, rank entropy and Demsar-style significance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import f as f_dist, rankdata


def auc(scores, labels):
    """Mann-Whitney AUC: fraction of (positive, negative) pairs ordered
    correctly, ties counting one half."""
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    y = np.asarray(labels).reshape(-1)
    if s.shape != y.shape:
        raise ValueError("scores and labels differ in length")
    pos = y == 1
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative label")
    r = rankdata(s)
    u = r[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


@dataclass(frozen=True)
class RankMatrix:
    """Per-dataset ranks (1 = best AUC, ties averaged), the per-method mean
    rank over complete rows, and integer display ranks (ties share the
    best position). Missing cells carry NaN."""

    ranks: np.ndarray
    average: np.ndarray
    display: np.ndarray

    @property
    def n_datasets(self):
        return self.ranks.shape[0]

    @property
    def n_methods(self):
        return self.ranks.shape[1]

    def complete_rows(self):
        return self.ranks[~np.isnan(self.ranks).any(axis=1)]


def rank_rows(table):
    T = np.atleast_2d(np.asarray(table, dtype=np.float64))
    if T.size == 0:
        raise ValueError("cannot rank an empty table")
    ranks = np.full(T.shape, np.nan)
    display = np.full(T.shape, np.nan)
    for i, row in enumerate(T):
        ok = ~np.isnan(row)
        if ok.any():
            ranks[i, ok] = rankdata(-row[ok], method="average")
            display[i, ok] = rankdata(-row[ok], method="min")
    complete = ~np.isnan(ranks).any(axis=1)
    if complete.any():
        average = ranks[complete].mean(axis=0)
    else:
        average = np.full(T.shape[1], np.nan)
    return RankMatrix(ranks, average, display)


def rank_counts(display, n_positions=None):
    """Histogram of integer display ranks: ``counts[method, position - 1]``."""
    D = np.asarray(display, dtype=np.float64)
    k = n_positions or D.shape[1]
    counts = np.zeros((D.shape[1], k), dtype=np.int64)
    for j in range(D.shape[1]):
        col = D[:, j]
        col = col[~np.isnan(col)].astype(np.int64)
        counts[j] = np.bincount(col - 1, minlength=k)[:k]
    return counts


def entropy_bits(counts):
    c = np.asarray(counts, dtype=np.float64)
    if np.any(c < 0):
        raise ValueError("counts must be nonnegative")
    total = c.sum()
    if total <= 0:
        raise ValueError("entropy of an all-zero histogram is undefined")
    p = c[c > 0] / total
    return float(-(p * np.log2(p)).sum()) + 0.0  # no -0.0


def rank_entropy(counts):
    """Base-2 entropy of each method's rank histogram (rows) and of each
    rank position's method histogram (columns; NaN for an empty column)."""
    C = np.atleast_2d(np.asarray(counts))
    per_method = np.array([entropy_bits(row) for row in C])
    per_rank = np.array([entropy_bits(col) if col.sum() > 0 else np.nan for col in C.T])
    return per_method, per_rank


def f_sf(f, d1, d2):
    """Upper tail ``P[F >= f]`` of the F distribution."""
    if f <= 0:
        return 1.0
    return float(f_dist.sf(f, d1, d2))


def normal_two_sided_p(z):
    return math.erfc(abs(z) / math.sqrt(2.0))


@dataclass
class TestResult:
    statistic: float
    p_value: float
    reject_at_05: bool
    f_statistic: float = float("nan")
    saturated: bool = False
    z: np.ndarray = field(default_factory=lambda: np.array([]))
    p_values: np.ndarray = field(default_factory=lambda: np.array([]))
    significant: np.ndarray = field(default_factory=lambda: np.array([], dtype=bool))
    note: str = ""


def _rank_array(ranks):
    R = ranks.complete_rows() if isinstance(ranks, RankMatrix) else np.asarray(ranks, float)
    return np.atleast_2d(R)


def friedman_test(ranks):
    """Friedman chi-square with the Iman-Davenport F correction.

    ``ranks`` is a :class:`RankMatrix` (complete rows are used) or an
    ``(N, k)`` array of within-row ranks. The p-value comes from
    ``F((k-1), (k-1)(N-1))``. When the F denominator is not positive the
    p-value saturates at 0 and ``saturated`` is set.
    """
    R = _rank_array(ranks)
    N, k = R.shape
    if N < 2 or k < 2:
        raise ValueError(f"Friedman test needs N >= 2 datasets and k >= 2 methods, got N={N}, k={k}")
    mean_ranks = R.mean(axis=0)
    chi2 = 12.0 * N / (k * (k + 1)) * (np.sum(mean_ranks ** 2) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(0.0, float(chi2))
    denom = N * (k - 1) - chi2
    if denom <= 1e-12:
        return TestResult(chi2, 0.0, True, float("inf"), saturated=True,
                          note="Iman-Davenport denominator is not positive")
    ff = (N - 1) * chi2 / denom
    p = min(1.0, max(0.0, f_sf(ff, k - 1, (k - 1) * (N - 1))))
    return TestResult(chi2, p, p < 0.05, ff)


def bonferroni_dunn(ranks, control, alpha=0.05):
    """Compare a control method with every other method.

    ``z_j = (R_control - R_j) / sqrt(k (k + 1) / (6 N))``; comparison ``j``
    is significant when its two-sided normal p-value is below
    ``alpha / (k - 1)``. Negative ``z`` means the control ranks better.
    """
    R = _rank_array(ranks)
    N, k = R.shape
    if not 0 <= control < k:
        raise IndexError(f"control index {control} out of range for {k} methods")
    mean_ranks = R.mean(axis=0)
    se = math.sqrt(k * (k + 1) / (6.0 * N))
    z = (mean_ranks[control] - mean_ranks) / se
    p = np.array([normal_two_sided_p(v) for v in z])
    cutoff = alpha / (k - 1) if k > 1 else alpha
    sig = p < cutoff
    sig[control] = False
    p[control] = 1.0
    return TestResult(
        float(np.max(np.abs(np.delete(z, control)))) if k > 1 else 0.0,
        float(np.min(np.delete(p, control))) if k > 1 else 1.0,
        bool(sig.any()),
        z=z,
        p_values=p,
        significant=sig,
        note="post-hoc: meaningful only if the Friedman test rejects",
    )


def pearson(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("pearson needs two equal-length samples of size >= 2")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("pearson is undefined for a zero-variance sample")
    return float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))

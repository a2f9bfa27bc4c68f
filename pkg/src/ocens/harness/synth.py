"""Synthetic two-class CSV generators for desk-scale runs."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

TWO_GAUSSIAN = "two-gaussian"
UNIFORM_RING = "uniform-ring"
KINDS = (TWO_GAUSSIAN, UNIFORM_RING)
TARGET_LABEL = "normal"
OUTLIER_LABEL = "outlier"


def sample_synthetic(kind, n_pos, n_neg, dim, separation, seed):
    """Return ``(X, labels)``: positives from N(0, I) followed by negatives.

    two-gaussian negatives come from N(separation * 1, I); uniform-ring
    negatives lie uniformly on the sphere of radius ``separation``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown synthetic kind {kind!r}; expected one of {KINDS}")
    if n_pos < 10 or n_neg < 10:
        raise ValueError("need at least 10 instances per class")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if separation < 0:
        raise ValueError("separation must be >= 0")
    rng = np.random.default_rng(seed)
    pos = rng.standard_normal((n_pos, dim))
    if kind == TWO_GAUSSIAN:
        neg = rng.standard_normal((n_neg, dim)) + separation
    else:
        direction = rng.standard_normal((n_neg, dim))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        neg = separation * direction / np.where(norms > 0, norms, 1.0)
    X = np.vstack([pos, neg])
    labels = [TARGET_LABEL] * n_pos + [OUTLIER_LABEL] * n_neg
    return X, labels


def gen_synthetic(kind, n_pos, n_neg, dim, separation, seed, path):
    """Write a synthetic dataset to ``path`` as CSV and return the path."""
    X, labels = sample_synthetic(kind, n_pos, n_neg, dim, separation, seed)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{j}" for j in range(dim)] + ["class"])
        for row, lab in zip(X, labels):
            w.writerow([repr(float(v)) for v in row] + [lab])
    return path

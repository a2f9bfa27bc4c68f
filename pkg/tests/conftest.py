import numpy as np
import pytest

from ocens.data import Dataset


@pytest.fixture
def blob():
    rng = np.random.default_rng(3)
    return Dataset.from_positives(rng.uniform(0.2, 0.8, size=(60, 3)), "blob")


@pytest.fixture
def two_class():
    rng = np.random.default_rng(5)
    pos = rng.normal(0.3, 0.05, size=(80, 2))
    neg = rng.normal(0.8, 0.05, size=(80, 2))
    X = np.clip(np.vstack([pos, neg]), 0, 1)
    y = np.r_[np.ones(80, int), np.zeros(80, int)]
    return Dataset(X, y, "two_class")

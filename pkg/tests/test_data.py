import numpy as np
import pytest
from hypothesis import given, strategies as st

from ocens.data import (
    NEGATIVE, POSITIVE, UNLABELED, Dataset, Instance, Score, Threshold,
    require_positive_view, score_to_vote,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


@given(unit, unit)
def test_vote_is_inclusive_indicator(s, theta):
    assert score_to_vote(s, theta) == int(s >= theta)


def test_vote_at_threshold_accepts():
    assert score_to_vote(0.5, 0.5) == POSITIVE
    assert score_to_vote(0.49, 0.5) == NEGATIVE
    assert score_to_vote(np.array([0.2, 0.7]), 0.5).tolist() == [0, 1]


@pytest.mark.parametrize("bad", [-0.01, 1.01])
def test_score_and_threshold_range(bad):
    with pytest.raises(ValueError):
        Score(bad)
    with pytest.raises(ValueError):
        Threshold(bad)


def test_dataset_is_read_only_and_validated():
    d = Dataset([[0.1, 0.2], [0.3, 0.4]], [1, 0])
    with pytest.raises(ValueError):
        d.X[0, 0] = 1.0
    with pytest.raises(ValueError):
        Dataset([[0.1], [0.2]], [1])
    with pytest.raises(ValueError):
        Dataset([[np.nan]], [1])
    with pytest.raises(ValueError):
        Dataset([[0.1]], [2])


def test_positive_view_and_census():
    d = Dataset(np.arange(8.0).reshape(4, 2), [1, 0, -1, 1])
    assert d.census() == {"positive": 2, "negative": 1, "unlabeled": 1}
    view = d.positives()
    assert len(view) == 2 and np.all(view.y == POSITIVE)
    np.testing.assert_array_equal(require_positive_view(view), d.X[[0, 3]])
    with pytest.raises(ValueError, match="positives-only"):
        require_positive_view(d)


def test_instance_access():
    d = Dataset([[0.1, 0.2]], [UNLABELED])
    inst = d[0]
    assert isinstance(inst, Instance) and inst.label == UNLABELED
    assert d.dim == 2 and d.feature_names == ("x0", "x1")

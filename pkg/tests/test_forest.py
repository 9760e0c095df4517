import numpy as np
import pytest

from interviewkit.errors import TrainingError
from interviewkit.models import entropy_bits, gini_impurity, train_random_forest

from oracles import nearest_centroid_cv_accuracy


def _separable_set(n_per_class=20, margin=1.0, seed=0):
    """Two 2-D clusters separated by a planted margin along x."""
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 0.0, size=(n_per_class, 2))
    b = rng.uniform(0.0, 1.0, size=(n_per_class, 2))
    a[:, 0] -= margin / 2
    b[:, 0] += margin / 2
    X = np.vstack([a, b])
    y = np.array([1] * n_per_class + [2] * n_per_class)
    return X, y


def test_gini_hand_values():
    assert gini_impurity(np.array([5.0, 0.0])) == 0.0
    assert gini_impurity(np.array([5.0, 5.0])) == pytest.approx(0.5)
    assert gini_impurity(np.array([1.0, 1.0, 1.0, 1.0])) == pytest.approx(0.75)


def test_entropy_hand_values():
    assert entropy_bits(np.array([4.0, 0.0])) == 0.0
    assert entropy_bits(np.array([2.0, 2.0])) == pytest.approx(1.0)  # one bit
    assert entropy_bits(np.array([1.0, 1.0, 1.0, 1.0])) == pytest.approx(2.0)


def test_single_class_predicts_constantly():
    X = np.random.default_rng(1).normal(size=(10, 3))
    y = np.full(10, 5)
    model = train_random_forest(X, y, n_trees=5, seed=0)
    assert np.all(model.predict(X) == 5)
    assert model.class_universe == [5]


def test_separable_set_reaches_perfect_training_accuracy():
    X, y = _separable_set(margin=1.0)
    # oracle: the classes are genuinely separable (nearest centroid >= 0.95)
    assert nearest_centroid_cv_accuracy(X, y) >= 0.95
    model = train_random_forest(X, y, n_trees=100, criterion="gini", seed=0)
    assert np.mean(model.predict(X) == y) == 1.0


@pytest.mark.parametrize("criterion", ["gini", "info_gain", "gain_ratio"])
def test_all_criteria_fit_training_data(criterion):
    X, y = _separable_set(margin=0.5, seed=3)
    model = train_random_forest(X, y, n_trees=50, criterion=criterion, seed=1)
    assert np.mean(model.predict(X) == y) == 1.0


def test_training_deterministic():
    X, y = _separable_set(seed=5)
    a = train_random_forest(X, y, n_trees=20, seed=9)
    b = train_random_forest(X, y, n_trees=20, seed=9)
    assert a.to_dict() == b.to_dict()


def test_predictions_always_in_class_universe():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(30, 4))
    y = rng.choice([2, 4, 7], size=30)
    model = train_random_forest(X, y, n_trees=25, seed=2)
    novel = rng.normal(size=(50, 4)) * 10
    assert set(model.predict(novel).tolist()) <= set(model.class_universe)
    assert set(model.class_universe) <= set(range(1, 8))


def test_width_mismatch_at_predict():
    X, y = _separable_set()
    model = train_random_forest(X, y, n_trees=3, seed=0)
    with pytest.raises(TrainingError, match="expects width 2"):
        model.predict(np.zeros((2, 5)))


def test_serialization_round_trip_preserves_predictions():
    from interviewkit.models import model_from_dict

    X, y = _separable_set(seed=11)
    model = train_random_forest(X, y, n_trees=10, seed=4)
    clone = model_from_dict(model.to_dict())
    np.testing.assert_array_equal(clone.predict(X), model.predict(X))


def test_empty_training_set_rejected():
    with pytest.raises(TrainingError, match="non-empty"):
        train_random_forest(np.zeros((0, 2)), np.zeros(0, dtype=int))


def test_unknown_criterion_rejected():
    X, y = _separable_set()
    with pytest.raises(TrainingError, match="unknown criterion"):
        train_random_forest(X, y, criterion="chi2")


def test_majority_vote_tie_breaks_to_smaller_class():
    from interviewkit.models import model_from_dict

    leaf = {"feature": [-1], "threshold": [0.0], "left": [-1], "right": [-1]}
    forest = model_from_dict({
        "family": "rf",
        "class_universe": [3, 6],
        "feature_width": 1,
        "params": {},
        "trees": [dict(leaf, leaf_class=[0]), dict(leaf, leaf_class=[1])],
    })
    # one vote each for classes 3 and 6 -> smaller class wins
    assert forest.predict(np.array([[0.5]]))[0] == 3

import numpy as np
import pytest

from interviewkit.errors import TrainingError
from interviewkit.models import model_from_dict, train_mlp
from interviewkit.models.mlp import cross_entropy, forward, gradients, init_layers, softmax

from oracles import finite_difference_gradients

XOR_X = np.array([[-0.5, -0.5], [-0.5, 0.5], [0.5, -0.5], [0.5, 0.5]])
XOR_Y = np.array([1, 2, 2, 1])


def test_softmax_rows_sum_to_one():
    rng = np.random.default_rng(0)
    logits = rng.normal(scale=20, size=(50, 7))
    probs = softmax(logits)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(probs >= 0.0)


@pytest.mark.parametrize("shape", [(4, 5, 3), (6, 4, 7), (3, 8, 8, 2)])
def test_analytic_gradients_match_finite_differences(shape):
    n_features, *hidden, n_classes = shape
    rng = np.random.default_rng(42)
    X = rng.normal(size=(9, n_features))
    y_idx = rng.integers(0, n_classes, size=9)
    weights, biases = init_layers([n_features, *hidden, n_classes], seed=1)

    grad_w, grad_b, _ = gradients(X, y_idx, weights, biases)

    def loss():
        probs, _, _ = forward(X, weights, biases)
        return cross_entropy(probs, y_idx)

    fd_w = finite_difference_gradients(loss, weights, eps=1e-5)
    fd_b = finite_difference_gradients(loss, biases, eps=1e-5)
    for analytic, numeric in zip(grad_w + grad_b, fd_w + fd_b):
        denom = np.maximum(np.abs(numeric), 1e-8)
        assert np.max(np.abs(analytic - numeric) / denom) <= 1e-4


def test_xor_reaches_perfect_accuracy():
    model = train_mlp(XOR_X, XOR_Y, hidden=(8,), learning_rate=0.5, epochs=5000, seed=7)
    assert np.mean(model.predict(XOR_X) == XOR_Y) == 1.0


def test_xor_loss_monotone_after_warmup():
    model = train_mlp(XOR_X, XOR_Y, hidden=(8,), learning_rate=0.5, epochs=5000, seed=7)
    trace = np.array(model.loss_trace)
    assert trace.shape[0] == 5000
    assert np.all(np.diff(trace[100:]) <= 0.0)


def test_two_hidden_layers_supported():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(30, 3))
    y = (X[:, 0] > 0).astype(int) + 1
    model = train_mlp(X, y, hidden=(8, 8), learning_rate=0.1, epochs=800, seed=2)
    assert np.mean(model.predict(X) == y) >= 0.9


def test_training_deterministic():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(20, 4))
    y = rng.choice([1, 2, 3], size=20)
    a = train_mlp(X, y, epochs=50, seed=3)
    b = train_mlp(X, y, epochs=50, seed=3)
    assert a.to_dict() == b.to_dict()


def test_predictions_in_class_universe():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(25, 3))
    y = rng.choice([2, 5], size=25)
    model = train_mlp(X, y, epochs=100, seed=0)
    assert set(model.predict(X * 100).tolist()) <= {2, 5}


def test_divergence_reports_epoch():
    X = np.array([[1e3, -1e3], [1e3, -1e3], [-1e3, 1e3], [-1e3, 1e3]])
    y = np.array([1, 1, 2, 2])
    with pytest.raises(TrainingError, match="epoch"):
        train_mlp(X, y, hidden=(4,), learning_rate=1e6, epochs=50, seed=0)


def test_width_mismatch_at_predict():
    model = train_mlp(XOR_X, XOR_Y, epochs=10, seed=0)
    with pytest.raises(TrainingError, match="expects width 2"):
        model.predict(np.zeros((1, 3)))


def test_serialization_round_trip():
    model = train_mlp(XOR_X, XOR_Y, hidden=(8,), learning_rate=0.5, epochs=500, seed=7)
    clone = model_from_dict(model.to_dict())
    np.testing.assert_array_equal(clone.predict(XOR_X), model.predict(XOR_X))


def test_invalid_hyperparameters():
    with pytest.raises(TrainingError):
        train_mlp(XOR_X, XOR_Y, learning_rate=0.0)
    with pytest.raises(TrainingError):
        train_mlp(XOR_X, XOR_Y, epochs=0)
    with pytest.raises(TrainingError):
        train_mlp(XOR_X, XOR_Y, hidden=(0,))

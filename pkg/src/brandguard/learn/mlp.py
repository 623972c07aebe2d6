"""Multilayer perceptron with logistic activations, trained by full-batch
gradient descent.

The training objective is the summed (not mean) binary cross-entropy, so the
step taken by the small default learning rate scales with the batch size.
Loss and gradients use the softplus form log(1 + e^z) - y*z, which is exact
and finite for any logit, so analytic gradients match finite differences to
machine precision.
"""

from __future__ import annotations

import numpy as np

from ..base import BaseEstimator, check_X_y, check_array
from .linear import sigmoid

__all__ = ["MLPClassifier", "mlp_loss_and_gradients", "init_glorot"]


def init_glorot(layer_sizes: list[int], rng: np.random.Generator):
    """Glorot-uniform weights and zero biases for the given layer widths."""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def _forward(weights, biases, X):
    activations = [X]
    for W, b in zip(weights, biases):
        activations.append(sigmoid(activations[-1] @ W + b))
    return activations


def mlp_loss_and_gradients(weights, biases, X, y):
    """Summed cross-entropy loss and its exact gradients.

    Returns (loss, grad_weights, grad_biases) with gradients shaped like the
    parameters. The output layer is a single logistic unit.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    activations = [X]
    for W, b in zip(weights[:-1], biases[:-1]):
        activations.append(sigmoid(activations[-1] @ W + b))
    logits = (activations[-1] @ weights[-1] + biases[-1]).ravel()
    loss = float(np.sum(np.logaddexp(0.0, logits) - y * logits))

    grad_w = [None] * len(weights)
    grad_b = [None] * len(biases)
    delta = (sigmoid(logits) - y).reshape(-1, 1)
    for layer in range(len(weights) - 1, -1, -1):
        grad_w[layer] = activations[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            a = activations[layer]
            delta = (delta @ weights[layer].T) * a * (1.0 - a)
    return loss, grad_w, grad_b


class MLPClassifier(BaseEstimator):
    """Fully connected net: logistic hidden layers, one logistic output.

    Trained full-batch with classical (heavy-ball) momentum; stops early once
    the relative loss change stays below ``tol`` for ``patience`` consecutive
    epochs.
    """

    def __init__(
        self,
        hidden_layers=(100, 100),
        learning_rate=1e-5,
        momentum=0.9,
        max_epochs=800,
        tol=1e-7,
        patience=5,
        seed=0,
    ):
        self.hidden_layers = hidden_layers
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.max_epochs = max_epochs
        self.tol = tol
        self.patience = patience
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        layer_sizes = [X.shape[1], *self.hidden_layers, 1]
        rng = np.random.default_rng(self.seed)
        weights, biases = init_glorot(layer_sizes, rng)
        vel_w = [np.zeros_like(w) for w in weights]
        vel_b = [np.zeros_like(b) for b in biases]
        lr = self.learning_rate
        prev_loss = np.inf
        flat_epochs = 0
        self.loss_curve_ = []
        for _ in range(self.max_epochs):
            loss, grad_w, grad_b = mlp_loss_and_gradients(weights, biases, X, y)
            self.loss_curve_.append(loss)
            for layer in range(len(weights)):
                vel_w[layer] = self.momentum * vel_w[layer] - lr * grad_w[layer]
                vel_b[layer] = self.momentum * vel_b[layer] - lr * grad_b[layer]
                weights[layer] += vel_w[layer]
                biases[layer] += vel_b[layer]
            if abs(prev_loss - loss) / max(abs(prev_loss), 1e-300) < self.tol:
                flat_epochs += 1
                if flat_epochs >= self.patience:
                    break
            else:
                flat_epochs = 0
            prev_loss = loss
        self.weights_ = weights
        self.biases_ = biases
        self.n_features_ = X.shape[1]
        return self

    def predict_score(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        return _forward(self.weights_, self.biases_, X)[-1].ravel()

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)

"""Linear classifiers trained by (sub)gradient descent.

Margin learners report a probability-like score by logistic squashing of the
raw margin; AUC is rank-invariant under any monotone map, so the squashing
only serves the common score-in-[0,1] interface.
"""

from __future__ import annotations

import numpy as np

from ..base import BaseEstimator, check_X_y, check_array

__all__ = [
    "sigmoid",
    "LogisticRegressionClassifier",
    "LinearSVMClassifier",
    "SGDLinearClassifier",
]


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function via tanh: exact, overflow-free, single ufunc pass."""
    return 0.5 * (np.tanh(0.5 * np.asarray(z, dtype=np.float64)) + 1.0)


class _LinearModel(BaseEstimator):
    def _check_fitted_input(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != len(self.coef_):
            raise ValueError(f"expected {len(self.coef_)} features, got {X.shape[1]}")
        return X

    def decision_function(self, X) -> np.ndarray:
        X = self._check_fitted_input(X)
        return X @ self.coef_ + self.intercept_

    def predict_score(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class LogisticRegressionClassifier(_LinearModel):
    """Full-batch gradient descent on mean cross-entropy with optional L2."""

    def __init__(self, learning_rate=0.1, max_iter=2000, l2=0.0, tol=1e-8):
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.l2 = l2
        self.tol = tol

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        for _ in range(self.max_iter):
            p = sigmoid(X @ w + b)
            err = p - y
            grad_w = X.T @ err / n + self.l2 * w
            grad_b = err.mean()
            w -= self.learning_rate * grad_w
            b -= self.learning_rate * grad_b
            if max(np.abs(grad_w).max(), abs(grad_b)) < self.tol:
                break
        self.coef_ = w
        self.intercept_ = b
        return self


class LinearSVMClassifier(_LinearModel):
    """L2-regularized hinge loss, full-batch subgradient descent.

    The objective is the summed hinge loss, so the small default rate takes
    steps proportional to the batch size.
    """

    def __init__(self, learning_rate=1e-5, max_iter=200, l2=1e-4):
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.l2 = l2

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        sign = 2.0 * y - 1.0
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        for _ in range(self.max_iter):
            margin = sign * (X @ w + b)
            active = margin < 1.0
            grad_w = -(X[active].T @ sign[active]) + self.l2 * w
            grad_b = -sign[active].sum()
            w -= self.learning_rate * grad_w
            b -= self.learning_rate * grad_b
        self.coef_ = w
        self.intercept_ = b
        return self


def _modified_huber_dloss(margin: float) -> float:
    """d/d(margin) of the modified Huber loss."""
    if margin >= 1.0:
        return 0.0
    if margin >= -1.0:
        return -2.0 * (1.0 - margin)
    return -4.0


def _hinge_dloss(margin: float) -> float:
    return -1.0 if margin < 1.0 else 0.0


_SGD_LOSSES = {"modified_huber": _modified_huber_dloss, "hinge": _hinge_dloss}


class SGDLinearClassifier(_LinearModel):
    """Per-sample stochastic gradient descent, modified Huber loss by default.

    Samples are reshuffled every epoch from ``seed``, so training is fully
    reproducible.
    """

    def __init__(self, loss="modified_huber", learning_rate=1e-5, max_iter=200, l2=1e-4, seed=0):
        self.loss = loss
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.l2 = l2
        self.seed = seed

    def fit(self, X, y):
        if self.loss not in _SGD_LOSSES:
            raise ValueError(f"unknown loss {self.loss!r}")
        dloss = _SGD_LOSSES[self.loss]
        X, y = check_X_y(X, y)
        sign = 2.0 * y - 1.0
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        rng = np.random.default_rng(self.seed)
        lr = self.learning_rate
        for _ in range(self.max_iter):
            for i in rng.permutation(n):
                margin = sign[i] * (X[i] @ w + b)
                g = dloss(margin) * sign[i]
                w -= lr * (g * X[i] + self.l2 * w)
                b -= lr * g
        self.coef_ = w
        self.intercept_ = b
        return self

"""Gaussian naive Bayes and k-nearest-neighbors classifiers."""

from __future__ import annotations

import numpy as np

from ..base import BaseEstimator, check_X_y, check_array
from .linear import sigmoid

__all__ = ["GaussianNBClassifier", "KNNClassifier"]


class GaussianNBClassifier(BaseEstimator):
    """Per-class feature means/variances with a variance floor."""

    def __init__(self, var_floor=1e-9):
        self.var_floor = var_floor

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.classes_ = np.array([0, 1])
        self.theta_ = np.empty((2, X.shape[1]))
        self.var_ = np.empty((2, X.shape[1]))
        self.log_prior_ = np.empty(2)
        for cls in (0, 1):
            sub = X[y == cls]
            self.theta_[cls] = sub.mean(axis=0)
            self.var_[cls] = np.maximum(sub.var(axis=0), self.var_floor)
            self.log_prior_[cls] = np.log(len(sub) / len(X))
        return self

    def _joint_log_likelihood(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != self.theta_.shape[1]:
            raise ValueError(
                f"expected {self.theta_.shape[1]} features, got {X.shape[1]}"
            )
        jll = np.empty((len(X), 2))
        for cls in (0, 1):
            log_det = np.sum(np.log(2.0 * np.pi * self.var_[cls]))
            maha = np.sum((X - self.theta_[cls]) ** 2 / self.var_[cls], axis=1)
            jll[:, cls] = self.log_prior_[cls] - 0.5 * (log_det + maha)
        return jll

    def predict_score(self, X) -> np.ndarray:
        jll = self._joint_log_likelihood(X)
        return sigmoid(jll[:, 1] - jll[:, 0])

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class KNNClassifier(BaseEstimator):
    """Euclidean k-nearest neighbors; the score is the neighbor vote share.

    Distance ties resolve by training index, keeping predictions stable.
    """

    def __init__(self, k=5):
        self.k = k

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.k < 1 or self.k > len(X):
            raise ValueError(f"k={self.k} outside 1..{len(X)}")
        self.X_ = X
        self.y_ = y
        return self

    def predict_score(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != self.X_.shape[1]:
            raise ValueError(f"expected {self.X_.shape[1]} features, got {X.shape[1]}")
        scores = np.empty(len(X))
        train_idx = np.arange(len(self.X_))
        for i, point in enumerate(X):
            dist = np.sqrt(np.sum((self.X_ - point) ** 2, axis=1))
            nearest = np.lexsort((train_idx, dist))[: self.k]
            scores[i] = self.y_[nearest].mean()
        return scores

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)

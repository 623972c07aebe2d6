"""CART-style trees: single classifier, bagged forest, boosted ensemble.

All three share one split engine: exhaustive threshold search at midpoints
between consecutive distinct feature values, scored by impurity decrease
(Gini for classification targets, variance for regression targets). Ties are
broken deterministically: first feature in scan order, then smallest
threshold, so identical inputs always yield identical trees.
"""

from __future__ import annotations

import numpy as np

from ..base import BaseEstimator, check_X_y, check_array

__all__ = [
    "gini_impurity",
    "DecisionTreeClassifier",
    "RandomForestClassifier",
    "GradientBoostedTreesClassifier",
]


def gini_impurity(labels) -> float:
    """1 - sum of squared class fractions; 0 for pure, 0.5 for 50/50 binary."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        return 0.0
    p = float(np.mean(labels == 1))
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _impurity(targets: np.ndarray, criterion: str) -> float:
    if criterion == "gini":
        return gini_impurity(targets)
    mean = targets.mean()
    return float(np.mean(targets * targets) - mean * mean)


def _best_split(X: np.ndarray, t: np.ndarray, feature_indices, criterion: str):
    """(feature, threshold, gain) with maximal impurity decrease, or None."""
    n = len(t)
    parent = _impurity(t, criterion)
    best_gain, best_feature, best_threshold = -np.inf, None, None
    for f in feature_indices:
        values = X[:, f]
        order = np.argsort(values, kind="mergesort")
        sv = values[order]
        st = t[order]
        boundaries = np.nonzero(sv[1:] != sv[:-1])[0]
        if len(boundaries) == 0:
            continue
        csum = np.cumsum(st)
        n_left = boundaries + 1.0
        n_right = n - n_left
        sum_left = csum[boundaries]
        sum_right = csum[-1] - sum_left
        if criterion == "gini":
            p_left = sum_left / n_left
            p_right = sum_right / n_right
            imp_left = 1.0 - p_left**2 - (1.0 - p_left) ** 2
            imp_right = 1.0 - p_right**2 - (1.0 - p_right) ** 2
        else:
            csum2 = np.cumsum(st * st)
            sq_left = csum2[boundaries]
            sq_right = csum2[-1] - sq_left
            imp_left = np.maximum(sq_left / n_left - (sum_left / n_left) ** 2, 0.0)
            imp_right = np.maximum(sq_right / n_right - (sum_right / n_right) ** 2, 0.0)
        gains = parent - (n_left * imp_left + n_right * imp_right) / n
        local = int(np.argmax(gains))  # first max -> smallest threshold
        if gains[local] > best_gain:
            best_gain = float(gains[local])
            best_feature = int(f)
            best_threshold = float((sv[boundaries[local]] + sv[boundaries[local] + 1]) / 2.0)
    if best_feature is None:
        return None
    # gain is mathematically >= 0; zero-gain splits stay allowed (an XOR
    # pattern needs them) and recursion still terminates because both
    # children are strictly smaller
    return best_feature, best_threshold, max(best_gain, 0.0)


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value", "n")

    def __init__(self):
        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None
        self.value = 0.0
        self.n = 0

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _grow_tree(
    X: np.ndarray,
    t: np.ndarray,
    criterion: str,
    max_depth: int | None,
    min_samples_split: int,
    max_features: int | None,
    rng: np.random.Generator | None,
    importances: np.ndarray | None,
) -> _Node:
    n_total = len(t)
    n_features = X.shape[1]
    root = _Node()
    stack = [(root, np.arange(n_total), 0)]
    while stack:
        node, idx, depth = stack.pop()
        sub_t = t[idx]
        node.n = len(idx)
        node.value = float(sub_t.mean())
        if (
            (max_depth is not None and depth >= max_depth)
            or len(idx) < min_samples_split
            or _impurity(sub_t, criterion) <= 0.0
        ):
            continue
        if max_features is None or max_features >= n_features:
            candidates = range(n_features)
        else:
            candidates = np.sort(rng.choice(n_features, size=max_features, replace=False))
        split = _best_split(X[idx], sub_t, candidates, criterion)
        if split is None:
            continue
        feature, threshold, gain = split
        node.feature = feature
        node.threshold = threshold
        if importances is not None:
            importances[feature] += (len(idx) / n_total) * gain
        mask = X[idx, feature] <= threshold
        node.left, node.right = _Node(), _Node()
        # push right first so the left branch grows first (pure DFS order)
        stack.append((node.right, idx[~mask], depth + 1))
        stack.append((node.left, idx[mask], depth + 1))
    return root


def _tree_values(root: _Node, X: np.ndarray) -> np.ndarray:
    out = np.empty(len(X), dtype=np.float64)
    stack = [(root, np.arange(len(X)))]
    while stack:
        node, idx = stack.pop()
        if len(idx) == 0:
            continue
        if node.is_leaf:
            out[idx] = node.value
            continue
        mask = X[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


class DecisionTreeClassifier(BaseEstimator):
    """CART with Gini gain; leaves predict the class-1 fraction."""

    def __init__(self, max_depth=None, min_samples_split=2):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.n_features_ = X.shape[1]
        self.feature_importances_ = np.zeros(self.n_features_)
        self.root_ = _grow_tree(
            X,
            y.astype(np.float64),
            "gini",
            self.max_depth,
            self.min_samples_split,
            None,
            None,
            self.feature_importances_,
        )
        return self

    def predict_score(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        return _tree_values(self.root_, X)

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class RandomForestClassifier(BaseEstimator):
    """Bagged Gini trees with per-split feature subsampling.

    With one tree, bootstrap disabled, and the full feature set this reduces
    exactly to :class:`DecisionTreeClassifier`.
    """

    def __init__(
        self,
        n_estimators=100,
        max_depth=None,
        min_samples_split=2,
        max_features="sqrt",
        bootstrap=True,
        seed=0,
    ):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def _resolve_max_features(self, n_features: int) -> int | None:
        if self.max_features is None:
            return None
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        return int(self.max_features)

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        n, d = X.shape
        self.n_features_ = d
        t = y.astype(np.float64)
        max_features = self._resolve_max_features(d)
        rng = np.random.default_rng(self.seed)
        self.trees_ = []
        per_tree_importances = []
        for _ in range(self.n_estimators):
            tree_rng = np.random.default_rng(rng.integers(0, 2**63))
            if self.bootstrap:
                idx = tree_rng.integers(0, n, size=n)
            else:
                idx = np.arange(n)
            importances = np.zeros(d)
            root = _grow_tree(
                X[idx],
                t[idx],
                "gini",
                self.max_depth,
                self.min_samples_split,
                max_features,
                tree_rng,
                importances,
            )
            self.trees_.append(root)
            per_tree_importances.append(importances)
        mean_imp = np.mean(per_tree_importances, axis=0)
        total = mean_imp.sum()
        self.feature_importances_ = (
            mean_imp / total if total > 0 else np.full(d, 1.0 / d)
        )
        return self

    def predict_score(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        return np.mean([_tree_values(root, X) for root in self.trees_], axis=0)

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class GradientBoostedTreesClassifier(BaseEstimator):
    """Gradient boosting with logistic loss on depth-limited regression trees.

    Each round fits a variance-reduction tree to the current residuals
    (label minus predicted probability) and applies a Newton step per leaf.
    ``train_loss_`` records the mean logistic loss after every round.
    """

    def __init__(self, n_estimators=100, learning_rate=0.1, max_depth=4, min_samples_split=2):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        t = y.astype(np.float64)
        self.n_features_ = X.shape[1]
        p0 = min(max(t.mean(), 1e-6), 1.0 - 1e-6)
        self.base_score_ = float(np.log(p0 / (1.0 - p0)))
        raw = np.full(len(t), self.base_score_)
        self.stages_ = []
        self.train_loss_ = []
        for _ in range(self.n_estimators):
            prob = 1.0 / (1.0 + np.exp(-raw))
            residual = t - prob
            root = _grow_tree(
                X, residual, "mse", self.max_depth, self.min_samples_split, None, None, None
            )
            self._newton_leaf_values(root, X, residual, prob)
            raw = raw + self.learning_rate * _tree_values(root, X)
            self.stages_.append(root)
            self.train_loss_.append(float(np.mean(np.logaddexp(0.0, raw) - t * raw)))
        return self

    @staticmethod
    def _newton_leaf_values(root: _Node, X, residual, prob):
        hessian = prob * (1.0 - prob)
        stack = [(root, np.arange(len(X)))]
        while stack:
            node, idx = stack.pop()
            if node.is_leaf:
                num = residual[idx].sum()
                den = max(hessian[idx].sum(), 1e-12)
                # clip so near-saturated leaves cannot blow up the raw score
                node.value = float(np.clip(num / den, -10.0, 10.0))
                continue
            mask = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))

    def decision_function(self, X) -> np.ndarray:
        X = check_array(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        raw = np.full(len(X), self.base_score_)
        for root in self.stages_:
            raw = raw + self.learning_rate * _tree_values(root, X)
        return raw

    def predict_score(self, X) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.decision_function(X)))

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)

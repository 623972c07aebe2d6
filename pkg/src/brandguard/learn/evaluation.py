"""Model specs, training, stratified cross-validation, and feature importance.

``train`` owns the scaling contract: every model is fitted on min-max scaled
features using a scaler fitted on exactly the data handed to it, so
cross-validation scales each fold from its training split only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..base import check_X_y, check_array
from ..features import FeatureScaler, FEATURE_NAMES
from .baselines import GaussianNBClassifier, KNNClassifier
from .linear import LinearSVMClassifier, LogisticRegressionClassifier, SGDLinearClassifier
from .metrics import Metrics, compute_metrics, mean_metrics
from .mlp import MLPClassifier
from .trees import (
    DecisionTreeClassifier,
    GradientBoostedTreesClassifier,
    RandomForestClassifier,
)

__all__ = [
    "MODEL_KINDS",
    "ModelSpec",
    "Dataset",
    "TrainedModel",
    "EvalReport",
    "build_model",
    "train",
    "predict",
    "stratified_folds",
    "cross_validate",
    "grid_search",
    "rf_feature_importance",
    "ablation_importance",
]

# kind -> (estimator class, fixed constructor overrides)
_REGISTRY: dict[str, tuple[type, dict]] = {
    "logistic_regression": (LogisticRegressionClassifier, {}),
    "linear_svm_hinge": (LinearSVMClassifier, {}),
    "sgd_hinge": (SGDLinearClassifier, {}),
    "gaussian_nb": (GaussianNBClassifier, {}),
    "knn": (KNNClassifier, {}),
    "decision_tree": (DecisionTreeClassifier, {}),
    "random_forest": (RandomForestClassifier, {}),
    "gradient_boosted_trees": (GradientBoostedTreesClassifier, {}),
    "mlp3": (MLPClassifier, {"hidden_layers": (100, 100)}),
    "mlp4": (MLPClassifier, {"hidden_layers": (100, 100, 100)}),
}

MODEL_KINDS = tuple(_REGISTRY)


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def with_params(self, **params) -> "ModelSpec":
        merged = dict(self.hyperparameters)
        merged.update(params)
        return ModelSpec(kind=self.kind, hyperparameters=merged, seed=self.seed)


@dataclass(frozen=True)
class Dataset:
    """Raw (unscaled) feature rows with aligned labels and pair ids."""

    X: np.ndarray
    y: np.ndarray
    pair_ids: tuple[str, ...]
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        X, y = check_X_y(self.X, self.y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if len(self.pair_ids) != len(X):
            raise ValueError("pair_ids misaligned with rows")
        if X.shape[1] != len(self.feature_names):
            raise ValueError("feature_names misaligned with columns")

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices)
        return Dataset(
            X=self.X[indices],
            y=self.y[indices],
            pair_ids=tuple(self.pair_ids[i] for i in indices),
            feature_names=self.feature_names,
        )

    def drop_feature(self, name: str) -> "Dataset":
        if name not in self.feature_names:
            raise ValueError(f"unknown feature {name!r}")
        keep = [i for i, f in enumerate(self.feature_names) if f != name]
        return Dataset(
            X=self.X[:, keep],
            y=self.y,
            pair_ids=self.pair_ids,
            feature_names=tuple(f for f in self.feature_names if f != name),
        )


@dataclass
class TrainedModel:
    spec: ModelSpec
    scaler: FeatureScaler
    model: object
    feature_names: tuple[str, ...]

    @property
    def kind(self) -> str:
        return self.spec.kind


@dataclass(frozen=True)
class EvalReport:
    spec: ModelSpec
    mean: Metrics
    folds: tuple[Metrics, ...]

    def as_dict(self) -> dict:
        return {
            "kind": self.spec.kind,
            "seed": self.spec.seed,
            "hyperparameters": dict(self.spec.hyperparameters),
            "mean": self.mean.as_dict(),
            "folds": [m.as_dict() for m in self.folds],
        }


def build_model(spec: ModelSpec):
    if spec.kind not in _REGISTRY:
        raise ValueError(f"unknown model kind {spec.kind!r}; valid: {MODEL_KINDS}")
    cls, overrides = _REGISTRY[spec.kind]
    params = dict(overrides)
    params.update(spec.hyperparameters)
    if "seed" in cls._param_names() and "seed" not in params:
        params["seed"] = spec.seed
    return cls(**params)


def train(spec: ModelSpec, dataset: Dataset) -> TrainedModel:
    """Fit the scaler on the given data, then the model on the scaled data."""
    if len(np.unique(dataset.y)) < 2:
        raise ValueError("training data must contain both classes")
    scaler = FeatureScaler().fit(dataset.X)
    model = build_model(spec)
    model.fit(scaler.transform(dataset.X), dataset.y)
    return TrainedModel(
        spec=spec, scaler=scaler, model=model, feature_names=dataset.feature_names
    )


def predict(trained: TrainedModel, X) -> tuple[np.ndarray, np.ndarray]:
    """(labels, scores in [0, 1]) for raw (unscaled) feature rows."""
    X = check_array(X)
    if X.shape[1] != len(trained.feature_names):
        raise ValueError(
            f"expected {len(trained.feature_names)} features, got {X.shape[1]}"
        )
    scores = np.clip(trained.model.predict_score(trained.scaler.transform(X)), 0.0, 1.0)
    return (scores >= 0.5).astype(np.int64), scores


def stratified_folds(y, k: int, seed: int = 0) -> list[np.ndarray]:
    """Per-class shuffle then round-robin deal into k folds."""
    y = np.asarray(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    counts = {cls: int(np.sum(y == cls)) for cls in np.unique(y)}
    smallest = min(counts.values())
    if smallest < k:
        raise ValueError(
            f"minority class has {smallest} samples < {k} folds; use a smaller k"
        )
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=np.int64)
    for cls in sorted(counts):
        idx = np.nonzero(y == cls)[0]
        idx = idx[rng.permutation(len(idx))]
        assignment[idx] = np.arange(len(idx)) % k
    return [np.nonzero(assignment == fold)[0] for fold in range(k)]


def cross_validate(spec: ModelSpec, dataset: Dataset, k: int = 10, seed: int = 0) -> EvalReport:
    """Stratified k-fold evaluation; metrics averaged over folds."""
    folds = stratified_folds(dataset.y, k, seed)
    per_fold = []
    for fold_idx in range(k):
        test_idx = folds[fold_idx]
        train_idx = np.concatenate([folds[j] for j in range(k) if j != fold_idx])
        trained = train(spec, dataset.subset(train_idx))
        y_pred, y_score = predict(trained, dataset.X[test_idx])
        per_fold.append(compute_metrics(dataset.y[test_idx], y_pred, y_score))
    return EvalReport(spec=spec, mean=mean_metrics(per_fold), folds=tuple(per_fold))


def grid_search(spec: ModelSpec, grid: dict[str, list], dataset: Dataset, k: int = 3) -> dict:
    """Exhaustive search maximizing mean micro-F1 over inner CV.

    Ties go to the earlier point in grid enumeration order (itertools.product
    over the grid's insertion order).
    """
    if not grid:
        raise ValueError("grid must be non-empty")
    names = list(grid)
    best_params, best_score = None, -np.inf
    for combo in itertools.product(*(grid[name] for name in names)):
        params = dict(zip(names, combo))
        report = cross_validate(spec.with_params(**params), dataset, k=k, seed=spec.seed)
        if report.mean.micro_f1 > best_score:
            best_score = report.mean.micro_f1
            best_params = params
    return best_params


def rf_feature_importance(trained: TrainedModel) -> dict[str, float]:
    """Mean impurity decrease per feature, normalized to sum 1."""
    if trained.kind != "random_forest":
        raise ValueError(f"feature importance requires random_forest, got {trained.kind!r}")
    weights = trained.model.feature_importances_
    return dict(zip(trained.feature_names, (float(w) for w in weights)))


def ablation_importance(
    spec: ModelSpec, dataset: Dataset, k: int = 10, seed: int = 0
) -> list[tuple[str, Metrics]]:
    """Cross-validated metrics after dropping each feature in isolation."""
    if len(dataset.feature_names) < 2:
        raise ValueError("ablation needs at least 2 features")
    rows = []
    for name in dataset.feature_names:
        report = cross_validate(spec, dataset.drop_feature(name), k=k, seed=seed)
        rows.append((name, report.mean))
    return rows

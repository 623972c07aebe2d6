"""From-scratch classifier suite, cross-validation, and feature importance."""

from .baselines import GaussianNBClassifier, KNNClassifier
from .evaluation import (
    MODEL_KINDS,
    Dataset,
    EvalReport,
    ModelSpec,
    TrainedModel,
    ablation_importance,
    build_model,
    cross_validate,
    grid_search,
    predict,
    rf_feature_importance,
    stratified_folds,
    train,
)
from .linear import LinearSVMClassifier, LogisticRegressionClassifier, SGDLinearClassifier
from .metrics import Metrics, compute_metrics, mean_metrics, roc_auc
from .mlp import MLPClassifier, mlp_loss_and_gradients
from .persistence import ModelPersistenceError, load_model, save_model
from .trees import (
    DecisionTreeClassifier,
    GradientBoostedTreesClassifier,
    RandomForestClassifier,
    gini_impurity,
)

__all__ = [
    "MODEL_KINDS",
    "Dataset",
    "EvalReport",
    "Metrics",
    "ModelSpec",
    "TrainedModel",
    "ablation_importance",
    "build_model",
    "compute_metrics",
    "cross_validate",
    "grid_search",
    "mean_metrics",
    "mlp_loss_and_gradients",
    "predict",
    "rf_feature_importance",
    "roc_auc",
    "stratified_folds",
    "train",
    "gini_impurity",
    "save_model",
    "load_model",
    "ModelPersistenceError",
    "GaussianNBClassifier",
    "KNNClassifier",
    "LinearSVMClassifier",
    "LogisticRegressionClassifier",
    "SGDLinearClassifier",
    "MLPClassifier",
    "DecisionTreeClassifier",
    "RandomForestClassifier",
    "GradientBoostedTreesClassifier",
]

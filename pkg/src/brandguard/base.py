"""Estimator plumbing shared by the scaler and the classifier suite.

Mirrors the scikit-learn parameter protocol (constructor args are the
hyperparameters; ``get_params``/``set_params``/``clone`` work off the
constructor signature) so estimators here compose with pipeline tooling that
duck-types against that API.
"""

from __future__ import annotations

import inspect

import numpy as np

__all__ = ["BaseEstimator", "clone", "check_array", "check_X_y"]


class BaseEstimator:
    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def clone(estimator):
    """Fresh unfitted copy with identical hyperparameters."""
    return type(estimator)(**estimator.get_params())


def check_array(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 array and reject non-finite values."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_X_y(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = check_array(X)
    y = np.asarray(y)
    if y.ndim != 1 or len(y) != len(X):
        raise ValueError(f"y has shape {y.shape}, expected ({len(X)},)")
    labels = set(np.unique(y).tolist())
    if not labels <= {0, 1}:
        raise ValueError(f"labels must be binary 0/1, got {sorted(labels)}")
    return X, y.astype(np.int64)

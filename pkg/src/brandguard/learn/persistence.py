"""Trained-model serialization.

Files carry a magic header and a format version ahead of the pickled
payload (spec, scaler, model, feature names); anything that fails the header,
version, or unpickling checks raises :class:`ModelPersistenceError` rather
than surfacing low-level exceptions.
"""

from __future__ import annotations

import pickle

from .evaluation import TrainedModel

__all__ = ["ModelPersistenceError", "save_model", "load_model", "FORMAT_VERSION"]

_MAGIC = b"BRANDGUARD-MODEL\n"
FORMAT_VERSION = 1


class ModelPersistenceError(RuntimeError):
    pass


def save_model(trained: TrainedModel, path: str) -> None:
    payload = {
        "version": FORMAT_VERSION,
        "spec": trained.spec,
        "scaler": trained.scaler,
        "model": trained.model,
        "feature_names": trained.feature_names,
    }
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        pickle.dump(payload, fh, protocol=pickle.HIGHEST_PROTOCOL)


def load_model(path: str) -> TrainedModel:
    with open(path, "rb") as fh:
        header = fh.read(len(_MAGIC))
        if header != _MAGIC:
            raise ModelPersistenceError(f"{path}: not a model file (bad header)")
        try:
            payload = pickle.load(fh)
        except Exception as exc:
            raise ModelPersistenceError(f"{path}: corrupt model file ({exc})") from exc
    if not isinstance(payload, dict) or "version" not in payload:
        raise ModelPersistenceError(f"{path}: corrupt model file (bad payload)")
    if payload["version"] != FORMAT_VERSION:
        raise ModelPersistenceError(
            f"{path}: format version {payload['version']} unsupported "
            f"(expected {FORMAT_VERSION})"
        )
    return TrainedModel(
        spec=payload["spec"],
        scaler=payload["scaler"],
        model=payload["model"],
        feature_names=tuple(payload["feature_names"]),
    )

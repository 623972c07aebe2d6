"""Binary classification metrics with micro and macro averaging.

Micro quantities come from global confusion counts, which for single-label
binary prediction collapse to accuracy (micro precision = recall = F1).
Macro precision/recall are unweighted means over the two classes, and each F1
field is the harmonic mean of its corresponding precision/recall pair.
ROC-AUC is the tie-averaged rank statistic over scores; the macro variant is
the mean of the two one-vs-rest AUCs and the micro variant is the AUC over
the flattened one-vs-rest score matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

__all__ = [
    "Metrics",
    "compute_metrics",
    "roc_auc",
    "per_class_counts",
    "precision_recall_f1",
    "mean_metrics",
]


@dataclass(frozen=True)
class Metrics:
    micro_precision: float
    micro_recall: float
    micro_f1: float
    micro_roc_auc: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    macro_roc_auc: float

    def as_dict(self) -> dict:
        return {
            "micro": {
                "precision": self.micro_precision,
                "recall": self.micro_recall,
                "f1": self.micro_f1,
                "roc_auc": self.micro_roc_auc,
            },
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
                "roc_auc": self.macro_roc_auc,
            },
        }


def _as_binary(vec, name: str) -> np.ndarray:
    arr = np.asarray(vec)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional")
    if not set(np.unique(arr).tolist()) <= {0, 1}:
        raise ValueError(f"{name} must contain only 0/1")
    return arr.astype(np.int64)


def per_class_counts(y_true, y_pred) -> dict[int, dict[str, int]]:
    """tp / fp / fn per class label."""
    y_true = _as_binary(y_true, "y_true")
    y_pred = _as_binary(y_pred, "y_pred")
    if len(y_true) != len(y_pred):
        raise ValueError("y_true and y_pred lengths differ")
    counts = {}
    for cls in (0, 1):
        tp = int(np.sum((y_pred == cls) & (y_true == cls)))
        fp = int(np.sum((y_pred == cls) & (y_true != cls)))
        fn = int(np.sum((y_pred != cls) & (y_true == cls)))
        counts[cls] = {"tp": tp, "fp": fp, "fn": fn}
    return counts


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def _harmonic(p: float, r: float) -> float:
    return _safe_div(2 * p * r, p + r)


def precision_recall_f1(y_true, y_pred, cls: int) -> tuple[float, float, float]:
    c = per_class_counts(y_true, y_pred)[cls]
    precision = _safe_div(c["tp"], c["tp"] + c["fp"])
    recall = _safe_div(c["tp"], c["tp"] + c["fn"])
    return precision, recall, _harmonic(precision, recall)


def _tie_averaged_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values), dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        # ranks are 1-based; ties share the mean rank of their block
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def roc_auc(y_true, y_score) -> float:
    """Mann-Whitney AUC: fraction of (positive, negative) pairs ranked
    correctly, ties counting one half."""
    y_true = _as_binary(y_true, "y_true")
    y_score = np.asarray(y_score, dtype=np.float64)
    if len(y_true) != len(y_score):
        raise ValueError("y_true and y_score lengths differ")
    n_pos = int(np.sum(y_true == 1))
    n_neg = len(y_true) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC-AUC undefined: y_true contains a single class")
    ranks = _tie_averaged_ranks(y_score)
    rank_sum = float(np.sum(ranks[y_true == 1]))
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def compute_metrics(y_true, y_pred, y_score) -> Metrics:
    y_true = _as_binary(y_true, "y_true")
    y_pred = _as_binary(y_pred, "y_pred")
    y_score = np.asarray(y_score, dtype=np.float64)
    if not (len(y_true) == len(y_pred) == len(y_score)):
        raise ValueError("metric inputs must be aligned")
    if len(set(np.unique(y_true).tolist())) < 2:
        raise ValueError("y_true must contain both classes")

    counts = per_class_counts(y_true, y_pred)
    tp = counts[0]["tp"] + counts[1]["tp"]
    fp = counts[0]["fp"] + counts[1]["fp"]
    fn = counts[0]["fn"] + counts[1]["fn"]
    micro_p = _safe_div(tp, tp + fp)
    micro_r = _safe_div(tp, tp + fn)

    per_class = [precision_recall_f1(y_true, y_pred, cls) for cls in (0, 1)]
    macro_p = sum(p for p, _, _ in per_class) / 2.0
    macro_r = sum(r for _, r, _ in per_class) / 2.0

    auc_pos = roc_auc(y_true, y_score)
    auc_neg = roc_auc(1 - y_true, 1.0 - y_score)
    macro_auc = (auc_pos + auc_neg) / 2.0
    micro_auc = roc_auc(
        np.concatenate([y_true, 1 - y_true]),
        np.concatenate([y_score, 1.0 - y_score]),
    )

    return Metrics(
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f1=_harmonic(micro_p, micro_r),
        micro_roc_auc=micro_auc,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=_harmonic(macro_p, macro_r),
        macro_roc_auc=macro_auc,
    )


def mean_metrics(items: list[Metrics]) -> Metrics:
    if not items:
        raise ValueError("cannot average an empty metrics list")
    values = {
        f.name: sum(getattr(m, f.name) for m in items) / len(items)
        for f in fields(Metrics)
    }
    return Metrics(**values)

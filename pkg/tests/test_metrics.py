import numpy as np
import pytest

from brandguard.learn.metrics import (
    Metrics,
    compute_metrics,
    mean_metrics,
    per_class_counts,
    precision_recall_f1,
    roc_auc,
)


def pair_counting_auc(y_true, y_score):
    """Count correctly ordered (positive, negative) pairs; ties score half."""
    pos = [s for yt, s in zip(y_true, y_score) if yt == 1]
    neg = [s for yt, s in zip(y_true, y_score) if yt == 0]
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


def test_perfect_prediction_all_ones():
    y = [1, 1, 0, 0, 1]
    metrics = compute_metrics(y, y, [1.0, 1.0, 0.0, 0.0, 1.0])
    for name in (
        "micro_precision", "micro_recall", "micro_f1", "micro_roc_auc",
        "macro_precision", "macro_recall", "macro_f1", "macro_roc_auc",
    ):
        assert getattr(metrics, name) == 1.0


def test_hand_confusion_example():
    y_true = [1, 1, 0, 0]
    y_pred = [1, 0, 0, 0]
    precision, recall, f1 = precision_recall_f1(y_true, y_pred, cls=1)
    assert precision == 1.0
    assert recall == 0.5
    assert f1 == pytest.approx(2 / 3, abs=1e-12)
    metrics = compute_metrics(y_true, y_pred, [0.9, 0.4, 0.2, 0.1])
    assert metrics.micro_f1 == pytest.approx(0.75, abs=1e-12)
    counts = per_class_counts(y_true, y_pred)
    assert counts[1] == {"tp": 1, "fp": 0, "fn": 1}
    assert counts[0] == {"tp": 2, "fp": 1, "fn": 0}


def test_micro_equals_accuracy_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(4, 60))
        y_true = rng.integers(0, 2, n)
        if len(set(y_true.tolist())) < 2:
            continue
        y_pred = rng.integers(0, 2, n)
        score = rng.random(n)
        metrics = compute_metrics(y_true, y_pred, score)
        accuracy = float(np.mean(y_true == y_pred))
        assert metrics.micro_precision == pytest.approx(accuracy, abs=1e-12)
        assert metrics.micro_recall == pytest.approx(accuracy, abs=1e-12)
        assert metrics.micro_f1 == pytest.approx(accuracy, abs=1e-12)


def test_f1_is_harmonic_mean_of_macro_pr():
    rng = np.random.default_rng(5)
    y_true = rng.integers(0, 2, 50)
    y_true[:2] = [0, 1]
    y_pred = rng.integers(0, 2, 50)
    metrics = compute_metrics(y_true, y_pred, rng.random(50))
    expected = (
        2 * metrics.macro_precision * metrics.macro_recall
        / (metrics.macro_precision + metrics.macro_recall)
    )
    assert metrics.macro_f1 == pytest.approx(expected, abs=1e-12)


def test_auc_matches_pair_counting_oracle():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(4, 200))
        y = rng.integers(0, 2, n)
        if len(set(y.tolist())) < 2:
            y[0], y[1] = 0, 1
        # coarse grid forces plenty of score ties
        score = np.round(rng.random(n), 1)
        assert roc_auc(y, score) == pytest.approx(pair_counting_auc(y, score), abs=1e-9)


def test_auc_near_half_for_random_scores():
    rng = np.random.default_rng(19)
    y = np.array([0, 1] * 2500)
    score = rng.random(5000)
    assert roc_auc(y, score) == pytest.approx(0.5, abs=0.05)


def test_auc_single_class_errors():
    with pytest.raises(ValueError, match="single class"):
        roc_auc([1, 1, 1], [0.1, 0.2, 0.3])
    with pytest.raises(ValueError, match="both classes"):
        compute_metrics([1, 1], [1, 0], [0.9, 0.1])


def test_macro_auc_equals_binary_auc():
    rng = np.random.default_rng(23)
    y = rng.integers(0, 2, 100)
    y[:2] = [0, 1]
    score = rng.random(100)
    metrics = compute_metrics(y, (score >= 0.5).astype(int), score)
    assert metrics.macro_roc_auc == pytest.approx(roc_auc(y, score), abs=1e-12)


def test_mean_metrics_field_wise():
    a = Metrics(1, 1, 1, 1, 1, 1, 1, 1)
    b = Metrics(0, 0, 0, 0, 0, 0, 0, 0)
    mean = mean_metrics([a, b])
    assert mean.micro_f1 == 0.5
    assert mean.macro_roc_auc == 0.5
    with pytest.raises(ValueError):
        mean_metrics([])


def test_misaligned_inputs_error():
    with pytest.raises(ValueError):
        compute_metrics([1, 0], [1], [0.5])
    with pytest.raises(ValueError):
        roc_auc([1, 0], [0.5])

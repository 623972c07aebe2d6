"""Characterization analytics: distribution comparisons, power-law series,
rank-truncated KL divergence, annotator agreement, and a pluggable
per-reviewer suspiciousness score.

Everything here is pure over read-only inputs and emits plain data (arrays
and dataclasses) intended for CSV export; no plotting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus

__all__ = [
    "DistributionSummary",
    "LogLogSeries",
    "feature_distributions",
    "loglog_distribution",
    "rating_histogram",
    "kl_divergence_ranked",
    "cohens_kappa",
    "default_spamicity",
    "silverman_bandwidth",
    "gaussian_kde",
]

KDE_GRID_POINTS = 512
KDE_TAIL_SIGMAS = 6.0


@dataclass(frozen=True)
class ClassDensity:
    histogram: np.ndarray  # density per bin, integrates to 1
    kde_x: np.ndarray
    kde_y: np.ndarray


@dataclass(frozen=True)
class DistributionSummary:
    feature: str
    bin_edges: np.ndarray
    per_class: dict[int, ClassDensity]


@dataclass(frozen=True)
class LogLogSeries:
    axis: str
    log_count: np.ndarray  # log of reviews-per-entity value k
    log_frequency: np.ndarray  # log of number of entities with exactly k reviews
    slope: float
    intercept: float


def silverman_bandwidth(values: np.ndarray) -> float:
    """Rule-of-thumb bandwidth 0.9 * min(std, IQR/1.34) * n^(-1/5).

    Degenerate (constant) samples fall back to a small positive width so the
    density stays integrable.
    """
    n = len(values)
    std = float(np.std(values))
    q75, q25 = np.percentile(values, [75, 25])
    iqr = float(q75 - q25)
    candidates = [s for s in (std, iqr / 1.34) if s > 0]
    if not candidates:
        return 1e-3
    return 0.9 * min(candidates) * n ** (-0.2)


def gaussian_kde(values: np.ndarray, grid: np.ndarray, bandwidth: float) -> np.ndarray:
    z = (grid[:, None] - values[None, :]) / bandwidth
    kernel = np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)
    return kernel.mean(axis=1) / bandwidth


def feature_distributions(
    feature_rows: dict[str, np.ndarray],
    labels,
    n_bins: int = 20,
) -> list[DistributionSummary]:
    """Per-feature, per-class histogram and KDE over the joint value range.

    ``feature_rows`` maps feature name to the values column; ``labels`` is
    the aligned 0/1 class vector. Histogram densities integrate to exactly 1
    per class; KDE curves are evaluated on a grid wide enough to hold the
    Gaussian tails.
    """
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    if len(classes) < 2:
        raise ValueError("feature_distributions requires both classes present")
    summaries = []
    for feature, values in feature_rows.items():
        values = np.asarray(values, dtype=np.float64)
        if len(values) != len(labels):
            raise ValueError(f"feature {feature!r} misaligned with labels")
        lo, hi = float(values.min()), float(values.max())
        if hi <= lo:
            hi = lo + 1.0
        edges = np.linspace(lo, hi, n_bins + 1)
        bandwidths = {
            int(cls): silverman_bandwidth(values[labels == cls]) for cls in classes
        }
        # one grid for all classes, wide enough for the fattest tails
        pad = KDE_TAIL_SIGMAS * max(bandwidths.values())
        grid = np.linspace(lo - pad, hi + pad, KDE_GRID_POINTS)
        per_class = {}
        for cls in classes:
            sub = values[labels == cls]
            hist, _ = np.histogram(sub, bins=edges, density=True)
            per_class[int(cls)] = ClassDensity(
                histogram=hist,
                kde_x=grid,
                kde_y=gaussian_kde(sub, grid, bandwidths[int(cls)]),
            )
        summaries.append(
            DistributionSummary(feature=feature, bin_edges=edges, per_class=per_class)
        )
    return summaries


_AXIS_KEY = {
    "brand": lambda corpus, review: corpus.brand_of(review),
    "reviewer": lambda corpus, review: review.reviewer_id,
    "product": lambda corpus, review: review.product_id,
}


def loglog_distribution(corpus: Corpus, axis: str) -> LogLogSeries:
    """log-log frequency of entities by their exact review count, with a
    least-squares slope."""
    if axis not in _AXIS_KEY:
        raise ValueError(f"axis must be one of {sorted(_AXIS_KEY)}, got {axis!r}")
    if not corpus.reviews:
        raise ValueError("corpus is empty")
    key = _AXIS_KEY[axis]
    counts: dict[str, int] = {}
    for review in corpus.reviews:
        entity = key(corpus, review)
        counts[entity] = counts.get(entity, 0) + 1
    freq: dict[int, int] = {}
    for k in counts.values():
        freq[k] = freq.get(k, 0) + 1
    ks = np.array(sorted(freq), dtype=np.float64)
    fs = np.array([freq[int(k)] for k in ks], dtype=np.float64)
    log_k, log_f = np.log(ks), np.log(fs)
    if len(ks) >= 2:
        slope, intercept = np.polyfit(log_k, log_f, 1)
    else:
        slope, intercept = 0.0, float(log_f[0])
    return LogLogSeries(
        axis=axis,
        log_count=log_k,
        log_frequency=log_f,
        slope=float(slope),
        intercept=float(intercept),
    )


def rating_histogram(corpus: Corpus) -> np.ndarray:
    """Fractions of reviews per star 1..5; sums to 1."""
    if not corpus.reviews:
        raise ValueError("corpus is empty")
    counts = np.zeros(5)
    for review in corpus.reviews:
        counts[review.rating - 1] += 1
    return counts / counts.sum()


def kl_divergence_ranked(group_scores, brand_scores, eps: float = 1e-9) -> float:
    """KL(group || brand) between rank-truncated score distributions.

    Both score lists are sorted descending and truncated to the smaller
    length; each truncated list is epsilon-smoothed and normalized into a
    probability vector before the divergence is taken.
    """
    g = np.asarray(group_scores, dtype=np.float64)
    b = np.asarray(brand_scores, dtype=np.float64)
    if g.size == 0 or b.size == 0:
        raise ValueError("score lists must be non-empty")
    if not (np.all(np.isfinite(g)) and np.all(np.isfinite(b))):
        raise ValueError("scores must be finite")
    if np.any(g < 0) or np.any(b < 0):
        raise ValueError("scores must be non-negative to form distributions")
    n = min(len(g), len(b))
    g = np.sort(g)[::-1][:n]
    b = np.sort(b)[::-1][:n]
    if g.sum() == 0 or b.sum() == 0:
        raise ValueError("all-zero score vector after rank truncation")
    p = (g + eps) / (g + eps).sum()
    q = (b + eps) / (b + eps).sum()
    return float(np.sum(p * np.log(p / q)))


def cohens_kappa(labels_a, labels_b) -> float:
    """Chance-corrected agreement between two aligned label vectors."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1 or len(a) == 0:
        raise ValueError("label vectors must be aligned, 1-D, and non-empty")
    observed = float(np.mean(a == b))
    values = sorted(set(a.tolist()) | set(b.tolist()))
    expected = sum(
        float(np.mean(a == v)) * float(np.mean(b == v)) for v in values
    )
    if expected == 1.0:
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def default_spamicity(corpus: Corpus) -> dict[str, float]:
    """Per-reviewer score in [0, 1]: mean absolute deviation of the
    reviewer's ratings from each product's mean rating (leave-one-out, so a
    reviewer's own extreme rating cannot mask itself), normalized by 4.

    A documented stand-in for an external product-level fraud scorer; any
    mapping reviewer_id -> score can be plugged into the divergence analysis
    instead.
    """
    if not corpus.reviews:
        raise ValueError("corpus is empty")
    product_sum = {
        pid: (sum(r.rating for r in revs), len(revs))
        for pid, revs in corpus.by_product.items()
    }
    scores = {}
    for reviewer, revs in corpus.by_reviewer.items():
        deviations = []
        for r in revs:
            total, count = product_sum[r.product_id]
            if count > 1:
                others_mean = (total - r.rating) / (count - 1)
                deviations.append(abs(r.rating - others_mean))
            else:
                deviations.append(0.0)  # sole reviewer: no reference point
        scores[reviewer] = sum(deviations) / len(deviations) / 4.0
    return scores

"""Per-(group, brand) behavioral features.

The in-scope review set for a pair is every review written by a group member
on any product of the brand. Eight features summarize that set: mean rating,
mean helpful votes, mean text sentiment, group time window (how tightly the
group's reviews cluster in time, clamped at ``tau`` years), review count,
rating deviation from non-group reviewers (normalized by 4, the widest
possible gap on a 1-5 scale), early time window (how soon after each
product's first-ever review the group arrives, clamped at ``beta`` years),
and the verified-purchase fraction.

Time windows measure date differences in days divided by 365, so the default
``tau = beta = 0.28`` is roughly a 102-day campaign window. Both are
configurable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseEstimator, check_array
from .corpus import Corpus, Review
from .mining import GroupBrandPair
from .sentiment import Lexicon, score_text

__all__ = [
    "FEATURE_NAMES",
    "FeatureVector",
    "FeatureScaler",
    "EmptyPairError",
    "pair_reviews",
    "avg_rating",
    "avg_upvotes",
    "avg_sentiment",
    "group_time_window",
    "review_count",
    "rating_deviation",
    "early_time_window",
    "verified_fraction",
    "extract_features",
    "DEFAULT_TAU",
    "DEFAULT_BETA",
]

DEFAULT_TAU = 0.28  # years; ~102 days
DEFAULT_BETA = 0.28

DAYS_PER_YEAR = 365.0

FEATURE_NAMES = (
    "avg_rating",
    "avg_upvotes",
    "avg_sentiment",
    "group_time_window",
    "review_count",
    "rating_deviation",
    "early_time_window",
    "verified_fraction",
)


class EmptyPairError(ValueError):
    """The pair has no in-scope reviews; such pairs should not exist."""


@dataclass(frozen=True)
class FeatureVector:
    pair_id: str
    avg_rating: float
    avg_upvotes: float
    avg_sentiment: float
    group_time_window: float
    review_count: int
    rating_deviation: float
    early_time_window: float
    verified_fraction: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=np.float64)


def pair_reviews(corpus: Corpus, members, brand_id: str) -> list[Review]:
    """All reviews by group members on products of the brand."""
    member_set = set(members)
    return [
        r
        for r in corpus.by_brand.get(brand_id, ())
        if r.reviewer_id in member_set
    ]


def _require(reviews: list[Review], members, brand_id: str) -> list[Review]:
    if not reviews:
        raise EmptyPairError(
            f"group {sorted(members)} has no reviews on brand {brand_id!r}"
        )
    return reviews


def avg_rating(corpus: Corpus, members, brand_id: str) -> float:
    reviews = _require(pair_reviews(corpus, members, brand_id), members, brand_id)
    return sum(r.rating for r in reviews) / len(reviews)


def avg_upvotes(corpus: Corpus, members, brand_id: str) -> float:
    reviews = _require(pair_reviews(corpus, members, brand_id), members, brand_id)
    return sum(r.helpful_votes for r in reviews) / len(reviews)


def avg_sentiment(corpus: Corpus, lexicon: Lexicon, members, brand_id: str) -> float:
    reviews = _require(pair_reviews(corpus, members, brand_id), members, brand_id)
    return sum(score_text(lexicon, r.text) for r in reviews) / len(reviews)


def _window(gap_days: float, threshold_years: float) -> float:
    gap_years = gap_days / DAYS_PER_YEAR
    if gap_years > threshold_years:
        return 0.0
    return 1.0 - gap_years / threshold_years


def group_time_window(corpus: Corpus, members, brand_id: str, tau: float = DEFAULT_TAU) -> float:
    """1 when the group's first and last brand reviews coincide, decaying
    linearly to 0 at a span of ``tau`` years."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    reviews = _require(pair_reviews(corpus, members, brand_id), members, brand_id)
    dates = [r.date for r in reviews]
    return _window(max(dates) - min(dates), tau)


def review_count(corpus: Corpus, members, brand_id: str) -> int:
    return len(pair_reviews(corpus, members, brand_id))


def rating_deviation(corpus: Corpus, members, brand_id: str) -> float:
    """|group mean - non-group mean| / 4 on the brand's reviews.

    Returns 0 when nobody outside the group reviewed the brand: no evidence
    of deviation.
    """
    member_set = set(members)
    group, rest = [], []
    for r in corpus.by_brand.get(brand_id, ()):
        (group if r.reviewer_id in member_set else rest).append(r.rating)
    if not group:
        raise EmptyPairError(
            f"group {sorted(members)} has no reviews on brand {brand_id!r}"
        )
    if not rest:
        return 0.0
    gap = sum(group) / len(group) - sum(rest) / len(rest)
    return abs(gap) / 4.0


def early_time_window(corpus: Corpus, members, brand_id: str, beta: float = DEFAULT_BETA) -> float:
    """Mean over brand products (with >= 1 group review) of how soon after
    the product's first-ever review the group's last review on it lands,
    clamped at ``beta`` years."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    reviews = _require(pair_reviews(corpus, members, brand_id), members, brand_id)
    latest_by_product: dict[str, int] = {}
    for r in reviews:
        prev = latest_by_product.get(r.product_id)
        if prev is None or r.date > prev:
            latest_by_product[r.product_id] = r.date
    windows = []
    for product_id, group_latest in sorted(latest_by_product.items()):
        first_ever = min(r.date for r in corpus.by_product[product_id])
        windows.append(_window(group_latest - first_ever, beta))
    return sum(windows) / len(windows)


def verified_fraction(corpus: Corpus, members, brand_id: str) -> float:
    reviews = _require(pair_reviews(corpus, members, brand_id), members, brand_id)
    return sum(1 for r in reviews if r.verified) / len(reviews)


def extract_features(
    corpus: Corpus,
    lexicon: Lexicon,
    pair: GroupBrandPair,
    tau: float = DEFAULT_TAU,
    beta: float = DEFAULT_BETA,
) -> FeatureVector:
    """All eight features for one candidate pair."""
    members, brand = pair.members, pair.brand_id
    return FeatureVector(
        pair_id=pair.pair_id,
        avg_rating=avg_rating(corpus, members, brand),
        avg_upvotes=avg_upvotes(corpus, members, brand),
        avg_sentiment=avg_sentiment(corpus, lexicon, members, brand),
        group_time_window=group_time_window(corpus, members, brand, tau),
        review_count=review_count(corpus, members, brand),
        rating_deviation=rating_deviation(corpus, members, brand),
        early_time_window=early_time_window(corpus, members, brand, beta),
        verified_fraction=verified_fraction(corpus, members, brand),
    )


class FeatureScaler(BaseEstimator):
    """Min-max scaler to [0, 1], fitted on training folds only.

    Constant features map to 0; values outside the fitted range clamp to the
    nearest bound.
    """

    def __init__(self):
        self.data_min_ = None
        self.data_max_ = None

    def fit(self, X):
        X = check_array(X)
        if X.shape[0] == 0:
            raise ValueError("cannot fit scaler on an empty set")
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        return self

    def transform(self, X) -> np.ndarray:
        if self.data_min_ is None:
            raise RuntimeError("scaler has not been fitted")
        X = check_array(X)
        if X.shape[1] != len(self.data_min_):
            raise ValueError(
                f"expected {len(self.data_min_)} features, got {X.shape[1]}"
            )
        span = self.data_max_ - self.data_min_
        safe_span = np.where(span > 0, span, 1.0)
        scaled = (X - self.data_min_) / safe_span
        scaled = np.where(span > 0, scaled, 0.0)
        return np.clip(scaled, 0.0, 1.0)

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)

    def to_dict(self) -> dict:
        return {
            "data_min": self.data_min_.tolist(),
            "data_max": self.data_max_.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FeatureScaler":
        scaler = cls()
        scaler.data_min_ = np.asarray(payload["data_min"], dtype=np.float64)
        scaler.data_max_ = np.asarray(payload["data_max"], dtype=np.float64)
        return scaler

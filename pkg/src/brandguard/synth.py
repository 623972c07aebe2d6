"""Synthetic labeled review corpora with planted reviewer groups.

Plants extremist and moderate groups whose members co-review disjoint brand
slices, so mining at a support threshold at or below ``brands_per_group``
recovers exactly the planted member sets as maximal groups. Extremist pairs
burst-review early with high ratings, verified flags, positive vocabulary,
and several reviews per member; moderate pairs spread out over a year with
middling behavior. Background reviewers add non-group reviews on every brand
(keeping rating deviation meaningful) at a co-review rate far below any
realistic support threshold.

Knob defaults are chosen for qualitative shape (extremist mass at 5 stars,
verified fraction near 1, dominant review counts), not measured from any real
corpus. Generation is single-threaded and fully determined by the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .corpus import Corpus, Product, Review
from .mining import group_id_for
from .sentiment import Lexicon

__all__ = [
    "GroupBehavior",
    "SynthConfig",
    "PlantedLabel",
    "generate",
    "default_lexicon",
    "write_lexicon_tsv",
    "POSITIVE_TOKENS",
    "NEGATIVE_TOKENS",
    "NEUTRAL_TOKENS",
]

POSITIVE_TOKENS = {
    "great": 0.8,
    "excellent": 0.9,
    "amazing": 0.85,
    "awesome": 0.8,
    "perfect": 0.9,
    "love": 0.75,
    "best": 0.8,
    "fantastic": 0.85,
    "wonderful": 0.8,
    "superb": 0.85,
}

NEGATIVE_TOKENS = {
    "bad": 0.7,
    "terrible": 0.85,
    "awful": 0.8,
    "poor": 0.65,
    "worst": 0.9,
    "broken": 0.7,
    "disappointing": 0.75,
    "useless": 0.8,
}

NEUTRAL_TOKENS = (
    "battery", "screen", "delivery", "price", "box", "color", "size",
    "material", "plastic", "manual", "works", "bought", "using", "month",
    "product", "arrived", "ordered", "item",
)

_TIMELINE_START = 17000  # 2016-07-18 in days since epoch
_TIMELINE_SPAN = 800


@dataclass(frozen=True)
class GroupBehavior:
    rating_mean: float
    rating_std: float
    window_days: int
    verified_prob: float
    positive_token_rate: float
    negative_token_rate: float
    reviews_per_member_brand: int


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 42
    n_reviewers: int = 400  # planted-member pool
    n_brands: int = 1000
    n_products_per_brand: int = 3
    n_extremist_groups: int = 30
    n_moderate_groups: int = 30
    group_size: tuple[int, int] = (3, 6)
    brands_per_group: tuple[int, int] = (15, 15)
    extremist: GroupBehavior = field(
        default_factory=lambda: GroupBehavior(
            rating_mean=4.9,
            rating_std=0.3,
            window_days=30,
            verified_prob=0.9,
            positive_token_rate=0.6,
            negative_token_rate=0.05,
            reviews_per_member_brand=3,
        )
    )
    moderate: GroupBehavior = field(
        default_factory=lambda: GroupBehavior(
            rating_mean=4.0,
            rating_std=1.0,
            window_days=360,
            verified_prob=0.5,
            positive_token_rate=0.25,
            negative_token_rate=0.2,
            reviews_per_member_brand=1,
        )
    )
    n_background_reviewers: int = 300
    background_reviews_per_reviewer: int = 8

    @classmethod
    def from_dict(cls, payload: dict) -> "SynthConfig":
        data = dict(payload)
        for key in ("extremist", "moderate"):
            if key in data and isinstance(data[key], dict):
                data[key] = GroupBehavior(**data[key])
        for key in ("group_size", "brands_per_group"):
            if key in data:
                data[key] = tuple(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "SynthConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        lo, hi = self.group_size
        if not (2 <= lo <= hi):
            raise ValueError(f"group_size range {self.group_size} invalid")
        blo, bhi = self.brands_per_group
        if not (1 <= blo <= bhi):
            raise ValueError(f"brands_per_group range {self.brands_per_group} invalid")
        n_groups = self.n_extremist_groups + self.n_moderate_groups
        if n_groups * hi > self.n_reviewers:
            raise ValueError(
                f"{n_groups} groups of up to {hi} members exceed the "
                f"{self.n_reviewers}-reviewer pool"
            )
        if n_groups * bhi > self.n_brands:
            raise ValueError(
                f"{n_groups} groups of up to {bhi} brands exceed {self.n_brands} brands"
            )
        for behavior in (self.extremist, self.moderate):
            for prob in (
                behavior.verified_prob,
                behavior.positive_token_rate,
                behavior.negative_token_rate,
            ):
                if not 0.0 <= prob <= 1.0:
                    raise ValueError(f"probability {prob} outside [0, 1]")
            if behavior.positive_token_rate + behavior.negative_token_rate > 1.0:
                raise ValueError("token rates sum above 1")
            if behavior.reviews_per_member_brand < 1:
                raise ValueError("reviews_per_member_brand must be >= 1")


@dataclass(frozen=True)
class PlantedLabel:
    pair_id: str
    group_id: str
    brand_id: str
    label: int  # 1 extremist, 0 moderate


def default_lexicon() -> Lexicon:
    entries = {tok: (pos, 0.0) for tok, pos in POSITIVE_TOKENS.items()}
    entries.update({tok: (0.0, neg) for tok, neg in NEGATIVE_TOKENS.items()})
    return Lexicon(entries)


def write_lexicon_tsv(path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for token, (pos, neg) in sorted(default_lexicon().entries.items()):
            fh.write(f"{token}\t{pos}\t{neg}\n")


def _draw_rating(rng, mean: float, std: float) -> int:
    return int(np.clip(np.rint(rng.normal(mean, std)), 1, 5))

def _draw_text(rng, pos_rate: float, neg_rate: float) -> str:
    n_tokens = int(rng.integers(6, 13))
    pos = list(POSITIVE_TOKENS)
    neg = list(NEGATIVE_TOKENS)
    tokens = []
    for _ in range(n_tokens):
        u = rng.random()
        if u < pos_rate:
            tokens.append(pos[rng.integers(len(pos))])
        elif u < pos_rate + neg_rate:
            tokens.append(neg[rng.integers(len(neg))])
        else:
            tokens.append(NEUTRAL_TOKENS[rng.integers(len(NEUTRAL_TOKENS))])
    return " ".join(tokens)


def generate(config: SynthConfig) -> tuple[Corpus, list[PlantedLabel]]:
    """Build the corpus and the ground-truth labels for every planted pair."""
    config.validate()
    rng = np.random.default_rng(config.seed)

    brands = [f"brand{i:04d}" for i in range(config.n_brands)]
    products = {}
    launch_day = {}
    for brand in brands:
        base = _TIMELINE_START + int(rng.integers(0, _TIMELINE_SPAN))
        for j in range(config.n_products_per_brand):
            pid = f"{brand}-p{j}"
            products[pid] = Product(product_id=pid, raw_brand_name=brand, brand_id=brand)
            launch_day[pid] = base + int(rng.integers(0, 4))

    member_pool = [f"u{i:05d}" for i in range(config.n_reviewers)]
    rng.shuffle(member_pool)
    next_member = 0
    next_brand = 0

    reviews: list[Review] = []
    labels: list[PlantedLabel] = []
    review_counter = 0

    def add_review(reviewer, pid, rating, text, day, verified, votes):
        nonlocal review_counter
        reviews.append(
            Review(
                review_id=f"r{review_counter:07d}",
                reviewer_id=reviewer,
                product_id=pid,
                rating=rating,
                title=text.split(" ", 1)[0],
                text=text,
                date=day,
                helpful_votes=votes,
                verified=verified,
            )
        )
        review_counter += 1

    group_plans = [(1, config.extremist)] * config.n_extremist_groups + [
        (0, config.moderate)
    ] * config.n_moderate_groups
    n_group_brands_total = 0
    planted_members: list[tuple[str, GroupBehavior]] = []
    for label, behavior in group_plans:
        size = int(rng.integers(config.group_size[0], config.group_size[1] + 1))
        members = sorted(member_pool[next_member : next_member + size])
        next_member += size
        n_group_brands = int(
            rng.integers(config.brands_per_group[0], config.brands_per_group[1] + 1)
        )
        group_brands = brands[next_brand : next_brand + n_group_brands]
        next_brand += n_group_brands
        n_group_brands_total = next_brand
        planted_members.extend((member, behavior) for member in members)
        gid = group_id_for(members)

        for brand in group_brands:
            brand_products = [
                f"{brand}-p{j}" for j in range(config.n_products_per_brand)
            ]
            campaign_start = max(launch_day[p] for p in brand_products)
            for m_idx, member in enumerate(members):
                for j in range(behavior.reviews_per_member_brand):
                    pid = brand_products[(m_idx + j) % len(brand_products)]
                    day = campaign_start + int(rng.integers(0, behavior.window_days + 1))
                    add_review(
                        member,
                        pid,
                        _draw_rating(rng, behavior.rating_mean, behavior.rating_std),
                        _draw_text(
                            rng,
                            behavior.positive_token_rate,
                            behavior.negative_token_rate,
                        ),
                        day,
                        bool(rng.random() < behavior.verified_prob),
                        int(rng.poisson(1.0)),
                    )
            labels.append(
                PlantedLabel(
                    pair_id=f"{gid}:{brand}", group_id=gid, brand_id=brand, label=label
                )
            )

    # two anchor reviews per planted member on one spare (non-group) brand,
    # so every member reviews >= 2 products of some brand and survives the
    # reviewer-history filter; labeled pairs are untouched
    anchor_brands = brands[n_group_brands_total:]
    if anchor_brands:
        for idx, (member, behavior) in enumerate(planted_members):
            brand = anchor_brands[idx % len(anchor_brands)]
            for j in range(min(2, config.n_products_per_brand)):
                pid = f"{brand}-p{j}"
                day = launch_day[pid] + int(rng.integers(0, 361))
                add_review(
                    member,
                    pid,
                    _draw_rating(rng, 4.0, 1.0),
                    _draw_text(rng, 0.3, 0.15),
                    day,
                    bool(rng.random() < 0.7),
                    int(rng.poisson(1.0)),
                )

    product_ids = sorted(products)
    background_ratings = np.array([1, 2, 3, 4, 5])
    background_probs = np.array([0.10, 0.08, 0.12, 0.25, 0.45])
    for i in range(config.n_background_reviewers):
        reviewer = f"bg{i:05d}"
        for _ in range(config.background_reviews_per_reviewer):
            pid = product_ids[rng.integers(len(product_ids))]
            day = launch_day[pid] + int(rng.exponential(200.0))
            add_review(
                reviewer,
                pid,
                int(rng.choice(background_ratings, p=background_probs)),
                _draw_text(rng, 0.3, 0.15),
                day,
                bool(rng.random() < 0.7),
                int(rng.poisson(1.0)),
            )

    used_products = {r.product_id for r in reviews}
    corpus = Corpus(
        reviews=tuple(reviews),
        products={pid: products[pid] for pid in used_products},
    )
    return corpus, labels

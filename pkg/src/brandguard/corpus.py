"""Review corpus loading, brand normalization, and indexing.

A corpus is an immutable collection of reviews plus the products they were
written on. Products carry a canonical brand id assigned by
:func:`normalize_brand`; products whose brand cannot be resolved are dropped
together with their reviews. All downstream stages (mining, feature
extraction, characterization) read the corpus through its indexes and never
mutate it.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from datetime import date

__all__ = [
    "Review",
    "Product",
    "Corpus",
    "CorpusStats",
    "CorpusFormatError",
    "normalize_brand",
    "load_corpus",
    "save_corpus",
    "filter_by_reviewer_history",
    "corpus_stats",
    "parse_iso_date",
    "format_epoch_days",
]

# Trailing tokens that carry no brand identity ("LG Electronics" == "LG").
# Stripped only while at least one token remains.
BRAND_SUFFIX_TOKENS = frozenset({"electronics", "india", "inc", "ltd", "co"})

# Separators deleted outright so acronym spellings collapse ("L.G." -> "lg").
_JOINER_CHARS = re.compile(r"[.\-_'’]")
_NON_ALNUM = re.compile(r"[^0-9a-z]+")

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()

REVIEW_FIELDS = (
    "review_id",
    "reviewer_id",
    "product_id",
    "brand",
    "rating",
    "title",
    "text",
    "date",
    "helpful_votes",
    "verified",
)


class CorpusFormatError(ValueError):
    """Raised for malformed records, unknown formats, or duplicate ids."""


def parse_iso_date(value: str) -> int:
    """Parse ``YYYY-MM-DD`` into integer days since the Unix epoch."""
    return date.fromisoformat(value).toordinal() - _EPOCH_ORDINAL


def format_epoch_days(days: int) -> str:
    return date.fromordinal(days + _EPOCH_ORDINAL).isoformat()


def normalize_brand(raw: str) -> str | None:
    """Canonicalize a raw brand name.

    Case-folds, deletes joiner punctuation, collapses remaining
    non-alphanumeric runs to single spaces, and strips trailing
    non-identifying suffix tokens while more than one token remains.
    Returns ``None`` when nothing identifiable is left, signalling the caller
    to drop the product. Idempotent on every non-``None`` result.
    """
    text = _JOINER_CHARS.sub("", raw.casefold())
    tokens = [t for t in _NON_ALNUM.split(text) if t]
    while len(tokens) > 1 and tokens[-1] in BRAND_SUFFIX_TOKENS:
        tokens.pop()
    if not tokens:
        return None
    return " ".join(tokens)


@dataclass(frozen=True)
class Review:
    review_id: str
    reviewer_id: str
    product_id: str
    rating: int
    title: str
    text: str
    date: int  # days since Unix epoch
    helpful_votes: int
    verified: bool


@dataclass(frozen=True)
class Product:
    product_id: str
    raw_brand_name: str
    brand_id: str


@dataclass(frozen=True)
class CorpusStats:
    n_reviews: int
    n_reviewers: int
    n_brands: int
    n_products: int


@dataclass(frozen=True)
class Corpus:
    """Immutable review collection with precomputed lookup indexes.

    Safe to share read-only across concurrent workers; all index values are
    tuples/frozensets built once at construction.
    """

    reviews: tuple[Review, ...]
    products: dict[str, Product]
    dropped_brandless: int = 0
    by_reviewer: dict[str, tuple[Review, ...]] = field(init=False, repr=False)
    by_brand: dict[str, tuple[Review, ...]] = field(init=False, repr=False)
    by_product: dict[str, tuple[Review, ...]] = field(init=False, repr=False)
    brand_reviewers: dict[str, frozenset[str]] = field(init=False, repr=False)

    def __post_init__(self):
        by_reviewer: dict[str, list[Review]] = {}
        by_brand: dict[str, list[Review]] = {}
        by_product: dict[str, list[Review]] = {}
        seen_ids: set[str] = set()
        for review in self.reviews:
            if review.review_id in seen_ids:
                raise CorpusFormatError(f"duplicate review_id: {review.review_id}")
            seen_ids.add(review.review_id)
            product = self.products.get(review.product_id)
            if product is None:
                raise CorpusFormatError(
                    f"review {review.review_id} references unknown product "
                    f"{review.product_id}"
                )
            by_reviewer.setdefault(review.reviewer_id, []).append(review)
            by_brand.setdefault(product.brand_id, []).append(review)
            by_product.setdefault(review.product_id, []).append(review)
        object.__setattr__(
            self, "by_reviewer", {k: tuple(v) for k, v in by_reviewer.items()}
        )
        object.__setattr__(
            self, "by_brand", {k: tuple(v) for k, v in by_brand.items()}
        )
        object.__setattr__(
            self, "by_product", {k: tuple(v) for k, v in by_product.items()}
        )
        object.__setattr__(
            self,
            "brand_reviewers",
            {
                brand: frozenset(r.reviewer_id for r in revs)
                for brand, revs in by_brand.items()
            },
        )

    def brand_of(self, review: Review) -> str:
        return self.products[review.product_id].brand_id

    @property
    def brands(self) -> list[str]:
        return sorted(self.by_brand)

    @property
    def reviewers(self) -> list[str]:
        return sorted(self.by_reviewer)


def _parse_record(record: dict, line_no: int) -> dict:
    try:
        rating = int(record["rating"])
        helpful = int(record["helpful_votes"])
        verified = record["verified"]
        if isinstance(verified, str):
            if verified.lower() not in ("true", "false"):
                raise ValueError(f"bad verified flag {verified!r}")
            verified = verified.lower() == "true"
        day = record["date"]
        day = parse_iso_date(day) if isinstance(day, str) else int(day)
        parsed = {
            "review_id": str(record["review_id"]),
            "reviewer_id": str(record["reviewer_id"]),
            "product_id": str(record["product_id"]),
            "brand": str(record.get("brand", "")),
            "rating": rating,
            "title": str(record.get("title", "")),
            "text": str(record.get("text", "")),
            "date": day,
            "helpful_votes": helpful,
            "verified": verified,
        }
    except (KeyError, ValueError, TypeError) as exc:
        raise CorpusFormatError(f"line {line_no}: malformed record ({exc})") from exc
    if parsed["rating"] not in (1, 2, 3, 4, 5):
        raise CorpusFormatError(f"line {line_no}: rating {rating} outside 1..5")
    if parsed["helpful_votes"] < 0:
        raise CorpusFormatError(f"line {line_no}: negative helpful_votes")
    if not parsed["review_id"]:
        raise CorpusFormatError(f"line {line_no}: empty review_id")
    return parsed


def _iter_records(path: str, fmt: str):
    if fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusFormatError(
                        f"line {line_no}: invalid JSON ({exc.msg})"
                    ) from exc
                yield line_no, record
    elif fmt == "tsv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh, delimiter="\t")
            if reader.fieldnames is None:
                return
            missing = set(REVIEW_FIELDS) - set(reader.fieldnames)
            if missing:
                raise CorpusFormatError(
                    f"missing columns: {', '.join(sorted(missing))}"
                )
            for line_no, row in enumerate(reader, start=2):
                yield line_no, row
    else:
        raise CorpusFormatError(f"unknown corpus format: {fmt!r}")


def _load_product_brands(path: str) -> dict[str, str]:
    overrides: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            try:
                overrides[str(record["product_id"])] = str(record["raw_brand_name"])
            except KeyError as exc:
                raise CorpusFormatError(
                    f"product file line {line_no}: missing {exc}"
                ) from exc
    return overrides


def load_corpus(path: str, fmt: str = "jsonl", product_file: str | None = None) -> Corpus:
    """Load a review corpus from a line-delimited record file.

    ``fmt`` is ``jsonl`` (one JSON object per line) or ``tsv`` (tab-delimited
    with a header naming exactly the review fields). An optional product file
    (JSONL of product_id / raw_brand_name) overrides inline brands. Reviews on
    products whose brand normalizes to nothing are dropped and counted in
    ``Corpus.dropped_brandless``.
    """
    overrides = _load_product_brands(product_file) if product_file else {}
    raw_records = [_parse_record(rec, no) for no, rec in _iter_records(path, fmt)]

    # First inline mention wins when sellers disagree on a product's brand;
    # the product file, when given, wins over both.
    raw_brand: dict[str, str] = {}
    for rec in raw_records:
        raw_brand.setdefault(rec["product_id"], rec["brand"])
    raw_brand.update((pid, b) for pid, b in overrides.items() if pid in raw_brand)

    products: dict[str, Product] = {}
    for pid, raw in raw_brand.items():
        brand_id = normalize_brand(raw)
        if brand_id is not None:
            products[pid] = Product(product_id=pid, raw_brand_name=raw, brand_id=brand_id)

    reviews = []
    dropped = 0
    for rec in raw_records:
        if rec["product_id"] not in products:
            dropped += 1
            continue
        rec = dict(rec)
        rec.pop("brand")
        reviews.append(Review(**rec))
    return Corpus(reviews=tuple(reviews), products=products, dropped_brandless=dropped)


def save_corpus(corpus: Corpus, path: str) -> None:
    """Write the corpus back out as canonical JSONL (loadable by load_corpus)."""
    with open(path, "w", encoding="utf-8") as fh:
        for review in corpus.reviews:
            record = {
                "review_id": review.review_id,
                "reviewer_id": review.reviewer_id,
                "product_id": review.product_id,
                "brand": corpus.brand_of(review),
                "rating": review.rating,
                "title": review.title,
                "text": review.text,
                "date": format_epoch_days(review.date),
                "helpful_votes": review.helpful_votes,
                "verified": review.verified,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def filter_by_reviewer_history(corpus: Corpus, min_products_per_brand: int = 2) -> Corpus:
    """Keep reviewers with >= N distinct reviewed products under some brand.

    With ``min_products_per_brand=1`` this is the identity (every reviewer has
    at least one product under some brand).
    """
    if min_products_per_brand < 1:
        raise ValueError("min_products_per_brand must be >= 1")
    keep: set[str] = set()
    for reviewer, revs in corpus.by_reviewer.items():
        per_brand: dict[str, set[str]] = {}
        for review in revs:
            brand = corpus.brand_of(review)
            per_brand.setdefault(brand, set()).add(review.product_id)
        if any(len(pids) >= min_products_per_brand for pids in per_brand.values()):
            keep.add(reviewer)
    reviews = tuple(r for r in corpus.reviews if r.reviewer_id in keep)
    product_ids = {r.product_id for r in reviews}
    products = {pid: corpus.products[pid] for pid in product_ids}
    return Corpus(reviews=reviews, products=products, dropped_brandless=corpus.dropped_brandless)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    return CorpusStats(
        n_reviews=len(corpus.reviews),
        n_reviewers=len(corpus.by_reviewer),
        n_brands=len(corpus.by_brand),
        n_products=len(corpus.by_product),
    )

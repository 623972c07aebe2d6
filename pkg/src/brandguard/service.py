"""HTTP annotation service: browse candidate pairs with review evidence,
submit 0/1 labels, monitor agreement, export training data.

Labels persist to an append-only JSONL log (auditable, trivially durable);
the in-memory view keeps the last write per (pair, annotator) and is rebuilt
by replaying the log on startup. Submissions for the same key serialize
behind a lock; everything else is read-only per request.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .analysis import cohens_kappa
from .corpus import Corpus, format_epoch_days
from .features import FEATURE_NAMES
from .mining import CandidateGroup, GroupBrandPair, expand_pairs
from .storage import FeatureRow, features_csv_text

__all__ = ["LabelStore", "create_app", "ANNOTATION_CHECKLIST"]

# What annotators watch for, and at which level of the evidence they look.
# Reviewer rank is displayed for parity with common practice but cannot be
# checked here: rank data is not part of the corpus schema.
ANNOTATION_CHECKLIST = [
    {"criterion": "Brand mentions", "focus": "individual review"},
    {"criterion": "Excessive use of superlatives in text", "focus": "individual review"},
    {"criterion": "Excessively positive or negative sentiment", "focus": "individual review"},
    {"criterion": "Similarity in product description and review", "focus": "individual review"},
    {"criterion": "Rating variety", "focus": "reviewer profile"},
    {"criterion": "Number of reviews written", "focus": "reviewer profile"},
    {"criterion": "Rating deviation from the average rating", "focus": "reviewer profile"},
    {"criterion": "Reviewer's active duration", "focus": "reviewer profile"},
    {"criterion": "Similarity in reviews among group members", "focus": "group"},
    {"criterion": "Time of reviews of group members", "focus": "group"},
    {
        "criterion": "Rank of reviewers in the group",
        "focus": "group",
        "informational_only": True,
    },
]


@dataclass(frozen=True)
class LabelRecord:
    pair_id: str
    annotator_id: str
    label: int
    timestamp: float


class LabelStore:
    """Append-only label log; last write per (pair, annotator) wins."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        self._records: dict[tuple[str, str], LabelRecord] = {}
        self._replay()

    def _replay(self) -> None:
        try:
            fh = open(self.path, encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                record = LabelRecord(
                    pair_id=raw["pair_id"],
                    annotator_id=raw["annotator_id"],
                    label=int(raw["label"]),
                    timestamp=float(raw.get("timestamp", 0.0)),
                )
                self._records[(record.pair_id, record.annotator_id)] = record

    def submit(self, pair_id: str, annotator_id: str, label: int) -> LabelRecord:
        if label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {label!r}")
        if not annotator_id:
            raise ValueError("annotator_id must be non-empty")
        record = LabelRecord(
            pair_id=pair_id,
            annotator_id=annotator_id,
            label=label,
            timestamp=time.time(),
        )
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {
                            "pair_id": record.pair_id,
                            "annotator_id": record.annotator_id,
                            "label": record.label,
                            "timestamp": record.timestamp,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )
            self._records[(pair_id, annotator_id)] = record
        return record

    def labels_for(self, pair_id: str) -> dict[str, int]:
        return {
            annotator: record.label
            for (pid, annotator), record in self._records.items()
            if pid == pair_id
        }

    def annotators(self) -> list[str]:
        return sorted({annotator for _, annotator in self._records})

    def labeled_pairs(self) -> set[str]:
        return {pid for pid, _ in self._records}


def pair_status(labels: dict[str, int]) -> str:
    if not labels:
        return "unlabeled"
    if len(set(labels.values())) > 1:
        return "disputed"
    return "labeled"


def consensus_label(labels: dict[str, int]) -> int | None:
    values = set(labels.values())
    if len(values) == 1:
        return values.pop()
    return None


def majority_label(labels: dict[str, int]) -> int | None:
    ones = sum(1 for v in labels.values() if v == 1)
    zeros = len(labels) - ones
    if ones == zeros:
        return None
    return 1 if ones > zeros else 0


class LabelRequest(BaseModel):
    annotator_id: str
    label: int


def create_app(
    corpus: Corpus,
    groups: list[CandidateGroup],
    features: dict[str, FeatureRow],
    store: LabelStore,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="brandguard annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    pairs: dict[str, GroupBrandPair] = {
        pair.pair_id: pair for pair in expand_pairs(groups)
    }
    groups_by_id = {group.group_id: group for group in groups}
    ordered_pair_ids = sorted(pairs)

    def summary(pair: GroupBrandPair) -> dict:
        labels = store.labels_for(pair.pair_id)
        group = groups_by_id[pair.group_id]
        return {
            "pair_id": pair.pair_id,
            "group_id": pair.group_id,
            "brand_id": pair.brand_id,
            "group_size": len(pair.members),
            "support": group.support,
            "status": pair_status(labels),
            "labels": labels,
            "consensus_label": consensus_label(labels) if labels else None,
        }

    @app.get("/api/pairs")
    def list_pairs(status: str = "all", page: int = 1, page_size: int = 50):
        status = status or "all"
        if status not in ("all", "unlabeled", "labeled", "disputed"):
            raise HTTPException(400, f"unknown status filter {status!r}")
        if page < 1 or page_size < 1:
            raise HTTPException(400, "page and page_size must be >= 1")
        summaries = [summary(pairs[pid]) for pid in ordered_pair_ids]
        if status == "labeled":
            summaries = [s for s in summaries if s["status"] in ("labeled", "disputed")]
        elif status != "all":
            summaries = [s for s in summaries if s["status"] == status]
        total = len(summaries)
        total_pages = max(1, -(-total // page_size))
        start = (page - 1) * page_size
        return {
            "pairs": summaries[start : start + page_size],
            "page": page,
            "page_size": page_size,
            "total": total,
            "total_pages": total_pages,
        }

    @app.get("/api/pairs/{pair_id}/evidence")
    def get_evidence(pair_id: str):
        pair = pairs.get(pair_id)
        if pair is None:
            raise HTTPException(404, f"unknown pair {pair_id!r}")
        member_set = set(pair.members)
        in_scope = [
            r
            for r in corpus.by_brand.get(pair.brand_id, ())
            if r.reviewer_id in member_set
        ]
        product_ids = sorted({r.product_id for r in in_scope})
        grid = []
        for member in pair.members:
            cells = []
            for product_id in product_ids:
                cell_reviews = [
                    {
                        "review_id": r.review_id,
                        "rating": r.rating,
                        "date": format_epoch_days(r.date),
                        "verified": r.verified,
                        "helpful_votes": r.helpful_votes,
                        "title": r.title,
                        "text": r.text,
                    }
                    for r in in_scope
                    if r.reviewer_id == member and r.product_id == product_id
                ]
                cells.append({"product_id": product_id, "reviews": cell_reviews})
            grid.append({"member": member, "cells": cells})
        row = features.get(pair_id)
        feature_values = (
            {name: getattr(row.vector, name) for name in FEATURE_NAMES} if row else None
        )
        return {
            "pair_id": pair.pair_id,
            "group_id": pair.group_id,
            "brand_id": pair.brand_id,
            "members": list(pair.members),
            "products": product_ids,
            "grid": grid,
            "features": feature_values,
            "checklist": ANNOTATION_CHECKLIST,
            "labels": store.labels_for(pair_id),
        }

    @app.post("/api/pairs/{pair_id}/label")
    def submit_label(pair_id: str, request: LabelRequest):
        if pair_id not in pairs:
            raise HTTPException(404, f"unknown pair {pair_id!r}")
        try:
            record = store.submit(pair_id, request.annotator_id, request.label)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        return {
            "pair_id": record.pair_id,
            "annotator_id": record.annotator_id,
            "label": record.label,
            "status": pair_status(store.labels_for(pair_id)),
        }

    @app.get("/api/agreement")
    def agreement_report():
        annotators = store.annotators()
        pairwise = []
        any_overlap = False
        for i, a in enumerate(annotators):
            for b in annotators[i + 1 :]:
                shared = [
                    pid
                    for pid in ordered_pair_ids
                    if (pid, a) in store._records and (pid, b) in store._records
                ]
                if not shared:
                    continue
                any_overlap = True
                labels_a = [store._records[(pid, a)].label for pid in shared]
                labels_b = [store._records[(pid, b)].label for pid in shared]
                pairwise.append(
                    {
                        "annotator_a": a,
                        "annotator_b": b,
                        "n_overlap": len(shared),
                        "kappa": cohens_kappa(labels_a, labels_b),
                    }
                )
        if len(annotators) >= 2 and not any_overlap:
            raise HTTPException(409, "no two annotators labeled a common pair")
        consensus = []
        disputed = []
        for pid in ordered_pair_ids:
            labels = store.labels_for(pid)
            if not labels:
                continue
            if consensus_label(labels) is not None:
                consensus.append(pid)
            else:
                disputed.append(pid)
        return {
            "annotators": annotators,
            "pairwise": pairwise,
            "consensus_pairs": consensus,
            "disputed_pairs": disputed,
        }

    @app.get("/api/export")
    def export_labeled(consensus: bool = True):
        rows = []
        for pid in ordered_pair_ids:
            labels = store.labels_for(pid)
            if not labels or pid not in features:
                continue
            label = consensus_label(labels)
            if label is None:
                if consensus:
                    continue
                label = majority_label(labels)
                if label is None:  # exact tie: no defensible training label
                    continue
            base = features[pid]
            rows.append(
                FeatureRow(
                    pair_id=base.pair_id,
                    group_id=base.group_id,
                    brand_id=base.brand_id,
                    vector=base.vector,
                    label=label,
                )
            )
        return PlainTextResponse(features_csv_text(rows), media_type="text/csv")

    @app.get("/api/stats")
    def stats():
        by_status = {"unlabeled": 0, "labeled": 0, "disputed": 0}
        for pid in ordered_pair_ids:
            by_status[pair_status(store.labels_for(pid))] += 1
        per_annotator = {a: 0 for a in store.annotators()}
        for (_, annotator) in store._records:
            per_annotator[annotator] += 1
        total = len(ordered_pair_ids)
        done = by_status["labeled"] + by_status["disputed"]
        return {
            "total_pairs": total,
            "by_status": by_status,
            "per_annotator": per_annotator,
            "progress": done / total if total else 0.0,
        }

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app

"""File formats for pipeline stage artifacts.

Stages hand off through files rather than in-memory objects so any stage can
be rerun independently (annotation happens between mining and training in
real use). All writers emit canonical, deterministically ordered output:
reruns with identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .features import FEATURE_NAMES, FeatureVector
from .learn.evaluation import Dataset, EvalReport
from .mining import CandidateGroup

__all__ = [
    "FeatureRow",
    "write_groups_jsonl",
    "read_groups_jsonl",
    "write_features_csv",
    "features_csv_text",
    "read_features_csv",
    "write_labels_csv",
    "read_labels_csv",
    "write_report_json",
    "rows_to_dataset",
]

FEATURE_CSV_COLUMNS = ("pair_id", "group_id", "brand_id", *FEATURE_NAMES, "label")


@dataclass(frozen=True)
class FeatureRow:
    pair_id: str
    group_id: str
    brand_id: str
    vector: FeatureVector
    label: int | None = None


def write_groups_jsonl(groups: list[CandidateGroup], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for group in groups:
            record = {
                "group_id": group.group_id,
                "members": list(group.members),
                "common_brands": list(group.common_brands),
                "support": group.support,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_groups_jsonl(path: str) -> list[CandidateGroup]:
    groups = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            groups.append(
                CandidateGroup(
                    members=tuple(record["members"]),
                    common_brands=tuple(record["common_brands"]),
                )
            )
    return groups


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_feature_rows(rows: list[FeatureRow], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(FEATURE_CSV_COLUMNS)
    for row in rows:
        vec = row.vector
        writer.writerow(
            [
                row.pair_id,
                row.group_id,
                row.brand_id,
                *(_format_value(getattr(vec, name)) for name in FEATURE_NAMES),
                "" if row.label is None else row.label,
            ]
        )


def write_features_csv(rows: list[FeatureRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_feature_rows(rows, fh)


def features_csv_text(rows: list[FeatureRow]) -> str:
    buffer = io.StringIO()
    _write_feature_rows(rows, buffer)
    return buffer.getvalue()


def read_features_csv(path: str) -> list[FeatureRow]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(FEATURE_CSV_COLUMNS) - {"label"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for record in reader:
            values = {name: float(record[name]) for name in FEATURE_NAMES}
            values["review_count"] = int(float(record["review_count"]))
            label_raw = (record.get("label") or "").strip()
            rows.append(
                FeatureRow(
                    pair_id=record["pair_id"],
                    group_id=record["group_id"],
                    brand_id=record["brand_id"],
                    vector=FeatureVector(pair_id=record["pair_id"], **values),
                    label=int(label_raw) if label_raw else None,
                )
            )
    return rows


def write_labels_csv(labels, path: str) -> None:
    """labels: iterable of objects with pair_id / group_id / brand_id / label."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair_id", "group_id", "brand_id", "label"])
        for item in labels:
            writer.writerow([item.pair_id, item.group_id, item.brand_id, item.label])


def read_labels_csv(path: str) -> dict[str, int]:
    labels = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "pair_id" not in reader.fieldnames:
            raise ValueError(f"{path}: expected a pair_id column")
        if "label" not in reader.fieldnames:
            raise ValueError(f"{path}: expected a label column")
        for record in reader:
            label = int(record["label"])
            if label not in (0, 1):
                raise ValueError(f"{path}: label must be 0 or 1, got {label}")
            labels[record["pair_id"]] = label
    return labels


def write_report_json(reports: dict[str, EvalReport], path: str, extra: dict | None = None) -> None:
    payload = dict(extra or {})
    payload["models"] = {kind: report.as_dict() for kind, report in sorted(reports.items())}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def rows_to_dataset(rows: list[FeatureRow]) -> tuple[Dataset, int]:
    """Dataset from the labeled rows; returns (dataset, n_unlabeled_skipped)."""
    labeled = [row for row in rows if row.label is not None]
    if not labeled:
        raise ValueError("no labeled rows")
    X = np.array([row.vector.as_array() for row in labeled])
    y = np.array([row.label for row in labeled])
    pair_ids = tuple(row.pair_id for row in labeled)
    return Dataset(X=X, y=y, pair_ids=pair_ids), len(rows) - len(labeled)

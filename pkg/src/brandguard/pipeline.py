"""End-to-end pipeline: ingest -> mine -> featurize -> evaluate -> characterize.

Each stage writes its artifact to the run directory and the manifest records
a sha256 per artifact, so a rerun with identical inputs, config, and seed
produces identical checksums. Stage hand-off is file-based on purpose:
annotation happens between mining and training in real use, and any stage
can be rerun alone.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field, asdict
from importlib import metadata
from pathlib import Path

import numpy as np

from . import analysis
from .corpus import Corpus, load_corpus, save_corpus, filter_by_reviewer_history, corpus_stats
from .features import DEFAULT_BETA, DEFAULT_TAU, FEATURE_NAMES, extract_features
from .learn.evaluation import ModelSpec, cross_validate
from .mining import (
    DEFAULT_MAX_GROUP_SIZE,
    DEFAULT_MIN_SIZE,
    DEFAULT_MINSUP,
    build_transactions,
    expand_pairs,
    mine_frequent_itemsets,
    prune_to_maximal,
)
from .sentiment import load_lexicon
from .storage import (
    FeatureRow,
    read_labels_csv,
    rows_to_dataset,
    write_features_csv,
    write_groups_jsonl,
    write_report_json,
)

__all__ = ["PipelineConfig", "PipelineStageError", "run_pipeline", "write_distribution_csvs"]

log = logging.getLogger("brandguard.pipeline")

DEFAULT_MODELS = ("logistic_regression", "mlp3")


@dataclass(frozen=True)
class PipelineConfig:
    corpus: str
    lexicon: str
    out_dir: str
    labels: str | None = None
    corpus_format: str = "jsonl"
    min_history: int = 2
    minsup: int = DEFAULT_MINSUP
    min_size: int = DEFAULT_MIN_SIZE
    max_group_size: int = DEFAULT_MAX_GROUP_SIZE
    tau: float = DEFAULT_TAU
    beta: float = DEFAULT_BETA
    folds: int = 10
    seed: int = 42
    models: tuple[str, ...] = DEFAULT_MODELS

    @classmethod
    def from_json(cls, path: str) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if "models" in payload:
            payload["models"] = tuple(payload["models"])
        return cls(**payload)


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_distribution_csvs(
    summaries: list[analysis.DistributionSummary], out_dir: Path
) -> list[Path]:
    written = []
    for summary in summaries:
        classes = sorted(summary.per_class)
        hist_path = out_dir / f"feature_{summary.feature}_hist.csv"
        with open(hist_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["bin_lo", "bin_hi"] + [f"density_class{c}" for c in classes]
            )
            for i in range(len(summary.bin_edges) - 1):
                writer.writerow(
                    [repr(float(summary.bin_edges[i])), repr(float(summary.bin_edges[i + 1]))]
                    + [repr(float(summary.per_class[c].histogram[i])) for c in classes]
                )
        kde_path = out_dir / f"feature_{summary.feature}_kde.csv"
        with open(kde_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x"] + [f"density_class{c}" for c in classes])
            grid = summary.per_class[classes[0]].kde_x
            for i in range(len(grid)):
                writer.writerow(
                    [repr(float(grid[i]))]
                    + [repr(float(summary.per_class[c].kde_y[i])) for c in classes]
                )
        written.extend([hist_path, kde_path])
    return written


def _write_corpus_panels(corpus: Corpus, out_dir: Path) -> list[Path]:
    written = []
    fits = []
    for axis in ("brand", "reviewer", "product"):
        series = analysis.loglog_distribution(corpus, axis)
        path = out_dir / f"loglog_{axis}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["log_count", "log_frequency"])
            for lk, lf in zip(series.log_count, series.log_frequency):
                writer.writerow([repr(float(lk)), repr(float(lf))])
        fits.append((axis, series.slope, series.intercept))
        written.append(path)
    fits_path = out_dir / "loglog_fits.csv"
    with open(fits_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis", "slope", "intercept"])
        for axis, slope, intercept in fits:
            writer.writerow([axis, repr(slope), repr(intercept)])
    written.append(fits_path)

    hist = analysis.rating_histogram(corpus)
    ratings_path = out_dir / "rating_histogram.csv"
    with open(ratings_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["stars", "fraction"])
        for star, fraction in enumerate(hist, start=1):
            writer.writerow([star, repr(float(fraction))])
    written.append(ratings_path)
    return written


def run_pipeline(config: PipelineConfig) -> dict:
    """Run every stage, returning the manifest (also written to disk)."""
    for label, path in (("corpus", config.corpus), ("lexicon", config.lexicon), ("labels", config.labels)):
        if path is not None and not Path(path).exists():
            raise FileNotFoundError(f"{label} file not found: {path}")

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {}

    def stage(name):
        log.info("stage %s", name)

    try:
        stage("ingest")
        corpus = load_corpus(config.corpus, config.corpus_format)
        corpus = filter_by_reviewer_history(corpus, config.min_history)
        stats = corpus_stats(corpus)
        corpus_path = out_dir / "corpus.jsonl"
        save_corpus(corpus, corpus_path)
        artifacts["corpus"] = corpus_path
    except Exception as exc:
        raise PipelineStageError("ingest", exc) from exc

    try:
        stage("mine")
        transactions = build_transactions(corpus)
        itemsets = mine_frequent_itemsets(
            transactions, config.minsup, config.min_size, config.max_group_size
        )
        groups = prune_to_maximal(itemsets, transactions)
        groups_path = out_dir / "groups.jsonl"
        write_groups_jsonl(groups, groups_path)
        artifacts["groups"] = groups_path
    except Exception as exc:
        raise PipelineStageError("mine", exc) from exc

    try:
        stage("featurize")
        lexicon = load_lexicon(config.lexicon)
        labels = read_labels_csv(config.labels) if config.labels else {}
        pairs = expand_pairs(groups)
        rows = [
            FeatureRow(
                pair_id=pair.pair_id,
                group_id=pair.group_id,
                brand_id=pair.brand_id,
                vector=extract_features(corpus, lexicon, pair, config.tau, config.beta),
                label=labels.get(pair.pair_id),
            )
            for pair in pairs
        ]
        features_path = out_dir / "features.csv"
        write_features_csv(rows, features_path)
        artifacts["features"] = features_path
    except Exception as exc:
        raise PipelineStageError("featurize", exc) from exc

    labeled_rows = [row for row in rows if row.label is not None]
    reports = {}
    if labeled_rows:
        try:
            stage("evaluate")
            dataset, _ = rows_to_dataset(rows)
            for kind in config.models:
                spec = ModelSpec(kind=kind, seed=config.seed)
                reports[kind] = cross_validate(spec, dataset, k=config.folds, seed=config.seed)
            report_path = out_dir / "report.json"
            write_report_json(
                reports, report_path, extra={"folds": config.folds, "seed": config.seed}
            )
            artifacts["report"] = report_path
        except Exception as exc:
            raise PipelineStageError("evaluate", exc) from exc

    try:
        stage("characterize")
        plots_dir = out_dir / "plots"
        plots_dir.mkdir(exist_ok=True)
        written = _write_corpus_panels(corpus, plots_dir)
        if labeled_rows:
            feature_columns = {
                name: np.array([getattr(row.vector, name) for row in labeled_rows])
                for name in FEATURE_NAMES
            }
            label_vec = np.array([row.label for row in labeled_rows])
            summaries = analysis.feature_distributions(feature_columns, label_vec)
            written.extend(write_distribution_csvs(summaries, plots_dir))
        for path in written:
            artifacts[f"plots/{path.name}"] = path
    except Exception as exc:
        raise PipelineStageError("characterize", exc) from exc

    try:
        version = metadata.version("brandguard")
    except metadata.PackageNotFoundError:
        version = "unknown"
    manifest = {
        "tool_version": version,
        "config": asdict(config),
        "corpus_stats": asdict(stats),
        "n_groups": len(groups),
        "n_pairs": len(rows),
        "n_labeled_pairs": len(labeled_rows),
        "checksums": {name: _sha256(path) for name, path in sorted(artifacts.items())},
    }
    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest

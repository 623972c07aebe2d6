"""Command-line entry point.

One subcommand per pipeline stage plus the annotation service; stages
exchange artifacts through files so they can run independently and in any
order that satisfies their inputs.
"""

from __future__ import annotations

import csv
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import analysis
from .corpus import corpus_stats, filter_by_reviewer_history, load_corpus, save_corpus
from .features import DEFAULT_BETA, DEFAULT_TAU, FEATURE_NAMES, extract_features
from .learn import evaluation as learn_eval
from .learn.persistence import load_model, save_model
from .mining import (
    DEFAULT_MAX_GROUP_SIZE,
    DEFAULT_MIN_SIZE,
    DEFAULT_MINSUP,
    build_transactions,
    expand_pairs,
    mine_frequent_itemsets,
    prune_to_maximal,
    support_sweep,
)
from .pipeline import PipelineConfig, run_pipeline, write_distribution_csvs
from .sentiment import load_lexicon, score_text
from .service import LabelStore, create_app
from .storage import (
    FeatureRow,
    read_features_csv,
    read_groups_jsonl,
    read_labels_csv,
    rows_to_dataset,
    write_features_csv,
    write_groups_jsonl,
    write_labels_csv,
    write_report_json,
)
from .synth import SynthConfig, generate, write_lexicon_tsv

log = logging.getLogger("brandguard")


@click.group()
@click.option("--seed", type=int, default=42, show_default=True, help="Global random seed.")
@click.option("--threads", type=int, default=1, show_default=True, help="Worker threads for fold/model parallelism.")
@click.option("--log-level", default="warning", show_default=True,
              type=click.Choice(["debug", "info", "warning", "error"]))
@click.pass_context
def main(ctx, seed, threads, log_level):
    """Detect and characterize extremist reviewer groups targeting brands."""
    logging.basicConfig(level=getattr(logging, log_level.upper()), format="%(name)s: %(message)s")
    ctx.ensure_object(dict)
    ctx.obj["seed"] = seed
    ctx.obj["threads"] = max(1, threads)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", default="jsonl", show_default=True,
              type=click.Choice(["jsonl", "tsv"]))
@click.option("--product-file", type=click.Path(exists=True), default=None,
              help="Optional JSONL of product_id/raw_brand_name brand overrides.")
@click.option("--min-history", default=2, show_default=True,
              help="Keep reviewers with at least this many products under one brand.")
@click.option("--out", "out_path", required=True, type=click.Path())
def ingest(input_path, fmt, product_file, min_history, out_path):
    """Load, normalize, and filter a raw review file into a corpus file."""
    corpus = load_corpus(input_path, fmt, product_file)
    if corpus.dropped_brandless:
        log.warning("dropped %d reviews on brandless products", corpus.dropped_brandless)
    corpus = filter_by_reviewer_history(corpus, min_history)
    save_corpus(corpus, out_path)
    stats = corpus_stats(corpus)
    click.echo(
        f"reviews={stats.n_reviews} reviewers={stats.n_reviewers} "
        f"brands={stats.n_brands} products={stats.n_products}"
    )


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--minsup", default=DEFAULT_MINSUP, show_default=True)
@click.option("--min-size", default=DEFAULT_MIN_SIZE, show_default=True)
@click.option("--max-size", default=DEFAULT_MAX_GROUP_SIZE, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def mine(corpus_path, minsup, min_size, max_size, out_path):
    """Mine maximal candidate reviewer groups."""
    corpus = load_corpus(corpus_path)
    transactions = build_transactions(corpus)
    itemsets = mine_frequent_itemsets(transactions, minsup, min_size, max_size)
    groups = prune_to_maximal(itemsets, transactions)
    write_groups_jsonl(groups, out_path)
    click.echo(f"groups={len(groups)} pairs={sum(g.support for g in groups)}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--minsup-from", default=5, show_default=True)
@click.option("--minsup-to", default=40, show_default=True)
@click.option("--step", default=1, show_default=True)
@click.option("--min-size", default=DEFAULT_MIN_SIZE, show_default=True)
@click.option("--max-size", default=DEFAULT_MAX_GROUP_SIZE, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path())
def sweep(corpus_path, minsup_from, minsup_to, step, min_size, max_size, out_path):
    """Unique maximal group counts across a minsup range."""
    corpus = load_corpus(corpus_path)
    transactions = build_transactions(corpus)
    values = list(range(minsup_from, minsup_to + 1, step))
    table = support_sweep(transactions, values, min_size, max_size)
    lines = [f"{minsup},{count}" for minsup, count in table]
    body = "minsup,n_groups\n" + "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(body)
    else:
        click.echo(body, nl=False)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--groups", "groups_path", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True))
@click.option("--tau", default=DEFAULT_TAU, show_default=True)
@click.option("--beta", default=DEFAULT_BETA, show_default=True)
@click.option("--labels", "labels_path", default=None, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def featurize(corpus_path, groups_path, lexicon_path, tau, beta, labels_path, out_path):
    """Compute the eight features for every (group, brand) pair."""
    corpus = load_corpus(corpus_path)
    groups = read_groups_jsonl(groups_path)
    lexicon = load_lexicon(lexicon_path)
    labels = read_labels_csv(labels_path) if labels_path else {}
    rows = [
        FeatureRow(
            pair_id=pair.pair_id,
            group_id=pair.group_id,
            brand_id=pair.brand_id,
            vector=extract_features(corpus, lexicon, pair, tau, beta),
            label=labels.get(pair.pair_id),
        )
        for pair in expand_pairs(groups)
    ]
    write_features_csv(rows, out_path)
    labeled = sum(1 for row in rows if row.label is not None)
    click.echo(f"pairs={len(rows)} labeled={labeled}")


@main.command("score-text")
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True))
@click.option("--text", required=True)
def score_text_cmd(lexicon_path, text):
    """Score one text in [-1, 1] (debugging aid)."""
    click.echo(repr(score_text(load_lexicon(lexicon_path), text)))


def _load_dataset(features_path):
    rows = read_features_csv(features_path)
    dataset, skipped = rows_to_dataset(rows)
    if skipped:
        log.warning("skipped %d unlabeled rows", skipped)
    return dataset


def _resolve_seed(ctx, seed):
    return ctx.obj["seed"] if seed is None else seed


@main.command()
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--model", "kind", default="mlp3", show_default=True,
              type=click.Choice(learn_eval.MODEL_KINDS))
@click.option("--param", "params", multiple=True,
              help="Hyperparameter override as name=json_value; repeatable.")
@click.option("--seed", type=int, default=None, help="Override the global seed.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def train(ctx, features_path, kind, params, seed, out_path):
    """Train one model on all labeled rows and save it."""
    hyper = {}
    for item in params:
        name, _, raw = item.partition("=")
        if not raw:
            raise click.BadParameter(f"--param needs name=value, got {item!r}")
        hyper[name] = json.loads(raw)
    dataset = _load_dataset(features_path)
    spec = learn_eval.ModelSpec(kind=kind, hyperparameters=hyper, seed=_resolve_seed(ctx, seed))
    trained = learn_eval.train(spec, dataset)
    save_model(trained, out_path)
    click.echo(f"saved {kind} model to {out_path}")


def _run_parallel(worker, keys, threads):
    if threads <= 1 or len(keys) <= 1:
        return {key: worker(key) for key in keys}
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(worker, keys))
    return dict(zip(keys, results))


@main.command()
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--folds", default=10, show_default=True)
@click.option("--models", "model_list", default=None,
              help="Comma-separated model kinds (default: logistic_regression,mlp3).")
@click.option("--all-models", is_flag=True, help="Evaluate every implemented classifier.")
@click.option("--seed", type=int, default=None, help="Override the global seed.")
@click.option("--report", "report_path", required=True, type=click.Path())
@click.pass_context
def evaluate(ctx, features_path, folds, model_list, all_models, seed, report_path):
    """Cross-validate classifiers and write the metrics report."""
    dataset = _load_dataset(features_path)
    if all_models:
        kinds = list(learn_eval.MODEL_KINDS)
    elif model_list:
        kinds = [k.strip() for k in model_list.split(",") if k.strip()]
    else:
        kinds = ["logistic_regression", "mlp3"]
    for kind in kinds:
        if kind not in learn_eval.MODEL_KINDS:
            raise click.BadParameter(f"unknown model kind {kind!r}")
    seed = _resolve_seed(ctx, seed)

    def worker(kind):
        spec = learn_eval.ModelSpec(kind=kind, seed=seed)
        return learn_eval.cross_validate(spec, dataset, k=folds, seed=seed)

    reports = _run_parallel(worker, kinds, ctx.obj["threads"])
    write_report_json(reports, report_path, extra={"folds": folds, "seed": seed})
    for kind in kinds:
        mean = reports[kind].mean
        click.echo(f"{kind}: micro_f1={mean.micro_f1:.3f} macro_f1={mean.macro_f1:.3f}")


@main.command()
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--model", "kind", default="mlp3", show_default=True,
              type=click.Choice(learn_eval.MODEL_KINDS))
@click.option("--folds", default=10, show_default=True)
@click.option("--seed", type=int, default=None, help="Override the global seed.")
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_context
def ablate(ctx, features_path, kind, folds, seed, out_path):
    """Cross-validated metrics after dropping each feature in isolation."""
    dataset = _load_dataset(features_path)
    seed = _resolve_seed(ctx, seed)
    spec = learn_eval.ModelSpec(kind=kind, seed=seed)

    def worker(name):
        report = learn_eval.cross_validate(spec, dataset.drop_feature(name), k=folds, seed=seed)
        return report.mean

    results = _run_parallel(worker, list(dataset.feature_names), ctx.obj["threads"])
    lines = ["feature,micro_f1,macro_f1,micro_roc_auc,macro_roc_auc"]
    for name in dataset.feature_names:
        mean = results[name]
        lines.append(
            f"{name},{mean.micro_f1!r},{mean.macro_f1!r},"
            f"{mean.micro_roc_auc!r},{mean.macro_roc_auc!r}"
        )
    body = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(body)
    else:
        click.echo(body, nl=False)


@main.command()
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--model", "kind", default="rf", show_default=True,
              help="Only the random forest ('rf' or 'random_forest') carries weights.")
@click.option("--seed", type=int, default=None, help="Override the global seed.")
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_context
def importance(ctx, features_path, kind, seed, out_path):
    """Random-forest impurity-decrease feature weights."""
    if kind not in ("rf", "random_forest"):
        raise click.BadParameter("importance weights are defined for random_forest only")
    dataset = _load_dataset(features_path)
    spec = learn_eval.ModelSpec(kind="random_forest", seed=_resolve_seed(ctx, seed))
    trained = learn_eval.train(spec, dataset)
    weights = learn_eval.rf_feature_importance(trained)
    lines = ["feature,weight"]
    for name, weight in sorted(weights.items(), key=lambda kv: -kv[1]):
        lines.append(f"{name},{weight!r}")
    body = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(body)
    else:
        click.echo(body, nl=False)


@main.command()
@click.option("--features", "features_path", default=None, type=click.Path(exists=True),
              help="Features CSV for the per-feature class comparisons.")
@click.option("--labels", "use_labels", is_flag=True,
              help="Use the label column in the features file (required for the class panels).")
@click.option("--corpus", "corpus_path", default=None, type=click.Path(exists=True),
              help="Corpus file for the log-log and rating panels.")
@click.option("--out-dir", "out_dir", required=True, type=click.Path())
def characterize(features_path, use_labels, corpus_path, out_dir):
    """Emit one CSV per characterization panel (no plotting)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    wrote = 0
    if corpus_path:
        from .pipeline import _write_corpus_panels

        corpus = load_corpus(corpus_path)
        wrote += len(_write_corpus_panels(corpus, out))
    if features_path:
        if not use_labels:
            raise click.ClickException(
                "the per-feature panels compare classes; pass --labels to use "
                "the label column"
            )
        rows = [row for row in read_features_csv(features_path) if row.label is not None]
        if not rows:
            raise click.ClickException("features file has no labeled rows")
        columns = {
            name: np.array([getattr(row.vector, name) for row in rows])
            for name in FEATURE_NAMES
        }
        labels = np.array([row.label for row in rows])
        summaries = analysis.feature_distributions(columns, labels)
        wrote += len(write_distribution_csvs(summaries, out))
    if not wrote:
        raise click.ClickException("nothing to do: pass --corpus and/or --features")
    click.echo(f"wrote {wrote} panel CSVs to {out_dir}")


def _read_label_column(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames and "pair_id" in reader.fieldnames and "label" in reader.fieldnames:
            return {row["pair_id"]: int(row["label"]) for row in reader}
    with open(path, encoding="utf-8") as fh:
        return [int(line.strip()) for line in fh if line.strip()]


@main.command()
@click.option("--a", "path_a", required=True, type=click.Path(exists=True))
@click.option("--b", "path_b", required=True, type=click.Path(exists=True))
def kappa(path_a, path_b):
    """Cohen's kappa between two annotators' label files."""
    labels_a = _read_label_column(path_a)
    labels_b = _read_label_column(path_b)
    if isinstance(labels_a, dict) and isinstance(labels_b, dict):
        shared = sorted(set(labels_a) & set(labels_b))
        if not shared:
            raise click.ClickException("no overlapping pair_ids")
        vec_a = [labels_a[p] for p in shared]
        vec_b = [labels_b[p] for p in shared]
    else:
        vec_a, vec_b = list(labels_a), list(labels_b)
    click.echo(repr(analysis.cohens_kappa(vec_a, vec_b)))


def _read_scores(path):
    scores = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip().split(",")[-1]
            if not line:
                continue
            try:
                scores.append(float(line))
            except ValueError:
                continue  # header line
    return scores


@main.command()
@click.option("--group-scores", "group_path", required=True, type=click.Path(exists=True))
@click.option("--brand-scores", "brand_path", required=True, type=click.Path(exists=True))
def divergence(group_path, brand_path):
    """Rank-truncated KL divergence between two score lists."""
    click.echo(repr(analysis.kl_divergence_ranked(_read_scores(group_path), _read_scores(brand_path))))


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True),
              help="JSON file of SynthConfig overrides.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--labels", "labels_path", required=True, type=click.Path())
@click.option("--lexicon-out", "lexicon_path", default=None, type=click.Path(),
              help="Also write the generator-aligned sentiment lexicon TSV.")
@click.pass_context
def synth(ctx, config_path, out_path, labels_path, lexicon_path):
    """Generate a synthetic labeled corpus with planted groups."""
    if config_path:
        config = SynthConfig.from_json(config_path)
    else:
        config = SynthConfig(seed=ctx.obj["seed"])
    corpus, labels = generate(config)
    save_corpus(corpus, out_path)
    write_labels_csv(labels, labels_path)
    if lexicon_path:
        write_lexicon_tsv(lexicon_path)
    stats = corpus_stats(corpus)
    click.echo(
        f"reviews={stats.n_reviews} brands={stats.n_brands} planted_pairs={len(labels)}"
    )


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def run(config_path):
    """Run the full pipeline from a JSON config."""
    manifest = run_pipeline(PipelineConfig.from_json(config_path))
    click.echo(json.dumps(manifest["checksums"], indent=2, sort_keys=True))


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--groups", "groups_path", required=True, type=click.Path(exists=True))
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(),
              help="Append-only label log (created if missing).")
@click.option("--static-dir", default=None, type=click.Path(exists=True),
              help="Optional built UI assets to serve at /.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
def serve(corpus_path, groups_path, features_path, labels_path, static_dir, host, port):
    """Serve the annotation API (and optionally the UI)."""
    import uvicorn

    corpus = load_corpus(corpus_path)
    groups = read_groups_jsonl(groups_path)
    features = {row.pair_id: row for row in read_features_csv(features_path)}
    store = LabelStore(labels_path)
    app = create_app(corpus, groups, features, store, static_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main(sys.argv[1:])

"""Acceptance suite: one test per exit criterion, each at its stated
tolerance. A conftest hook prints one ACCEPTANCE <name>: PASS/FAIL line per
criterion."""

import time
from itertools import combinations

import numpy as np
import pytest
from fastapi.testclient import TestClient

from brandguard.analysis import (
    cohens_kappa,
    feature_distributions,
    kl_divergence_ranked,
    loglog_distribution,
)
from brandguard.corpus import save_corpus
from brandguard.features import FEATURE_NAMES, extract_features
from brandguard.learn import (
    Dataset,
    ModelSpec,
    ablation_importance,
    cross_validate,
    rf_feature_importance,
    train,
)
from brandguard.learn.metrics import compute_metrics, per_class_counts, roc_auc
from brandguard.learn.mlp import init_glorot, mlp_loss_and_gradients
from brandguard.mining import (
    Transaction,
    build_transactions,
    expand_pairs,
    mine_frequent_itemsets,
    prune_to_maximal,
)
from brandguard.pipeline import PipelineConfig, run_pipeline
from brandguard.service import LabelStore, create_app
from brandguard.storage import FeatureRow, write_labels_csv
from brandguard.synth import GroupBehavior, SynthConfig, default_lexicon, generate, write_lexicon_tsv

from conftest import make_corpus, make_review, small_synth_config


# --- criterion: FIM oracle equivalence -------------------------------------

def brute_force_itemsets(transactions, minsup, min_size=2, max_size=16):
    items = sorted({item for t in transactions for item in t.items})
    tx_sets = [frozenset(t.items) for t in transactions]
    found = {}
    for size in range(min_size, min(len(items), max_size) + 1):
        for combo in combinations(items, size):
            subset = frozenset(combo)
            support = sum(1 for tx in tx_sets if subset <= tx)
            if support >= minsup:
                found[combo] = support
    return found


def random_corpora(n, seed=1234):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        n_reviewers = int(rng.integers(2, 13))
        n_brands = int(rng.integers(1, 31))
        density = rng.uniform(0.15, 0.7)
        reviewers = [f"u{i:02d}" for i in range(n_reviewers)]
        transactions = []
        for b in range(n_brands):
            members = [r for r in reviewers if rng.random() < density]
            if members:
                transactions.append(
                    Transaction(brand_id=f"b{b:02d}", items=tuple(sorted(members)))
                )
        if not transactions:
            continue
        minsup = int(rng.integers(1, max(2, len(transactions) // 2) + 1))
        yield transactions, minsup


@pytest.fixture(scope="module")
def mined_corpora():
    results = []
    t0 = time.monotonic()
    for transactions, minsup in random_corpora(200):
        mined = mine_frequent_itemsets(transactions, minsup=minsup, min_size=2)
        results.append((transactions, minsup, mined))
    return results, time.monotonic() - t0


def test_fim_oracle_equivalence(mined_corpora):
    results, elapsed = mined_corpora
    t0 = time.monotonic()
    assert len(results) >= 190
    for transactions, minsup, mined in results:
        assert dict(mined) == brute_force_itemsets(transactions, minsup)
    total = elapsed + (time.monotonic() - t0)
    assert total < 30.0, f"oracle equivalence took {total:.1f}s"


def test_maximality_on_random_corpora(mined_corpora):
    results, _ = mined_corpora
    for transactions, _, mined in results:
        groups = prune_to_maximal(mined, transactions)
        member_sets = [frozenset(g.members) for g in groups]
        for a, b in combinations(member_sets, 2):
            assert not (a < b or b < a)


# --- criterion: feature fixtures at 1e-9 ------------------------------------

def test_feature_fixtures(ten_review_corpus, toy_lexicon):
    from brandguard.mining import GroupBrandPair

    tau = beta = 102 / 365  # 51-day fixture spans sit at exactly half-window
    corpus = ten_review_corpus

    pair = GroupBrandPair(pair_id="a", group_id="a", brand_id="acme", members=("g1", "g2"))
    vec = extract_features(corpus, toy_lexicon, pair, tau=tau, beta=beta)
    assert vec.avg_rating == pytest.approx(4.75, abs=1e-9)
    assert vec.avg_upvotes == pytest.approx(2.0, abs=1e-9)
    assert vec.avg_sentiment == pytest.approx(0.425, abs=1e-9)
    assert vec.group_time_window == pytest.approx(0.5, abs=1e-9)  # span = tau/2
    assert vec.review_count == 4
    assert vec.rating_deviation == pytest.approx(0.9375, abs=1e-9)
    expected_et = ((1 - 100 / 102) + (1 - 71 / 102)) / 2
    assert vec.early_time_window == pytest.approx(expected_et, abs=1e-9)
    assert vec.verified_fraction == pytest.approx(0.75, abs=1e-9)

    solo_g1 = GroupBrandPair(pair_id="b", group_id="b", brand_id="zenith", members=("g1",))
    vec1 = extract_features(corpus, toy_lexicon, solo_g1, tau=tau, beta=beta)
    assert vec1.rating_deviation == pytest.approx(1.0, abs=1e-9)  # max-split ratings
    assert vec1.group_time_window == pytest.approx(1.0, abs=1e-9)
    assert vec1.early_time_window == pytest.approx(1.0, abs=1e-9)  # first reviewer

    solo_g2 = GroupBrandPair(pair_id="c", group_id="c", brand_id="zenith", members=("g2",))
    vec2 = extract_features(corpus, toy_lexicon, solo_g2, tau=tau, beta=beta)
    assert vec2.early_time_window == pytest.approx(0.0, abs=1e-9)  # 300d gap clamps
    assert vec2.avg_sentiment == pytest.approx(-0.6, abs=1e-9)
    assert vec2.rating_deviation == pytest.approx(1 / 3, abs=1e-9)


# --- criterion: metric oracles ----------------------------------------------

def pair_counting_auc(y_true, y_score):
    pos = [s for yt, s in zip(y_true, y_score) if yt == 1]
    neg = [s for yt, s in zip(y_true, y_score) if yt == 0]
    total = 0.0
    for p in pos:
        for n in neg:
            total += 1.0 if p > n else (0.5 if p == n else 0.0)
    return total / (len(pos) * len(neg))


def test_metric_oracles():
    rng = np.random.default_rng(77)
    for _ in range(100):
        n = int(rng.integers(4, 201))
        y_true = rng.integers(0, 2, n)
        y_true[:2] = [0, 1]
        y_pred = rng.integers(0, 2, n)
        y_score = np.round(rng.random(n), 2)  # coarse grid -> ties exercised
        metrics = compute_metrics(y_true, y_pred, y_score)

        counts = per_class_counts(y_true, y_pred)
        for cls in (0, 1):
            tp = int(np.sum((y_true == cls) & (y_pred == cls)))
            fp = int(np.sum((y_true != cls) & (y_pred == cls)))
            fn = int(np.sum((y_true == cls) & (y_pred != cls)))
            assert counts[cls] == {"tp": tp, "fp": fp, "fn": fn}
        accuracy = float(np.mean(y_true == y_pred))
        assert metrics.micro_f1 == pytest.approx(accuracy, abs=1e-12)
        assert roc_auc(y_true, y_score) == pytest.approx(
            pair_counting_auc(y_true, y_score), abs=1e-9
        )


# --- criterion: MLP gradient check -------------------------------------------

def test_mlp_gradient_check():
    rng = np.random.default_rng(99)
    for _ in range(20):
        sizes = [
            int(rng.integers(2, 6)),
            int(rng.integers(2, 7)),
            int(rng.integers(2, 6)),
            1,
        ]
        weights, biases = init_glorot(sizes, rng)
        X = rng.normal(size=(int(rng.integers(3, 9)), sizes[0]))
        y = rng.integers(0, 2, len(X)).astype(float)
        _, grad_w, grad_b = mlp_loss_and_gradients(weights, biases, X, y)

        h = 1e-6
        for params, grads in ((weights, grad_w), (biases, grad_b)):
            for layer, param in enumerate(params):
                flat = param.ravel()
                fd = np.zeros_like(flat)
                for i in range(flat.size):
                    orig = flat[i]
                    flat[i] = orig + h
                    up, _, _ = mlp_loss_and_gradients(weights, biases, X, y)
                    flat[i] = orig - h
                    down, _, _ = mlp_loss_and_gradients(weights, biases, X, y)
                    flat[i] = orig
                    fd[i] = (up - down) / (2 * h)
                analytic = grads[layer].ravel()
                relative = np.linalg.norm(analytic - fd) / (
                    np.linalg.norm(analytic) + np.linalg.norm(fd) + 1e-12
                )
                assert relative < 1e-4


# --- criterion: end-to-end synthetic reproduction ----------------------------

def test_end_to_end_synthetic(synth_bundle):
    t0 = time.monotonic()
    dataset = synth_bundle.dataset
    assert len(dataset.y) == 900
    assert int(dataset.y.sum()) == 450  # balanced

    mlp_report = cross_validate(ModelSpec(kind="mlp3", seed=42), dataset, k=10, seed=42)
    lr_report = cross_validate(
        ModelSpec(kind="logistic_regression", seed=42), dataset, k=10, seed=42
    )
    elapsed = synth_bundle.build_seconds + (time.monotonic() - t0)

    assert mlp_report.mean.macro_f1 >= 0.90, f"mlp3 macro-F1 {mlp_report.mean.macro_f1:.3f}"
    assert lr_report.mean.macro_f1 >= 0.80, f"LR macro-F1 {lr_report.mean.macro_f1:.3f}"
    assert elapsed < 300.0, f"end-to-end took {elapsed:.0f}s"


# --- criterion: feature importance shape --------------------------------------

@pytest.fixture(scope="module")
def count_dominant_dataset():
    """Synthetic data where review count is the one strong signal: the other
    behavior knobs overlap heavily between classes."""
    config = SynthConfig(
        seed=42,
        n_reviewers=200,
        n_brands=400,
        n_extremist_groups=15,
        n_moderate_groups=15,
        brands_per_group=(10, 10),
        extremist=GroupBehavior(
            rating_mean=4.5, rating_std=0.8, window_days=60, verified_prob=0.75,
            positive_token_rate=0.35, negative_token_rate=0.12,
            reviews_per_member_brand=3,
        ),
        moderate=GroupBehavior(
            rating_mean=4.2, rating_std=0.9, window_days=90, verified_prob=0.65,
            positive_token_rate=0.3, negative_token_rate=0.15,
            reviews_per_member_brand=1,
        ),
        n_background_reviewers=200,
        background_reviews_per_reviewer=6,
    )
    corpus, labels = generate(config)
    transactions = build_transactions(corpus)
    groups = prune_to_maximal(mine_frequent_itemsets(transactions, minsup=10), transactions)
    pairs = expand_pairs(groups)
    lexicon = default_lexicon()
    label_map = {item.pair_id: item.label for item in labels}
    X = np.array(
        [extract_features(corpus, lexicon, pair).as_array() for pair in pairs]
    )
    y = np.array([label_map[pair.pair_id] for pair in pairs])
    return Dataset(X=X, y=y, pair_ids=tuple(p.pair_id for p in pairs))


def test_feature_importance_shape(count_dominant_dataset):
    trained = train(ModelSpec(kind="random_forest", seed=42), count_dominant_dataset)
    weights = rf_feature_importance(trained)
    assert sum(weights.values()) == pytest.approx(1.0, abs=1e-9)
    ranked = sorted(weights, key=weights.get, reverse=True)
    assert ranked[0] == "review_count", f"RF ranked {ranked[0]} first"

    rows = ablation_importance(
        ModelSpec(kind="logistic_regression", seed=42), count_dominant_dataset, k=5, seed=42
    )
    drops = {name: mean.micro_f1 for name, mean in rows}
    worst = min(drops, key=drops.get)
    assert worst == "review_count", f"largest ablation drop was {worst}"
    others = [v for name, v in drops.items() if name != "review_count"]
    assert drops["review_count"] < min(others)


# --- criterion: characterization shape ----------------------------------------

def test_characterization_shape(synth_bundle):
    rows = synth_bundle.rows
    columns = {
        name: np.array([getattr(row.vector, name) for row in rows])
        for name in FEATURE_NAMES
    }
    labels = np.array([row.label for row in rows])
    summaries = {
        s.feature: s for s in feature_distributions(columns, labels)
    }

    def mass_above(summary, threshold, cls):
        edges = summary.bin_edges
        widths = np.diff(edges)
        hist = summary.per_class[cls].histogram
        overlap = np.clip(edges[1:] - np.maximum(edges[:-1], threshold), 0.0, widths)
        return float((hist * overlap).sum())

    rating = summaries["avg_rating"]
    assert mass_above(rating, 4.5, 1) > mass_above(rating, 4.5, 0)

    verified = summaries["verified_fraction"]
    assert mass_above(verified, 0.8, 1) > mass_above(verified, 0.8, 0)

    counts = columns["review_count"]
    assert counts[labels == 1].mean() > counts[labels == 0].mean()


# --- criterion: analysis formulas ----------------------------------------------

def test_analysis_formulas():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(1, 40))
        x = rng.random(n) + 1e-3
        assert kl_divergence_ranked(x, x) == pytest.approx(0.0, abs=1e-9)
        m = int(rng.integers(1, 40))
        other = rng.random(m) + 1e-3
        assert kl_divergence_ranked(x, other) >= -1e-12

    assert cohens_kappa([1, 0, 1], [1, 0, 1]) == 1.0
    assert cohens_kappa([1, 1, 0, 0], [1, 0, 1, 0]) == pytest.approx(0.0, abs=1e-12)
    assert cohens_kappa([1, 1, 0, 0], [0, 0, 1, 1]) == pytest.approx(-1.0, abs=1e-12)

    ks = np.arange(1, 81)
    weights = ks.astype(float) ** -2.0
    weights /= weights.sum()
    counts = rng.choice(ks, size=20000, p=weights)
    reviews, brands = [], {}
    rid = 0
    for i, k in enumerate(counts):
        for j in range(k):
            pid = f"p{rid}"
            brands[pid] = "b0"
            reviews.append(make_review(f"r{rid}", f"u{i}", pid, 5, j))
            rid += 1
    series = loglog_distribution(make_corpus(reviews, brands), "reviewer")
    assert series.slope == pytest.approx(-2.0, abs=0.3)


# --- criterion: pipeline determinism --------------------------------------------

def test_pipeline_determinism(tmp_path):
    config = small_synth_config()
    corpus, labels = generate(config)
    corpus_path = tmp_path / "corpus.jsonl"
    labels_path = tmp_path / "labels.csv"
    lexicon_path = tmp_path / "lexicon.tsv"
    save_corpus(corpus, str(corpus_path))
    write_labels_csv(labels, str(labels_path))
    write_lexicon_tsv(str(lexicon_path))

    def run(out_dir):
        return run_pipeline(
            PipelineConfig(
                corpus=str(corpus_path),
                lexicon=str(lexicon_path),
                labels=str(labels_path),
                out_dir=str(out_dir),
                minsup=config.brands_per_group[0],
                folds=4,
                seed=42,
                models=("logistic_regression",),
            )
        )

    first = run(tmp_path / "runA")
    second = run(tmp_path / "runB")
    assert first["checksums"] == second["checksums"]


# --- criterion: service contract -------------------------------------------------

def test_service_contract(tmp_path):
    config = small_synth_config()
    corpus, _ = generate(config)
    transactions = build_transactions(corpus)
    groups = prune_to_maximal(
        mine_frequent_itemsets(transactions, minsup=config.brands_per_group[0]),
        transactions,
    )
    pairs = expand_pairs(groups)
    lexicon = default_lexicon()
    features = {
        pair.pair_id: FeatureRow(
            pair_id=pair.pair_id,
            group_id=pair.group_id,
            brand_id=pair.brand_id,
            vector=extract_features(corpus, lexicon, pair),
        )
        for pair in pairs
    }
    store = LabelStore(str(tmp_path / "labels.log"))
    client = TestClient(create_app(corpus, groups, features, store))

    pair_ids = sorted(features)
    unanimous = {pid: i % 2 for i, pid in enumerate(pair_ids[:10])}
    disputed = pair_ids[10:13]
    for pid, label in unanimous.items():
        for annotator in ("a", "b", "c"):
            response = client.post(
                f"/api/pairs/{pid}/label",
                json={"annotator_id": annotator, "label": label},
            )
            assert response.status_code == 200
    for pid in disputed:
        client.post(f"/api/pairs/{pid}/label", json={"annotator_id": "a", "label": 1})
        client.post(f"/api/pairs/{pid}/label", json={"annotator_id": "b", "label": 0})

    import csv as csv_mod
    import io

    def export(consensus):
        text = client.get("/api/export", params={"consensus": consensus}).text
        return {
            row["pair_id"]: row["label"]
            for row in csv_mod.DictReader(io.StringIO(text))
        }

    consensus_rows = export("true")
    assert consensus_rows == {pid: str(label) for pid, label in unanimous.items()}
    for pid in disputed:
        assert pid not in consensus_rows

    agreement = client.get("/api/agreement").json()
    assert sorted(agreement["disputed_pairs"]) == sorted(disputed)
    assert sorted(agreement["consensus_pairs"]) == sorted(unanimous)

    # restart preserves every label
    reloaded = LabelStore(str(tmp_path / "labels.log"))
    for pid, label in unanimous.items():
        assert reloaded.labels_for(pid) == {"a": label, "b": label, "c": label}

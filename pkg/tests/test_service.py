import csv
import io

import pytest
from fastapi.testclient import TestClient

from brandguard.features import FEATURE_NAMES, extract_features
from brandguard.mining import (
    build_transactions,
    expand_pairs,
    mine_frequent_itemsets,
    prune_to_maximal,
)
from brandguard.service import LabelStore, create_app
from brandguard.storage import FeatureRow
from brandguard.synth import default_lexicon, generate

from conftest import small_synth_config


@pytest.fixture
def bundle(tmp_path):
    config = small_synth_config()
    corpus, labels = generate(config)
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
    app = create_app(corpus, groups, features, store)
    client = TestClient(app)
    return type(
        "Bundle",
        (),
        dict(
            corpus=corpus,
            groups=groups,
            pairs=pairs,
            features=features,
            store=store,
            client=client,
            store_path=str(tmp_path / "labels.log"),
        ),
    )


def test_all_pairs_unlabeled_initially(bundle):
    response = bundle.client.get("/api/pairs", params={"status": "unlabeled", "page_size": 500})
    payload = response.json()
    assert response.status_code == 200
    assert payload["total"] == len(bundle.pairs)
    assert all(p["status"] == "unlabeled" for p in payload["pairs"])


def test_pagination_covers_all_pairs_exactly_once(bundle):
    seen = []
    page = 1
    while True:
        payload = bundle.client.get(
            "/api/pairs", params={"page": page, "page_size": 7}
        ).json()
        seen.extend(p["pair_id"] for p in payload["pairs"])
        if page >= payload["total_pages"]:
            break
        page += 1
    assert len(seen) == len(set(seen)) == len(bundle.pairs)


def test_bad_filter_rejected(bundle):
    assert bundle.client.get("/api/pairs", params={"status": "weird"}).status_code == 400


def test_evidence_unknown_pair_404(bundle):
    assert bundle.client.get("/api/pairs/nope/evidence").status_code == 404


def test_evidence_grid_matches_in_scope_reviews(bundle):
    pair = bundle.pairs[0]
    payload = bundle.client.get(f"/api/pairs/{pair.pair_id}/evidence").json()
    assert payload["members"] == list(pair.members)
    grid_review_ids = {
        review["review_id"]
        for row in payload["grid"]
        for cell in row["cells"]
        for review in cell["reviews"]
    }
    member_set = set(pair.members)
    expected = {
        r.review_id
        for r in bundle.corpus.by_brand[pair.brand_id]
        if r.reviewer_id in member_set
    }
    assert grid_review_ids == expected
    assert len(payload["grid"]) == len(pair.members)


def test_evidence_features_match_module_output(bundle):
    pair = bundle.pairs[3]
    payload = bundle.client.get(f"/api/pairs/{pair.pair_id}/evidence").json()
    expected = bundle.features[pair.pair_id].vector
    for name in FEATURE_NAMES:
        assert payload["features"][name] == pytest.approx(getattr(expected, name))


def test_evidence_checklist_present(bundle):
    pair = bundle.pairs[0]
    payload = bundle.client.get(f"/api/pairs/{pair.pair_id}/evidence").json()
    criteria = [item["criterion"] for item in payload["checklist"]]
    assert "Similarity in reviews among group members" in criteria
    assert any(item.get("informational_only") for item in payload["checklist"])


def test_submit_then_read_round_trip(bundle):
    pair_id = bundle.pairs[0].pair_id
    response = bundle.client.post(
        f"/api/pairs/{pair_id}/label", json={"annotator_id": "ann1", "label": 1}
    )
    assert response.status_code == 200
    payload = bundle.client.get(f"/api/pairs/{pair_id}/evidence").json()
    assert payload["labels"] == {"ann1": 1}


def test_resubmission_overwrites(bundle):
    pair_id = bundle.pairs[0].pair_id
    bundle.client.post(f"/api/pairs/{pair_id}/label", json={"annotator_id": "a", "label": 0})
    bundle.client.post(f"/api/pairs/{pair_id}/label", json={"annotator_id": "a", "label": 1})
    assert bundle.store.labels_for(pair_id) == {"a": 1}


def test_invalid_label_rejected(bundle):
    pair_id = bundle.pairs[0].pair_id
    response = bundle.client.post(
        f"/api/pairs/{pair_id}/label", json={"annotator_id": "a", "label": 2}
    )
    assert response.status_code == 400
    response = bundle.client.post(
        f"/api/pairs/{pair_id}/label", json={"annotator_id": "", "label": 1}
    )
    assert response.status_code == 400


def test_unknown_pair_label_404(bundle):
    assert (
        bundle.client.post("/api/pairs/ghost/label", json={"annotator_id": "a", "label": 1}).status_code
        == 404
    )


def test_disputed_filter_shows_disagreements(bundle):
    disputed_id = bundle.pairs[0].pair_id
    agreed_id = bundle.pairs[1].pair_id
    for annotator, label in (("a", 1), ("b", 0)):
        bundle.client.post(f"/api/pairs/{disputed_id}/label", json={"annotator_id": annotator, "label": label})
    for annotator in ("a", "b"):
        bundle.client.post(f"/api/pairs/{agreed_id}/label", json={"annotator_id": annotator, "label": 1})
    payload = bundle.client.get("/api/pairs", params={"status": "disputed", "page_size": 500}).json()
    assert [p["pair_id"] for p in payload["pairs"]] == [disputed_id]


def test_agreement_identical_labelings(bundle):
    ids = [p.pair_id for p in bundle.pairs[:6]]
    for pid in ids:
        for annotator in ("a", "b"):
            bundle.client.post(f"/api/pairs/{pid}/label", json={"annotator_id": annotator, "label": int(pid[-1] in "02468")})
    payload = bundle.client.get("/api/agreement").json()
    assert payload["pairwise"][0]["kappa"] == pytest.approx(1.0)
    assert sorted(payload["consensus_pairs"]) == sorted(ids)
    assert payload["disputed_pairs"] == []


def test_agreement_disagreement_excluded_from_consensus(bundle):
    good, bad = bundle.pairs[0].pair_id, bundle.pairs[1].pair_id
    for annotator in ("a", "b"):
        bundle.client.post(f"/api/pairs/{good}/label", json={"annotator_id": annotator, "label": 1})
    bundle.client.post(f"/api/pairs/{bad}/label", json={"annotator_id": "a", "label": 1})
    bundle.client.post(f"/api/pairs/{bad}/label", json={"annotator_id": "b", "label": 0})
    payload = bundle.client.get("/api/agreement").json()
    assert good in payload["consensus_pairs"]
    assert bad in payload["disputed_pairs"]
    assert bad not in payload["consensus_pairs"]


def test_agreement_no_overlap_errors(bundle):
    bundle.client.post(f"/api/pairs/{bundle.pairs[0].pair_id}/label", json={"annotator_id": "a", "label": 1})
    bundle.client.post(f"/api/pairs/{bundle.pairs[1].pair_id}/label", json={"annotator_id": "b", "label": 1})
    assert bundle.client.get("/api/agreement").status_code == 409


def parse_export(text):
    reader = csv.DictReader(io.StringIO(text))
    return {row["pair_id"]: row for row in reader}


def test_export_consensus_excludes_disputed(bundle):
    unanimous = [p.pair_id for p in bundle.pairs[:3]]
    disputed = bundle.pairs[3].pair_id
    for pid in unanimous:
        for annotator in ("a", "b"):
            bundle.client.post(f"/api/pairs/{pid}/label", json={"annotator_id": annotator, "label": 1})
    bundle.client.post(f"/api/pairs/{disputed}/label", json={"annotator_id": "a", "label": 1})
    bundle.client.post(f"/api/pairs/{disputed}/label", json={"annotator_id": "b", "label": 0})

    consensus_rows = parse_export(bundle.client.get("/api/export", params={"consensus": "true"}).text)
    assert sorted(consensus_rows) == sorted(unanimous)
    assert all(row["label"] == "1" for row in consensus_rows.values())
    assert disputed not in consensus_rows


def test_export_majority_when_not_consensus_only(bundle):
    pid = bundle.pairs[0].pair_id
    for annotator, label in (("a", 1), ("b", 1), ("c", 0)):
        bundle.client.post(f"/api/pairs/{pid}/label", json={"annotator_id": annotator, "label": label})
    tie = bundle.pairs[1].pair_id
    for annotator, label in (("a", 1), ("b", 0)):
        bundle.client.post(f"/api/pairs/{tie}/label", json={"annotator_id": annotator, "label": label})
    rows = parse_export(bundle.client.get("/api/export", params={"consensus": "false"}).text)
    assert rows[pid]["label"] == "1"
    assert tie not in rows  # exact ties carry no defensible label


def test_export_empty_labels_header_only(bundle):
    text = bundle.client.get("/api/export").text
    lines = [line for line in text.splitlines() if line]
    assert len(lines) == 1
    assert lines[0].startswith("pair_id,")


def test_restart_preserves_labels(bundle):
    pid = bundle.pairs[0].pair_id
    bundle.client.post(f"/api/pairs/{pid}/label", json={"annotator_id": "a", "label": 1})
    reloaded = LabelStore(bundle.store_path)
    assert reloaded.labels_for(pid) == {"a": 1}


def test_stats_counts(bundle):
    pid = bundle.pairs[0].pair_id
    bundle.client.post(f"/api/pairs/{pid}/label", json={"annotator_id": "a", "label": 1})
    payload = bundle.client.get("/api/stats").json()
    assert payload["total_pairs"] == len(bundle.pairs)
    assert payload["by_status"]["labeled"] == 1
    assert payload["per_annotator"] == {"a": 1}
    assert 0 < payload["progress"] < 1

"""Candidate reviewer-group mining over per-brand transactions.

One transaction per brand, items = reviewers of that brand. Frequent reviewer
itemsets are mined by depth-first vertical tidset intersection, pruned to
maximal sets, and expanded into (group, brand) candidate pairs. Enumeration
is capped at ``max_group_size`` members, so results are maximal among
itemsets of size <= max_group_size. All outputs are sorted lexicographically
by member list, making runs tie-free and deterministic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .corpus import Corpus

__all__ = [
    "Transaction",
    "CandidateGroup",
    "GroupBrandPair",
    "build_transactions",
    "mine_frequent_itemsets",
    "prune_to_maximal",
    "expand_pairs",
    "support_sweep",
    "group_id_for",
    "DEFAULT_MINSUP",
    "DEFAULT_MIN_SIZE",
    "DEFAULT_MAX_GROUP_SIZE",
]

DEFAULT_MINSUP = 15
DEFAULT_MIN_SIZE = 2
DEFAULT_MAX_GROUP_SIZE = 16


@dataclass(frozen=True)
class Transaction:
    brand_id: str
    items: tuple[str, ...]  # sorted, deduplicated reviewer ids

    def __post_init__(self):
        if not self.items:
            raise ValueError(f"transaction for brand {self.brand_id} has no items")


def group_id_for(members) -> str:
    """Stable, order-independent id for a member set."""
    joined = "\x1f".join(sorted(members))
    return hashlib.sha1(joined.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class CandidateGroup:
    members: tuple[str, ...]  # sorted, size >= 2
    common_brands: tuple[str, ...]  # sorted
    group_id: str = field(default="")

    def __post_init__(self):
        if not self.group_id:
            object.__setattr__(self, "group_id", group_id_for(self.members))

    @property
    def support(self) -> int:
        return len(self.common_brands)


@dataclass(frozen=True)
class GroupBrandPair:
    pair_id: str
    group_id: str
    brand_id: str
    members: tuple[str, ...]
    label: int | None = None  # 0 moderate, 1 extremist, None unlabeled


def build_transactions(corpus: Corpus) -> list[Transaction]:
    """One transaction per brand with at least one review."""
    return [
        Transaction(brand_id=brand, items=tuple(sorted(corpus.brand_reviewers[brand])))
        for brand in corpus.brands
    ]


def mine_frequent_itemsets(
    transactions: list[Transaction],
    minsup: int = DEFAULT_MINSUP,
    min_size: int = DEFAULT_MIN_SIZE,
    max_group_size: int = DEFAULT_MAX_GROUP_SIZE,
) -> list[tuple[tuple[str, ...], int]]:
    """All reviewer itemsets of size in [min_size, max_group_size] appearing
    together in at least ``minsup`` transactions, with exact support counts.

    Depth-first search over lexicographically ordered reviewers; each prefix
    carries its tidset and only intersects with later items, so every
    frequent itemset is produced exactly once.
    """
    if minsup < 1:
        raise ValueError("minsup must be >= 1")
    if min_size < 2:
        raise ValueError("min_size must be >= 2")
    if max_group_size < min_size:
        raise ValueError("max_group_size must be >= min_size")

    tidsets: dict[str, set[int]] = {}
    for tid, transaction in enumerate(transactions):
        for item in transaction.items:
            tidsets.setdefault(item, set()).add(tid)
    items = sorted(item for item, tids in tidsets.items() if len(tids) >= minsup)

    results: list[tuple[tuple[str, ...], int]] = []

    def extend(prefix: list[str], prefix_tids: set[int], candidates: list[str]):
        for i, item in enumerate(candidates):
            tids = prefix_tids & tidsets[item]
            if len(tids) < minsup:
                continue
            itemset = prefix + [item]
            if len(itemset) >= min_size:
                results.append((tuple(itemset), len(tids)))
            if len(itemset) < max_group_size:
                extend(itemset, tids, candidates[i + 1 :])

    all_tids = set(range(len(transactions)))
    extend([], all_tids, items)
    results.sort(key=lambda entry: entry[0])
    return results


def prune_to_maximal(
    itemsets: list[tuple[tuple[str, ...], int]],
    transactions: list[Transaction],
) -> list[CandidateGroup]:
    """Drop every itemset strictly contained in another, attach common brands.

    ``common_brands`` is the exact set of brands whose transaction contains
    every member, so ``support == len(common_brands)`` by construction.
    """
    sets = [frozenset(members) for members, _ in itemsets]
    by_size = sorted(range(len(sets)), key=lambda i: -len(sets[i]))
    kept: list[int] = []
    for idx in by_size:
        candidate = sets[idx]
        if any(candidate < sets[j] for j in kept):
            continue
        kept.append(idx)

    groups = []
    for idx in kept:
        members = tuple(sorted(sets[idx]))
        member_set = sets[idx]
        common = tuple(
            sorted(t.brand_id for t in transactions if member_set.issubset(t.items))
        )
        groups.append(CandidateGroup(members=members, common_brands=common))
    groups.sort(key=lambda g: g.members)
    return groups


def expand_pairs(groups: list[CandidateGroup]) -> list[GroupBrandPair]:
    """One pair per (group, common brand)."""
    pairs = []
    for group in groups:
        for brand in group.common_brands:
            pairs.append(
                GroupBrandPair(
                    pair_id=f"{group.group_id}:{brand}",
                    group_id=group.group_id,
                    brand_id=brand,
                    members=group.members,
                )
            )
    return pairs


def support_sweep(
    transactions: list[Transaction],
    minsup_values: list[int],
    min_size: int = DEFAULT_MIN_SIZE,
    max_group_size: int = DEFAULT_MAX_GROUP_SIZE,
) -> list[tuple[int, int]]:
    """(minsup, number of unique maximal groups) for each requested minsup."""
    if not minsup_values:
        raise ValueError("minsup_values must be non-empty")
    if list(minsup_values) != sorted(minsup_values):
        raise ValueError("minsup_values must be ascending")
    table = []
    for minsup in minsup_values:
        itemsets = mine_frequent_itemsets(transactions, minsup, min_size, max_group_size)
        groups = prune_to_maximal(itemsets, transactions)
        table.append((minsup, len(groups)))
    return table

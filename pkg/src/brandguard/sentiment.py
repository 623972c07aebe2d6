"""Lexicon-based sentiment scoring of review text.

Scores are the mean of per-token (positivity - negativity) over tokens found
in the lexicon, so they always land in [-1, 1]. The scorer is deliberately
sense-free and order-free: review-level sentiment only feeds group-level
averages downstream, and the lexicon file is pluggable data. No negation
handling.
"""

from __future__ import annotations

import re

__all__ = ["Lexicon", "LexiconFormatError", "load_lexicon", "score_text", "tokenize"]

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


class LexiconFormatError(ValueError):
    pass


class Lexicon:
    """Map from lowercase token to (positivity, negativity), both in [0, 1]."""

    def __init__(self, entries: dict[str, tuple[float, float]] | None = None):
        self.entries: dict[str, tuple[float, float]] = dict(entries or {})

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def polarity(self, token: str) -> float | None:
        entry = self.entries.get(token)
        if entry is None:
            return None
        return entry[0] - entry[1]


def load_lexicon(path: str) -> Lexicon:
    """Load a tab-separated token / positivity / negativity file.

    Duplicate tokens have their scores averaged. Non-numeric or out-of-range
    scores raise with the offending line number.
    """
    sums: dict[str, list[float]] = {}
    counts: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise LexiconFormatError(
                    f"line {line_no}: expected 3 tab-separated fields, got {len(parts)}"
                )
            token = parts[0].strip().lower()
            try:
                pos, neg = float(parts[1]), float(parts[2])
            except ValueError as exc:
                raise LexiconFormatError(f"line {line_no}: non-numeric score") from exc
            if not (0.0 <= pos <= 1.0 and 0.0 <= neg <= 1.0):
                raise LexiconFormatError(
                    f"line {line_no}: scores must lie in [0, 1], got ({pos}, {neg})"
                )
            acc = sums.setdefault(token, [0.0, 0.0])
            acc[0] += pos
            acc[1] += neg
            counts[token] = counts.get(token, 0) + 1
    entries = {
        token: (acc[0] / counts[token], acc[1] / counts[token])
        for token, acc in sums.items()
    }
    return Lexicon(entries)


def tokenize(text: str) -> list[str]:
    return [t for t in _TOKEN_SPLIT.split(text.lower()) if t]


def score_text(lexicon: Lexicon, text: str) -> float:
    """Score a text in [-1, 1]; texts with no lexicon tokens score 0."""
    polarities = [p for t in tokenize(text) if (p := lexicon.polarity(t)) is not None]
    if not polarities:
        return 0.0
    score = sum(polarities) / len(polarities)
    return max(-1.0, min(1.0, score))

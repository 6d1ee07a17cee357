"""Lexicon word-count sentiment classification.

A tweet's polarity is decided by counting token matches against positive and
negative term lists. Entries are exact tokens or prefix stems marked with a
trailing ``*``. More negative matches than positive means Negative, the
reverse means Positive, ties (including zero matches) mean Neutral.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .corpus import DateWindow, Tweet
from .errors import LexiconError, ValidationError


class SentimentLabel(Enum):
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"


@dataclass(frozen=True)
class Lexicon:
    positive_exact: frozenset[str]
    positive_stems: tuple[str, ...]
    negative_exact: frozenset[str]
    negative_stems: tuple[str, ...]

    @property
    def positive_size(self) -> int:
        return len(self.positive_exact) + len(self.positive_stems)

    @property
    def negative_size(self) -> int:
        return len(self.negative_exact) + len(self.negative_stems)


def _validate_entry(entry: str, source: str, line_no: int) -> tuple[str, bool]:
    """Return (term, is_stem); raise LexiconError on a malformed entry."""
    is_stem = entry.endswith("*")
    term = entry[:-1] if is_stem else entry
    if "*" in term:
        raise LexiconError(
            f"{source}:{line_no}: format error: '*' only allowed as final character"
            f" in {entry!r}"
        )
    if not term:
        raise LexiconError(f"{source}:{line_no}: format error: empty entry")
    if is_stem and len(term) < 2:
        raise LexiconError(
            f"{source}:{line_no}: format error: stem {entry!r} shorter than 2 characters"
        )
    if any(ch.isspace() for ch in term):
        raise LexiconError(
            f"{source}:{line_no}: format error: entry {entry!r} contains whitespace"
        )
    return term, is_stem


def parse_lexicon(lines: Iterable[str], source: str = "<lexicon>") -> Lexicon:
    """Parse sectioned lexicon text.

    Sections are ``[positive]`` and ``[negative]``; one entry per line;
    lines starting with ``;`` are comments. Both sections must end up
    non-empty, no entry may appear in both, and ``*`` is legal only as the
    final character of an entry (prefix wildcard, stem length at least 2).
    """
    sections: dict[str, tuple[set[str], set[str]]] = {
        "positive": (set(), set()),
        "negative": (set(), set()),
    }
    raw_entries: dict[str, set[str]] = {"positive": set(), "negative": set()}
    current: str | None = None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().casefold()
            if name not in sections:
                raise LexiconError(
                    f"{source}:{line_no}: format error: unknown section {line!r}"
                )
            current = name
            continue
        if current is None:
            raise LexiconError(
                f"{source}:{line_no}: format error: entry {line!r} before any section"
            )
        entry = line.casefold()
        term, is_stem = _validate_entry(entry, source, line_no)
        other = "negative" if current == "positive" else "positive"
        if entry in raw_entries[other]:
            raise LexiconError(
                f"{source}:{line_no}: conflict: {entry!r} appears in both sections"
            )
        raw_entries[current].add(entry)
        exact, stems = sections[current]
        (stems if is_stem else exact).add(term)
    for name in ("positive", "negative"):
        if not raw_entries[name]:
            raise LexiconError(f"{source}: empty polarity: no [{name}] entries")
    pos_exact, pos_stems = sections["positive"]
    neg_exact, neg_stems = sections["negative"]
    return Lexicon(
        positive_exact=frozenset(pos_exact),
        positive_stems=tuple(sorted(pos_stems)),
        negative_exact=frozenset(neg_exact),
        negative_stems=tuple(sorted(neg_stems)),
    )


def load_lexicon(path: Path | str) -> Lexicon:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read lexicon file {path}: {exc}") from exc
    return parse_lexicon(text.splitlines(), source=str(path))


@dataclass(frozen=True)
class SentimentScore:
    pos_count: int
    neg_count: int


def _polarity_hits(token: str, exact: frozenset[str], stems: tuple[str, ...]) -> bool:
    if token in exact:
        return True
    return any(token.startswith(stem) for stem in stems)


def score(tokens: Iterable[str], lex: Lexicon) -> SentimentScore:
    """Count positive and negative matches; repeated tokens count repeatedly."""
    pos = 0
    neg = 0
    for token in tokens:
        if _polarity_hits(token, lex.positive_exact, lex.positive_stems):
            pos += 1
        if _polarity_hits(token, lex.negative_exact, lex.negative_stems):
            neg += 1
    return SentimentScore(pos, neg)


def classify(s: SentimentScore) -> SentimentLabel:
    if s.neg_count > s.pos_count:
        return SentimentLabel.NEGATIVE
    if s.pos_count > s.neg_count:
        return SentimentLabel.POSITIVE
    return SentimentLabel.NEUTRAL


def label_tokens(tokens: Iterable[str], lex: Lexicon) -> SentimentLabel:
    return classify(score(tokens, lex))


@dataclass
class SentimentSummary:
    """Per-label totals plus the per-day negative series over a window."""

    window: DateWindow
    totals: dict[SentimentLabel, int]
    negative_per_day: list[int]

    @property
    def total(self) -> int:
        return sum(self.totals.values())

    def percentages(self) -> dict[SentimentLabel, float]:
        denom = self.total
        if denom == 0:
            return {label: 0.0 for label in SentimentLabel}
        return {
            label: 100.0 * self.totals[label] / denom for label in SentimentLabel
        }

    def render(self) -> str:
        pct = self.percentages()
        lines = [f"# sentiment summary over {self.total} tweets"]
        for label in SentimentLabel:
            lines.append(
                f"{label.value}: {self.totals[label]} ({pct[label]:.2f}%)"
            )
        return "\n".join(lines)

    def write_negative_csv(self, path: Path | str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["date", "count"])
            for day, count in zip(self.window.dates(), self.negative_per_day):
                writer.writerow([day.isoformat(), count])


def summarize(
    labeled: Iterable[tuple[Tweet, SentimentLabel]], window: DateWindow
) -> SentimentSummary:
    """Aggregate (tweet, label) pairs into totals and the negative day series.

    Every tweet must fall inside the window; the per-day negative counts then
    sum to the Negative total by construction.
    """
    totals = {label: 0 for label in SentimentLabel}
    per_day = [0] * window.num_days
    for tweet, label in labeled:
        idx = window.index_of(tweet.day)
        if idx is None:
            raise ValidationError(
                f"tweet {tweet.id} dated {tweet.day} falls outside window"
            )
        totals[label] += 1
        if label is SentimentLabel.NEGATIVE:
            per_day[idx] += 1
    return SentimentSummary(window, totals, per_day)

"""Temporal topic aggregation: run one LDA model per day, attach human-edited
category labels, and derive presence/frequency/diversity reports.

Topic-to-category assignment is manual by nature; it enters the pipeline as a
CSV file (date,topic_id,category) edited after inspecting the per-day
topics.txt listings, so the surrounding pipeline stays reproducible.
"""

from __future__ import annotations

import csv
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import DailyBuckets, DateWindow
from .errors import DanglingEntryError, EmptyCorpusError, NoDataError, ValidationError
from .topicmodel import (
    SamplerConfig,
    TopicModel,
    build_vocab,
    fit,
    save_model,
    write_topics_txt,
)

UNCATEGORIZED = "Uncategorized"


@dataclass
class CategoryMap:
    """(day, topic id) -> category name, from the manual labeling pass."""

    entries: list[tuple[date, int, str]]
    categories: list[str] = field(init=False)

    def __post_init__(self):
        seen_pairs: set[tuple[date, int]] = set()
        names: list[str] = []
        for day, topic, category in self.entries:
            if (day, topic) in seen_pairs:
                raise ValidationError(
                    f"category map assigns ({day}, topic {topic}) twice"
                )
            seen_pairs.add((day, topic))
            if not category:
                raise ValidationError(f"empty category name for ({day}, topic {topic})")
            if category not in names:
                names.append(category)
        self.categories = names

    def lookup(self) -> dict[tuple[date, int], str]:
        return {(day, topic): cat for day, topic, cat in self.entries}


def load_category_map(path: Path | str) -> CategoryMap:
    """Read a category map CSV: header `date,topic_id,category` required."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ValidationError(f"cannot read category map {path}: {exc}") from exc
    if not rows or [c.strip().casefold() for c in rows[0]] != ["date", "topic_id", "category"]:
        raise ValidationError(
            f"{path}: category map must start with header 'date,topic_id,category'"
        )
    entries: list[tuple[date, int, str]] = []
    for row_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ValidationError(f"{path}:{row_no}: expected 3 columns, got {len(row)}")
        day_raw, topic_raw, category = (cell.strip() for cell in row)
        try:
            day = date.fromisoformat(day_raw)
        except ValueError as exc:
            raise ValidationError(f"{path}:{row_no}: bad date {day_raw!r}") from exc
        try:
            topic = int(topic_raw)
        except ValueError as exc:
            raise ValidationError(f"{path}:{row_no}: bad topic id {topic_raw!r}") from exc
        if topic < 0:
            raise ValidationError(f"{path}:{row_no}: negative topic id {topic}")
        if not category:
            raise ValidationError(f"{path}:{row_no}: empty category name")
        entries.append((day, topic, category))
    return CategoryMap(entries)


def _fit_one_day(args) -> tuple[date, TopicModel]:
    day, docs, doc_ids, stopwords, min_count, config = args
    try:
        corpus = build_vocab(docs, stopwords=stopwords, min_count=min_count, doc_ids=doc_ids)
    except EmptyCorpusError as exc:
        raise EmptyCorpusError(f"day {day.isoformat()}: {exc}") from exc
    return day, fit(corpus, config)


def run_daily(
    buckets: DailyBuckets,
    config: SamplerConfig,
    stopwords: frozenset[str] = frozenset(),
    min_count: int = 1,
    out_dir: Path | str | None = None,
    jobs: int = 1,
) -> list[tuple[date, TopicModel]]:
    """Fit one independent model per window day.

    Buckets are expected to hold the negative-labeled tweets. Day i runs with
    seed config.seed + i, so parallel execution cannot change any result.
    Empty days fail fast with the day named; with out_dir set, dumps land as
    model_YYYY-MM-DD.txt plus topics_YYYY-MM-DD.txt.
    """
    tasks = []
    for i, (day, tweets) in enumerate(zip(buckets.window.dates(), buckets.buckets)):
        if not tweets:
            raise EmptyCorpusError(f"day {day.isoformat()}: no tweets to model")
        docs = [t.tokens if t.tokens is not None else [] for t in tweets]
        doc_ids = [t.id for t in tweets]
        day_config = dataclasses.replace(config, seed=config.seed + i)
        tasks.append((day, docs, doc_ids, stopwords, min_count, day_config))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fitted = list(pool.map(_fit_one_day, tasks))
    else:
        fitted = [_fit_one_day(task) for task in tasks]

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for day, model in fitted:
            save_model(model, out / f"model_{day.isoformat()}.txt")
            write_topics_txt(model, out / f"topics_{day.isoformat()}.txt")
    return fitted


@dataclass(frozen=True)
class CategorizedTopic:
    day: date
    topic: int
    category: str | None


def apply_category_map(
    models: Sequence[tuple[date, TopicModel]], cmap: CategoryMap
) -> list[CategorizedTopic]:
    """Annotate every (day, topic) with its category, or None when unmapped.

    Every map entry must reference a fitted day and an in-range topic id.
    """
    k_by_day = {day: model.config.k for day, model in models}
    for day, topic, _ in cmap.entries:
        if day not in k_by_day:
            raise DanglingEntryError(
                f"category map references day {day.isoformat()} with no fitted model"
            )
        if topic >= k_by_day[day]:
            raise DanglingEntryError(
                f"category map references topic {topic} on {day.isoformat()}"
                f" but that model has k={k_by_day[day]}"
            )
    lookup = cmap.lookup()
    out = []
    for day, model in models:
        for k in range(model.config.k):
            out.append(CategorizedTopic(day, k, lookup.get((day, k))))
    return out


@dataclass
class PresenceMatrix:
    """Boolean category-by-day presence table."""

    categories: list[str]
    days: list[date]
    cells: np.ndarray  # bool, shape (len(categories), len(days))

    def row_sums(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.cells.sum(axis=0)

    @property
    def total_true(self) -> int:
        return int(self.cells.sum())


def presence_matrix(
    topics: Iterable[CategorizedTopic],
    window: DateWindow,
    include_uncategorized: bool = False,
) -> PresenceMatrix:
    """Collapse categorized topics to one boolean cell per (category, day).

    Categories sort alphabetically; with include_uncategorized set, an
    "Uncategorized" row is appended last covering unmapped topics.
    """
    topics = list(topics)
    names = sorted({t.category for t in topics if t.category is not None})
    if include_uncategorized and UNCATEGORIZED not in names:
        names.append(UNCATEGORIZED)
    days = window.dates()
    day_index = {day: i for i, day in enumerate(days)}
    cells = np.zeros((len(names), len(days)), dtype=bool)
    cat_index = {name: i for i, name in enumerate(names)}
    for t in topics:
        category = t.category
        if category is None:
            if not include_uncategorized:
                continue
            category = UNCATEGORIZED
        if t.day not in day_index:
            raise ValidationError(
                f"categorized topic dated {t.day} falls outside the report window"
            )
        cells[cat_index[category], day_index[t.day]] = True
    return PresenceMatrix(names, days, cells)


def category_frequencies(matrix: PresenceMatrix) -> dict[str, float]:
    """Share of true cells per category: 100 * rowsum / total true cells."""
    total = matrix.total_true
    if total == 0:
        raise NoDataError("presence matrix has no true cells")
    sums = matrix.row_sums()
    return {
        name: 100.0 * int(sums[i]) / total for i, name in enumerate(matrix.categories)
    }


def diversity_per_day(matrix: PresenceMatrix) -> list[int]:
    """Distinct categories present per day (column sums, day order)."""
    return [int(v) for v in matrix.col_sums()]


def write_presence_csv(matrix: PresenceMatrix, path: Path | str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category"] + [d.isoformat() for d in matrix.days])
        for i, name in enumerate(matrix.categories):
            writer.writerow([name] + [int(v) for v in matrix.cells[i]])


def write_frequencies_csv(matrix: PresenceMatrix, path: Path | str) -> None:
    freqs = category_frequencies(matrix)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "percentage"])
        for name in matrix.categories:
            writer.writerow([name, f"{freqs[name]:.2f}"])


def write_diversity_csv(matrix: PresenceMatrix, path: Path | str) -> None:
    counts = diversity_per_day(matrix)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "count"])
        for day, count in zip(matrix.days, counts):
            writer.writerow([day.isoformat(), count])


def diversity_chart(matrix: PresenceMatrix) -> str:
    """ASCII bar chart of per-day category diversity."""
    counts = diversity_per_day(matrix)
    lines = ["# distinct topic categories per day"]
    for day, count in zip(matrix.days, counts):
        lines.append(f"{day.isoformat()} | {'#' * count} {count}")
    return "\n".join(lines)

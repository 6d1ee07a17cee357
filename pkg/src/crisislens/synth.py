"""Synthetic tweet corpora with planted, known-by-construction labels.

Used for the bundled demo corpus and for oracle tests: every generated tweet
draws its words from pools that are disjoint with respect to the bundled
lexicon (filler words hit nothing, polarity words hit exactly one side), so
the expected sentiment label of each record is fixed at generation time
rather than recovered by running the classifier.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone

from .corpus import DateWindow
from .sentiment import SentimentLabel

# Words matching no bundled lexicon entry and no query term (exact-token
# matching makes prefix overlap with query terms harmless).
FILLER_WORDS = (
    "water", "rain", "road", "roads", "bridge", "street", "river", "house",
    "houses", "power", "school", "city", "county", "people", "crews",
    "morning", "night", "today", "area", "creek", "columbia", "carolina",
    "south", "main", "car", "cars", "still", "closed", "open", "update",
    "downtown", "storm", "weather", "week", "neighborhood", "shelter",
)

# Each word hits exactly one positive entry of the bundled lexicon.
POSITIVE_WORDS = (
    "glad", "good", "great", "grateful", "happy", "hope", "hopeful", "helped",
    "helping", "relief", "rescued", "safe", "safely", "support", "thank",
    "thanks", "love", "amazing", "heroes", "recovery", "volunteers",
)

# Each word hits exactly one negative entry of the bundled lexicon.
NEGATIVE_WORDS = (
    "afraid", "bad", "damage", "damaged", "danger", "dangerous", "dead",
    "deaths", "destroyed", "devastating", "fear", "homeless", "hurt",
    "injured", "killed", "loss", "lost", "sad", "scared", "terrible",
    "victims", "worried", "warning",
)

# Forms that normalize to a key of the default query.
QUERY_INSERTS = (
    "#scflood", "#SCFlood", "#floodsc", "#scflooding", "#prayforsc",
    "#southcarolinastrong", "#scflood2015", "flood",
)

JUNK_LINES = (
    "",
    "{not json at all",
    '{"id": 123, "created_at": "2015-10-05T12:00:00Z", "text": "numeric id"}',
    '{"id": "junk4", "text": "missing timestamp"}',
    '{"id": "junk5", "created_at": "not-a-date", "text": "bad timestamp"}',
)

_LABELS = (SentimentLabel.NEGATIVE, SentimentLabel.POSITIVE, SentimentLabel.NEUTRAL)
_LABEL_WEIGHTS = (35, 25, 40)


@dataclass
class PlantedCorpus:
    """Generated record lines plus the ground truth they were built from."""

    lines: list[str]
    window: DateWindow
    expected_labels: dict[SentimentLabel, int]
    negative_per_day: list[int]
    outside_window: int
    nonmatching: int
    junk: int
    duplicates: int

    @property
    def matching_in_window(self) -> int:
        return sum(self.expected_labels.values())

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.lines:
                fh.write(line + "\n")


def _day_weights(num_days: int) -> list[int]:
    # Mild peak early in the window, mimicking a disaster news cycle.
    weights = [5] * num_days
    for offset, w in ((1, 8), (2, 12), (3, 8), (4, 6)):
        if offset < num_days:
            weights[offset] = w
    return weights


def _timestamp(rng: random.Random, day: date) -> tuple[datetime, str]:
    dt = datetime.combine(day, time(0), tzinfo=timezone.utc) + timedelta(
        seconds=rng.randrange(86400)
    )
    style = rng.random()
    if style < 0.8:
        rendered = dt.strftime("%Y-%m-%dT%H:%M:%SZ")
    elif style < 0.9:
        rendered = dt.isoformat()
    else:
        rendered = dt.astimezone(timezone(timedelta(hours=-4))).isoformat()
    return dt, rendered


def _build_text(rng: random.Random, label: SentimentLabel, matching: bool) -> str:
    words = rng.sample(FILLER_WORDS, rng.randint(5, 9))
    if label is SentimentLabel.NEGATIVE:
        n_neg = rng.randint(1, 3)
        n_pos = rng.randint(0, n_neg - 1)
    elif label is SentimentLabel.POSITIVE:
        n_pos = rng.randint(1, 3)
        n_neg = rng.randint(0, n_pos - 1)
    else:
        # Some neutrals carry a balanced pair to exercise the tie rule.
        n_pos = n_neg = 1 if rng.random() < 0.3 else 0
    words += rng.sample(POSITIVE_WORDS, n_pos)
    words += rng.sample(NEGATIVE_WORDS, n_neg)
    if matching:
        words += rng.sample(QUERY_INSERTS, rng.randint(1, 2))
    rng.shuffle(words)
    # Decoration only adds chunks that normalization removes or repairs.
    if rng.random() < 0.15:
        words.insert(0, f"rt @user{rng.randrange(1000)}:")
    if rng.random() < 0.1:
        words.insert(rng.randrange(len(words) + 1), f"@user{rng.randrange(1000)}")
    if rng.random() < 0.2:
        i = rng.randrange(len(words))
        words[i] = words[i] + rng.choice((",", "!", "..."))
    if rng.random() < 0.1:
        i = rng.randrange(len(words))
        words[i] = words[i].upper()
    if rng.random() < 0.2:
        words.append(f"http://t.co/{rng.randrange(16**6):06x}")
    return " ".join(words)


def make_corpus(
    n: int,
    seed: int,
    window: DateWindow | None = None,
    junk_lines: int = 0,
    duplicates: int = 0,
    nonmatching_frac: float = 0.0,
    outside_frac: float = 0.0,
) -> PlantedCorpus:
    """Generate n records (plus junk/duplicate lines) with planted labels.

    expected_labels and negative_per_day cover exactly the records that are
    query-matching and inside the window; everything else is tracked in the
    outside_window / nonmatching / junk / duplicates tallies.
    """
    rng = random.Random(seed)
    if window is None:
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 15))
    days = window.dates()
    weights = _day_weights(window.num_days)
    lines: list[str] = []
    expected = {label: 0 for label in SentimentLabel}
    negative_per_day = [0] * window.num_days
    outside = 0
    nonmatching = 0
    for i in range(n):
        matching = rng.random() >= nonmatching_frac
        out_of_window = matching and rng.random() < outside_frac
        label = rng.choices(_LABELS, weights=_LABEL_WEIGHTS)[0]
        if out_of_window:
            shift = rng.randint(1, 3)
            day = (
                window.start_day - timedelta(days=shift)
                if rng.random() < 0.5
                else window.end_day + timedelta(days=shift)
            )
            outside += 1
        else:
            day = rng.choices(days, weights=weights)[0]
        dt, rendered = _timestamp(rng, day)
        text = _build_text(rng, label, matching)
        lines.append(
            json.dumps(
                {"id": f"t{i:05d}", "created_at": rendered, "text": text},
                ensure_ascii=False,
            )
        )
        if not matching:
            nonmatching += 1
        elif not out_of_window:
            expected[label] += 1
            if label is SentimentLabel.NEGATIVE:
                idx = window.index_of(dt.date())
                negative_per_day[idx] += 1
    for _ in range(duplicates):
        lines.append(rng.choice(lines))  # exact copy, so order never matters
    for j in range(junk_lines):
        lines.append(JUNK_LINES[j % len(JUNK_LINES)])
    rng.shuffle(lines)
    return PlantedCorpus(
        lines=lines,
        window=window,
        expected_labels=expected,
        negative_per_day=negative_per_day,
        outside_window=outside,
        nonmatching=nonmatching,
        junk=junk_lines,
        duplicates=duplicates,
    )

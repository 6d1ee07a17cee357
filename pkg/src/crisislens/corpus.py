"""Tweet ingestion: parse raw records, filter by a term query, normalize text,
and bucket tweets by day.

Input is newline-delimited JSON with fields ``id``, ``created_at`` (ISO-8601)
and ``text``. Query matching runs on the normalized token stream, and day
boundaries use the UTC calendar date throughout.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable

from .errors import RecordError, ValidationError

# Apostrophe-like characters are deleted inside words ("they'll" -> "theyll").
_APOSTROPHES = dict.fromkeys(map(ord, "'‘’ʼ`"))

# Tokens are maximal runs of unicode alphanumerics; underscore splits too.
_NONWORD = re.compile(r"[\W_]+")


def normalize(text: str) -> list[str]:
    """Turn raw tweet text into an ordered list of lowercase tokens.

    Per whitespace-separated chunk of the case-folded text:
      - URL chunks (``http://`` / ``https://`` prefix) are dropped whole;
      - ``@``-mention chunks are dropped, usernames are not vocabulary;
      - a leading ``#`` is a hashtag marker and is stripped;
      - apostrophes inside words are deleted ("they'll" -> "theyll");
      - the remainder splits on any other non-alphanumeric character;
      - the standalone token ``rt`` and any token still starting with
        ``http`` are dropped.

    Empty input gives an empty list. The function is idempotent over
    whitespace-joined output.
    """
    tokens: list[str] = []
    for chunk in text.casefold().split():
        if chunk.startswith(("http://", "https://")):
            continue
        if chunk.startswith("@"):
            continue
        chunk = chunk.lstrip("#").translate(_APOSTROPHES)
        for tok in _NONWORD.split(chunk):
            if not tok or tok == "rt" or tok.startswith("http"):
                continue
            tokens.append(tok)
    return tokens


@dataclass
class Tweet:
    """One social-media record. ``tokens`` is filled by :func:`normalize`."""

    id: str
    created_at: datetime  # timezone-aware, UTC, second precision
    text: str
    tokens: list[str] | None = None

    @property
    def day(self) -> date:
        return self.created_at.date()


@dataclass(frozen=True)
class Query:
    """Boolean OR filter over match terms.

    ``terms`` holds the folded source terms (hashtag terms keep their ``#``);
    ``match_keys`` holds the normalized single-token forms actually compared
    against tweet tokens. A hashtag term therefore matches the hashtag with
    or without ``#``, and a bare word matches whole tokens only.
    """

    terms: frozenset[str]
    match_keys: frozenset[str]

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> "Query":
        folded: list[str] = []
        keys: list[str] = []
        for raw in terms:
            term = raw.strip().casefold()
            if not term:
                raise ValidationError("query term is empty")
            toks = normalize(term)
            if len(toks) != 1:
                raise ValidationError(
                    f"query term {raw!r} does not normalize to a single token"
                )
            folded.append(term)
            keys.append(toks[0])
        if not folded:
            raise ValidationError("query has no terms")
        return cls(frozenset(folded), frozenset(keys))


def load_query(path: Path | str) -> Query:
    """Read a query file: one term per line, ``#``-prefixed lines are hashtag
    terms (not comments), blank lines ignored."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read query file {path}: {exc}") from exc
    terms = [line for line in (l.strip() for l in lines) if line]
    if not terms:
        raise ValidationError(f"query file {path} has no terms")
    return Query.from_terms(terms)


def matches_query(tweet: Tweet, query: Query) -> bool:
    """True iff any query term occurs as a whole token in the normalized text."""
    tokens = tweet.tokens if tweet.tokens is not None else normalize(tweet.text)
    token_set = set(tokens)
    return any(key in token_set for key in query.match_keys)


@dataclass(frozen=True)
class DateWindow:
    """Inclusive calendar-date range."""

    start_day: date
    end_day: date

    def __post_init__(self):
        if self.start_day > self.end_day:
            raise ValidationError(
                f"window start {self.start_day} is after end {self.end_day}"
            )

    @property
    def num_days(self) -> int:
        return (self.end_day - self.start_day).days + 1

    def dates(self) -> list[date]:
        return [self.start_day + timedelta(days=i) for i in range(self.num_days)]

    def index_of(self, day: date) -> int | None:
        """0-based day index inside the window, or None when outside."""
        offset = (day - self.start_day).days
        if 0 <= offset < self.num_days:
            return offset
        return None


@dataclass
class DailyBuckets:
    """Tweets partitioned into one list per window day."""

    window: DateWindow
    buckets: list[list[Tweet]]


def _parse_timestamp(value: str, line_no: int) -> datetime:
    # ISO-8601; a trailing "Z" is accepted (fromisoformat lacks it on 3.10).
    raw = value
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise RecordError(line_no, f"unparseable timestamp {value!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def parse_record(line: str, line_no: int = 0) -> Tweet:
    """Parse one input record. Returns a Tweet with ``tokens`` unset.

    Raises :class:`RecordError` (carrying ``line_no``) on malformed structure,
    missing fields, or an unparseable timestamp; the caller decides whether to
    skip or abort.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(line_no, f"malformed record: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise RecordError(line_no, "malformed record: not an object")
    for key in ("id", "created_at", "text"):
        if key not in obj:
            raise RecordError(line_no, f"missing field {key!r}")
    ident, created, text = obj["id"], obj["created_at"], obj["text"]
    if not isinstance(ident, str) or not ident:
        raise RecordError(line_no, "id must be a non-empty string")
    if not isinstance(text, str):
        raise RecordError(line_no, "text must be a string")
    if not isinstance(created, str):
        raise RecordError(line_no, "created_at must be an ISO-8601 string")
    return Tweet(id=ident, created_at=_parse_timestamp(created, line_no), text=text)


def partition_by_day(
    tweets: Iterable[Tweet], window: DateWindow
) -> tuple[DailyBuckets, int]:
    """Assign tweets to UTC calendar-day buckets; returns (buckets, excluded).

    Tweets dated outside the window are excluded and counted. Bucket order
    follows the window's dates, so bucket sizes plus the excluded count always
    equals the input count.
    """
    buckets: list[list[Tweet]] = [[] for _ in range(window.num_days)]
    excluded = 0
    for tweet in tweets:
        idx = window.index_of(tweet.day)
        if idx is None:
            excluded += 1
        else:
            buckets[idx].append(tweet)
    return DailyBuckets(window, buckets), excluded


@dataclass
class IngestSummary:
    """Line-level accounting for one ingestion pass."""

    total: int = 0
    malformed: int = 0
    matched: int = 0
    excluded: int = 0

    @property
    def kept(self) -> int:
        return self.matched - self.excluded

    def render(self) -> str:
        return "\n".join(
            [
                "# ingest summary (day boundary: UTC calendar date)",
                f"total: {self.total}",
                f"malformed: {self.malformed}",
                f"matched: {self.matched}",
                f"excluded: {self.excluded}",
                f"kept: {self.kept}",
            ]
        )


def ingest_lines(
    lines: Iterable[str],
    query: Query,
    window: DateWindow,
    strict: bool = False,
) -> tuple[DailyBuckets, IngestSummary]:
    """Streaming ingestion pass: parse, dedupe ids, match, normalize, bucket.

    Lenient mode (default) skips and counts malformed records and duplicate
    ids; strict mode aborts on the first one. Tweets come back with tokens
    filled.
    """
    summary = IngestSummary()
    seen: set[str] = set()
    matched: list[Tweet] = []
    for line_no, line in enumerate(lines, start=1):
        summary.total += 1
        try:
            tweet = parse_record(line, line_no)
            if tweet.id in seen:
                raise RecordError(line_no, f"duplicate id {tweet.id!r}")
        except RecordError:
            if strict:
                raise
            summary.malformed += 1
            continue
        seen.add(tweet.id)
        tweet.tokens = normalize(tweet.text)
        if matches_query(tweet, query):
            matched.append(tweet)
    summary.matched = len(matched)
    buckets, excluded = partition_by_day(matched, window)
    summary.excluded = excluded
    return buckets, summary


def day_file_name(day: date) -> str:
    return f"day_{day.isoformat()}.jsonl"


def _record_json(tweet: Tweet) -> str:
    obj = {
        "id": tweet.id,
        "created_at": tweet.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "text": tweet.text,
    }
    if tweet.tokens is not None:
        obj["tokens"] = tweet.tokens
    return json.dumps(obj, ensure_ascii=False)


def write_day_files(buckets: DailyBuckets, out_dir: Path) -> list[Path]:
    """Write one record file per window day (kept even when empty)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for day, tweets in zip(buckets.window.dates(), buckets.buckets):
        path = out_dir / day_file_name(day)
        with open(path, "w", encoding="utf-8") as fh:
            for tweet in tweets:
                fh.write(_record_json(tweet) + "\n")
        paths.append(path)
    return paths


def write_tweets(tweets: Iterable[Tweet], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for tweet in tweets:
            fh.write(_record_json(tweet) + "\n")


def read_day_file(path: Path | str) -> list[Tweet]:
    """Read back a day file written by this module; restores stored tokens."""
    tweets = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            tweet = parse_record(line, line_no)
            stored = json.loads(line).get("tokens")
            tweet.tokens = list(stored) if stored is not None else normalize(tweet.text)
            tweets.append(tweet)
    return tweets

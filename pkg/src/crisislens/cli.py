"""Command-line pipeline: ingest -> sentiment -> topics -> report.

Stages hand off through files under the output directory, because topic
labeling is a manual step between `topics` and `report`. Each subcommand
validates its configuration before touching data, and exit codes are stable:
0 success, 2 validation or usage error, 3 empty result, 1 internal error.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from datetime import date
from pathlib import Path

from .config import PipelineConfig, build_config, parse_config_file, require_file
from .corpus import (
    DailyBuckets,
    DateWindow,
    day_file_name,
    ingest_lines,
    load_query,
    read_day_file,
    write_day_files,
    write_tweets,
)
from .errors import EmptyResultError, NoDataError, ValidationError
from .sentiment import SentimentLabel, label_tokens, load_lexicon, summarize
from .temporal import (
    apply_category_map,
    category_frequencies,
    diversity_chart,
    load_category_map,
    presence_matrix,
    run_daily,
    write_diversity_csv,
    write_frequencies_csv,
    write_presence_csv,
)
from .topicmodel import load_model, load_stopwords


def _scan_day_files(
    directory: Path, prefix: str, suffix: str, produced_by: str
) -> tuple[DateWindow, list[Path]]:
    """Recover the date window from day-stamped files of an earlier stage."""
    if not directory.is_dir():
        raise ValidationError(f"{directory} does not exist; run '{produced_by}' first")
    found: dict[date, Path] = {}
    for path in sorted(directory.iterdir()):
        name = path.name
        if not (name.startswith(prefix) and name.endswith(suffix)):
            continue
        stamp = name[len(prefix) : len(name) - len(suffix)]
        try:
            day = date.fromisoformat(stamp)
        except ValueError as exc:
            raise ValidationError(f"stray file {path} (bad date stamp)") from exc
        found[day] = path
    if not found:
        raise ValidationError(
            f"no {prefix}YYYY-MM-DD{suffix} files in {directory}; run '{produced_by}' first"
        )
    days = sorted(found)
    window = DateWindow(days[0], days[-1])
    if len(days) != window.num_days:
        missing = sorted(set(window.dates()) - set(days))[0]
        raise ValidationError(f"{directory}: day files not contiguous ({missing} missing)")
    return window, [found[d] for d in days]


def cmd_ingest(config: PipelineConfig) -> int:
    input_path = require_file(config.input, "input file")
    query = load_query(require_file(config.query, "query file"))
    if config.window is None:
        raise ValidationError("start_day and end_day are required for ingest")
    with open(input_path, encoding="utf-8") as fh:
        buckets, summary = ingest_lines(fh, query, config.window, strict=config.strict)
    if summary.kept == 0:
        raise NoDataError("no tweets matched the query inside the window")
    config.out_dir.mkdir(parents=True, exist_ok=True)
    write_day_files(buckets, config.out_dir / "days")
    (config.out_dir / "ingest_summary.txt").write_text(
        summary.render() + "\n", encoding="utf-8"
    )
    print(summary.render())
    return 0


def cmd_sentiment(config: PipelineConfig) -> int:
    lexicon = load_lexicon(require_file(config.lexicon, "lexicon file"))
    window, day_paths = _scan_day_files(config.out_dir / "days", "day_", ".jsonl", "ingest")
    # Label everything before writing anything, so a bad day file cannot
    # leave behind a partial stage output.
    per_day_splits = []
    all_labeled = []
    for path in day_paths:
        split = {label: [] for label in SentimentLabel}
        for tweet in read_day_file(path):
            label = label_tokens(tweet.tokens or [], lexicon)
            split[label].append(tweet)
            all_labeled.append((tweet, label))
        per_day_splits.append(split)
    summary = summarize(all_labeled, window)
    sent_dir = config.out_dir / "sentiment"
    for label in SentimentLabel:
        (sent_dir / label.value).mkdir(parents=True, exist_ok=True)
    for day, split in zip(window.dates(), per_day_splits):
        for label, group in split.items():
            write_tweets(group, sent_dir / label.value / day_file_name(day))
    (sent_dir / "summary.txt").write_text(summary.render() + "\n", encoding="utf-8")
    summary.write_negative_csv(sent_dir / "negative_per_day.csv")
    if summary.totals[SentimentLabel.NEGATIVE] == 0:
        print(
            "warning: no negative tweets; the topics stage will have nothing to model",
            file=sys.stderr,
        )
    print(summary.render())
    return 0


def cmd_topics(config: PipelineConfig) -> int:
    stopwords = frozenset(load_stopwords(require_file(config.stopwords, "stopword file")))
    window, paths = _scan_day_files(
        config.out_dir / "sentiment" / "negative", "day_", ".jsonl", "sentiment"
    )
    buckets = DailyBuckets(window, [read_day_file(p) for p in paths])
    fitted = run_daily(
        buckets,
        config.sampler_config(),
        stopwords=stopwords,
        min_count=config.min_count,
        out_dir=config.out_dir / "models",
        jobs=config.jobs,
    )
    for day, model in fitted:
        print(
            f"{day.isoformat()}: {model.num_docs} docs, {model.vocab_size} terms,"
            f" k={model.config.k}, seed={model.config.seed}"
        )
    return 0


def cmd_report(config: PipelineConfig) -> int:
    cmap = load_category_map(require_file(config.category_map, "category map"))
    window, paths = _scan_day_files(config.out_dir / "models", "model_", ".txt", "topics")
    models = [(day, load_model(path)) for day, path in zip(window.dates(), paths)]
    topics = apply_category_map(models, cmap)
    matrix = presence_matrix(
        topics, window, include_uncategorized=config.include_uncategorized
    )
    category_frequencies(matrix)  # raises NoDataError before anything is written
    report_dir = config.out_dir / "report"
    report_dir.mkdir(parents=True, exist_ok=True)
    write_presence_csv(matrix, report_dir / "presence.csv")
    write_frequencies_csv(matrix, report_dir / "frequencies.csv")
    write_diversity_csv(matrix, report_dir / "diversity.csv")
    chart = diversity_chart(matrix)
    (report_dir / "diversity_chart.txt").write_text(chart + "\n", encoding="utf-8")
    print(chart)
    return 0


def cmd_pipeline(config: PipelineConfig) -> int:
    # Validate every stage's inputs up front; stages themselves re-check.
    require_file(config.input, "input file")
    require_file(config.query, "query file")
    require_file(config.lexicon, "lexicon file")
    require_file(config.stopwords, "stopword file")
    require_file(config.category_map, "category map")
    if config.window is None:
        raise ValidationError("start_day and end_day are required for pipeline")
    cmd_ingest(config)
    cmd_sentiment(config)
    cmd_topics(config)
    cmd_report(config)
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "sentiment": cmd_sentiment,
    "topics": cmd_topics,
    "report": cmd_report,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat 'key = value' config file")
    common.add_argument("--input", type=Path, help="newline-delimited tweet records")
    common.add_argument("--query", type=Path, help="query terms, one per line")
    common.add_argument(
        "--start-day", type=date.fromisoformat, metavar="YYYY-MM-DD",
        help="first day of the window (inclusive)",
    )
    common.add_argument(
        "--end-day", type=date.fromisoformat, metavar="YYYY-MM-DD",
        help="last day of the window (inclusive)",
    )
    common.add_argument("--lexicon", type=Path, help="sentiment lexicon file")
    common.add_argument("--stopwords", type=Path, help="stopword list file")
    common.add_argument("--k", type=int, help="topics per day (default 25)")
    common.add_argument("--alpha", type=float, help="doc-topic prior (default 5.0/k)")
    common.add_argument("--beta", type=float, help="topic-word prior (default 0.01)")
    common.add_argument("--iterations", type=int, help="Gibbs sweeps (default 1000)")
    common.add_argument("--seed", type=int, help="base RNG seed (day i uses seed+i)")
    common.add_argument("--min-count", type=int, help="minimum term frequency (default 1)")
    common.add_argument("--out-dir", type=Path, help="stage output directory (default out)")
    common.add_argument(
        "--strict", action=argparse.BooleanOptionalAction,
        help="abort on the first malformed input record",
    )
    common.add_argument("--jobs", type=int, help="parallel per-day model fits (default 1)")
    common.add_argument("--category-map", type=Path, help="date,topic_id,category CSV")
    common.add_argument(
        "--include-uncategorized", action=argparse.BooleanOptionalAction,
        help="add an Uncategorized row to the report",
    )

    parser = argparse.ArgumentParser(
        prog="crisislens",
        description="Disaster-tweet pipeline: filter, label sentiment, model"
        " daily topics, report category trends.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", parents=[common], help="filter and bucket raw tweets by day")
    sub.add_parser("sentiment", parents=[common], help="label bucketed tweets by polarity")
    sub.add_parser("topics", parents=[common], help="fit one LDA model per day of negative tweets")
    sub.add_parser("report", parents=[common], help="aggregate categorized topics into CSV reports")
    sub.add_parser("pipeline", parents=[common], help="run all four stages in order")
    return parser


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    file_values = parse_config_file(args.config) if args.config is not None else {}
    override_keys = (
        "input", "query", "start_day", "end_day", "lexicon", "stopwords",
        "k", "alpha", "beta", "iterations", "seed", "min_count",
        "out_dir", "strict", "jobs", "category_map", "include_uncategorized",
    )
    overrides = {key: getattr(args, key) for key in override_keys}
    return build_config(file_values, overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptyResultError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception:
        traceback.print_exc()
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

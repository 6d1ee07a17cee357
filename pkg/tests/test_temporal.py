import random
from datetime import date, datetime, timedelta, timezone

import numpy as np
import pytest

from crisislens.corpus import DailyBuckets, DateWindow, Tweet
from crisislens.errors import (
    DanglingEntryError,
    EmptyCorpusError,
    NoDataError,
    ValidationError,
)
from crisislens.temporal import (
    UNCATEGORIZED,
    CategorizedTopic,
    CategoryMap,
    apply_category_map,
    category_frequencies,
    diversity_chart,
    diversity_per_day,
    load_category_map,
    presence_matrix,
    run_daily,
    write_diversity_csv,
    write_frequencies_csv,
    write_presence_csv,
)
from crisislens.topicmodel import SamplerConfig

WINDOW = DateWindow(date(2015, 10, 3), date(2015, 10, 15))

# Presence fixture used throughout: 11 categories over the 13-day window,
# 65 true cells. Per-day distinct-category counts sum the columns.
PRESENCE_ROWS = {
    "Animal":           [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    "Bridge Damage":    [0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0],
    "Damage and Costs": [1, 1, 1, 1, 1, 0, 1, 1, 1, 0, 0, 1, 1],
    "Drinking Water":   [0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0],
    "Flood Report":     [1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0],
    "Homelessness":     [1, 0, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
    "Insurance":        [0, 0, 0, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0],
    "Power Loss":       [0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0],
    "Road Damage":      [0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 0, 0, 0],
    "Roof Damage":      [0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0],
    "Victims":          [0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
}
EXPECTED_DIVERSITY = [3, 5, 7, 8, 8, 8, 7, 5, 3, 3, 3, 3, 2]


def presence_topics():
    """CategorizedTopic list realizing PRESENCE_ROWS, one topic per true cell."""
    out = []
    for d, day in enumerate(WINDOW.dates()):
        k = 0
        for name, row in PRESENCE_ROWS.items():
            if row[d]:
                out.append(CategorizedTopic(day, k, name))
                k += 1
    return out


def _bucket_tweets(window, docs_per_day=3, tokens_per_doc=5, seed=0):
    rng = random.Random(seed)
    pool = [f"term{i}" for i in range(12)]
    buckets = []
    for day in window.dates():
        tweets = []
        for j in range(docs_per_day):
            tokens = rng.choices(pool, k=tokens_per_doc)
            created = datetime.combine(day, datetime.min.time(), tzinfo=timezone.utc)
            tweets.append(Tweet(f"{day}-{j}", created, " ".join(tokens), tokens))
        buckets.append(tweets)
    return DailyBuckets(window, buckets)


class TestLoadCategoryMap:
    def _write(self, tmp_path, body, header="date,topic_id,category"):
        path = tmp_path / "map.csv"
        path.write_text(header + "\n" + body, encoding="utf-8")
        return path

    def test_basic(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,0,Victims\n2015-10-03,4,Road Damage\n")
        cmap = load_category_map(path)
        assert cmap.lookup() == {
            (date(2015, 10, 3), 0): "Victims",
            (date(2015, 10, 3), 4): "Road Damage",
        }
        assert cmap.categories == ["Victims", "Road Damage"]

    def test_blank_rows_skipped(self, tmp_path):
        path = self._write(tmp_path, "\n2015-10-03,0,Victims\n\n")
        assert len(load_category_map(path).entries) == 1

    def test_header_required(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,0,Victims\n", header="day,topic,name")
        with pytest.raises(ValidationError, match="header"):
            load_category_map(path)

    def test_header_case_insensitive(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,0,Victims\n", header="Date,Topic_ID,Category")
        assert len(load_category_map(path).entries) == 1

    def test_bad_date(self, tmp_path):
        path = self._write(tmp_path, "10/03/2015,0,Victims\n")
        with pytest.raises(ValidationError, match=r":2: bad date"):
            load_category_map(path)

    def test_bad_topic_id(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,x,Victims\n")
        with pytest.raises(ValidationError, match=r":2: bad topic id"):
            load_category_map(path)

    def test_negative_topic_id(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,-1,Victims\n")
        with pytest.raises(ValidationError):
            load_category_map(path)

    def test_empty_category(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,0,\n")
        with pytest.raises(ValidationError):
            load_category_map(path)

    def test_duplicate_cell(self, tmp_path):
        path = self._write(tmp_path, "2015-10-03,0,Victims\n2015-10-03,0,Animal\n")
        with pytest.raises(ValidationError, match="twice"):
            load_category_map(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError):
            load_category_map(tmp_path / "absent.csv")

    def test_categories_keep_first_appearance_order(self):
        entries = [
            (date(2015, 10, 3), 1, "Zeta"),
            (date(2015, 10, 3), 0, "Alpha"),
            (date(2015, 10, 4), 2, "Zeta"),
        ]
        assert CategoryMap(entries).categories == ["Zeta", "Alpha"]


class TestRunDaily:
    CFG = SamplerConfig(k=2, alpha=0.5, beta=0.1, iterations=5, seed=100)

    def test_one_model_per_day_with_offset_seeds(self):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 6))
        fitted = run_daily(_bucket_tweets(window), self.CFG)
        assert [d for d, _ in fitted] == window.dates()
        assert [m.config.seed for _, m in fitted] == [100, 101, 102, 103]

    def test_single_day_window(self):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 3))
        fitted = run_daily(_bucket_tweets(window), self.CFG)
        assert len(fitted) == 1
        assert fitted[0][1].config.seed == 100

    def test_empty_day_names_the_day(self):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 5))
        buckets = _bucket_tweets(window)
        buckets.buckets[1] = []
        with pytest.raises(EmptyCorpusError, match="2015-10-04"):
            run_daily(buckets, self.CFG)

    def test_all_stopword_day_names_the_day(self):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 4))
        buckets = _bucket_tweets(window)
        day = datetime(2015, 10, 4, tzinfo=timezone.utc)
        buckets.buckets[1] = [Tweet("only", day, "the", ["the"])]
        with pytest.raises(EmptyCorpusError, match="2015-10-04"):
            run_daily(buckets, self.CFG, stopwords=frozenset({"the"}))

    def test_dumps_written_per_day(self, tmp_path):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 4))
        run_daily(_bucket_tweets(window), self.CFG, out_dir=tmp_path)
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == [
            "model_2015-10-03.txt",
            "model_2015-10-04.txt",
            "topics_2015-10-03.txt",
            "topics_2015-10-04.txt",
        ]

    def test_parallel_matches_serial_byte_for_byte(self, tmp_path):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 6))
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        run_daily(_bucket_tweets(window), self.CFG, out_dir=serial, jobs=1)
        run_daily(_bucket_tweets(window), self.CFG, out_dir=parallel, jobs=2)
        for p in sorted(serial.iterdir()):
            assert p.read_bytes() == (parallel / p.name).read_bytes()


class TestApplyCategoryMap:
    def _models(self, days=2, k=3):
        window = DateWindow(date(2015, 10, 3), date(2015, 10, 3) + timedelta(days=days - 1))
        cfg = SamplerConfig(k=k, alpha=0.5, beta=0.1, iterations=2, seed=0)
        return run_daily(_bucket_tweets(window, tokens_per_doc=6), cfg)

    def test_annotates_every_topic(self):
        models = self._models(days=2, k=3)
        cmap = CategoryMap([(date(2015, 10, 3), 0, "Victims")])
        topics = apply_category_map(models, cmap)
        assert len(topics) == 6
        by_key = {(t.day, t.topic): t.category for t in topics}
        assert by_key[(date(2015, 10, 3), 0)] == "Victims"
        assert by_key[(date(2015, 10, 3), 1)] is None
        assert by_key[(date(2015, 10, 4), 0)] is None

    def test_empty_map_leaves_all_unmapped(self):
        topics = apply_category_map(self._models(), CategoryMap([]))
        assert all(t.category is None for t in topics)

    def test_two_topics_one_category(self):
        cmap = CategoryMap(
            [(date(2015, 10, 3), 0, "Victims"), (date(2015, 10, 3), 1, "Victims")]
        )
        topics = apply_category_map(self._models(), cmap)
        assert sum(1 for t in topics if t.category == "Victims") == 2

    def test_unknown_day_rejected(self):
        cmap = CategoryMap([(date(2015, 11, 1), 0, "Victims")])
        with pytest.raises(DanglingEntryError, match="2015-11-01"):
            apply_category_map(self._models(), cmap)

    def test_out_of_range_topic_rejected(self):
        cmap = CategoryMap([(date(2015, 10, 3), 3, "Victims")])
        with pytest.raises(DanglingEntryError, match="topic 3"):
            apply_category_map(self._models(days=2, k=3), cmap)


class TestPresenceMatrix:
    def test_fixture_encodes_exactly(self):
        matrix = presence_matrix(presence_topics(), WINDOW)
        assert matrix.categories == sorted(PRESENCE_ROWS)
        for i, name in enumerate(matrix.categories):
            assert matrix.cells[i].tolist() == [bool(v) for v in PRESENCE_ROWS[name]]
        assert matrix.total_true == 65

    def test_repeat_topics_same_cell(self):
        day = date(2015, 10, 3)
        topics = [
            CategorizedTopic(day, 0, "Victims"),
            CategorizedTopic(day, 1, "Victims"),
            CategorizedTopic(day, 2, "Victims"),
        ]
        matrix = presence_matrix(topics, WINDOW)
        assert matrix.total_true == 1

    def test_entry_order_irrelevant(self):
        topics = presence_topics()
        shuffled = topics[:]
        random.Random(1).shuffle(shuffled)
        a = presence_matrix(topics, WINDOW)
        b = presence_matrix(shuffled, WINDOW)
        assert a.categories == b.categories
        assert np.array_equal(a.cells, b.cells)

    def test_unmapped_dropped_by_default(self):
        topics = [CategorizedTopic(date(2015, 10, 3), 0, None)]
        matrix = presence_matrix(topics, WINDOW)
        assert matrix.categories == []
        assert matrix.total_true == 0

    def test_uncategorized_row_appended_last(self):
        topics = [
            CategorizedTopic(date(2015, 10, 3), 0, "Victims"),
            CategorizedTopic(date(2015, 10, 4), 0, None),
        ]
        matrix = presence_matrix(topics, WINDOW, include_uncategorized=True)
        assert matrix.categories == ["Victims", UNCATEGORIZED]
        assert matrix.cells[1].tolist() == [False, True] + [False] * 11

    def test_uncategorized_row_present_even_when_all_mapped(self):
        topics = [CategorizedTopic(date(2015, 10, 3), 0, "Victims")]
        matrix = presence_matrix(topics, WINDOW, include_uncategorized=True)
        assert matrix.categories[-1] == UNCATEGORIZED
        assert not matrix.cells[-1].any()

    def test_day_outside_window_rejected(self):
        topics = [CategorizedTopic(date(2015, 11, 1), 0, "Victims")]
        with pytest.raises(ValidationError):
            presence_matrix(topics, WINDOW)

    def test_empty_topic_list(self):
        matrix = presence_matrix([], WINDOW)
        assert matrix.cells.shape == (0, 13)


class TestCategoryFrequencies:
    def test_fixture_shares(self):
        freqs = category_frequencies(presence_matrix(presence_topics(), WINDOW))
        assert freqs["Victims"] == pytest.approx(100.0 * 12 / 65)
        assert freqs["Damage and Costs"] == pytest.approx(100.0 * 10 / 65)
        assert freqs["Animal"] == pytest.approx(100.0 * 1 / 65)
        assert freqs["Power Loss"] == pytest.approx(100.0 * 3 / 65)

    def test_matches_brute_force(self):
        matrix = presence_matrix(presence_topics(), WINDOW)
        freqs = category_frequencies(matrix)
        for name, row in PRESENCE_ROWS.items():
            assert freqs[name] == pytest.approx(100.0 * sum(row) / 65)

    def test_sums_to_one_hundred(self):
        freqs = category_frequencies(presence_matrix(presence_topics(), WINDOW))
        assert sum(freqs.values()) == pytest.approx(100.0, abs=0.05)

    def test_even_split(self):
        day = date(2015, 10, 3)
        topics = [
            CategorizedTopic(day, 0, "A"),
            CategorizedTopic(day, 1, "B"),
        ]
        freqs = category_frequencies(presence_matrix(topics, WINDOW))
        assert freqs == {"A": pytest.approx(50.0), "B": pytest.approx(50.0)}

    def test_single_category_is_total(self):
        topics = [CategorizedTopic(date(2015, 10, 3), 0, "A")]
        freqs = category_frequencies(presence_matrix(topics, WINDOW))
        assert freqs == {"A": pytest.approx(100.0)}

    def test_no_true_cells_raises(self):
        with pytest.raises(NoDataError):
            category_frequencies(presence_matrix([], WINDOW))


class TestDiversity:
    def test_fixture_counts(self):
        matrix = presence_matrix(presence_topics(), WINDOW)
        assert diversity_per_day(matrix) == EXPECTED_DIVERSITY

    def test_fixture_range(self):
        counts = diversity_per_day(presence_matrix(presence_topics(), WINDOW))
        assert min(counts) >= 2
        assert max(counts) <= 8

    def test_empty_matrix_all_zero(self):
        assert diversity_per_day(presence_matrix([], WINDOW)) == [0] * 13


class TestWriters:
    def test_presence_csv(self, tmp_path):
        day = date(2015, 10, 3)
        topics = [CategorizedTopic(day, 0, "Victims")]
        path = tmp_path / "presence.csv"
        write_presence_csv(presence_matrix(topics, WINDOW), path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "category," + ",".join(d.isoformat() for d in WINDOW.dates())
        assert lines[1] == "Victims,1," + ",".join(["0"] * 12)

    def test_frequencies_csv(self, tmp_path):
        path = tmp_path / "freq.csv"
        write_frequencies_csv(presence_matrix(presence_topics(), WINDOW), path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "category,percentage"
        assert "Victims,18.46" in lines
        assert "Animal,1.54" in lines
        assert len(lines) == 12

    def test_diversity_csv(self, tmp_path):
        path = tmp_path / "div.csv"
        write_diversity_csv(presence_matrix(presence_topics(), WINDOW), path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "date,count"
        assert lines[1] == "2015-10-03,3"
        assert lines[-1] == "2015-10-15,2"

    def test_chart_lines(self):
        chart = diversity_chart(presence_matrix(presence_topics(), WINDOW))
        lines = chart.splitlines()
        assert lines[0] == "# distinct topic categories per day"
        assert lines[1] == "2015-10-03 | ### 3"
        assert lines[6] == "2015-10-08 | ######## 8"
        assert len(lines) == 14

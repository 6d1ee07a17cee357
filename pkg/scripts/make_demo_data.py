"""Regenerate the bundled demo inputs under data/.

Deterministic: rerunning this script reproduces the same files byte for byte.
The category map is a hand-edited illustration of the labeling workflow (the
labels one would assign after reading out/models/topics_*.txt), not an output
of this script's randomness.
"""

from __future__ import annotations

import sys
from pathlib import Path

from crisislens.synth import make_corpus

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"

QUERY_TERMS = [
    "#floodsc",
    "#scflood2015",
    "#SCFloodRelief",
    "#southcarolinastrong",
    "#prayforsc",
    "#scflood",
    "#scflooding",
    "#FloodGSSCMMwithlove",
    "#floodingsc",
    "#flood",
    "flood",
]

# Illustrative hand labeling: date, topic id (< k), category.
CATEGORY_ROWS = [
    ("2015-10-03", 0, "Flooded Roads"),
    ("2015-10-03", 4, "Property Damage"),
    ("2015-10-03", 11, "Rescue Efforts"),
    ("2015-10-04", 2, "Flooded Roads"),
    ("2015-10-04", 7, "Water Supply"),
    ("2015-10-04", 19, "Victims"),
    ("2015-10-05", 1, "Property Damage"),
    ("2015-10-05", 9, "Victims"),
    ("2015-10-05", 14, "Power Outage"),
    ("2015-10-06", 3, "Water Supply"),
    ("2015-10-06", 8, "Flooded Roads"),
    ("2015-10-06", 21, "Shelter"),
    ("2015-10-07", 5, "Victims"),
    ("2015-10-07", 12, "Property Damage"),
    ("2015-10-08", 0, "Water Supply"),
    ("2015-10-08", 16, "Rescue Efforts"),
    ("2015-10-09", 6, "Flooded Roads"),
    ("2015-10-09", 10, "Victims"),
    ("2015-10-10", 2, "Shelter"),
    ("2015-10-10", 18, "Property Damage"),
    ("2015-10-11", 4, "Victims"),
    ("2015-10-11", 13, "Water Supply"),
    ("2015-10-12", 1, "Flooded Roads"),
    ("2015-10-12", 22, "Power Outage"),
    ("2015-10-13", 7, "Victims"),
    ("2015-10-13", 15, "Rescue Efforts"),
    ("2015-10-14", 3, "Property Damage"),
    ("2015-10-14", 20, "Water Supply"),
    ("2015-10-15", 5, "Flooded Roads"),
    ("2015-10-15", 9, "Shelter"),
]

DEMO_CFG = """\
# demo configuration for the bundled synthetic corpus
input = data/synthetic_tweets.jsonl
query = data/query.txt
start_day = 2015-10-03
end_day = 2015-10-15
seed = 42
out_dir = out
category_map = data/demo_categories.csv
# lexicon and stopwords default to the files bundled with the package;
# k = 25, iterations = 1000, alpha = 5.0/k, beta = 0.01 are the defaults
"""


def main() -> int:
    DATA.mkdir(exist_ok=True)
    planted = make_corpus(
        n=5000,
        seed=20151003,
        junk_lines=5,
        duplicates=1,
        nonmatching_frac=0.02,
        outside_frac=0.01,
    )
    if min(planted.negative_per_day) == 0:
        print("generated corpus has an empty negative day; pick another seed", file=sys.stderr)
        return 1
    planted.write(DATA / "synthetic_tweets.jsonl")
    (DATA / "query.txt").write_text("\n".join(QUERY_TERMS) + "\n", encoding="utf-8")
    rows = ["date,topic_id,category"]
    rows += [f"{day},{topic},{category}" for day, topic, category in CATEGORY_ROWS]
    (DATA / "demo_categories.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    (REPO / "demo.cfg").write_text(DEMO_CFG, encoding="utf-8")
    labels = {label.value: count for label, count in planted.expected_labels.items()}
    print(f"records written: {len(planted.lines)}")
    print(f"query-matching inside window: {planted.matching_in_window}")
    print(f"planted labels: {labels}")
    print(f"negative per day: {planted.negative_per_day}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Disaster-tweet situational awareness pipeline.

Four stages: filter and bucket raw tweet records by day (corpus), label each
tweet positive/neutral/negative by lexicon word count (sentiment), fit one
LDA topic model per day on the negative tweets (topicmodel), and aggregate
human-assigned topic categories into temporal reports (temporal). The cli
module wires them together behind the `crisislens` command.
"""

__version__ = "0.1.0"

from . import config, corpus, sentiment, synth, temporal, topicmodel  # noqa: F401

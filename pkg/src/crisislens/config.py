"""Pipeline configuration.

Settings come from a flat ``key = value`` file, overridden by CLI flags
(flags win). Lexicon and stopword lists default to the files bundled with the
package so the demo pipeline runs out of the box.
"""

from __future__ import annotations

import importlib.resources as resources
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Any, Callable

from .corpus import DateWindow
from .errors import ValidationError
from .topicmodel import SamplerConfig

_KNOWN_KEYS = {
    "input",
    "query",
    "start_day",
    "end_day",
    "lexicon",
    "stopwords",
    "k",
    "alpha",
    "beta",
    "iterations",
    "seed",
    "min_count",
    "out_dir",
    "strict",
    "jobs",
    "category_map",
    "include_uncategorized",
}

_TRUE = {"true", "1", "yes", "on"}
_FALSE = {"false", "0", "no", "off"}


def default_lexicon_path() -> Path:
    return Path(str(resources.files("crisislens") / "data" / "lexicon_demo.txt"))


def default_stopwords_path() -> Path:
    return Path(str(resources.files("crisislens") / "data" / "stopwords_en.txt"))


def parse_config_file(path: Path | str) -> dict[str, str]:
    """Read a flat config file: one ``key = value`` per line, ``#`` comments."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{line_no}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ValidationError(f"{path}:{line_no}: unknown config key {key!r}")
        if key in values:
            raise ValidationError(f"{path}:{line_no}: duplicate config key {key!r}")
        values[key] = value
    return values


def _to_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ValidationError(f"config key {key!r}: {value!r} is not an integer") from exc


def _to_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ValidationError(f"config key {key!r}: {value!r} is not a number") from exc


def _to_bool(value: str, key: str) -> bool:
    folded = value.casefold()
    if folded in _TRUE:
        return True
    if folded in _FALSE:
        return False
    raise ValidationError(f"config key {key!r}: {value!r} is not a boolean")


def _to_date(value: str, key: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise ValidationError(f"config key {key!r}: {value!r} is not YYYY-MM-DD") from exc


def _to_path(value: str, key: str) -> Path:
    return Path(value)


@dataclass
class PipelineConfig:
    """Resolved settings shared by all pipeline stages."""

    input: Path | None = None
    query: Path | None = None
    window: DateWindow | None = None
    lexicon: Path | None = None
    stopwords: Path | None = None
    k: int = 25
    alpha: float | None = None  # None means the Mallet-style 5.0/k
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0
    min_count: int = 1
    out_dir: Path = Path("out")
    strict: bool = False
    jobs: int = 1
    category_map: Path | None = None
    include_uncategorized: bool = False

    def __post_init__(self):
        if self.lexicon is None:
            self.lexicon = default_lexicon_path()
        if self.stopwords is None:
            self.stopwords = default_stopwords_path()
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if self.iterations < 1:
            raise ValidationError(f"iterations must be >= 1, got {self.iterations}")
        if self.min_count < 1:
            raise ValidationError(f"min_count must be >= 1, got {self.min_count}")
        if self.jobs < 1:
            raise ValidationError(f"jobs must be >= 1, got {self.jobs}")

    def sampler_config(self) -> SamplerConfig:
        alpha = self.alpha if self.alpha is not None else 5.0 / self.k
        return SamplerConfig(
            k=self.k, alpha=alpha, beta=self.beta,
            iterations=self.iterations, seed=self.seed,
        )


_CONVERTERS: dict[str, Callable[[str, str], Any]] = {
    "input": _to_path,
    "query": _to_path,
    "start_day": _to_date,
    "end_day": _to_date,
    "lexicon": _to_path,
    "stopwords": _to_path,
    "k": _to_int,
    "alpha": _to_float,
    "beta": _to_float,
    "iterations": _to_int,
    "seed": _to_int,
    "min_count": _to_int,
    "out_dir": _to_path,
    "strict": _to_bool,
    "jobs": _to_int,
    "category_map": _to_path,
    "include_uncategorized": _to_bool,
}


def build_config(
    file_values: dict[str, str] | None = None,
    overrides: dict[str, Any] | None = None,
) -> PipelineConfig:
    """Merge config-file values with typed CLI overrides (overrides win)."""
    file_values = file_values or {}
    overrides = overrides or {}
    resolved: dict[str, Any] = {}
    for key, raw in file_values.items():
        resolved[key] = _CONVERTERS[key](raw, key)
    for key, value in overrides.items():
        if value is not None:
            if key not in _KNOWN_KEYS:
                raise ValidationError(f"unknown config override {key!r}")
            resolved[key] = value
    start = resolved.pop("start_day", None)
    end = resolved.pop("end_day", None)
    if (start is None) != (end is None):
        raise ValidationError("start_day and end_day must be set together")
    window = DateWindow(start, end) if start is not None else None
    return PipelineConfig(window=window, **resolved)


def require_file(path: Path | None, what: str) -> Path:
    if path is None:
        raise ValidationError(f"{what} is not configured")
    if not Path(path).is_file():
        raise ValidationError(f"{what} {path} does not exist")
    return Path(path)

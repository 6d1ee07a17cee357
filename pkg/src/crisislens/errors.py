"""Shared exception types; the CLI maps them onto process exit codes."""


class ValidationError(Exception):
    """Bad configuration, malformed input, or violated precondition (exit code 2)."""


class EmptyResultError(Exception):
    """A stage legitimately produced nothing to work with (exit code 3)."""


class RecordError(ValidationError):
    """One input record could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class LexiconError(ValidationError):
    """Lexicon file violates the sectioned-entry format or its invariants."""


class EmptyCorpusError(EmptyResultError):
    """Stopword/frequency filtering removed every document."""


class OverparameterizedError(ValidationError):
    """Requested more topics than there are tokens."""


class DanglingEntryError(ValidationError):
    """Category-map entry references a (day, topic) that no model has."""


class NoDataError(EmptyResultError):
    """An aggregation was asked for but there is nothing to aggregate."""

"""Exception types shared across the package."""


class CushleporError(Exception):
    """Base class for all errors raised by this package."""


class DataError(CushleporError, ValueError):
    """Input data is invalid or insufficient (maps to exit code 2)."""


class DegenerateInputError(DataError):
    """A hypothesis or reference is empty (or has zero length) where a
    non-empty side is required."""


class IngestError(DataError):
    """Corpus file failed validation; carries per-line diagnostics."""

    def __init__(self, message: str, problems: list[str] | None = None):
        super().__init__(message)
        self.problems = problems or []


class UndefinedCorrelationError(DataError):
    """Pearson correlation is undefined (zero variance input)."""


class PresetLookupError(CushleporError, KeyError):
    """Requested preset does not exist; the message lists what does."""

    def __str__(self) -> str:
        # KeyError would repr() the message and mangle newlines
        return self.args[0] if self.args else ""

"""Exception types shared across the package.

Plain ValueError is used for ordinary domain/contract violations (negative
time, wrong window length, ...); the classes here mark conditions callers
are expected to branch on.
"""


class MissingMetricError(ValueError):
    """The requested metric is absent from the sample or trace."""


class AlignmentError(ValueError):
    """Traces do not share a usable common timeline."""


class SchemaError(ValueError):
    """A trace file does not match the expected schema (bad header)."""


class ConfigError(ValueError):
    """A scenario configuration is malformed or self-inconsistent."""


class ParseError(ValueError):
    """A row-level parse failure; carries the 1-based row number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class FailureRateClampedWarning(UserWarning):
    """Raised via warnings.warn when a cumulative failure rate is clamped to 1."""

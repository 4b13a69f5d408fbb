"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: configuration/usage/format problems
exit 2, numeric failures exit 3, failed checks exit 1 (see cli.main).
"""


class VidnavError(Exception):
    """Base class for all package errors."""


class ConfigurationError(VidnavError):
    """A config value violates its declared invariant."""


class UsageError(VidnavError):
    """An operation was called outside its precondition."""


class ShapeError(UsageError):
    """An input shape does not match the declared signature."""

    def __init__(self, what: str, expected, actual):
        super().__init__(f"{what}: expected shape {tuple(expected)}, got {tuple(actual)}")
        self.expected = tuple(expected)
        self.actual = tuple(actual)


class FormatError(VidnavError):
    """A serialized artifact is malformed; carries the byte offset when known."""

    def __init__(self, message: str, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class IngestionError(FormatError):
    """A frame directory could not be ingested; names the offending file."""


class NumericError(VidnavError):
    """A loss or gradient became non-finite."""

"""Exception hierarchy shared across the toolkit.

Schema and usage problems (bad CSV header, unknown enum value, bad flag
combinations) are distinct from runtime failures (network, backend down)
so the CLI can map them to different exit codes.
"""


class BugTriageError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(BugTriageError):
    """CSV header does not match the documented schema."""

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


class RowParseError(BugTriageError):
    """A data row could not be parsed; carries the 1-based row number."""

    def __init__(self, message: str, row: int):
        super().__init__(f"row {row}: {message}")
        self.row = row


class DatasetError(BugTriageError):
    """Dataset-level violation raised by strict loaders (e.g. duplicate id)."""


class InfeasibleStratificationError(BugTriageError):
    """A class has fewer members than the requested fold count."""


class TrackerError(BugTriageError):
    """Base for bug-tracker client failures; `retryable` hints at retry policy."""

    retryable = False


class TrackerNetworkError(TrackerError):
    retryable = True


class TrackerHttpError(TrackerError):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status
        self.retryable = status >= 500


class TrackerPayloadError(TrackerError):
    retryable = False


class BackendUnavailableError(BugTriageError):
    """Embedding backend could not be reached; names the endpoint."""

    def __init__(self, endpoint: str, reason: str):
        super().__init__(f"embedding backend unreachable at {endpoint}: {reason}")
        self.endpoint = endpoint


class ProtocolError(BugTriageError):
    """Embedding sidecar sent a malformed or inconsistent response."""


class ModelFormatError(BugTriageError):
    """Saved model file is missing the format tag or has the wrong version."""

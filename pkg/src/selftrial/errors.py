"""Error types shared across the engine.

Every engine failure carries a stable machine-readable code so the CLI and
the HTTP service can surface identical error names.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all engine errors.

    Attributes:
        code: stable error name, e.g. "OUT_OF_RANGE".
        message: human-readable explanation.
        path: optional document path for import/validation errors.
    """

    def __init__(self, code: str, message: str, path: str | None = None):
        super().__init__(f"{code}: {message}" if path is None else f"{code} at {path}: {message}")
        self.code = code
        self.message = message
        self.path = path


class ValidationError(DomainError):
    """A measurement value was rejected (OUT_OF_RANGE, BAD_INDEX, TYPE_MISMATCH)."""


class ParseError(DomainError):
    """An interchange document could not be imported.

    Codes: MALFORMED, SCHEMA_VERSION_UNSUPPORTED, INVARIANT_VIOLATION.
    """


class DraftInvalid(DomainError):
    """A draft failed validation; carries the violation list."""

    def __init__(self, violations: list[str]):
        super().__init__("DRAFT_INVALID", "draft has violations: " + ", ".join(violations))
        self.violations = list(violations)


class StoreError(DomainError):
    """Persistence failure (IO_ERROR, CORRUPT_STORE)."""

"""Error types with stable, machine-readable codes.

Every failure the engine can signal carries a short code string (the same
codes surface in CLI diagnostics and in HTTP error bodies).
"""

from __future__ import annotations


class EngineError(Exception):
    """Base error; ``code`` is stable across releases, ``message`` is free text."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class ParseError(EngineError):
    """Input is not well-formed JSON/UTF-8; position-bearing where possible."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__("PARSE_ERROR", message)
        self.line = line
        self.column = column


class SchemaError(EngineError):
    """A document field is missing or mistyped; ``path`` is a JSON path like ``$.module_id``."""

    def __init__(self, message: str, path: str):
        super().__init__("SCHEMA_ERROR", f"{path}: {message}")
        self.path = path


class VersionError(EngineError):
    def __init__(self, message: str):
        super().__init__("VERSION_ERROR", message)


class EvidenceOrderWarning(UserWarning):
    """Evidence array was stored out of canonical order and was re-sorted on load."""


class SchemaVersionWarning(UserWarning):
    """Document declares an unknown minor schema version."""

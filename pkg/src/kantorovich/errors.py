"""Exception types shared by the library and the command line front end."""

from __future__ import annotations


class KantorovichError(Exception):
    """Base error. Carries a machine-readable ``code`` for CLI reporting."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class ValidationError(KantorovichError):
    """An input value violates a documented invariant."""


class ParseError(KantorovichError):
    """An input file or literal could not be decoded."""

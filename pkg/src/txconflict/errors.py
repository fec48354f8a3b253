"""Exception types raised by the analyzer pipeline."""

from __future__ import annotations


class AnalyzerError(Exception):
    """Base class for every error the analyzer raises on bad input."""


class SourceError(AnalyzerError):
    """An error anchored to a position in the source text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class LexError(SourceError):
    """Illegal character or unterminated string/comment."""


class ParseError(SourceError):
    """Grammar violation within the supported language subset."""


class UnsupportedConstruct(SourceError):
    """Legal Solidity outside the supported subset; the file is skipped."""

    def __init__(self, construct: str, line: int, column: int):
        super().__init__(f"unsupported construct: {construct}", line, column)
        self.construct = construct

"""Static detection of transaction conflicts between Solidity contract functions."""

from .access import (
    AccessMaps,
    AccessRecord,
    FunctionIndex,
    build_access_maps,
    extract_calls,
    extract_reads,
    extract_writes,
)
from .cli import RunConfig, run
from .engine import (
    AnalysisResult,
    Conflict,
    ConflictMatrix,
    DetectionState,
    assign_severity,
    conflict_percentage,
    detect_all,
    detect_fcc,
    detect_rwc,
    detect_wwc,
    is_read_only,
    recursive_access,
    should_skip,
)
from .errors import AnalyzerError, LexError, ParseError, SourceError, UnsupportedConstruct
from .lexer import Token, TokenKind, tokenize
from .nodes import Contract, Event, Function, Parameter, SourceUnit, StateVariable
from .parser import parse
from .reporting import AggregateStats, aggregate, render_html, write_csv

__version__ = "0.1.0"

__all__ = [
    "AccessMaps",
    "AccessRecord",
    "AggregateStats",
    "AnalysisResult",
    "AnalyzerError",
    "Conflict",
    "ConflictMatrix",
    "Contract",
    "DetectionState",
    "Event",
    "Function",
    "FunctionIndex",
    "LexError",
    "Parameter",
    "ParseError",
    "RunConfig",
    "SourceError",
    "SourceUnit",
    "StateVariable",
    "Token",
    "TokenKind",
    "UnsupportedConstruct",
    "aggregate",
    "assign_severity",
    "build_access_maps",
    "conflict_percentage",
    "detect_all",
    "detect_fcc",
    "detect_rwc",
    "detect_wwc",
    "extract_calls",
    "extract_reads",
    "extract_writes",
    "is_read_only",
    "parse",
    "recursive_access",
    "render_html",
    "run",
    "should_skip",
    "tokenize",
    "write_csv",
]

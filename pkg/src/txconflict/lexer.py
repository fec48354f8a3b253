"""Tokenizer for the supported Solidity subset.

Comments and whitespace are dropped; every token keeps the line/column where
it started so later stages can report positions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import LexError


class TokenKind(Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number"  # literal (decimal or hex)
    STRING = "string"  # literal, quotes stripped
    OPERATOR = "operator"
    PUNCT = "punctuation"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int

    def __repr__(self) -> str:  # compact form for assertion diffs
        return f"{self.kind.value}:{self.text}@{self.line}:{self.column}"


KEYWORDS = frozenset({
    "abstract", "assembly", "break", "calldata", "catch", "constant",
    "constructor", "continue", "contract", "delete", "do", "else", "emit",
    "enum", "event", "external", "fallback", "false", "for", "function",
    "if", "immutable", "import", "indexed", "interface", "internal", "is",
    "library", "mapping", "memory", "modifier", "new", "override", "payable",
    "pragma", "private", "public", "pure", "receive", "return", "returns",
    "storage", "struct", "true", "try", "type", "unchecked", "using",
    "view", "virtual", "while",
})

# Elementary type names are classified as keywords as well (uint256, bytes32, ...).
_TYPE_KEYWORD_RE = re.compile(
    r"^(?:u?int(?:\d+)?|bytes(?:\d+)?|address|bool|string|u?fixed(?:\d+x\d+)?)$"
)

_THREE_CHAR_OPS = ("<<=", ">>=")
_TWO_CHAR_OPS = (
    "++", "--", "**", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "=>",
)
_ONE_CHAR_OPS = frozenset("+-*/%&|^~<>!=?:")
_PUNCT = frozenset("(){}[];,.")


def is_type_keyword(text: str) -> bool:
    """True for elementary Solidity type names (usable as cast callees)."""
    return bool(_TYPE_KEYWORD_RE.match(text))


def tokenize(source: str) -> list[Token]:
    """Turn source text into a token list ending with an EOF token.

    Raises LexError for illegal characters and unterminated strings or
    block comments.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(source)

    def advance(count: int = 1) -> None:
        nonlocal pos, line, col
        for _ in range(count):
            if pos < n and source[pos] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1

    while pos < n:
        ch = source[pos]

        if ch in " \t\r\n":
            advance()
            continue

        # Line comment.
        if source.startswith("//", pos):
            while pos < n and source[pos] != "\n":
                advance()
            continue

        # Block comment.
        if source.startswith("/*", pos):
            start_line, start_col = line, col
            advance(2)
            while pos < n and not source.startswith("*/", pos):
                advance()
            if pos >= n:
                raise LexError("unterminated block comment", start_line, start_col)
            advance(2)
            continue

        start_line, start_col = line, col

        # String literal (single line, either quote style).
        if ch in "\"'":
            quote = ch
            advance()
            chars: list[str] = []
            while True:
                if pos >= n or source[pos] == "\n":
                    raise LexError("unterminated string literal", start_line, start_col)
                if source[pos] == "\\" and pos + 1 < n:
                    chars.append(source[pos : pos + 2])
                    advance(2)
                    continue
                if source[pos] == quote:
                    advance()
                    break
                chars.append(source[pos])
                advance()
            tokens.append(Token(TokenKind.STRING, "".join(chars), start_line, start_col))
            continue

        # Number literal (decimal or 0x hex, underscores allowed).
        if ch.isdigit():
            text = []
            if source.startswith(("0x", "0X"), pos):
                text.append(source[pos : pos + 2])
                advance(2)
                while pos < n and (source[pos] in "0123456789abcdefABCDEF_"):
                    if source[pos] != "_":
                        text.append(source[pos])
                    advance()
            else:
                while pos < n and (source[pos].isdigit() or source[pos] == "_"):
                    if source[pos] != "_":
                        text.append(source[pos])
                    advance()
                if pos < n and source[pos] == "." and pos + 1 < n and source[pos + 1].isdigit():
                    text.append(".")
                    advance()
                    while pos < n and source[pos].isdigit():
                        text.append(source[pos])
                        advance()
                if pos < n and source[pos] in "eE" and pos + 1 < n and (
                    source[pos + 1].isdigit() or source[pos + 1] in "+-"
                ):
                    text.append(source[pos])
                    advance()
                    if pos < n and source[pos] in "+-":
                        text.append(source[pos])
                        advance()
                    while pos < n and source[pos].isdigit():
                        text.append(source[pos])
                        advance()
            tokens.append(Token(TokenKind.NUMBER, "".join(text), start_line, start_col))
            continue

        # Identifier or keyword.
        if ch.isalpha() or ch == "_" or ch == "$":
            chars = []
            while pos < n and (source[pos].isalnum() or source[pos] in "_$"):
                chars.append(source[pos])
                advance()
            word = "".join(chars)
            if word in KEYWORDS or is_type_keyword(word):
                kind = TokenKind.KEYWORD
            else:
                kind = TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, start_line, start_col))
            continue

        three = source[pos : pos + 3]
        if three in _THREE_CHAR_OPS:
            advance(3)
            tokens.append(Token(TokenKind.OPERATOR, three, start_line, start_col))
            continue

        two = source[pos : pos + 2]
        if two in _TWO_CHAR_OPS:
            advance(2)
            tokens.append(Token(TokenKind.OPERATOR, two, start_line, start_col))
            continue

        if ch in _ONE_CHAR_OPS:
            advance()
            tokens.append(Token(TokenKind.OPERATOR, ch, start_line, start_col))
            continue

        if ch in _PUNCT:
            advance()
            tokens.append(Token(TokenKind.PUNCT, ch, start_line, start_col))
            continue

        raise LexError(f"illegal character {ch!r}", start_line, start_col)

    tokens.append(Token(TokenKind.EOF, "", line, col))
    return tokens

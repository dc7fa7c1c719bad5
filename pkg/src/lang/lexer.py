#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Tokenizer for module source text.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from src.errors import LexError

logger = logging.getLogger('ModLP.Frontend')

KEYWORDS = frozenset({
    "new", "fun", "no", "is", "count", "conforms", "requires", "ensures", "any",
    "domain", "model", "transform", "system", "of", "includes", "extends", "returns",
})

# Keywords that may follow a `.` inside a qualified name (`in.conforms`).
NAME_KEYWORDS = frozenset({"conforms", "requires", "ensures"})

# Longest first.
PUNCTUATION = (
    "::=", "::", ":-", "!=", "<=", ">=", "->",
    ":", ".", ",", ";", "(", ")", "{", "}", "|", "+", "-", "*", "=", "<", ">",
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*")
_DIGITS = re.compile(r"[0-9]+")
_ESCAPES = {'"': '"', '\\': '\\', 'n': '\n', 't': '\t'}


class TokenKind(Enum):
    IDENT = "identifier"
    KEYWORD = "keyword"
    INT = "integer"
    STRING = "string"
    PUNCT = "punctuation"
    WILDCARD = "wildcard"
    EOF = "end of input"


@dataclass(frozen=True)
class Span:
    """Location of a token or construct; never part of structural equality."""

    line: int
    col: int
    length: int = 0
    offset: int = 0

    @property
    def end(self) -> int:
        return self.offset + self.length


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span = field(compare=False)
    value: object = None

    def is_punct(self, *texts: str) -> bool:
        return self.kind is TokenKind.PUNCT and self.text in texts

    def is_keyword(self, *words: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.text in words

    def __str__(self):
        return "end of input" if self.kind is TokenKind.EOF else repr(self.text)


_VALUE_KINDS = (TokenKind.IDENT, TokenKind.INT, TokenKind.STRING, TokenKind.WILDCARD)


def _ends_value(tok: Optional[Token]) -> bool:
    if tok is None:
        return False
    return tok.kind in _VALUE_KINDS or tok.is_punct(")", "}")


def tokenize(text: str, path: str = "<input>") -> List[Token]:
    """Split source text into tokens.

    Args:
        text (str): Source text.
        path (str, optional): Used in diagnostics. Defaults to "<input>".

    Returns:
        list: Tokens followed by a single EOF token.

    Raises:
        LexError: On an unterminated string or an illegal character.
    """
    tokens: List[Token] = []
    i, line, line_start = 0, 1, 0
    n = len(text)

    def span(start, length):
        return Span(line, start - line_start + 1, length, start)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if ch.isspace():
            i += 1
            continue
        if text.startswith("//", i):
            end = text.find("\n", i)
            i = n if end < 0 else end
            continue
        if ch == '"':
            start = i
            i += 1
            chars = []
            while True:
                if i >= n or text[i] == "\n":
                    raise LexError("unterminated string literal", path, line, start - line_start + 1)
                c = text[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\" and i + 1 < n and text[i + 1] in _ESCAPES:
                    chars.append(_ESCAPES[text[i + 1]])
                    i += 2
                    continue
                chars.append(c)
                i += 1
            tokens.append(Token(TokenKind.STRING, text[start:i], span(start, i - start), "".join(chars)))
            continue
        digits = _DIGITS.match(text, i)
        negative = (ch == "-" and _DIGITS.match(text, i + 1) is not None
                    and not _ends_value(tokens[-1] if tokens else None))
        if digits or negative:
            start = i
            m = _DIGITS.match(text, i + 1 if negative else i)
            i = m.end()
            literal = text[start:i]
            tokens.append(Token(TokenKind.INT, literal, span(start, i - start), int(literal)))
            continue
        ident = _IDENT.match(text, i)
        if ident:
            word = ident.group(0)
            if word == "_":
                kind = TokenKind.WILDCARD
            elif word in KEYWORDS:
                kind = TokenKind.KEYWORD
            else:
                kind = TokenKind.IDENT
            tokens.append(Token(kind, word, span(i, len(word))))
            i = ident.end()
            continue
        for punct in PUNCTUATION:
            if text.startswith(punct, i):
                tokens.append(Token(TokenKind.PUNCT, punct, span(i, len(punct))))
                i += len(punct)
                break
        else:
            raise LexError(f"illegal character {ch!r}", path, line, i - line_start + 1)

    tokens.append(Token(TokenKind.EOF, "", span(n, 0)))
    logger.debug(f"{path}: {len(tokens) - 1} tokens")
    return tokens

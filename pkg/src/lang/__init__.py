"""
ModLP - Frontend: tokenizer, parser and printer.
"""

from src.lang.lexer import Span, Token, TokenKind, tokenize
from src.lang.parser import parse_goal, parse_source, parse_unit
from src.lang.printer import format_unit

__all__ = ["Span", "Token", "TokenKind", "tokenize", "parse_goal", "parse_source", "parse_unit", "format_unit"]

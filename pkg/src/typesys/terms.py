#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - First-order terms over declared constructors and built-in constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator, Tuple, Union

from src.symtab.names import QualName


@dataclass(frozen=True)
class IntConst:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class StrConst:
    value: str

    def __str__(self):
        return quote_string(self.value)


@dataclass(frozen=True)
class UserConst:
    """A user-introduced constant: new-kind (`NOP`), derived (`D.conforms`) or symbolic."""

    name: QualName

    def __str__(self):
        return str(self.name)


@dataclass(frozen=True)
class Apply:
    ctor: QualName
    args: Tuple["Term", ...]

    def __str__(self):
        return f"{self.ctor}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Wildcard:
    def __str__(self):
        return "_"


@dataclass(frozen=True)
class Accessor:
    """`x.field` (or `x.f.g`); `indices` is filled in once the field is resolved."""

    base: Var
    path: Tuple[str, ...]
    indices: Tuple[int, ...] = ()

    def __str__(self):
        return ".".join((self.base.name,) + self.path)


Term = Union[IntConst, StrConst, UserConst, Apply, Var, Wildcard, Accessor]
GroundTerm = Union[IntConst, StrConst, UserConst, Apply]

TRUE = UserConst(QualName((), "TRUE"))
FALSE = UserConst(QualName((), "FALSE"))


class Order(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def quote_string(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def is_ground(term: Any) -> bool:
    if isinstance(term, (IntConst, StrConst, UserConst)):
        return True
    if isinstance(term, Apply):
        return all(is_ground(a) for a in term.args)
    return False


def variables(term: Any) -> Iterator[str]:
    """Yield variable names in left-to-right order (with repeats)."""
    if isinstance(term, Var):
        yield term.name
    elif isinstance(term, Accessor):
        yield term.base.name
    elif isinstance(term, Apply):
        for arg in term.args:
            yield from variables(arg)


def term_key(term: GroundTerm) -> tuple:
    """Sort key realising the total order: integers < strings < user constants < applications."""
    if isinstance(term, IntConst):
        return (0, term.value)
    if isinstance(term, StrConst):
        return (1, term.value)
    if isinstance(term, UserConst):
        return (2, str(term.name))
    if isinstance(term, Apply):
        return (3, str(term.ctor), tuple(term_key(a) for a in term.args))
    raise TypeError(f"term_order is defined on ground terms only, got {term}")


def term_order(a: GroundTerm, b: GroundTerm) -> Order:
    """Compare two ground terms.

    Args:
        a (GroundTerm): Left operand.
        b (GroundTerm): Right operand.

    Returns:
        Order: LESS, EQUAL or GREATER.
    """
    ka, kb = term_key(a), term_key(b)
    if ka < kb:
        return Order.LESS
    if ka > kb:
        return Order.GREATER
    return Order.EQUAL


def sorted_terms(terms) -> list:
    return sorted(terms, key=term_key)

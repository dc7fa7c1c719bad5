#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Qualified symbols and qualifier embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

Qualifier = Tuple[str, ...]

EMPTY: Qualifier = ()


@dataclass(frozen=True, order=True)
class QualName:
    """A base symbol under a flat sequence of qualifiers, e.g. `in.Left.Trans`."""

    qualifiers: Qualifier
    base: str

    @classmethod
    def of(cls, *parts: str) -> "QualName":
        if not parts:
            raise ValueError("a qualified name needs at least a base symbol")
        return cls(tuple(parts[:-1]), parts[-1])

    @classmethod
    def parse(cls, text: str) -> "QualName":
        """Split a dotted name. Primes are part of atomic symbols (`s'`)."""
        return cls.of(*text.split("."))

    @property
    def parts(self) -> Qualifier:
        return self.qualifiers + (self.base,)

    @property
    def is_qualified(self) -> bool:
        return bool(self.qualifiers)

    def starts_with(self, prefix: Sequence[str]) -> bool:
        prefix = tuple(prefix)
        return self.qualifiers[: len(prefix)] == prefix

    def prefixed(self, prefix: Sequence[str]) -> "QualName":
        return QualName(tuple(prefix) + self.qualifiers, self.base)

    def replace_prefix(self, old: Sequence[str], new: Sequence[str]) -> "QualName":
        old = tuple(old)
        if not self.starts_with(old):
            raise ValueError(f"{self} does not start with {'.'.join(old) or 'ε'}")
        return QualName(tuple(new) + self.qualifiers[len(old):], self.base)

    def __str__(self):
        return ".".join(self.parts)


def embeds(p: Sequence[str], q: Sequence[str]) -> bool:
    """Decide `p ⊑ q`: p is a (not necessarily contiguous) subsequence of q.

    A greedy left-to-right scan is complete for subsequence embedding.

    Args:
        p (Sequence[str]): The embedded qualifier sequence.
        q (Sequence[str]): The host qualifier sequence.

    Returns:
        bool: True iff a monotone index map exists.
    """
    if not p:
        return True
    i = 0
    for symbol in q:
        if symbol == p[i]:
            i += 1
            if i == len(p):
                return True
    return False


def format_qualifier(q: Iterable[str]) -> str:
    return ".".join(q)

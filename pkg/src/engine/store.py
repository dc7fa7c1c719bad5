#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Fact store.

Ground facts bucketed by outer constructor (or constant). Buckets keep
insertion order so evaluation is deterministic; listings are sorted by term
order.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, Iterator, List, Optional

import pandas as pd

from src.config import DEFAULT_MAX_FACTS
from src.errors import ResourceLimitError
from src.modsys.ir import head_key
from src.typesys.terms import Apply, GroundTerm, sorted_terms

logger = logging.getLogger('ModLP.Engine')


class FactStore:
    """A set of ground terms with per-symbol buckets.

    Args:
        facts (iterable, optional): Initial facts.
        max_facts (int, optional): Adding a fact beyond this raises ResourceLimitError.
    """

    def __init__(self, facts: Iterable[GroundTerm] = (), max_facts: Optional[int] = DEFAULT_MAX_FACTS):
        self.max_facts = max_facts
        self._buckets: Dict[object, Dict[GroundTerm, None]] = {}
        self._size = 0
        for fact in facts:
            self.add(fact)

    def add(self, fact: GroundTerm) -> bool:
        """Insert fact; returns False if it was already present."""
        bucket = self._buckets.setdefault(head_key(fact), {})
        if fact in bucket:
            return False
        if self.max_facts is not None and self._size >= self.max_facts:
            raise ResourceLimitError(f"fact store exceeded the cap of {self.max_facts} facts "
                                     f"(raise it with --max-facts or MODLP_MAX_FACTS)")
        bucket[fact] = None
        self._size += 1
        return True

    def update(self, facts: Iterable[GroundTerm]) -> List[GroundTerm]:
        """Add facts; returns the ones that were new, in order."""
        return [f for f in facts if self.add(f)]

    def bucket(self, key) -> Iterable[GroundTerm]:
        return self._buckets.get(key, {}).keys()

    def keys(self) -> List[object]:
        return [k for k, b in self._buckets.items() if b]

    def __contains__(self, fact) -> bool:
        return fact in self._buckets.get(head_key(fact), ())

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[GroundTerm]:
        for bucket in self._buckets.values():
            yield from bucket

    def __eq__(self, other):
        return isinstance(other, FactStore) and set(self) == set(other)

    def __repr__(self):
        return f"FactStore({self._size} facts)"

    def sorted(self) -> List[GroundTerm]:
        return sorted_terms(self)

    def serialize(self) -> str:
        """One fact per line in model syntax, in term order."""
        return "".join(f"{fact}.\n" for fact in self.sorted())

    def to_frame(self) -> pd.DataFrame:
        """Tabulate facts as symbol / fact rows in term order."""
        rows = [{'symbol': str(head_key(f)), 'fact': str(f), 'arity': len(f.args) if isinstance(f, Apply) else 0}
                for f in self.sorted()]
        return pd.DataFrame(rows, columns=['symbol', 'fact', 'arity'])

    def counts(self) -> pd.Series:
        """Number of facts per symbol, largest first."""
        frame = self.to_frame()
        if frame.empty:
            return pd.Series(dtype='int64', name='facts')
        return frame.groupby('symbol').size().sort_values(ascending=False, kind='mergesort').rename('facts')

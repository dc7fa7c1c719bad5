#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Symbol tables.

A table maps qualified symbols to (kind, arity, denotation) triples. Tables are
immutable; composition and renaming build new ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from src.errors import CompositionError
from src.symtab.names import QualName, embeds, format_qualifier
from src.typesys.terms import Apply, GroundTerm, UserConst
from src.typesys.typeexpr import ConstSet, CtorExt, TypeExpr, UnionRef, type_equal

logger = logging.getLogger('ModLP.SymbolTable')


class SymbolKind(Enum):
    NEW = "η"
    DERIVED = "δ"
    UNION = "μ"
    VARIABLE = "ν"
    SYMBOLIC = "σ"

    @property
    def glyph(self) -> str:
        return self.value


@dataclass(frozen=True)
class Field:
    label: Optional[str]
    type: TypeExpr


@dataclass(frozen=True)
class Symbol:
    """One table entry.

    Attributes:
        name (QualName): The fully qualified symbol.
        kind (SymbolKind): η, δ, μ, ν or σ.
        arity (int): Number of constructor arguments; 0 for everything else.
        denotation (TypeExpr): Terms the symbol stands for; None for variables (all terms).
        fields (tuple): Constructor argument labels and types.
        functional (int): For `fun` constructors, the number of leading domain fields.
        value (GroundTerm): The evaluated term of a symbolic constant.
        hidden (bool): Internal symbols left out of default listings.
    """

    name: QualName
    kind: SymbolKind
    arity: int = 0
    denotation: Optional[TypeExpr] = None
    fields: Tuple[Field, ...] = ()
    functional: Optional[int] = None
    value: Optional[GroundTerm] = None
    hidden: bool = False

    @property
    def is_constructor(self) -> bool:
        return self.kind in (SymbolKind.NEW, SymbolKind.DERIVED) and self.arity > 0

    @property
    def is_constant(self) -> bool:
        return self.kind in (SymbolKind.NEW, SymbolKind.DERIVED) and self.arity == 0

    @property
    def keeps_name(self) -> bool:
        """Variables and new-kind constants are not affected by renaming."""
        return self.kind is SymbolKind.VARIABLE or (self.kind is SymbolKind.NEW and self.arity == 0)

    def field_index(self, label: str) -> Optional[int]:
        for i, f in enumerate(self.fields):
            if f.label == label:
                return i
        return None


def new_constructor(name: QualName, fields: Sequence[Field], derived: bool = False,
                    functional: Optional[int] = None) -> Symbol:
    kind = SymbolKind.DERIVED if derived else SymbolKind.NEW
    return Symbol(name, kind, len(fields), TypeExpr.of(CtorExt(name)), tuple(fields), functional)


def new_constant(name: QualName, derived: bool = False, hidden: bool = False) -> Symbol:
    kind = SymbolKind.DERIVED if derived else SymbolKind.NEW
    return Symbol(name, kind, 0, TypeExpr.constants(UserConst(name)), hidden=hidden)


def new_variable(name: str, hidden: bool = False) -> Symbol:
    return Symbol(QualName((), name), SymbolKind.VARIABLE, hidden=hidden)


def new_union(name: QualName, body: TypeExpr) -> Symbol:
    return Symbol(name, SymbolKind.UNION, 0, body)


def new_symbolic(name: QualName, value: GroundTerm) -> Symbol:
    estimate = TypeExpr.of(CtorExt(value.ctor)) if isinstance(value, Apply) else TypeExpr.constants(value)
    return Symbol(name, SymbolKind.SYMBOLIC, 0, estimate, value=value)


class SymbolTable:
    """An immutable partial map from qualified symbols to entries.

    Also serves as the TypeContext for the type algorithms.
    """

    def __init__(self, entries: Optional[Mapping[QualName, Symbol]] = None):
        self._entries: Dict[QualName, Symbol] = dict(entries or {})
        self._by_base: Dict[str, List[QualName]] = {}
        for name in self._entries:
            self._by_base.setdefault(name.base, []).append(name)

    @classmethod
    def of(cls, symbols: Iterable[Symbol]) -> "SymbolTable":
        return cls({s.name: s for s in symbols})

    def __contains__(self, name: QualName) -> bool:
        return name in self._entries

    def __getitem__(self, name: QualName) -> Symbol:
        return self._entries[name]

    def __iter__(self) -> Iterator[QualName]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, SymbolTable) and self._entries == other._entries

    def __repr__(self):
        return f"SymbolTable({len(self)} symbols)"

    def get(self, name: QualName) -> Optional[Symbol]:
        return self._entries.get(name)

    def named(self, base: str) -> List[QualName]:
        return list(self._by_base.get(base, ()))

    def symbols(self, include_hidden: bool = False) -> List[Symbol]:
        """Entries ordered by qualifier, then name."""
        chosen = [s for s in self._entries.values() if include_hidden or not s.hidden]
        return sorted(chosen, key=lambda s: (s.name.qualifiers, s.name.base))

    def kind_of(self, name: QualName) -> Optional[SymbolKind]:
        sym = self._entries.get(name)
        return sym.kind if sym else None

    def with_symbols(self, symbols: Iterable[Symbol]) -> "SymbolTable":
        entries = dict(self._entries)
        for s in symbols:
            entries[s.name] = s
        return SymbolTable(entries)

    # TypeContext

    def union_body(self, name: QualName) -> Optional[TypeExpr]:
        sym = self._entries.get(name)
        if sym is None or sym.kind is not SymbolKind.UNION:
            return None
        return sym.denotation

    def ctor_fields(self, name: QualName) -> Optional[Tuple[TypeExpr, ...]]:
        sym = self._entries.get(name)
        if sym is None or not sym.is_constructor:
            return None
        return tuple(f.type for f in sym.fields)

    def to_frame(self, include_hidden: bool = False) -> pd.DataFrame:
        """Tabulate the table as qualifier / name / kind / arity rows."""
        rows = [
            {
                'qualifier': format_qualifier(s.name.qualifiers),
                'name': s.name.base,
                'kind': s.kind.glyph,
                'arity': s.arity,
            }
            for s in self.symbols(include_hidden)
        ]
        frame = pd.DataFrame(rows, columns=['qualifier', 'name', 'kind', 'arity'])
        return frame.sort_values(['qualifier', 'name'], kind='mergesort').reset_index(drop=True)


@dataclass(frozen=True)
class Conflict:
    """A symbol that ⊕ maps to bottom, with both definitions."""

    name: QualName
    left: Symbol
    right: Symbol
    reason: str = field(default="")

    def __str__(self):
        return f"{self.name}: {self.reason}"


class _PairContext:
    def __init__(self, first: SymbolTable, second: SymbolTable):
        self.first, self.second = first, second

    def union_body(self, name):
        body = self.first.union_body(name)
        return body if body is not None else self.second.union_body(name)

    def ctor_fields(self, name):
        fields = self.first.ctor_fields(name)
        return fields if fields is not None else self.second.ctor_fields(name)


def _same_type(a: Optional[TypeExpr], b: Optional[TypeExpr], ctx) -> bool:
    if a is None or b is None:
        return a is b
    if a == b:
        return True
    return type_equal(a, b, ctx)


def _disagreement(a: Symbol, b: Symbol, ctx) -> Optional[str]:
    if a.kind is not b.kind:
        return f"declared as {a.kind.glyph} and {b.kind.glyph}"
    if a.arity != b.arity:
        return f"arity {a.arity} and {b.arity}"
    if a.kind is SymbolKind.SYMBOLIC:
        return None if a.value == b.value else f"bound to {a.value} and {b.value}"
    if a.is_constructor:
        if tuple(f.label for f in a.fields) != tuple(f.label for f in b.fields):
            return "different field labels"
        if a.functional != b.functional:
            return "functional in one definition only"
        for fa, fb in zip(a.fields, b.fields):
            if not _same_type(fa.type, fb.type, ctx):
                return f"field types {fa.type} and {fb.type} differ"
        return None
    if a.kind is SymbolKind.UNION and not _same_type(a.denotation, b.denotation, ctx):
        return f"denotations {a.denotation} and {b.denotation} differ"
    return None


def table_conflicts(t1: SymbolTable, t2: SymbolTable) -> List[Conflict]:
    ctx = _PairContext(t1, t2)
    conflicts = []
    for name in t1:
        if name in t2:
            a, b = t1[name], t2[name]
            if a == b:
                continue
            reason = _disagreement(a, b, ctx)
            if reason:
                conflicts.append(Conflict(name, a, b, reason))
    return sorted(conflicts, key=lambda c: (c.name.qualifiers, c.name.base))


def compose_tables(t1: SymbolTable, t2: SymbolTable) -> SymbolTable:
    """Compose two tables with ⊕.

    Args:
        t1 (SymbolTable): Left operand.
        t2 (SymbolTable): Right operand.

    Returns:
        SymbolTable: The composed table.

    Raises:
        CompositionError: If any shared symbol has incompatible definitions; carries every conflict.
    """
    conflicts = table_conflicts(t1, t2)
    if conflicts:
        raise CompositionError(conflicts, "incompatible definitions: " + "; ".join(str(c) for c in conflicts))
    entries = dict(t1._entries)
    for name, sym in t2._entries.items():
        if name in entries:
            entries[name] = replace(entries[name], hidden=entries[name].hidden and sym.hidden)
        else:
            entries[name] = sym
    return SymbolTable(entries)


def compose_all(tables: Iterable[SymbolTable]) -> SymbolTable:
    result = SymbolTable()
    for t in tables:
        result = compose_tables(result, t)
    return result


def lookup(table: SymbolTable, root: Sequence[str], name: QualName) -> Optional[QualName]:
    """Resolve name to the unique shortest symbol that begins with root and embeds its qualifiers.

    Args:
        table (SymbolTable): Table to search.
        root (Sequence[str]): Required leading qualifiers.
        name (QualName): The possibly partially qualified symbol p.s.

    Returns:
        QualName: The resolved symbol, or None when there is no candidate or the shortest is not unique.
    """
    root = tuple(root)
    best: List[QualName] = []
    best_len = None
    for candidate in table.named(name.base):
        if not candidate.starts_with(root):
            continue
        rest = candidate.qualifiers[len(root):]
        if not embeds(name.qualifiers, rest):
            continue
        if best_len is None or len(rest) < best_len:
            best, best_len = [candidate], len(rest)
        elif len(rest) == best_len:
            best.append(candidate)
    if len(best) != 1:
        if len(best) > 1:
            logger.debug(f"lookup({format_qualifier(root) or 'ε'}, {name}) is ambiguous: {best}")
        return None
    return best[0]


def rename_name(name: QualName, prefix: Sequence[str], table: SymbolTable) -> QualName:
    """Rename one symbol of table unless it keeps its name."""
    sym = table.get(name)
    if sym is not None and sym.keeps_name:
        return name
    return name.prefixed(prefix)


def rename_type(t: Optional[TypeExpr], prefix: Sequence[str], table: SymbolTable) -> Optional[TypeExpr]:
    if t is None:
        return None
    atoms = []
    for atom in t.atoms:
        if isinstance(atom, (CtorExt, UnionRef)):
            atoms.append(type(atom)(atom.name.prefixed(prefix)))
        elif isinstance(atom, ConstSet):
            atoms.append(ConstSet(frozenset(
                UserConst(rename_name(v.name, prefix, table)) if isinstance(v, UserConst) else v
                for v in atom.values
            )))
        else:
            atoms.append(atom)
    return TypeExpr(frozenset(atoms))


def rename_ground(term: GroundTerm, prefix: Sequence[str], table: SymbolTable) -> GroundTerm:
    if isinstance(term, Apply):
        return Apply(term.ctor.prefixed(prefix), tuple(rename_ground(a, prefix, table) for a in term.args))
    if isinstance(term, UserConst):
        return UserConst(rename_name(term.name, prefix, table))
    return term


def rename_table(prefix: str, table: SymbolTable) -> SymbolTable:
    """Build x::table.

    Every entry s becomes x.s except variables and new-kind constants; denotations
    and field types follow the renaming.

    Raises:
        CompositionError: If two entries collide after renaming.
    """
    renamed: Dict[QualName, Symbol] = {}
    for sym in table.symbols(include_hidden=True):
        new_name = rename_name(sym.name, (prefix,), table)
        if sym.keeps_name:
            new_sym = sym
        else:
            new_sym = replace(
                sym,
                name=new_name,
                denotation=rename_type(sym.denotation, (prefix,), table),
                fields=tuple(Field(f.label, rename_type(f.type, (prefix,), table)) for f in sym.fields),
                value=rename_ground(sym.value, (prefix,), table) if sym.value is not None else None,
            )
        if new_name in renamed and renamed[new_name] != new_sym:
            raise CompositionError([Conflict(new_name, renamed[new_name], new_sym, "collision after renaming")])
        renamed[new_name] = new_sym
    return SymbolTable(renamed)

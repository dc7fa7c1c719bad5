#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Type expressions.

A type is a normalized union of atoms: constructor extensions, finite constant
sets, integer intervals and the set of all strings. Union names are kept as
UnionRef atoms until expanded through a TypeContext.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from src.errors import UnresolvedTypeError
from src.symtab.names import QualName
from src.typesys.terms import FALSE, TRUE, Apply, GroundTerm, IntConst, StrConst, UserConst, quote_string

try:
    from typing import Protocol
except ImportError:  # pragma: no cover
    Protocol = object

logger = logging.getLogger('ModLP.Types')


@dataclass(frozen=True)
class CtorExt:
    """The full declared extension of a constructor."""

    name: QualName


@dataclass(frozen=True)
class UnionRef:
    name: QualName


@dataclass(frozen=True)
class ConstSet:
    values: FrozenSet[GroundTerm]


@dataclass(frozen=True)
class IntRange:
    """Closed interval; None stands for minus/plus infinity."""

    lo: Optional[int]
    hi: Optional[int]

    def contains(self, value: int) -> bool:
        return (self.lo is None or self.lo <= value) and (self.hi is None or value <= self.hi)

    def covers(self, other: "IntRange") -> bool:
        lo_ok = self.lo is None or (other.lo is not None and self.lo <= other.lo)
        hi_ok = self.hi is None or (other.hi is not None and other.hi <= self.hi)
        return lo_ok and hi_ok


@dataclass(frozen=True)
class AllStrings:
    pass


TypeAtom = Union[CtorExt, UnionRef, ConstSet, IntRange, AllStrings]


def _lo_key(r: IntRange):
    return (0, 0) if r.lo is None else (1, r.lo)


def _merge_ranges(ranges: Iterable[IntRange]) -> Tuple[IntRange, ...]:
    merged: List[IntRange] = []
    for r in sorted(ranges, key=_lo_key):
        if r.lo is not None and r.hi is not None and r.lo > r.hi:
            continue
        if merged:
            last = merged[-1]
            if last.hi is None or r.lo is None or r.lo <= last.hi + 1:
                if last.hi is None or (r.hi is not None and r.hi <= last.hi):
                    hi = last.hi
                else:
                    hi = r.hi
                merged[-1] = IntRange(last.lo, hi)
                continue
        merged.append(r)
    return tuple(merged)


@dataclass(frozen=True)
class TypeExpr:
    """A set of atoms in normal form; equality is syntactic on the normal form."""

    atoms: FrozenSet[TypeAtom]
    ctors: FrozenSet[QualName] = field(default=frozenset(), compare=False, repr=False)
    unions: FrozenSet[QualName] = field(default=frozenset(), compare=False, repr=False)
    consts: FrozenSet[GroundTerm] = field(default=frozenset(), compare=False, repr=False)
    ranges: Tuple[IntRange, ...] = field(default=(), compare=False, repr=False)
    all_strings: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        ctors, unions, consts, ranges = set(), set(), set(), []
        all_strings = False
        for atom in self.atoms:
            if isinstance(atom, CtorExt):
                ctors.add(atom.name)
            elif isinstance(atom, UnionRef):
                unions.add(atom.name)
            elif isinstance(atom, IntRange):
                ranges.append(atom)
            elif isinstance(atom, AllStrings):
                all_strings = True
            elif isinstance(atom, ConstSet):
                for value in atom.values:
                    if isinstance(value, IntConst):
                        ranges.append(IntRange(value.value, value.value))
                    elif isinstance(value, (StrConst, UserConst)):
                        consts.add(value)
                    else:
                        raise TypeError(f"constant sets hold constants only, got {value}")
            else:
                raise TypeError(f"not a type atom: {atom!r}")
        if all_strings:
            consts = {c for c in consts if not isinstance(c, StrConst)}
        merged = _merge_ranges(ranges)
        atoms: set = {CtorExt(n) for n in ctors} | {UnionRef(n) for n in unions} | set(merged)
        if consts:
            atoms.add(ConstSet(frozenset(consts)))
        if all_strings:
            atoms.add(AllStrings())
        object.__setattr__(self, "atoms", frozenset(atoms))
        object.__setattr__(self, "ctors", frozenset(ctors))
        object.__setattr__(self, "unions", frozenset(unions))
        object.__setattr__(self, "consts", frozenset(consts))
        object.__setattr__(self, "ranges", merged)
        object.__setattr__(self, "all_strings", all_strings)

    @classmethod
    def of(cls, *atoms: TypeAtom) -> "TypeExpr":
        return cls(frozenset(atoms))

    @classmethod
    def constants(cls, *values: GroundTerm) -> "TypeExpr":
        return cls.of(ConstSet(frozenset(values)))

    def union(self, *others: "TypeExpr") -> "TypeExpr":
        atoms = set(self.atoms)
        for other in others:
            atoms |= other.atoms
        return TypeExpr(frozenset(atoms))

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    @property
    def names(self) -> FrozenSet[QualName]:
        return self.ctors | self.unions

    def __str__(self):
        if not self.atoms:
            return "{}"
        parts = sorted(str(n) for n in self.ctors | self.unions)
        for r in self.ranges:
            parts.append(_format_range(r))
        if self.all_strings:
            parts.append("String")
        if self.consts:
            parts.append("{" + ", ".join(sorted(_format_const(c) for c in self.consts)) + "}")
        return " + ".join(parts)


def _format_const(c: GroundTerm) -> str:
    return quote_string(c.value) if isinstance(c, StrConst) else str(c)


_RANGE_NAMES = {(None, None): "Integer", (0, None): "Natural", (1, None): "PosInteger", (None, -1): "NegInteger"}


def _format_range(r: IntRange) -> str:
    if (r.lo, r.hi) in _RANGE_NAMES:
        return _RANGE_NAMES[(r.lo, r.hi)]
    if r.lo == r.hi:
        return "{" + str(r.lo) + "}"
    lo = "-inf" if r.lo is None else str(r.lo)
    hi = "inf" if r.hi is None else str(r.hi)
    return f"Integer[{lo}..{hi}]"


INTEGER = TypeExpr.of(IntRange(None, None))
NATURAL = TypeExpr.of(IntRange(0, None))
POS_INTEGER = TypeExpr.of(IntRange(1, None))
NEG_INTEGER = TypeExpr.of(IntRange(None, -1))
STRING = TypeExpr.of(AllStrings())
BOOLEAN = TypeExpr.constants(TRUE, FALSE)
EMPTY_TYPE = TypeExpr(frozenset())

BUILTIN_TYPES: Dict[str, TypeExpr] = {
    "Integer": INTEGER,
    "Natural": NATURAL,
    "PosInteger": POS_INTEGER,
    "NegInteger": NEG_INTEGER,
    "String": STRING,
    "Boolean": BOOLEAN,
}


class TypeContext(Protocol):
    """What the type algorithms need from a symbol table."""

    def union_body(self, name: QualName) -> Optional[TypeExpr]:
        ...

    def ctor_fields(self, name: QualName) -> Optional[Tuple[TypeExpr, ...]]:
        ...


class DictTypeContext:
    """A TypeContext over plain dictionaries; handy for tests and scratch checks."""

    def __init__(self, unions: Optional[Mapping[QualName, TypeExpr]] = None,
                 ctors: Optional[Mapping[QualName, Tuple[TypeExpr, ...]]] = None):
        self.unions = dict(unions or {})
        self.ctors = dict(ctors or {})

    def union_body(self, name):
        return self.unions.get(name)

    def ctor_fields(self, name):
        return self.ctors.get(name)


def expand(t: TypeExpr, ctx: TypeContext, _visiting: FrozenSet[QualName] = frozenset()) -> TypeExpr:
    """Replace union references by their bodies.

    A union reached again while it is being expanded contributes nothing, which
    yields the least solution of union-only cycles.

    Raises:
        UnresolvedTypeError: If a union name is unknown to ctx.
    """
    if not t.unions:
        return t
    atoms: List[TypeAtom] = [a for a in t.atoms if not isinstance(a, UnionRef)]
    for name in t.unions:
        if name in _visiting:
            continue
        body = ctx.union_body(name)
        if body is None:
            raise UnresolvedTypeError(f"unknown type {name}")
        atoms.extend(expand(body, ctx, _visiting | {name}).atoms)
    return TypeExpr(frozenset(atoms))


def _check_ctors(t: TypeExpr, ctx: TypeContext):
    for name in t.ctors:
        if ctx.ctor_fields(name) is None:
            raise UnresolvedTypeError(f"unknown constructor {name}")


def _const_in(value: GroundTerm, t: TypeExpr) -> bool:
    if isinstance(value, StrConst):
        return t.all_strings or value in t.consts
    if isinstance(value, IntConst):
        return any(r.contains(value.value) for r in t.ranges)
    return value in t.consts


def is_subtype(a: TypeExpr, b: TypeExpr, ctx: TypeContext) -> bool:
    """Decide denotation(a) ⊆ denotation(b).

    Args:
        a (TypeExpr): Candidate subtype.
        b (TypeExpr): Candidate supertype.
        ctx (TypeContext): Resolves union and constructor names.

    Returns:
        bool: True iff every term denoted by a is denoted by b.

    Raises:
        UnresolvedTypeError: If a name in a or b cannot be resolved.
    """
    ea, eb = expand(a, ctx), expand(b, ctx)
    _check_ctors(ea, ctx)
    _check_ctors(eb, ctx)
    if not ea.ctors <= eb.ctors:
        return False
    if ea.all_strings and not eb.all_strings:
        return False
    if not all(_const_in(c, eb) for c in ea.consts):
        return False
    return all(any(big.covers(r) for big in eb.ranges) for r in ea.ranges)


def type_equal(a: TypeExpr, b: TypeExpr, ctx: TypeContext) -> bool:
    """Decide denotation(a) = denotation(b) by mutual containment."""
    return is_subtype(a, b, ctx) and is_subtype(b, a, ctx)


def _intersect_ranges(left: Iterable[IntRange], right: Iterable[IntRange]) -> List[IntRange]:
    out = []
    for x in left:
        for y in right:
            lo = y.lo if x.lo is None else (x.lo if y.lo is None else max(x.lo, y.lo))
            hi = y.hi if x.hi is None else (x.hi if y.hi is None else min(x.hi, y.hi))
            if lo is None or hi is None or lo <= hi:
                out.append(IntRange(lo, hi))
    return out


def intersect(a: Optional[TypeExpr], b: Optional[TypeExpr], ctx: TypeContext) -> Optional[TypeExpr]:
    """Intersect two types; None stands for the type of all terms."""
    if a is None:
        return b
    if b is None:
        return a
    ea, eb = expand(a, ctx), expand(b, ctx)
    atoms: List[TypeAtom] = [CtorExt(n) for n in ea.ctors & eb.ctors]
    consts = {c for c in ea.consts if _const_in(c, eb)} | {c for c in eb.consts if _const_in(c, ea)}
    if consts:
        atoms.append(ConstSet(frozenset(consts)))
    atoms.extend(_intersect_ranges(ea.ranges, eb.ranges))
    if ea.all_strings and eb.all_strings:
        atoms.append(AllStrings())
    return TypeExpr(frozenset(atoms))


def contains_term(t: TypeExpr, term: GroundTerm, ctx: TypeContext) -> bool:
    """Membership of a ground term in the denotation of t."""
    et = expand(t, ctx)
    if isinstance(term, Apply):
        if term.ctor not in et.ctors:
            return False
        fields = ctx.ctor_fields(term.ctor)
        if fields is None or len(fields) != len(term.args):
            return False
        return all(contains_term(ft, arg, ctx) for ft, arg in zip(fields, term.args))
    return _const_in(term, et)

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Raw syntax tree produced by the parser.

Names are unresolved dotted identifiers here; elaboration turns them into
qualified symbols, variables and accessors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

from src.lang.lexer import Span

NO_SPAN = Span(0, 0)


@dataclass(frozen=True)
class Name:
    parts: Tuple[str, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)

    @property
    def is_simple(self) -> bool:
        return len(self.parts) == 1

    @property
    def text(self) -> str:
        return ".".join(self.parts)

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class StrLit:
    value: str
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Blank:
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    """`F(t1, ..., tn)`"""

    name: Name
    args: Tuple["RawTerm", ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


RawTerm = Union[Name, IntLit, StrLit, Blank, Call]


@dataclass(frozen=True)
class Arith:
    op: str
    left: "RawExpr"
    right: "RawExpr"
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Comprehension:
    """`{ h1, ..., hk | body }`"""

    heads: Tuple[RawTerm, ...]
    body: "Body"
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Count:
    comp: Comprehension
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


RawExpr = Union[RawTerm, Arith, Count]


@dataclass(frozen=True)
class TypeRef:
    """A union alternative naming a type: `State`, `in.State`, `Integer`."""

    name: Name


@dataclass(frozen=True)
class ConstSetLit:
    """`{ c1, ..., cn }` inside a type."""

    values: Tuple[RawTerm, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawType:
    alternatives: Tuple[Union[TypeRef, ConstSetLit], ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


# Literals


@dataclass(frozen=True)
class AtomLiteral:
    term: RawTerm
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class NoLiteral:
    """`no { ... }` or `no Atom`; exactly one of comp/atom is set."""

    comp: Optional[Comprehension] = None
    atom: Optional[RawTerm] = None
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class IsLiteral:
    term: RawTerm
    type: RawType
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class TypeTestLiteral:
    term: RawTerm
    type: RawType
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class CompareLiteral:
    op: str
    left: RawExpr
    right: RawExpr
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


RawLiteral = Union[AtomLiteral, NoLiteral, IsLiteral, TypeTestLiteral, CompareLiteral]

# A body is a disjunction of conjunctions.
Body = Tuple[Tuple[RawLiteral, ...], ...]


# Items


@dataclass(frozen=True)
class FieldDecl:
    label: Optional[str]
    type: RawType
    any: bool = False


@dataclass(frozen=True)
class CtorDecl:
    """`F ::= [new|fun] (fields)` with `fun` fields split by `->` at `split`."""

    name: str
    marker: Optional[str]
    fields: Tuple[FieldDecl, ...]
    split: Optional[int] = None
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class UnionDecl:
    name: str
    type: RawType
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Rule:
    heads: Tuple[RawTerm, ...]
    body: Body
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


class ClauseKind(Enum):
    CONFORMS = "conforms"
    REQUIRES = "requires"
    ENSURES = "ensures"


@dataclass(frozen=True)
class ContractClause:
    kind: ClauseKind
    body: Body
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Fact:
    term: RawTerm
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class SymConstDef:
    name: str
    term: RawTerm
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class PipelineEq:
    """`a, b = T(x, y).`"""

    targets: Tuple[str, ...]
    callee: str
    args: Tuple[str, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


RawItem = Union[CtorDecl, UnionDecl, Rule, ContractClause, Fact, SymConstDef, PipelineEq]


class ModuleKind(Enum):
    DOMAIN = "domain"
    MODEL = "model"
    TRANSFORM = "transform"
    SYSTEM = "transform system"


class ImportMode(Enum):
    INCLUDES = "includes"
    EXTENDS = "extends"
    OF = "of"
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class ModuleImport:
    mode: ImportMode
    prefix: Optional[str]
    target: str
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class RawModuleDecl:
    kind: ModuleKind
    name: str
    imports: Tuple[ModuleImport, ...]
    body: Tuple[RawItem, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)

    def imported(self, *modes: ImportMode) -> Tuple[ModuleImport, ...]:
        return tuple(i for i in self.imports if i.mode in modes)

    @property
    def domain_name(self) -> Optional[str]:
        of = self.imported(ImportMode.OF)
        return of[0].target if of else None


@dataclass(frozen=True)
class SourceUnit:
    path: str
    decls: Tuple[RawModuleDecl, ...]

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Compiled module representation.

Rules are kept per disjunct: every clause of a rule carries its own head (which
may differ from the written head by inferred relabelings) and its literals in
evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Mapping, Sequence, Tuple, Union

from src.lang.lexer import Span
from src.lang.syntax import NO_SPAN
from src.symtab.names import Qualifier, QualName
from src.symtab.table import SymbolTable
from src.typesys.relabel import RelabelingSpec
from src.typesys.terms import Accessor, Apply, GroundTerm, IntConst, StrConst, Term, UserConst, Var
from src.typesys.typeexpr import TypeExpr


@dataclass(frozen=True)
class Relabeled:
    """`ρ(x)` in a head: the value of x rewritten by rho."""

    rho: RelabelingSpec
    var: Var

    def __str__(self):
        return f"{self.rho}({self.var})"


@dataclass(frozen=True)
class ArithExpr:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Comprehension:
    """`{ heads | body }`; `captured` are the variables shared with the enclosing scope."""

    heads: Tuple[Term, ...]
    disjuncts: Tuple[Tuple["Literal", ...], ...]
    captured: FrozenSet[str] = frozenset()

    def __str__(self):
        body = "; ".join(", ".join(str(lit) for lit in conj) for conj in self.disjuncts)
        return f"{{ {', '.join(str(h) for h in self.heads)} | {body} }}"


@dataclass(frozen=True)
class CountExpr:
    comp: Comprehension

    def __str__(self):
        return f"count({self.comp})"


Expr = Union[Term, ArithExpr, CountExpr]


@dataclass(frozen=True)
class AtomLit:
    term: Term

    def __str__(self):
        return str(self.term)


@dataclass(frozen=True)
class IsLit:
    var: Var
    type: TypeExpr

    def __str__(self):
        return f"{self.var} is {self.type}"


@dataclass(frozen=True)
class TypeTestLit:
    term: Term
    type: TypeExpr

    def __str__(self):
        return f"{self.term} : {self.type}"


@dataclass(frozen=True)
class CompareLit:
    op: str
    left: Expr
    right: Expr

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class NoLit:
    comp: Comprehension

    def __str__(self):
        return f"no {self.comp}"


Literal = Union[AtomLit, IsLit, TypeTestLit, CompareLit, NoLit]
HeadTerm = Union[Term, Relabeled]


def term_vars(term) -> Iterator[str]:
    """Variables of a term, an expression or a head, left to right."""
    if isinstance(term, Var):
        yield term.name
    elif isinstance(term, (Accessor, Relabeled)):
        yield (term.base if isinstance(term, Accessor) else term.var).name
    elif isinstance(term, Apply):
        for arg in term.args:
            yield from term_vars(arg)
    elif isinstance(term, ArithExpr):
        yield from term_vars(term.left)
        yield from term_vars(term.right)
    elif isinstance(term, CountExpr):
        yield from sorted(term.comp.captured)


def accessor_bases(term) -> Iterator[str]:
    if isinstance(term, Accessor):
        yield term.base.name
    elif isinstance(term, Apply):
        for arg in term.args:
            yield from accessor_bases(arg)
    elif isinstance(term, ArithExpr):
        yield from accessor_bases(term.left)
        yield from accessor_bases(term.right)


def literal_vars(lit: Literal) -> FrozenSet[str]:
    """Variables a literal shares with its conjunction."""
    if isinstance(lit, AtomLit):
        return frozenset(term_vars(lit.term))
    if isinstance(lit, IsLit):
        return frozenset((lit.var.name,))
    if isinstance(lit, TypeTestLit):
        return frozenset(term_vars(lit.term))
    if isinstance(lit, CompareLit):
        return frozenset(term_vars(lit.left)) | frozenset(term_vars(lit.right))
    return lit.comp.captured


def comprehension_vars(comp: Comprehension) -> FrozenSet[str]:
    """Every variable mentioned anywhere in comp, nested comprehensions included."""
    names = set()
    for h in comp.heads:
        names.update(term_vars(h))
    for conj in comp.disjuncts:
        for lit in conj:
            names.update(all_literal_vars(lit))
    return frozenset(names)


def all_literal_vars(lit: Literal) -> FrozenSet[str]:
    if isinstance(lit, NoLit):
        return comprehension_vars(lit.comp)
    if isinstance(lit, CompareLit):
        names = set()
        for side in (lit.left, lit.right):
            if isinstance(side, CountExpr):
                names |= comprehension_vars(side.comp)
            else:
                names.update(term_vars(side))
        return frozenset(names)
    return literal_vars(lit)


@dataclass(frozen=True)
class Clause:
    """One disjunct of a rule, ready to evaluate."""

    head: HeadTerm
    literals: Tuple[Literal, ...]

    def __str__(self):
        if not self.literals:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(lit) for lit in self.literals)}."


@dataclass(frozen=True)
class CompiledRule:
    head: Term
    clauses: Tuple[Clause, ...]
    stratum: int = 0
    span: Span = field(default=NO_SPAN, compare=False, repr=False)
    path: str = field(default="<input>", compare=False, repr=False)

    def __str__(self):
        return "\n".join(str(c) for c in self.clauses)


def head_key(head) -> object:
    """Dependency-graph node for a head or an atom: its outer constructor or constant."""
    if isinstance(head, Apply):
        return head.ctor
    if isinstance(head, UserConst):
        return head.name
    if isinstance(head, IntConst):
        return "#int"
    if isinstance(head, StrConst):
        return "#str"
    return None


@dataclass(frozen=True)
class Program:
    """A stratified rule set over a symbol table."""

    table: SymbolTable
    strata: Tuple[Tuple[CompiledRule, ...], ...]

    @property
    def rules(self) -> Tuple[CompiledRule, ...]:
        return tuple(r for stratum in self.strata for r in stratum)

    def rules_for(self, key) -> Tuple[CompiledRule, ...]:
        return tuple(r for r in self.rules if head_key(r.head) == key)


class ClauseOrigin:
    CONFORMS = "conforms"
    FUNCTIONAL = "fun"
    EXTENDS = "extends"
    REQUIRES = "requires"
    ENSURES = "ensures"


@dataclass(frozen=True)
class ExtendedRef:
    """A domain imported with `extends`, as seen from the importing domain."""

    domain: "CompiledDomain"
    prefix: Qualifier = ()

    @property
    def goal(self) -> QualName:
        return self.domain.conforms_goal.prefixed(self.prefix)

    def under(self, prefix: Sequence[str]) -> "ExtendedRef":
        return ExtendedRef(self.domain, tuple(prefix) + self.prefix)


@dataclass(frozen=True)
class ClauseInfo:
    """Bookkeeping for one conforms/requires/ensures clause."""

    index: int
    constant: QualName
    origin: str
    text: str
    span: Span = field(default=NO_SPAN, compare=False)
    path: str = field(default="<input>", compare=False)
    extended: Tuple[ExtendedRef, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class CompiledDomain:
    name: str
    table: SymbolTable
    program: Program
    conforms_goal: QualName
    clauses: Tuple[ClauseInfo, ...] = ()
    lineage: FrozenSet[str] = frozenset()
    path: str = field(default="<input>", compare=False)

    @property
    def rules(self) -> Tuple[CompiledRule, ...]:
        return self.program.rules

    def accepts(self, other: "CompiledDomain") -> bool:
        """True if models of other may stand where models of this domain are expected."""
        return other.name == self.name or self.name in other.lineage


@dataclass(frozen=True)
class CompiledModel:
    name: str
    domain: CompiledDomain
    table: SymbolTable
    facts: Tuple[GroundTerm, ...]
    symconsts: Mapping[QualName, GroundTerm] = field(default_factory=dict, compare=False)
    path: str = field(default="<input>", compare=False)


@dataclass(frozen=True)
class CompiledTransform:
    name: str
    inputs: Tuple[Tuple[str, CompiledDomain], ...]
    outputs: Tuple[Tuple[str, CompiledDomain], ...]
    table: SymbolTable
    program: Program
    requires_goal: QualName
    ensures_goal: QualName
    clauses: Tuple[ClauseInfo, ...] = ()
    path: str = field(default="<input>", compare=False)

    @property
    def rules(self) -> Tuple[CompiledRule, ...]:
        return self.program.rules


@dataclass(frozen=True)
class Equation:
    targets: Tuple[str, ...]
    callee: str
    args: Tuple[str, ...]
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self):
        return f"{', '.join(self.targets)} = {self.callee}({', '.join(self.args)})"


@dataclass(frozen=True)
class CompiledSystem:
    name: str
    inputs: Tuple[Tuple[str, CompiledDomain], ...]
    outputs: Tuple[Tuple[str, CompiledDomain], ...]
    equations: Tuple[Equation, ...]
    levels: Tuple[Tuple[Equation, ...], ...]
    callees: Mapping[str, object] = field(default_factory=dict, compare=False)
    models: Mapping[str, CompiledModel] = field(default_factory=dict, compare=False)
    path: str = field(default="<input>", compare=False)


CompiledModule = Union[CompiledDomain, CompiledModel, CompiledTransform, CompiledSystem]


def module_kind_name(module: CompiledModule) -> str:
    return {
        CompiledDomain: "domain",
        CompiledModel: "model",
        CompiledTransform: "transform",
        CompiledSystem: "transform system",
    }[type(module)]


def facts_by_key(facts) -> Dict[object, list]:
    grouped: Dict[object, list] = {}
    for f in facts:
        grouped.setdefault(head_key(f), []).append(f)
    return grouped

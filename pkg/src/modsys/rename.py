#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Renaming of compiled rules (`x::M`).

Constructors always take the prefix; constants follow the kind recorded in the
module's table, so variables and new-kind constants keep their names.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence, Tuple

from src.modsys.ir import (ArithExpr, AtomLit, Clause, ClauseInfo, CompareLit, CompiledRule, Comprehension, CountExpr,
                           IsLit, NoLit, Relabeled, TypeTestLit)
from src.symtab.table import SymbolTable, rename_name, rename_type
from src.typesys.terms import Apply, UserConst


def rename_term(term, prefix: Sequence[str], table: SymbolTable):
    if isinstance(term, Apply):
        return Apply(term.ctor.prefixed(prefix), tuple(rename_term(a, prefix, table) for a in term.args))
    if isinstance(term, UserConst):
        return UserConst(rename_name(term.name, prefix, table))
    if isinstance(term, Relabeled):
        return Relabeled(term.rho.prefixed(prefix), term.var)
    if isinstance(term, ArithExpr):
        return ArithExpr(term.op, rename_term(term.left, prefix, table), rename_term(term.right, prefix, table))
    if isinstance(term, CountExpr):
        return CountExpr(rename_comprehension(term.comp, prefix, table))
    return term


def rename_comprehension(comp: Comprehension, prefix: Sequence[str], table: SymbolTable) -> Comprehension:
    return Comprehension(
        tuple(rename_term(h, prefix, table) for h in comp.heads),
        tuple(rename_literals(conj, prefix, table) for conj in comp.disjuncts),
        comp.captured,
    )


def rename_literal(lit, prefix: Sequence[str], table: SymbolTable):
    if isinstance(lit, AtomLit):
        return AtomLit(rename_term(lit.term, prefix, table))
    if isinstance(lit, IsLit):
        return IsLit(lit.var, rename_type(lit.type, prefix, table))
    if isinstance(lit, TypeTestLit):
        return TypeTestLit(rename_term(lit.term, prefix, table), rename_type(lit.type, prefix, table))
    if isinstance(lit, CompareLit):
        return CompareLit(lit.op, rename_term(lit.left, prefix, table), rename_term(lit.right, prefix, table))
    if isinstance(lit, NoLit):
        return NoLit(rename_comprehension(lit.comp, prefix, table))
    raise TypeError(f"not a literal: {lit!r}")


def rename_literals(literals, prefix: Sequence[str], table: SymbolTable) -> tuple:
    return tuple(rename_literal(lit, prefix, table) for lit in literals)


def rename_rule(rule: CompiledRule, prefix: Sequence[str], table: SymbolTable) -> CompiledRule:
    clauses = tuple(
        Clause(rename_term(c.head, prefix, table), rename_literals(c.literals, prefix, table)) for c in rule.clauses
    )
    return replace(rule, head=rename_term(rule.head, prefix, table), clauses=clauses)


def rename_rules(rules, prefix: Sequence[str], table: SymbolTable) -> Tuple[CompiledRule, ...]:
    """Rename every rule of a module whose (unrenamed) table is `table`."""
    return tuple(rename_rule(r, prefix, table) for r in rules)


def rename_clause_info(info: ClauseInfo, prefix: Sequence[str]) -> ClauseInfo:
    return replace(
        info,
        constant=info.constant.prefixed(prefix),
        extended=tuple(ref.under(prefix) for ref in info.extended),
    )

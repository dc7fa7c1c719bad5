#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Pretty printer for raw syntax. Output re-parses to an equal tree.
"""

from __future__ import annotations

from typing import List

from src.lang.syntax import (Arith, AtomLiteral, Blank, Body, Call, CompareLiteral, Comprehension, ConstSetLit,
                             ContractClause, Count, CtorDecl, Fact, ImportMode, IntLit, IsLiteral, ModuleKind,
                             Name, NoLiteral, PipelineEq, RawModuleDecl, RawType, Rule, SourceUnit, StrLit,
                             SymConstDef, TypeRef, TypeTestLiteral, UnionDecl)
from src.typesys.terms import quote_string

INDENT = "   "


def format_term(term) -> str:
    if isinstance(term, Name):
        return term.text
    if isinstance(term, IntLit):
        return str(term.value)
    if isinstance(term, StrLit):
        return quote_string(term.value)
    if isinstance(term, Blank):
        return "_"
    if isinstance(term, Call):
        return f"{term.name.text}({', '.join(format_term(a) for a in term.args)})"
    raise TypeError(f"not a term: {term!r}")


def format_expr(expr, parent_prec: int = 0) -> str:
    if isinstance(expr, Arith):
        prec = 2 if expr.op == "*" else 1
        text = f"{format_expr(expr.left, prec)} {expr.op} {format_expr(expr.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(expr, Count):
        return f"count({format_comprehension(expr.comp)})"
    return format_term(expr)


def format_comprehension(comp: Comprehension) -> str:
    heads = ", ".join(format_term(h) for h in comp.heads)
    return f"{{ {heads} | {format_body(comp.body)} }}"


def format_type(t: RawType) -> str:
    parts = []
    for alt in t.alternatives:
        if isinstance(alt, TypeRef):
            parts.append(alt.name.text)
        elif isinstance(alt, ConstSetLit):
            parts.append("{ " + ", ".join(format_term(v) for v in alt.values) + " }")
    return " + ".join(parts)


def format_literal(lit) -> str:
    if isinstance(lit, AtomLiteral):
        return format_term(lit.term)
    if isinstance(lit, NoLiteral):
        return "no " + (format_comprehension(lit.comp) if lit.comp is not None else format_term(lit.atom))
    if isinstance(lit, IsLiteral):
        return f"{format_term(lit.term)} is {format_type(lit.type)}"
    if isinstance(lit, TypeTestLiteral):
        return f"{format_term(lit.term)} : {format_type(lit.type)}"
    if isinstance(lit, CompareLiteral):
        return f"{format_expr(lit.left)} {lit.op} {format_expr(lit.right)}"
    raise TypeError(f"not a literal: {lit!r}")


def format_body(body: Body) -> str:
    return "; ".join(", ".join(format_literal(lit) for lit in conj) for conj in body)


def _format_ctor(decl: CtorDecl) -> str:
    pieces = []
    for i, f in enumerate(decl.fields):
        text = format_type(f.type)
        if f.any:
            text = "any " + text
        if f.label is not None:
            text = f"{f.label}: {text}"
        if i > 0:
            pieces.append(" -> " if decl.split == i else ", ")
        pieces.append(text)
    marker = f"{decl.marker} " if decl.marker else ""
    return f"{decl.name} ::= {marker}({''.join(pieces)})."


def format_item(item) -> str:
    if isinstance(item, CtorDecl):
        return _format_ctor(item)
    if isinstance(item, UnionDecl):
        return f"{item.name} ::= {format_type(item.type)}."
    if isinstance(item, Rule):
        heads = ", ".join(format_term(h) for h in item.heads)
        if item.body == ((),):
            return f"{heads}."
        return f"{heads} :- {format_body(item.body)}."
    if isinstance(item, ContractClause):
        return f"{item.kind.value} {format_body(item.body)}."
    if isinstance(item, Fact):
        return f"{format_term(item.term)}."
    if isinstance(item, SymConstDef):
        return f"{item.name} is {format_term(item.term)}."
    if isinstance(item, PipelineEq):
        return f"{', '.join(item.targets)} = {item.callee}({', '.join(item.args)})."
    raise TypeError(f"not an item: {item!r}")


def _format_import(imp) -> str:
    return f"{imp.prefix}::{imp.target}" if imp.prefix else imp.target


def format_module(decl: RawModuleDecl) -> str:
    header: List[str] = [decl.kind.value, decl.name]
    if decl.kind is ModuleKind.DOMAIN:
        runs: List[List] = []
        for imp in decl.imports:
            if runs and runs[-1][0].mode is imp.mode:
                runs[-1].append(imp)
            else:
                runs.append([imp])
        for run in runs:
            header.append(f"{run[0].mode.value} " + ", ".join(_format_import(i) for i in run))
    elif decl.kind is ModuleKind.MODEL:
        header.append(f"of {decl.domain_name}")
        included = decl.imported(ImportMode.INCLUDES)
        if included:
            header.append("includes " + ", ".join(_format_import(i) for i in included))
    else:
        inputs = ", ".join(_format_import(i) for i in decl.imported(ImportMode.INPUT))
        outputs = ", ".join(_format_import(i) for i in decl.imported(ImportMode.OUTPUT))
        header.append(f"({inputs}) returns ({outputs})")
    lines = [" ".join(header), "{"]
    lines.extend(INDENT + format_item(item) for item in decl.body)
    lines.append("}")
    return "\n".join(lines)


def format_unit(unit: SourceUnit) -> str:
    return "\n\n".join(format_module(d) for d in unit.decls) + ("\n" if unit.decls else "")

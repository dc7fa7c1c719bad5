#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Stratification.

Nodes are constructor and constant symbols. A rule adds an edge from every
symbol its body reads to the symbol its head derives; reads under `no` or inside
`count` are negative. Strata are the longest paths through the condensation,
where only negative edges raise the level.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, Iterable, List, Set, Tuple

from src.errors import StratificationError
from src.modsys.ir import (AtomLit, CompareLit, CompiledRule, Comprehension, CountExpr, IsLit, NoLit, Program,
                           head_key)
from src.symtab.table import SymbolTable
from src.typesys.typeexpr import TypeExpr

logger = logging.getLogger('ModLP.Elaboration')

Edge = Tuple[object, object, bool]


def type_keys(t: TypeExpr) -> Set[object]:
    """Store buckets an `x is T` literal reads."""
    keys: Set[object] = set(t.ctors)
    for c in t.consts:
        keys.add(head_key(c))
    if t.ranges:
        keys.add("#int")
    if t.all_strings:
        keys.add("#str")
    return keys


def _comprehension_reads(comp: Comprehension, negative: bool, out: List[Tuple[object, bool]]):
    for conj in comp.disjuncts:
        literal_reads(conj, negative, out)


def literal_reads(literals, negative: bool, out: List[Tuple[object, bool]]):
    for lit in literals:
        if isinstance(lit, AtomLit):
            out.append((head_key(lit.term), negative))
        elif isinstance(lit, IsLit):
            out.extend((k, negative) for k in type_keys(lit.type))
        elif isinstance(lit, NoLit):
            _comprehension_reads(lit.comp, True, out)
        elif isinstance(lit, CompareLit):
            for side in (lit.left, lit.right):
                if isinstance(side, CountExpr):
                    _comprehension_reads(side.comp, True, out)


def dependency_edges(rules: Iterable[CompiledRule]) -> List[Edge]:
    edges: List[Edge] = []
    for rule in rules:
        target = head_key(rule.head)
        for clause in rule.clauses:
            reads: List[Tuple[object, bool]] = []
            literal_reads(clause.literals, False, reads)
            edges.extend((source, target, neg) for source, neg in reads if source is not None)
    return edges


def _sccs(nodes: List[object], succ: Dict[object, List[object]]) -> List[List[object]]:
    """Tarjan's algorithm, iterative; components come out sinks first."""
    index: Dict[object, int] = {}
    low: Dict[object, int] = {}
    on_stack: Set[object] = set()
    stack: List[object] = []
    out: List[List[object]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    component.append(top)
                    if top == node:
                        break
                out.append(component)
    return out


def stratify(rules: Iterable[CompiledRule]) -> Dict[object, int]:
    """Assign a stratum to every symbol read or derived by rules.

    Args:
        rules (iterable): Resolved rules.

    Returns:
        dict: Symbol key to stratum number (0 is evaluated first).

    Raises:
        StratificationError: If a cycle goes through a negative edge; names the cycle's symbols.
    """
    rules = list(rules)
    edges = dependency_edges(rules)
    nodes: List[object] = []
    seen: Set[object] = set()
    for source, target, _ in edges:
        for n in (source, target):
            if n not in seen:
                seen.add(n)
                nodes.append(n)
    for rule in rules:
        key = head_key(rule.head)
        if key not in seen:
            seen.add(key)
            nodes.append(key)
    succ: Dict[object, List[object]] = {}
    for source, target, _ in edges:
        succ.setdefault(source, []).append(target)

    components = _sccs(nodes, succ)
    component_of = {n: i for i, comp in enumerate(components) for n in comp}
    for source, target, negative in edges:
        if negative and component_of[source] == component_of[target]:
            cycle = sorted(str(n) for n in components[component_of[source]])
            raise StratificationError(cycle, f"negation or count through a recursive cycle: {', '.join(cycle)}")

    incoming: Dict[int, List[Tuple[int, bool]]] = {}
    for source, target, negative in edges:
        s, t = component_of[source], component_of[target]
        if s != t:
            incoming.setdefault(t, []).append((s, negative))
    level: Dict[int, int] = {}
    for i in reversed(range(len(components))):
        level[i] = max((level[s] + (1 if neg else 0) for s, neg in incoming.get(i, ())), default=0)
    strata = {n: level[component_of[n]] for n in nodes}
    logger.debug(f"stratified {len(rules)} rules into {max(strata.values(), default=0) + 1} strata")
    return strata


def build_program(table: SymbolTable, rules: Iterable[CompiledRule]) -> Program:
    """Stratify rules and group them into evaluation order."""
    rules = list(rules)
    strata = stratify(rules)
    levels = sorted({strata[head_key(r.head)] for r in rules})
    dense = {lvl: i for i, lvl in enumerate(levels)}
    grouped: List[List[CompiledRule]] = [[] for _ in levels]
    for rule in rules:
        n = dense[strata[head_key(rule.head)]]
        grouped[n].append(replace(rule, stratum=n))
    return Program(table, tuple(tuple(g) for g in grouped))

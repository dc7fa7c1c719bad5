#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Bottom-up evaluation of stratified programs.

Strata are evaluated in order. Within a stratum the first round fires every
clause against the whole store; later rounds fire a clause once per recursive
positive literal, with that literal reading only the facts derived in the
previous round (semi-naive). Negation and count only ever read completed
lower strata.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from src.config import Settings, load_settings
from src.engine.store import FactStore
from src.modsys.ir import (ArithExpr, AtomLit, Clause, CompareLit, Comprehension, CountExpr, IsLit, NoLit, Program,
                           Relabeled, TypeTestLit, head_key)
from src.modsys.stratify import type_keys
from src.typesys.relabel import relabel_term
from src.typesys.terms import Accessor, Apply, GroundTerm, IntConst, StrConst, UserConst, Var, Wildcard, term_key
from src.typesys.typeexpr import TypeExpr

logger = logging.getLogger('ModLP.Engine')

Binding = Dict[str, GroundTerm]


# Terms under a binding


def instantiate(term, binding: Binding) -> GroundTerm:
    """The ground value of a term whose variables are all bound."""
    if isinstance(term, (IntConst, StrConst, UserConst)):
        return term
    if isinstance(term, Var):
        return binding[term.name]
    if isinstance(term, Apply):
        return Apply(term.ctor, tuple(instantiate(a, binding) for a in term.args))
    if isinstance(term, Relabeled):
        return relabel_term(term.rho, binding[term.var.name])
    if isinstance(term, Accessor):
        value = binding[term.base.name]
        for i in term.indices:
            value = value.args[i]
        return value
    raise TypeError(f"cannot instantiate {term}")


def match(pattern, value: GroundTerm, binding: Binding) -> Optional[Binding]:
    """Extend binding so that pattern equals value, or return None.

    The input binding is never modified.
    """
    if isinstance(pattern, Wildcard):
        return binding
    if isinstance(pattern, Var):
        bound = binding.get(pattern.name)
        if bound is None:
            extended = dict(binding)
            extended[pattern.name] = value
            return extended
        return binding if bound == value else None
    if isinstance(pattern, Apply):
        if not isinstance(value, Apply) or value.ctor != pattern.ctor or len(value.args) != len(pattern.args):
            return None
        for p, v in zip(pattern.args, value.args):
            binding = match(p, v, binding)
            if binding is None:
                return None
        return binding
    if isinstance(pattern, Accessor):
        return binding if instantiate(pattern, binding) == value else None
    return binding if pattern == value else None


def in_type(value: GroundTerm, t: TypeExpr) -> bool:
    """Runtime membership: applications are recognised by their constructor."""
    if isinstance(value, Apply):
        return value.ctor in t.ctors
    if isinstance(value, IntConst):
        return any(r.contains(value.value) for r in t.ranges)
    if isinstance(value, StrConst):
        return t.all_strings or value in t.consts
    return value in t.consts


def _is_ready(expr, binding: Binding) -> bool:
    if isinstance(expr, Var):
        return expr.name in binding
    if isinstance(expr, Wildcard):
        return False
    if isinstance(expr, Apply):
        return all(_is_ready(a, binding) for a in expr.args)
    if isinstance(expr, Accessor):
        return expr.base.name in binding
    if isinstance(expr, ArithExpr):
        return _is_ready(expr.left, binding) and _is_ready(expr.right, binding)
    if isinstance(expr, CountExpr):
        return all(v in binding for v in expr.comp.captured)
    return True


def _compare(op: str, left: GroundTerm, right: GroundTerm) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if type(left) is not type(right) or not isinstance(left, (IntConst, StrConst)):
        return False
    a, b = left.value, right.value
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]


class Evaluator:
    """Evaluates one program over one fact store.

    Args:
        program (Program): Stratified rules.
        store (FactStore): Initial facts; extended in place.
        semi_naive (bool, optional): Use semi-naive iteration (default) or re-fire every clause each round.
    """

    def __init__(self, program: Program, store: FactStore, semi_naive: bool = True):
        self.program = program
        self.store = store
        self.semi_naive = semi_naive
        self._delta: Optional[FactStore] = None
        self._delta_at: Optional[int] = None

    # Literals

    def _source(self, position: Optional[int]) -> FactStore:
        if position is not None and position == self._delta_at:
            return self._delta
        return self.store

    def _atom(self, lit: AtomLit, binding: Binding, source: FactStore) -> Iterator[Binding]:
        term = lit.term
        if _is_ready(term, binding):
            if instantiate(term, binding) in source:
                yield binding
            return
        for fact in source.bucket(head_key(term)):
            extended = match(term, fact, binding)
            if extended is not None:
                yield extended

    def _is(self, lit: IsLit, binding: Binding, source: FactStore) -> Iterator[Binding]:
        name = lit.var.name
        if name in binding:
            value = binding[name]
            if value in source and in_type(value, lit.type):
                yield binding
            return
        for key in sorted(type_keys(lit.type), key=str):
            for fact in source.bucket(key):
                if in_type(fact, lit.type):
                    extended = dict(binding)
                    extended[name] = fact
                    yield extended

    def eval_expr(self, expr, binding: Binding) -> GroundTerm:
        if isinstance(expr, CountExpr):
            return IntConst(len(self.eval_comprehension(expr.comp, binding)))
        if isinstance(expr, ArithExpr):
            left, right = self.eval_expr(expr.left, binding), self.eval_expr(expr.right, binding)
            if not (isinstance(left, IntConst) and isinstance(right, IntConst)):
                raise TypeError(f"arithmetic on non-integers in {expr}")
            ops = {"+": left.value + right.value, "-": left.value - right.value, "*": left.value * right.value}
            return IntConst(ops[expr.op])
        return instantiate(expr, binding)

    def _compare_lit(self, lit: CompareLit, binding: Binding) -> Iterator[Binding]:
        left_ready, right_ready = _is_ready(lit.left, binding), _is_ready(lit.right, binding)
        if left_ready and right_ready:
            if _compare(lit.op, self.eval_expr(lit.left, binding), self.eval_expr(lit.right, binding)):
                yield binding
            return
        if lit.op != "=":
            raise TypeError(f"comparison {lit} reached with unbound variables")
        if left_ready:
            extended = match(lit.right, self.eval_expr(lit.left, binding), binding)
        else:
            extended = match(lit.left, self.eval_expr(lit.right, binding), binding)
        if extended is not None:
            yield extended

    def _literal(self, lit, binding: Binding, position: Optional[int]) -> Iterator[Binding]:
        if isinstance(lit, AtomLit):
            yield from self._atom(lit, binding, self._source(position))
        elif isinstance(lit, IsLit):
            yield from self._is(lit, binding, self._source(position))
        elif isinstance(lit, TypeTestLit):
            if in_type(instantiate(lit.term, binding), lit.type):
                yield binding
        elif isinstance(lit, CompareLit):
            yield from self._compare_lit(lit, binding)
        elif isinstance(lit, NoLit):
            if self.is_empty(lit.comp, binding):
                yield binding
        else:
            raise TypeError(f"not a literal: {lit!r}")

    def solve(self, literals: Sequence, binding: Binding, top_level: bool = False) -> Iterator[Binding]:
        """All extensions of binding that satisfy the conjunction, depth first."""

        def step(i: int, current: Binding) -> Iterator[Binding]:
            if i == len(literals):
                yield current
                return
            for extended in self._literal(literals[i], current, i if top_level else None):
                yield from step(i + 1, extended)

        return step(0, binding)

    # Comprehensions

    def _comprehension_bindings(self, comp: Comprehension, outer: Binding) -> Iterator[Binding]:
        start = {v: outer[v] for v in comp.captured if v in outer}
        for conj in comp.disjuncts:
            yield from self.solve(conj, start)

    def eval_comprehension(self, comp: Comprehension, outer: Binding) -> Set[Tuple[GroundTerm, ...]]:
        """The set of head tuples over all satisfying extensions of outer."""
        return {tuple(instantiate(h, b) for h in comp.heads) for b in self._comprehension_bindings(comp, outer)}

    def is_empty(self, comp: Comprehension, outer: Binding) -> bool:
        for _ in self._comprehension_bindings(comp, outer):
            return False
        return True

    def least_element(self, comp: Comprehension, outer: Optional[Binding] = None):
        """The term-order least element of a comprehension, or None when it is empty."""
        elements = self.eval_comprehension(comp, outer or {})
        if not elements:
            return None
        best = min(elements, key=lambda row: tuple(term_key(v) for v in row))
        return best[0] if len(best) == 1 else best

    # Strata

    def _fire(self, clause: Clause, delta_at: Optional[int] = None) -> List[GroundTerm]:
        self._delta_at = delta_at
        try:
            return [instantiate(clause.head, b) for b in self.solve(clause.literals, {}, top_level=True)]
        finally:
            self._delta_at = None

    @staticmethod
    def _recursive_positions(clause: Clause, keys: Set[object]) -> List[int]:
        positions = []
        for i, lit in enumerate(clause.literals):
            if isinstance(lit, AtomLit) and head_key(lit.term) in keys:
                positions.append(i)
            elif isinstance(lit, IsLit) and type_keys(lit.type) & keys:
                positions.append(i)
        return positions

    def _evaluate_stratum(self, level: int, rules) -> int:
        clauses = [c for r in rules for c in r.clauses]
        keys = {head_key(r.head) for r in rules}
        before = len(self.store)
        derived = [f for c in clauses for f in self._fire(c)]
        delta = self.store.update(derived)
        rounds = 1
        plans = [(c, self._recursive_positions(c, keys)) for c in clauses]
        plans = [(c, ps) for c, ps in plans if ps]
        while delta and plans:
            if self.semi_naive:
                self._delta = FactStore(delta, max_facts=None)
                derived = [f for c, ps in plans for p in ps for f in self._fire(c, p)]
            else:
                derived = [f for c, _ in plans for f in self._fire(c)]
            delta = self.store.update(derived)
            rounds += 1
            logger.debug(f"stratum {level} round {rounds}: {len(delta)} new facts")
        self._delta = None
        added = len(self.store) - before
        logger.debug(f"stratum {level}: {len(rules)} rules, {added} facts in {rounds} rounds")
        return added

    def run(self) -> FactStore:
        for level, rules in enumerate(self.program.strata):
            self._evaluate_stratum(level, rules)
        return self.store


def evaluate(program: Program, edb: Iterable[GroundTerm] = (), settings: Optional[Settings] = None,
             semi_naive: bool = True) -> FactStore:
    """Compute the least fixpoint of a program over a set of facts.

    Args:
        program (Program): A stratified program (a domain's or a transform's).
        edb (iterable, optional): Ground input facts.
        settings (Settings, optional): Supplies the fact cap.
        semi_naive (bool, optional): False re-fires every clause to saturation each round.

    Returns:
        FactStore: Input and derived facts.

    Raises:
        ResourceLimitError: If the store grows past settings.max_facts.
    """
    settings = settings or load_settings()
    store = FactStore(edb, max_facts=settings.max_facts)
    edb_size = len(store)
    Evaluator(program, store, semi_naive).run()
    logger.info(f"Evaluated {len(program.strata)} strata: {edb_size} input facts, "
                f"{len(store) - edb_size} derived")
    return store


def evaluator_for(program: Program, store: FactStore) -> Evaluator:
    """An evaluator over an already computed store, for witness extraction and queries."""
    return Evaluator(program, store)


__all__ = ["Binding", "Evaluator", "evaluate", "evaluator_for", "in_type", "instantiate", "match"]

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Literal ordering.

A conjunction is evaluated left to right. Filters (type tests, comparisons,
negated comprehensions) must only run once their inputs are bound; generators
(atoms, `is` literals, `=` against a pattern) bind the rest.
"""

from __future__ import annotations

from typing import AbstractSet, List, Sequence, Tuple

from src.errors import UnsafeRuleError
from src.modsys.ir import (ArithExpr, AtomLit, CompareLit, CountExpr, IsLit, Literal, NoLit, TypeTestLit,
                           accessor_bases, literal_vars, term_vars)


def is_pattern(expr) -> bool:
    return not isinstance(expr, (ArithExpr, CountExpr))


def _side_ready(expr, bound: AbstractSet[str]) -> bool:
    return set(term_vars(expr)) <= bound


def is_runnable(lit: Literal, bound: AbstractSet[str]) -> bool:
    """Can lit be evaluated when exactly `bound` variables have values?"""
    if isinstance(lit, AtomLit):
        return set(accessor_bases(lit.term)) <= bound
    if isinstance(lit, IsLit):
        return True
    if isinstance(lit, TypeTestLit):
        return literal_vars(lit) <= bound
    if isinstance(lit, NoLit):
        return lit.comp.captured <= bound
    if isinstance(lit, CompareLit):
        if literal_vars(lit) <= bound:
            return True
        if lit.op != "=":
            return False
        left_ready, right_ready = _side_ready(lit.left, bound), _side_ready(lit.right, bound)
        if left_ready and is_pattern(lit.right):
            return set(accessor_bases(lit.right)) <= bound
        if right_ready and is_pattern(lit.left):
            return set(accessor_bases(lit.left)) <= bound
        return False
    raise TypeError(f"not a literal: {lit!r}")


def reorder_for_safety(literals: Sequence[Literal], bound: AbstractSet[str] = frozenset(),
                       context: str = "rule") -> Tuple[Literal, ...]:
    """Order literals so every filter sees bound inputs.

    The order is stable: a conjunction that is already safe is returned unchanged
    except that filters move forward to the first point where they can run.

    Args:
        literals (list): The conjunction.
        bound (set, optional): Variables bound before the conjunction starts.
        context (str, optional): Names the rule in the error message.

    Returns:
        tuple: The literals in evaluation order.

    Raises:
        UnsafeRuleError: If some literal can never run.
    """
    safe = set(bound)
    pending: List[Literal] = list(literals)
    ordered: List[Literal] = []

    def take(lit):
        pending.remove(lit)
        ordered.append(lit)
        safe.update(literal_vars(lit))

    while pending:
        filters = [lit for lit in pending if literal_vars(lit) <= safe and is_runnable(lit, safe)]
        if filters:
            take(filters[0])
            continue
        generators = [lit for lit in pending if is_runnable(lit, safe)]
        if not generators:
            detail = "; ".join(f"{lit} (unbound {', '.join(sorted(literal_vars(lit) - safe))})" for lit in pending)
            raise UnsafeRuleError(f"cannot order the body of {context}: {detail}")
        take(generators[0])
    return tuple(ordered)


def bound_after(literals: Sequence[Literal], bound: AbstractSet[str] = frozenset()) -> frozenset:
    names = set(bound)
    for lit in literals:
        names |= literal_vars(lit)
    return frozenset(names)

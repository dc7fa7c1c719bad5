#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Ad-hoc queries against the fixpoint of a model or domain.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd

from src.config import Settings
from src.engine.evaluator import Evaluator, evaluate
from src.engine.store import FactStore
from src.lang.parser import parse_goal
from src.lang.printer import format_body
from src.lang.syntax import Body
from src.modsys.ir import CompiledDomain, CompiledModel
from src.modsys.resolve import RuleCompiler
from src.typesys.terms import GroundTerm, term_key

logger = logging.getLogger('ModLP.Engine')


def _sort_key(value):
    # a variable bound in only some disjuncts sorts first where it is unbound
    return (-1,) if value is None else term_key(value)


@dataclass(frozen=True)
class QueryResult:
    """Bindings of a goal's variables, one row per distinct answer, in term order."""

    goal: str
    variables: Tuple[str, ...]
    rows: Tuple[Tuple[GroundTerm, ...], ...]
    holds: bool

    def __len__(self):
        return len(self.rows)

    def bindings(self) -> List[Dict[str, GroundTerm]]:
        return [dict(zip(self.variables, row)) for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([["" if v is None else str(v) for v in row] for row in self.rows], columns=list(self.variables))

    def to_json(self) -> Dict[str, Any]:
        return {
            'goal': self.goal,
            'holds': self.holds,
            'variables': list(self.variables),
            'bindings': [{k: None if v is None else str(v) for k, v in b.items()} for b in self.bindings()],
        }


def query(module: Union[CompiledModel, CompiledDomain], goal: Union[str, Body],
          store: Optional[FactStore] = None, settings: Optional[Settings] = None) -> QueryResult:
    """Answer a conjunction (or disjunction) of literals.

    Args:
        module (CompiledModel or CompiledDomain): A model is evaluated with its facts; a domain with none.
        goal (str or Body): Goal text such as `Reach(x)`, or an already parsed body.
        store (FactStore, optional): A previously computed fixpoint to reuse.
        settings (Settings, optional): Supplies the fact cap.

    Returns:
        QueryResult: The satisfying bindings.

    Raises:
        ResolutionError: If the goal names something the module does not know.
    """
    domain = module.domain if isinstance(module, CompiledModel) else module
    table = module.table
    text = goal if isinstance(goal, str) else format_body(goal)
    body = parse_goal(goal) if isinstance(goal, str) else goal
    compiler = RuleCompiler(table, domain.name, "<query>")
    names, disjuncts = compiler.compile_goal(body)
    if store is None:
        facts = module.facts if isinstance(module, CompiledModel) else ()
        store = evaluate(domain.program, facts, settings)
    evaluator = Evaluator(domain.program, store)
    rows = set()
    holds = False
    for conj in disjuncts:
        for binding in evaluator.solve(conj, {}):
            holds = True
            rows.add(tuple(binding.get(n) for n in names))
    ordered = tuple(sorted(rows, key=lambda row: tuple(_sort_key(v) for v in row)))
    logger.info(f"Query {text!r} on {module.name}: {len(ordered)} answers")
    return QueryResult(text, names, ordered, holds)

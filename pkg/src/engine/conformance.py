#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Conformance checking and reports.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import pandas as pd

from src.config import Settings
from src.engine.evaluator import Evaluator, evaluate
from src.engine.store import FactStore
from src.modsys.ir import ClauseInfo, ClauseOrigin, CompiledDomain, CompiledModel, NoLit, Program
from src.modsys.rename import rename_clause_info
from src.typesys.terms import GroundTerm, UserConst

logger = logging.getLogger('ModLP.Engine')


@dataclass(frozen=True)
class ClauseResult:
    """Outcome of one conforms, requires or ensures clause.

    Attributes:
        info (ClauseInfo): Which clause, and where it was written.
        holds (bool): Whether the clause's constant was derived.
        witness: For a failed `no { ... }` clause, the least element of the comprehension.
        nested (tuple): Reports of the domains an `extends` clause stands for.
    """

    info: ClauseInfo
    holds: bool
    witness: Any = None
    nested: tuple = ()

    def to_json(self) -> Dict[str, Any]:
        data = {
            'clause': str(self.info.constant),
            'index': self.info.index,
            'origin': self.info.origin,
            'text': self.info.text,
            'path': self.info.path,
            'line': self.info.span.line,
            'col': self.info.span.col,
            'holds': self.holds,
            'witness': _format_witness(self.witness),
        }
        if self.nested:
            data['nested'] = [r.to_json() for r in self.nested]
        return data


@dataclass(frozen=True)
class ConformanceReport:
    """Conformance of a set of facts to a domain (or of a transform application to its contract).

    The flag equals the conjunction of the module's own clauses.
    """

    module: str
    goal: str
    conforms: bool
    clauses: tuple
    subject: Optional[str] = None

    @property
    def failed(self) -> List[ClauseResult]:
        return [c for c in self.clauses if not c.holds]

    def to_json(self) -> Dict[str, Any]:
        return {
            'module': self.module,
            'subject': self.subject,
            'goal': self.goal,
            'conforms': self.conforms,
            'clauses': [c.to_json() for c in self.clauses],
        }

    def to_frame(self) -> pd.DataFrame:
        """Flatten the report, nested sub-reports included, into one row per clause."""
        rows = []

        def walk(report: "ConformanceReport", depth: int):
            for c in report.clauses:
                rows.append({
                    'depth': depth,
                    'clause': str(c.info.constant),
                    'origin': c.info.origin,
                    'line': c.info.span.line,
                    'holds': c.holds,
                    'witness': _format_witness(c.witness) or '',
                    'text': c.info.text,
                })
                for sub in c.nested:
                    walk(sub, depth + 1)

        walk(self, 0)
        return pd.DataFrame(rows, columns=['depth', 'clause', 'origin', 'line', 'holds', 'witness', 'text'])


def _format_witness(witness) -> Optional[str]:
    if witness is None:
        return None
    if isinstance(witness, tuple):
        return "(" + ", ".join(str(w) for w in witness) + ")"
    return str(witness)


def clause_witness(evaluator: Evaluator, program: Program, info: ClauseInfo):
    """The least falsifying element of a failed single `no { ... }` clause, if it has that shape."""
    rules = program.rules_for(info.constant)
    if len(rules) != 1 or len(rules[0].clauses) != 1:
        return None
    literals = rules[0].clauses[0].literals
    if len(literals) != 1 or not isinstance(literals[0], NoLit):
        return None
    return evaluator.least_element(literals[0].comp)


def clause_results(infos: Iterable[ClauseInfo], store: FactStore, program: Program) -> tuple:
    """Evaluate the bookkeeping of each clause against a finished store."""
    evaluator = Evaluator(program, store)
    results = []
    for info in infos:
        holds = UserConst(info.constant) in store
        witness = None if holds else clause_witness(evaluator, program, info)
        nested = ()
        if info.origin == ClauseOrigin.EXTENDS:
            nested = tuple(
                ConformanceReport(
                    ref.domain.name,
                    str(ref.goal),
                    UserConst(ref.goal) in store,
                    clause_results([rename_clause_info(i, ref.prefix) for i in ref.domain.clauses], store, program),
                )
                for ref in info.extended
            )
        results.append(ClauseResult(info, holds, witness, nested))
    return tuple(results)


def report_from_store(domain: CompiledDomain, store: FactStore, subject: Optional[str] = None) -> ConformanceReport:
    clauses = clause_results(domain.clauses, store, domain.program)
    conforms = UserConst(domain.conforms_goal) in store
    return ConformanceReport(domain.name, str(domain.conforms_goal), conforms, clauses, subject)


def check_conforms(domain: CompiledDomain, edb: Union[CompiledModel, Sequence[GroundTerm]] = (),
                   settings: Optional[Settings] = None) -> ConformanceReport:
    """Evaluate a domain over facts and report on each conforms clause.

    Args:
        domain (CompiledDomain): The domain to check against.
        edb (CompiledModel or list): A model, or a plain list of ground facts.
        settings (Settings, optional): Supplies the fact cap.

    Returns:
        ConformanceReport: The overall flag plus one entry per clause, with witnesses for failed clauses.
    """
    subject = None
    if isinstance(edb, CompiledModel):
        subject, edb = edb.name, edb.facts
    store = evaluate(domain.program, edb, settings)
    report = report_from_store(domain, store, subject)
    logger.info(f"{subject or 'facts'} {'conforms' if report.conforms else 'does not conform'} to {domain.name}: "
                f"{len(report.failed)} of {len(report.clauses)} clauses failed")
    return report

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Text and JSON rendering of command results.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, List

from src.engine.conformance import ClauseResult, ConformanceReport
from src.engine.query import QueryResult
from src.errors import Diagnostic
from src.symtab.table import SymbolTable

# Bumped whenever a JSON document changes shape.
SCHEMA_VERSION = 1


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=False)


def diagnostics_json(diagnostics: Iterable[Diagnostic]) -> List[dict]:
    return [d.to_json() for d in diagnostics]


def symbol_lines(table: SymbolTable, include_hidden: bool = False) -> List[str]:
    """One `qualifier | name | kind | arity` line per symbol, sorted by qualifier then name."""
    frame = table.to_frame(include_hidden)
    return [f"{row.qualifier} | {row.name} | {row.kind} | {row.arity}".lstrip()
            for row in frame.itertuples(index=False)]


def symbols_json(module: str, table: SymbolTable, include_hidden: bool = False) -> dict:
    frame = table.to_frame(include_hidden)
    return {
        'version': SCHEMA_VERSION,
        'module': module,
        'symbols': [
            {'qualifier': r.qualifier, 'name': r.name, 'kind': r.kind, 'arity': int(r.arity)}
            for r in frame.itertuples(index=False)
        ],
    }


def _clause_line(result: ClauseResult, depth: int) -> List[str]:
    pad = "  " * (depth + 1)
    status = "ok  " if result.holds else "FAIL"
    lines = [f"{pad}[{status}] {result.info.path}:{result.info.span.line}: {result.info.origin} {result.info.text}"]
    if not result.holds and result.witness is not None:
        witness = result.to_json()['witness']
        lines.append(f"{pad}       witness: {witness}")
    for sub in result.nested:
        lines.extend(report_lines(sub, depth + 1))
    return lines


def report_lines(report: ConformanceReport, depth: int = 0) -> List[str]:
    """Human-readable conformance report; extended domains are indented under their clause."""
    verdict = "conforms to" if report.conforms else "does not conform to"
    subject = report.subject or "facts"
    head = f"{subject} {verdict} {report.module}" if depth == 0 else f"{'  ' * depth}{report.module}: {report.goal}"
    lines = [head]
    for clause in report.clauses:
        lines.extend(_clause_line(clause, depth))
    return lines


def report_json(report: ConformanceReport) -> dict:
    return {'version': SCHEMA_VERSION, **report.to_json()}


def query_lines(result: QueryResult) -> List[str]:
    if not result.holds:
        return ["no"]
    if not result.variables:
        return ["yes"]
    return [", ".join(f"{name} = {'_' if value is None else value}" for name, value in zip(result.variables, row))
            for row in result.rows]


def query_json(result: QueryResult) -> dict:
    return {'version': SCHEMA_VERSION, **result.to_json()}

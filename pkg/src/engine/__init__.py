"""
ModLP - Evaluation engine: fact store, stratified fixpoint, conformance and queries.
"""

from src.engine.conformance import ClauseResult, ConformanceReport, check_conforms, report_from_store
from src.engine.evaluator import Evaluator, evaluate
from src.engine.query import QueryResult, query
from src.engine.store import FactStore

__all__ = [
    "ClauseResult", "ConformanceReport", "check_conforms", "report_from_store",
    "Evaluator", "evaluate", "QueryResult", "query", "FactStore",
]

"""
ModLP - Terms, type expressions and relabeling.
"""

from src.typesys.relabel import IDENTITY, RelabelingSpec, relabel_term, relabel_type
from src.typesys.terms import (FALSE, TRUE, Accessor, Apply, IntConst, Order, StrConst, UserConst, Var,
                               Wildcard, is_ground, sorted_terms, term_key, term_order)
from src.typesys.typeexpr import (BOOLEAN, BUILTIN_TYPES, INTEGER, STRING, AllStrings, ConstSet, CtorExt,
                                  DictTypeContext, IntRange, TypeExpr, UnionRef, contains_term, expand,
                                  intersect, is_subtype, type_equal)

__all__ = [
    "FALSE", "TRUE", "Accessor", "Apply", "IntConst", "Order", "StrConst", "UserConst", "Var", "Wildcard",
    "is_ground", "sorted_terms", "term_key", "term_order",
    "BOOLEAN", "BUILTIN_TYPES", "INTEGER", "STRING", "AllStrings", "ConstSet", "CtorExt", "DictTypeContext",
    "IntRange", "TypeExpr", "UnionRef", "contains_term", "expand", "intersect", "is_subtype", "type_equal",
    "IDENTITY", "RelabelingSpec", "relabel_term", "relabel_type",
]

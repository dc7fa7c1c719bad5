"""
ModLP - Qualified symbols and symbol tables.
"""

from src.symtab.names import EMPTY, QualName, embeds, format_qualifier

__all__ = ["EMPTY", "QualName", "embeds", "format_qualifier"]

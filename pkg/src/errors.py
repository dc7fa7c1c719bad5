#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Diagnostics and the exception hierarchy.
Library code raises these; only the command-line driver turns them into exit codes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence


@dataclass(frozen=True)
class Diagnostic:
    """A single located message."""

    path: str
    line: int
    col: int
    severity: str
    code: str
    message: str

    def render(self):
        """Render the diagnostic in `file:line:col: severity: message` form.

        Returns:
            str: The formatted line.
        """
        return f"{self.path}:{self.line}:{self.col}: {self.severity}: {self.message}"

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


class ModLPError(Exception):
    """Base class for every error raised by modlp."""

    code = "internal"

    def __init__(self, message: str, path: str = "<input>", line: int = 0, col: int = 0):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        self.col = col

    def at(self, path: Optional[str] = None, line: Optional[int] = None, col: Optional[int] = None):
        """Attach a location if none is known yet.

        Args:
            path (str, optional): Source path.
            line (int, optional): 1-based line.
            col (int, optional): 1-based column.

        Returns:
            ModLPError: self, for chaining in `raise err.at(...)`.
        """
        if path is not None and self.path == "<input>":
            self.path = path
        if line is not None and not self.line:
            self.line = line
            self.col = col or 0
        return self

    @property
    def diagnostic(self) -> Diagnostic:
        return Diagnostic(self.path, self.line, self.col, "error", self.code, self.message)

    def __str__(self):
        return self.message


class LexError(ModLPError):
    code = "lex"


class ParseError(ModLPError):
    code = "syntax"


class DuplicateModuleError(ModLPError):
    code = "duplicate-module"


class CompositionError(ModLPError):
    """Raised when table composition maps at least one symbol to bottom."""

    code = "composition-conflict"

    def __init__(self, conflicts: Sequence[Any], message: Optional[str] = None):
        self.conflicts = list(conflicts)
        if message is None:
            names = ", ".join(str(c.name) for c in self.conflicts)
            message = f"incompatible definitions for {names}"
        super().__init__(message)


class ResolutionError(ModLPError):
    code = "unresolved-name"


class KindClashError(ModLPError):
    code = "kind-clash"


class TypeCheckError(ModLPError):
    code = "type-error"


class UnresolvedTypeError(TypeCheckError):
    pass


class RewriteAmbiguityError(TypeCheckError):
    code = "ambiguous-rewrite"

    def __init__(self, message: str, candidates: Sequence[Any] = ()):
        super().__init__(message)
        self.candidates = list(candidates)


class RelabelError(TypeCheckError):
    pass


class StratificationError(ModLPError):
    code = "negative-cycle"

    def __init__(self, cycle: Sequence[str], message: Optional[str] = None):
        self.cycle = list(cycle)
        super().__init__(message or f"negation or count on a recursive cycle through {', '.join(self.cycle)}")


class SymbolicConstantError(ModLPError):
    code = "symbolic-constant"


class UnsafeRuleError(ModLPError):
    code = "unsafe-rule"


class ModelIncludeError(ModLPError):
    code = "model-include"


class ResourceLimitError(ModLPError):
    code = "fact-cap"


class TransformError(ModLPError):
    code = "transform"


class ContractViolation(ModLPError):
    """Base for requires/ensures failures; carries the application record."""

    def __init__(self, message: str, application: Any = None, failed: Sequence[Any] = ()):
        super().__init__(message)
        self.application = application
        self.failed = list(failed)


class RequiresViolation(ContractViolation):
    code = "requires-violation"


class EnsuresViolation(ContractViolation):
    code = "ensures-violation"


class PipelineError(ModLPError):
    code = "pipeline"


def render_diagnostics(diagnostics: List[Diagnostic]) -> str:
    return "\n".join(d.render() for d in diagnostics)

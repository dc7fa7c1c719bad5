#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Workspace: loading source files and compiling every module they declare.

All loaded files share one module namespace. Modules are elaborated in
dependency order; a module that fails records its error and every module that
depends on it fails with a message naming it.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Type, Union

from src.config import Settings, load_settings
from src.errors import DuplicateModuleError, ModLPError, ResolutionError
from src.lang.parser import parse_source
from src.lang.syntax import RawModuleDecl
from src.modsys.elaborate import dependencies, elaborate
from src.modsys.ir import (CompiledDomain, CompiledModel, CompiledModule, CompiledSystem, CompiledTransform,
                           module_kind_name)

logger = logging.getLogger('ModLP.Workspace')

SOURCE_SUFFIX = ".4ml"

PathLike = Union[str, Path]


class Workspace:
    """A set of loaded modules and their compiled forms.

    Attributes:
        settings (Settings): Engine and driver settings.
        sources (dict): Module name to (parsed module, source path).
        modules (dict): Module name to compiled module, for modules that compiled.
        failures (dict): Module name to the error that stopped it.
        load_errors (list): Lexing, parsing and duplicate-module errors.
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or load_settings()
        self.sources: Dict[str, Tuple[RawModuleDecl, str]] = {}
        self.modules: Dict[str, CompiledModule] = {}
        self.failures: Dict[str, ModLPError] = {}
        self.load_errors: List[ModLPError] = []
        self._compiled = False

    @classmethod
    def from_paths(cls, paths: Iterable[PathLike], settings: Optional[Settings] = None) -> "Workspace":
        """Load files (or every .4ml file under directories) and compile them."""
        ws = cls(settings)
        for path in paths:
            ws.add_path(path)
        ws.compile()
        return ws

    def add_path(self, path: PathLike):
        path = Path(path)
        if path.is_dir():
            files = sorted(path.rglob(f"*{SOURCE_SUFFIX}"))
            logger.info(f"Loading {len(files)} source files from {path}")
            for file in files:
                self.add_file(file)
        else:
            self.add_file(path)

    def add_file(self, path: PathLike):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            self.load_errors.append(ModLPError(f"cannot read {path}: {exc.strerror}", str(path)))
            return
        self.add_source(text, str(path))

    def add_source(self, text: str, path: str = "<input>"):
        """Parse one source text and register its modules.

        Errors are recorded, not raised, so that one bad file does not hide the rest.
        """
        try:
            unit = parse_source(text, path)
        except ModLPError as exc:
            self.load_errors.append(exc.at(path))
            return
        for decl in unit.decls:
            if decl.name in self.sources:
                _, first = self.sources[decl.name]
                self.load_errors.append(DuplicateModuleError(
                    f"module {decl.name} is already declared in {first}", path, decl.span.line, decl.span.col))
                continue
            self.sources[decl.name] = (decl, path)
        self._compiled = False
        logger.debug(f"Parsed {path}: {len(unit.decls)} modules")

    def compile(self) -> List[ModLPError]:
        """Elaborate every registered module that is not compiled yet.

        Returns:
            list: Every load and elaboration error, in source order.
        """
        if not self.sources:
            logger.warning("Workspace contains no modules")
        for name in self.sources:
            self._elaborate(name, [])
        self._compiled = True
        logger.info(f"Compiled {len(self.modules)} modules, {len(self.failures)} failed")
        return self.errors

    def _elaborate(self, name: str, active: List[str]):
        if name in self.modules or name in self.failures:
            return
        raw, path = self.sources[name]
        if name in active:
            cycle = active[active.index(name):] + [name]
            self.failures[name] = ResolutionError(f"modules import each other cyclically: {' -> '.join(cycle)}",
                                                  path, raw.span.line, raw.span.col)
            return
        active.append(name)
        try:
            for dep in dependencies(raw):
                if dep not in self.sources:
                    continue
                self._elaborate(dep, active)
                if dep in self.failures and name not in self.failures:
                    self.failures[name] = ResolutionError(f"{name} depends on {dep}, which failed to compile",
                                                          path, raw.span.line, raw.span.col)
            if name in self.failures:
                return
            try:
                self.modules[name] = elaborate(raw, self.modules, path)
            except ModLPError as exc:
                self.failures[name] = exc.at(path, raw.span.line, raw.span.col)
                logger.debug(f"{name} failed: {exc.message}")
        finally:
            active.pop()

    @property
    def errors(self) -> List[ModLPError]:
        ordered = sorted(self.failures.values(), key=lambda e: (e.path, e.line, e.col))
        return list(self.load_errors) + ordered

    @property
    def ok(self) -> bool:
        return not self.load_errors and not self.failures

    def get(self, name: str) -> CompiledModule:
        """The compiled module called name.

        Raises:
            ModLPError: The module's own compile error, or ResolutionError if it does not exist.
        """
        if not self._compiled:
            self.compile()
        if name in self.modules:
            return self.modules[name]
        if name in self.failures:
            raise self.failures[name]
        raise ResolutionError(f"unknown module {name}")

    def _typed(self, name: str, kind: Type, what: str):
        module = self.get(name)
        if not isinstance(module, kind):
            raise ResolutionError(f"{name} is a {module_kind_name(module)}, not a {what}")
        return module

    def domain(self, name: str) -> CompiledDomain:
        return self._typed(name, CompiledDomain, "domain")

    def model(self, name: str) -> CompiledModel:
        return self._typed(name, CompiledModel, "model")

    def transform(self, name: str) -> CompiledTransform:
        return self._typed(name, CompiledTransform, "transform")

    def system(self, name: str) -> CompiledSystem:
        return self._typed(name, CompiledSystem, "transform system")

    def callable(self, name: str) -> Union[CompiledTransform, CompiledSystem]:
        return self._typed(name, (CompiledTransform, CompiledSystem), "transform")

    def names(self, kind: Optional[Type] = None) -> List[str]:
        return sorted(n for n, m in self.modules.items() if kind is None or isinstance(m, kind))

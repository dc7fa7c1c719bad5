#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Relabeling functions.

A relabeling swaps a leading qualifier prefix on every constructor of a term or
type. User constants and built-in values are left alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from src.errors import RelabelError
from src.symtab.names import EMPTY, Qualifier, format_qualifier
from src.typesys.terms import Apply, GroundTerm, IntConst, StrConst, UserConst
from src.typesys.typeexpr import CtorExt, TypeExpr, UnionRef


@dataclass(frozen=True)
class RelabelingSpec:
    """Replace the qualifier prefix `source` by `target`."""

    source: Qualifier = EMPTY
    target: Qualifier = EMPTY

    @classmethod
    def of(cls, source: Sequence[str], target: Sequence[str]) -> "RelabelingSpec":
        return cls(tuple(source), tuple(target))

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    def inverse(self) -> "RelabelingSpec":
        return RelabelingSpec(self.target, self.source)

    def prefixed(self, prefix: Sequence[str]) -> "RelabelingSpec":
        """The same relabeling seen from inside a module renamed by prefix."""
        prefix = tuple(prefix)
        return RelabelingSpec(prefix + self.source, prefix + self.target)

    def __str__(self):
        return f"ρ[{format_qualifier(self.source) or 'ε'}→{format_qualifier(self.target) or 'ε'}]"


IDENTITY = RelabelingSpec()


def relabel_term(rho: RelabelingSpec, term: GroundTerm) -> GroundTerm:
    """Apply rho to a ground term.

    Args:
        rho (RelabelingSpec): The relabeling.
        term (GroundTerm): Term to rewrite.

    Returns:
        GroundTerm: The rewritten term.

    Raises:
        RelabelError: If a constructor does not carry the source prefix.
    """
    if isinstance(term, (IntConst, StrConst, UserConst)):
        return term
    if isinstance(term, Apply):
        if not term.ctor.starts_with(rho.source):
            raise RelabelError(f"{rho} cannot rewrite {term}: {term.ctor} lacks the prefix")
        ctor = term.ctor.replace_prefix(rho.source, rho.target)
        return Apply(ctor, tuple(relabel_term(rho, a) for a in term.args))
    raise TypeError(f"relabeling is defined on ground terms only, got {term}")


def applicable(rho: RelabelingSpec, t: TypeExpr) -> bool:
    return all(name.starts_with(rho.source) for name in t.names)


def relabel_type(rho: RelabelingSpec, t: TypeExpr) -> TypeExpr:
    """Swap the prefix of every constructor and union name in t.

    Raises:
        RelabelError: If some name does not carry the source prefix.
    """
    atoms = []
    for atom in t.atoms:
        if isinstance(atom, (CtorExt, UnionRef)):
            if not atom.name.starts_with(rho.source):
                raise RelabelError(f"{rho} cannot rewrite type {t}: {atom.name} lacks the prefix")
            atoms.append(type(atom)(atom.name.replace_prefix(rho.source, rho.target)))
        else:
            atoms.append(atom)
    return TypeExpr(frozenset(atoms))

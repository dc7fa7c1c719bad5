#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Elaboration of raw modules into compiled modules.

Each elaborate_* function takes a parsed module and the already compiled modules
it imports, and returns an immutable compiled module. Domains and transforms
share the declaration and clause machinery; models resolve symbolic constants
and type-check their facts; transform systems are checked and levelled.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Mapping, Sequence, Set, Tuple

from src.errors import (CompositionError, KindClashError, ModelIncludeError, ModLPError, PipelineError,
                        ResolutionError, SymbolicConstantError, TypeCheckError)
from src.lang.printer import format_body
from src.lang.syntax import (Arith, AtomLiteral, Blank, Call, ClauseKind, CompareLiteral, ConstSetLit,
                             ContractClause, Count, CtorDecl, Fact, ImportMode, IntLit, IsLiteral, ModuleKind, Name,
                             NoLiteral, PipelineEq, RawModuleDecl, RawType, Rule, StrLit, SymConstDef, TypeRef,
                             TypeTestLiteral, UnionDecl)
from src.modsys.ir import (AtomLit, Clause, ClauseInfo, ClauseOrigin, CompareLit, CompiledDomain, CompiledModel,
                           CompiledRule, CompiledSystem, CompiledTransform, Comprehension, Equation, ExtendedRef, IsLit,
                           NoLit, TypeTestLit, module_kind_name)
from src.modsys.rename import rename_rules
from src.modsys.resolve import RuleCompiler, resolve_symbol, resolve_type
from src.modsys.stratify import build_program
from src.symtab.names import QualName
from src.symtab.table import (Field, Symbol, SymbolKind, SymbolTable, compose_all, compose_tables, new_constant,
                              new_constructor, new_symbolic, new_union, new_variable, rename_ground, rename_table)
from src.typesys.terms import FALSE, TRUE, Apply, GroundTerm, IntConst, StrConst, UserConst, Var, sorted_terms
from src.typesys.typeexpr import CtorExt, TypeExpr, contains_term, expand

logger = logging.getLogger('ModLP.Elaboration')

Env = Mapping[str, object]


def _located(exc: ModLPError, path: str, node=None) -> ModLPError:
    span = getattr(node, "span", None)
    return exc.at(path, span.line if span else None, span.col if span else None)


def _expect(env: Env, name: str, kind, what: str, path: str, node=None):
    module = env.get(name)
    if module is None:
        raise _located(ResolutionError(f"unknown {what} {name}"), path, node)
    if not isinstance(module, kind):
        raise _located(ResolutionError(f"{name} is a {module_kind_name(module)}, not a {what}"), path, node)
    return module


def _compose(tables, path: str, node=None) -> SymbolTable:
    try:
        return compose_all(tables)
    except CompositionError as exc:
        raise _located(exc, path, node)


# Walking raw syntax


def _body_literals(body) -> Iterator:
    for conj in body:
        for lit in conj:
            yield lit
            if isinstance(lit, NoLiteral) and lit.comp is not None:
                yield from _body_literals(lit.comp.body)
            if isinstance(lit, CompareLiteral):
                for side in (lit.left, lit.right):
                    yield from _count_literals(side)


def _count_literals(expr) -> Iterator:
    if isinstance(expr, Count):
        yield from _body_literals(expr.comp.body)
    elif isinstance(expr, Arith):
        yield from _count_literals(expr.left)
        yield from _count_literals(expr.right)


def _raw_types(items) -> Iterator[RawType]:
    """Every written type of a module body, declarations and literals alike."""
    for item in items:
        if isinstance(item, CtorDecl):
            for f in item.fields:
                yield f.type
        elif isinstance(item, UnionDecl):
            yield item.type
        elif isinstance(item, (Rule, ContractClause)):
            for lit in _body_literals(item.body):
                if isinstance(lit, (IsLiteral, TypeTestLiteral)):
                    yield lit.type


def _bare_heads(items) -> List[Name]:
    return [h for item in items if isinstance(item, Rule) for h in item.heads if isinstance(h, Name)]


def _variable_uses(term) -> Iterator[Name]:
    if isinstance(term, Name):
        if term.is_simple and term.text[:1].islower():
            yield term
    elif isinstance(term, Call):
        for arg in term.args:
            yield from _variable_uses(arg)
    elif isinstance(term, Arith):
        yield from _variable_uses(term.left)
        yield from _variable_uses(term.right)
    elif isinstance(term, Count):
        for h in term.comp.heads:
            yield from _variable_uses(h)


def _atom_args(term) -> Iterator[Name]:
    if isinstance(term, Call):
        for arg in term.args:
            yield from _variable_uses(arg)


def _variable_positions(item) -> Iterator[Name]:
    if isinstance(item, Rule):
        for h in item.heads:
            yield from _atom_args(h)
    for lit in _body_literals(item.body):
        if isinstance(lit, AtomLiteral):
            yield from _atom_args(lit.term)
        elif isinstance(lit, NoLiteral):
            if lit.atom is not None:
                yield from _atom_args(lit.atom)
            else:
                for h in lit.comp.heads:
                    yield from _variable_uses(h)
        elif isinstance(lit, (IsLiteral, TypeTestLiteral)):
            yield from _variable_uses(lit.term)
        elif isinstance(lit, CompareLiteral):
            yield from _variable_uses(lit.left)
            yield from _variable_uses(lit.right)


def check_kind_clash(items, module: str, path: str):
    """Reject a name used both as a variable and as a bare derived constant of module.

    Raises:
        KindClashError: At the first variable use of such a name.
    """
    constants = {h.text for h in _bare_heads(items) if h.is_simple}
    for item in items:
        if not isinstance(item, (Rule, ContractClause)):
            continue
        for use in _variable_positions(item):
            if use.text in constants:
                raise KindClashError(f"{use.text} appears both as a variable and as the derived-kind constant "
                                     f"{module}.{use.text}", path, use.span.line, use.span.col)


# Declarations


class _OwnUnions:
    """Type context that sees a module's own union bodies before they are in a table."""

    def __init__(self, table: SymbolTable, unions: Mapping[QualName, TypeExpr]):
        self.table, self.unions = table, unions

    def union_body(self, name):
        if name in self.unions:
            return self.unions[name]
        return self.table.union_body(name)

    def ctor_fields(self, name):
        return self.table.ctor_fields(name)


def declare_types(items, base: SymbolTable, path: str) -> List[Symbol]:
    """Build the table entries for a module's own type declarations.

    Names are registered before any type is resolved, so declarations may refer
    to each other in any order. Unknown names inside `{...}` become new-kind
    constants, and mentioning Boolean introduces TRUE and FALSE.

    Args:
        items (tuple): The module body.
        base (SymbolTable): Imported symbols.
        path (str): Source path for diagnostics.

    Returns:
        list: Constructors, unions and constants declared by the module.
    """
    decls = [item for item in items if isinstance(item, (CtorDecl, UnionDecl))]
    placeholders: Dict[QualName, Symbol] = {}
    for decl in decls:
        name = QualName((), decl.name)
        if name in placeholders:
            raise _located(CompositionError([], f"{decl.name} is declared twice"), path, decl)
        if isinstance(decl, CtorDecl):
            kind = SymbolKind.DERIVED if decl.marker is None else SymbolKind.NEW
            placeholders[name] = Symbol(name, kind, len(decl.fields), TypeExpr.of(CtorExt(name)))
        else:
            placeholders[name] = new_union(name, TypeExpr(frozenset()))

    constants: Dict[QualName, Symbol] = {}
    raw_types = list(_raw_types(items))
    if any(isinstance(alt, TypeRef) and alt.name.text == "Boolean" for t in raw_types for alt in t.alternatives):
        for value in (TRUE, FALSE):
            if value.name not in base:
                constants[value.name] = new_constant(value.name)
    working = base.with_symbols(placeholders.values()).with_symbols(constants.values())
    for t in raw_types:
        for alt in t.alternatives:
            if not isinstance(alt, ConstSetLit):
                continue
            for v in alt.values:
                if isinstance(v, Name) and v.is_simple and resolve_symbol(working, QualName((), v.text)) is None:
                    constants[QualName((), v.text)] = new_constant(QualName((), v.text))
    working = working.with_symbols(constants.values())

    def resolve(raw: RawType) -> TypeExpr:
        try:
            return resolve_type(raw, working)
        except ModLPError as exc:
            raise exc.at(path)

    raw_unions = {QualName((), d.name): resolve(d.type) for d in decls if isinstance(d, UnionDecl)}
    ctx = _OwnUnions(working, raw_unions)
    symbols: List[Symbol] = list(constants.values())
    for decl in decls:
        name = QualName((), decl.name)
        if isinstance(decl, UnionDecl):
            symbols.append(new_union(name, expand(raw_unions[name], ctx)))
            continue
        fields = [Field(f.label, expand(resolve(f.type), ctx)) for f in decl.fields]
        functional = decl.split if decl.marker == "fun" else None
        symbols.append(new_constructor(name, fields, derived=decl.marker is None, functional=functional))
    return symbols


def desugar_fun(ctor: Symbol, constant: QualName) -> Tuple[CompiledRule, str, List[Symbol]]:
    """The implicit conforms clause of a `fun` constructor.

    For `F ::= fun (d1, ..., dk -> r1, ..., rm)` no two facts may agree on the
    d's and differ on some r. The clause is

        no { F(d, r) | F(d, r), F(d, r'), r1 != r1' ; ... ; F(d, r), F(d, r'), rm != rm' }

    Args:
        ctor (Symbol): The functional constructor.
        constant (QualName): Per-clause constant to derive when the clause holds.

    Returns:
        tuple: The rule, its display text, and the hidden variables it uses.
    """
    k = ctor.functional
    m = ctor.arity - k
    tag = ctor.name.base
    dom = [Var(f"~{tag}.d{i + 1}") for i in range(k)]
    ran = [Var(f"~{tag}.r{i + 1}") for i in range(m)]
    other = [Var(f"~{tag}.s{i + 1}") for i in range(m)]
    first = Apply(ctor.name, tuple(dom + ran))
    second = Apply(ctor.name, tuple(dom + other))
    disjuncts = tuple(
        (AtomLit(first), AtomLit(second), CompareLit("!=", ran[j], other[j])) for j in range(m)
    )
    rule = CompiledRule(UserConst(constant), (
        Clause(UserConst(constant), (NoLit(Comprehension((first,), disjuncts, frozenset())),)),
    ))
    labels = [f.label or f"#{i + 1}" for i, f in enumerate(ctor.fields)]
    text = f"{tag} is functional ({', '.join(labels[:k])} -> {', '.join(labels[k:])})"
    hidden = [new_variable(v.name, hidden=True) for v in dom + ran + other]
    return rule, text, hidden


def _conjunction_rule(goal: QualName, parts: Sequence[QualName]) -> CompiledRule:
    head = UserConst(goal)
    return CompiledRule(head, (Clause(head, tuple(AtomLit(UserConst(p)) for p in parts)),))


def check_closed(rules, table: SymbolTable, path: str):
    """Every constructor and constant a rule mentions must be in the table."""
    missing: Set[str] = set()

    def term(t):
        if isinstance(t, Apply):
            if t.ctor not in table:
                missing.add(str(t.ctor))
            for a in t.args:
                term(a)
        elif isinstance(t, UserConst) and t.name not in table:
            missing.add(str(t.name))

    def type_(t: TypeExpr):
        for name in t.names:
            if name not in table:
                missing.add(str(name))

    def literals(lits):
        for lit in lits:
            if isinstance(lit, AtomLit):
                term(lit.term)
            elif isinstance(lit, (IsLit, TypeTestLit)):
                type_(lit.type)
                if isinstance(lit, TypeTestLit):
                    term(lit.term)
            elif isinstance(lit, CompareLit):
                for side in (lit.left, lit.right):
                    if hasattr(side, "comp"):
                        comp(side.comp)
                    else:
                        term(side)
            elif isinstance(lit, NoLit):
                comp(lit.comp)

    def comp(c: Comprehension):
        for h in c.heads:
            term(h)
        for conj in c.disjuncts:
            literals(conj)

    for rule in rules:
        for clause in rule.clauses:
            term(clause.head)
            literals(clause.literals)
    if missing:
        raise ResolutionError(f"rules mention symbols missing from the table: {', '.join(sorted(missing))}", path)


@dataclass
class _Clauses:
    """Numbered contract clauses of one kind plus their conjunction constant."""

    goal: QualName
    infos: List[ClauseInfo]

    def constant(self, index: int) -> QualName:
        return QualName(self.goal.qualifiers, f"{self.goal.base}{index}")

    def conjunction(self) -> CompiledRule:
        return _conjunction_rule(self.goal, [i.constant for i in self.infos])


def _count_clauses(items, kind: ClauseKind, with_fun: bool) -> int:
    n = 0
    for item in items:
        if isinstance(item, ContractClause) and item.kind is kind:
            n += 1
        elif with_fun and isinstance(item, CtorDecl) and item.marker == "fun":
            n += 1
    return n


class _ProgramModule:
    """Shared elaboration of the rule-carrying modules (domains and transforms)."""

    def __init__(self, raw: RawModuleDecl, path: str, base: SymbolTable, imported_rules, labels=()):
        self.raw, self.path, self.name = raw, path, raw.name
        self.base = base
        self.imported_rules = list(imported_rules)
        self.labels = tuple(labels)
        self.hidden_vars: List[Symbol] = []

    def qualified(self, base: str) -> QualName:
        return QualName((self.name,), base)

    def own_symbols(self, clause_kinds: Sequence[Tuple[ClauseKind, str, bool, int]]) -> List[Symbol]:
        symbols = declare_types(self.raw.body, self.base, self.path)
        seen: Set[str] = set()
        for head in _bare_heads(self.raw.body):
            if not head.is_simple:
                raise ResolutionError(f"bare head {head} must be a simple name", self.path, head.span.line,
                                      head.span.col)
            if head.text not in seen:
                seen.add(head.text)
                symbols.append(new_constant(self.qualified(head.text), derived=True))
        for kind, goal, with_fun, extra in clause_kinds:
            count = _count_clauses(self.raw.body, kind, with_fun) + extra
            symbols.append(new_constant(self.qualified(goal), derived=True))
            symbols.extend(new_constant(self.qualified(f"{goal}{i}"), derived=True, hidden=True)
                           for i in range(1, count + 1))
        return symbols

    def build_table(self, own: List[Symbol]) -> SymbolTable:
        try:
            return compose_tables(self.base, SymbolTable.of(own))
        except CompositionError as exc:
            raise _located(exc, self.path, self.raw)

    def compile(self, table: SymbolTable, clause_sets: Mapping[ClauseKind, _Clauses], with_fun: bool):
        """Compile own rules and the numbered clauses; returns (rules, infos, variable symbols)."""
        check_kind_clash(self.raw.body, self.name, self.path)
        compiler = RuleCompiler(table, self.name, self.path, self.labels)
        rules: List[CompiledRule] = []
        counters = {kind: 0 for kind in clause_sets}
        for item in self.raw.body:
            if isinstance(item, Rule):
                rules.extend(compiler.compile_rule(item))
            elif isinstance(item, ContractClause):
                if item.kind not in clause_sets:
                    raise ResolutionError(f"{item.kind.value} clauses are not allowed in a "
                                          f"{self.raw.kind.value}", self.path, item.span.line, item.span.col)
                clauses = clause_sets[item.kind]
                counters[item.kind] += 1
                constant = clauses.constant(counters[item.kind])
                rules.append(compiler.compile_clause(constant, item.body, item))
                clauses.infos.append(ClauseInfo(counters[item.kind], constant, item.kind.value,
                                                format_body(item.body), item.span, self.path))
            elif with_fun and isinstance(item, CtorDecl) and item.marker == "fun":
                clauses = clause_sets[ClauseKind.CONFORMS]
                counters[ClauseKind.CONFORMS] += 1
                constant = clauses.constant(counters[ClauseKind.CONFORMS])
                rule, text, hidden = desugar_fun(table[QualName((), item.name)], constant)
                rules.append(rule)
                self.hidden_vars.extend(hidden)
                clauses.infos.append(ClauseInfo(counters[ClauseKind.CONFORMS], constant, ClauseOrigin.FUNCTIONAL,
                                                text, item.span, self.path))
        variables = [new_variable(v) for v in sorted(compiler.variables)]
        return rules, counters, variables + self.hidden_vars

    def finish(self, table: SymbolTable, variables: List[Symbol], rules: List[CompiledRule]):
        table = table.with_symbols(s for s in variables if s.name not in table or table[s.name].hidden)
        all_rules = list(dict.fromkeys(replace(r, stratum=0) for r in self.imported_rules + rules))
        check_closed(all_rules, table, self.path)
        try:
            program = build_program(table, all_rules)
        except ModLPError as exc:
            raise _located(exc, self.path, self.raw)
        return table, program


def elaborate_domain(raw: RawModuleDecl, env: Env, path: str = "<input>") -> CompiledDomain:
    """Compile a domain against its already compiled imports.

    Args:
        raw (RawModuleDecl): The parsed domain.
        env (Mapping): Compiled modules by name.
        path (str, optional): Source path for diagnostics.

    Returns:
        CompiledDomain: Table, stratified rules and conforms bookkeeping.

    Raises:
        CompositionError: If the imported and own tables conflict.
        ResolutionError: If a name cannot be resolved.
        KindClashError: If a name is both a variable and a derived constant.
        TypeCheckError: If a rule is ill-typed.
        StratificationError: If negation or count is recursive.
    """
    tables, imported_rules, lineage, extended = [], [], set(), []
    for imp in raw.imported(ImportMode.INCLUDES, ImportMode.EXTENDS):
        dom = _expect(env, imp.target, CompiledDomain, "domain", path, imp)
        if imp.prefix:
            tables.append(rename_table(imp.prefix, dom.table))
            imported_rules.extend(rename_rules(dom.rules, (imp.prefix,), dom.table))
        else:
            tables.append(dom.table)
            imported_rules.extend(dom.rules)
            lineage.add(dom.name)
            lineage |= dom.lineage
        if imp.mode is ImportMode.EXTENDS:
            extended.append(ExtendedRef(dom, (imp.prefix,) if imp.prefix else ()))
    base = _compose(tables, path, raw)

    module = _ProgramModule(raw, path, base, imported_rules)
    own = module.own_symbols([(ClauseKind.CONFORMS, "conforms", True, 1 if extended else 0)])
    table = module.build_table(own)
    conforms = _Clauses(module.qualified("conforms"), [])
    rules, counters, variables = module.compile(table, {ClauseKind.CONFORMS: conforms}, with_fun=True)

    if extended:
        index = counters[ClauseKind.CONFORMS] + 1
        constant = conforms.constant(index)
        goals = [ref.goal for ref in extended]
        rules.append(_conjunction_rule(constant, goals))
        conforms.infos.append(ClauseInfo(index, constant, ClauseOrigin.EXTENDS,
                                         ", ".join(str(g) for g in goals), raw.span, path, tuple(extended)))
    rules.append(conforms.conjunction())

    table, program = module.finish(table, variables, rules)
    logger.info(f"Elaborated domain {raw.name}: {len(table)} symbols, {len(program.rules)} rules, "
                f"{len(conforms.infos)} conforms clauses")
    return CompiledDomain(raw.name, table, program, conforms.goal, tuple(conforms.infos), frozenset(lineage), path)


def elaborate_transform(raw: RawModuleDecl, env: Env, path: str = "<input>") -> CompiledTransform:
    """Compile a transform: its body composed with the label-renamed signature domains."""
    inputs, outputs, tables, imported_rules = [], [], [], []
    for imp in raw.imported(ImportMode.INPUT, ImportMode.OUTPUT):
        dom = _expect(env, imp.target, CompiledDomain, "domain", path, imp)
        (inputs if imp.mode is ImportMode.INPUT else outputs).append((imp.prefix, dom))
        tables.append(rename_table(imp.prefix, dom.table))
        imported_rules.extend(rename_rules(dom.rules, (imp.prefix,), dom.table))
    base = _compose(tables, path, raw)
    labels = [label for label, _ in inputs + outputs]

    module = _ProgramModule(raw, path, base, imported_rules, labels)
    own = module.own_symbols([(ClauseKind.REQUIRES, "requires", False, 0),
                              (ClauseKind.ENSURES, "ensures", False, 0)])
    table = module.build_table(own)
    requires = _Clauses(module.qualified("requires"), [])
    ensures = _Clauses(module.qualified("ensures"), [])
    rules, _, variables = module.compile(table, {ClauseKind.REQUIRES: requires, ClauseKind.ENSURES: ensures},
                                         with_fun=False)
    rules.extend([requires.conjunction(), ensures.conjunction()])
    table, program = module.finish(table, variables, rules)
    logger.info(f"Elaborated transform {raw.name}: {len(inputs)} inputs, {len(outputs)} outputs, "
                f"{len(program.rules)} rules")
    return CompiledTransform(raw.name, tuple(inputs), tuple(outputs), table, program, requires.goal, ensures.goal,
                             tuple(requires.infos + ensures.infos), path)


# Models


class _FactResolver:
    """Grounds model terms, resolving symbolic constants on demand."""

    def __init__(self, model: str, table: SymbolTable, defs: Mapping[str, SymConstDef], path: str):
        self.model, self.table, self.defs, self.path = model, table, defs, path
        self.values: Dict[str, GroundTerm] = {}
        self._active: List[str] = []

    def constant(self, name: str) -> GroundTerm:
        if name in self.values:
            return self.values[name]
        if name in self._active:
            cycle = self._active[self._active.index(name):] + [name]
            node = self.defs[name]
            raise SymbolicConstantError(f"symbolic constants are defined cyclically: {' -> '.join(cycle)}",
                                        self.path, node.span.line, node.span.col)
        self._active.append(name)
        value = self.ground(self.defs[name].term)
        self._active.pop()
        self.values[name] = value
        return value

    def ground(self, raw, root: Sequence[str] = ()) -> GroundTerm:
        if isinstance(raw, IntLit):
            return IntConst(raw.value)
        if isinstance(raw, StrLit):
            return StrConst(raw.value)
        if isinstance(raw, Blank):
            raise ResolutionError("facts must be ground, found '_'", self.path, raw.span.line, raw.span.col)
        if isinstance(raw, Call):
            ctor = resolve_symbol(self.table, QualName.of(*raw.name.parts), root)
            sym = self.table.get(ctor) if ctor else None
            if sym is None or not sym.is_constructor:
                raise ResolutionError(f"unresolved constructor {raw.name}", self.path, raw.span.line, raw.span.col)
            if sym.arity != len(raw.args):
                raise TypeCheckError(f"{ctor} takes {sym.arity} arguments, {len(raw.args)} given", self.path,
                                     raw.span.line, raw.span.col)
            return Apply(ctor, tuple(self.ground(a, ctor.qualifiers) for a in raw.args))
        if raw.is_simple and raw.text in self.defs:
            return self.constant(raw.text)
        hit = resolve_symbol(self.table, QualName.of(*raw.parts), root)
        if hit is not None:
            sym = self.table[hit]
            if sym.kind is SymbolKind.SYMBOLIC:
                return sym.value
            if sym.is_constant:
                return UserConst(hit)
        if raw.is_simple and raw.text[:1].islower():
            raise SymbolicConstantError(f"undefined symbolic constant {raw.text}", self.path, raw.span.line,
                                        raw.span.col)
        raise ResolutionError(f"unresolved name {raw}", self.path, raw.span.line, raw.span.col)


def _check_fact(fact: GroundTerm, table: SymbolTable, path: str, node=None):
    if not isinstance(fact, Apply) or table.kind_of(fact.ctor) is not SymbolKind.NEW:
        outer = fact.ctor if isinstance(fact, Apply) else fact
        raise _located(TypeCheckError(f"fact {fact}: {outer} is not a new-kind constructor"), path, node)
    if not contains_term(TypeExpr.of(CtorExt(fact.ctor)), fact, table):
        raise _located(TypeCheckError(f"ill-typed fact {fact}"), path, node)


def elaborate_model(raw: RawModuleDecl, env: Env, path: str = "<input>") -> CompiledModel:
    """Compile a model: resolve symbolic constants, merge includes and type-check every fact.

    Raises:
        ModelIncludeError: If an included model's domain is not part of this model's domain.
        SymbolicConstantError: If symbolic constants are cyclic or undefined.
        TypeCheckError: If a fact is ill-typed or its outer constructor is not new-kind.
    """
    of = raw.imported(ImportMode.OF)[0]
    domain = _expect(env, of.target, CompiledDomain, "domain", path, of)
    tables, facts = [domain.table], []
    for imp in raw.imported(ImportMode.INCLUDES):
        model = _expect(env, imp.target, CompiledModel, "model", path, imp)
        if imp.prefix:
            dom_table = rename_table(imp.prefix, model.domain.table)
            tables.append(rename_table(imp.prefix, model.table))
            facts.extend(rename_ground(f, (imp.prefix,), model.table) for f in model.facts)
        else:
            dom_table = model.domain.table
            tables.append(model.table)
            facts.extend(model.facts)
        missing = sorted(str(n) for n in dom_table if n not in domain.table)
        if missing:
            shown = ", ".join(missing[:5]) + (" ..." if len(missing) > 5 else "")
            raise ModelIncludeError(f"model {imp.target} is over {model.domain.name}, which {domain.name} does not "
                                    f"include (missing {shown})", path, imp.span.line, imp.span.col)
    base = _compose(tables, path, raw)

    defs: Dict[str, SymConstDef] = {}
    for item in raw.body:
        if isinstance(item, SymConstDef):
            if item.name in defs:
                raise SymbolicConstantError(f"symbolic constant {item.name} is defined twice", path,
                                            item.span.line, item.span.col)
            defs[item.name] = item
    resolver = _FactResolver(raw.name, base, defs, path)
    own_facts = []
    for item in raw.body:
        if isinstance(item, SymConstDef):
            value = resolver.constant(item.name)
            if isinstance(value, Apply):
                _check_fact(value, base, path, item)
                own_facts.append(value)
        elif isinstance(item, Fact):
            fact = resolver.ground(item.term)
            _check_fact(fact, base, path, item)
            own_facts.append(fact)

    symconsts = {QualName((raw.name,), name): resolver.values[name] for name in defs}
    table = _compose([base, SymbolTable.of(new_symbolic(n, v) for n, v in symconsts.items())], path, raw)
    all_facts = tuple(sorted_terms(dict.fromkeys(own_facts + facts)))
    logger.info(f"Elaborated model {raw.name} of {domain.name}: {len(all_facts)} facts, "
                f"{len(symconsts)} symbolic constants")
    return CompiledModel(raw.name, domain, table, all_facts, symconsts, path)


# Transform systems


def _signature(module) -> Tuple[Tuple[Tuple[str, CompiledDomain], ...], Tuple[Tuple[str, CompiledDomain], ...]]:
    return module.inputs, module.outputs


def elaborate_system(raw: RawModuleDecl, env: Env, path: str = "<input>") -> CompiledSystem:
    """Check a transform system's equations and order them into dependency levels.

    Raises:
        PipelineError: On unknown callees, arity or domain mismatches, unbound or
            doubly defined variables, undefined outputs, or cyclic equations.
    """
    inputs = tuple((i.prefix, _expect(env, i.target, CompiledDomain, "domain", path, i))
                   for i in raw.imported(ImportMode.INPUT))
    outputs = tuple((o.prefix, _expect(env, o.target, CompiledDomain, "domain", path, o))
                    for o in raw.imported(ImportMode.OUTPUT))
    equations = [Equation(item.targets, item.callee, item.args, item.span)
                 for item in raw.body if isinstance(item, PipelineEq)]

    def fail(message, node=None):
        span = node.span if node is not None else raw.span
        return PipelineError(message, path, span.line, span.col)

    callees: Dict[str, object] = {}
    producer: Dict[str, Tuple[int, CompiledDomain]] = {}
    domains: Dict[str, CompiledDomain] = dict(inputs)
    for n, eq in enumerate(equations):
        callee = env.get(eq.callee)
        if not isinstance(callee, (CompiledTransform, CompiledSystem)):
            raise fail(f"{eq.callee} is not a transform", eq)
        callees[eq.callee] = callee
        ins, outs = _signature(callee)
        if len(eq.args) != len(ins):
            raise fail(f"{eq.callee} takes {len(ins)} inputs, {len(eq.args)} given", eq)
        if len(eq.targets) != len(outs):
            raise fail(f"{eq.callee} returns {len(outs)} outputs, {len(eq.targets)} bound", eq)
        for target, (_, dom) in zip(eq.targets, outs):
            if target in domains:
                raise fail(f"pipeline variable {target} is defined more than once", eq)
            domains[target] = dom
            producer[target] = (n, dom)

    # Arguments that are neither labels nor targets name models in scope.
    constants: Dict[str, CompiledModel] = {}
    deps: List[Set[int]] = []
    for eq in equations:
        ins, _ = _signature(callees[eq.callee])
        needs = set()
        for arg, (label, expected) in zip(eq.args, ins):
            if arg in domains:
                actual = domains[arg]
            elif isinstance(env.get(arg), CompiledModel):
                constants[arg] = env[arg]
                actual = constants[arg].domain
            else:
                raise fail(f"unbound pipeline variable {arg}", eq)
            if not expected.accepts(actual):
                raise fail(f"{arg} is over {actual.name}, but {eq.callee}.{label} expects {expected.name}", eq)
            if arg in producer:
                needs.add(producer[arg][0])
        deps.append(needs)
    for label, dom in outputs:
        if label not in producer:
            raise fail(f"output {label} is never defined")
        if not dom.accepts(domains[label]):
            raise fail(f"output {label} is over {domains[label].name}, expected {dom.name}")

    levels: List[Tuple[Equation, ...]] = []
    done: Set[int] = set()
    while len(done) < len(equations):
        ready = [n for n in range(len(equations)) if n not in done and deps[n] <= done]
        if not ready:
            stuck = sorted(t for n in range(len(equations)) if n not in done for t in equations[n].targets)
            raise fail(f"equations depend on each other cyclically through {', '.join(stuck)}")
        levels.append(tuple(equations[n] for n in ready))
        done.update(ready)
    logger.info(f"Elaborated transform system {raw.name}: {len(equations)} equations in {len(levels)} levels")
    return CompiledSystem(raw.name, inputs, outputs, tuple(equations), tuple(levels), callees, constants, path)


ELABORATORS = {
    ModuleKind.DOMAIN: elaborate_domain,
    ModuleKind.MODEL: elaborate_model,
    ModuleKind.TRANSFORM: elaborate_transform,
    ModuleKind.SYSTEM: elaborate_system,
}


def dependencies(raw: RawModuleDecl) -> List[str]:
    """Names of the modules raw must be elaborated after."""
    names = [imp.target for imp in raw.imports]
    equations = [item for item in raw.body if isinstance(item, PipelineEq)]
    names.extend(eq.callee for eq in equations)
    local = {imp.prefix for imp in raw.imports} | {t for eq in equations for t in eq.targets}
    names.extend(arg for eq in equations for arg in eq.args if arg not in local)
    return list(dict.fromkeys(names))


def elaborate(raw: RawModuleDecl, env: Env, path: str = "<input>"):
    return ELABORATORS[raw.kind](raw, env, path)

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Rule compilation.

Turns raw rules and contract clauses into planned clauses over a finished symbol
table: names are resolved (inner names first under the qualifier of their
enclosing constructor, then from the root), variable types are inferred from the
positions variables occupy, heads are type-checked and, where a head variable
only fits after swapping a qualifier prefix, rewritten with the unique relabeling
that makes it fit.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.errors import (ModLPError, ResolutionError, RewriteAmbiguityError, TypeCheckError, UnresolvedTypeError,
                        UnsafeRuleError)
from src.lang.printer import format_term
from src.lang.syntax import (NO_SPAN, Arith, AtomLiteral, Blank, Body, Call, CompareLiteral, Count, IntLit, IsLiteral,
                             Name, NoLiteral, RawType, Rule, StrLit, TypeRef, TypeTestLiteral)
from src.modsys.ir import (ArithExpr, AtomLit, Clause, CompareLit, CompiledRule, Comprehension, CountExpr, IsLit,
                           NoLit, Relabeled, TypeTestLit, comprehension_vars, literal_vars, term_vars)
from src.modsys.plan import bound_after, reorder_for_safety
from src.symtab.names import EMPTY, Qualifier, QualName
from src.symtab.table import SymbolKind, SymbolTable, lookup
from src.typesys.relabel import RelabelingSpec, applicable, relabel_type
from src.typesys.terms import Accessor, Apply, GroundTerm, IntConst, StrConst, UserConst, Var, Wildcard
from src.typesys.typeexpr import (BUILTIN_TYPES, INTEGER, NATURAL, ConstSet, CtorExt, TypeExpr, UnionRef, contains_term,
                                  expand, intersect, is_subtype)

logger = logging.getLogger('ModLP.Elaboration')

TypeEnv = Dict[str, Optional[TypeExpr]]


def _is_variable_name(text: str) -> bool:
    return text[:1].islower() or text[:1] in ("_", "~")


def _mentioned(lit) -> List[str]:
    """Variables a literal binds or tests, left to right; comprehension locals excluded."""
    if isinstance(lit, AtomLit):
        return list(term_vars(lit.term))
    if isinstance(lit, IsLit):
        return [lit.var.name]
    if isinstance(lit, TypeTestLit):
        return list(term_vars(lit.term))
    if isinstance(lit, CompareLit):
        return list(term_vars(lit.left)) + list(term_vars(lit.right))
    return sorted(lit.comp.captured)


def resolve_symbol(table: SymbolTable, name: QualName, root: Sequence[str] = EMPTY) -> Optional[QualName]:
    """lookup under the enclosing qualifier first, then from the root."""
    hit = lookup(table, root, name) if root else None
    if hit is None:
        hit = lookup(table, EMPTY, name)
    return hit


def resolve_type(raw: RawType, table: SymbolTable, root: Sequence[str] = EMPTY,
                 new_constant: Optional[Callable[[Name], QualName]] = None) -> TypeExpr:
    """Resolve a written type to atoms; union names stay as references.

    Args:
        raw (RawType): The written union of alternatives.
        table (SymbolTable): Names visible to the type.
        root (Sequence[str], optional): Qualifier of the enclosing constructor.
        new_constant (callable, optional): Called for unknown names inside `{...}`; returns the constant to use.

    Raises:
        ResolutionError: If a name resolves to nothing usable as a type.
    """
    atoms = []
    for alt in raw.alternatives:
        if isinstance(alt, TypeRef):
            atoms.extend(_resolve_type_ref(alt.name, table, root).atoms)
            continue
        values = []
        for v in alt.values:
            values.append(_resolve_const_value(v, table, root, new_constant))
        atoms.append(ConstSet(frozenset(values)))
    return TypeExpr(frozenset(atoms))


def _resolve_type_ref(name: Name, table: SymbolTable, root: Sequence[str]) -> TypeExpr:
    if name.is_simple and name.text in BUILTIN_TYPES:
        return BUILTIN_TYPES[name.text]
    hit = resolve_symbol(table, QualName.of(*name.parts), root)
    if hit is None:
        raise ResolutionError(f"unresolved type name {name}", line=name.span.line, col=name.span.col)
    sym = table[hit]
    if sym.kind is SymbolKind.UNION:
        return TypeExpr.of(UnionRef(hit))
    if sym.is_constructor:
        return TypeExpr.of(CtorExt(hit))
    if sym.is_constant:
        return TypeExpr.constants(UserConst(hit))
    raise ResolutionError(f"{hit} ({sym.kind.glyph}) cannot be used as a type", line=name.span.line,
                          col=name.span.col)


def _resolve_const_value(v, table: SymbolTable, root: Sequence[str], new_constant) -> GroundTerm:
    if isinstance(v, IntLit):
        return IntConst(v.value)
    if isinstance(v, StrLit):
        return StrConst(v.value)
    hit = resolve_symbol(table, QualName.of(*v.parts), root)
    if hit is not None and table[hit].is_constant:
        return UserConst(hit)
    if hit is None and new_constant is not None and v.is_simple:
        return UserConst(new_constant(v))
    raise ResolutionError(f"{v} is not a constant", line=v.span.line, col=v.span.col)


def infer_rewrite(rhs: TypeExpr, lhs: TypeExpr, candidates: Iterable[Qualifier], ctx) -> RelabelingSpec:
    """Find the unique relabeling that maps rhs into lhs.

    Every ordered pair of distinct candidate prefixes applicable to rhs is tried;
    a pair whose relabeled type names unknown symbols simply fails.

    Args:
        rhs (TypeExpr): Inferred type of the variable in the body.
        lhs (TypeExpr): Type required by the head position.
        candidates (iterable): Qualifier prefixes to try, ε included.
        ctx (TypeContext): Resolves names.

    Returns:
        RelabelingSpec: The single passing relabeling.

    Raises:
        TypeCheckError: If no relabeling passes.
        RewriteAmbiguityError: If more than one passes; carries them all.
    """
    prefixes = sorted(set(tuple(c) for c in candidates))
    passing: List[RelabelingSpec] = []
    for p in prefixes:
        for q in prefixes:
            if p == q:
                continue
            rho = RelabelingSpec(p, q)
            if not applicable(rho, rhs):
                continue
            try:
                if is_subtype(relabel_type(rho, rhs), lhs, ctx):
                    passing.append(rho)
            except UnresolvedTypeError:
                continue
    if not passing:
        raise TypeCheckError(f"type {rhs} does not fit {lhs}, and no relabeling makes it fit")
    if len(passing) > 1:
        listed = ", ".join(str(r) for r in passing)
        raise RewriteAmbiguityError(f"type {rhs} fits {lhs} under several relabelings: {listed}", passing)
    return passing[0]


def rewrite_candidates(table: SymbolTable, labels: Iterable[str] = ()) -> Tuple[Qualifier, ...]:
    """ε, the signature labels and every qualifier of a constructor or union."""
    found: Set[Qualifier] = {EMPTY}
    found.update((label,) for label in labels)
    for name in table:
        sym = table[name]
        if sym.is_constructor or sym.kind is SymbolKind.UNION:
            found.add(name.qualifiers)
    return tuple(sorted(found))


class RuleCompiler:
    """Compile the rules and clauses of one module.

    Args:
        table (SymbolTable): The module's finished table (variables may be missing).
        module (str): Qualifier of the module's derived constants.
        path (str, optional): Source path for diagnostics.
        labels (iterable, optional): Transform signature labels, used as rewrite candidates.
    """

    def __init__(self, table: SymbolTable, module: str, path: str = "<input>", labels: Iterable[str] = ()):
        self.table = table
        self.module = module
        self.path = path
        self.candidates = rewrite_candidates(table, labels)
        self.variables: Set[str] = set()

    # Errors carry the module's path and the raw item's position.

    def _fail(self, exc_type, message: str, node=None, **extra):
        span = getattr(node, "span", None)
        exc = exc_type(message, **extra) if extra else exc_type(message)
        return exc.at(self.path, span.line if span else None, span.col if span else None)

    # Names and terms

    def resolve_term(self, raw, root: Sequence[str] = EMPTY, in_head: bool = False):
        if isinstance(raw, IntLit):
            return IntConst(raw.value)
        if isinstance(raw, StrLit):
            return StrConst(raw.value)
        if isinstance(raw, Blank):
            if in_head:
                raise self._fail(TypeCheckError, "'_' cannot appear in a head", raw)
            return Wildcard()
        if isinstance(raw, Call):
            ctor = self._resolve_ctor(raw, root)
            args = tuple(self.resolve_term(a, ctor.qualifiers, in_head) for a in raw.args)
            return Apply(ctor, args)
        if isinstance(raw, Name):
            return self._resolve_name(raw, root)
        raise TypeError(f"not a term: {raw!r}")

    def _resolve_ctor(self, call: Call, root: Sequence[str]) -> QualName:
        hit = resolve_symbol(self.table, QualName.of(*call.name.parts), root)
        if hit is None:
            raise self._fail(ResolutionError, f"unresolved constructor {call.name}", call.name)
        sym = self.table[hit]
        if not sym.is_constructor:
            raise self._fail(ResolutionError, f"{hit} ({sym.kind.glyph}) is not a constructor", call.name)
        if sym.arity != len(call.args):
            raise self._fail(TypeCheckError, f"{hit} takes {sym.arity} arguments, {len(call.args)} given", call)
        return hit

    def _resolve_name(self, name: Name, root: Sequence[str]):
        hit = resolve_symbol(self.table, QualName.of(*name.parts), root)
        if hit is not None:
            sym = self.table[hit]
            if sym.kind is SymbolKind.VARIABLE:
                self.variables.add(hit.base)
                return Var(hit.base)
            if sym.kind is SymbolKind.SYMBOLIC:
                return sym.value
            if sym.is_constant:
                return UserConst(hit)
            if sym.is_constructor:
                raise self._fail(ResolutionError, f"constructor {hit} needs {sym.arity} arguments", name)
            raise self._fail(ResolutionError, f"type {hit} cannot be used as a value", name)
        head = name.parts[0]
        if _is_variable_name(head):
            self.variables.add(head)
            if name.is_simple:
                return Var(head)
            return Accessor(Var(head), tuple(name.parts[1:]))
        raise self._fail(ResolutionError, f"unresolved name {name}", name)

    def resolve_rule_type(self, raw: RawType) -> TypeExpr:
        try:
            return expand(resolve_type(raw, self.table), self.table)
        except ResolutionError as exc:
            raise exc.at(self.path)

    # Literals, before typing

    def _convert_conjunction(self, conj, visible: frozenset) -> List:
        converted: List = [None] * len(conj)
        sibling: Set[str] = set()
        deferred = []
        for i, raw in enumerate(conj):
            if isinstance(raw, NoLiteral):
                deferred.append(i)
                continue
            lit = self._convert_simple(raw)
            converted[i] = lit
            if isinstance(lit, CompareLit):
                for side in (lit.left, lit.right):
                    if not isinstance(side, CountExpr):
                        sibling.update(term_vars(side))
                if any(isinstance(side, CountExpr) for side in (lit.left, lit.right)):
                    deferred.append(i)
            else:
                sibling.update(literal_vars(lit))
        here = frozenset(visible | sibling)
        for i in deferred:
            raw = conj[i]
            if isinstance(raw, NoLiteral):
                if raw.comp is not None:
                    converted[i] = NoLit(self._convert_comprehension(raw.comp.heads, raw.comp.body, here))
                else:
                    converted[i] = NoLit(self._convert_comprehension((), ((AtomLiteral(raw.atom, raw.span),),), here))
            else:
                lit = converted[i]
                converted[i] = CompareLit(lit.op, self._attach_count(raw.left, lit.left, here),
                                          self._attach_count(raw.right, lit.right, here))
        return converted

    def _attach_count(self, raw, converted, visible):
        if isinstance(raw, Count):
            return CountExpr(self._convert_comprehension(raw.comp.heads, raw.comp.body, visible))
        return converted

    def _convert_comprehension(self, heads, body: Body, visible: frozenset) -> Comprehension:
        resolved_heads = tuple(self.resolve_term(h) for h in heads)
        disjuncts = tuple(tuple(self._convert_conjunction(conj, visible)) for conj in body)
        comp = Comprehension(resolved_heads, disjuncts)
        captured = comprehension_vars(comp) & visible
        return Comprehension(resolved_heads, disjuncts, frozenset(captured))

    def _convert_simple(self, raw):
        if isinstance(raw, AtomLiteral):
            term = self.resolve_term(raw.term)
            if not isinstance(term, (Apply, UserConst, IntConst, StrConst)):
                raise self._fail(ResolutionError, f"{format_term(raw.term)} is not a constant or constructor "
                                                  f"application", raw)
            return AtomLit(term)
        if isinstance(raw, IsLiteral):
            term = self.resolve_term(raw.term)
            if not isinstance(term, Var):
                raise self._fail(ResolutionError, f"'is' needs a variable, found {format_term(raw.term)}", raw)
            return IsLit(term, self.resolve_rule_type(raw.type))
        if isinstance(raw, TypeTestLiteral):
            return TypeTestLit(self.resolve_term(raw.term), self.resolve_rule_type(raw.type))
        if isinstance(raw, CompareLiteral):
            return CompareLit(raw.op, self._convert_expr(raw.left), self._convert_expr(raw.right))
        raise TypeError(f"not a literal: {raw!r}")

    def _convert_expr(self, raw):
        if isinstance(raw, Arith):
            return ArithExpr(raw.op, self._convert_expr(raw.left), self._convert_expr(raw.right))
        if isinstance(raw, Count):
            return CountExpr(Comprehension((), ()))
        return self.resolve_term(raw)

    # Typing

    def _narrow(self, term, t: Optional[TypeExpr], env: TypeEnv, changed: List[bool]):
        if t is None:
            if isinstance(term, Apply):
                self._narrow_args(term, env, changed)
            return
        if isinstance(term, Var):
            old = env.get(term.name)
            new = intersect(old, t, self.table)
            if new != old:
                env[term.name] = new
                changed[0] = True
        elif isinstance(term, Apply):
            if term.ctor not in expand(t, self.table).ctors:
                raise TypeCheckError(f"{term} can never be a {t}").at(self.path)
            self._narrow_args(term, env, changed)

    def _narrow_args(self, term: Apply, env: TypeEnv, changed: List[bool]):
        fields = self.table.ctor_fields(term.ctor)
        for arg, ft in zip(term.args, fields):
            self._narrow(arg, ft, env, changed)

    def accessor_type(self, acc: Accessor, env: TypeEnv) -> Tuple[Tuple[int, ...], TypeExpr]:
        t = env.get(acc.base.name)
        if t is None:
            raise TypeCheckError(f"cannot infer the type of {acc.base} to resolve {acc}").at(self.path)
        indices = []
        for label in acc.path:
            et = expand(t, self.table)
            if len(et.ctors) != 1 or et.consts or et.ranges or et.all_strings:
                if len(et.ctors) > 1:
                    raise TypeCheckError(f"accessor {acc} is ambiguous across {et}").at(self.path)
                raise TypeCheckError(f"{et} has no field {label} ({acc})").at(self.path)
            ctor = next(iter(et.ctors))
            sym = self.table[ctor]
            i = sym.field_index(label)
            if i is None:
                raise TypeCheckError(f"{ctor} has no field {label} ({acc})").at(self.path)
            indices.append(i)
            t = sym.fields[i].type
        return tuple(indices), t

    def _type_of(self, expr, env: TypeEnv) -> Optional[TypeExpr]:
        if isinstance(expr, Var):
            return env.get(expr.name)
        if isinstance(expr, Apply):
            return TypeExpr.of(CtorExt(expr.ctor))
        if isinstance(expr, (IntConst, StrConst, UserConst)):
            return TypeExpr.constants(expr)
        if isinstance(expr, Accessor):
            if env.get(expr.base.name) is None:
                return None
            try:
                return self.accessor_type(expr, env)[1]
            except TypeCheckError:
                # may still narrow; _fix_accessors reports it if not
                return None
        if isinstance(expr, ArithExpr):
            return INTEGER
        if isinstance(expr, CountExpr):
            return NATURAL
        return None

    def infer_types(self, literals, outer: TypeEnv) -> TypeEnv:
        """Narrow variable types to a fixpoint over a conjunction."""
        env: TypeEnv = dict(outer)
        while True:
            changed = [False]
            for lit in literals:
                if isinstance(lit, AtomLit):
                    self._narrow(lit.term, None, env, changed)
                elif isinstance(lit, IsLit):
                    self._narrow(lit.var, lit.type, env, changed)
                elif isinstance(lit, TypeTestLit) and isinstance(lit.term, Var):
                    self._narrow(lit.term, lit.type, env, changed)
                elif isinstance(lit, CompareLit) and lit.op == "=":
                    right_t = self._type_of(lit.right, env)
                    left_t = self._type_of(lit.left, env)
                    if not isinstance(lit.left, (ArithExpr, CountExpr)):
                        self._narrow(lit.left, right_t, env, changed)
                    if not isinstance(lit.right, (ArithExpr, CountExpr)):
                        self._narrow(lit.right, left_t, env, changed)
            if not changed[0]:
                break
        for var, t in env.items():
            if t is not None and t.is_empty:
                raise TypeCheckError(f"variable {var} has no possible values").at(self.path)
        return env

    def _fix_accessors(self, term, env: TypeEnv):
        if isinstance(term, Accessor):
            return Accessor(term.base, term.path, self.accessor_type(term, env)[0])
        if isinstance(term, Apply):
            return Apply(term.ctor, tuple(self._fix_accessors(a, env) for a in term.args))
        if isinstance(term, ArithExpr):
            return ArithExpr(term.op, self._fix_accessors(term.left, env), self._fix_accessors(term.right, env))
        return term

    def _finish_literal(self, lit, env: TypeEnv):
        if isinstance(lit, AtomLit):
            return AtomLit(self._fix_accessors(lit.term, env))
        if isinstance(lit, TypeTestLit):
            return TypeTestLit(self._fix_accessors(lit.term, env), lit.type)
        if isinstance(lit, CompareLit):
            return CompareLit(lit.op, self._finish_side(lit.left, env), self._finish_side(lit.right, env))
        if isinstance(lit, NoLit):
            return NoLit(self.finish_comprehension(lit.comp, env))
        return lit

    def _finish_side(self, side, env: TypeEnv):
        if isinstance(side, CountExpr):
            return CountExpr(self.finish_comprehension(side.comp, env))
        return self._fix_accessors(side, env)

    def finish_conjunction(self, literals, outer: TypeEnv, bound: frozenset, context: str):
        """Type, resolve accessors in, and order one conjunction."""
        env = self.infer_types(literals, outer)
        finished = [self._finish_literal(lit, env) for lit in literals]
        try:
            ordered = reorder_for_safety(finished, bound, context)
        except UnsafeRuleError as exc:
            raise exc.at(self.path)
        return ordered, env

    def finish_comprehension(self, comp: Comprehension, env: TypeEnv) -> Comprehension:
        outer = {v: env.get(v) for v in comp.captured}
        disjuncts = []
        heads = comp.heads
        for conj in comp.disjuncts:
            ordered, inner = self.finish_conjunction(conj, outer, comp.captured, f"comprehension {comp}")
            heads = tuple(self._fix_accessors(h, inner) for h in comp.heads)
            missing = {v for h in heads for v in term_vars(h)} - bound_after(ordered, comp.captured)
            if missing:
                raise UnsafeRuleError(f"comprehension head uses unbound {', '.join(sorted(missing))}").at(self.path)
            disjuncts.append(ordered)
        return Comprehension(heads, tuple(disjuncts), comp.captured)

    # Heads

    def _check_arg(self, arg, ft: TypeExpr, env: TypeEnv, where: str, node):
        if isinstance(arg, Var):
            t = env.get(arg.name)
            if t is None or is_subtype(t, ft, self.table):
                return arg
            try:
                rho = infer_rewrite(t, ft, self.candidates, self.table)
            except TypeCheckError as exc:
                raise self._fail(type(exc), f"{arg} in {where}: {exc.message}", node,
                                 **({"candidates": exc.candidates} if isinstance(exc, RewriteAmbiguityError)
                                    else {}))
            logger.debug(f"{self.module}: inferred {rho}({arg}) in {where}")
            return Relabeled(rho, arg)
        if isinstance(arg, Apply):
            if arg.ctor not in expand(ft, self.table).ctors:
                raise self._fail(TypeCheckError, f"{arg} does not fit {ft} in {where}", node)
            fields = self.table.ctor_fields(arg.ctor)
            return Apply(arg.ctor, tuple(self._check_arg(a, f, env, where, node) for a, f in zip(arg.args, fields)))
        if isinstance(arg, Accessor):
            indices, t = self.accessor_type(arg, env)
            if not is_subtype(t, ft, self.table):
                raise self._fail(TypeCheckError, f"{arg} of type {t} does not fit {ft} in {where}", node)
            return Accessor(arg.base, arg.path, indices)
        if not contains_term(ft, arg, self.table):
            raise self._fail(TypeCheckError, f"{arg} does not fit {ft} in {where}", node)
        return arg

    def check_head(self, head, env: TypeEnv, node=None):
        if isinstance(head, UserConst):
            return head
        fields = self.table.ctor_fields(head.ctor)
        where = f"head {head}"
        return Apply(head.ctor, tuple(self._check_arg(a, f, env, where, node) for a, f in zip(head.args, fields)))

    def resolve_head(self, raw) -> object:
        """A head is a constructor application or a bare derived constant `D.q`."""
        if isinstance(raw, Name):
            if not raw.is_simple:
                raise self._fail(ResolutionError, f"bare head {raw} must be a simple name", raw)
            name = QualName((self.module,), raw.text)
            if self.table.kind_of(name) is not SymbolKind.DERIVED:
                raise self._fail(ResolutionError, f"{name} is not a derived constant of {self.module}", raw)
            return UserConst(name)
        if not isinstance(raw, Call):
            raise self._fail(TypeCheckError, f"{format_term(raw)} cannot be a head", raw)
        head = self.resolve_term(raw, in_head=True)
        sym = self.table[head.ctor]
        if sym.kind not in (SymbolKind.NEW, SymbolKind.DERIVED):
            raise self._fail(TypeCheckError, f"{head.ctor} cannot be derived", raw)
        return head

    # Entry points

    def compile_body(self, head_terms: Sequence, body: Body, node, context: str) -> List[List[Clause]]:
        """Compile each disjunct of body once per head; returns clauses grouped by head."""
        per_head: List[List[Clause]] = [[] for _ in head_terms]
        for conj in body:
            literals = self._convert_conjunction(conj, frozenset())
            ordered, env = self.finish_conjunction(literals, {}, frozenset(), context)
            bound = bound_after(ordered)
            for i, head in enumerate(head_terms):
                missing = set(term_vars(head)) - bound
                if missing:
                    raise self._fail(UnsafeRuleError, f"{context}: head variable(s) {', '.join(sorted(missing))} "
                                                      f"not bound by the body", node)
                per_head[i].append(Clause(self.check_head(head, env, node), tuple(ordered)))
        return per_head

    def compile_rule(self, rule: Rule) -> List[CompiledRule]:
        context = f"rule at line {rule.span.line}" if rule.span.line else "rule"
        try:
            heads = [self.resolve_head(h) for h in rule.heads]
            grouped = self.compile_body(heads, rule.body, rule, context)
        except ModLPError as exc:
            raise exc.at(self.path, rule.span.line, rule.span.col)
        return [CompiledRule(h, tuple(cs), span=rule.span, path=self.path) for h, cs in zip(heads, grouped)]

    def compile_clause(self, constant: QualName, body: Body, node=None) -> CompiledRule:
        """`constant :- body` for a conforms, requires or ensures clause."""
        head = UserConst(constant)
        span = getattr(node, "span", NO_SPAN)
        try:
            (clauses,) = self.compile_body([head], body, node, f"clause {constant}")
        except ModLPError as exc:
            raise exc.at(self.path, span.line, span.col)
        return CompiledRule(head, tuple(clauses), span=span, path=self.path)

    def compile_goal(self, body: Body) -> Tuple[Tuple[str, ...], Tuple[Tuple, ...]]:
        """Compile a query; returns its variables in order of appearance and the planned disjuncts."""
        names: List[str] = []
        disjuncts = []
        for conj in body:
            literals = self._convert_conjunction(conj, frozenset())
            ordered, _ = self.finish_conjunction(literals, {}, frozenset(), "query")
            for lit in literals:
                for v in _mentioned(lit):
                    if v not in names:
                        names.append(v)
            disjuncts.append(tuple(ordered))
        return tuple(names), tuple(disjuncts)

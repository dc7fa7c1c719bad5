#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Recursive descent parser for domain, model, transform and
transform system modules.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from src.errors import DuplicateModuleError, ParseError
from src.lang.lexer import NAME_KEYWORDS, Span, Token, TokenKind, tokenize
from src.lang.syntax import (Arith, AtomLiteral, Blank, Body, Call, ClauseKind, CompareLiteral, Comprehension,
                             ConstSetLit, ContractClause, Count, CtorDecl, Fact, FieldDecl, ImportMode, IntLit,
                             IsLiteral, ModuleImport, ModuleKind, Name, NoLiteral, PipelineEq, RawExpr, RawItem,
                             RawModuleDecl, RawTerm, RawType, Rule, SourceUnit, StrLit, SymConstDef, TypeRef,
                             TypeTestLiteral, UnionDecl)

logger = logging.getLogger('ModLP.Frontend')

RELOPS = ("=", "!=", "<", "<=", ">", ">=")
_TERM_TYPES = (Name, IntLit, StrLit, Blank, Call)


class Parser:
    """One-token-lookahead parser over a token list.

    Args:
        tokens (list): Output of tokenize, ending with EOF.
        path (str, optional): Source path for diagnostics.
    """

    def __init__(self, tokens: Sequence[Token], path: str = "<input>"):
        self.tokens = list(tokens)
        self.path = path
        self.pos = 0

    # Token handling

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.path, tok.span.line, tok.span.col)

    def expect_punct(self, text: str) -> Token:
        if not self.tok.is_punct(text):
            raise self.error(f"expected '{text}', found {self.tok}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.tok.is_keyword(word):
            raise self.error(f"expected '{word}', found {self.tok}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.kind is not TokenKind.IDENT:
            raise self.error(f"expected {what}, found {self.tok}")
        return self.advance()

    def at_eof(self) -> bool:
        return self.tok.kind is TokenKind.EOF

    # Modules

    def parse_unit(self) -> SourceUnit:
        decls: List[RawModuleDecl] = []
        seen: Dict[Tuple[ModuleKind, str], RawModuleDecl] = {}
        while not self.at_eof():
            start = self.tok
            decl = self.parse_module()
            key = (decl.kind, decl.name)
            if key in seen:
                raise DuplicateModuleError(f"{decl.kind.value} {decl.name} is declared twice",
                                           self.path, start.span.line, start.span.col)
            seen[key] = decl
            decls.append(decl)
        logger.debug(f"{self.path}: parsed {len(decls)} modules")
        return SourceUnit(self.path, tuple(decls))

    def parse_module(self) -> RawModuleDecl:
        start = self.tok
        if self.tok.is_keyword("domain"):
            self.advance()
            name = self.expect_ident("domain name").text
            imports = self.parse_domain_imports()
            body = self.parse_block(ModuleKind.DOMAIN)
            return RawModuleDecl(ModuleKind.DOMAIN, name, imports, body, start.span)
        if self.tok.is_keyword("model"):
            self.advance()
            name = self.expect_ident("model name").text
            of_tok = self.expect_keyword("of")
            target = self.expect_ident("domain name").text
            imports = [ModuleImport(ImportMode.OF, None, target, of_tok.span)]
            while self.tok.is_keyword("includes"):
                self.advance()
                imports.extend(self.parse_import_list(ImportMode.INCLUDES))
            body = self.parse_block(ModuleKind.MODEL)
            return RawModuleDecl(ModuleKind.MODEL, name, tuple(imports), body, start.span)
        if self.tok.is_keyword("transform"):
            self.advance()
            kind = ModuleKind.TRANSFORM
            if self.tok.is_keyword("system"):
                self.advance()
                kind = ModuleKind.SYSTEM
            name = self.expect_ident("transform name").text
            inputs = self.parse_signature(ImportMode.INPUT)
            self.expect_keyword("returns")
            outputs = self.parse_signature(ImportMode.OUTPUT)
            labels = [i.prefix for i in inputs + outputs]
            dup = sorted({label for label in labels if labels.count(label) > 1})
            if dup:
                raise self.error(f"signature labels must be distinct, {', '.join(dup)} repeats", start)
            body = self.parse_block(kind)
            return RawModuleDecl(kind, name, tuple(inputs + outputs), body, start.span)
        raise self.error(f"expected 'domain', 'model' or 'transform', found {self.tok}")

    def parse_domain_imports(self) -> Tuple[ModuleImport, ...]:
        imports: List[ModuleImport] = []
        while self.tok.is_keyword("includes", "extends"):
            mode = ImportMode.INCLUDES if self.advance().text == "includes" else ImportMode.EXTENDS
            imports.extend(self.parse_import_list(mode))
        return tuple(imports)

    def parse_import_list(self, mode: ImportMode) -> List[ModuleImport]:
        imports = [self.parse_import(mode)]
        while self.tok.is_punct(","):
            self.advance()
            imports.append(self.parse_import(mode))
        return imports

    def parse_import(self, mode: ImportMode) -> ModuleImport:
        first = self.expect_ident("module name")
        if self.tok.is_punct("::"):
            self.advance()
            target = self.expect_ident("module name")
            return ModuleImport(mode, first.text, target.text, first.span)
        return ModuleImport(mode, None, first.text, first.span)

    def parse_signature(self, mode: ImportMode) -> List[ModuleImport]:
        self.expect_punct("(")
        entries = []
        while True:
            label = self.expect_ident("signature label")
            self.expect_punct("::")
            target = self.expect_ident("domain name")
            entries.append(ModuleImport(mode, label.text, target.text, label.span))
            if not self.tok.is_punct(","):
                break
            self.advance()
        self.expect_punct(")")
        return entries

    def parse_block(self, kind: ModuleKind) -> Tuple[RawItem, ...]:
        self.expect_punct("{")
        items: List[RawItem] = []
        while not self.tok.is_punct("}"):
            if self.at_eof():
                raise self.error("expected '}', found end of input")
            if kind is ModuleKind.MODEL:
                items.append(self.parse_model_item())
            elif kind is ModuleKind.SYSTEM:
                items.append(self.parse_equation())
            else:
                items.append(self.parse_program_item())
        self.advance()
        return tuple(items)

    # Items

    def parse_program_item(self) -> RawItem:
        start = self.tok
        if start.kind is TokenKind.IDENT and self.peek().is_punct("::="):
            return self.parse_type_decl()
        if start.is_keyword("conforms", "requires", "ensures"):
            self.advance()
            body = self.parse_body()
            self.expect_punct(".")
            return ContractClause(ClauseKind(start.text), body, start.span)
        heads = [self.parse_term()]
        while self.tok.is_punct(","):
            self.advance()
            heads.append(self.parse_term())
        body: Body = ((),)
        if self.tok.is_punct(":-"):
            self.advance()
            body = self.parse_body()
        self.expect_punct(".")
        return Rule(tuple(heads), body, start.span)

    def parse_type_decl(self) -> RawItem:
        name_tok = self.advance()
        self.expect_punct("::=")
        marker = None
        if self.tok.is_keyword("new", "fun"):
            marker = self.advance().text
        if marker is not None or self.tok.is_punct("("):
            self.expect_punct("(")
            fields: List[FieldDecl] = []
            split: Optional[int] = None
            while True:
                fields.append(self.parse_field())
                if self.tok.is_punct("->"):
                    if split is not None:
                        raise self.error("only one '->' is allowed in a constructor")
                    self.advance()
                    split = len(fields)
                    continue
                if not self.tok.is_punct(","):
                    break
                self.advance()
            self.expect_punct(")")
            self.expect_punct(".")
            if marker == "fun" and split is None:
                raise self.error(f"fun constructor {name_tok.text} needs '->' between domain and range", name_tok)
            if marker != "fun" and split is not None:
                raise self.error("'->' is only allowed in fun constructors", name_tok)
            return CtorDecl(name_tok.text, marker, tuple(fields), split, name_tok.span)
        type_ = self.parse_type()
        self.expect_punct(".")
        return UnionDecl(name_tok.text, type_, name_tok.span)

    def parse_field(self) -> FieldDecl:
        label = None
        if self.tok.kind is TokenKind.IDENT and self.peek().is_punct(":"):
            label = self.advance().text
            self.advance()
        is_any = False
        if self.tok.is_keyword("any"):
            self.advance()
            is_any = True
        return FieldDecl(label, self.parse_type(), is_any)

    def parse_type(self) -> RawType:
        start = self.tok
        alternatives = [self.parse_type_atom()]
        while self.tok.is_punct("+"):
            self.advance()
            alternatives.append(self.parse_type_atom())
        return RawType(tuple(alternatives), start.span)

    def parse_type_atom(self):
        start = self.tok
        if start.is_punct("{"):
            self.advance()
            values = [self.parse_constant()]
            while self.tok.is_punct(","):
                self.advance()
                values.append(self.parse_constant())
            self.expect_punct("}")
            return ConstSetLit(tuple(values), start.span)
        if start.kind is not TokenKind.IDENT:
            raise self.error(f"expected a type, found {start}")
        name = self.parse_name()
        if self.tok.is_punct("("):
            raise self.error(f"type {name} cannot constrain constructor arguments; "
                             f"per-argument refinement is not supported")
        return TypeRef(name)

    def parse_constant(self) -> RawTerm:
        tok = self.tok
        if tok.kind is TokenKind.INT:
            self.advance()
            return IntLit(tok.value, tok.span)
        if tok.kind is TokenKind.STRING:
            self.advance()
            return StrLit(tok.value, tok.span)
        if tok.kind is TokenKind.IDENT:
            return self.parse_name()
        raise self.error(f"expected a constant, found {tok}")

    def parse_model_item(self) -> RawItem:
        start = self.tok
        if start.kind is TokenKind.IDENT and self.peek().is_keyword("is"):
            self.advance()
            self.advance()
            term = self.parse_term()
            self.expect_punct(".")
            return SymConstDef(start.text, term, start.span)
        term = self.parse_term()
        self.expect_punct(".")
        return Fact(term, start.span)

    def parse_equation(self) -> PipelineEq:
        start = self.tok
        targets = [self.expect_ident("pipeline variable").text]
        while self.tok.is_punct(","):
            self.advance()
            targets.append(self.expect_ident("pipeline variable").text)
        self.expect_punct("=")
        callee = self.expect_ident("transform name").text
        self.expect_punct("(")
        args = [self.expect_ident("pipeline argument").text]
        while self.tok.is_punct(","):
            self.advance()
            args.append(self.expect_ident("pipeline argument").text)
        self.expect_punct(")")
        self.expect_punct(".")
        return PipelineEq(tuple(targets), callee, tuple(args), start.span)

    # Bodies

    def parse_body(self) -> Body:
        disjuncts = [self.parse_conjunction()]
        while self.tok.is_punct(";"):
            self.advance()
            disjuncts.append(self.parse_conjunction())
        return tuple(disjuncts)

    def parse_conjunction(self):
        literals = [self.parse_literal()]
        while self.tok.is_punct(","):
            self.advance()
            literals.append(self.parse_literal())
        return tuple(literals)

    def parse_literal(self):
        start = self.tok
        if start.is_keyword("no"):
            self.advance()
            if self.tok.is_punct("{"):
                return NoLiteral(comp=self.parse_comprehension(), span=start.span)
            return NoLiteral(atom=self.parse_term(), span=start.span)
        left = self.parse_expr()
        if self.tok.is_keyword("is"):
            self.advance()
            return IsLiteral(self._require_term(left, start), self.parse_type(), start.span)
        if self.tok.is_punct(":"):
            self.advance()
            return TypeTestLiteral(self._require_term(left, start), self.parse_type(), start.span)
        if self.tok.kind is TokenKind.PUNCT and self.tok.text in RELOPS:
            op = self.advance().text
            return CompareLiteral(op, left, self.parse_expr(), start.span)
        return AtomLiteral(self._require_term(left, start), start.span)

    def _require_term(self, expr: RawExpr, start: Token) -> RawTerm:
        if not isinstance(expr, _TERM_TYPES):
            raise self.error("expected a term, found an arithmetic expression", start)
        return expr

    def parse_comprehension(self) -> Comprehension:
        start = self.expect_punct("{")
        heads = [self.parse_term()]
        while self.tok.is_punct(","):
            self.advance()
            heads.append(self.parse_term())
        self.expect_punct("|")
        body = self.parse_body()
        self.expect_punct("}")
        return Comprehension(tuple(heads), body, start.span)

    def parse_expr(self) -> RawExpr:
        left = self.parse_product()
        while self.tok.is_punct("+", "-"):
            tok = self.advance()
            left = Arith(tok.text, left, self.parse_product(), tok.span)
        return left

    def parse_product(self) -> RawExpr:
        left = self.parse_factor()
        while self.tok.is_punct("*"):
            tok = self.advance()
            left = Arith(tok.text, left, self.parse_factor(), tok.span)
        return left

    def parse_factor(self) -> RawExpr:
        start = self.tok
        if start.is_keyword("count"):
            self.advance()
            self.expect_punct("(")
            comp = self.parse_comprehension()
            self.expect_punct(")")
            return Count(comp, start.span)
        if start.is_punct("("):
            self.advance()
            inner = self.parse_expr()
            self.expect_punct(")")
            return inner
        return self.parse_term()

    # Terms

    def parse_term(self) -> RawTerm:
        tok = self.tok
        if tok.kind is TokenKind.INT:
            self.advance()
            return IntLit(tok.value, tok.span)
        if tok.kind is TokenKind.STRING:
            self.advance()
            return StrLit(tok.value, tok.span)
        if tok.kind is TokenKind.WILDCARD:
            self.advance()
            return Blank(tok.span)
        if tok.kind is TokenKind.IDENT:
            name = self.parse_name()
            if not self.tok.is_punct("("):
                return name
            self.advance()
            args = [self.parse_term()]
            while self.tok.is_punct(","):
                self.advance()
                args.append(self.parse_term())
            self.expect_punct(")")
            return Call(name, tuple(args), tok.span)
        raise self.error(f"expected a term, found {tok}")

    def parse_name(self) -> Name:
        """Parse `a.b.c`; the dots must touch both neighbours."""
        first = self.expect_ident()
        parts = [first.text]
        last = first
        while self.tok.is_punct(".") and self.tok.span.offset == last.span.end:
            after = self.peek()
            adjacent = after.span.offset == self.tok.span.end
            is_part = after.kind is TokenKind.IDENT or (after.kind is TokenKind.KEYWORD
                                                       and after.text in NAME_KEYWORDS)
            if not (adjacent and is_part):
                break
            self.advance()
            last = self.advance()
            parts.append(last.text)
        length = last.span.end - first.span.offset
        return Name(tuple(parts), Span(first.span.line, first.span.col, length, first.span.offset))


def parse_unit(tokens: Sequence[Token], path: str = "<input>") -> SourceUnit:
    """Parse a token stream into a SourceUnit.

    Args:
        tokens (list): Tokens from tokenize.
        path (str, optional): Source path for diagnostics.

    Returns:
        SourceUnit: Every module declared in the stream.

    Raises:
        ParseError: At the first offending token.
        DuplicateModuleError: If a module name repeats within its kind.
    """
    return Parser(tokens, path).parse_unit()


def parse_source(text: str, path: str = "<input>") -> SourceUnit:
    return parse_unit(tokenize(text, path), path)


def parse_goal(text: str, path: str = "<query>") -> Body:
    """Parse a query goal: a body, optionally terminated by '.'."""
    parser = Parser(tokenize(text, path), path)
    body = parser.parse_body()
    if parser.tok.is_punct("."):
        parser.advance()
    if not parser.at_eof():
        raise parser.error(f"unexpected {parser.tok} after goal")
    return body

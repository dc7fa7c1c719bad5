import pytest

from src.data.corpus import corpus_files
from src.errors import DuplicateModuleError, ParseError
from src.lang.parser import parse_goal, parse_source
from src.lang.printer import format_unit
from src.lang.syntax import (AtomLiteral, Call, ClauseKind, ContractClause, CtorDecl, ImportMode, IsLiteral,
                             ModuleKind, Name, NoLiteral, PipelineEq, Rule, SymConstDef, UnionDecl)


def test_domain_declarations_and_rules():
    (domain,) = parse_source("""
        domain NonDetFSM {
           State ::= new (id: Integer).
           Reach ::= (State).
           Reach(s) :- Init(s); Reach(s'), Trans(s', _, s).
           conforms Init(_).
        }
    """).decls
    assert domain.kind is ModuleKind.DOMAIN
    state, reach, rule, clause = domain.body
    assert isinstance(state, CtorDecl) and state.marker == "new"
    assert state.fields[0].label == "id"
    assert isinstance(reach, CtorDecl) and reach.marker is None
    assert isinstance(rule, Rule)
    assert len(rule.body) == 2
    assert len(rule.body[1]) == 2
    assert isinstance(clause, ContractClause) and clause.kind is ClauseKind.CONFORMS


def test_fun_constructor_split():
    (domain,) = parse_source("domain D { ActMap ::= fun (state: Integer -> actionName: String). }").decls
    (decl,) = domain.body
    assert decl.marker == "fun"
    assert decl.split == 1
    assert [f.label for f in decl.fields] == ["state", "actionName"]


def test_fun_without_arrow_is_rejected():
    with pytest.raises(ParseError, match="needs '->'"):
        parse_source("domain D { F ::= fun (a: Integer, b: Integer). }")


def test_union_with_constant_set():
    (domain,) = parse_source("domain D { Action ::= Asn + ITE + { NOP }. }").decls
    (decl,) = domain.body
    assert isinstance(decl, UnionDecl)
    assert len(decl.type.alternatives) == 3


def test_per_argument_refinement_is_rejected():
    with pytest.raises(ParseError) as info:
        parse_source("domain Peano { Even ::= { Zero } + Succ(Odd). }")
    assert info.value.code == "syntax"
    assert "per-argument refinement" in info.value.message


def test_model_imports_and_symbolic_constants():
    (model,) = parse_source("""
        model ParallelCntrs of ParallelFSMs includes left::CntrMach, right::CntrMach {
           s1 is State(1).
           Init(s1).
        }
    """).decls
    assert model.domain_name == "ParallelFSMs"
    includes = model.imported(ImportMode.INCLUDES)
    assert [(i.prefix, i.target) for i in includes] == [("left", "CntrMach"), ("right", "CntrMach")]
    assert isinstance(model.body[0], SymConstDef)
    assert model.body[0].name == "s1"


def test_transform_signature_and_qualified_names():
    (transform,) = parse_source("""
        transform Prune (in:: NonDetFSM) returns (out:: NonDetFSM) {
           requires in.conforms.
           out.Init(s) :- in.Init(s).
        }
    """).decls
    assert transform.kind is ModuleKind.TRANSFORM
    assert [(i.mode, i.prefix) for i in transform.imports] == [(ImportMode.INPUT, "in"), (ImportMode.OUTPUT, "out")]
    requires, rule = transform.body
    (lit,) = requires.body[0]
    assert lit.term == Name(("in", "conforms"))
    assert rule.heads[0].name == Name(("out", "Init"))


def test_signature_labels_must_be_distinct():
    with pytest.raises(ParseError, match="in repeats"):
        parse_source("transform T (in:: D, in:: D) returns (out:: D) {}")


def test_transform_system_equations():
    (system,) = parse_source("""
        transform system P (in1:: D) returns (out:: D) {
           a, b = Split(in1).
           out = Join(a, b).
        }
    """).decls
    assert system.kind is ModuleKind.SYSTEM
    first, second = system.body
    assert isinstance(first, PipelineEq)
    assert first.targets == ("a", "b")
    assert second.args == ("a", "b")


def test_duplicate_module_in_one_file():
    with pytest.raises(DuplicateModuleError):
        parse_source("domain D {} domain D {}")


def test_spaced_dot_ends_a_rule():
    (domain,) = parse_source("domain D { q :- p . p :- q. }").decls
    assert len(domain.body) == 2


def test_goal_parsing():
    body = parse_goal("Reach(x), no Init(x)")
    first, second = body[0]
    assert isinstance(first, AtomLiteral)
    assert isinstance(first.term, Call)
    assert isinstance(second, NoLiteral) and second.atom is not None
    (conj,) = parse_goal("i is Init.")
    assert isinstance(conj[0], IsLiteral)


def test_goal_rejects_trailing_tokens():
    with pytest.raises(ParseError, match="after goal"):
        parse_goal("Reach(x). Reach(y)")


def test_syntax_error_location():
    with pytest.raises(ParseError) as info:
        parse_source("domain D {\n  State ::= new (id Integer).\n}", "d.4ml")
    assert info.value.diagnostic.render().startswith("d.4ml:2:")


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_corpus_reparses_after_printing(path):
    unit = parse_source(path.read_text(encoding="utf-8"), str(path))
    again = parse_source(format_unit(unit), str(path))
    assert again.decls == unit.decls

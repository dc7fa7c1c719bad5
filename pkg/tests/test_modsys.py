import pytest

from src.cli.render import symbol_lines
from src.errors import (CompositionError, DuplicateModuleError, KindClashError, ModelIncludeError, ParseError,
                        PipelineError, ResolutionError, RewriteAmbiguityError, StratificationError,
                        SymbolicConstantError)
from src.modsys.ir import ClauseOrigin, CompiledDomain, CompiledModel, CompiledSystem, CompiledTransform, Relabeled
from src.symtab.names import QualName
from src.symtab.table import SymbolKind
from src.typesys import Apply, IntConst, RelabelingSpec, StrConst, TypeExpr, UnionRef, UserConst, Var, contains_term

q = QualName.parse

CORPUS_MODULES = {
    "NonDetFSM": CompiledDomain, "Actions": CompiledDomain, "DetFSMWithActions": CompiledDomain,
    "ParallelFSMs": CompiledDomain, "OneStateMach": CompiledModel, "TwoStateMach": CompiledModel,
    "BadMach": CompiledModel, "CntrActions": CompiledModel, "CntrMach": CompiledModel,
    "ParallelCntrs": CompiledModel, "Prune": CompiledTransform, "Parallelize": CompiledTransform,
    "PruneAndParallelize": CompiledSystem,
}


def test_corpus_compiles(corpus):
    assert corpus.ok
    assert corpus.names() == sorted(CORPUS_MODULES)
    for name, kind in CORPUS_MODULES.items():
        assert isinstance(corpus.get(name), kind)


def test_parallel_cntrs_symbol_table(corpus, fixtures_dir):
    expected = (fixtures_dir / "parallel_cntrs_symbols.txt").read_text(encoding="utf-8").splitlines()
    assert symbol_lines(corpus.model("ParallelCntrs").table) == expected


def test_renamed_union_is_nullary(corpus):
    table = corpus.domain("ParallelFSMs").table
    action = table[q("left.Action")]
    assert (action.kind, action.arity) == (SymbolKind.UNION, 0)


def test_domain_conforms_clauses(corpus):
    fsm = corpus.domain("NonDetFSM")
    assert fsm.conforms_goal == q("NonDetFSM.conforms")
    assert [str(c.constant) for c in fsm.clauses] == [f"NonDetFSM.conforms{i}" for i in range(1, 6)]
    assert fsm.clauses[0].text == "Init(_)"
    assert fsm.table[q("NonDetFSM.conforms1")].hidden
    assert not fsm.table[q("NonDetFSM.conforms")].hidden


def test_fun_and_extends_clauses(corpus):
    det = corpus.domain("DetFSMWithActions")
    origins = [c.origin for c in det.clauses]
    assert origins == [ClauseOrigin.FUNCTIONAL] + [ClauseOrigin.CONFORMS] * 4 + [ClauseOrigin.EXTENDS]
    extends = det.clauses[-1]
    assert [str(ref.goal) for ref in extends.extended] == ["NonDetFSM.conforms", "Actions.conforms"]
    hidden = [s for s in det.table.symbols(include_hidden=True) if s.hidden]
    assert QualName((), "~ActMap.d1") in {s.name for s in hidden}
    assert all(not s.name.base.startswith("~") for s in det.table.symbols())


def test_lineage_and_acceptance(corpus):
    fsm = corpus.domain("NonDetFSM")
    det = corpus.domain("DetFSMWithActions")
    parallel = corpus.domain("ParallelFSMs")
    assert det.lineage == frozenset({"NonDetFSM", "Actions"})
    assert fsm.accepts(det)
    assert not det.accepts(fsm)
    assert not fsm.accepts(parallel)


def test_models_collect_facts(corpus):
    two = corpus.model("TwoStateMach")
    assert len(two.facts) == 6
    assert two.symconsts[q("TwoStateMach.s1")] == Apply(q("State"), (IntConst(1),))
    assert two.table[q("TwoStateMach.eFoo")].kind is SymbolKind.SYMBOLIC
    assert len(corpus.model("CntrMach").facts) == 11
    assert len(corpus.model("ParallelCntrs").facts) == 22
    assert Apply(q("left.State"), (IntConst(2),)) in corpus.model("ParallelCntrs").facts


def test_prune_infers_rewrites(corpus):
    prune = corpus.transform("Prune")
    (rule,) = prune.program.rules_for(q("out.Init"))
    (clause,) = rule.clauses
    rho = RelabelingSpec.of(("in",), ("out",))
    assert clause.head == Apply(q("out.Init"), (Relabeled(rho, Var("s")),))
    assert str(clause) == "out.Init(ρ[in→out](s)) :- in.Init(s)."
    (events,) = prune.program.rules_for(q("out.Event"))
    assert events.clauses[0].head == Apply(q("out.Event"), (Var("n"),))


def test_parallelize_rewrites_into_product(corpus):
    parallelize = corpus.transform("Parallelize")
    (rule,) = parallelize.program.rules_for(q("out.left.Init"))
    rho = RelabelingSpec.of(("in1",), ("out", "left"))
    assert rule.clauses[0].head == Apply(q("out.left.Init"), (Relabeled(rho, Var("s")),))


def test_contract_constants(corpus):
    prune = corpus.transform("Prune")
    assert prune.requires_goal == q("Prune.requires")
    assert prune.ensures_goal == q("Prune.ensures")
    assert [c.origin for c in prune.clauses] == [ClauseOrigin.REQUIRES, ClauseOrigin.ENSURES]


def test_corpus_programs_stratify(corpus):
    for name in ("NonDetFSM", "Actions", "DetFSMWithActions"):
        assert len(corpus.domain(name).program.strata) > 1
    assert corpus.transform("Prune").program.strata


def test_system_levels(corpus):
    system = corpus.system("PruneAndParallelize")
    assert [[str(eq) for eq in level] for level in system.levels] == [
        ["prune1 = Prune(in1)", "prune2 = Prune(in2)"],
        ["out = Parallelize(prune1, prune2)"],
    ]


def test_system_arguments_may_name_models(build_workspace):
    ws = build_workspace("""
        transform system PruneTwo (in1:: NonDetFSM) returns (out:: NonDetFSM) { out = Prune(TwoStateMach). }
        transform system PruneActions (in1:: NonDetFSM) returns (out:: NonDetFSM) { out = Prune(CntrActions). }
        transform system PruneNothing (in1:: NonDetFSM) returns (out:: NonDetFSM) { out = Prune(Nowhere). }
        transform system PruneDomain (in1:: NonDetFSM) returns (out:: NonDetFSM) { out = Prune(NonDetFSM). }
    """)
    system = ws.system("PruneTwo")
    assert [[str(eq) for eq in level] for level in system.levels] == [["out = Prune(TwoStateMach)"]]
    assert system.models["TwoStateMach"] is ws.model("TwoStateMach")
    assert "is over Actions" in ws.failures["PruneActions"].message
    for name, arg in (("PruneNothing", "Nowhere"), ("PruneDomain", "NonDetFSM")):
        err = ws.failures[name]
        assert isinstance(err, PipelineError)
        assert f"unbound pipeline variable {arg}" in err.message


def test_kind_clash(build_workspace):
    ws = build_workspace(fixtures=["kind_clash.4ml"])
    err = ws.failures["Clash"]
    assert isinstance(err, KindClashError)
    assert err.diagnostic.code == "kind-clash"
    assert err.path.endswith("kind_clash.4ml")


def test_negative_self_loop(build_workspace):
    ws = build_workspace(fixtures=["negative_cycle.4ml"])
    err = ws.failures["SelfLoop"]
    assert isinstance(err, StratificationError)
    assert err.cycle == ["Lonely"]


def test_ambiguous_rewrite(build_workspace):
    ws = build_workspace(fixtures=["ambiguous_rewrite.4ml"])
    err = ws.failures["Ambiguous"]
    assert isinstance(err, RewriteAmbiguityError)
    assert err.code == "ambiguous-rewrite"
    assert sorted(str(r) for r in err.candidates) == ["ρ[a→b]", "ρ[a→out]"]


def test_shared_constant_unions(build_workspace):
    ws = build_workspace(fixtures=["shared_nil.4ml"], with_corpus=False)
    table = ws.domain("Lists").table
    nil = UserConst(q("Nil"))
    assert table[q("Nil")].kind is SymbolKind.NEW
    for union in ("ListInt", "ListStr"):
        assert contains_term(TypeExpr.of(UnionRef(q(union))), nil, table)
    ints = Apply(q("ConsInt"), (IntConst(1), nil))
    assert contains_term(TypeExpr.of(UnionRef(q("ListInt"))), ints, table)
    assert not contains_term(TypeExpr.of(UnionRef(q("ListStr"))), ints, table)
    strs = Apply(q("ConsStr"), (StrConst("a"), nil))
    assert contains_term(TypeExpr.of(UnionRef(q("ListStr"))), strs, table)


def test_per_argument_refinement_fixture(build_workspace):
    ws = build_workspace(fixtures=["even_odd.4ml"], with_corpus=False)
    (err,) = ws.load_errors
    assert isinstance(err, ParseError)
    assert "per-argument refinement" in err.message


def test_cyclic_pipeline(build_workspace):
    ws = build_workspace(fixtures=["cyclic_pipeline.4ml"])
    err = ws.failures["Loop"]
    assert isinstance(err, PipelineError)
    assert "cyclically" in err.message


def test_model_include_must_fit_domain(build_workspace):
    ws = build_workspace("model Wrong of Actions includes TwoStateMach {}")
    assert isinstance(ws.failures["Wrong"], ModelIncludeError)


def test_model_extension_adds_facts(build_workspace):
    ws = build_workspace(fixtures=["three_state.4ml"])
    model = ws.model("ThreeStateMach")
    assert len(model.facts) == 7
    assert Apply(q("State"), (IntConst(3),)) in model.facts


def test_cyclic_symbolic_constants(build_workspace):
    ws = build_workspace("model Loopy of NonDetFSM { a is Init(b). b is Init(a). }")
    err = ws.failures["Loopy"]
    assert isinstance(err, SymbolicConstantError)
    assert "cyclically" in err.message


def test_composition_conflict_between_includes(build_workspace):
    ws = build_workspace("""
        domain Left { X ::= new (Integer). }
        domain Right { X ::= new (String). }
        domain Both includes Left, Right {}
        model UsesBoth of Both {}
    """, with_corpus=False)
    assert isinstance(ws.failures["Both"], CompositionError)
    assert ws.failures["Both"].code == "composition-conflict"
    dependent = ws.failures["UsesBoth"]
    assert isinstance(dependent, ResolutionError)
    assert "Both" in dependent.message


def test_unresolved_constructor(build_workspace):
    ws = build_workspace("domain Bad { P ::= (Integer). P(x) :- Nope(x). }", with_corpus=False)
    err = ws.failures["Bad"]
    assert isinstance(err, ResolutionError)
    assert err.code == "unresolved-name"


def test_duplicate_module_across_files(build_workspace):
    ws = build_workspace("domain NonDetFSM {}")
    assert any(isinstance(e, DuplicateModuleError) for e in ws.load_errors)
    assert ws.domain("NonDetFSM").clauses


def test_unknown_module(corpus):
    with pytest.raises(ResolutionError, match="unknown module Nowhere"):
        corpus.get("Nowhere")
    with pytest.raises(ResolutionError, match="not a domain"):
        corpus.domain("TwoStateMach")


def test_tautology_declares_derived_constant(build_workspace):
    ws = build_workspace("domain Taut { q :- q. conforms q. }", with_corpus=False)
    table = ws.domain("Taut").table
    assert table[q("Taut.q")].kind is SymbolKind.DERIVED

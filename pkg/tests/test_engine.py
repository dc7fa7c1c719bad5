import random

import pytest

from src.config import Settings
from src.engine import FactStore, check_conforms, evaluate, query
from src.errors import ResourceLimitError
from src.modsys.ir import ClauseOrigin
from src.symtab.names import QualName
from src.transform.apply import project_input
from src.typesys import Apply, IntConst, StrConst
from src.utils.sample_data import generate_sample_model, reachable_states

q = QualName.parse


def state(n):
    return Apply(q("State"), (IntConst(n),))


def test_one_state_machine_conforms(corpus):
    report = check_conforms(corpus.domain("NonDetFSM"), corpus.model("OneStateMach"))
    assert report.conforms
    assert report.failed == []
    assert report.subject == "OneStateMach"


def test_bad_machine_reports_undefined_initial_state(corpus):
    report = check_conforms(corpus.domain("NonDetFSM"), corpus.model("BadMach"))
    assert not report.conforms
    (failed,) = report.failed
    assert failed.info.index == 2
    assert failed.info.constant == q("NonDetFSM.conforms2")
    assert failed.witness == Apply(q("Init"), (state(100),))
    assert failed.to_json()["witness"] == "Init(State(100))"


def test_composite_machine_conforms_with_nested_reports(corpus):
    report = check_conforms(corpus.domain("DetFSMWithActions"), corpus.model("CntrMach"))
    assert report.conforms
    extends = report.clauses[-1]
    assert extends.info.origin == ClauseOrigin.EXTENDS
    assert [(r.module, r.conforms) for r in extends.nested] == [("NonDetFSM", True), ("Actions", True)]
    frame = report.to_frame()
    assert list(frame.columns) == ['depth', 'clause', 'origin', 'line', 'holds', 'witness', 'text']
    assert frame['holds'].all()
    assert set(frame['depth']) == {0, 1}


def test_parallel_counters_conform(corpus):
    assert check_conforms(corpus.domain("ParallelFSMs"), corpus.model("ParallelCntrs")).conforms


def test_functional_constructor_violation(build_workspace):
    ws = build_workspace('model Clashing of DetFSMWithActions includes CntrMach { ActMap(State(1), "IncX"). }')
    report = check_conforms(ws.domain("DetFSMWithActions"), ws.model("Clashing"))
    assert not report.conforms
    (failed,) = report.failed
    assert failed.info.origin == ClauseOrigin.FUNCTIONAL
    assert failed.witness == Apply(q("ActMap"), (state(1), StrConst("IncX")))


def test_count_clause_violation(build_workspace):
    ws = build_workspace("model TwoInits of DetFSMWithActions includes CntrMach { Init(State(2)). }")
    report = check_conforms(ws.domain("DetFSMWithActions"), ws.model("TwoInits"))
    assert not report.conforms
    assert [c.info.index for c in report.failed] == [2]
    assert report.failed[0].witness is None


def test_included_conforms_constants_compose(build_workspace):
    ws = build_workspace("""
        domain Either includes NonDetFSM, Actions { conforms NonDetFSM.conforms; Actions.conforms. }
        model OnlyActions of Either includes CntrActions {}
    """)
    model = ws.model("OnlyActions")
    assert check_conforms(ws.domain("Either"), model).conforms
    assert query(model, "Actions.conforms").holds
    assert not query(model, "NonDetFSM.conforms").holds


def test_reach_on_two_state_machine(corpus):
    result = query(corpus.model("TwoStateMach"), "Reach(x)")
    assert result.variables == ("x",)
    assert [row[0] for row in result.rows] == [state(1), state(2)]
    assert result.to_json()["bindings"] == [{"x": "State(1)"}, {"x": "State(2)"}]


def test_unreachable_state_is_not_reached(build_workspace):
    ws = build_workspace(fixtures=["three_state.4ml"])
    result = query(ws.model("ThreeStateMach"), "Reach(x)")
    assert [row[0] for row in result.rows] == [state(1), state(2)]
    assert not query(ws.model("ThreeStateMach"), "Reach(State(3))").holds


def test_ground_queries(corpus):
    model = corpus.model("TwoStateMach")
    yes = query(model, "Init(State(1))")
    assert yes.holds and yes.variables == ()
    no = query(model, "Reach(State(9))")
    assert not no.holds and len(no) == 0


def test_type_judgements_on_counter_actions(corpus):
    result = query(corpus.model("CntrActions"), "TypeJudge(e, INT)")
    typed = {str(row[0]) for row in result.rows}
    assert 'Asn("X", 0)' in typed
    assert 'Asn("X", BnApp(ADD, Var("X"), 1))' in typed
    assert 'Var("X")' in typed
    assert check_conforms(corpus.domain("Actions"), corpus.model("CntrActions")).conforms


def test_boolean_counter_is_ill_typed(build_workspace):
    ws = build_workspace("""
        model BoolActions of Actions {
           VarDecl("X", BOOL).
           ActDecl("ZeroX", Asn("X", 0)).
           ActDecl("IncX", Asn("X", BnApp(ADD, Var("X"), 1))).
        }
    """)
    report = check_conforms(ws.domain("Actions"), ws.model("BoolActions"))
    assert not report.conforms
    (failed,) = report.failed
    assert failed.info.index == 3
    assert failed.info.text.startswith("no { e | Sub(e), no { t | TypeJudge(e, t) } }")
    assert str(failed.witness) == 'Asn("X", 0)'


def test_fact_cap(corpus):
    model = corpus.model("TwoStateMach")
    with pytest.raises(ResourceLimitError) as info:
        evaluate(model.domain.program, model.facts, Settings(max_facts=3))
    assert info.value.code == "fact-cap"


def test_fact_store_listing():
    store = FactStore([state(2), state(1), state(2), IntConst(5)])
    assert len(store) == 3
    assert store.serialize() == "5.\nState(1).\nState(2).\n"
    assert store.counts().to_dict() == {"State": 2, "#int": 1}


def test_naive_and_semi_naive_agree_on_corpus(corpus):
    for name in corpus.names():
        module = corpus.get(name)
        if hasattr(module, "facts"):
            program = module.domain.program
            assert evaluate(program, module.facts, semi_naive=False) == evaluate(program, module.facts)
    prune = corpus.transform("Prune")
    (label, declared), = prune.inputs
    edb = project_input(corpus.model("TwoStateMach"), label, declared)
    assert evaluate(prune.program, edb, semi_naive=False) == evaluate(prune.program, edb)


def _random_models(config, count):
    rng = random.Random(config["seeds"][1])
    sources, tables = [], {}
    for i in range(count):
        name = f"RandMach{i}"
        states = rng.randint(1, config["max_states"])
        events = rng.randint(1, config["max_events"])
        source, transitions = generate_sample_model(states, events, rng.randint(0, 2**31), name)
        sources.append(source)
        tables[name] = transitions
    return "\n".join(sources), tables


def test_naive_and_semi_naive_agree_on_random_machines(build_workspace, oracle_config):
    source, tables = _random_models(oracle_config, oracle_config["random_fsms"])
    ws = build_workspace(source)
    assert ws.ok
    for name, transitions in tables.items():
        model = ws.model(name)
        program = model.domain.program
        naive = evaluate(program, model.facts, semi_naive=False)
        semi = evaluate(program, model.facts)
        assert naive == semi
        reached = [row[0] for row in query(model, "Reach(x)", store=semi).rows]
        assert reached == [state(int(n)) for n in reachable_states(transitions)]
        assert check_conforms(model.domain, model).conforms

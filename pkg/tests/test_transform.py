import pytest

from src.config import Settings
from src.engine import check_conforms, query
from src.errors import EnsuresViolation, PipelineError, RequiresViolation, TransformError
from src.modsys.ir import ClauseOrigin
from src.symtab.names import QualName
from src.transform.apply import apply_transform, model_source, write_model
from src.transform.pipeline import run_system
from src.typesys import Apply, IntConst
from src.utils.sample_data import generate_sample_models

BROKEN = """
    transform DropInit (in:: NonDetFSM) returns (out:: NonDetFSM) {
       requires in.conforms.
       ensures out.conforms.
       out.State(x) :- in.State(x).
    }
"""


def test_prune_keeps_a_reachable_machine(corpus):
    two = corpus.model("TwoStateMach")
    app = apply_transform(corpus.transform("Prune"), [two])
    assert app.requires_held and app.ensures_held
    assert app.failed == []
    out = app.output("out")
    assert out.name == "out"
    assert out.domain.name == "NonDetFSM"
    assert set(out.facts) == set(two.facts)


def test_prune_drops_unreachable_states(build_workspace):
    ws = build_workspace(fixtures=["three_state.4ml"])
    (out,) = apply_transform(ws.transform("Prune"), [ws.model("ThreeStateMach")]).outputs
    assert len(out.facts) == 6
    assert Apply(QualName.of("State"), (IntConst(3),)) not in out.facts
    assert set(out.facts) == set(ws.model("TwoStateMach").facts)


def test_prune_rejects_nonconforming_input(corpus):
    with pytest.raises(RequiresViolation) as info:
        apply_transform(corpus.transform("Prune"), [corpus.model("BadMach")])
    err = info.value
    assert err.code == "requires-violation"
    assert [c.info.origin for c in err.failed] == [ClauseOrigin.REQUIRES]
    assert err.application.outputs == ()
    assert "in.conforms" in err.message


def test_input_must_fit_declared_domain(corpus):
    prune = corpus.transform("Prune")
    with pytest.raises(TransformError, match="expects a model of NonDetFSM"):
        apply_transform(prune, [corpus.model("CntrActions")])
    with pytest.raises(TransformError, match="takes 1 input models"):
        apply_transform(prune, [])


def test_extending_models_are_projected(corpus):
    app = apply_transform(corpus.transform("Prune"), [corpus.model("CntrMach")])
    assert set(app.output("out").facts) == set(corpus.model("TwoStateMach").facts)


def test_ensures_failure_and_force(build_workspace):
    ws = build_workspace(BROKEN)
    drop, two = ws.transform("DropInit"), ws.model("TwoStateMach")
    with pytest.raises(EnsuresViolation) as info:
        apply_transform(drop, [two])
    assert [c.info.origin for c in info.value.failed] == [ClauseOrigin.ENSURES]
    app = apply_transform(drop, [two], force=True, output_names={"out": "Stripped"})
    assert app.requires_held and not app.ensures_held
    stripped = app.output("out")
    assert stripped.name == "Stripped"
    assert [str(f) for f in stripped.facts] == ["State(1)", "State(2)"]
    assert not check_conforms(stripped.domain, stripped).conforms


def test_parallelize_places_machines_side_by_side(corpus):
    app = apply_transform(corpus.transform("Parallelize"), [corpus.model("TwoStateMach"), corpus.model("OneStateMach")])
    out = app.output("out")
    assert out.domain.name == "ParallelFSMs"
    assert Apply(QualName.parse("left.State"), (IntConst(2),)) in out.facts
    assert Apply(QualName.parse("right.State"), (IntConst(2),)) not in out.facts
    assert check_conforms(out.domain, out).conforms


def test_prune_is_idempotent_on_random_machines(build_workspace, oracle_config):
    count = oracle_config["prune_fsms"]
    source = generate_sample_models(count, oracle_config["max_states"], oracle_config["max_events"],
                                    seed=oracle_config["seeds"][2], prefix="PruneMach")
    ws = build_workspace(source)
    prune = ws.transform("Prune")
    for i in range(count):
        once = apply_transform(prune, [ws.model(f"PruneMach{i}")]).output("out")
        twice = apply_transform(prune, [once]).output("out")
        assert once.facts == twice.facts
        states = [f for f in once.facts if f.ctor == QualName.of("State")]
        assert len(query(once, "Reach(x)")) == len(states)


def test_model_source_round_trips(corpus, build_workspace, tmp_path):
    app = apply_transform(corpus.transform("Prune"), [corpus.model("TwoStateMach")], output_names={"out": "Pruned"})
    pruned = app.output("out")
    text = model_source(pruned)
    assert text.startswith("model Pruned of NonDetFSM {\n   ")
    assert text.endswith("}\n")
    path = write_model(pruned, tmp_path / "models")
    assert path.name == "Pruned.4ml"
    assert path.read_text(encoding="utf-8") == text
    ws = build_workspace(path.read_text(encoding="utf-8"))
    assert ws.model("Pruned").facts == pruned.facts


def test_pipeline_runs_levels_in_order(corpus):
    system = corpus.system("PruneAndParallelize")
    run = run_system(system, {"in1": corpus.model("TwoStateMach"), "in2": corpus.model("OneStateMach")})
    assert [step.transform.name for step in run.steps] == ["Prune", "Prune", "Parallelize"]
    assert set(run.intermediates) == {"in1", "in2", "prune1", "prune2", "out"}
    assert run.intermediates["prune1"].name == "prune1"
    out = run.outputs["out"]
    assert len(out.facts) == 10
    assert check_conforms(out.domain, out).conforms


def test_pipeline_with_worker_pool_matches_sequential(corpus):
    system = corpus.system("PruneAndParallelize")
    models = {"in1": corpus.model("TwoStateMach"), "in2": corpus.model("OneStateMach")}
    sequential = run_system(system, models, Settings(workers=1))
    pooled = run_system(system, models, Settings(workers=2))
    assert pooled.outputs["out"].facts == sequential.outputs["out"].facts
    assert [s.transform.name for s in pooled.steps] == [s.transform.name for s in sequential.steps]


def test_pipeline_input_errors(corpus):
    system = corpus.system("PruneAndParallelize")
    two = corpus.model("TwoStateMach")
    with pytest.raises(PipelineError, match="unbound pipeline variable in2"):
        run_system(system, {"in1": two})
    with pytest.raises(PipelineError, match="no input named in3"):
        run_system(system, {"in1": two, "in2": two, "in3": two})
    with pytest.raises(PipelineError, match="expects a model of NonDetFSM"):
        run_system(system, {"in1": corpus.model("CntrActions"), "in2": two})


def test_pipeline_step_failure_names_the_step(corpus):
    system = corpus.system("PruneAndParallelize")
    with pytest.raises(RequiresViolation, match=r"step prune1 = Prune\(in1\)"):
        run_system(system, {"in1": corpus.model("BadMach"), "in2": corpus.model("TwoStateMach")})


def test_pipeline_argument_naming_a_model(build_workspace):
    ws = build_workspace("""
        transform system PruneTwo (in1:: NonDetFSM) returns (out:: NonDetFSM) { out = Prune(TwoStateMach). }
    """)
    two = ws.model("TwoStateMach")
    run = run_system(ws.system("PruneTwo"), {"in1": ws.model("OneStateMach")})
    assert [step.transform.name for step in run.steps] == ["Prune"]
    assert set(run.intermediates) == {"in1", "out"}
    out = run.outputs["out"]
    assert out.name == "out"
    assert set(out.facts) == set(two.facts)

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Applying a transform to models.

The input models are renamed under their signature labels and composed with the
transform's program. After evaluation the requires clauses are checked, the
output models are read back from facts under each output label, and the
ensures clauses are checked.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.config import Settings
from src.engine.conformance import ClauseResult, clause_results
from src.engine.evaluator import evaluate
from src.engine.store import FactStore
from src.errors import EnsuresViolation, RelabelError, RequiresViolation, TransformError
from src.lang.printer import INDENT
from src.modsys.ir import ClauseOrigin, CompiledDomain, CompiledModel, CompiledTransform
from src.symtab.table import SymbolKind, SymbolTable
from src.typesys.relabel import RelabelingSpec, relabel_term
from src.typesys.terms import Apply, GroundTerm, UserConst, sorted_terms
from src.typesys.typeexpr import CtorExt, TypeExpr, contains_term

logger = logging.getLogger('ModLP.Transform')

MODEL_SUFFIX = ".4ml"


@dataclass(frozen=True)
class TransformApplication:
    """One run of a transform.

    Attributes:
        transform (CompiledTransform): What was applied.
        inputs (tuple): The input models, in signature order.
        outputs (tuple): The extracted output models, in signature order; empty if requires failed.
        requires_held (bool): Whether T.requires was derived.
        ensures_held (bool): Whether T.ensures was derived.
        clauses (tuple): ClauseResult for every requires and ensures clause.
    """

    transform: CompiledTransform
    inputs: Tuple[CompiledModel, ...]
    outputs: Tuple[CompiledModel, ...] = ()
    requires_held: bool = False
    ensures_held: bool = False
    clauses: Tuple[ClauseResult, ...] = ()
    store: Optional[FactStore] = field(default=None, compare=False, repr=False)

    def output(self, label: str) -> CompiledModel:
        for (name, _), model in zip(self.transform.outputs, self.outputs):
            if name == label:
                return model
        raise KeyError(label)

    @property
    def failed(self) -> List[ClauseResult]:
        return [c for c in self.clauses if not c.holds]

    def failed_of(self, origin: str) -> List[ClauseResult]:
        return [c for c in self.failed if c.info.origin == origin]


def project_input(model: CompiledModel, label: str, declared: CompiledDomain) -> List[GroundTerm]:
    """Facts of model as the transform sees them under label.

    Facts whose outer constructor is not a new-kind constructor of the declared
    domain are dropped, so models over an extending domain can be passed in.
    """
    rho = RelabelingSpec.of((), (label,))
    kept = []
    for fact in model.facts:
        if isinstance(fact, Apply) and declared.table.kind_of(fact.ctor) is SymbolKind.NEW:
            kept.append(relabel_term(rho, fact))
        else:
            logger.debug(f"{label}: dropping {fact}, not part of {declared.name}")
    return kept


def extract_output(store: FactStore, label: str, domain: CompiledDomain, table: SymbolTable,
                   name: Optional[str] = None) -> CompiledModel:
    """Read one output model back from a finished store.

    Args:
        store (FactStore): The evaluated store.
        label (str): The output label.
        domain (CompiledDomain): The output's declared domain.
        table (SymbolTable): The transform's table, which decides the kind of each constructor.
        name (str, optional): Name of the resulting model; defaults to the label.

    Returns:
        CompiledModel: New-kind facts under label, with the label removed.

    Raises:
        TransformError: If an extracted fact is ill-typed in the output domain.
    """
    rho = RelabelingSpec.of((label,), ())
    facts = []
    for fact in store:
        if not isinstance(fact, Apply) or not fact.ctor.starts_with((label,)):
            continue
        if table.kind_of(fact.ctor) is not SymbolKind.NEW:
            continue
        try:
            out = relabel_term(rho, fact)
        except RelabelError as exc:
            raise TransformError(f"cannot extract {fact} into {label}: {exc.message}")
        if not contains_term(TypeExpr.of(CtorExt(out.ctor)), out, domain.table):
            raise TransformError(f"extracted fact {out} is ill-typed in {domain.name}")
        facts.append(out)
    return CompiledModel(name or label, domain, domain.table, tuple(sorted_terms(facts)))


def _check_inputs(transform: CompiledTransform, models: Sequence[CompiledModel]):
    if len(models) != len(transform.inputs):
        raise TransformError(f"{transform.name} takes {len(transform.inputs)} input models, {len(models)} given")
    for (label, declared), model in zip(transform.inputs, models):
        if not declared.accepts(model.domain):
            raise TransformError(f"{transform.name}.{label} expects a model of {declared.name}, "
                                 f"but {model.name} is a model of {model.domain.name}")


def _describe(failed: Sequence[ClauseResult]) -> str:
    return "; ".join(f"line {c.info.span.line}: {c.info.text}" for c in failed)


def apply_transform(transform: CompiledTransform, models: Sequence[CompiledModel],
                    settings: Optional[Settings] = None, force: bool = False,
                    output_names: Optional[Dict[str, str]] = None) -> TransformApplication:
    """Run a transform on a list of models.

    Args:
        transform (CompiledTransform): The transform.
        models (list): One model per input label, in signature order.
        settings (Settings, optional): Supplies the fact cap.
        force (bool, optional): Return the outputs even if the ensures clauses fail.
        output_names (dict, optional): Model name per output label.

    Returns:
        TransformApplication: Outputs and contract outcome.

    Raises:
        TransformError: On an arity or domain mismatch, or an ill-typed output.
        RequiresViolation: If T.requires is not derived; carries the failed clauses.
        EnsuresViolation: If T.ensures is not derived and force is not set.
    """
    models = tuple(models)
    _check_inputs(transform, models)
    edb: List[GroundTerm] = []
    for (label, declared), model in zip(transform.inputs, models):
        edb.extend(project_input(model, label, declared))
    store = evaluate(transform.program, edb, settings)
    clauses = clause_results(transform.clauses, store, transform.program)
    requires_held = _holds(store, transform.requires_goal)
    application = TransformApplication(transform, models, (), requires_held, False, clauses, store)
    if not requires_held:
        failed = application.failed_of(ClauseOrigin.REQUIRES)
        raise RequiresViolation(f"{transform.name}: requires failed: {_describe(failed)}", application, failed)

    names = output_names or {}
    outputs = tuple(extract_output(store, label, domain, transform.table, names.get(label))
                    for label, domain in transform.outputs)
    ensures_held = _holds(store, transform.ensures_goal)
    application = TransformApplication(transform, models, outputs, True, ensures_held, clauses, store)
    if not ensures_held:
        failed = application.failed_of(ClauseOrigin.ENSURES)
        message = f"{transform.name}: ensures failed: {_describe(failed)}"
        if not force:
            raise EnsuresViolation(message, application, failed)
        logger.warning(f"{message}; emitting outputs anyway")
    logger.info(f"Applied {transform.name} to {', '.join(m.name for m in models) or 'no models'}: "
                + ", ".join(f"{m.name} ({len(m.facts)} facts)" for m in outputs))
    return application


def _holds(store: FactStore, goal) -> bool:
    return UserConst(goal) in store


def model_source(model: CompiledModel) -> str:
    """Model syntax for a model: one fact per line in term order."""
    lines = [f"model {model.name} of {model.domain.name} {{"]
    lines.extend(f"{INDENT}{fact}." for fact in sorted_terms(model.facts))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_model(model: CompiledModel, directory, filename: Optional[str] = None) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / (filename or f"{model.name}{MODEL_SUFFIX}")
    path.write_text(model_source(model), encoding="utf-8")
    logger.info(f"Wrote {model.name} to {path}")
    return path

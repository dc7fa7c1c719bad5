#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Running transform systems.

Equations run level by level in dependency order. Equations on the same level
share no data, so with more than one worker they run on a thread pool; results
are bound in equation order either way. An argument that is not a pipeline
variable names a model the system was compiled against.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.config import Settings, load_settings
from src.errors import ModLPError, PipelineError
from src.modsys.ir import CompiledModel, CompiledSystem, CompiledTransform, Equation
from src.transform.apply import TransformApplication, apply_transform

logger = logging.getLogger('ModLP.Transform')


@dataclass
class SystemRun:
    """Result of running a transform system.

    Attributes:
        system (CompiledSystem): What was run.
        outputs (dict): Output label to model.
        intermediates (dict): Every pipeline variable bound during the run, inputs included.
        steps (list): The transform applications, in execution order.
    """

    system: CompiledSystem
    outputs: Dict[str, CompiledModel] = field(default_factory=dict)
    intermediates: Dict[str, CompiledModel] = field(default_factory=dict)
    steps: List[TransformApplication] = field(default_factory=list)


def _bind_inputs(system: CompiledSystem, models: Mapping[str, CompiledModel]) -> Dict[str, CompiledModel]:
    labels = [label for label, _ in system.inputs]
    unknown = sorted(set(models) - set(labels))
    if unknown:
        raise PipelineError(f"{system.name} has no input named {', '.join(unknown)}")
    env = {}
    for label, declared in system.inputs:
        if label not in models:
            raise PipelineError(f"unbound pipeline variable {label}: no model given for {system.name}.{label}")
        model = models[label]
        if not declared.accepts(model.domain):
            raise PipelineError(f"{system.name}.{label} expects a model of {declared.name}, "
                                f"but {model.name} is a model of {model.domain.name}")
        env[label] = model
    return env


def _run_equation(eq: Equation, callee, args: Sequence[CompiledModel], settings: Settings,
                  force: bool) -> Tuple[List[CompiledModel], List[TransformApplication]]:
    try:
        if isinstance(callee, CompiledTransform):
            app = apply_transform(callee, args, settings, force)
            return list(app.outputs), [app]
        nested = run_system(callee, dict(zip((label for label, _ in callee.inputs), args)), settings, force)
        return [nested.outputs[label] for label, _ in callee.outputs], nested.steps
    except ModLPError as exc:
        exc.message = f"step {eq}: {exc.message}"
        exc.args = (exc.message,)
        raise


def run_system(system: CompiledSystem, models: Mapping[str, CompiledModel], settings: Optional[Settings] = None,
               force: bool = False) -> SystemRun:
    """Run every equation of a transform system.

    Args:
        system (CompiledSystem): A checked, levelled system.
        models (Mapping): Input label to model.
        settings (Settings, optional): Fact cap and worker count.
        force (bool, optional): Continue past ensures failures.

    Returns:
        SystemRun: Outputs, intermediates and the individual steps.

    Raises:
        PipelineError: If an input is missing, unknown, or over the wrong domain.
        ContractViolation: If a step's requires (or, unless forced, ensures) clauses fail.
    """
    settings = settings or load_settings()
    env = _bind_inputs(system, models)
    run = SystemRun(system)
    for depth, level in enumerate(system.levels):
        jobs = [(eq, system.callees[eq.callee], [env[a] if a in env else system.models[a] for a in eq.args])
                for eq in level]
        if settings.workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=settings.workers) as pool:
                futures = [pool.submit(_run_equation, eq, callee, args, settings, force) for eq, callee, args in jobs]
                results = [f.result() for f in futures]
        else:
            results = [_run_equation(eq, callee, args, settings, force) for eq, callee, args in jobs]
        for (eq, _, _), (outputs, steps) in zip(jobs, results):
            for target, model in zip(eq.targets, outputs):
                env[target] = replace(model, name=target)
            run.steps.extend(steps)
            logger.info(f"{system.name} level {depth}: {eq}")
    run.intermediates = dict(env)
    run.outputs = {label: replace(env[label], name=label) for label, _ in system.outputs}
    return run

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Command-line subcommands.

Every subcommand loads its source files into one workspace, runs, prints its
result to stdout and returns an exit code. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from src import __version__
from src.cli.render import (diagnostics_json, dump_json, query_json, query_lines, report_json, report_lines,
                            symbol_lines, symbols_json)
from src.config import DEFAULT_MAX_FACTS, Settings, load_settings
from src.data.corpus import corpus_files
from src.engine.conformance import check_conforms
from src.engine.query import query
from src.errors import EnsuresViolation, ModLPError, RequiresViolation, render_diagnostics
from src.modsys.ir import CompiledDomain, CompiledModel, CompiledSystem
from src.modsys.workspace import SOURCE_SUFFIX, Workspace
from src.transform.apply import apply_transform, model_source, write_model
from src.transform.pipeline import run_system
from src.utils.sample_data import generate_sample_model

logger = logging.getLogger('ModLP.CLI')


class ExitCode(IntEnum):
    OK = 0
    ERROR = 1
    NONCONFORMING = 2
    REQUIRES = 3
    ENSURES = 4
    INTERNAL = 5


def _emit(text: str = ""):
    print(text, file=sys.stdout)


def _report_errors(errors: Sequence[ModLPError], as_json: bool = False):
    diagnostics = [e.diagnostic for e in errors]
    if as_json:
        _emit(dump_json(diagnostics_json(diagnostics)))
    elif diagnostics:
        print(render_diagnostics(diagnostics), file=sys.stderr)
    for d in diagnostics:
        logger.error(f"{d.code}: {d.message}")


def settings_from_args(args: argparse.Namespace) -> Settings:
    level = None
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose >= 2:
        level = "DEBUG"
    return load_settings(max_facts=args.max_facts, workers=args.workers, log_level=level)


def load_workspace(args: argparse.Namespace, settings: Settings) -> Workspace:
    """Load -I paths, positional files and (on request, or when nothing else is given) the corpus."""
    paths: List[Path] = [Path(p) for p in (args.include or [])]
    paths += [Path(p) for p in getattr(args, "files", None) or []]
    if args.corpus or not paths:
        paths = list(corpus_files()) + paths
    workspace = Workspace(settings)
    for path in paths:
        workspace.add_path(path)
    workspace.compile()
    return workspace


def _fetch(workspace: Workspace, getter, name: str):
    """Fetch a module; compile failures of other modules are logged, not fatal."""
    module = getter(name)
    for other, err in workspace.failures.items():
        logger.warning(f"{other} did not compile: {err.diagnostic.render()}")
    return module


# Subcommands


def cmd_check(args: argparse.Namespace, workspace: Workspace) -> ExitCode:
    errors = workspace.errors
    if args.json:
        _emit(dump_json(diagnostics_json(e.diagnostic for e in errors)))
    else:
        _report_errors(errors)
        for name in workspace.names():
            _emit(f"ok {name}")
    return ExitCode.ERROR if errors else ExitCode.OK


def cmd_conform(args: argparse.Namespace, workspace: Workspace) -> ExitCode:
    model = _fetch(workspace, workspace.model, args.model)
    report = check_conforms(model.domain, model, workspace.settings)
    if args.json:
        _emit(dump_json(report_json(report)))
    else:
        _emit("\n".join(report_lines(report)))
    return ExitCode.OK if report.conforms else ExitCode.NONCONFORMING


def _write_outputs(models: Dict[str, CompiledModel], out_dir: Optional[str]):
    for label, model in models.items():
        if out_dir:
            path = write_model(model, out_dir, f"{label}{SOURCE_SUFFIX}")
            _emit(f"wrote {path}")
        else:
            _emit(model_source(model).rstrip("\n"))


def cmd_apply(args: argparse.Namespace, workspace: Workspace) -> ExitCode:
    transform = _fetch(workspace, workspace.callable, args.transform)
    models = [workspace.model(name) for name in args.models]
    if isinstance(transform, CompiledSystem):
        labels = [label for label, _ in transform.inputs]
        if len(labels) != len(models):
            raise ModLPError(f"{transform.name} takes {len(labels)} input models, {len(models)} given")
        run = run_system(transform, dict(zip(labels, models)), workspace.settings, args.force)
        _write_outputs(run.outputs, args.output)
        return ExitCode.OK
    names = {label: label for label, _ in transform.outputs}
    application = apply_transform(transform, models, workspace.settings, args.force, names)
    _write_outputs({label: application.output(label) for label, _ in transform.outputs}, args.output)
    return ExitCode.OK if application.ensures_held else ExitCode.ENSURES


def _parse_bindings(pairs: Sequence[str]) -> Dict[str, str]:
    bindings = {}
    for pair in pairs:
        label, sep, model = pair.partition("=")
        if not sep or not label or not model:
            raise ModLPError(f"expected label=Model, found {pair!r}")
        bindings[label] = model
    return bindings


def cmd_run(args: argparse.Namespace, workspace: Workspace) -> ExitCode:
    system = _fetch(workspace, workspace.system, args.system)
    bindings = _parse_bindings(args.bindings)
    models = {label: workspace.model(name) for label, name in bindings.items()}
    run = run_system(system, models, workspace.settings, args.force)
    _write_outputs(run.outputs, args.output)
    if args.keep_intermediates:
        for name, model in run.intermediates.items():
            write_model(model, args.keep_intermediates, f"{name}{SOURCE_SUFFIX}")
        logger.info(f"Wrote {len(run.intermediates)} intermediate models to {args.keep_intermediates}")
    held = all(step.ensures_held for step in run.steps)
    return ExitCode.OK if held else ExitCode.ENSURES


def cmd_symbols(args: argparse.Namespace, workspace: Workspace) -> ExitCode:
    module = _fetch(workspace, workspace.get, args.module)
    table = getattr(module, "table", None)
    if table is None:
        raise ModLPError(f"{args.module} is a transform system and has no symbol table")
    if args.json:
        _emit(dump_json(symbols_json(args.module, table, args.all)))
    else:
        _emit("\n".join(symbol_lines(table, args.all)))
    return ExitCode.OK


def cmd_query(args: argparse.Namespace, workspace: Workspace) -> ExitCode:
    module = _fetch(workspace, workspace.get, args.module)
    if not isinstance(module, (CompiledModel, CompiledDomain)):
        raise ModLPError(f"{args.module} is not a model or domain")
    result = query(module, args.goal, settings=workspace.settings)
    if args.json:
        _emit(dump_json(query_json(result)))
    else:
        _emit("\n".join(query_lines(result)))
    return ExitCode.OK if result.holds else ExitCode.ERROR


def cmd_sample(args: argparse.Namespace, workspace: Optional[Workspace] = None) -> ExitCode:
    source, transitions = generate_sample_model(args.states, args.events, args.seed, args.name,
                                                deterministic=args.deterministic)
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(source, encoding="utf-8")
        _emit(f"wrote {path} ({len(transitions)} transitions)")
    else:
        _emit(source.rstrip("\n"))
    return ExitCode.OK


COMMANDS = {
    'check': cmd_check,
    'conform': cmd_conform,
    'apply': cmd_apply,
    'run': cmd_run,
    'symbols': cmd_symbols,
    'query': cmd_query,
    'sample': cmd_sample,
}


def _add_common(parser: argparse.ArgumentParser, json_flag: bool = True):
    parser.add_argument("-I", "--include", action="append", metavar="PATH",
                        help="source file or directory to load (repeatable)")
    parser.add_argument("--corpus", action="store_true", help="also load the shipped FSM and Actions corpus")
    parser.add_argument("--max-facts", type=int, default=None, metavar="N",
                        help=f"fact store cap (default {DEFAULT_MAX_FACTS}, env MODLP_MAX_FACTS)")
    parser.add_argument("--workers", type=int, default=None, metavar="N",
                        help="threads for independent pipeline steps (env MODLP_WORKERS)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    if json_flag:
        parser.add_argument("--json", action="store_true", help="print JSON instead of text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modlp", description="Module system over logic programming.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("check", help="compile every module and report diagnostics")
    p.add_argument("files", nargs="*", help="source files or directories")
    _add_common(p)

    p = sub.add_parser("conform", help="check a model against its domain")
    p.add_argument("model")
    _add_common(p)

    p = sub.add_parser("apply", help="apply a transform to input models")
    p.add_argument("transform")
    p.add_argument("models", nargs="*", help="one model per input, in signature order")
    p.add_argument("-o", "--output", metavar="DIR", help="write one model file per output label")
    p.add_argument("--force", action="store_true", help="emit outputs even if ensures clauses fail")
    _add_common(p, json_flag=False)

    p = sub.add_parser("run", help="run a transform system")
    p.add_argument("system")
    p.add_argument("bindings", nargs="*", metavar="label=Model")
    p.add_argument("-o", "--output", metavar="DIR", help="write one model file per output label")
    p.add_argument("--keep-intermediates", metavar="DIR", help="also write every intermediate model")
    p.add_argument("--force", action="store_true", help="continue past ensures failures")
    _add_common(p, json_flag=False)

    p = sub.add_parser("symbols", help="list a module's symbol table")
    p.add_argument("module")
    p.add_argument("--all", action="store_true", help="include internal clause constants and fun variables")
    _add_common(p)

    p = sub.add_parser("query", help="answer a goal against a model or domain")
    p.add_argument("module")
    p.add_argument("goal")
    _add_common(p)

    p = sub.add_parser("sample", help="print a random FSM model over NonDetFSM")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--events", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--name", default="SampleMach")
    p.add_argument("--deterministic", action="store_true", help="at most one target per state and event")
    p.add_argument("-o", "--output", metavar="FILE")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.set_defaults(include=None, corpus=False, max_facts=None, workers=None, json=False)
    return parser


def dispatch(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Run one parsed command, converting errors into exit codes."""
    command = COMMANDS[args.command]
    try:
        if args.command == "sample":
            return command(args)
        workspace = load_workspace(args, settings)
        if args.command != "check" and workspace.load_errors:
            _report_errors(workspace.load_errors)
            return ExitCode.ERROR
        return command(args, workspace)
    except RequiresViolation as exc:
        _report_errors([exc])
        return ExitCode.REQUIRES
    except EnsuresViolation as exc:
        _report_errors([exc])
        return ExitCode.ENSURES
    except ModLPError as exc:
        _report_errors([exc], getattr(args, "json", False) and args.command == "check")
        return ExitCode.ERROR
    except ValueError as exc:
        print(f"modlp: error: {exc}", file=sys.stderr)
        return ExitCode.ERROR
    except Exception:
        logger.exception(f"Internal error while running {args.command}")
        return ExitCode.INTERNAL

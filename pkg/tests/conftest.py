#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Shared test fixtures.
"""

import json
from pathlib import Path

import pytest

from src.data.corpus import corpus_files, load_corpus
from src.modsys.workspace import Workspace

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def corpus():
    """The compiled corpus; tests must not mutate it."""
    workspace = load_corpus()
    assert workspace.ok, [e.diagnostic.render() for e in workspace.errors]
    return workspace


@pytest.fixture(scope="session")
def oracle_config():
    return json.loads((FIXTURES / "oracle_config.json").read_text(encoding="utf-8"))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def build_workspace():
    """Compile the corpus plus extra fixture files and source snippets into a fresh workspace."""

    def build(*sources, fixtures=(), with_corpus=True):
        workspace = Workspace()
        if with_corpus:
            for path in corpus_files():
                workspace.add_path(path)
        for name in fixtures:
            workspace.add_path(FIXTURES / name)
        for i, text in enumerate(sources):
            workspace.add_source(text, f"<snippet{i}>")
        workspace.compile()
        return workspace

    return build

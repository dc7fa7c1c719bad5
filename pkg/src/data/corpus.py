#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Access to the shipped FSM and Actions corpus.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional

from src.config import Settings
from src.modsys.workspace import SOURCE_SUFFIX, Workspace

logger = logging.getLogger('ModLP.Workspace')

CORPUS_DIR = Path(__file__).resolve().parent / "corpus"


def corpus_dir() -> Path:
    return CORPUS_DIR


def corpus_files() -> List[Path]:
    """Corpus source files in load order."""
    return sorted(CORPUS_DIR.glob(f"*{SOURCE_SUFFIX}"))


def load_corpus(settings: Optional[Settings] = None) -> Workspace:
    """Load and compile every corpus module.

    Args:
        settings (Settings, optional): Passed to the workspace.

    Returns:
        Workspace: The compiled corpus.
    """
    workspace = Workspace.from_paths(corpus_files(), settings)
    logger.info(f"Loaded corpus from {CORPUS_DIR}: {len(workspace.modules)} modules compiled")
    return workspace

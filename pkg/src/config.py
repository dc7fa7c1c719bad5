#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Runtime settings.
Defaults, overridden by MODLP_* environment variables, overridden by explicit arguments.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from typing import Any

logger = logging.getLogger('ModLP.Config')

DEFAULT_MAX_FACTS = 1_000_000

ENV_MAX_FACTS = "MODLP_MAX_FACTS"
ENV_LOG_LEVEL = "MODLP_LOG_LEVEL"
ENV_WORKERS = "MODLP_WORKERS"


@dataclass(frozen=True)
class Settings:
    """Engine and driver settings.

    Attributes:
        max_facts (int): Evaluation aborts once the fact store grows past this.
        log_level (str): Root log level name.
        workers (int): Thread pool size for independent pipeline steps.
    """

    max_facts: int = DEFAULT_MAX_FACTS
    log_level: str = "WARNING"
    workers: int = 1


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer")
        return default
    if value <= 0:
        logger.warning(f"Ignoring {name}={raw!r}: must be positive")
        return default
    return value


def load_settings(**overrides: Any) -> Settings:
    """Build settings from the environment and explicit overrides.

    Args:
        **overrides: Field values that win over the environment. None values are ignored.

    Returns:
        Settings: The merged settings.
    """
    settings = Settings(
        max_facts=_env_int(ENV_MAX_FACTS, DEFAULT_MAX_FACTS),
        log_level=os.environ.get(ENV_LOG_LEVEL, "WARNING").upper(),
        workers=_env_int(ENV_WORKERS, 1),
    )
    explicit = {k: v for k, v in overrides.items() if v is not None}
    if explicit:
        settings = replace(settings, **explicit)
    return settings

"""
ModLP - Transform application and transform systems.
"""

from src.transform.apply import (TransformApplication, apply_transform, extract_output, model_source,
                                 project_input, write_model)
from src.transform.pipeline import SystemRun, run_system

__all__ = [
    "TransformApplication", "apply_transform", "extract_output", "model_source", "project_input", "write_model",
    "SystemRun", "run_system",
]

"""
ModLP - Module elaboration: compiled modules, name resolution, stratification and the workspace.
"""

from src.modsys.elaborate import (elaborate, elaborate_domain, elaborate_model, elaborate_system,
                                  elaborate_transform)
from src.modsys.ir import (ClauseInfo, CompiledDomain, CompiledModel, CompiledRule, CompiledSystem,
                           CompiledTransform, Program)
from src.modsys.workspace import Workspace

__all__ = [
    "elaborate", "elaborate_domain", "elaborate_model", "elaborate_system", "elaborate_transform",
    "ClauseInfo", "CompiledDomain", "CompiledModel", "CompiledRule", "CompiledSystem", "CompiledTransform",
    "Program", "Workspace",
]

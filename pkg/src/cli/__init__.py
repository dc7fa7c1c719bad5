"""
ModLP - Command-line driver.
"""

from src.cli.commands import COMMANDS, ExitCode, build_parser, dispatch, settings_from_args

__all__ = ["COMMANDS", "ExitCode", "build_parser", "dispatch", "settings_from_args"]

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Command-line entry point.
"""

import logging
import sys

from src.cli import build_parser, dispatch, settings_from_args

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def main(argv=None):
    """Main entry point for the application.

    Args:
        argv (list, optional): Arguments without the program name. Defaults to sys.argv[1:].

    Returns:
        int: The process exit code.
    """
    args = build_parser().parse_args(argv)
    settings = settings_from_args(args)

    # Configure logging once, on stderr
    logging.basicConfig(level=getattr(logging, settings.log_level, logging.WARNING), format=LOG_FORMAT,
                        stream=sys.stderr)
    logging.getLogger('ModLP').setLevel(getattr(logging, settings.log_level, logging.WARNING))

    return int(dispatch(args, settings))


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Module system over logic programming
Run this script to use the command-line driver without installing the package.
"""

import sys

from src.main import main

if __name__ == '__main__':
    sys.exit(main())

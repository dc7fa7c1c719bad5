"""
ModLP - Module system over logic programming: domains, models, transforms and transform systems.
"""

__version__ = "1.0.0"

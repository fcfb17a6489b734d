"""Fair Division Toolkit - Main Package"""

__version__ = "1.0.0"

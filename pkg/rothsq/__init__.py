"""
rothsq - transference toolkit for Roth-type theorems in the squares
"""

__version__ = "1.0.0"

"""
rothsq Core Package - exact arithmetic, majorants, exponential sums, counting
"""

__version__ = "1.0.0"

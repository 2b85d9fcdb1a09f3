"""
Core package of the P300 speller accuracy toolkit.
"""
__version__ = "0.1.0"

"""Saturation-based BCQ answering and rewriting over guarded formulas."""

__version__ = "0.1.0"

"""Exact link-diagram invariants and sliceness obstructions."""

__version__ = "0.1.0"

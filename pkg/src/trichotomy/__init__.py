"""Largeness, Property (tau) and mod-p homology growth for finitely presented groups."""

__version__ = "0.1.0"

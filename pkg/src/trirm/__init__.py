"""Punctured Reed-Muller triorthogonal codes over prime fields."""

__version__ = "0.1.0"

"""Exact computations with Lie conformal superalgebras."""

__version__ = "0.1.0"

"""Saturated de Rham-Witt complexes with unit-root coefficients, computed exactly."""

__version__ = "0.1.0"

"""Locally CAT(0) cubical Kan-Thurston complexes, built and machine-checked."""

__version__ = "0.1.0"

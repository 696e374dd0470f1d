"""Rotationally invariant Kapustin-Witten solutions on R^4 and their checks."""

__version__ = "0.1.0"

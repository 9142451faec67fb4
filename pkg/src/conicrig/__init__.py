"""Certificates for conics at infinity, ruled frameworks and super stability."""

from .numerics import DEFAULT_TOL, SignatureTriple, Tolerance
from .framework import Framework, FrameworkError, Graph

__version__ = "0.1.0"

__all__ = ["DEFAULT_TOL", "Framework", "FrameworkError", "Graph", "SignatureTriple", "Tolerance"]

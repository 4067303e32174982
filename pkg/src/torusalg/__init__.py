"""Exact homological algebra in the abelian category of qce sheaves over a torus."""
from .linalg import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"

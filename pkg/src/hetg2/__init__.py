"""Exact verification engine for heterotic G2 identities on
3-(alpha,delta)-Sasaki and (alpha,delta)-Sasaki 7-manifolds."""

from .scalar import AlgebraError, Scalar, SymbolTable, UnknownSymbolError, prem
from .exterior import Coframe, DegreeError, Form

__all__ = [
    "AlgebraError",
    "Coframe",
    "DegreeError",
    "Form",
    "Scalar",
    "SymbolTable",
    "UnknownSymbolError",
    "prem",
]

__version__ = "0.1.0"

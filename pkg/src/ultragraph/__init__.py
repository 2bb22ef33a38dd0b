"""Nonstandard graphs built as ultrapowers of graph sequences, with executable transfer checks."""

from .graph import Graph
from .hypernat import Affine, HyperNat, Periodic, Poly2, Quasi, TableWithTail, constant
from .index_filter import Decision, IndexSet, Ultrafilter
from .nonstandard import NonstandardGraph

__all__ = [
    "Affine",
    "Decision",
    "Graph",
    "HyperNat",
    "IndexSet",
    "NonstandardGraph",
    "Periodic",
    "Poly2",
    "Quasi",
    "TableWithTail",
    "Ultrafilter",
    "constant",
]
__version__ = "0.1.0"

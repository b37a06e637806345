"""Flip distances between graph orientations."""

from flipdist.errors import CapExceeded, FlipdistError, InternalError, ValidationError
from flipdist.graph import Dicut, Edge, Graph, Orientation, parse_graph, serialize_graph

__all__ = [
    "CapExceeded",
    "Dicut",
    "Edge",
    "FlipdistError",
    "Graph",
    "InternalError",
    "Orientation",
    "ValidationError",
    "parse_graph",
    "serialize_graph",
]

"""Degree-constrained spanning trees parameterized by treewidth, pathwidth, cutwidth and NLC-width."""

from .core import DegreeSpec, Graph, Instance, SolveResult

__version__ = "0.1.0"

__all__ = ["DegreeSpec", "Graph", "Instance", "SolveResult", "__version__"]

"""Unit acquisition on graphs: move engine, exact solver, caterpillar
characterization, constructive protocols and graph generators."""

__version__ = "0.1.0"

from .engine import Protocol, UnitMove, apply, drain_ascending, replay, support
from .graph import Graph, GraphError, ParseError, from_edge_list
from .solver import SolveResult, unit_acquisition_number

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "Protocol",
    "SolveResult",
    "UnitMove",
    "__version__",
    "apply",
    "drain_ascending",
    "from_edge_list",
    "replay",
    "support",
    "unit_acquisition_number",
]

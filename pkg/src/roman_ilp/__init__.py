"""Exact tools for triple and quadruple Roman domination."""

from .graph import (
    Graph,
    InstanceDescriptor,
    erdos_renyi,
    erdos_renyi_connected,
    neighbors,
    parse_edge_list,
    serialize_edge_list,
)
from .labeling import (
    LabelFunction,
    Verdict,
    eliminate_ones_3,
    eliminate_ones_4,
    validate_3rdf,
    validate_4rdf,
    validate_krdf,
    weight,
)
from .model import IlpModel, ModelId, build, decode_solution, export_lp, integerize
from .oracle import all_optimal, exact_gamma
from .solver import Solution, SolveStatus, solve, verify

__version__ = "0.1.0"

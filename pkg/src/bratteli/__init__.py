"""Ordered Bratteli diagrams: skeletons, cell graphs, synthesis of perfect orders."""

__version__ = "0.1.0"

from .diagram import BratteliDiagram, EdgeId, build_diagram, classify, telescope
from .ordering import DiagramOrder, assign_order, order_from_words, telescope_order, word
from .skeleton import Correspondence, Skeleton, skeleton_from_order, skeleton_from_sources
from .hgraph import build_graph, connectivity, crossing_numbers
from .synth import synthesize_order, synthesize_vertex_order
from .verify import brute_force_orders, check_perfect_finite_rank, class_A_obstruction
from .infinitesimal import epsilon_vector, independence_rank

__all__ = [
    "BratteliDiagram", "EdgeId", "build_diagram", "classify", "telescope",
    "DiagramOrder", "assign_order", "order_from_words", "telescope_order", "word",
    "Correspondence", "Skeleton", "skeleton_from_order", "skeleton_from_sources",
    "build_graph", "connectivity", "crossing_numbers",
    "synthesize_order", "synthesize_vertex_order",
    "brute_force_orders", "check_perfect_finite_rank", "class_A_obstruction",
    "epsilon_vector", "independence_rank",
]

"""LIST-3-COLOURING on graphs of diameter at most 3 by branch and reduce."""

from .graph import Graph, diameter
from .instance import Instance, verify_coloring
from .branch import BranchConfig, solve
from .oracle import brute_force

__all__ = ["Graph", "Instance", "BranchConfig", "solve", "brute_force", "diameter", "verify_coloring"]
__version__ = "0.1.0"

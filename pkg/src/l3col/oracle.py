"""Brute-force ground truth for small instances.

Deliberately shares no propagation code with the solver: plain backtracking
in ascending vertex order, colours in ascending order, pruning only on edges
to already-coloured vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .instance import Coloring, Instance


class Indeterminate(RuntimeError):
    """The node budget ran out before the search finished."""


@dataclass
class OracleResult:
    feasible: bool
    certificate: Optional[Coloring]
    nodes_explored: int


def brute_force(inst: Instance, node_budget: Optional[int] = None) -> OracleResult:
    g = inst.graph
    order = list(g.vertices)
    lists = [sorted(inst.lists[v]) for v in order]
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[w] for w in g.neighbors(v) if pos[w] < i] for i, v in enumerate(order)]
    colour = [0] * len(order)
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise Indeterminate(f"node budget {node_budget} exhausted")
        if i == len(order):
            return True
        for c in lists[i]:
            if all(colour[j] != c for j in earlier[i]):
                colour[i] = c
                if rec(i + 1):
                    return True
        colour[i] = 0
        return False

    if rec(0):
        return OracleResult(True, {v: colour[i] for i, v in enumerate(order)}, nodes)
    return OracleResult(False, None, nodes)


def feasible(inst: Instance, node_budget: Optional[int] = None) -> bool:
    return brute_force(inst, node_budget).feasible


def check_equivalence(a: Instance, b: Instance, node_budget: Optional[int] = None) -> bool:
    return feasible(a, node_budget) == feasible(b, node_budget)


def check_branchset(parent: Instance, children: Iterable, node_budget: Optional[int] = None) -> bool:
    """Parent feasible iff some child feasible.

    ``children`` may hold Instances or objects with an ``instance`` attribute
    (such as branch.Child).
    """
    want = feasible(parent, node_budget)
    got = False
    for ch in children:
        inst = getattr(ch, "instance", ch)
        if feasible(inst, node_budget):
            got = True
            break
    return want == got

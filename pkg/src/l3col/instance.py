"""LIST-3-COLOURING instances: a graph plus a list of allowed colours per vertex."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .graph import Graph, GraphError, bfs_distances

COLOURS: Tuple[int, ...] = (1, 2, 3)
FULL: FrozenSet[int] = frozenset(COLOURS)

Coloring = Dict[int, int]


class ContractError(ValueError):
    """A precondition of an operation was violated by the caller."""


class Instance:
    """Immutable snapshot (graph, lists). Every rule builds a new one."""

    __slots__ = ("graph", "lists")

    def __init__(self, graph: Graph, lists: Optional[Mapping[int, Iterable[int]]] = None):
        self.graph = graph
        full = {v: FULL for v in graph.vertices}
        if lists is not None:
            for v, lst in lists.items():
                if v not in graph:
                    raise GraphError(f"list given for unknown vertex {v}")
                lst = frozenset(lst)
                if not lst <= FULL:
                    raise ValueError(f"list of {v} has colours outside 1..3: {sorted(lst)}")
                full[v] = lst
        self.lists: Dict[int, FrozenSet[int]] = full

    def __eq__(self, other) -> bool:
        return isinstance(other, Instance) and self.graph == other.graph and self.lists == other.lists

    def __repr__(self) -> str:
        l1, l2, l3 = level_sets(self)
        return f"Instance(n={self.graph.n}, m={self.graph.m}, |L1|={len(l1)}, |L2|={len(l2)}, |L3|={len(l3)})"

    def with_lists(self, updates: Mapping[int, Iterable[int]]) -> "Instance":
        new = dict(self.lists)
        for v, lst in updates.items():
            new[v] = frozenset(lst)
        out = Instance.__new__(Instance)
        out.graph = self.graph
        out.lists = new
        return out

    @property
    def mu(self) -> int:
        """Number of vertices with a full list."""
        return sum(1 for lst in self.lists.values() if len(lst) == 3)


@dataclass(frozen=True)
class LevelSets:
    L1: FrozenSet[int]
    L2: FrozenSet[int]
    L3: FrozenSet[int]

    def __iter__(self):
        return iter((self.L1, self.L2, self.L3))

    def level(self, i: int) -> FrozenSet[int]:
        return (self.L1, self.L2, self.L3)[i - 1]


def level_sets(inst: Instance) -> LevelSets:
    buckets = {1: set(), 2: set(), 3: set()}
    for v, lst in inst.lists.items():
        if lst:
            buckets[len(lst)].add(v)
    return LevelSets(frozenset(buckets[1]), frozenset(buckets[2]), frozenset(buckets[3]))


def restricted_neighborhood(
    inst: Instance, v: int, k: int, level: int, exact: bool = True, closed: bool = False
) -> FrozenSet[int]:
    """N^(k)_{L_i}(v), N^(<=k)_{L_i}(v) or their closed variants (distances in the whole graph)."""
    if k < 1:
        raise ValueError("k must be positive")
    dist = bfs_distances(inst.graph, v, limit=k)
    out = set()
    for u, d in dist.items():
        if d == 0:
            continue
        if (d == k if exact else d <= k) and len(inst.lists[u]) == level:
            out.add(u)
    if closed and len(inst.lists[v]) == level:
        out.add(v)
    return frozenset(out)


def potential(inst: Instance) -> int:
    return sum(len(lst) for lst in inst.lists.values())


def coloring_violation(inst: Instance, c: Mapping[int, int]) -> Optional[str]:
    """First violated constraint of ``c`` as text, or None if it is a valid L-colouring."""
    for v in inst.graph.vertices:
        if v not in c:
            return f"vertex {v} is uncoloured"
        if c[v] not in inst.lists[v]:
            return f"vertex {v} has colour {c[v]} outside its list {sorted(inst.lists[v])}"
    for u, v in inst.graph.edges():
        if c[u] == c[v]:
            return f"edge ({u}, {v}) is monochromatic with colour {c[u]}"
    return None


def verify_coloring(inst: Instance, c: Mapping[int, int]) -> bool:
    return coloring_violation(inst, c) is None


def assign_colour(inst: Instance, v: int, c: int) -> Instance:
    if c not in inst.lists[v]:
        raise ContractError(f"colour {c} is not in L({v}) = {sorted(inst.lists[v])}")
    if inst.lists[v] == {c}:
        return inst
    return inst.with_lists({v: (c,)})


def remove_colour(inst: Instance, v: int, c: int) -> Instance:
    return inst.with_lists({v: inst.lists[v] - {c}})

"""Undirected simple graphs with stable integer vertex labels."""

from __future__ import annotations

import math
from collections import deque
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

# Distinct non-finite sentinels; never confused with a real distance.
UNREACHABLE = math.inf
INFINITE = math.inf


class GraphError(ValueError):
    """Bad input to a graph operation (unknown vertex, self-loop, ...)."""


class Graph:
    """Immutable simple graph. Vertices are arbitrary distinct ints."""

    __slots__ = ("_adj", "_vertices", "_m")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Tuple[int, int]] = ()):
        adj: Dict[int, set] = {}
        for v in vertices:
            if v in adj:
                raise GraphError(f"duplicate vertex {v}")
            adj[int(v)] = set()
        m = 0
        for u, v in edges:
            if u not in adj or v not in adj:
                raise GraphError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        self._vertices: Tuple[int, ...] = tuple(sorted(adj))
        self._adj: Dict[int, FrozenSet[int]] = {v: frozenset(adj[v]) for v in self._vertices}
        self._m = m

    @classmethod
    def from_adjacency(cls, adj: Mapping[int, Iterable[int]]) -> "Graph":
        edges = [(u, v) for u, nbrs in adj.items() for v in nbrs if u < v]
        return cls(adj.keys(), edges)

    @property
    def vertices(self) -> Tuple[int, ...]:
        """Vertices in ascending label order."""
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __iter__(self):
        return iter(self._vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        return hash((self._vertices, self.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def neighbors(self, v: int) -> FrozenSet[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Edges as (u, v) with u < v, sorted."""
        return tuple((u, v) for u in self._vertices for v in sorted(self._adj[u]) if u < v)

    def neighbors_of_set(self, s: Iterable[int]) -> FrozenSet[int]:
        """N(S): vertices outside S adjacent to some vertex of S."""
        s = set(s)
        out = set()
        for v in s:
            out |= self.neighbors(v)
        return frozenset(out - s)

    def closed_neighbors_of_set(self, s: Iterable[int]) -> FrozenSet[int]:
        s = frozenset(s)
        return self.neighbors_of_set(s) | s


def _check_vertex(g: Graph, v: int) -> None:
    if v not in g:
        raise GraphError(f"unknown vertex {v}")


def bfs_distances(g: Graph, v: int, limit: Optional[int] = None) -> Dict[int, int]:
    """Shortest-path distances from v.

    Only reachable vertices appear as keys; use ``dist.get(u, UNREACHABLE)``.
    With ``limit`` the search stops after that depth.
    """
    _check_vertex(g, v)
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def eccentricity(g: Graph, v: int) -> float:
    dist = bfs_distances(g, v)
    if len(dist) < g.n:
        return INFINITE
    return max(dist.values())


def diameter(g: Graph) -> float:
    """Maximum eccentricity; INFINITE for disconnected graphs."""
    if g.n == 0:
        raise GraphError("diameter of the empty graph is undefined")
    best = 0
    for v in g.vertices:
        e = eccentricity(g, v)
        if e == INFINITE:
            return INFINITE
        best = max(best, e)
    return best


def neighborhood_exact(g: Graph, v: int, k: int) -> FrozenSet[int]:
    """N^(k)(v): vertices at distance exactly k."""
    if k < 1:
        raise GraphError("k must be positive")
    dist = bfs_distances(g, v, limit=k)
    return frozenset(u for u, d in dist.items() if d == k)


def neighborhood_within(g: Graph, v: int, k: int, closed: bool = False) -> FrozenSet[int]:
    """N^(<=k)(v), or N^(<=k)[v] when ``closed``."""
    if k < 1:
        raise GraphError("k must be positive")
    dist = bfs_distances(g, v, limit=k)
    if not closed:
        del dist[v]
    return frozenset(dist)


def merge_vertices(g: Graph, u: int, v: int) -> Tuple[Graph, int, Dict[int, int]]:
    """Identify two non-adjacent vertices.

    The merged vertex gets a fresh label (one above the current maximum) and
    the neighbourhood N(u) | N(v).  Returns (graph, merged label, mapping).
    """
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise GraphError("cannot merge a vertex with itself")
    if g.has_edge(u, v):
        raise GraphError(f"cannot merge adjacent vertices {u} and {v}")
    x = max(g.vertices) + 1
    mapping = {w: w for w in g.vertices}
    mapping[u] = x
    mapping[v] = x
    verts = [w for w in g.vertices if w not in (u, v)] + [x]
    edges = {tuple(sorted((mapping[a], mapping[b]))) for a, b in g.edges()}
    return Graph(verts, edges), x, mapping


def induced_subgraph(g: Graph, s: Iterable[int]) -> Tuple[Graph, Dict[int, int]]:
    """G[S]. Labels are kept, so the mapping is the identity on S."""
    s = frozenset(s)
    for v in s:
        _check_vertex(g, v)
    edges = [(a, b) for a in s for b in g.neighbors(a) if a < b and b in s]
    return Graph(s, edges), {v: v for v in sorted(s)}

"""Seeded instance generators.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister), created
fresh inside each call, so every generator is a pure function of its
arguments.  Structural promises (diameter, properness, rule triggers) are
checked after generation; nothing unverified is returned.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .graph import Graph, diameter
from .instance import COLOURS, Coloring, Instance, verify_coloring

MAX_RETRIES = 64

# probabilities of list sizes 1, 2, 3
FULL_LISTS = (0.0, 0.0, 1.0)
MIXED_LISTS = (0.1, 0.3, 0.6)


class GenError(ValueError):
    pass


def _gnp(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(range(n), edges)


def _diameter3_density(n: int) -> Tuple[float, float]:
    # average degree d with d^2 < n < d^3 roughly, widened for small n
    lo = max(1.2, n ** 0.42) / (n - 1)
    hi = max(2.0, n ** 0.6) / (n - 1)
    return min(lo, 0.9), min(hi, 0.95)


def _spine_graph(n: int, rng: random.Random) -> Graph:
    """Path a-b-c-d plus extras hanging off b and/or c, random extra-extra edges.

    a's only neighbour is b and d's only neighbour is c, so dist(a, d) = 3,
    while every other pair is within distance 3.
    """
    a, b, c, d = 0, 1, 2, 3
    edges = {(a, b), (b, c), (c, d)}
    extras = list(range(4, n))
    for w in extras:
        side = rng.choice(("b", "c", "bc"))
        if "b" in side:
            edges.add((b, w))
        if "c" in side:
            edges.add((c, w))
    for u, v in itertools.combinations(extras, 2):
        if rng.random() < 0.3:
            edges.add((u, v))
    return Graph(range(n), edges)


def gen_diameter3(n: int, seed: int) -> Graph:
    if n < 4:
        raise GenError("a graph of diameter 3 needs at least 4 vertices")
    rng = random.Random(seed)
    if n > 4:
        lo, hi = _diameter3_density(n)
        for _ in range(MAX_RETRIES):
            g = _gnp(n, rng.uniform(lo, hi), rng)
            if diameter(g) == 3:
                return g
    g = _spine_graph(n, rng)
    assert diameter(g) == 3
    return g


@dataclass
class PlantedGraph:
    graph: Graph
    coloring: Coloring
    exact_diameter3: bool


def gen_planted_3col_diam3(n: int, seed: int) -> PlantedGraph:
    """Random 3-partite graph with diameter <= 3 (exactly 3 unless flagged) and its planted colouring."""
    if n < 4:
        raise GenError("need at least 4 vertices")
    rng = random.Random(seed)
    colour = [COLOURS[i % 3] for i in range(n)]
    rng.shuffle(colour)
    cross = [(u, v) for u, v in itertools.combinations(range(n), 2) if colour[u] != colour[v]]
    lo, hi = _diameter3_density(n)
    p = rng.uniform(lo, hi) * 1.5
    edges = {e for e in cross if rng.random() < p}
    remaining = [e for e in cross if e not in edges]
    rng.shuffle(remaining)

    def diam(es):
        return diameter(Graph(range(n), es))

    while diam(edges) > 3 and remaining:
        for _ in range(max(1, n // 4)):
            if remaining:
                edges.add(remaining.pop())
    if diam(edges) > 3:
        raise GenError("could not reach diameter 3")
    if diam(edges) < 3:
        order = sorted(edges)
        rng.shuffle(order)
        tries = 0
        for e in order:
            if tries >= 4 * n:
                break
            tries += 1
            edges.discard(e)
            d = diam(edges)
            if d > 3:
                edges.add(e)
            elif d == 3:
                break
    g = Graph(range(n), edges)
    col = {v: colour[v] for v in range(n)}
    d = diameter(g)
    assert d <= 3 and verify_coloring(Instance(g), col)
    return PlantedGraph(g, col, d == 3)


def gen_lists(g: Graph, profile: Sequence[float], seed: int) -> Instance:
    """Independent per-vertex lists: size drawn from ``profile`` (P[1], P[2], P[3]), colours uniform."""
    if len(profile) != 3 or any(p < 0 for p in profile) or abs(sum(profile) - 1) > 1e-9:
        raise GenError(f"invalid list profile {profile}")
    rng = random.Random(seed)
    lists = {}
    for v in g.vertices:
        k = rng.choices((1, 2, 3), weights=profile)[0]
        lists[v] = frozenset(rng.sample(COLOURS, k))
    return Instance(g, lists)


def planted_lists(g: Graph, coloring: Mapping[int, int], profile: Sequence[float], seed: int) -> Instance:
    """Like gen_lists, but every list contains the planted colour (keeps the instance a YES-instance)."""
    rng = random.Random(seed)
    lists = {}
    for v in g.vertices:
        k = rng.choices((1, 2, 3), weights=profile)[0]
        others = [c for c in COLOURS if c != coloring[v]]
        lists[v] = frozenset([coloring[v]] + rng.sample(others, k - 1))
    return Instance(g, lists)


# ---------------------------------------------------------------------------
# rule gadgets


def _relabel(edges, n) -> Graph:
    return Graph(range(n), edges)


def gen_rule_gadget(rule: str, params: Optional[Mapping] = None, seed: int = 0) -> Instance:
    """Small instance on which the named branching rule is the first one to fire.

    ``params``: ``size`` (number of spokes / paths, default 4), and either a
    ``config`` or a ``threshold_scale``.  Without either, B2-B4 gadgets use a
    scale that puts the threshold at ``size``.
    """
    from .branch import BranchConfig, find_b1, find_b2, find_b3, find_b4, next_branching
    from .reduce import REDUCED, reduce_fixpoint

    params = dict(params or {})
    k = int(params.get("size", 4))
    rng = random.Random(seed)
    if k < 1:
        raise GenError("gadget size must be positive")
    if rule == "B1":
        # hub 0 with k spokes, all full lists
        edges = [(0, i) for i in range(1, k + 1)]
        inst = Instance(_relabel(edges, k + 1))
    elif rule == "B2":
        # v=0 -- m_i (L2) -- w_i (L3), i = 1..k
        edges, lists = [], {}
        for i in range(k):
            m, w = 1 + 2 * i, 2 + 2 * i
            edges += [(0, m), (m, w)]
            lists[m] = set(rng.sample(COLOURS, 2))
        inst = Instance(_relabel(edges, 2 * k + 1), lists)
    elif rule == "B3":
        # u=0 -- x_i -- y_i -- w_i with x_i, y_i in L2 and a shared colour
        edges, lists = [], {}
        for i in range(k):
            x, y, w = 1 + 3 * i, 2 + 3 * i, 3 + 3 * i
            edges += [(0, x), (x, y), (y, w)]
            lx = set(rng.sample(COLOURS, 2))
            shared = rng.choice(sorted(lx))
            other = rng.choice([c for c in COLOURS if c != shared])
            lists[x] = lx
            lists[y] = {shared, other}
        inst = Instance(_relabel(edges, 3 * k + 1), lists)
    elif rule == "B4":
        # u=0, v=1 share k-1 full-list midpoints c_i, each with one private L3 leaf;
        # every L3 degree stays below k while the common fan-out reaches k+1
        if k < 4:
            raise GenError("B4 gadget needs size >= 4")
        edges = []
        for i in range(k - 1):
            c, w = 2 + 2 * i, 3 + 2 * i
            edges += [(0, c), (1, c), (c, w)]
        inst = Instance(_relabel(edges, 2 * k))
    elif rule == "B5":
        # an odd cycle of full lists: no rule B1-B4 fires at threshold >= 3
        n = max(9, 2 * k + 1)
        inst = Instance(_relabel([(i, (i + 1) % n) for i in range(n)], n))
    else:
        raise GenError(f"unknown rule {rule!r}")
    cfg = params.get("config")
    if cfg is None:
        scale = params.get("threshold_scale")
        if scale is None:
            # put the threshold at k so that only the gadget's own quantity reaches it
            mu = sum(1 for v in inst.graph.vertices if len(inst.lists[v]) == 3)
            scale = 1.0 if rule in ("B1", "B5") else (k - 0.5) / mu ** (1 / 3 + BranchConfig().epsilon)
        cfg = BranchConfig(r4_cutoff=1, threshold_scale=scale)
    out = reduce_fixpoint(inst, cfg.r4_cutoff)
    if out.kind != REDUCED:
        raise GenError(f"{rule} gadget was solved by reduction; increase size")
    red = out.instance
    finders = [("B1", find_b1), ("B2", find_b2), ("B3", find_b3), ("B4", find_b4)]
    for name, finder in finders:
        hit = finder(red, cfg)
        if name == rule:
            if hit is None:
                raise GenError(f"{rule} does not fire on the gadget with these params")
            break
        if hit is not None:
            raise GenError(f"{name} fires before {rule}; adjust params")
    else:
        if next_branching(red, cfg) is not None:
            raise GenError("B5 gadget is not reduced")
    return red


# ---------------------------------------------------------------------------
# graphs for the witness-set laboratory


def gen_magic_precond(mu: int, epsilon: float, seed: int) -> PlantedGraph:
    """A 3-colourable mu-vertex graph meeting the witness-set degree and fan-out bounds.

    Random 3-partite graph built edge by edge, only accepting an edge if the
    maximum degree stays below mu^(1/3+eps) and no 4-cycle appears.  The
    preconditions are verified afterwards.
    """
    from .lemmalab import check_magic_preconditions

    rng = random.Random(seed)
    dmax = int(mu ** (1 / 3 + epsilon) + 1e-9)
    for _ in range(MAX_RETRIES):
        colour = [COLOURS[i % 3] for i in range(mu)]
        rng.shuffle(colour)
        adj: Dict[int, set] = {v: set() for v in range(mu)}
        cands = [(u, v) for u, v in itertools.combinations(range(mu), 2) if colour[u] != colour[v]]
        rng.shuffle(cands)
        for u, v in cands:
            if len(adj[u]) >= dmax or len(adj[v]) >= dmax:
                continue
            # adding uv closes a 4-cycle iff some neighbour of u is adjacent to a neighbour of v
            if any(adj[a] & adj[v] for a in adj[u]) or adj[u] & adj[v]:
                continue
            adj[u].add(v)
            adj[v].add(u)
        g = Graph.from_adjacency(adj)
        ok, _ = check_magic_preconditions(g, epsilon)
        if ok and g.m > 0:
            col = {v: colour[v] for v in range(mu)}
            return PlantedGraph(g, col, False)
    raise GenError(f"could not build a precondition-satisfying graph for mu={mu}")

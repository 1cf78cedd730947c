"""Branching rules B1-B5 and the recursive search driver."""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .graph import Graph, bfs_distances, diameter, induced_subgraph, merge_vertices
from .instance import (
    COLOURS,
    Coloring,
    ContractError,
    Instance,
    assign_colour,
    level_sets,
    remove_colour,
    verify_coloring,
)
from .reduce import (
    NO,
    REDUCED,
    YES,
    ReduceOutcome,
    _Counter,
    choose_forcing_colour,
    enumerate_l3,
    forcing_target,
    reduce_fixpoint,
)

STRICT = "strict"
FALLBACK = "fallback"

# size >= bound  iff  size >= ceil(bound - FLOAT_SLACK)
FLOAT_SLACK = 1e-9

COLOUR_PAIRS: Tuple[Tuple[int, int], ...] = tuple((i, j) for i in COLOURS for j in COLOURS if i != j)


def ceil_bound(x: float) -> int:
    return math.ceil(x - FLOAT_SLACK)


def floor_bound(x: float) -> int:
    return math.floor(x + FLOAT_SLACK)


class DiameterError(ValueError):
    def __init__(self, measured):
        self.measured = measured
        super().__init__(f"input graph has diameter {measured}, strict policy requires <= 3")


@dataclass(frozen=True)
class BranchConfig:
    epsilon: float = 0.02
    r4_cutoff: int = 12
    threshold_scale: float = 1.0
    b5_t_size_scale: float = 0.1
    b5_s_size_scale: float = 1.0
    diameter_policy: str = STRICT
    rng_seed: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon < 1 / 33:
            raise ValueError(f"epsilon must lie in (0, 1/33), got {self.epsilon}")
        if self.r4_cutoff < 1:
            raise ValueError("r4_cutoff must be positive")
        for name in ("threshold_scale", "b5_t_size_scale", "b5_s_size_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.diameter_policy not in (STRICT, FALLBACK):
            raise ValueError(f"unknown diameter policy {self.diameter_policy!r}")

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def threshold_tau(mu: int, cfg: BranchConfig) -> int:
    """ceil(scale * mu^(1/3 + eps)), at least 1."""
    if mu < 1:
        raise ValueError("mu must be positive")
    return max(1, ceil_bound(cfg.threshold_scale * mu ** (1 / 3 + cfg.epsilon)))


def near_diameter_loss(mu: int, cfg: BranchConfig) -> int:
    """How many L3 vertices may be out of 3-step reach inside G[L3]: ceil(4 * (scale * mu^(1/3+eps))^2)."""
    return ceil_bound(4 * (cfg.threshold_scale * mu ** (1 / 3 + cfg.epsilon)) ** 2)


def b5_t_bound(mu: int, cfg: BranchConfig) -> int:
    return max(1, ceil_bound(cfg.b5_t_size_scale * 2 * mu ** (2 / 3 - cfg.epsilon)))


def b5_s_bound(mu: int, cfg: BranchConfig) -> int:
    return max(0, ceil_bound(cfg.b5_s_size_scale * 3 * mu ** (2 / 3 - cfg.epsilon)))


def seventh(mu: int) -> int:
    """ceil(mu / 7), with threshold 1 for mu < 7."""
    return max(1, ceil_bound(mu / 7))


# ---------------------------------------------------------------------------
# Branch sets


@dataclass
class Child:
    instance: Instance
    description: str
    # (u, v, x) when u and v were merged into x
    merged: Optional[Tuple[int, int, int]] = None
    family: Optional[int] = None
    # B5 family 2: vertices that must leave L3 once the child is reduced
    cleared: FrozenSet[int] = frozenset()

    def lift(self, coloring: Coloring) -> Coloring:
        if self.merged is None:
            return coloring
        u, v, x = self.merged
        out = dict(coloring)
        c = out.pop(x)
        out[u] = c
        out[v] = c
        return out


@dataclass
class BranchSet:
    rule: str
    children: List[Child]
    # True when the children provably cover every L-colouring of the parent.
    certified: bool = True


def branch_on_vertex(inst: Instance, v: int, rule: str = "B1") -> BranchSet:
    lst = inst.lists[v]
    if len(lst) < 2:
        raise ContractError(f"cannot branch on vertex {v} with list {sorted(lst)}")
    children = [Child(assign_colour(inst, v, c), f"{v}<-{c}") for c in sorted(lst)]
    return BranchSet(rule, children)


def _best(candidates, measure) -> Optional[Tuple[int, int]]:
    best = None
    for v in sorted(candidates):
        m = measure(v)
        if best is None or m > best[1]:
            best = (v, m)
    return best


def _sizes(inst: Instance) -> Dict[int, int]:
    return {v: len(lst) for v, lst in inst.lists.items()}


def find_b1(inst: Instance, cfg: BranchConfig) -> Optional[int]:
    size = _sizes(inst)
    mu = sum(1 for s in size.values() if s == 3)
    if mu == 0:
        return None
    tau = threshold_tau(mu, cfg)
    g = inst.graph
    cands = [v for v, s in size.items() if s >= 2]
    best = _best(cands, lambda v: sum(1 for w in g.neighbors(v) if size[w] == 3))
    if best is not None and best[1] >= tau:
        return best[0]
    return None


def second_l3_via_l2(inst: Instance, v: int, size: Optional[Dict[int, int]] = None) -> FrozenSet[int]:
    """N_{L3}(N_{L2}(v)) without v itself: the L3 second neighbours reached through L2."""
    size = size or _sizes(inst)
    g = inst.graph
    mids = [x for x in g.neighbors(v) if size[x] == 2]
    out = {w for x in mids for w in g.neighbors(x) if size[w] == 3}
    out.discard(v)
    return frozenset(out)


def find_b2(inst: Instance, cfg: BranchConfig) -> Optional[int]:
    size = _sizes(inst)
    l3 = [v for v, s in size.items() if s == 3]
    if not l3:
        return None
    tau = threshold_tau(len(l3), cfg)
    best = _best(l3, lambda v: len(second_l3_via_l2(inst, v, size)))
    if best is not None and best[1] >= tau:
        return best[0]
    return None


def find_b3(inst: Instance, cfg: BranchConfig) -> Optional[Tuple[int, int]]:
    l3 = level_sets(inst).L3
    if not l3:
        return None
    tau = threshold_tau(len(l3), cfg)
    best = _best(l3, lambda v: len(forcing_target(inst, v)))
    if best is not None and best[1] >= tau:
        c, _ = choose_forcing_colour(inst, best[0])
        return best[0], c
    return None


def branch_b3(inst: Instance, v: int, c: int) -> BranchSet:
    return BranchSet(
        "B3",
        [Child(assign_colour(inst, v, c), f"{v}<-{c}"), Child(remove_colour(inst, v, c), f"{v}!={c}")],
    )


def common_fanout(inst: Instance, u: int, v: int, size: Optional[Dict[int, int]] = None) -> FrozenSet[int]:
    """N_{L3}(N(u) & N(v)) with full-graph neighbourhoods inside."""
    size = size or _sizes(inst)
    g = inst.graph
    common = g.neighbors(u) & g.neighbors(v)
    out = {w for c in common for w in g.neighbors(c) if size[w] == 3}
    return frozenset(out - common)


def find_b4(inst: Instance, cfg: BranchConfig) -> Optional[Tuple[int, int]]:
    size = _sizes(inst)
    l3 = sorted(v for v, s in size.items() if s == 3)
    if len(l3) < 2:
        return None
    tau = threshold_tau(len(l3), cfg)
    g = inst.graph
    for u, v in itertools.combinations(l3, 2):
        common = g.neighbors(u) & g.neighbors(v)
        if not common:
            continue
        if len(common_fanout(inst, u, v, size)) >= tau:
            return u, v
    return None


def branch_b4(inst: Instance, u: int, v: int) -> BranchSet:
    if u == v:
        raise ContractError("B4 needs two distinct vertices")
    children = []
    for i, j in COLOUR_PAIRS:
        if i in inst.lists[u] and j in inst.lists[v]:
            children.append(Child(inst.with_lists({u: (i,), v: (j,)}), f"{u}<-{i},{v}<-{j}"))
    if not inst.graph.has_edge(u, v):
        g2, x, _ = merge_vertices(inst.graph, u, v)
        lists = {w: inst.lists[w] for w in g2.vertices if w != x}
        lists[x] = inst.lists[u] & inst.lists[v]
        children.append(Child(Instance(g2, lists), f"merge({u},{v})->{x}", merged=(u, v, x)))
    return BranchSet("B4", children)


# ---------------------------------------------------------------------------
# B5


@dataclass
class AnchorMaps:
    root: int
    H: Graph
    dist_root: Dict[int, int]
    n_r: Dict[int, int]
    p: Dict[Tuple[int, int], int]

    def layer(self, k: int) -> FrozenSet[int]:
        return frozenset(a for a, d in self.dist_root.items() if d == k)


def _second_layer(H: Graph, v: int) -> FrozenSet[int]:
    nv = H.neighbors(v)
    out = set()
    for a in nv:
        out |= H.neighbors(a)
    out -= nv
    out.discard(v)
    return frozenset(out)


def build_anchor_maps(H: Graph, root: Optional[int] = None) -> AnchorMaps:
    """Smallest-label choices for the root, its anchors n_r and favourite parents p."""
    if H.n == 0:
        raise ContractError("no vertices to anchor")
    r = min(H.vertices) if root is None else root
    dist = bfs_distances(H, r)
    layer2 = {a for a, d in dist.items() if d == 2}
    n_r = {}
    for a, d in dist.items():
        if d == 3:
            n_r[a] = min(H.neighbors(a) & layer2)
    p = {}
    for v in H.vertices:
        nv = H.neighbors(v)
        for x in _second_layer(H, v):
            p[(v, x)] = min(nv & H.neighbors(x))
    return AnchorMaps(r, H, dist, n_r, p)


def fix_anchors(inst: Instance, cfg: Optional[BranchConfig] = None) -> AnchorMaps:
    l3 = level_sets(inst).L3
    if not l3:
        raise ContractError("fix_anchors needs a nonempty L3")
    H, _ = induced_subgraph(inst.graph, l3)
    return build_anchor_maps(H)


def check_near_diameter3(inst: Instance, cfg: BranchConfig) -> bool:
    l3 = level_sets(inst).L3
    mu = len(l3)
    if mu == 0:
        return True
    need = mu - near_diameter_loss(mu, cfg)
    if need <= 0:
        return True
    H, _ = induced_subgraph(inst.graph, l3)
    return all(len(bfs_distances(H, u, limit=3)) - 1 >= need for u in l3)


def _family1(inst: Instance, cfg: BranchConfig, H: Graph, mu: int):
    verts = sorted(H.vertices)
    tb = b5_t_bound(mu, cfg)
    need = seventh(mu)
    subsets = []
    for k in range(1, min(tb, len(verts)) + 1):
        for t in itertools.combinations(verts, k):
            if any(H.has_edge(a, b) for a, b in itertools.combinations(t, 2)):
                continue
            subsets.append((t, frozenset(t), H.closed_neighbors_of_set(t)))
    children: List[Child] = []
    certified = False
    for idx, (t1, s1, n1) in enumerate(subsets):
        for t2, s2, n2 in subsets[idx + 1 :]:
            if s1 & s2:
                continue
            x = n1 & n2
            if not x or len(H.neighbors_of_set(x)) < need:
                continue
            if len(t1) == 1 and len(t2) == 1 and H.has_edge(t1[0], t2[0]):
                certified = True
            for i, j in COLOUR_PAIRS:
                upd = {a: (i,) for a in t1}
                upd.update({b: (j,) for b in t2})
                if any(c not in inst.lists[w] for w, (c,) in upd.items()):
                    continue
                children.append(Child(inst.with_lists(upd), f"F1 T={list(t1)}<-{i} T~={list(t2)}<-{j}", family=1))
    return children, certified


def _family2_colourings(H: Graph, inst: Instance, order: Sequence[int], anchor_of: Dict[int, int],
                        base_exc: int, limit: int):
    """Proper list colourings of H[order] whose anchor disagreements stay within ``limit``."""
    pos = {w: i for i, w in enumerate(order)}
    earlier = [[pos[w] for w in H.neighbors(v) if w in pos and pos[w] < i] for i, v in enumerate(order)]
    # exceptions that become decidable when position i is coloured
    checks: List[List[Tuple[int, int]]] = [[] for _ in order]
    for x, a in anchor_of.items():
        checks[max(pos[x], pos[a])].append((pos[x], pos[a]))
    colour = [0] * len(order)
    out = []

    def rec(i: int, exc: int):
        if i == len(order):
            out.append({order[k]: colour[k] for k in range(len(order))})
            return
        for c in sorted(inst.lists[order[i]]):
            if any(colour[j] == c for j in earlier[i]):
                continue
            colour[i] = c
            e = exc + sum(1 for xp, ap in checks[i] if colour[xp] != colour[ap])
            if e <= limit:
                rec(i + 1, e)
        colour[i] = 0

    if base_exc <= limit:
        rec(0, base_exc)
    return out


def _family2(inst: Instance, cfg: BranchConfig, anchors: AnchorMaps, mu: int):
    H = anchors.H
    layer3 = anchors.layer(3)
    sb = b5_s_bound(mu, cfg)
    children: List[Child] = []
    certified = False
    for v in sorted(layer3):
        nv = H.neighbors(v)
        n2v = _second_layer(H, v)
        mandatory = {x for x in n2v if anchors.p[(v, x)] not in layer3}
        if len(mandatory) > sb:
            continue
        anchor_set = {anchors.n_r[a] for a in nv if a in layer3}
        closed_v = nv | {v}
        order = [v] + sorted(nv) + sorted(anchor_set - closed_v) + sorted(n2v - anchor_set)
        anchor_of = {x: anchors.n_r[anchors.p[(v, x)]] for x in n2v if x not in mandatory}
        anchor_of = {x: a for x, a in anchor_of.items() if a != x}
        if sb >= len(n2v):
            certified = True
        cleared = frozenset(bfs_distances(H, v, limit=3))
        for psi in _family2_colourings(H, inst, order, anchor_of, len(mandatory), sb):
            children.append(
                Child(inst.with_lists({w: (c,) for w, c in psi.items()}), f"F2 v={v}", family=2, cleared=cleared)
            )
    return children, certified


def branch_b5(inst: Instance, cfg: BranchConfig, anchors: Optional[AnchorMaps] = None) -> BranchSet:
    """Family 1 (two monochromatic sets with a large common fan-out) then family 2
    (colour the 2-ball around a far vertex, copying anchor colours outside S)."""
    if anchors is None:
        anchors = fix_anchors(inst, cfg)
    mu = anchors.H.n
    f1, c1 = _family1(inst, cfg, anchors.H, mu)
    f2, c2 = _family2(inst, cfg, anchors, mu)
    return BranchSet("B5", f1 + f2, certified=(c1 or c2))


def check_b5_shrinkage(parent_mu: int, child_outcome: ReduceOutcome, family: int, cfg: BranchConfig,
                       cleared: FrozenSet[int] = frozenset()) -> bool:
    """Size check on a reduced B5 child: how much of L3 it must have cleared. NO children pass vacuously."""
    if child_outcome.kind == NO or child_outcome.propagated is None:
        return True
    child = child_outcome.propagated
    child_mu = child.mu
    if family == 1:
        return child_mu <= floor_bound(6 * parent_mu / 7)
    if any(len(child.lists[w]) == 3 for w in cleared if w in child.lists):
        return False
    return child_mu <= near_diameter_loss(parent_mu, cfg)


# ---------------------------------------------------------------------------
# Driver


@dataclass
class SearchStats:
    rule_applications: Counter = field(default_factory=Counter)
    children_generated: Counter = field(default_factory=Counter)
    instances: int = 0
    max_depth: int = 0
    r4_nodes: int = 0
    fallback_enumerations: int = 0
    b5_uncertified: int = 0
    near_diameter_checks: int = 0
    near_diameter_violations: int = 0
    b5_shrinkage_checks: int = 0
    b5_shrinkage_violations: int = 0
    gating_violations: int = 0
    wall_time: float = 0.0

    @property
    def invariant_violations(self) -> int:
        return self.near_diameter_violations + self.b5_shrinkage_violations + self.gating_violations

    @property
    def total_nodes(self) -> int:
        return self.instances + self.r4_nodes

    def merge(self, other: "SearchStats") -> None:
        self.rule_applications.update(other.rule_applications)
        self.children_generated.update(other.children_generated)
        for name in ("instances", "r4_nodes", "fallback_enumerations", "b5_uncertified", "near_diameter_checks",
                     "near_diameter_violations", "b5_shrinkage_checks", "b5_shrinkage_violations",
                     "gating_violations"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.max_depth = max(self.max_depth, other.max_depth)
        self.wall_time += other.wall_time

    def as_dict(self, timings: bool = False) -> dict:
        d = {
            "rule_applications": dict(sorted(self.rule_applications.items())),
            "children_generated": dict(sorted(self.children_generated.items())),
            "instances": self.instances,
            "max_depth": self.max_depth,
            "r4_nodes": self.r4_nodes,
            "total_nodes": self.total_nodes,
            "fallback_enumerations": self.fallback_enumerations,
            "b5_uncertified": self.b5_uncertified,
            "near_diameter_checks": self.near_diameter_checks,
            "near_diameter_violations": self.near_diameter_violations,
            "b5_shrinkage_checks": self.b5_shrinkage_checks,
            "b5_shrinkage_violations": self.b5_shrinkage_violations,
            "gating_violations": self.gating_violations,
            "invariant_violations": self.invariant_violations,
        }
        if timings:
            d["wall_time"] = self.wall_time
        return d


class SearchObserver:
    """Hooks for tests and instrumentation. Default methods do nothing."""

    def on_reduce(self, before: Instance, outcome: ReduceOutcome) -> None:
        pass

    def on_branch(self, parent: Instance, bs: BranchSet) -> None:
        pass


@dataclass
class SolveResult:
    answer: str
    coloring: Optional[Coloring]
    stats: SearchStats
    diameter: Optional[float] = None

    @property
    def feasible(self) -> bool:
        return self.answer == YES


def next_branching(inst: Instance, cfg: BranchConfig) -> Optional[BranchSet]:
    """The first applicable rule among B1-B4, or None."""
    v = find_b1(inst, cfg)
    if v is not None:
        return branch_on_vertex(inst, v, "B1")
    v = find_b2(inst, cfg)
    if v is not None:
        return branch_on_vertex(inst, v, "B2")
    hit = find_b3(inst, cfg)
    if hit is not None:
        return branch_b3(inst, *hit)
    pair = find_b4(inst, cfg)
    if pair is not None:
        return branch_b4(inst, *pair)
    return None


class _Search:
    def __init__(self, cfg: BranchConfig, diam_ok: bool, observer: Optional[SearchObserver]):
        self.cfg = cfg
        self.diam_ok = diam_ok
        self.observer = observer or SearchObserver()
        self.stats = SearchStats()

    def exhaustive(self, inst: Instance) -> Optional[Coloring]:
        self.stats.fallback_enumerations += 1
        counter = _Counter()
        kind, col = enumerate_l3(inst, counter)
        self.stats.r4_nodes += counter.nodes
        return col if kind == YES else None

    def run(self, inst: Instance, depth: int = 0, b5_parent: Optional[Tuple[int, Child]] = None):
        st = self.stats
        st.instances += 1
        st.max_depth = max(st.max_depth, depth)
        out = reduce_fixpoint(inst, self.cfg.r4_cutoff)
        self.observer.on_reduce(inst, out)
        st.r4_nodes += out.r4_nodes
        for ev in out.trace:
            st.rule_applications[ev.rule] += 1
        if b5_parent is not None:
            parent_mu, child = b5_parent
            st.b5_shrinkage_checks += 1
            if not check_b5_shrinkage(parent_mu, out, child.family, self.cfg, child.cleared):
                st.b5_shrinkage_violations += 1
        if out.kind == YES:
            return out.coloring
        if out.kind == NO:
            return None
        red = out.instance
        bs = next_branching(red, self.cfg)
        if bs is None:
            if not self.diam_ok:
                st.rule_applications["FALLBACK"] += 1
                return self.exhaustive(red)
            st.near_diameter_checks += 1
            if not check_near_diameter3(red, self.cfg):
                st.near_diameter_violations += 1
            if out.kind != REDUCED:
                st.gating_violations += 1
            anchors = fix_anchors(red, self.cfg)
            bs = branch_b5(red, self.cfg, anchors)
            if not bs.certified:
                st.b5_uncertified += 1
            if not bs.children:
                st.rule_applications["FALLBACK"] += 1
                return self.exhaustive(red)
        st.rule_applications[bs.rule] += 1
        st.children_generated[bs.rule] += len(bs.children)
        self.observer.on_branch(red, bs)
        parent_mu = red.mu
        for child in bs.children:
            tag = (parent_mu, child) if bs.rule == "B5" else None
            col = self.run(child.instance, depth + 1, tag)
            if col is not None:
                return child.lift(col)
        if bs.rule == "B5" and not bs.certified:
            # children rely on asymptotic structure; confirm NO exhaustively
            st.rule_applications["FALLBACK"] += 1
            return self.exhaustive(red)
        return None


def solve(inst: Instance, cfg: Optional[BranchConfig] = None, observer: Optional[SearchObserver] = None) -> SolveResult:
    """Decide LIST-3-COLOURING on a graph of diameter <= 3 with the branch-and-reduce algorithm."""
    cfg = cfg or BranchConfig()
    t0 = time.perf_counter()
    diam = diameter(inst.graph) if inst.graph.n else 0
    if diam > 3 and cfg.diameter_policy == STRICT:
        raise DiameterError(diam)
    search = _Search(cfg, diam <= 3, observer)
    col = search.run(inst)
    search.stats.wall_time = time.perf_counter() - t0
    if col is not None:
        if not verify_coloring(inst, col):
            raise AssertionError("solver produced an invalid certificate")
        return SolveResult(YES, col, search.stats, diam)
    return SolveResult(NO, None, search.stats, diam)


def _solve_subtree(inst: Instance, cfg: BranchConfig, diam_ok: bool, b5_parent):
    search = _Search(cfg, diam_ok, None)
    col = search.run(inst, 1, b5_parent)
    return col, search.stats


def solve_parallel(inst: Instance, cfg: Optional[BranchConfig] = None, jobs: int = 2) -> SolveResult:
    """Like solve, but the children of the root branching run in a process pool.

    Only a B1-B4 root branching is split; anything else falls back to the
    sequential driver.  The answer is the first YES in child order, so it does
    not depend on scheduling.
    """
    from concurrent.futures import ProcessPoolExecutor

    cfg = cfg or BranchConfig()
    if jobs <= 1:
        return solve(inst, cfg)
    t0 = time.perf_counter()
    diam = diameter(inst.graph) if inst.graph.n else 0
    if diam > 3 and cfg.diameter_policy == STRICT:
        raise DiameterError(diam)
    root = _Search(cfg, diam <= 3, None)

    out = reduce_fixpoint(inst, cfg.r4_cutoff)
    if out.kind != REDUCED:
        return solve(inst, cfg)
    red = out.instance
    bs = next_branching(red, cfg)
    if bs is None or not diam <= 3:
        return solve(inst, cfg)
    root.stats.instances += 1
    root.stats.r4_nodes += out.r4_nodes
    for ev in out.trace:
        root.stats.rule_applications[ev.rule] += 1
    root.stats.rule_applications[bs.rule] += 1
    root.stats.children_generated[bs.rule] += len(bs.children)
    found = None
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_solve_subtree, ch.instance, cfg, True, None) for ch in bs.children]
        for ch, fut in zip(bs.children, futures):
            col, st = fut.result()
            root.stats.merge(st)
            if col is not None:
                found = ch.lift(col)
                for f in futures:
                    f.cancel()
                break
    root.stats.max_depth = max(root.stats.max_depth, 1)
    root.stats.wall_time = time.perf_counter() - t0
    if found is not None:
        if not verify_coloring(inst, found):
            raise AssertionError("solver produced an invalid certificate")
        return SolveResult(YES, found, root.stats, diam)
    return SolveResult(NO, None, root.stats, diam)

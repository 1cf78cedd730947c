"""Monte-Carlo laboratory for the structural lemma behind rule B5.

Everything here works on a graph H (in the solver H = G[L3]) with a fixed
root r, anchors n_r and favourite parents p taken from
``branch.build_anchor_maps``.  Bounds from the proof are real powers of mu;
sizes are compared with the ``ceil(bound - 1e-9)`` convention.
"""

from __future__ import annotations

import math
import random
import statistics
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from .branch import AnchorMaps, build_anchor_maps, ceil_bound, seventh, _second_layer
from .graph import Graph, bfs_distances
from .instance import ContractError


@dataclass
class MagicContext:
    H: Graph
    epsilon: float
    anchors: AnchorMaps
    phi: Optional[Mapping[int, int]] = None

    @property
    def mu(self) -> int:
        return self.H.n

    def power(self, exponent: float) -> float:
        return self.mu ** exponent


def make_context(H: Graph, epsilon: float, phi: Optional[Mapping[int, int]] = None, root: Optional[int] = None):
    return MagicContext(H, epsilon, build_anchor_maps(H, root), phi)


@dataclass
class DeducingReport:
    vertex: int
    buckets: Dict[int, FrozenSet[int]]
    deducing: FrozenSet[int]
    fruitful: FrozenSet[int]
    A_v: Optional[FrozenSet[int]] = None


def at_least(size: int, bound: float) -> bool:
    return size >= ceil_bound(bound)


def at_most(size: int, bound: float) -> bool:
    return size <= math.floor(bound + 1e-9)


def check_magic_preconditions(H: Graph, epsilon: float) -> Tuple[bool, List[str]]:
    mu = H.n
    if mu == 0:
        return True, []
    deg_b = mu ** (1 / 3 + epsilon)
    sec_b = mu ** (2 / 3 + 2 * epsilon)
    reach_b = mu - 4 * mu ** (2 / 3 + 2 * epsilon)
    bad = []
    for v in H.vertices:
        if not at_most(H.degree(v), deg_b):
            bad.append(f"degree of {v} is {H.degree(v)} > {deg_b:.3f}")
        dist = bfs_distances(H, v, limit=3)
        n2 = sum(1 for d in dist.values() if d == 2)
        if not at_most(n2, sec_b):
            bad.append(f"|N2({v})| = {n2} > {sec_b:.3f}")
        if not at_least(len(dist) - 1, reach_b):
            bad.append(f"|N<=3({v})| = {len(dist) - 1} < {reach_b:.3f}")
    verts = H.vertices
    for i, u in enumerate(verts):
        nu = H.neighbors(u)
        for v in verts[i + 1 :]:
            common = nu & H.neighbors(v)
            if not common:
                continue
            fan = len(H.neighbors_of_set(common))
            if not at_most(fan, deg_b):
                bad.append(f"|N(N({u}) & N({v}))| = {fan} > {deg_b:.3f}")
    return not bad, bad


def sample_witness_sets(ctx: MagicContext, rng: random.Random) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """S over V(H) with p = mu^-(1/3+eps); S~ over N2(r) with p = mu^(-3 eps)."""
    p_s = ctx.power(-(1 / 3 + ctx.epsilon))
    p_t = ctx.power(-3 * ctx.epsilon)
    s = frozenset(v for v in ctx.H.vertices if rng.random() < p_s)
    layer2 = sorted(ctx.anchors.layer(2))
    st = frozenset(v for v in layer2 if rng.random() < p_t)
    return s, st


def compute_V_prime(ctx: MagicContext) -> FrozenSet[int]:
    layer3 = ctx.anchors.layer(3)
    bound = ctx.power(1 / 3 - 2 * ctx.epsilon)
    out = set()
    for v in layer3:
        outside = sum(1 for w in ctx.H.neighbors(v) if w not in layer3)
        if at_most(outside, bound):
            out.add(v)
    return frozenset(out)


def classify_deducing(ctx: MagicContext, v: int, S: Optional[FrozenSet[int]] = None) -> DeducingReport:
    if ctx.phi is None:
        raise ContractError("classify_deducing needs a colouring phi")
    H, anc, phi = ctx.H, ctx.anchors, ctx.phi
    layer3 = anc.layer(3)
    buckets: Dict[int, Set[int]] = {a: set() for a in H.neighbors(v)}
    deducing = set()
    for x in _second_layer(H, v):
        a = anc.p[(v, x)]
        buckets[a].add(x)
        if a in layer3 and phi[x] != phi[anc.n_r[a]]:
            deducing.add(x)
    need = ctx.power(1 / 3 - 2 * ctx.epsilon)
    fruitful = frozenset(a for a, b in buckets.items() if at_least(len(b & deducing), need))
    a_v = None
    if S is not None:
        a_v = frozenset(a for a in fruitful if buckets[a] & deducing & S)
    return DeducingReport(v, {a: frozenset(b) for a, b in buckets.items()}, frozenset(deducing), fruitful, a_v)


def verify_outcome2(ctx: MagicContext, T, T2) -> bool:
    if ctx.phi is None:
        return False
    T, T2 = frozenset(T), frozenset(T2)
    if T & T2:
        return False
    size_b = 2 * ctx.power(2 / 3 - ctx.epsilon)
    if not (at_most(len(T), size_b) and at_most(len(T2), size_b)):
        return False
    cols = {ctx.phi[t] for t in T}
    cols2 = {ctx.phi[t] for t in T2}
    if len(cols) != 1 or len(cols2) != 1 or cols == cols2:
        return False
    H = ctx.H
    x = H.closed_neighbors_of_set(T) & H.closed_neighbors_of_set(T2)
    return len(H.neighbors_of_set(x)) >= seventh(ctx.mu)


def outcome3_exceptions(ctx: MagicContext, v: int) -> int:
    anc, phi = ctx.anchors, ctx.phi
    layer3 = anc.layer(3)
    count = 0
    for x in _second_layer(ctx.H, v):
        a = anc.p[(v, x)]
        if a not in layer3 or phi[anc.n_r[a]] != phi[x]:
            count += 1
    return count


def verify_outcome3(ctx: MagicContext, v: int) -> bool:
    if ctx.phi is None:
        return False
    return at_most(outcome3_exceptions(ctx, v), 3 * ctx.power(2 / 3 - ctx.epsilon))


@dataclass
class LemmaReport:
    mu: int
    epsilon: float
    trials: int
    colourable: bool
    preconditions_ok: bool = True
    v_prime_size: int = 0
    v_prime_large_c7: bool = False
    v_prime_large_c9: bool = False
    outcome3_vertices: int = 0
    s_sizes: List[int] = field(default_factory=list)
    st_sizes: List[int] = field(default_factory=list)
    small_witness_hits: int = 0
    many_fruitful_hits: int = 0
    anchor_spread_hits_c4: int = 0
    anchor_spread_hits_c20: int = 0
    outcome2_hits: int = 0
    dichotomy_hits: int = 0
    structural_violations: int = 0
    extraction_attempts: int = 0

    def as_dict(self) -> dict:
        t = max(self.trials, 1)
        s_mean = statistics.fmean(self.s_sizes) if self.s_sizes else 0.0
        s_se = statistics.stdev(self.s_sizes) / math.sqrt(len(self.s_sizes)) if len(self.s_sizes) > 1 else 0.0
        return {
            "mu": self.mu,
            "epsilon": self.epsilon,
            "trials": self.trials,
            "colourable": self.colourable,
            "preconditions_ok": self.preconditions_ok,
            "expected_S": self.mu ** (2 / 3 - self.epsilon) if self.mu else 0.0,
            "mean_S": s_mean,
            "stderr_S": s_se,
            "mean_S_tilde": statistics.fmean(self.st_sizes) if self.st_sizes else 0.0,
            "v_prime_size": self.v_prime_size,
            "small_witness_rate": self.small_witness_hits / t,
            "v_prime_large_c7": self.v_prime_large_c7,
            "v_prime_large_c9": self.v_prime_large_c9,
            "many_fruitful_rate": self.many_fruitful_hits / t,
            "anchor_spread_rate_c4": self.anchor_spread_hits_c4 / t,
            "anchor_spread_rate_c20": self.anchor_spread_hits_c20 / t,
            "outcome2_rate": self.outcome2_hits / t,
            "outcome3_vertices": self.outcome3_vertices,
            "dichotomy_rate": self.dichotomy_hits / t,
            "structural_violations": self.structural_violations,
        }


def _extract(ctx: MagicContext, S, St, vprime, reports) -> Tuple[FrozenSet[int], FrozenSet[int], Tuple[int, int]]:
    """Colour pair per good v, then the most popular pair (ties: smallest pair) selects T and T~."""
    phi, anc = ctx.phi, ctx.anchors
    pairs: Counter = Counter()
    for v in sorted(vprime):
        rep = reports[v]
        found = None
        for a in sorted(rep.A_v or ()):
            if anc.n_r[a] not in St:
                continue
            for x in sorted(rep.buckets[a] & rep.deducing & S):
                found = (phi[x], phi[anc.n_r[a]])
                break
            if found:
                break
        if found:
            pairs[found] += 1
    if pairs:
        i, j = min(pairs, key=lambda k: (-pairs[k], k))
    else:
        i, j = 1, 2
    T = frozenset(v for v in S if phi[v] == i)
    T2 = frozenset(v for v in St if phi[v] == j)
    return T, T2, (i, j)


def monte_carlo_lemma4(ctx: MagicContext, trials: int, rng: random.Random) -> LemmaReport:
    mu, eps = ctx.mu, ctx.epsilon
    rep = LemmaReport(mu, eps, trials, colourable=ctx.phi is not None)
    if ctx.phi is None:
        # outcome 1: nothing to sample
        return rep
    rep.preconditions_ok = check_magic_preconditions(ctx.H, eps)[0]
    vprime = compute_V_prime(ctx)
    rep.v_prime_size = len(vprime)
    rep.v_prime_large_c7 = at_least(len(vprime), mu - 7 * mu ** (2 / 3 + 5 * eps))
    rep.v_prime_large_c9 = at_least(len(vprime), mu - 9 * mu ** (2 / 3 + 5 * eps))
    o3 = [v for v in ctx.H.vertices if verify_outcome3(ctx, v)]
    rep.outcome3_vertices = len(o3)
    size_b = 2 * mu ** (2 / 3 - eps)
    log_mu = math.log(mu) if mu > 1 else 0.0
    a_bound = mu ** (1 / 3 - 5 * eps) / (4 * log_mu) if log_mu else 0.0
    layer3 = ctx.anchors.layer(3)
    for _ in range(trials):
        S, St = sample_witness_sets(ctx, rng)
        rep.s_sizes.append(len(S))
        rep.st_sizes.append(len(St))
        if at_most(len(S), size_b) and at_most(len(St), size_b):
            rep.small_witness_hits += 1
        reports = {v: classify_deducing(ctx, v, S) for v in vprime}
        for v, r in reports.items():
            total = sum(len(b) for b in r.buckets.values())
            union = set().union(*r.buckets.values()) if r.buckets else set()
            if total != len(union) or union != set(_second_layer(ctx.H, v)):
                rep.structural_violations += 1
            if not r.fruitful <= layer3:
                rep.structural_violations += 1
            if any(not b <= ctx.H.neighbors(a) for a, b in r.buckets.items()):
                rep.structural_violations += 1
        if all(at_least(len(r.A_v), a_bound) for r in reports.values()):
            rep.many_fruitful_hits += 1
        images = [len({ctx.anchors.n_r[a] for a in r.A_v}) for r in reports.values()]
        if all(at_least(k, 4 * mu ** (3 * eps) * log_mu) for k in images):
            rep.anchor_spread_hits_c4 += 1
        if all(at_least(k, 20 * mu ** (3 * eps) * log_mu) for k in images):
            rep.anchor_spread_hits_c20 += 1
        T, T2, (i, j) = _extract(ctx, S, St, vprime, reports)
        rep.extraction_attempts += 1
        if not (T <= S and T2 <= St and all(ctx.phi[t] == i for t in T) and all(ctx.phi[t] == j for t in T2)
                and i != j):
            rep.structural_violations += 1
        ok2 = verify_outcome2(ctx, T, T2)
        if ok2:
            rep.outcome2_hits += 1
        if ok2 or o3:
            rep.dichotomy_hits += 1
    return rep

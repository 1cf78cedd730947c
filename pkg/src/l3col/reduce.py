"""Reduction rules R1-R4, their fixpoint, and forcing-colour selection."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Set, Tuple

from .instance import Coloring, ContractError, Instance, assign_colour, level_sets
from .twosat import solve_two_list

YES = "YES"
NO = "NO"
REDUCED = "REDUCED"
NOT_APPLICABLE = "NOT_APPLICABLE"
TRIGGERED = "TRIGGERED"

DEFAULT_R4_CUTOFF = 12


class TraceEvent(NamedTuple):
    rule: str
    vertices: Tuple[int, ...]
    colours: Tuple[int, ...]


@dataclass
class ReduceOutcome:
    kind: str
    instance: Instance
    coloring: Optional[Coloring] = None
    trace: List[TraceEvent] = field(default_factory=list)
    # R3-propagated instance before R2/R4 were tried (None if R1 fired first).
    propagated: Optional[Instance] = None
    r4_nodes: int = 0

    @property
    def solved(self) -> bool:
        return self.kind in (YES, NO)


def rule_r1(inst: Instance) -> str:
    for lst in inst.lists.values():
        if not lst:
            return TRIGGERED
    return NOT_APPLICABLE


def rule_r3_fixpoint(
    inst: Instance, rng: Optional[random.Random] = None, trace: Optional[List[TraceEvent]] = None
) -> Instance:
    """Propagate singleton lists to neighbours until nothing changes.

    ``rng`` randomises the order in which pending singletons are processed;
    the fixpoint itself does not depend on it.
    """
    g = inst.graph
    lists: Dict[int, Set[int]] = {}
    pending = [v for v in g.vertices if len(inst.lists[v]) == 1]
    done = set()

    def cur(v):
        return lists[v] if v in lists else inst.lists[v]

    while pending:
        if rng is not None:
            i = rng.randrange(len(pending))
            pending[i], pending[-1] = pending[-1], pending[i]
        u = pending.pop()
        lu = cur(u)
        if len(lu) != 1 or u in done:
            continue
        done.add(u)
        (c,) = lu
        nbrs = sorted(g.neighbors(u))
        if rng is not None:
            rng.shuffle(nbrs)
        for v in nbrs:
            lv = cur(v)
            if c in lv:
                new = set(lv)
                new.discard(c)
                lists[v] = new
                if trace is not None:
                    trace.append(TraceEvent("R3", (u, v), (c,)))
                if len(new) == 1:
                    pending.append(v)
    if not lists:
        return inst
    return inst.with_lists(lists)


def rule_r2(inst: Instance):
    """(YES, colouring) / (NO, None) when no list is full, else (NOT_APPLICABLE, None)."""
    if any(len(lst) == 3 for lst in inst.lists.values()):
        return NOT_APPLICABLE, None
    if rule_r1(inst) == TRIGGERED:
        return NO, None
    col = solve_two_list(inst)
    return (YES, col) if col is not None else (NO, None)


class _Counter:
    def __init__(self):
        self.nodes = 0


def enumerate_l3(inst: Instance, counter: Optional[_Counter] = None):
    """Exhaustively guess colours of full-list vertices; finish each guess with R3 + R2.

    Partial guesses are propagated with R3 after every step and abandoned as
    soon as a list empties.  Returns (YES, colouring) or (NO, None).
    """
    counter = counter or _Counter()

    def rec(cur: Instance):
        counter.nodes += 1
        cur = rule_r3_fixpoint(cur)
        if rule_r1(cur) == TRIGGERED:
            return None
        full = [v for v in cur.graph.vertices if len(cur.lists[v]) == 3]
        if not full:
            kind, col = rule_r2(cur)
            return col if kind == YES else None
        v = full[0]
        for c in sorted(cur.lists[v]):
            col = rec(cur.with_lists({v: (c,)}))
            if col is not None:
                return col
        return None

    col = rec(inst)
    return (YES, col) if col is not None else (NO, None)


def rule_r4(inst: Instance, cutoff: int, counter: Optional[_Counter] = None):
    """Exhaustive guessing when 0 < |L3| < cutoff."""
    mu = inst.mu
    if not 0 < mu < cutoff:
        return NOT_APPLICABLE, None
    return enumerate_l3(inst, counter)


def reduce_fixpoint(inst: Instance, cutoff: int = DEFAULT_R4_CUTOFF) -> ReduceOutcome:
    """Apply R1, R3 (to fixpoint), R2, R4 in that priority order."""
    trace: List[TraceEvent] = []
    if rule_r1(inst) == TRIGGERED:
        trace.append(TraceEvent("R1", _empty(inst), ()))
        return ReduceOutcome(NO, inst, trace=trace)
    cur = rule_r3_fixpoint(inst, trace=trace)
    if rule_r1(cur) == TRIGGERED:
        trace.append(TraceEvent("R1", _empty(cur), ()))
        return ReduceOutcome(NO, cur, trace=trace, propagated=cur)
    kind, col = rule_r2(cur)
    if kind != NOT_APPLICABLE:
        trace.append(TraceEvent("R2", (), ()))
        return ReduceOutcome(kind, cur, coloring=col, trace=trace, propagated=cur)
    counter = _Counter()
    kind, col = rule_r4(cur, cutoff, counter)
    if kind != NOT_APPLICABLE:
        trace.append(TraceEvent("R4", tuple(sorted(level_sets(cur).L3)), ()))
        return ReduceOutcome(kind, cur, coloring=col, trace=trace, propagated=cur, r4_nodes=counter.nodes)
    return ReduceOutcome(REDUCED, cur, trace=trace, propagated=cur)


def _empty(inst: Instance) -> Tuple[int, ...]:
    return tuple(v for v in inst.graph.vertices if not inst.lists[v])


def forcing_target(inst: Instance, u: int) -> FrozenSet[int]:
    """N_{L3}(N_{L2}(N_{L2}(u))), each N(S) excluding S itself; u is never counted."""
    g = inst.graph
    size = {v: len(lst) for v, lst in inst.lists.items()}
    first = {x for x in g.neighbors(u) if size[x] == 2}
    second = {y for x in first for y in g.neighbors(x) if size[y] == 2} - first
    third = {w for y in second for w in g.neighbors(y) if size[w] == 3} - second
    third.discard(u)
    return frozenset(third)


def choose_forcing_colour(inst: Instance, u: int) -> Tuple[int, int]:
    """Colour for u that knocks the most vertices out of L3 under R3; ties go to the smaller colour."""
    lst = inst.lists[u]
    if not lst:
        raise ContractError(f"vertex {u} has an empty list")
    before = inst.mu
    best: Optional[Tuple[int, int]] = None
    for c in sorted(lst):
        after = rule_r3_fixpoint(assign_colour(inst, u, c)).mu
        drop = before - after
        if best is None or drop > best[1]:
            best = (c, drop)
    return best

"""2-list-colouring through 2-SAT (Edwards' reduction).

Each vertex with a two-colour list gets one boolean: true selects the smaller
colour.  For every edge and every colour in both endpoint lists we forbid the
two endpoints from both taking that colour.  Singleton lists are treated as
constants, which turns the corresponding clauses into unit clauses.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .instance import Coloring, ContractError, Instance

# A literal is 2*var (var true) or 2*var + 1 (var false).
TRUE = "T"
FALSE = "F"


def _neg(lit: int) -> int:
    return lit ^ 1


class ImplicationGraph:
    """Implication graph over 2*nvars literal nodes."""

    def __init__(self, variables: List[int], choice: Dict[int, Tuple[int, int]]):
        self.variables = variables  # var index -> vertex
        self.choice = choice  # vertex -> (colour if true, colour if false)
        self.index = {v: i for i, v in enumerate(variables)}
        self.succ: List[List[int]] = [[] for _ in range(2 * len(variables))]

    @property
    def num_literals(self) -> int:
        return len(self.succ)

    def add_clause(self, a: int, b: int) -> None:
        """Clause (a or b) as the implications -a -> b and -b -> a."""
        self.succ[_neg(a)].append(b)
        self.succ[_neg(b)].append(a)

    def edges(self):
        for a, outs in enumerate(self.succ):
            for b in outs:
                yield a, b

    def literal_meaning(self, lit: int) -> Tuple[int, int]:
        """(vertex, colour) that the literal selects."""
        v = self.variables[lit >> 1]
        c_true, c_false = self.choice[v]
        return v, (c_true if lit % 2 == 0 else c_false)


def _colour_literal(ig: ImplicationGraph, inst: Instance, v: int, c: int):
    """The statement "v gets colour c" as TRUE, FALSE or a literal."""
    lst = inst.lists[v]
    if c not in lst:
        return FALSE
    if len(lst) == 1:
        return TRUE
    c_true, _ = ig.choice[v]
    var = ig.index[v]
    return 2 * var if c == c_true else 2 * var + 1


def build_implication_graph(inst: Instance) -> Optional[ImplicationGraph]:
    """Build the implication graph, or None when a constant clause is already violated."""
    variables = []
    choice = {}
    for v in inst.graph.vertices:
        lst = inst.lists[v]
        if len(lst) == 3:
            raise ContractError(f"vertex {v} has a full list; 2-SAT needs lists of size <= 2")
        if not lst:
            return None
        if len(lst) == 2:
            a, b = sorted(lst)
            variables.append(v)
            choice[v] = (a, b)
    ig = ImplicationGraph(variables, choice)
    for u, v in inst.graph.edges():
        for c in inst.lists[u] & inst.lists[v]:
            a = _colour_literal(ig, inst, u, c)
            b = _colour_literal(ig, inst, v, c)
            # forbid (u=c and v=c): clause (not a) or (not b)
            if a is TRUE and b is TRUE:
                return None
            if a is TRUE:
                ig.add_clause(_neg(b), _neg(b))
            elif b is TRUE:
                ig.add_clause(_neg(a), _neg(a))
            else:
                ig.add_clause(_neg(a), _neg(b))
    return ig


def _tarjan(succ: List[List[int]]) -> List[int]:
    """Iterative Tarjan SCC. Components are numbered in reverse topological order."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: List[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def solve_two_list(inst: Instance) -> Optional[Coloring]:
    """A proper L-colouring, or None if none exists. All lists must have size <= 2."""
    ig = build_implication_graph(inst)
    if ig is None:
        return None
    comp = _tarjan(ig.succ)
    coloring: Coloring = {}
    for i, v in enumerate(ig.variables):
        pos, neg = comp[2 * i], comp[2 * i + 1]
        if pos == neg:
            return None
        c_true, c_false = ig.choice[v]
        # Tarjan numbers sinks first: pick the literal whose component comes later topologically.
        coloring[v] = c_true if pos < neg else c_false
    for v in inst.graph.vertices:
        if len(inst.lists[v]) == 1:
            (coloring[v],) = inst.lists[v]
    return coloring

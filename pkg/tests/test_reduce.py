import random

from hypothesis import given
from hypothesis import strategies as st

from conftest import complete, cycle, instances, path
from l3col.graph import Graph
from l3col.instance import Instance, verify_coloring
from l3col.oracle import check_equivalence, feasible
from l3col.reduce import (
    NO,
    NOT_APPLICABLE,
    REDUCED,
    TRIGGERED,
    YES,
    choose_forcing_colour,
    forcing_target,
    reduce_fixpoint,
    rule_r1,
    rule_r2,
    rule_r3_fixpoint,
    rule_r4,
)


def test_r1():
    assert rule_r1(Instance(path(2), {0: set()})) == TRIGGERED
    assert rule_r1(Instance(path(2))) == NOT_APPLICABLE


def test_r3_cascade_along_path():
    inst = Instance(path(3), {0: {1}, 1: {1, 2}, 2: {2, 3}})
    out = rule_r3_fixpoint(inst)
    assert out.lists == {0: {1}, 1: {2}, 2: {3}}


def test_r3_produces_empty_list_on_conflict():
    out = rule_r3_fixpoint(Instance(path(2), {0: {1}, 1: {1}}))
    assert rule_r1(out) == TRIGGERED


def test_r2_only_without_full_lists():
    assert rule_r2(Instance(path(2)))[0] == NOT_APPLICABLE
    kind, col = rule_r2(Instance(cycle(4), {v: {1, 2} for v in range(4)}))
    assert kind == YES and verify_coloring(Instance(cycle(4)), col)
    assert rule_r2(Instance(cycle(3), {v: {1, 2} for v in range(3)}))[0] == NO


def test_r4_respects_cutoff():
    inst = Instance(complete(4))
    assert rule_r4(inst, 4)[0] == NOT_APPLICABLE
    assert rule_r4(inst, 5) == (NO, None)


def test_reduce_fixpoint_outcomes():
    assert reduce_fixpoint(Instance(complete(4))).kind == NO
    out = reduce_fixpoint(Instance(cycle(5)))
    assert out.kind == YES and verify_coloring(Instance(cycle(5)), out.coloring)
    big = Instance(cycle(13))
    assert reduce_fixpoint(big, cutoff=12).kind == REDUCED
    assert [e.rule for e in reduce_fixpoint(Instance(path(2), {0: {1}, 1: {1}})).trace] == ["R3", "R1"]


def test_forcing_colour_drop():
    # u=0 -- x=1 {1,2} -- w=2 full; colouring u with 1 or 2 pushes w out of L3
    inst = Instance(path(3), {1: {1, 2}})
    assert choose_forcing_colour(inst, 0) == (1, 2)


def test_forcing_target_excludes_u():
    # 0 - 1(L2) - 2(L2) - 3(L3), plus 2 - 0 would make 0 count; it must not
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3), (0, 2)])
    inst = Instance(g, {1: {1, 2}, 2: {2, 3}})
    assert 0 not in forcing_target(inst, 0)


@given(instances(max_n=8), st.integers(0, 2**32 - 1))
def test_r3_fixpoint_is_order_independent(inst, seed):
    base = rule_r3_fixpoint(inst)
    other = rule_r3_fixpoint(inst, rng=random.Random(seed))
    if any(not lst for lst in base.lists.values()):
        assert any(not lst for lst in other.lists.values())
    else:
        assert other.lists == base.lists


@given(instances(max_n=8))
def test_r3_preserves_feasibility(inst):
    assert check_equivalence(inst, rule_r3_fixpoint(inst))


@given(instances(max_n=8), st.integers(1, 12))
def test_reduce_fixpoint_is_sound(inst, cutoff):
    out = reduce_fixpoint(inst, cutoff)
    if out.kind == YES:
        assert verify_coloring(inst, out.coloring)
    elif out.kind == NO:
        assert not feasible(inst)
    else:
        assert check_equivalence(inst, out.instance)
        red = out.instance
        for v, lst in red.lists.items():
            assert lst
            if len(lst) == 1:
                assert not any(lst <= red.lists[w] for w in red.graph.neighbors(v))
        assert out.instance.mu >= cutoff


@given(instances(max_n=8))
def test_forcing_colour_meets_third_of_target(inst):
    for u in inst.graph.vertices:
        if len(inst.lists[u]) == 3:
            _, drop = choose_forcing_colour(inst, u)
            assert 3 * drop >= len(forcing_target(inst, u))

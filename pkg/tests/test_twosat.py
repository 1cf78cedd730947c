import itertools

import pytest
from hypothesis import given

from conftest import complete, cycle, instances, path
from l3col.instance import ContractError, Instance, verify_coloring
from l3col.oracle import brute_force
from l3col.twosat import build_implication_graph, solve_two_list


def test_even_cycle_two_colours():
    inst = Instance(cycle(6), {v: {1, 2} for v in range(6)})
    col = solve_two_list(inst)
    assert col is not None and verify_coloring(inst, col)


def test_odd_cycle_two_colours_infeasible():
    assert solve_two_list(Instance(cycle(5), {v: {1, 2} for v in range(5)})) is None


def test_singletons_and_conflict():
    assert solve_two_list(Instance(path(2), {0: {1}, 1: {1}})) is None
    assert solve_two_list(Instance(path(2), {0: {1}, 1: {1, 2}})) == {0: 1, 1: 2}


def test_empty_list_is_infeasible():
    inst = Instance(path(2), {0: set(), 1: {1}})
    assert build_implication_graph(inst) is None
    assert solve_two_list(inst) is None


def test_full_list_is_a_contract_error():
    with pytest.raises(ContractError):
        solve_two_list(Instance(path(2), {0: {1, 2}}))


def test_implication_graph_is_skew_symmetric():
    inst = Instance(complete(3), {0: {1, 2}, 1: {2, 3}, 2: {1, 3}})
    ig = build_implication_graph(inst)
    edges = set(ig.edges())
    for a, b in edges:
        assert (b ^ 1, a ^ 1) in edges


@given(instances(max_n=9, max_list=2, allow_empty=True))
def test_matches_brute_force(inst):
    col = solve_two_list(inst)
    assert (col is not None) == brute_force(inst).feasible
    if col is not None:
        assert verify_coloring(inst, col)

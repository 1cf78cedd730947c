import itertools

import pytest
from hypothesis import given

from conftest import complete, cycle, instances, petersen
from l3col.instance import Instance, verify_coloring
from l3col.oracle import Indeterminate, brute_force, check_branchset, check_equivalence


def enumerate_all(inst):
    vs = inst.graph.vertices
    for combo in itertools.product(*(sorted(inst.lists[v]) for v in vs)):
        col = dict(zip(vs, combo))
        if verify_coloring(inst, col):
            return True
    return False


def test_known_answers():
    assert brute_force(Instance(petersen())).feasible
    assert not brute_force(Instance(complete(4))).feasible
    assert brute_force(Instance(cycle(5))).feasible
    assert not brute_force(Instance(cycle(5), {v: {1, 2} for v in range(5)})).feasible


def test_budget():
    with pytest.raises(Indeterminate):
        brute_force(Instance(complete(4)), node_budget=3)


def test_branchset_check():
    inst = Instance(cycle(5))
    kids = [inst.with_lists({0: (c,)}) for c in (1, 2, 3)]
    assert check_branchset(inst, kids)
    assert not check_branchset(inst, [Instance(complete(4))])
    assert check_equivalence(inst, kids[0])


@given(instances(max_n=7, allow_empty=True))
def test_matches_exhaustive_product(inst):
    res = brute_force(inst)
    assert res.feasible == enumerate_all(inst)
    if res.feasible:
        assert verify_coloring(inst, res.certificate)

import random

from l3col.gen import gen_magic_precond
from l3col.graph import Graph
from l3col.lemmalab import (
    at_least,
    at_most,
    check_magic_preconditions,
    classify_deducing,
    compute_V_prime,
    make_context,
    monte_carlo_lemma4,
    outcome3_exceptions,
    sample_witness_sets,
    verify_outcome2,
)
from conftest import complete, cycle


def test_rounding_convention():
    assert at_least(3, 2.0000000001)
    assert not at_least(3, 3.2)
    assert at_most(3, 3.0)
    assert at_most(3, 2.9999999999)
    assert not at_most(3, 2.9)


def test_preconditions_fail_on_dense_graph():
    ok, why = check_magic_preconditions(complete(30), 0.02)
    assert not ok and any("degree" in w for w in why)


def context(mu=40, seed=0):
    pg = gen_magic_precond(mu, 0.02, seed)
    return make_context(pg.graph, 0.02, pg.coloring)


def test_witness_sets_live_where_they_should():
    ctx = context()
    S, St = sample_witness_sets(ctx, random.Random(1))
    assert S <= set(ctx.H.vertices)
    assert St <= ctx.anchors.layer(2)


def test_buckets_partition_second_layer():
    ctx = context()
    for v in compute_V_prime(ctx):
        rep = classify_deducing(ctx, v)
        seen = set()
        for a, b in rep.buckets.items():
            assert b <= ctx.H.neighbors(a)
            assert not (b & seen)
            seen |= b
        assert rep.fruitful <= rep.buckets.keys()
        assert rep.deducing <= seen


def test_outcome2_rejects_bad_sets():
    ctx = context()
    v = min(ctx.H.vertices)
    assert not verify_outcome2(ctx, {v}, {v})
    same = [u for u in ctx.H.vertices if ctx.phi[u] == ctx.phi[v]]
    assert not verify_outcome2(ctx, {same[0]}, {same[1]})


def test_outcome3_exceptions_on_cycle():
    # C7 rooted at 0: N2(3) = {1, 5}.  p(3, 1) = 2 sits in layer 2, an exception;
    # p(3, 5) = 4 sits in layer 3 and its anchor is 5 itself, so no exception
    H = cycle(7)
    phi = {0: 1, 1: 2, 2: 1, 3: 2, 4: 3, 5: 1, 6: 2}
    ctx = make_context(H, 0.02, phi)
    assert outcome3_exceptions(ctx, 3) == 1


def test_monte_carlo_report_is_clean_and_seeded():
    ctx = context(30, 2)
    a = monte_carlo_lemma4(ctx, 50, random.Random(7)).as_dict()
    b = monte_carlo_lemma4(ctx, 50, random.Random(7)).as_dict()
    assert a == b
    assert a["structural_violations"] == 0
    assert a["trials"] == 50 and a["preconditions_ok"]


def test_uncolourable_graph_skips_sampling():
    ctx = make_context(Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)]), 0.02, None)
    rep = monte_carlo_lemma4(ctx, 10, random.Random(0))
    assert not rep.colourable and rep.s_sizes == []

import math

import pytest
from hypothesis import given

from conftest import complete, cycle, graphs, path, petersen
from l3col.graph import (
    INFINITE,
    Graph,
    GraphError,
    bfs_distances,
    diameter,
    induced_subgraph,
    merge_vertices,
    neighborhood_exact,
    neighborhood_within,
)


def floyd(g):
    d = {(u, v): (0 if u == v else math.inf) for u in g.vertices for v in g.vertices}
    for u, v in g.edges():
        d[u, v] = d[v, u] = 1
    for k in g.vertices:
        for i in g.vertices:
            for j in g.vertices:
                if d[i, k] + d[k, j] < d[i, j]:
                    d[i, j] = d[i, k] + d[k, j]
    return d


def test_known_diameters():
    assert diameter(cycle(5)) == 2
    assert diameter(cycle(7)) == 3
    assert diameter(path(4)) == 3
    assert diameter(complete(4)) == 1
    assert diameter(petersen()) == 2
    assert diameter(Graph([0])) == 0


def test_disconnected_is_infinite():
    assert diameter(Graph(range(3), [(0, 1)])) == INFINITE


def test_empty_graph_diameter_raises():
    with pytest.raises(GraphError):
        diameter(Graph())


def test_bad_edges_rejected():
    with pytest.raises(GraphError):
        Graph([0, 1], [(0, 0)])
    with pytest.raises(GraphError):
        Graph([0, 1], [(0, 2)])


def test_neighbourhoods_on_path():
    g = path(6)
    assert neighborhood_exact(g, 0, 2) == {2}
    assert neighborhood_within(g, 2, 2) == {0, 1, 3, 4}
    assert neighborhood_within(g, 2, 1, closed=True) == {1, 2, 3}
    assert g.neighbors_of_set({1, 2}) == {0, 3}
    assert g.closed_neighbors_of_set({1, 2}) == {0, 1, 2, 3}


def test_bfs_limit_stops_early():
    assert bfs_distances(path(6), 0, limit=2) == {0: 0, 1: 1, 2: 2}


def test_merge_vertices():
    g = path(3)
    h, x, mapping = merge_vertices(g, 0, 2)
    assert x == 3 and mapping[0] == mapping[2] == 3
    assert h.vertices == (1, 3) and h.has_edge(1, 3)
    with pytest.raises(GraphError):
        merge_vertices(g, 0, 1)
    with pytest.raises(GraphError):
        merge_vertices(g, 0, 0)


def test_induced_subgraph_keeps_labels():
    h, mapping = induced_subgraph(cycle(5), {0, 1, 3})
    assert h.vertices == (0, 1, 3)
    assert h.edges() == ((0, 1),)
    assert mapping == {0: 0, 1: 1, 3: 3}


@given(graphs(min_n=1, max_n=8))
def test_bfs_matches_floyd_warshall(g):
    d = floyd(g)
    for u in g.vertices:
        dist = bfs_distances(g, u)
        for v in g.vertices:
            assert dist.get(v, math.inf) == d[u, v]
    assert diameter(g) == max(d.values())


@given(graphs(min_n=1, max_n=8))
def test_neighbourhood_layers_partition_ball(g):
    for v in g.vertices:
        ball = neighborhood_within(g, v, 3)
        layers = [neighborhood_exact(g, v, k) for k in (1, 2, 3)]
        assert set().union(*layers) == ball
        assert sum(map(len, layers)) == len(ball)
        assert neighborhood_exact(g, v, 1) == g.neighbors(v)

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nntrav import (
    CostFunction,
    Graph,
    GraphError,
    UnreachableError,
    bfs_distances,
    check_triangle,
    complete_graph,
    cost_of,
    graph_from_edge_list,
    graph_to_dot,
    graph_to_edge_list,
    hop_distance,
    instance_from_json_obj,
    instance_to_json_obj,
    metric_closure,
    nearest_of,
    normalize_edge,
    path_graph,
    random_metric_cost,
    unbounded_ratio_instance,
    validate_traversal,
)
from helpers import random_connected_graph


def test_graph_basics():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert g.n == 4
    assert g.edge_count == 3
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)
    assert g.degree(1) == 2
    assert g.adjacent(1) == {0, 2}
    assert g.edges() == [(0, 1), (1, 2), (2, 3)]


def test_graph_rejects_garbage():
    with pytest.raises(GraphError):
        Graph(0, [])
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])  # self-loop
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])  # out of range
    with pytest.raises(GraphError):
        Graph(3, [(0, 1), (1, 0)])  # duplicate under normalization


def test_normalize_edge():
    assert normalize_edge(3, 1) == (1, 3)
    assert normalize_edge(1, 3) == (1, 3)


def test_delete_edge_and_copy():
    g = path_graph(3)
    h = g.copy()
    g.delete_edge(0, 1)
    assert not g.has_edge(0, 1)
    assert h.has_edge(0, 1)  # copies do not alias
    with pytest.raises(GraphError):
        g.delete_edge(0, 1)  # already gone


def test_component_and_connectivity():
    g = Graph(5, [(0, 1), (1, 2), (3, 4)])
    assert g.component(0) == {0, 1, 2}
    assert g.component(4) == {3, 4}
    assert not g.is_connected()
    assert complete_graph(4).is_connected()


def test_bfs_distances_sentinel_for_unreachable():
    g = Graph(4, [(0, 1)])
    d = bfs_distances(g, 0)
    assert d == [0, 1, 5, 5]  # n + 1 marks unreachable
    assert hop_distance(g, 0, 3) is None
    assert hop_distance(g, 0, 1) == 1


def test_nearest_of_returns_all_tied_targets_sorted():
    g = path_graph(5)
    hit = nearest_of(g, 2, {0, 4, 1})
    assert hit == (1, [1])
    hit = nearest_of(g, 2, {0, 4})
    assert hit == (2, [0, 4])
    assert nearest_of(g, 0, set()) is None


def test_hop_metric_vs_closure_agree():
    rng = random.Random(7)
    for _ in range(20):
        g = random_connected_graph(rng, rng.randint(2, 9))
        hop = CostFunction.hop_metric(g)
        closed = metric_closure(g)
        assert hop.as_matrix() == closed.as_matrix()
        assert closed.is_metric()


def test_hop_metric_requires_graph():
    with pytest.raises(GraphError):
        CostFunction.hop_metric(metric_closure(path_graph(3)))


def test_matrix_validation():
    with pytest.raises(GraphError):
        CostFunction.from_matrix([[0, 1], [2, 0]])  # asymmetric
    with pytest.raises(GraphError):
        CostFunction.from_matrix([[1, 1], [1, 0]])  # nonzero diagonal
    with pytest.raises(GraphError):
        CostFunction.from_matrix([[0, -1], [-1, 0]])  # negative
    with pytest.raises(GraphError):
        CostFunction.from_matrix([[0, 1], [1]])  # ragged


def test_zero_cost_pairs_are_legal_but_reported():
    c = CostFunction.from_matrix([[0, 0, 2], [0, 0, 2], [2, 2, 0]])
    assert c.zero_cost_pairs() == [(0, 1)]


def test_check_triangle_finds_least_violation():
    c = unbounded_ratio_instance(10)
    # c(0,1)=10 > c(0,2)+c(2,1)=4: reported as (u, w, v) with w the witness
    assert check_triangle(c) == (0, 2, 1)
    assert not c.is_metric()
    assert check_triangle(metric_closure(path_graph(4))) is None


def test_unbounded_ratio_instance_is_metric_for_small_x():
    assert unbounded_ratio_instance(4).is_metric()
    assert not unbounded_ratio_instance(5).is_metric()
    with pytest.raises(GraphError):
        unbounded_ratio_instance(-1)


def test_disconnected_hop_metric_raises():
    g = Graph(3, [(0, 1)])
    c = CostFunction.hop_metric(g)
    with pytest.raises(UnreachableError):
        c.cost(0, 2)
    with pytest.raises(UnreachableError):
        c.as_matrix()


def test_validate_traversal():
    validate_traversal([2, 0, 1], 3)
    for bad in ([0, 1], [0, 1, 1], [0, 1, 3]):
        with pytest.raises(GraphError):
            validate_traversal(bad, 3)


def test_cost_of():
    c = metric_closure(path_graph(4))
    assert cost_of([1, 0, 2, 3], c) == 4
    assert cost_of([0], CostFunction.from_matrix([[0]])) == 0


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_random_metric_cost_is_metric(n, seed):
    c = random_metric_cost(n, random.Random(seed))
    assert c.is_metric()
    mat = c.as_matrix()
    lo, hi = c.pair_cost_extremes()
    assert 1 <= lo <= hi <= 9
    assert all(mat[u][u] == 0 for u in range(n))


def test_instance_json_round_trip_graph_only():
    g = random_connected_graph(random.Random(3), 7)
    obj = instance_to_json_obj(g)
    back, cost = instance_from_json_obj(obj)
    assert back == g
    assert cost is None


def test_instance_json_round_trip_with_weights():
    c = unbounded_ratio_instance(10)
    obj = instance_to_json_obj(complete_graph(4), c)
    back, cost2 = instance_from_json_obj(obj)
    assert back == complete_graph(4)
    assert cost2.as_matrix() == c.as_matrix()


def test_instance_json_rejects_partial_weights():
    obj = {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]], "weights": [[0, 1, 5]]}
    with pytest.raises(GraphError):
        instance_from_json_obj(obj)
    obj["weights"] = [[0, 1, 5], [0, 1, 5], [1, 2, 1], [0, 2, 1]]
    with pytest.raises(GraphError):
        instance_from_json_obj(obj)


def test_edge_list_round_trip():
    g = random_connected_graph(random.Random(11), 6)
    assert graph_from_edge_list(graph_to_edge_list(g)) == g
    with pytest.raises(GraphError):
        graph_from_edge_list("3 2\n0 1\n")  # header promises more edges


def test_dot_output_shape():
    dot = graph_to_dot(path_graph(3))
    assert dot.startswith("graph G {")
    assert "0 -- 1;" in dot and "1 -- 2;" in dot
    assert dot.rstrip().endswith("}")


@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_hop_metric_triangle_always_holds(n, seed):
    g = random_connected_graph(random.Random(seed), n)
    assert check_triangle(CostFunction.hop_metric(g)) is None

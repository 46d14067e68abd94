import networkx as nx
import pytest
from hypothesis import given, strategies as st

from crystalforms.crystal import parse_builtin
from crystalforms.errors import ValidationError
from crystalforms.multigraph import (INFINITY, GraphMorphism, MultiGraph, bfs_distances, components, diameter, distance,
                                     identity_morphism, is_connected, is_covering, quotient, shortest_path)


def four_cycle():
    return MultiGraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_four_cycle_distance_is_two():
    assert distance(four_cycle(), 0, 2) == 2


def test_inverse_must_be_involution():
    with pytest.raises(ValidationError):
        MultiGraph(2, [0, 1], [1, 0], [0, 1])  # inverse of 0 is 0 but o(0) != t(0)


def test_strictly_symmetric_rejects_self_inverse_loop():
    with pytest.raises(ValidationError):
        MultiGraph(1, [0], [0], [0], strictly_symmetric=True)
    MultiGraph(1, [0], [0], [0], strictly_symmetric=False)


def test_unreachable_distance_is_infinite():
    g = MultiGraph.from_pairs(3, [(0, 1)])
    assert distance(g, 0, 2) == INFINITY
    assert not is_connected(g)
    assert sorted(map(sorted, components(g))) == [[0, 1], [2]]


def test_json_round_trip():
    g = MultiGraph.from_pairs(3, [(0, 1), (1, 2), (0, 0), (0, 1)])
    assert MultiGraph.from_json(g.to_json()) == g


graphs = st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12)))


def to_nx(n, pairs):
    h = nx.MultiGraph()
    h.add_nodes_from(range(n))
    h.add_edges_from(pairs)
    return h


@given(graphs)
def test_distances_agree_with_networkx(data):
    n, pairs = data
    g = MultiGraph.from_pairs(n, pairs)
    ref = nx.single_source_shortest_path_length(to_nx(n, pairs), 0)
    assert bfs_distances(g, 0) == dict(ref)


@given(graphs)
def test_components_agree_with_networkx(data):
    n, pairs = data
    g = MultiGraph.from_pairs(n, pairs)
    assert len(components(g)) == nx.number_connected_components(to_nx(n, pairs))


@given(graphs, st.data())
def test_shortest_path_is_a_path_of_minimal_length(data, draw):
    n, pairs = data
    g = MultiGraph.from_pairs(n, pairs)
    y = draw.draw(st.integers(0, n - 1))
    p = shortest_path(g, 0, y)
    d = distance(g, 0, y)
    if d == INFINITY:
        assert p is None
        return
    assert len(p) == d and g.is_path(p)
    if p:
        assert g.origin[p[0]] == 0 and g.target[p[-1]] == y


@given(graphs)
def test_inverse_is_involution_swapping_endpoints(data):
    n, pairs = data
    g = MultiGraph.from_pairs(n, pairs)
    for e in range(g.n_edges):
        b = g.inverse[e]
        assert g.inverse[b] == e and b != e
        assert (g.origin[b], g.target[b]) == (g.target[e], g.origin[e])


def test_diameter_of_path():
    g = MultiGraph.from_pairs(4, [(0, 1), (1, 2), (2, 3)])
    assert diameter(g, range(4)) == 3


def test_identity_is_covering_and_bad_map_is_not_a_morphism():
    g = four_cycle()
    assert is_covering(identity_morphism(g))
    bad = GraphMorphism(g, g, [0, 0, 0, 0], list(range(g.n_edges)))
    assert not bad.is_morphism()


def test_hexagonal_torus_quotient_recovers_seed():
    lat = parse_builtin("hexagonal")
    g, autos = lat.torus([3, 3])
    qg, proj, free = quotient(g, autos)
    assert (qg.n_vertices, qg.n_edges, free) == (2, 6, True)
    assert is_covering(proj)


def test_quotient_rejects_non_automorphism():
    from crystalforms.multigraph import Automorphism

    g = MultiGraph.from_pairs(3, [(0, 1), (1, 2)])
    with pytest.raises(ValidationError):
        quotient(g, [Automorphism((1, 0, 2), (0, 1, 2, 3))])

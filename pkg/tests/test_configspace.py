from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from crystalforms.configspace import (STAR, ConfigSpace, Configuration, GraphAmbient, Transition,
                                      default_representatives, graph_prefix)
from crystalforms.crystal import LatticeEdge, LatticeVertex, parse_builtin
from crystalforms.errors import CapExceeded, InconclusiveError, ValidationError
from crystalforms.interaction import exclusion, generalized_exclusion, two_species_exclusion
from crystalforms.multigraph import MultiGraph

V = LatticeVertex


def line_space(inter=None):
    return ConfigSpace(parse_builtin("euclidean(1)"), inter or exclusion())


def test_exclusion_hop_and_blocked_hop():
    sp = line_space()
    eta = Configuration({V(0, (0,)): "1"})
    right = next(e for e in sp.ambient.out_edges(V(0, (0,))) if sp.ambient.target(e) == V(0, (1,)))
    assert sp.apply_edge(eta, right) == Configuration({V(0, (1,)): "1"})
    both = Configuration({V(0, (0,)): "1", V(0, (1,)): "1"})
    assert sp.apply_edge(both, right) == both


def test_star_is_empty_and_has_zero_charge():
    sp = line_space()
    assert len(STAR) == 0 and sp.charge(STAR) == (Fraction(0),)


def test_union_requires_disjoint_supports():
    a = Configuration({1: "1"})
    with pytest.raises(ValidationError):
        a.union(Configuration({1: "1"}))
    assert a.union(Configuration({2: "1"})).support == [1, 2]


def test_from_mapping_drops_base_state():
    assert Configuration.from_mapping({1: "0", 2: "1"}, "0") == Configuration({2: "1"})


def test_json_round_trip():
    eta = Configuration({V(0, (2, -1)): "A", V(1, (0, 0)): "B"})
    assert Configuration.from_json(eta.to_json()) == eta


def test_infinite_enumeration_needs_vertices():
    with pytest.raises(InconclusiveError):
        next(line_space().enumerate())


def test_enumeration_counts_and_cap():
    w = parse_builtin("euclidean(2)").box_window([2, 2])
    sp = ConfigSpace(w, two_species_exclusion())
    assert sum(1 for _ in sp.enumerate()) == 81
    assert sum(1 for _ in sp.enumerate(max_support=1)) == 1 + 4 * 2
    with pytest.raises(CapExceeded):
        list(sp.enumerate(cap=10))


def test_charge_class_on_window():
    w = parse_builtin("euclidean(1)").box_window([5])
    sp = ConfigSpace(w, exclusion())
    cls = sp.charge_class((Fraction(2),), w.vertices)
    assert len(cls) == 10 and all(sp.charge(c) == (2,) for c in cls)


def test_canonical_representative_fills_the_prefix():
    sp = ConfigSpace(parse_builtin("hexagonal"), exclusion())
    reps = default_representatives(sp)
    r3 = reps.rep((Fraction(3),))
    assert len(r3) == 3 and reps.min_sites((Fraction(3),)) == 3
    assert set(r3.support) == set(parse_builtin("hexagonal").ordered_prefix(V(0, (0, 0)), 3))


def test_generalized_exclusion_representative_uses_fewest_sites():
    sp = ConfigSpace(parse_builtin("euclidean(1)"), generalized_exclusion(2))
    reps = default_representatives(sp)
    assert reps.min_sites((Fraction(3),)) == 2
    assert sp.charge(reps.rep((Fraction(3),))) == (3,)


def test_graph_ambient_and_bfs_path():
    g = MultiGraph.from_pairs(4, [(0, 1), (1, 2), (2, 3)])
    sp = ConfigSpace(GraphAmbient(g), exclusion())
    eta, target = Configuration({0: "1"}), Configuration({3: "1"})
    path = sp.bfs_path(eta, target)
    assert len(path) == 3 and sp.is_path(path)
    assert sp.transition_target(path[-1]) == target
    assert sp.bfs_path(eta, Configuration({0: "1", 1: "1"})) is None
    assert graph_prefix(g)(2) == [0, 1]


def test_component_labels_follow_charge_on_a_cycle():
    g = MultiGraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    sp = ConfigSpace(GraphAmbient(g), exclusion())
    labels = sp.component_labels(sp.enumerate())
    assert len(set(labels.values())) == 5


configs_1d = st.dictionaries(st.integers(-4, 4), st.sampled_from(["A", "B"]), max_size=5)


@given(configs_1d, st.integers(-4, 4), st.integers(0, 1))
def test_inversion_is_an_involution_and_reverses(sites, x, e0):
    sp = line_space(two_species_exclusion())
    eta = Configuration({V(0, (c,)): s for c, s in sites.items()})
    tr = Transition(eta, LatticeEdge(e0, (x,)))
    inv = sp.invert_transition(tr)
    assert sp.invert_transition(inv) == tr
    assert inv.config == sp.transition_target(tr)
    assert sp.transition_target(inv) == eta


@given(configs_1d)
def test_moves_conserve_charge(sites):
    sp = line_space(two_species_exclusion())
    eta = Configuration({V(0, (c,)): s for c, s in sites.items()})
    for tr, y in sp.moves(eta):
        assert sp.charge(y) == sp.charge(eta) and y != eta


@given(configs_1d, st.integers(-3, 3))
def test_shift_commutes_with_charge_and_size(sites, s):
    sp = line_space(two_species_exclusion())
    eta = Configuration({V(0, (c,)): st_ for c, st_ in sites.items()})
    moved = eta.shifted((s,))
    assert sp.charge(moved) == sp.charge(eta) and len(moved) == len(eta)
    assert moved.shifted((-s,)) == eta

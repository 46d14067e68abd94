import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from crystalforms.calculus import (Differential, FormSum, FunctionForm, InvariantFunction, TabulatedForm,
                                   TransportPotential, ZeroForm, alternating_violations, candidate_supports,
                                   canonical_support, expand, expand_invariant, integrate, iota_restrict, potential,
                                   reconstruct, shift_invariance_violations)
from crystalforms.configspace import ConfigSpace, Configuration, Transition, default_representatives
from crystalforms.crystal import LatticeEdge, LatticeVertex, parse_builtin
from crystalforms.errors import ClosednessError, ValidationError
from crystalforms.fixtures import random_invariant_function, random_zetas, round_trip_form
from crystalforms.interaction import exclusion, two_species_exclusion
from crystalforms.varadhan import random_configuration

V = LatticeVertex
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.integers(1, 3), st.data())
def test_expand_reconstructs_and_is_unique(n, data):
    states = ("0", "A", "B")
    verts = list(range(n))
    table = {Configuration.from_mapping(dict(zip(verts, c)), "0"): data.draw(rationals)
             for c in itertools.product(states, repeat=n)}
    f = lambda eta: table[eta.restrict(verts)]
    terms = expand(f, verts, states, "0")
    g = reconstruct(terms)
    assert all(g(c) == v for c, v in table.items())
    assert expand(g, verts, states, "0") == terms
    # every term vanishes once a coordinate in its support is the base state
    for sup, t in terms.items():
        for c in table:
            if any(c.get(x, "0") == "0" for x in sup):
                assert t(c) == 0


def test_expand_of_constant_is_the_empty_term():
    terms = expand(lambda eta: Fraction(3), [0, 1], ("0", "1"), "0")
    assert list(terms) == [()]


def test_iota_restrict():
    eta = Configuration({0: "1", 5: "1"})
    assert iota_restrict(len, [0, 1], eta) == 1


def test_canonical_support_moves_least_site_to_cell_zero():
    sup, shift = canonical_support([V(1, (3, 4)), V(0, (5, 4))])
    assert sup == (V(0, (2, 0)), V(1, (0, 0))) and shift == (-3, -4)


def test_invariant_function_rejects_non_canonical_support():
    lat = parse_builtin("euclidean(1)")
    with pytest.raises(ValidationError):
        InvariantFunction(lat, "0", {(V(0, (1,)),): {("1",): 1}})


@given(st.integers(0, 2**16), st.sampled_from(["euclidean(1)", "euclidean(2)", "hexagonal", "triangular"]))
def test_invariant_function_is_shift_invariant_and_reexpands(seed, name):
    lat = parse_builtin(name)
    rng = random.Random(seed)
    g = random_invariant_function(lat, ("0", "1"), "0", rng)
    verts = lat.cells_to_vertices(lat.block_ball_cells((0,) * lat.rank, 2))
    for _ in range(5):
        eta = random_configuration(rng, verts, ("0", "1"), "0", 4)
        s = tuple(rng.randint(-3, 3) for _ in range(lat.rank))
        assert g(eta) == g(eta.shifted(s))
    again = expand_invariant(g, lat, ("0", "1"), "0", 1)
    assert again.terms == g.terms


@given(st.integers(0, 2**16))
def test_nabla_matches_difference(seed):
    lat = parse_builtin("hexagonal")
    sp = ConfigSpace(lat, two_species_exclusion())
    rng = random.Random(seed)
    g = random_invariant_function(lat, sp.interaction.states, "0", rng)
    verts = lat.cells_to_vertices(lat.block_ball_cells((0, 0), 2))
    eta = random_configuration(rng, verts, sp.interaction.states, "0", 5)
    for e in sp.candidate_edges(eta):
        assert g.nabla(sp, eta, e) == g(sp.apply_edge(eta, e)) - g(eta)


def test_candidate_supports_are_canonical_and_small():
    lat = parse_builtin("euclidean(2)")
    sups = candidate_supports(lat, 1)
    assert {len(s) for s in sups} == {1, 2} and len(sups) == 3
    assert all(canonical_support(s)[0] == s for s in sups)


def closed_form(name="euclidean(2)", seed=0):
    lat = parse_builtin(name)
    sp = ConfigSpace(lat, exclusion())
    rng = random.Random(seed)
    return lat, sp, round_trip_form(sp, random_invariant_function(lat, ("0", "1"), "0", rng), random_zetas(sp, lat.rank, rng))


def test_exact_form_integrates_to_zero_around_cycles():
    lat, sp, omega = closed_form()
    w = lat.box_window([3, 3])
    wsp = ConfigSpace(w, exclusion())
    eta = Configuration({V(0, (0, 0)): "1", V(0, (1, 1)): "1"})
    # a loop of one particle around a plaquette
    path, cur = [], eta
    x = V(0, (0, 0))
    for step in [(1, 0), (0, -1), (-1, 0), (0, 1)]:
        e = next(le for le in lat.out_edges(x) if lat.target(le) == lat.shift_vertex(x, step))
        path.append(Transition(cur, e))
        cur = sp.apply_edge(cur, e)
        x = lat.target(e)
    assert cur == eta and sp.is_path(path)
    assert integrate(omega, path, sp) == 0
    assert not alternating_violations(omega, wsp, [t for c in wsp.enumerate(max_support=2) for t, _ in wsp.moves(c)])


def blocking_form(lat):
    """+1 for a rightward hop while a particle sits at cell 3; alternating but not closed."""
    z = V(0, (3,))

    def fn(eta, e):
        if eta.get(z, "0") != "1" or lat.origin(e) == z or lat.target(e) == z:
            return 0
        step = lat.target(e).cell[0] - lat.origin(e).cell[0]
        moved = eta.get(lat.origin(e), "0") != eta.get(lat.target(e), "0")
        return step if moved and eta.get(lat.origin(e), "0") == "1" else (-step if moved else 0)

    return FunctionForm(fn, radius=3)


def test_potential_reports_a_nonzero_cycle():
    lat = parse_builtin("euclidean(1)")
    w = lat.window((-2,), (4,))
    sp = ConfigSpace(w, exclusion())
    seeds = [Configuration({V(0, (0,)): "1", V(0, (3,)): "1"})]
    with pytest.raises(ClosednessError) as err:
        potential(blocking_form(lat), sp, seeds)
    cyc = err.value.cycle
    assert sp.is_path(cyc) and sp.transition_target(cyc[-1]) == cyc[0].config
    assert integrate(blocking_form(lat), cyc) == err.value.defect != 0


def test_potential_of_exact_form_recovers_differences():
    lat, sp, omega = closed_form("euclidean(1)")
    w = lat.box_window([5])
    wsp = ConfigSpace(w, exclusion())
    seeds = list(wsp.enumerate(max_support=2))
    pot = potential(omega, wsp, seeds)
    for c in seeds:
        for tr, y in wsp.moves(c):
            assert pot(y) - pot(c) == omega.value(c, tr.edge)


@given(st.integers(0, 2**16), st.sampled_from(["euclidean(1)", "euclidean(2)", "hexagonal"]))
def test_transport_potential_is_a_potential(seed, name):
    lat, sp, omega = closed_form(name, seed)
    f = TransportPotential(omega, sp, default_representatives(sp))
    rng = random.Random(seed)
    verts = lat.cells_to_vertices(lat.block_ball_cells((0,) * lat.rank, 3))
    eta = random_configuration(rng, verts, ("0", "1"), "0", 3)
    for e in sp.candidate_edges(eta)[:6]:
        after = sp.apply_edge(eta, e)
        assert f(after) - f(eta) == omega.value(eta, e)


def test_tabulated_form_round_trip():
    lat = parse_builtin("euclidean(2)")
    sp = ConfigSpace(lat, exclusion())
    rng = random.Random(1)
    g = random_invariant_function(lat, ("0", "1"), "0", rng, pair_terms=False)
    om = Differential(g, sp)
    tab = TabulatedForm.from_form(om, lat, sp, 1)
    again = TabulatedForm.from_json(tab.to_json(), lat, sp)
    verts = lat.cells_to_vertices(lat.block_ball_cells((0, 0), 3))
    for _ in range(20):
        eta = random_configuration(rng, verts, ("0", "1"), "0", 5)
        for e in sp.candidate_edges(eta):
            assert again.value(eta, e) == tab.value(eta, e) == om.value(eta, e)


def test_tabulated_form_rejects_far_pattern():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    data = {"radius": 1, "orbit_data": [{"edge_orbit": 0, "entries": [
        {"pattern": Configuration({V(0, (5,)): "1"}).to_json(), "value": "1"}]}]}
    with pytest.raises(ValidationError):
        TabulatedForm.from_json(data, lat, sp)


def test_shift_invariance_violation_detected():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    om = FunctionForm(lambda eta, e: e.cell[0], radius=1)
    probe = [Configuration({V(0, (0,)): "1"})]
    assert shift_invariance_violations(om, sp, probe, [(1,)])
    assert not shift_invariance_violations(ZeroForm(), sp, probe, [(1,)])


def test_form_sum_radius():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    a, b = Differential(len, sp, 1), Differential(len, sp, 2)
    assert FormSum([(1, a), (2, b)]).radius == 2
    assert FormSum([(1, a), (1, Differential(len, sp))]).radius is None

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from crystalforms.calculus import FunctionForm, InvariantFunction, ZeroForm
from crystalforms.configspace import ConfigSpace, Configuration
from crystalforms.crystal import LatticeVertex, parse_builtin
from crystalforms.errors import InconclusiveError, SplittingError, ValidationError
from crystalforms.fixtures import random_invariant_function, random_zetas, round_trip_form
from crystalforms.interaction import exclusion, generalized_exclusion, identity_interaction, two_species_exclusion
from crystalforms.suites import round_trip
from crystalforms.varadhan import (AFunction, DecompositionOptions, MonoidSplitting, Pairing, a_identity_check,
                                   cell_ball, coboundary, cocycle_residual, decompose, dim_dV_check, pairing_local,
                                   random_configuration, shift_back, split_cocycle, uniformity_check)

V = LatticeVertex
ONE = {"0": Fraction(0), "1": Fraction(1)}


def test_a_function_weights_by_cell_coordinate():
    a = AFunction(ONE, 1, "0")
    assert a(Configuration({V(0, (5,)): "1"})) == 5
    assert a(Configuration({V(0, (5, -2)): "1", V(0, (-1, 7)): "1"})) == 4
    assert AFunction(ONE, 2, "0")(Configuration({V(0, (5, -2)): "1"})) == -2


def test_shift_back_moves_by_minus_unit():
    eta = Configuration({V(0, (0, 0)): "1"})
    assert shift_back(eta, 2, 2) == Configuration({V(0, (0, -1)): "1"})


@given(st.integers(0, 2**16), st.sampled_from(["euclidean(1)", "euclidean(2)", "hexagonal", "diamond"]))
def test_a_identities(seed, name):
    lat = parse_builtin(name)
    rng = random.Random(seed)
    verts = lat.cells_to_vertices(lat.block_ball_cells((0,) * lat.rank, 3))
    inter = two_species_exclusion()
    xi = {"0": Fraction(0), "A": Fraction(rng.randint(-5, 5), 3), "B": Fraction(rng.randint(-5, 5), 2)}
    configs = [random_configuration(rng, verts, inter.states, "0", 5) for _ in range(5)]
    for j in range(1, lat.rank + 1):
        for k in range(1, lat.rank + 1):
            assert a_identity_check(AFunction(xi, j, "0"), k, configs, lat.rank)


def test_a_nabla_matches_difference():
    lat = parse_builtin("hexagonal")
    sp = ConfigSpace(lat, exclusion())
    a = AFunction(ONE, 1, "0")
    eta = Configuration({V(0, (0, 0)): "1"})
    for e in sp.candidate_edges(eta):
        assert a.nabla(sp, eta, e) == a(sp.apply_edge(eta, e)) - a(eta)


@pytest.mark.parametrize("name,inter,rank", [("euclidean(2)", exclusion(), 2), ("hexagonal", exclusion(), 2),
                                             ("euclidean(2)", two_species_exclusion(), 4),
                                             ("euclidean(1)", generalized_exclusion(2), 1)])
def test_dim_dV(name, inter, rank):
    lat = parse_builtin(name)
    assert dim_dV_check(lat, ConfigSpace(lat, inter), lat.box_window([3] * lat.rank)) == rank


def test_dim_dV_flat_window_is_inconclusive():
    lat = parse_builtin("euclidean(2)")
    with pytest.raises(InconclusiveError):
        dim_dV_check(lat, ConfigSpace(lat, exclusion()), lat.box_window([1, 3]))


def test_natural_splitting_of_product_cocycle():
    sp = MonoidSplitting(lambda a, b: a[0] * b[0], (1,), "N")
    assert [sp.at(n) for n in range(7)] == [0, 0, -1, -3, -6, -10, -15]


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=11, max_size=11))
def test_integer_splitting_recovers_a_coboundary(vals):
    h0 = dict(zip(range(-5, 6), vals))
    H = lambda a, b: h0[int(a[0])] + h0[int(b[0])] - h0[int(a[0] + b[0])]
    sp = MonoidSplitting(H, (Fraction(1),), "Z")
    for m in range(-3, 3):
        for n in range(-2, 3):
            assert sp.at(m) + sp.at(n) - sp.at(m + n) == H((m,), (n,))


def test_natural_splitting_rejects_negative_charge():
    sp = MonoidSplitting(lambda a, b: 0, (1,), "N")
    with pytest.raises(ValidationError):
        sp((Fraction(-1),))


def test_symmetric_splitting_and_failures():
    charges = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    H = {(x, y): Fraction(x[0] * y[1] + x[1] * y[0]) for x in charges for y in charges
         if (x[0] + y[0], x[1] + y[1]) in charges}
    h = split_cocycle(H, "symmetric")
    assert all(h(x) + h(y) - h((x[0] + y[0], x[1] + y[1])) == v for (x, y), v in H.items())
    bad = dict(H)
    bad[((1, 0), (0, 1))] = Fraction(5)
    with pytest.raises(SplittingError) as err:
        split_cocycle(bad, "symmetric")
    assert err.value.witness is not None


def test_splitting_detects_cocycle_failure():
    charges = [(n,) for n in range(4)]
    # H(0,0) = 1 with H(0,1) = 0 breaks the identity at (0, 0, 1)
    H = {(a, b): Fraction(1) if a == b == (0,) else Fraction(0) for a in charges for b in charges
         if a[0] + b[0] <= 3}
    with pytest.raises(SplittingError, match="cocycle"):
        split_cocycle(H, "symmetric")


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=9, max_size=9),
       st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1)]), st.sampled_from([(0, 1), (1, 1), (2, 0)]),
       st.sampled_from([(0, 0), (1, 0), (0, 2)]))
def test_coboundaries_are_cocycles(vals, a, b, c):
    table = {(x, y): v for (x, y), v in zip([(x, y) for x in range(3) for y in range(3)], vals)}
    h = lambda alpha: table.get(alpha, Fraction(alpha[0] * alpha[1]))
    assert cocycle_residual(coboundary(h), a, b, c) == 0


def test_pairing_refuses_balls_that_are_too_close():
    lat = parse_builtin("euclidean(2)")
    sp = ConfigSpace(lat, exclusion())
    H = Pairing(len, sp, separation=3)
    one = (Fraction(1),)
    with pytest.raises(ValidationError):
        H.evaluate(one, one, centers=((0, 0), (3, 0)), radii=(1, 1))
    # len is additive, so its pairing vanishes everywhere
    ok, recs = H.well_defined(one, (Fraction(2),))
    assert ok and len(recs) >= 3 and recs[0].value == 0


def test_pairing_of_a_charge_function_is_its_coboundary():
    lat = parse_builtin("hexagonal")
    sp = ConfigSpace(lat, exclusion())
    f = lambda eta: Fraction(len(eta)) ** 2
    H = Pairing(f, sp, separation=2)
    assert H((Fraction(2),), (Fraction(3),)) == 12


def test_pairing_local_requires_separation():
    lat = parse_builtin("euclidean(1)")
    eta = Configuration({V(0, (0,)): "1", V(0, (9,)): "1"})
    lam1, lam2 = cell_ball(lat, (0,), 1), cell_ball(lat, (9,), 1)
    assert pairing_local(lambda c: Fraction(len(c)) ** 2, lat, lam1, lam2, eta, 2) == 2
    with pytest.raises(ValidationError):
        pairing_local(len, lat, lam1, cell_ball(lat, (3,), 1), eta, 2)


def test_uniformity_check_accepts_uniform_and_rejects_charge_square():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    w = lat.box_window([9])
    g = random_invariant_function(lat, ("0", "1"), "0", random.Random(3))
    assert uniformity_check(g, lat, sp, w, 1) is None
    wit = uniformity_check(lambda eta: Fraction(len(eta)) ** 2, lat, sp, w, 1)
    assert wit is not None and wit.lhs != wit.rhs


@pytest.mark.parametrize("name", ["euclidean(1)", "euclidean(2)", "hexagonal"])
def test_round_trip_exclusion(name):
    r = round_trip(name, 11)
    assert r["zetas_match"] and r["certificate_residuals"] == 0 and r["difference_constant_per_component"]


def test_round_trip_generalized_exclusion_in_one_dimension():
    r = round_trip("euclidean(1)", 5, interaction=generalized_exclusion(2))
    assert r["zetas_match"] and r["certificate_residuals"] == 0


def test_round_trip_two_species_uses_symmetric_splitting():
    r = round_trip("euclidean(2)", 3, interaction=two_species_exclusion())
    assert r["zetas_match"] and r["certificate_residuals"] == 0 and r["difference_constant_per_component"]


def test_round_trip_on_a_lattice_that_is_not_essentially_euclidean():
    r = round_trip("triangular", 2)
    assert r["zetas_match"] and r["certificate_residuals"] == 0


def test_decompose_zero_form():
    lat = parse_builtin("euclidean(2)")
    sp = ConfigSpace(lat, exclusion())
    om = ZeroForm()
    om.radius = 1
    res = decompose(om, sp, lat.box_window([5, 5]))
    assert res.g.terms == {} and all(z[s] == 0 for z in res.zetas for s in z)
    assert res.certificate["nonzero_residuals"] == 0


def test_decompose_output_is_deterministic():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    rng = random.Random(8)
    om = round_trip_form(sp, random_invariant_function(lat, ("0", "1"), "0", rng), random_zetas(sp, 1, rng))
    a = decompose(om, sp, lat.box_window([5])).to_json()
    b = decompose(om, sp, lat.box_window([5])).to_json()
    assert a == b and a["certificate"]["max_abs_residual"] == "0/1"


def test_decompose_rejects_reducible_interaction():
    lat = parse_builtin("euclidean(2)")
    sp = ConfigSpace(lat, identity_interaction(2))
    with pytest.raises(ValidationError, match="irreducibility"):
        decompose(ZeroForm(), sp, lat.box_window([5, 5]))


def test_decompose_rejects_shift_dependent_form():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    om = FunctionForm(lambda eta, e: Fraction(e.cell[0]), radius=1)
    with pytest.raises(ValidationError, match="shift invariant"):
        decompose(om, sp, lat.box_window([5]))


def test_decompose_rejects_non_alternating_form():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    om = FunctionForm(lambda eta, e: Fraction(1) if sp.apply_edge(eta, e) != eta else Fraction(0), radius=1)
    with pytest.raises(ValidationError, match="alternating"):
        decompose(om, sp, lat.box_window([5]))


def test_decompose_rejects_form_without_radius():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    with pytest.raises(ValidationError, match="radius"):
        decompose(FunctionForm(lambda eta, e: 0), sp, lat.box_window([5]))


def test_decompose_options_are_recorded():
    lat = parse_builtin("euclidean(1)")
    sp = ConfigSpace(lat, exclusion())
    om = round_trip_form(sp, InvariantFunction(lat, "0", {}), [ONE])
    res = decompose(om, sp, lat.box_window([5]), DecompositionOptions(certificate_random=3, seed=4))
    assert res.zetas == [ONE]
    assert res.certificate["family"]["random_configurations"] == 3 and res.certificate["family"]["seed"] == 4

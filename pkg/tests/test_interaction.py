from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from crystalforms.errors import CapExceeded, ValidationError
from crystalforms.interaction import (Interaction, builtin, c_phi, charges_by_size, conserved_basis, cycle_locale,
                                      evidence_passes, exclusion, generalized_exclusion, identity_interaction,
                                      irreducibility_evidence, is_conserved, is_simple, path_locale, require_valid,
                                      simplicity, two_species_exclusion, violations)


def test_exclusion_basis_and_simplicity():
    i = exclusion()
    assert conserved_basis(i) == [{"0": 0, "1": 1}]
    rep = simplicity(i)
    assert rep.simple and rep.monoid == "N" and rep.c_phi == 1


def test_two_species_has_two_conserved_quantities():
    i = two_species_exclusion()
    assert c_phi(i) == 2 and not is_simple(i)
    assert evidence_passes(i)


def test_generalized_exclusion_counts_particles():
    i = generalized_exclusion(2)
    basis = conserved_basis(i)
    assert len(basis) == 1 and [basis[0][s] for s in i.states] == [0, 1, 2]
    assert simplicity(i).monoid == "N"


def test_particle_antiparticle_gives_integers():
    # "+" and "-" annihilate into two empty sites and are created back in the other order
    i = Interaction(("0", "+", "-"), "0", (
        (("+", "-"), ("0", "0")), (("0", "0"), ("-", "+")),
        (("+", "0"), ("0", "+")), (("0", "+"), ("+", "0")),
        (("-", "0"), ("0", "-")), (("0", "-"), ("-", "0")),
    ))
    assert not violations(i)
    rep = simplicity(i)
    assert rep.simple and rep.monoid == "Z"
    assert sorted(rep.integer_values) == [-1, 0, 1]


def test_violation_is_reported_with_the_pair():
    i = Interaction(("0", "1"), "0", ((("0", "1"), ("1", "1")),))
    bad = violations(i)
    assert bad == [(("0", "1"), ("1", "1"), ("1", "1"))]
    with pytest.raises(ValidationError, match="0"):
        require_valid(i)


def test_swap_then_fixed_pair_is_valid():
    # phi(0,1) = (1,0) with (1,0) fixed: phi_bar(1,0) = iota phi(0,1) = (0,1) so the pair returns
    i = Interaction(("0", "1"), "0", ((("0", "1"), ("1", "0")), (("1", "0"), ("1", "0"))))
    assert not violations(i)


def test_identity_interaction_fails_evidence():
    i = identity_interaction(3)
    assert c_phi(i) == 2
    assert not evidence_passes(i)
    verdicts = irreducibility_evidence(i)
    assert all(not v.passed and v.witness is not None for v in verdicts)


def test_exclusion_passes_all_small_locales():
    verdicts = irreducibility_evidence(exclusion())
    assert [v.name for v in verdicts] and all(v.passed for v in verdicts)
    assert {v.n_configurations for v in verdicts} == {4, 8, 16}


def test_evidence_cap():
    with pytest.raises(CapExceeded):
        irreducibility_evidence(two_species_exclusion(), [("p4", path_locale(4))], cap=10)


def test_locales_are_the_expected_graphs():
    assert path_locale(3).n_edges == 4 and cycle_locale(4).n_edges == 8


def test_charges_by_size_for_exclusion():
    levels = charges_by_size(exclusion(), 3)
    assert [sorted(x[0] for x in lvl) for lvl in levels] == [[0], [0, 1], [0, 1, 2], [0, 1, 2, 3]]


def test_charges_by_size_two_species_count():
    assert len(charges_by_size(two_species_exclusion(), 8)[-1]) == 45


def test_json_round_trip_and_malformed():
    i = two_species_exclusion()
    assert Interaction.from_json(i.to_json()).table == i.table
    with pytest.raises(ValidationError):
        Interaction.from_json({"states": ["0", "1"], "base": "0", "phi": [{"in": ["0"], "out": ["1", "0"]}]})
    with pytest.raises(ValidationError):
        Interaction.from_json({"states": ["0", "1"], "base": "2", "phi": []})


def test_builtin_lookup():
    assert builtin("generalized_exclusion", 3).n_states == 4
    with pytest.raises(ValidationError):
        builtin("nope")


@st.composite
def valid_interactions(draw):
    """phi(p) = q together with phi(iota q) = iota p is always valid."""
    n = draw(st.integers(2, 4))
    states = tuple(str(k) for k in range(n))
    pairs = [(a, b) for a in states for b in states]
    table = {}
    for _ in range(draw(st.integers(0, 4))):
        p = draw(st.sampled_from(pairs))
        qq = draw(st.sampled_from(pairs))
        ip, iq = p[::-1], qq[::-1]
        if p == qq or len({p, iq}) < 2 or any(x in table for x in (p, iq)):
            continue
        table[p] = qq
        table[iq] = ip
    return Interaction(states, "0", tuple(sorted(table.items())))


@given(valid_interactions())
def test_generated_interactions_are_valid(i):
    assert violations(i) == []


@given(valid_interactions())
def test_conserved_basis_is_conserved_and_independent(i):
    basis = conserved_basis(i)
    for xi in basis:
        assert xi[i.base] == 0 and is_conserved(i, xi)
        for a, b in i.pairs():
            c, d = i.phi(a, b)
            assert xi[a] + xi[b] == xi[c] + xi[d]
    # every conserved indicator-combination lies in the span: dimension check against brute force
    n = len(i.states) - 1
    assert len(basis) <= n


@given(valid_interactions())
def test_simple_iff_one_quantity_with_unit_gcd(i):
    rep = simplicity(i)
    if rep.simple:
        assert rep.c_phi == 1 and rep.monoid in ("N", "Z")
        vals = [v for v in rep.integer_values if v != 0]
        if rep.monoid == "N":
            assume(vals)
            assert min(map(abs, vals)) == 1 and (all(v > 0 for v in vals) or all(v < 0 for v in vals))
        else:
            assert any(v > 0 for v in vals) and any(v < 0 for v in vals)
    else:
        assert rep.c_phi != 1 or rep.note


def test_is_conserved_rejects_nonconserved():
    assert not is_conserved(exclusion(), {"0": Fraction(1), "1": Fraction(0)})

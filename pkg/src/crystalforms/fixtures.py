"""Deterministic fixtures: seed graphs, random shift-invariant functions and round-trip forms."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .calculus import Differential, FormSum, InvariantFunction, canonical_support
from .configspace import ConfigSpace
from .crystal import LatticeEdge, LatticeVertex, PeriodicLattice
from .multigraph import MultiGraph
from .varadhan import AFunction


def random_rational(rng: random.Random, num: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def seed_graphs() -> Dict[str, MultiGraph]:
    """Five connected strictly symmetric seeds with known cycle rank."""
    return {
        "hexagonal_seed": MultiGraph.from_pairs(2, [(0, 1), (0, 1), (0, 1)]),
        "bouquet_2": MultiGraph.from_pairs(1, [(0, 0), (0, 0)]),
        "diamond_seed": MultiGraph.from_pairs(2, [(0, 1)] * 4),
        "complete_4": MultiGraph.from_pairs(4, [(a, b) for a in range(4) for b in range(a + 1, 4)]),
        "triangle_with_loop": MultiGraph.from_pairs(3, [(0, 1), (1, 2), (2, 0), (0, 0)]),
    }


def random_invariant_function(lattice: PeriodicLattice, states: Sequence[str], base: str, rng: random.Random,
                              pair_terms: bool = True) -> InvariantFunction:
    """Random g0 with singleton terms on every base vertex and pair terms on every edge orbit (radius <= 1)."""
    zero = (0,) * lattice.rank
    nonbase = [s for s in states if s != base]
    terms: Dict[Tuple, Dict[Tuple[str, ...], Fraction]] = {}
    for b in range(lattice.n_base):
        terms[(LatticeVertex(b, zero),)] = {(s,): random_rational(rng) for s in nonbase}
    if pair_terms:
        for e0 in range(lattice.seed.n_edges):
            le = LatticeEdge(e0, zero)
            o, t = lattice.origin(le), lattice.target(le)
            if o == t:
                continue
            sup, _ = canonical_support([o, t])
            if sup in terms:
                continue
            terms[sup] = {(a, c): random_rational(rng) for a in nonbase for c in nonbase}
    return InvariantFunction(lattice, base, terms)


def random_zetas(space: ConfigSpace, d: int, rng: random.Random) -> List[Dict[str, Fraction]]:
    out = []
    for _ in range(d):
        coeffs = [random_rational(rng) for _ in space.basis]
        out.append({s: sum((c * b[s] for c, b in zip(coeffs, space.basis)), Fraction(0)) for s in space.interaction.states})
    return out


def round_trip_form(space: ConfigSpace, g0: InvariantFunction, zetas: Sequence[Dict[str, Fraction]]) -> FormSum:
    """omega = d g0 + sum_j d A^j_{zeta_j}; its radius is radius(g0) + 1 (at least 1)."""
    parts = [(1, Differential(g0, space))]
    parts += [(1, Differential(AFunction(z, j, space.base), space)) for j, z in enumerate(zetas, start=1)]
    form = FormSum(parts)
    form.radius = max(g0.radius + 1, 1)
    return form

"""Pairings, cocycle splitting, the linear-growth functions A^j_xi and the
decomposition of shift-invariant closed uniform forms.

Pipeline of `decompose` for a closed shift-invariant R-uniform form omega on a
periodic lattice:

1. f := transport potential of omega (exact, lazily evaluated);
2. H(a, b) := f(eta1 + eta2) - f(eta1) - f(eta2) for charges a, b realized on
   two far-apart cell balls;
3. split H = h(a) + h(b) - h(a + b) and set g0 := f + h(xi_X), which is uniform;
4. zeta_j(s) := g0(s at x) - g0(s at x - e_j), g := g0 - sum_j A^j_{zeta_j};
5. expand g into orbit data and certify omega = dg + sum_j dA^j_{zeta_j}.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .calculus import (
    Form,
    InvariantFunction,
    TransportPotential,
    ZERO,
    alternating_violations,
    expand_invariant,
    potential,
    shift_invariance_violations,
)
from .configspace import CanonicalRepresentatives, Charge, ConfigSpace, Configuration, Transition, default_representatives
from .crystal import (
    FiniteWindow,
    LatticeEdge,
    LatticeVertex,
    PeriodicLattice,
    essentially_euclidean_equivalent,
    is_essentially_euclidean,
    l1,
    unit,
    vadd,
    vneg,
    vsub,
)
from .errors import CertificateError, InconclusiveError, SplittingError, ValidationError
from .interaction import evidence_passes, is_conserved, simplicity
from .linalg import format_q, integer_content, q, rank, solve

# --- A-functions -------------------------------------------------------------------


class AFunction:
    """A^j_xi(eta) = sum over occupied x of n_j(cell of x) * xi(eta_x); j is 1-based."""

    def __init__(self, xi: Mapping[str, Fraction], j: int, base: str):
        if j < 1:
            raise ValidationError("direction index j starts at 1")
        self.xi = {s: q(v) for s, v in xi.items()}
        self.j = j
        self.base = base

    def __call__(self, eta: Configuration) -> Fraction:
        j = self.j - 1
        return sum((v.cell[j] * self.xi[s] for v, s in eta.items()), ZERO)

    def nabla(self, space: ConfigSpace, eta: Configuration, e) -> Fraction:
        after = space.apply_edge(eta, e)
        if after == eta:
            return ZERO
        j = self.j - 1
        total = ZERO
        for x in {space.ambient.origin(e), space.ambient.target(e)}:
            total += x.cell[j] * (self.xi[after.get(x, self.base)] - self.xi[eta.get(x, self.base)])
        return total


def a_function(xi: Mapping[str, Fraction], j: int, base: str) -> AFunction:
    return AFunction(xi, j, base)


def xi_total(xi: Mapping[str, Fraction], eta: Configuration) -> Fraction:
    return sum((q(xi[s]) for _, s in eta.items()), ZERO)


def shift_back(eta: Configuration, k: int, d: int) -> Configuration:
    """The argument of sigma_k: (sigma_k f)(eta) = f(eta translated by -e_k)."""
    return eta.shifted(unit(d, k - 1, -1))


def a_identity_check(a: AFunction, k: int, configs: Iterable[Configuration], d: int) -> bool:
    """((1 - sigma_k) A^j_xi)(eta) == delta_jk xi_X(eta) on every given configuration."""
    for eta in configs:
        lhs = a(eta) - a(shift_back(eta, k, d))
        rhs = xi_total(a.xi, eta) if a.j == k else ZERO
        if lhs != rhs:
            return False
    return True


def dim_dV_check(lattice: PeriodicLattice, space: ConfigSpace, window: FiniteWindow, max_particles: int = 2) -> int:
    """Rank of the evaluation matrix of {dA^j_{xi_b}} on window transitions."""
    from .configspace import ConfigSpace as _CS

    wspace = _CS(window, space.interaction, space.basis)
    funcs = [AFunction(b, j, space.base) for j in range(1, lattice.rank + 1) for b in space.basis]
    rows = []
    for eta in wspace.enumerate(window.vertices, max_support=max_particles):
        for tr, _ in wspace.moves(eta):
            rows.append([fn.nabla(wspace, eta, tr.edge) for fn in funcs])
    r = rank(rows) if rows else 0
    target = len(funcs)
    if r < target:
        steps = {lattice.translations[le.seed_edge] for le in window.edges if any(lattice.translations[le.seed_edge])}
        if any(all(s[i] == 0 for s in steps) for i in range(lattice.rank)):
            raise InconclusiveError("the window has no internal edge crossing some lattice direction")
    return r


# --- pairings ----------------------------------------------------------------------


def separation_graph(lattice: PeriodicLattice, a: Iterable[LatticeVertex], b: Iterable[LatticeVertex], limit: int) -> int:
    """Graph distance between two vertex sets, or limit + 1 if larger than limit."""
    bset = set(b)
    frontier = set(a)
    if frontier & bset:
        return 0
    seen = set(frontier)
    for dist in range(1, limit + 1):
        nxt = set()
        for x in frontier:
            for y in lattice.neighbors(x):
                if y not in seen:
                    if y in bset:
                        return dist
                    seen.add(y)
                    nxt.add(y)
        frontier = nxt
    return limit + 1


def pairing_local(f: Callable, lattice: PeriodicLattice, lam1: Iterable, lam2: Iterable, eta: Configuration, R: int) -> Fraction:
    """iota^{L1 u L2} f(eta) - iota^{L1} f(eta) - iota^{L2} f(eta), requiring d(L1, L2) > R."""
    lam1, lam2 = list(lam1), list(lam2)
    if separation_graph(lattice, lam1, lam2, R) <= R:
        raise ValidationError(f"the two regions are within graph distance {R}")
    both = eta.restrict(lam1 + lam2)
    return q(f(both)) - q(f(eta.restrict(lam1))) - q(f(eta.restrict(lam2)))


def cell_ball(lattice: PeriodicLattice, center: Sequence[int], radius: int) -> List[LatticeVertex]:
    """All vertices whose cell lies within l1 distance `radius` of center (a block ball for l1 block metric)."""
    d = lattice.rank
    cells = [c for c in itertools.product(*[range(x - radius, x + radius + 1) for x in center]) if l1(vsub(c, tuple(center))) <= radius]
    return sorted((LatticeVertex(b, c) for c in cells for b in range(lattice.n_base)),
                  key=lambda v: (l1(vsub(v.cell, tuple(center))), v.base, v.cell))


@dataclass
class PairingRecord:
    alpha: Charge
    beta: Charge
    value: Fraction
    centers: Tuple[Tuple[int, ...], Tuple[int, ...]]
    radii: Tuple[int, int]

    def to_json(self):
        return {
            "alpha": [format_q(x) for x in self.alpha],
            "beta": [format_q(x) for x in self.beta],
            "value": format_q(self.value),
            "ball_centers": [list(self.centers[0]), list(self.centers[1])],
            "ball_radii": list(self.radii),
        }


class Pairing:
    """h_f(alpha, beta) from cell balls separated by more than `separation` in l1 cell distance.

    With an l1 block metric (essentially Euclidean lattices, or the equivalent
    lattice otherwise) block balls are l1 cell balls.  A window, when given,
    must contain every ball used.
    """

    def __init__(self, f: Callable, space: ConfigSpace, separation: int,
                 reps: Optional[CanonicalRepresentatives] = None, window: Optional[FiniteWindow] = None):
        self.f = f
        self.space = space
        self.lattice: PeriodicLattice = space.ambient
        self.separation = int(separation)
        self.reps = default_representatives(space) if reps is None else reps
        self.window = window
        self.records: Dict[Tuple[Charge, Charge], PairingRecord] = {}

    def min_sites(self, alpha: Charge) -> int:
        return self.reps.min_sites(alpha)

    def canonical_centers(self, k: int):
        d = self.lattice.rank
        c = 2 * self.separation + 2 * k + 2
        return unit(d, 0, -c), unit(d, 0, c)

    def realize(self, alpha: Charge, ball: Sequence[LatticeVertex]) -> Configuration:
        return self.reps.lex_least(alpha, ball)

    def evaluate(self, alpha: Charge, beta: Charge, centers=None, radii=None) -> PairingRecord:
        alpha, beta = tuple(alpha), tuple(beta)
        k = max(self.min_sites(alpha), self.min_sites(beta))
        if centers is None:
            centers = self.canonical_centers(k)
        if radii is None:
            radii = (k, k)
        d1 = cell_ball(self.lattice, centers[0], radii[0])
        d2 = cell_ball(self.lattice, centers[1], radii[1])
        gap = l1(vsub(tuple(centers[0]), tuple(centers[1]))) - radii[0] - radii[1]
        if gap <= self.separation:
            raise ValidationError(f"balls are {gap} apart in block distance, need more than {self.separation}")
        if self.window is not None and any(v not in self.window for v in d1 + d2):
            raise InconclusiveError("the window is too small to hold separated balls for this pairing")
        eta1 = self.realize(alpha, d1)
        eta2 = self.realize(beta, d2)
        val = q(self.f(eta1.union(eta2))) - q(self.f(eta1)) - q(self.f(eta2))
        return PairingRecord(alpha, beta, val, (tuple(centers[0]), tuple(centers[1])), tuple(radii))

    def __call__(self, alpha: Charge, beta: Charge) -> Fraction:
        key = (tuple(alpha), tuple(beta))
        if key not in self.records:
            self.records[key] = self.evaluate(*key)
        return self.records[key].value

    def alternate_placements(self, alpha: Charge, beta: Charge) -> List[Tuple[tuple, tuple]]:
        """Further admissible (centers, radii) choices.  In dimension 1 the first ball stays on the left."""
        k = max(self.min_sites(alpha), self.min_sites(beta))
        d = self.lattice.rank
        c = 2 * self.separation + 2 * k + 2
        e1 = lambda s: unit(d, 0, s)
        out = [
            ((e1(-c - 3), e1(c + 1)), (k, k)),
            ((e1(-c), e1(c + 2)), (k + 1, k + 2)),
            ((vadd(e1(-c), e1(5)), vadd(e1(c), e1(5))), (k, k)),
        ]
        if d > 1:
            e2 = unit(d, 1, c)
            out.append(((vneg(e2), e2), (k, k)))
            out.append(((e1(-c), vadd(e1(-c), unit(d, 1, 2 * c))), (k, k)))
        return out

    def well_defined(self, alpha: Charge, beta: Charge) -> Tuple[bool, List[PairingRecord]]:
        recs = [self.evaluate(alpha, beta)]
        for centers, radii in self.alternate_placements(alpha, beta):
            recs.append(self.evaluate(alpha, beta, centers, radii))
        return all(r.value == recs[0].value for r in recs), recs


def cocycle_residual(H: Callable, a: Charge, b: Charge, c: Charge) -> Fraction:
    ab = tuple(x + y for x, y in zip(a, b))
    bc = tuple(x + y for x, y in zip(b, c))
    return H(a, b) + H(ab, c) - H(b, c) - H(a, bc)


# --- splitting -----------------------------------------------------------------------


@dataclass
class SplittingFunction:
    values: Dict[Charge, Fraction]
    kind: str

    def __call__(self, alpha: Charge) -> Fraction:
        alpha = tuple(alpha)
        if alpha not in self.values:
            raise InconclusiveError(f"splitting function not tabulated at {alpha}")
        return self.values[alpha]

    def to_json(self):
        return {
            "kind": self.kind,
            "values": [{"charge": [format_q(x) for x in k], "value": format_q(v)} for k, v in sorted(self.values.items())],
        }


class MonoidSplitting:
    """Lazy splitting for a charge monoid isomorphic to N or Z with generator `unit`.

    h(0) = H(0,0), h(1) = 0, h(n+1) = h(n) + h(1) - H(n, 1) and, for Z,
    h(n-1) = H(n-1, 1) - h(1) + h(n).
    """

    def __init__(self, H: Callable, unit_charge: Charge, kind: str):
        if kind not in ("N", "Z"):
            raise ValidationError("monoid kind must be 'N' or 'Z'")
        self.H = H
        self.unit = tuple(unit_charge)
        self.kind = kind
        zero = tuple(Fraction(0) for _ in self.unit)
        self.vals: Dict[int, Fraction] = {0: q(H(zero, zero)), 1: ZERO}

    def charge(self, n: int) -> Charge:
        return tuple(n * u for u in self.unit)

    def index(self, alpha: Charge) -> int:
        alpha = tuple(alpha)
        i = next(k for k, u in enumerate(self.unit) if u != 0)
        n = alpha[i] / self.unit[i]
        if n.denominator != 1 or self.charge(int(n)) != alpha:
            raise ValidationError(f"charge {alpha} is not a multiple of the generator {self.unit}")
        n = int(n)
        if n < 0 and self.kind == "N":
            raise ValidationError(f"charge {alpha} lies outside the monoid N")
        return n

    def at(self, n: int) -> Fraction:
        if n in self.vals:
            return self.vals[n]
        if n > 0:
            top = max(k for k in self.vals if k >= 0)
            for m in range(top, n):
                self.vals[m + 1] = self.vals[m] + self.vals[1] - q(self.H(self.charge(m), self.charge(1)))
        else:
            low = min(self.vals)
            for m in range(low, n, -1):
                self.vals[m - 1] = q(self.H(self.charge(m - 1), self.charge(1))) - self.vals[1] + self.vals[m]
        return self.vals[n]

    def __call__(self, alpha: Charge) -> Fraction:
        return self.at(self.index(alpha))

    def table(self) -> SplittingFunction:
        return SplittingFunction({self.charge(n): v for n, v in self.vals.items()}, self.kind)


def split_cocycle(H: Mapping[Tuple[Charge, Charge], Fraction], monoid_kind: str = "symmetric",
                  unit_charge: Optional[Charge] = None) -> SplittingFunction:
    """Split a tabulated cocycle.

    For monoid_kind 'N'/'Z' the table must contain H(n u, u) for the range of
    n needed.  For 'symmetric' the table's charge range R (every charge
    appearing) is the unknown set and the system h(a) + h(b) - h(a + b) = H(a, b)
    is solved for all tabulated (a, b) with a + b in R; free unknowns are set to 0.
    """
    H = {(tuple(a), tuple(b)): q(v) for (a, b), v in H.items()}
    if monoid_kind in ("N", "Z"):
        if unit_charge is None:
            raise ValidationError("a generator charge is required for the N/Z splitting")
        sp = MonoidSplitting(lambda a, b: H[(tuple(a), tuple(b))], unit_charge, monoid_kind)
        ns = set()
        for a, b in H:
            ns.add(sp.index(a))
            ns.add(sp.index(b))
            ns.add(sp.index(tuple(x + y for x, y in zip(a, b))))
        for n in sorted(ns, key=abs):
            try:
                sp.at(n)
            except KeyError as exc:
                raise SplittingError(f"table lacks the entry needed for h at n = {n}", witness=n) from exc
        table = sp.table()
        for (a, b), v in H.items():
            ab = tuple(x + y for x, y in zip(a, b))
            if ab in table.values and table.values[a] + table.values[b] - table.values[ab] != v:
                raise SplittingError(f"cocycle identity fails: no splitting reproduces H{a, b}", witness=(a, b))
        return table
    if monoid_kind != "symmetric":
        raise ValidationError(f"unknown monoid kind {monoid_kind!r}")
    for (a, b), v in sorted(H.items()):
        if (b, a) in H and H[(b, a)] != v:
            raise SplittingError(f"H is not symmetric: H{a, b} = {v} but H{b, a} = {H[(b, a)]}", witness=(a, b))
    charges = sorted({a for a, _ in H} | {b for _, b in H})
    cset = set(charges)
    for a, b, c in itertools.product(charges, repeat=3):
        ab = tuple(x + y for x, y in zip(a, b))
        bc = tuple(x + y for x, y in zip(b, c))
        keys = [(a, b), (ab, c), (b, c), (a, bc)]
        if all(k in H for k in keys):
            r = H[(a, b)] + H[(ab, c)] - H[(b, c)] - H[(a, bc)]
            if r != 0:
                raise SplittingError(f"cocycle identity fails at {a, b, c} with residual {r}", witness=(a, b, c))
    idx = {c: i for i, c in enumerate(charges)}
    rows, rhs = [], []
    zero = tuple(Fraction(0) for _ in charges[0]) if charges else ()
    for (a, b), v in sorted(H.items()):
        ab = tuple(x + y for x, y in zip(a, b))
        if ab not in cset:
            continue
        row = [Fraction(0)] * len(charges)
        row[idx[a]] += 1
        row[idx[b]] += 1
        row[idx[ab]] -= 1
        rows.append(row)
        rhs.append(v)
    if zero in idx:
        row = [Fraction(0)] * len(charges)
        row[idx[zero]] = Fraction(1)
        rows.append(row)
        rhs.append(H.get((zero, zero), Fraction(0)))
    sol = solve(rows, rhs) if rows else [Fraction(0)] * len(charges)
    if sol is None:
        raise SplittingError("the splitting system is inconsistent on the tabulated range")
    return SplittingFunction({c: sol[idx[c]] for c in charges}, "symmetric")


def coboundary(h: Callable[[Charge], Fraction]) -> Callable[[Charge, Charge], Fraction]:
    def H(a, b):
        return h(a) + h(b) - h(tuple(x + y for x, y in zip(a, b)))

    return H


# --- uniformity --------------------------------------------------------------------


def correct_to_uniform(f: Callable, space: ConfigSpace, h: Callable[[Charge], Fraction]) -> Callable[[Configuration], Fraction]:
    """g = f + h o xi_X."""
    memo: Dict[Configuration, Fraction] = {}

    def g(eta: Configuration) -> Fraction:
        if eta not in memo:
            memo[eta] = q(f(eta)) + q(h(space.charge(eta)))
        return memo[eta]

    return g


@dataclass
class UniformityWitness:
    support: Tuple
    site: LatticeVertex
    config: Configuration
    lhs: Fraction
    rhs: Fraction


def uniformity_check(f: Callable, lattice: PeriodicLattice, space: ConfigSpace, window: FiniteWindow, R: int,
                     max_size: int = 2, samples: int = 0, seed: int = 0) -> Optional[UniformityWitness]:
    """Check  i^L f - i^{L - B(x,0)} f = i^{L n B(x,R)} f - i^{L n B*(x,R)} f  on the window.

    L ranges over subsets (size <= max_size, plus `samples` random larger
    ones) of window cells at block distance >= 2R from the boundary; each side is
    compared on every configuration on L.  Returns None on success.
    """
    cells = window.interior_cells(2 * R)
    if not cells:
        raise InconclusiveError(f"window has no cells with block margin {2 * R}")
    verts = sorted(v for v in window.vertices if v.cell in set(cells))
    subsets = [s for k in range(1, max_size + 1) for s in itertools.combinations(verts, k)]
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.randint(max_size + 1, max(max_size + 1, min(len(verts), max_size + 3)))
        subsets.append(tuple(sorted(rng.sample(verts, min(k, len(verts))))))
    for lam in subsets:
        for x in lam:
            cx = x.cell
            near = [v for v in lam if lattice.block_cell_distance(cx, v.cell) <= R]
            near_star = [v for v in near if v.cell != cx]
            minus_x = [v for v in lam if v.cell != cx]
            for sts in itertools.product(space.interaction.states, repeat=len(lam)):
                eta = Configuration.from_mapping(dict(zip(lam, sts)), space.base)
                lhs = q(f(eta)) - q(f(eta.restrict(minus_x)))
                rhs = q(f(eta.restrict(near))) - q(f(eta.restrict(near_star)))
                if lhs != rhs:
                    return UniformityWitness(lam, x, eta, lhs, rhs)
    return None


# --- decomposition ---------------------------------------------------------------------


@dataclass
class DecompositionOptions:
    expansion_radius: Optional[int] = None  # graph-metric diameter bound for g's terms; default R - 1
    max_expansion_radius: Optional[int] = None
    max_term_size: Optional[int] = None
    closedness_particles: int = 2
    certificate_particles: int = 2
    certificate_random: int = 20
    certificate_random_particles: int = 4
    invariance_particles: int = 2
    check_irreducibility: bool = True
    seed: int = 0
    cap: int = 10**6


@dataclass
class DecompositionResult:
    g: InvariantFunction
    zetas: List[Dict[str, Fraction]]
    zeta_coordinates: List[List[Fraction]]
    certificate: Dict
    provenance: Dict = field(default_factory=dict)

    def form(self, space: ConfigSpace) -> Form:
        from .calculus import Differential, FormSum

        parts = [(1, Differential(self.g, space))]
        for j, z in enumerate(self.zetas, start=1):
            parts.append((1, Differential(AFunction(z, j, space.base), space)))
        return FormSum(parts)

    def to_json(self):
        return {
            "g": self.g.to_json(),
            "zetas": [{s: format_q(v) for s, v in z.items()} for z in self.zetas],
            "zeta_coordinates": [[format_q(x) for x in c] for c in self.zeta_coordinates],
            "certificate": self.certificate,
            "provenance": self.provenance,
        }


def random_configuration(rng: random.Random, vertices: Sequence, states: Sequence[str], base: str, max_particles: int) -> Configuration:
    nonbase = [s for s in states if s != base]
    n = rng.randint(0, min(max_particles, len(vertices)))
    sites = rng.sample(list(vertices), n)
    return Configuration({v: rng.choice(nonbase) for v in sites})


def _coordinates(basis: Sequence[Mapping[str, Fraction]], xi: Mapping[str, Fraction], states) -> Optional[List[Fraction]]:
    if not basis:
        return [] if all(xi[s] == 0 for s in states) else None
    cols = [[b[s] for b in basis] for s in states]
    return solve(cols, [xi[s] for s in states])


def decompose(omega: Form, space: ConfigSpace, window: FiniteWindow, options: Optional[DecompositionOptions] = None) -> DecompositionResult:
    opts = options or DecompositionOptions()
    lat = space.ambient
    if not isinstance(lat, PeriodicLattice):
        raise ValidationError("decompose needs a configuration space over a periodic lattice")
    if window.lattice is not lat:
        raise ValidationError("window belongs to a different lattice")
    inter, base, d = space.interaction, space.base, lat.rank
    if omega.radius is None:
        raise ValidationError("the form must declare its uniformity radius R")
    R = max(int(omega.radius), 1)
    prov: Dict = {"window": {"lo": list(window.lo), "hi": list(window.hi)}, "form_radius": R}

    # preconditions
    if opts.check_irreducibility and not evidence_passes(inter):
        raise ValidationError("the interaction fails irreducibility evidence on small paths and cycles")
    simp = simplicity(inter)
    if d == 1 and not simp.simple:
        raise ValidationError(f"a one-dimensional lattice needs a simple interaction ({simp.note})")
    wspace = ConfigSpace(window, inter, space.basis)
    inner = window.interior_cells(1) or window.cells
    inner_v = [v for v in window.vertices if v.cell in set(inner)]
    probe = list(wspace.enumerate(inner_v, max_support=opts.invariance_particles, cap=opts.cap))
    shifts = [unit(d, i, s) for i in range(d) for s in (1, -1)]
    bad = shift_invariance_violations(omega, space, probe, shifts)
    if bad:
        tr, s = bad[0]
        raise ValidationError(f"omega is not shift invariant: value changes under shift {s} at {tr}")
    bad_alt = alternating_violations(omega, space, [tr for eta in probe for tr, _ in space.moves(eta)])
    if bad_alt:
        raise ValidationError(f"omega violates the alternating condition at {bad_alt[0]}")
    seeds = list(wspace.enumerate(window.vertices, max_support=opts.closedness_particles, cap=opts.cap))
    potential(omega, wspace, seeds, cap=opts.cap)  # raises ClosednessError with a cycle
    prov["closedness_checked"] = {"configurations_up_to_particles": opts.closedness_particles}

    # geometry for the pairing
    ee = is_essentially_euclidean(lat)
    if ee.essentially_euclidean:
        sep = R
        prov["block_geometry"] = {"essentially_euclidean": True, "separation": sep}
    else:
        eq = essentially_euclidean_equivalent(lat)
        sep = eq.C_prime * (eq.C + R)
        prov["block_geometry"] = {"essentially_euclidean": False, "C": eq.C, "C_prime": eq.C_prime, "separation": sep}
    reps = default_representatives(space)
    f = TransportPotential(omega, space, reps)
    H = Pairing(f, space, sep, reps)

    # splitting
    if len(space.basis) == 1 and simp.simple:
        ints, scale = integer_content([space.basis[0][s] for s in inter.states])
        split = MonoidSplitting(H, (scale,), simp.monoid)
        h = split
        kind = simp.monoid
    else:
        split = None
        kind = "symmetric"
        h = None
    radius = opts.expansion_radius if opts.expansion_radius is not None else max(R - 1, 0)
    max_radius = opts.max_expansion_radius if opts.max_expansion_radius is not None else R
    prov["anchor"] = LatticeVertex(0, (0,) * d).to_json()
    prov["fundamental_domain"] = [v.to_json() for v in lat.fundamental_domain]
    prov["generators"] = list(lat.generators)

    last_witness = None
    attempts = []
    while radius <= max_radius:
        from .calculus import candidate_supports

        sups = candidate_supports(lat, radius, "graph", opts.max_term_size)
        m = max((len(s) for s in sups), default=1)
        if kind == "symmetric":
            table = {}
            rng_levels = reps.level(m)
            charges = sorted(rng_levels)
            cset = set(charges)
            for a in charges:
                for b in charges:
                    if tuple(x + y for x, y in zip(a, b)) in cset and (b, a) not in table:
                        table[(a, b)] = H(a, b)
                        table[(b, a)] = H(b, a) if d == 1 else table[(a, b)]
            if d > 1:
                for (a, b) in list(table):
                    if H(a, b) != H(b, a):
                        raise SplittingError(f"pairing is not symmetric at {a, b}", witness=(a, b))
            split = split_cocycle(table, "symmetric")
            h = split
        g0 = correct_to_uniform(f, space, h)
        zero = (0,) * d
        x0 = LatticeVertex(0, zero)
        zetas = []
        for j in range(1, d + 1):
            xm = LatticeVertex(0, unit(d, j - 1, -1))
            zj = {base: ZERO}
            for s in inter.states:
                if s != base:
                    zj[s] = g0(Configuration({x0: s})) - g0(Configuration({xm: s}))
            if not is_conserved(inter, zj):
                raise CertificateError(f"(1 - sigma_{j}) g0 is not a conserved quantity: {zj}", witness=zj)
            zetas.append(zj)
        afuncs = [AFunction(z, j, base) for j, z in enumerate(zetas, start=1)]

        def g(eta, g0=g0, afuncs=afuncs):
            return g0(eta) - sum((a(eta) for a in afuncs), ZERO)

        rng = random.Random(opts.seed)
        near = lat.cells_to_vertices(lat.block_ball_cells(zero, 2))
        for _ in range(10):
            eta = random_configuration(rng, near, inter.states, base, min(3, m))
            for k in range(1, d + 1):
                if g(eta) != g(shift_back(eta, k, d)):
                    raise CertificateError(f"g is not shift invariant along direction {k} at {eta}", witness=eta)
        ginv = expand_invariant(g, lat, inter.states, base, radius, "graph", cap=opts.cap, max_size=opts.max_term_size)
        cert = certificate(omega, ginv, zetas, space, window, opts)
        attempts.append({"expansion_radius": radius, "residual_transitions": cert["nonzero_residuals"]})
        if cert["nonzero_residuals"] == 0:
            coords = [_coordinates(space.basis, z, inter.states) for z in zetas]
            prov["expansion"] = {"metric": "graph", "radius": radius, "attempts": attempts}
            prov["splitting"] = (split.table() if isinstance(split, MonoidSplitting) else split).to_json()
            prov["pairings"] = [r.to_json() for r in H.records.values()]
            prov["representatives"] = [
                {"charge": [format_q(x) for x in a], "configuration": c.to_json()} for a, c in sorted(reps._cache.items())
            ]
            prov["potential_evaluations"] = f.evaluations
            return DecompositionResult(ginv, zetas, coords, cert, prov)
        last_witness = cert["witness"]
        radius += 1
    raise CertificateError(f"nonzero certificate residual up to expansion radius {max_radius}", witness=last_witness)


def certificate_transitions(space: ConfigSpace, window: FiniteWindow, opts: DecompositionOptions) -> Iterable[Transition]:
    inter = space.interaction
    inner = set(window.interior_cells(1) or window.cells)
    verts = [v for v in window.vertices if v.cell in inner]
    wspace = ConfigSpace(window, inter, space.basis)
    configs = list(wspace.enumerate(verts, max_support=opts.certificate_particles, cap=opts.cap))
    rng = random.Random(opts.seed + 1)
    for _ in range(opts.certificate_random):
        configs.append(random_configuration(rng, verts, inter.states, space.base, opts.certificate_random_particles))
    for eta in configs:
        for e in space.candidate_edges(eta):
            if space.ambient.origin(e) in window and space.ambient.target(e) in window:
                yield Transition(eta, e)


def certificate(omega: Form, g: InvariantFunction, zetas, space: ConfigSpace, window: FiniteWindow,
                opts: DecompositionOptions) -> Dict:
    afuncs = [AFunction(z, j, space.base) for j, z in enumerate(zetas, start=1)]
    checked = 0
    bad = 0
    witness = None
    for tr in certificate_transitions(space, window, opts):
        lhs = omega.value(tr.config, tr.edge)
        rhs = g.nabla(space, tr.config, tr.edge) + sum((a.nabla(space, tr.config, tr.edge) for a in afuncs), ZERO)
        checked += 1
        if lhs != rhs:
            bad += 1
            if witness is None:
                witness = {"configuration": tr.config.to_json(), "edge": [tr.edge.seed_edge, list(tr.edge.cell)],
                           "omega": format_q(lhs), "reconstruction": format_q(rhs)}
    return {
        "transitions_checked": checked,
        "nonzero_residuals": bad,
        "max_abs_residual": "0/1" if bad == 0 else None,
        "family": {
            "all_configurations_up_to_particles": opts.certificate_particles,
            "random_configurations": opts.certificate_random,
            "random_max_particles": opts.certificate_random_particles,
            "seed": opts.seed,
            "sites": "window cells at block distance >= 1 from the boundary",
        },
        "witness": witness,
        "exactness": "exact on the listed family",
    }

"""Property suites behind `verify` and the acceptance tests.

Each suite is deterministic (fixed seeds), exact, and returns a SuiteResult
whose detail line names what was checked.  Where a quantity has an
independent route (rank vs. component count, evidence vs. union-find) both
routes are computed and compared.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .calculus import TransportPotential, expand, reconstruct
from .configspace import Configuration, ConfigSpace, default_representatives
from .crystal import is_essentially_euclidean, maximal_abelian_cover, parse_builtin
from .fixtures import random_invariant_function, random_rational, random_zetas, round_trip_form, seed_graphs
from .interaction import (charges_by_size, conserved_basis, exclusion, generalized_exclusion, identity_interaction,
                          irreducibility_evidence, default_locales, two_species_exclusion)
from .linalg import sparse_rank
from .varadhan import (AFunction, MonoidSplitting, Pairing, a_identity_check, cocycle_residual, coboundary,
                       decompose, dim_dV_check, random_configuration, split_cocycle)

SCALES = ("small", "full")


@dataclass
class SuiteResult:
    number: int
    name: str
    passed: bool
    detail: str
    data: Dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"

    def to_json(self):
        return {"suite": self.number, "name": self.name, "verdict": "PASS" if self.passed else "FAIL",
                "detail": self.detail, "exactness": "exact (rational arithmetic, tolerance 0)", "data": self.data}


# --- 1 -----------------------------------------------------------------------


def suite_ee_classification(scale: str = "small") -> SuiteResult:
    golden = [("hexagonal", parse_builtin("hexagonal"), True), ("triangular", parse_builtin("triangular"), False)]
    golden += [(f"euclidean({d})", parse_builtin(f"euclidean({d})"), True) for d in (1, 2, 3)]
    golden.append(("euclidean_nearest_n(2,2)", parse_builtin("euclidean_nearest_n(2,2)"), False))
    got = {}
    ok = True
    for name, lat, want in golden:
        rep = is_essentially_euclidean(lat)
        got[name] = rep.essentially_euclidean
        # independent route: brute-force block distance against l1 on a small cell box
        brute = all(lat.block_cell_distance((0,) * lat.rank, c) == sum(abs(x) for x in c)
                    for c in itertools.product(range(-2, 3), repeat=lat.rank))
        ok &= rep.essentially_euclidean == want and brute == want
    return SuiteResult(1, "essentially Euclidean classification", ok,
                       ", ".join(f"{k}={'true' if v else 'false'}" for k, v in got.items()), got)


# --- 2 -----------------------------------------------------------------------


def suite_abelian_cover(scale: str = "small") -> SuiteResult:
    ranks = {}
    ok = True
    for name, g in seed_graphs().items():
        lat = maximal_abelian_cover(g)
        formula = 1 - g.n_vertices + g.n_edges // 2
        ranks[name] = lat.rank
        ok &= lat.rank == formula and lat.n_base == g.n_vertices
    ok &= ranks["hexagonal_seed"] == 2
    return SuiteResult(2, "abelian cover rank", ok, ", ".join(f"{k}={v}" for k, v in ranks.items()), ranks)


# --- 3 -----------------------------------------------------------------------


def _union_find_components(n: int, pairs) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(x) for x in range(n)})


def kernel_check(interaction, window) -> Dict:
    """Kernel of d on all of S^window by exact elimination, compared with charge classes and components."""
    space = ConfigSpace(window, interaction)
    configs = list(space.enumerate(window.vertices))
    idx = {c: i for i, c in enumerate(configs)}
    charge = [space.charge(c) for c in configs]
    rows, pairs = [], []
    crossing = 0
    for c in configs:
        for tr, y in space.moves(c):
            a, b = idx[c], idx[y]
            if a < b:
                rows.append({a: 1, b: -1})
                pairs.append((a, b))
                crossing += charge[a] != charge[b]
    kernel_dim = len(configs) - sparse_rank(rows)
    charges = set(charge)
    levels = charges_by_size(interaction, len(window.vertices))
    n_components = _union_find_components(len(configs), pairs)
    return {"sites": len(window.vertices), "configurations": len(configs), "kernel_dim": kernel_dim,
            "charge_classes": len(charges), "M_size": len(levels[-1]), "components": n_components,
            "indicators_closed": crossing == 0}


def suite_kernel(scale: str = "small") -> SuiteResult:
    e1, e2, hexa = parse_builtin("euclidean(1)"), parse_builtin("euclidean(2)"), parse_builtin("hexagonal")
    windows = [("euclidean(1) 8 cells", e1.box_window([8])), ("euclidean(2) 2x4", e2.box_window([2, 4])),
               ("hexagonal 2x2", hexa.box_window([2, 2]))]
    inters = [("exclusion", exclusion(), 9), ("2-species", two_species_exclusion(), 45)]
    ok = True
    data = {}
    for iname, inter, want in inters:
        for wname, w in windows:
            r = kernel_check(inter, w)
            data[f"{iname} on {wname}"] = r
            ok &= (r["kernel_dim"] == r["charge_classes"] == r["M_size"] == r["components"] == want
                   and r["indicators_closed"])
    dims = sorted({(k.split(" on ")[0], v["kernel_dim"]) for k, v in data.items()})
    return SuiteResult(3, "kernel of d equals functions of the charge", ok,
                       ", ".join(f"{a} dim={b}" for a, b in dims) + f" on {len(windows)} windows of 8 sites", data)


# --- 4 -----------------------------------------------------------------------


def suite_expansion(scale: str = "small") -> SuiteResult:
    rng = random.Random(4)
    n_cases = 100
    state_sets = [("0", "1"), ("0", "A", "B"), ("0", "1", "2")]
    bad = 0
    for _ in range(n_cases):
        states = rng.choice(state_sets)
        n = rng.randint(1, 4)
        verts = rng.sample(range(10), n)
        table = {}
        for combo in itertools.product(states, repeat=n):
            table[Configuration.from_mapping(dict(zip(verts, combo)), "0")] = random_rational(rng)

        def f(eta, table=table, verts=verts):
            return table[eta.restrict(verts)]

        terms = expand(f, verts, states, "0")
        g = reconstruct(terms)
        if any(g(c) != v for c, v in table.items()):
            bad += 1
            continue
        if expand(g, verts, states, "0") != terms:
            bad += 1
    return SuiteResult(4, "expansion reconstruction and uniqueness", bad == 0,
                       f"{n_cases} random functions on <= 4 sites, {bad} failures", {"cases": n_cases, "failures": bad})


# --- 5 -----------------------------------------------------------------------


def suite_pairing(scale: str = "small") -> SuiteResult:
    inter = exclusion()
    data = {}
    ok = True
    for name in ("euclidean(2)", "hexagonal"):
        lat = parse_builtin(name)
        space = ConfigSpace(lat, inter)
        rng = random.Random(5)
        omega = round_trip_form(space, random_invariant_function(lat, inter.states, "0", rng),
                                random_zetas(space, lat.rank, rng))
        pot = TransportPotential(omega, space, default_representatives(space))

        def f(eta, pot=pot, space=space):
            n = space.charge(eta)[0]
            return pot(eta) + n ** 3 / 6

        H = Pairing(f, space, omega.radius)
        charges = [(Fraction(n),) for n in range(4)]
        placements = 0
        agree = True
        for a, b in itertools.product(charges, repeat=2):
            good, recs = H.well_defined(a, b)
            placements = max(placements, len(recs))
            agree &= good
        sym = all(H(a, b) == H(b, a) for a, b in itertools.product(charges, repeat=2))
        resid = [cocycle_residual(H, a, b, c) for a, b, c in itertools.product(charges, repeat=3)]
        cocycle = all(r == 0 for r in resid)
        data[name] = {"placements_per_pair": placements, "agree": agree, "symmetric": sym,
                      "cocycle_triples": len(resid), "cocycle_zero": cocycle}
        ok &= agree and sym and cocycle and placements >= 3
    return SuiteResult(5, "pairing independence, symmetry and cocycle", ok,
                       "; ".join(f"{k}: {v['placements_per_pair']} placements agree={v['agree']} symmetric={v['symmetric']} "
                                 f"cocycle residual 0 on {v['cocycle_triples']} triples={v['cocycle_zero']}"
                                 for k, v in data.items()), data)


# --- 6 -----------------------------------------------------------------------


def suite_splitting(scale: str = "small") -> SuiteResult:
    sp = MonoidSplitting(lambda a, b: a[0] * b[0], (1,), "N")
    nat_ok = all(sp.at(n) == Fraction(-n * (n - 1), 2) for n in range(21))
    nat_ok &= all(sp.at(m) + sp.at(n) - sp.at(m + n) == m * n for m in range(11) for n in range(11))
    rng = random.Random(6)
    trials = 10
    resid_total = 0
    charges = [(a, b) for a in range(5) for b in range(5) if a + b <= 4]
    cset = set(charges)
    for _ in range(trials):
        h0 = {c: random_rational(rng) for c in charges}
        B = [[random_rational(rng) for _ in range(2)] for _ in range(2)]
        B[1][0] = B[0][1]
        bil = lambda x, y: sum(x[i] * B[i][j] * y[j] for i in range(2) for j in range(2))
        table = {}
        for a in charges:
            for b in charges:
                ab = (a[0] + b[0], a[1] + b[1])
                if ab in cset:
                    table[(a, b)] = h0[a] + h0[b] - h0[ab] + bil(a, b)
        h = split_cocycle(table, "symmetric")
        resid_total += sum(1 for (a, b), v in table.items()
                           if h(a) + h(b) - h((a[0] + b[0], a[1] + b[1])) != v)
    ok = nat_ok and resid_total == 0
    return SuiteResult(6, "cocycle splitting", ok,
                       f"H(m,n)=mn gives h(n)=-n(n-1)/2 for m,n<=10: {nat_ok}; {trials} random symmetric cocycles on Z^2, "
                       f"{resid_total} nonzero residuals", {"natural": nat_ok, "symmetric_trials": trials,
                                                            "residuals": resid_total})


# --- 7 -----------------------------------------------------------------------


def round_trip(lattice_name: str, seed: int, window_cells: int = 5, interaction=None) -> Dict:
    lat = parse_builtin(lattice_name)
    inter = interaction or exclusion()
    space = ConfigSpace(lat, inter)
    rng = random.Random(seed)
    g0 = random_invariant_function(lat, inter.states, inter.base, rng)
    zetas = random_zetas(space, lat.rank, rng)
    omega = round_trip_form(space, g0, zetas)
    window = lat.box_window([window_cells] * lat.rank)
    res = decompose(omega, space, window)
    # g - g0 must be constant on every configuration component of a small window
    small = lat.box_window([3] * lat.rank)
    wspace = ConfigSpace(small, inter)
    labels = wspace.component_labels(wspace.enumerate(small.vertices, max_support=2))
    diffs: Dict[int, set] = {}
    for eta, comp in labels.items():
        diffs.setdefault(comp, set()).add(res.g(eta) - g0(eta))
    return {"lattice": lattice_name, "seed": seed, "zetas_match": res.zetas == zetas,
            "certificate_transitions": res.certificate["transitions_checked"],
            "certificate_residuals": res.certificate["nonzero_residuals"],
            "difference_constant_per_component": all(len(v) == 1 for v in diffs.values()),
            "components_checked": len(diffs)}


def suite_round_trip(scale: str = "small") -> SuiteResult:
    seeds = [70, 71] if scale == "small" else [70, 71, 72, 73, 74]
    rows = [round_trip(name, s) for name in ("euclidean(1)", "euclidean(2)", "hexagonal") for s in seeds]
    ok = all(r["zetas_match"] and r["certificate_residuals"] == 0 and r["certificate_transitions"] > 0
             and r["difference_constant_per_component"] for r in rows)
    return SuiteResult(7, "decomposition round trip", ok,
                       f"{len(rows)} fixtures on euclidean(1), euclidean(2), hexagonal; zetas recovered="
                       f"{all(r['zetas_match'] for r in rows)}, residual transitions="
                       f"{sum(r['certificate_residuals'] for r in rows)} of {sum(r['certificate_transitions'] for r in rows)}",
                       {"fixtures": rows})


# --- 8 -----------------------------------------------------------------------


def suite_dim_dV(scale: str = "small") -> SuiteResult:
    cases = [("exclusion/euclidean(2)", parse_builtin("euclidean(2)"), exclusion(), 2),
             ("exclusion/hexagonal", parse_builtin("hexagonal"), exclusion(), 2),
             ("2-species/euclidean(2)", parse_builtin("euclidean(2)"), two_species_exclusion(), 4)]
    got = {}
    for name, lat, inter, _ in cases:
        space = ConfigSpace(lat, inter)
        got[name] = dim_dV_check(lat, space, lat.box_window([3] * lat.rank))
    ok = all(got[n] == want for n, _, _, want in cases)
    return SuiteResult(8, "dimension of dV is c_phi * d", ok, ", ".join(f"{k}: {v}" for k, v in got.items()), got)


# --- 9 -----------------------------------------------------------------------


def suite_a_identities(scale: str = "small") -> SuiteResult:
    rng = random.Random(9)
    fixtures = ["euclidean(1)", "euclidean(2)", "hexagonal", "triangular", "diamond"]
    n_configs = 50
    failures = 0
    for name in fixtures:
        lat = parse_builtin(name)
        d = lat.rank
        verts = lat.cells_to_vertices(lat.block_ball_cells((0,) * d, 3))
        for inter in (exclusion(), two_species_exclusion()):
            basis = conserved_basis(inter)
            xi = {s: sum((random_rational(rng) * b[s] for b in basis), Fraction(0)) for s in inter.states}
            configs = [random_configuration(rng, verts, inter.states, inter.base, 6) for _ in range(n_configs)]
            for j in range(1, d + 1):
                a = AFunction(xi, j, inter.base)
                for k in range(1, d + 1):
                    failures += not a_identity_check(a, k, configs, d)
    return SuiteResult(9, "A-function shift identities", failures == 0,
                       f"{n_configs} random configurations per lattice on {', '.join(fixtures)}, {failures} failures",
                       {"failures": failures})


# --- 10 ----------------------------------------------------------------------


def oracle_locale_verdict(inter, g) -> bool:
    """Union-find over all configurations of a locale; PASS iff each charge class is one component."""
    basis = conserved_basis(inter)
    configs = list(itertools.product(inter.states, repeat=g.n_vertices))
    idx = {c: i for i, c in enumerate(configs)}
    pairs = []
    for c in configs:
        for e in range(g.n_edges):
            o, t = g.origin[e], g.target[e]
            if o != t:
                y = list(c)
                y[o], y[t] = inter.phi(c[o], c[t])
                pairs.append((idx[c], idx[tuple(y)]))
    charges = {tuple(sum(b[s] for s in c) for b in basis) for c in configs}
    return _union_find_components(len(configs), pairs) == len(charges)


def suite_irreducibility(scale: str = "small") -> SuiteResult:
    locales = default_locales(4)
    rows = {}
    ok = True
    for name, inter, want in [("exclusion", exclusion(), True), ("identity(2)", identity_interaction(2), False),
                              ("generalized(2)", generalized_exclusion(2), True)]:
        verdicts = irreducibility_evidence(inter, locales)
        oracle = [oracle_locale_verdict(inter, g) for _, g in locales]
        match = [v.passed for v in verdicts] == oracle
        overall = all(v.passed for v in verdicts)
        rows[name] = {"verdict": "PASS" if overall else "FAIL", "oracle_match": match}
        ok &= match and overall == want
        if want:
            ok &= all(v.passed for v in verdicts)
    return SuiteResult(10, "irreducibility evidence", ok,
                       ", ".join(f"{k} {v['verdict']} (oracle match {v['oracle_match']})" for k, v in rows.items())
                       + f" on {len(locales)} paths and cycles", rows)


SUITES: List[Tuple[int, str, Callable[[str], SuiteResult]]] = [
    (1, "ee", suite_ee_classification),
    (2, "abelian-cover", suite_abelian_cover),
    (3, "kernel", suite_kernel),
    (4, "expansion", suite_expansion),
    (5, "pairing", suite_pairing),
    (6, "splitting", suite_splitting),
    (7, "round-trip", suite_round_trip),
    (8, "dim-dv", suite_dim_dV),
    (9, "a-identities", suite_a_identities),
    (10, "irreducibility", suite_irreducibility),
]


def suite_names() -> List[str]:
    return [k for _, k, _ in SUITES]


def run_suites(which: str = "all", scale: str = "small") -> List[SuiteResult]:
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    chosen = [s for s in SUITES if which == "all" or which in (s[1], str(s[0]))]
    if not chosen:
        raise ValueError(f"unknown suite {which!r}; choose from all, {', '.join(suite_names())}")
    return [fn(scale) for _, _, fn in chosen]

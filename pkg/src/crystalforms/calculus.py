"""Functions on configurations, their expansions, forms and potentials.

Functions are plain callables `f(eta) -> Fraction`.  Objects that can compute
`f(eta^e) - f(eta)` from local data expose `nabla(eta, e)`, which the
differential uses instead of two global evaluations.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .configspace import (
    STAR,
    CanonicalRepresentatives,
    Charge,
    ConfigSpace,
    Configuration,
    Transition,
    default_representatives,
)
from .crystal import LatticeEdge, LatticeVertex, PeriodicLattice, vadd, vneg, vsub
from .errors import CapExceeded, ClosednessError, InconclusiveError, ValidationError
from .linalg import format_q, q

ZERO = Fraction(0)


# --- local and uniform functions ------------------------------------------------

class LocalFunction:
    """f in C(S^Lambda), stored as a table over states on `support` (missing = 0)."""

    def __init__(self, support: Sequence, table: Mapping[Tuple[str, ...], Fraction], base: str, vanishing: bool = False):
        self.support = tuple(support)
        self.table = {tuple(k): q(v) for k, v in table.items() if q(v) != 0}
        self.base = base
        self.vanishing = vanishing
        if vanishing:
            for key in self.table:
                if base in key:
                    raise ValidationError(f"term on {self.support} is flagged C_Lambda but is nonzero at {key}")

    def __call__(self, eta: Configuration) -> Fraction:
        return self.table.get(tuple(eta.get(v, self.base) for v in self.support), ZERO)

    def __eq__(self, other):
        return isinstance(other, LocalFunction) and (self.support, self.table) == (other.support, other.table)

    def __repr__(self):
        return f"LocalFunction({self.support}, {self.table})"


class UniformFunction:
    """Finite sum of C_Lambda terms; `radius` is the largest support diameter in `metric`."""

    def __init__(self, terms: Iterable[LocalFunction], radius: int = 0, metric: str = "graph"):
        self.terms = list(terms)
        supports = [t.support for t in self.terms]
        if len(set(map(frozenset, supports))) != len(supports):
            raise ValidationError("uniform function terms must have distinct supports")
        self.radius = radius
        self.metric = metric

    def __call__(self, eta: Configuration) -> Fraction:
        return sum((t(eta) for t in self.terms), ZERO)


def expand(f: Callable[[Configuration], Fraction], vertices: Sequence, states: Sequence[str], base: str,
           cap: int = 10**6) -> Dict[Tuple, LocalFunction]:
    """Unique expansion f = sum_Lambda f_Lambda over subsets of a finite vertex set.

    f_Lambda(eta) = sum over Lambda' in Lambda of (-1)^{|Lambda - Lambda'|} f(eta|Lambda') for
    eta with no base coordinate on Lambda; only nonzero terms are returned,
    keyed by the sorted support tuple.
    """
    vs = sorted(vertices)
    nonbase = [s for s in states if s != base]
    total = len(states) ** len(vs)
    if total > cap:
        raise CapExceeded(f"expansion over {len(vs)} sites needs {total} evaluations (cap {cap})", estimate=total)
    memo: Dict[Configuration, Fraction] = {}

    def fv(c):
        if c not in memo:
            memo[c] = q(f(c))
        return memo[c]

    out: Dict[Tuple, LocalFunction] = {}
    f_star = fv(STAR)
    if f_star != 0:
        out[()] = LocalFunction((), {(): f_star}, base, vanishing=True)
    for k in range(1, len(vs) + 1):
        for lam in itertools.combinations(vs, k):
            table = {}
            for sts in itertools.product(nonbase, repeat=k):
                val = ZERO
                for r in range(k + 1):
                    sign = -1 if (k - r) % 2 else 1
                    for sub in itertools.combinations(range(k), r):
                        val += sign * fv(Configuration({lam[i]: sts[i] for i in sub}))
                if val != 0:
                    table[sts] = val
            if table:
                out[lam] = LocalFunction(lam, table, base, vanishing=True)
    return out


def reconstruct(terms: Mapping[Tuple, LocalFunction]) -> Callable[[Configuration], Fraction]:
    def f(eta):
        return sum((t(eta) for t in terms.values()), ZERO)

    return f


def iota_restrict(f: Callable, vertices: Iterable, eta: Configuration) -> Fraction:
    """iota^Lambda f(eta) = f(eta|_Lambda)."""
    return f(eta.restrict(vertices))


# --- shift-invariant functions stored by orbit data ------------------------------

def canonical_support(support: Iterable[LatticeVertex]) -> Tuple[Tuple[LatticeVertex, ...], Tuple[int, ...]]:
    """Translate so the least site in (cell, base) order sits in cell 0; returns (support, shift applied)."""
    sup = list(support)
    lead = min(sup, key=lambda v: (v.cell, v.base))
    shift = vneg(lead.cell)
    return tuple(sorted(LatticeVertex(v.base, vadd(v.cell, shift)) for v in sup)), shift


class InvariantFunction:
    """g = sum over translates of finitely many C_Lambda orbit terms.

    `terms` maps a canonical support (see canonical_support) to a table over
    non-base states on it.  The empty support is not allowed: g(star) = 0.
    """

    def __init__(self, lattice: PeriodicLattice, base: str, terms: Mapping[Tuple, Mapping[Tuple[str, ...], Fraction]]):
        self.lattice = lattice
        self.base = base
        self.terms: Dict[Tuple, Dict[Tuple[str, ...], Fraction]] = {}
        for sup, table in terms.items():
            if not sup:
                raise ValidationError("orbit terms need a nonempty support")
            canon, _ = canonical_support(sup)
            if canon != tuple(sorted(sup)):
                raise ValidationError(f"support {sup} is not in canonical position")
            tab = {tuple(k): q(v) for k, v in table.items() if q(v) != 0}
            for key in tab:
                if base in key:
                    raise ValidationError(f"orbit term on {sup} is nonzero at a base coordinate")
            if tab:
                self.terms[canon] = tab
        self._keys = list(self.terms)
        self._by_base: Dict[int, List[Tuple[int, LatticeVertex]]] = {}
        for ti, sup in enumerate(self._keys):
            for p in sup:
                self._by_base.setdefault(p.base, []).append((ti, p))

    @property
    def radius(self) -> int:
        return max((self.lattice.graph_diameter(s) for s in self._keys), default=0)

    def _term_value(self, ti: int, shift, eta: Configuration) -> Fraction:
        sup = self._keys[ti]
        key = []
        for p in sup:
            s = eta.get(LatticeVertex(p.base, vadd(p.cell, shift)), None)
            if s is None:
                return ZERO
            key.append(s)
        return self.terms[sup].get(tuple(key), ZERO)

    def __call__(self, eta: Configuration) -> Fraction:
        total = ZERO
        for ti, sup in enumerate(self._keys):
            a0 = sup[0]
            for v in eta.support:
                if v.base == a0.base:
                    total += self._term_value(ti, vsub(v.cell, a0.cell), eta)
        return total

    def contributions(self, eta: Configuration, sites: Iterable[LatticeVertex]) -> Fraction:
        """Sum of the translated terms whose support meets `sites`."""
        seen = set()
        total = ZERO
        for x in sites:
            for ti, p in self._by_base.get(x.base, ()):
                shift = vsub(x.cell, p.cell)
                if (ti, shift) in seen:
                    continue
                seen.add((ti, shift))
                total += self._term_value(ti, shift, eta)
        return total

    def nabla(self, space: ConfigSpace, eta: Configuration, e) -> Fraction:
        after = space.apply_edge(eta, e)
        if after == eta:
            return ZERO
        sites = (space.ambient.origin(e), space.ambient.target(e))
        return self.contributions(after, sites) - self.contributions(eta, sites)

    def __add__(self, other: "InvariantFunction") -> "InvariantFunction":
        merged = {k: dict(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            tab = merged.setdefault(k, {})
            for s, val in v.items():
                tab[s] = tab.get(s, ZERO) + val
        return InvariantFunction(self.lattice, self.base, merged)

    def scaled(self, c) -> "InvariantFunction":
        c = q(c)
        return InvariantFunction(self.lattice, self.base, {k: {s: c * v for s, v in t.items()} for k, t in self.terms.items()})

    def to_json(self):
        return {
            "terms": [
                {
                    "support": [v.to_json() for v in sup],
                    "entries": [{"states": list(k), "value": format_q(v)} for k, v in sorted(tab.items())],
                }
                for sup, tab in sorted(self.terms.items())
            ]
        }

    @classmethod
    def from_json(cls, lattice, base, data):
        terms = {}
        for rec in data["terms"]:
            sup = tuple(LatticeVertex.from_json(v) for v in rec["support"])
            canon, shift = canonical_support(sup)
            order = sorted(range(len(sup)), key=lambda i: LatticeVertex(sup[i].base, vadd(sup[i].cell, shift)))
            tab = terms.setdefault(canon, {})
            for ent in rec["entries"]:
                st = tuple(ent["states"][i] for i in order)
                tab[st] = tab.get(st, ZERO) + q(ent["value"])
        return cls(lattice, base, terms)


def candidate_supports(lattice: PeriodicLattice, radius: int, metric: str = "graph", max_size: Optional[int] = None):
    """Canonical supports (least site in cell 0) with diameter <= radius in the metric."""
    zero = (0,) * lattice.rank

    def dist(a, b):
        if metric == "graph":
            return lattice.distance(a, b)
        return lattice.block_distance(a, b)

    out = []
    for b in range(lattice.n_base):
        anchor = LatticeVertex(b, zero)
        if metric == "graph":
            cand = lattice.ball(anchor, radius)
        else:
            cand = set(lattice.block_ball(anchor, radius))
        key = lambda v: (v.cell, v.base)
        cand = sorted((v for v in cand if key(v) > key(anchor)), key=key)
        dcache: Dict[Tuple, int] = {}

        def d(u, v):
            if (u, v) not in dcache:
                dcache[(u, v)] = dcache[(v, u)] = dist(u, v)
            return dcache[(u, v)]

        def rec(chosen, start):
            out.append(tuple(sorted(chosen)))
            if max_size is not None and len(chosen) >= max_size:
                return
            for i in range(start, len(cand)):
                v = cand[i]
                if all(d(u, v) <= radius for u in chosen):
                    chosen.append(v)
                    rec(chosen, i + 1)
                    chosen.pop()

        rec([anchor], 0)
    return out


def expand_invariant(f: Callable[[Configuration], Fraction], lattice: PeriodicLattice, states: Sequence[str], base: str,
                     radius: int, metric: str = "graph", cap: int = 10**6, max_size: Optional[int] = None) -> InvariantFunction:
    """Orbit data of a shift-invariant f, assuming its terms have diameter <= radius.

    Each term is computed by inclusion-exclusion at its canonical position;
    f is evaluated only on configurations supported in those supports.
    """
    nonbase = [s for s in states if s != base]
    memo: Dict[Configuration, Fraction] = {}
    budget = [0]

    def fv(c):
        if c not in memo:
            budget[0] += 1
            if budget[0] > cap:
                raise CapExceeded(f"orbit expansion needs more than {cap} evaluations", estimate=budget[0])
            memo[c] = q(f(c))
        return memo[c]

    terms = {}
    for sup in candidate_supports(lattice, radius, metric, max_size):
        k = len(sup)
        table = {}
        for sts in itertools.product(nonbase, repeat=k):
            val = ZERO
            for r in range(k + 1):
                sign = -1 if (k - r) % 2 else 1
                for sub in itertools.combinations(range(k), r):
                    val += sign * fv(Configuration({sup[i]: sts[i] for i in sub}))
            if val != 0:
                table[sts] = val
        if table:
            terms[sup] = table
    return InvariantFunction(lattice, base, terms)


# --- forms ---------------------------------------------------------------------

class Form:
    """omega(eta, e); subclasses set `radius` when they are R-uniform."""

    radius: Optional[int] = None

    def value(self, eta: Configuration, e) -> Fraction:
        raise NotImplementedError

    def __call__(self, tr: Transition) -> Fraction:
        return self.value(tr.config, tr.edge)


class Differential(Form):
    def __init__(self, f, space: ConfigSpace, radius: Optional[int] = None):
        self.f = f
        self.space = space
        self.radius = radius

    def value(self, eta, e):
        if hasattr(self.f, "nabla"):
            return self.f.nabla(self.space, eta, e)
        after = self.space.apply_edge(eta, e)
        if after == eta:
            return ZERO
        return q(self.f(after)) - q(self.f(eta))


def differential(f, space: ConfigSpace, radius: Optional[int] = None) -> Differential:
    return Differential(f, space, radius)


class FormSum(Form):
    def __init__(self, parts: Sequence[Tuple[Fraction, Form]]):
        self.parts = [(q(c), w) for c, w in parts]
        radii = [w.radius for _, w in self.parts]
        self.radius = None if any(r is None for r in radii) else max(radii, default=0)

    def value(self, eta, e):
        return sum((c * w.value(eta, e) for c, w in self.parts if c != 0), ZERO)


class ZeroForm(Form):
    radius = 0

    def value(self, eta, e):
        return ZERO


class FunctionForm(Form):
    def __init__(self, fn: Callable[[Configuration, object], Fraction], radius: Optional[int] = None):
        self.fn = fn
        self.radius = radius

    def value(self, eta, e):
        return q(self.fn(eta, e))


class TabulatedForm(Form):
    """Shift-invariant R-uniform form stored on edge-orbit representatives.

    For the seed edge e0 the table is keyed by the states on the ball
    B(o(e0 at cell 0), R), listed in sorted vertex order; missing keys are 0.
    The value on (e0, c) reads the configuration translated by -c.
    """

    def __init__(self, lattice: PeriodicLattice, space: ConfigSpace, radius: int,
                 tables: Mapping[int, Mapping[Tuple[str, ...], Fraction]]):
        self.lattice = lattice
        self.space = space
        self.base = space.base
        self.radius = int(radius)
        zero = (0,) * lattice.rank
        self.balls = {
            e0: tuple(sorted(lattice.ball(lattice.origin(LatticeEdge(e0, zero)), self.radius)))
            for e0 in range(lattice.seed.n_edges)
        }
        self.tables = {int(e0): {tuple(k): q(v) for k, v in t.items() if q(v) != 0} for e0, t in tables.items()}

    def key(self, eta: Configuration, e: LatticeEdge) -> Tuple[str, ...]:
        c = e.cell
        return tuple(eta.get(LatticeVertex(v.base, vadd(v.cell, c)), self.base) for v in self.balls[e.seed_edge])

    def value(self, eta, e):
        tab = self.tables.get(e.seed_edge)
        if not tab:
            return ZERO
        return tab.get(self.key(eta, e), ZERO)

    @classmethod
    def from_form(cls, form: Form, lattice: PeriodicLattice, space: ConfigSpace, radius: int, cap: int = 10**6):
        zero = (0,) * lattice.rank
        states = space.interaction.states
        tables = {}
        for e0 in range(lattice.seed.n_edges):
            ball = sorted(lattice.ball(lattice.origin(LatticeEdge(e0, zero)), radius))
            size = len(states) ** len(ball)
            if size > cap:
                raise CapExceeded(f"tabulating edge {e0} needs {size} patterns (cap {cap})", estimate=size)
            tab = {}
            for sts in itertools.product(states, repeat=len(ball)):
                eta = Configuration.from_mapping(dict(zip(ball, sts)), space.base)
                v = form.value(eta, LatticeEdge(e0, zero))
                if v != 0:
                    tab[sts] = v
            tables[e0] = tab
        return cls(lattice, space, radius, tables)

    def to_json(self):
        orbit = []
        for e0 in sorted(self.tables):
            ball = self.balls[e0]
            entries = []
            for k, v in sorted(self.tables[e0].items()):
                pattern = Configuration.from_mapping(dict(zip(ball, k)), self.base)
                entries.append({"pattern": pattern.to_json(), "value": format_q(v)})
            orbit.append({"edge_orbit": e0, "entries": entries})
        return {"radius": self.radius, "orbit_data": orbit}

    @classmethod
    def from_json(cls, data, lattice: PeriodicLattice, space: ConfigSpace):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            R = int(data["radius"])
            inst = cls(lattice, space, R, {})
            for rec in data["orbit_data"]:
                e0 = int(rec["edge_orbit"])
                if not 0 <= e0 < lattice.seed.n_edges:
                    raise ValidationError(f"edge orbit {e0} is not a seed edge")
                ball = inst.balls[e0]
                pos = {v: i for i, v in enumerate(ball)}
                tab = {}
                for ent in rec["entries"]:
                    pat = Configuration.from_json(ent["pattern"], space.base)
                    key = [space.base] * len(ball)
                    for v, s in pat.items():
                        if v not in pos:
                            raise ValidationError(f"pattern site {v} lies outside B(o(e), {R}) for edge {e0}")
                        if s not in space.interaction.states:
                            raise ValidationError(f"unknown state {s!r} in form pattern")
                        key[pos[v]] = s
                    tab[tuple(key)] = q(ent["value"])
                inst.tables[e0] = {k: v for k, v in tab.items() if v != 0}
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed form JSON: {exc}") from exc
        return inst


# --- integration, alternation, closedness ----------------------------------------

def integrate(omega: Form, path: Sequence[Transition], space: Optional[ConfigSpace] = None) -> Fraction:
    if space is not None and not space.is_path(path):
        raise ValidationError("transitions do not compose into a path")
    return sum((omega.value(t.config, t.edge) for t in path), ZERO)


def alternating_violations(omega: Form, space: ConfigSpace, transitions: Iterable[Transition]) -> List[Transition]:
    """Transitions where omega_e(eta) != -omega_ebar(eta^e), or omega != 0 on a fixed transition."""
    bad = []
    for tr in transitions:
        after = space.apply_edge(tr.config, tr.edge)
        v = omega.value(tr.config, tr.edge)
        if after == tr.config:
            if v != 0:
                bad.append(tr)
        elif v != -omega.value(after, space.ambient.inverse(tr.edge)):
            bad.append(tr)
    return bad


def _tree_path(parent: Mapping[Configuration, Optional[Transition]], c: Configuration) -> List[Transition]:
    path = []
    while parent[c] is not None:
        path.append(parent[c])
        c = parent[c].config
    return path[::-1]


def _reverse(space: ConfigSpace, path: Sequence[Transition]) -> List[Transition]:
    return [space.invert_transition(t) for t in reversed(path)]


class PotentialTable:
    """Values of a potential on explicitly enumerated configurations."""

    def __init__(self, values: Dict[Configuration, Fraction], reps: Dict[Charge, Configuration]):
        self.values = values
        self.reps = reps

    def __call__(self, eta: Configuration) -> Fraction:
        if eta not in self.values:
            raise InconclusiveError(f"{eta} was not reached by the potential search")
        return self.values[eta]

    def __len__(self):
        return len(self.values)


def potential(omega: Form, space: ConfigSpace, seeds: Iterable[Configuration],
              reps: Optional[CanonicalRepresentatives] = None, cap: int = 10**6, check: bool = True) -> PotentialTable:
    """f with df = omega on every component containing a seed; f(rep) = 0.

    The BFS starts at the canonical representative of each seed's charge, so
    it explores the whole charge class of the finite ambient.  Every
    non-tree transition is checked; the first inconsistency raises a
    ClosednessError carrying a closed path with nonzero integral.
    """
    reps = default_representatives(space) if reps is None else reps
    values: Dict[Configuration, Fraction] = {}
    used: Dict[Charge, Configuration] = {}
    parent: Dict[Configuration, Optional[Transition]] = {}
    for seed in seeds:
        if seed in values:
            continue
        alpha = space.charge(seed)
        r = reps.rep(alpha)
        if r in values:
            raise InconclusiveError(f"{seed} is not connected to the representative of its charge {alpha}")
        used[alpha] = r
        values[r] = ZERO
        parent[r] = None
        queue = deque([r])
        while queue:
            x = queue.popleft()
            fx = values[x]
            for tr, y in space.moves(x):
                w = omega.value(x, tr.edge)
                if y not in values:
                    values[y] = fx + w
                    parent[y] = tr
                    if len(values) > cap:
                        raise CapExceeded(f"potential search exceeded the cap {cap}", estimate=len(values))
                    queue.append(y)
                elif check and values[y] != fx + w:
                    cycle = _tree_path(parent, x) + [tr] + _reverse(space, _tree_path(parent, y))
                    raise ClosednessError(
                        f"omega is not closed: integral {fx + w - values[y]} around a cycle of length {len(cycle)}",
                        cycle=cycle,
                        defect=fx + w - values[y],
                    )
        if seed not in values:
            raise InconclusiveError(f"{seed} is not connected to the representative of its charge {alpha}")
    return PotentialTable(values, used)


# --- lazy potential on the infinite lattice ---------------------------------------

class TransportPotential:
    """f(eta) = -integral of omega along a canonical path from eta to rep(charge).

    The path first moves every occupied site into the connected prefix P_k
    (k = |supp eta|) of the canonical vertex order, one hop at a time; each hop
    uses a fixed transition sequence on the two endpoints, which exists when
    the interaction is irreducibly quantified.  Inside P_k the class of eta is
    searched once per (k, charge) and tabulated from rep(charge).  Path
    independence is exactly closedness of omega, so for closed omega this is
    a potential with f(rep) = 0.
    """

    def __init__(self, omega: Form, space: ConfigSpace, reps: Optional[CanonicalRepresentatives] = None,
                 class_cap: int = 10**6):
        if not isinstance(space.ambient, PeriodicLattice):
            raise ValidationError("the transport potential lives on a periodic lattice")
        self.omega = omega
        self.space = space
        self.lattice: PeriodicLattice = space.ambient
        self.reps = default_representatives(space) if reps is None else reps
        self.anchor = LatticeVertex(0, (0,) * self.lattice.rank)
        self.class_cap = class_cap
        self._hop: Dict[Tuple[str, str], List[bool]] = {}
        self._tables: Dict[Tuple[int, Charge], Dict[Configuration, Fraction]] = {}
        self._prefix: Dict[int, List[LatticeVertex]] = {}
        self._cache: Dict[Configuration, Fraction] = {}
        self.evaluations = 0

    # hop of state s from o(e) to an empty t(e): list of moves, True = along e, False = along e-bar
    def hop_moves(self, s: str) -> List[bool]:
        key = (s, self.space.base)
        if key in self._hop:
            return self._hop[key]
        inter = self.space.interaction
        start, goal = (s, self.space.base), (self.space.base, s)
        prev = {start: None}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            if p == goal:
                break
            fwd = inter.phi(*p)
            bwd = inter.phi_bar(*p)
            for nxt, flag in ((fwd, True), (bwd, False)):
                if nxt not in prev:
                    prev[nxt] = (p, flag)
                    queue.append(nxt)
        if goal not in prev:
            raise InconclusiveError(
                f"state {s!r} cannot cross an edge into an empty site: the interaction is not irreducibly quantified"
            )
        moves = []
        p = goal
        while prev[p] is not None:
            p, flag = prev[p]
            moves.append(flag)
        self._hop[key] = moves[::-1]
        return self._hop[key]

    def prefix(self, k: int) -> List[LatticeVertex]:
        if k not in self._prefix:
            self._prefix[k] = self.lattice.ordered_prefix(self.anchor, k)
        return self._prefix[k]

    def _hop_along(self, eta: Configuration, e: LatticeEdge) -> Tuple[Configuration, Fraction]:
        lat, sp, om = self.lattice, self.space, self.omega
        s = eta[lat.origin(e)]
        acc = ZERO
        ebar = lat.inverse(e)
        for along in self.hop_moves(s):
            edge = e if along else ebar
            acc += om.value(eta, edge)
            eta = sp.apply_edge(eta, edge)
        return eta, acc

    def transport(self, eta: Configuration) -> Tuple[Configuration, Fraction]:
        """Move eta's support into P_k; returns (end configuration, integral along the way)."""
        k = len(eta)
        P = set(self.prefix(k))
        acc = ZERO
        lat = self.lattice
        while True:
            outside = [v for v in eta.support if v not in P]
            if not outside:
                return eta, acc
            v = outside[0]
            # shortest path from v to the nearest empty site of P
            prev: Dict[LatticeVertex, Optional[LatticeEdge]] = {v: None}
            queue = deque([v])
            goal = None
            while queue and goal is None:
                x = queue.popleft()
                for le in lat.out_edges(x):
                    y = lat.target(le)
                    if y in prev:
                        continue
                    prev[y] = le
                    if y in P and y not in eta:
                        goal = y
                        break
                    queue.append(y)
            path = []
            y = goal
            while prev[y] is not None:
                path.append(prev[y])
                y = lat.origin(prev[y])
            path.reverse()
            # move the last occupied site on the path to the goal through empty sites
            last = max(i for i, le in enumerate(path) if lat.origin(le) in eta)
            for le in path[last:]:
                eta, w = self._hop_along(eta, le)
                acc += w
        # unreachable

    def class_table(self, k: int, alpha: Charge) -> Dict[Configuration, Fraction]:
        key = (k, alpha)
        if key in self._tables:
            return self._tables[key]
        P = self.prefix(k)
        Pset = set(P)
        lat, sp, om = self.lattice, self.space, self.omega
        edges = [le for v in P for le in lat.out_edges(v) if lat.target(le) in Pset]
        r = self.reps.rep(alpha)
        if any(v not in Pset for v in r.support):
            raise InconclusiveError(f"representative of {alpha} does not fit in P_{k}")
        vals = {r: ZERO}
        parent: Dict[Configuration, Optional[Transition]] = {r: None}
        queue = deque([r])
        while queue:
            x = queue.popleft()
            fx = vals[x]
            for le in edges:
                y = sp.apply_edge(x, le)
                if y == x:
                    continue
                w = om.value(x, le)
                if y not in vals:
                    vals[y] = fx + w
                    parent[y] = Transition(x, le)
                    if len(vals) > self.class_cap:
                        raise CapExceeded(f"charge class on {k} sites exceeds {self.class_cap}", estimate=len(vals))
                    queue.append(y)
                elif vals[y] != fx + w:
                    cycle = _tree_path(parent, x) + [Transition(x, le)] + _reverse(sp, _tree_path(parent, y))
                    raise ClosednessError(
                        f"omega is not closed: integral {fx + w - vals[y]} around a cycle in the prefix region",
                        cycle=cycle,
                        defect=fx + w - vals[y],
                    )
        self._tables[key] = vals
        return vals

    def __call__(self, eta: Configuration) -> Fraction:
        if eta in self._cache:
            return self._cache[eta]
        self.evaluations += 1
        if len(eta) == 0:
            return ZERO
        end, acc = self.transport(eta)
        table = self.class_table(len(eta), self.space.charge(eta))
        if end not in table:
            raise InconclusiveError(f"{end} is not connected to its representative inside the prefix region")
        val = table[end] - acc
        self._cache[eta] = val
        return val


# --- shift invariance ----------------------------------------------------------------

def shift_invariance_violations(omega: Form, space: ConfigSpace, configs: Iterable[Configuration],
                                shifts: Sequence) -> List[Tuple[Transition, tuple]]:
    """Transitions (eta, e) where omega(sigma e, sigma eta) != omega(e, eta) for a shift sigma."""
    lat = space.ambient if isinstance(space.ambient, PeriodicLattice) else space.ambient.lattice
    bad = []
    for eta in configs:
        for e in space.candidate_edges(eta):
            v = omega.value(eta, e)
            for s in shifts:
                if omega.value(eta.shifted(s), lat.shift_edge(e, s)) != v:
                    bad.append((Transition(eta, e), tuple(s)))
    return bad

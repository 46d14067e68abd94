"""Finitely supported configurations and the transition structure on them.

A configuration is a sparse map from vertices to non-base states; every
vertex not listed is at the base state.  The ambient graph (a finite
MultiGraph, a FiniteWindow, or a whole PeriodicLattice) is held by the
ConfigSpace, not by the configuration, so the same configuration value can
be read on a window and on the lattice containing it.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .crystal import FiniteWindow, LatticeVertex, PeriodicLattice, vadd
from .errors import CapExceeded, InconclusiveError, ValidationError
from .interaction import Interaction, charge_of_state, charges_by_size, conserved_basis
from .multigraph import MultiGraph

Charge = Tuple[Fraction, ...]


class Configuration:
    """Immutable sparse configuration; equality compares supports and states."""

    __slots__ = ("_sites", "_key")

    def __init__(self, sites: Mapping = None):
        sites = dict(sites or {})
        self._sites = sites
        self._key = frozenset(sites.items())

    @classmethod
    def from_mapping(cls, mapping: Mapping, base: str) -> "Configuration":
        return cls({v: s for v, s in mapping.items() if s != base})

    def get(self, v, default):
        return self._sites.get(v, default)

    def __getitem__(self, v):
        return self._sites[v]

    def __contains__(self, v):
        return v in self._sites

    def __len__(self):
        return len(self._sites)

    def __eq__(self, other):
        return isinstance(other, Configuration) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return sorted(self._sites.items()) < sorted(other._sites.items())

    def __repr__(self):
        return f"Configuration({dict(sorted(self._sites.items()))})"

    @property
    def support(self) -> List:
        return sorted(self._sites)

    def items(self):
        return sorted(self._sites.items())

    def restrict(self, vertices: Iterable) -> "Configuration":
        vs = set(vertices)
        return Configuration({v: s for v, s in self._sites.items() if v in vs})

    def without(self, vertices: Iterable) -> "Configuration":
        vs = set(vertices)
        return Configuration({v: s for v, s in self._sites.items() if v not in vs})

    def union(self, other: "Configuration") -> "Configuration":
        clash = set(self._sites) & set(other._sites)
        if clash:
            raise ValidationError(f"configurations overlap at {sorted(clash)[:3]}")
        d = dict(self._sites)
        d.update(other._sites)
        return Configuration(d)

    def updated(self, updates: Mapping, base: str) -> "Configuration":
        d = dict(self._sites)
        for v, s in updates.items():
            if s == base:
                d.pop(v, None)
            else:
                d[v] = s
        return Configuration(d)

    def shifted(self, shift) -> "Configuration":
        """Translate a lattice configuration: site (b, c) moves to (b, c + shift)."""
        return Configuration({LatticeVertex(v.base, vadd(v.cell, shift)): s for v, s in self._sites.items()})

    def to_json(self):
        sites = []
        for v, s in self.items():
            vj = v.to_json() if isinstance(v, LatticeVertex) else v
            sites.append({"vertex": vj, "state": s})
        return {"sites": sites}

    @classmethod
    def from_json(cls, data, base: str = None) -> "Configuration":
        try:
            d = {}
            for rec in data["sites"]:
                v = rec["vertex"]
                v = LatticeVertex.from_json(v) if isinstance(v, dict) else int(v)
                d[v] = str(rec["state"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed configuration JSON: {exc}") from exc
        return cls.from_mapping(d, base) if base is not None else cls(d)


STAR = Configuration()


class Transition(NamedTuple):
    config: Configuration
    edge: Hashable


class GraphAmbient:
    """Adapter giving a finite MultiGraph the ambient protocol used here."""

    def __init__(self, g: MultiGraph):
        self.graph = g
        self.vertices = list(range(g.n_vertices))
        self.edges = list(range(g.n_edges))

    def origin(self, e):
        return self.graph.origin[e]

    def target(self, e):
        return self.graph.target[e]

    def inverse(self, e):
        return self.graph.inverse[e]

    def out_edges(self, v):
        return self.graph.out_edges(v)

    def __contains__(self, v):
        return isinstance(v, int) and 0 <= v < self.graph.n_vertices


class ConfigSpace:
    def __init__(self, ambient, interaction: Interaction, basis=None):
        if isinstance(ambient, MultiGraph):
            ambient = GraphAmbient(ambient)
        self.ambient = ambient
        self.interaction = interaction
        self.base = interaction.base
        self.basis = conserved_basis(interaction) if basis is None else basis
        self.state_charge: Dict[str, Charge] = charge_of_state(interaction, self.basis)
        self.zero: Charge = tuple(Fraction(0) for _ in self.basis)
        self.finite = not isinstance(ambient, PeriodicLattice)
        self.base_fixed = interaction.phi(self.base, self.base) == (self.base, self.base)
        if not self.finite and not self.base_fixed:
            raise ValidationError("phi moves the all-base pair, so finitely supported configurations are not preserved")

    # --- single transitions -------------------------------------------------
    def state(self, eta: Configuration, v) -> str:
        return eta.get(v, self.base)

    def apply_edge(self, eta: Configuration, e) -> Configuration:
        amb = self.ambient
        o, t = amb.origin(e), amb.target(e)
        if o == t:
            return eta
        a, b = eta.get(o, self.base), eta.get(t, self.base)
        c, d = self.interaction.phi(a, b)
        if (c, d) == (a, b):
            return eta
        return eta.updated({o: c, t: d}, self.base)

    def invert_transition(self, tr: Transition) -> Transition:
        target = self.apply_edge(tr.config, tr.edge)
        if target == tr.config:
            return tr
        return Transition(target, self.ambient.inverse(tr.edge))

    def transition_target(self, tr: Transition) -> Configuration:
        return self.apply_edge(tr.config, tr.edge)

    def is_path(self, path: Sequence[Transition]) -> bool:
        return all(self.apply_edge(a.config, a.edge) == b.config for a, b in zip(path, path[1:]))

    def charge(self, eta: Configuration) -> Charge:
        tot = list(self.zero)
        for _, s in eta.items():
            for k, c in enumerate(self.state_charge[s]):
                tot[k] += c
        return tuple(tot)

    def candidate_edges(self, eta: Configuration) -> List:
        """Edges that can move eta (all edges touching the support when phi fixes (*,*))."""
        amb = self.ambient
        if not self.base_fixed:
            return list(amb.edges)
        out = []
        seen = set()
        for v in eta.support:
            for e in amb.out_edges(v):
                for f in (e, amb.inverse(e)):
                    if f not in seen:
                        seen.add(f)
                        out.append(f)
        return out

    def moves(self, eta: Configuration) -> List[Tuple[Transition, Configuration]]:
        out = []
        for e in self.candidate_edges(eta):
            nxt = self.apply_edge(eta, e)
            if nxt != eta:
                out.append((Transition(eta, e), nxt))
        return out

    # --- finite enumeration ---------------------------------------------------
    def _vertices(self, vertices=None) -> List:
        if vertices is not None:
            return list(vertices)
        if not self.finite:
            raise InconclusiveError("enumeration over an infinite lattice needs a finite vertex set")
        return list(self.ambient.vertices)

    def enumerate(self, vertices=None, cap: int = 10**6, max_support: Optional[int] = None) -> Iterator[Configuration]:
        vs = self._vertices(vertices)
        nonbase = [s for s in self.interaction.states if s != self.base]
        if max_support is None:
            size = self.interaction.n_states ** len(vs)
            if size > cap:
                raise CapExceeded(f"{size} configurations exceed the cap {cap}", estimate=size)
            for combo in itertools.product(self.interaction.states, repeat=len(vs)):
                yield Configuration.from_mapping(dict(zip(vs, combo)), self.base)
            return
        from math import comb

        size = sum(comb(len(vs), k) * len(nonbase) ** k for k in range(max_support + 1))
        if size > cap:
            raise CapExceeded(f"{size} configurations exceed the cap {cap}", estimate=size)
        for k in range(max_support + 1):
            for sites in itertools.combinations(vs, k):
                for states in itertools.product(nonbase, repeat=k):
                    yield Configuration(dict(zip(sites, states)))

    def charge_class(self, alpha: Charge, vertices: Sequence, cap: int = 10**6) -> List[Configuration]:
        """All configurations on `vertices` with charge alpha (pruned DFS)."""
        vs = list(vertices)
        levels = charges_by_size(self.interaction, len(vs), self.basis)
        out: List[Configuration] = []

        def rec(i, remaining, acc):
            if len(out) > cap:
                raise CapExceeded(f"charge class exceeds the cap {cap}", estimate=len(out))
            if i == len(vs):
                if remaining == self.zero:
                    out.append(Configuration(acc))
                return
            left = len(vs) - i - 1
            for s in self.interaction.states:
                rem = tuple(a - b for a, b in zip(remaining, self.state_charge[s]))
                if rem in levels[left]:
                    if s != self.base:
                        acc[vs[i]] = s
                    rec(i + 1, rem, acc)
                    acc.pop(vs[i], None)

        rec(0, tuple(alpha), {})
        return out

    def bfs_path(self, eta: Configuration, target: Configuration, cap: int = 10**6) -> Optional[List[Transition]]:
        """Shortest transition path from eta to target inside the ambient, or None."""
        if not self.finite:
            raise InconclusiveError("reachability search needs a finite window")
        if eta == target:
            return []
        if self.charge(eta) != self.charge(target):
            return None
        prev: Dict[Configuration, Optional[Transition]] = {eta: None}
        queue = deque([eta])
        while queue:
            x = queue.popleft()
            for tr, y in self.moves(x):
                if y in prev:
                    continue
                prev[y] = tr
                if y == target:
                    path = []
                    z = y
                    while prev[z] is not None:
                        path.append(prev[z])
                        z = prev[z].config
                    return path[::-1]
                if len(prev) > cap:
                    raise CapExceeded(f"reachability search visited more than {cap} configurations", estimate=len(prev))
                queue.append(y)
        return None

    def component_labels(self, configs: Iterable[Configuration], cap: int = 10**6) -> Dict[Configuration, int]:
        """Connected-component label for every configuration reachable from `configs`."""
        label: Dict[Configuration, int] = {}
        comp = 0
        for c in configs:
            if c in label:
                continue
            label[c] = comp
            queue = deque([c])
            while queue:
                x = queue.popleft()
                for _, y in self.moves(x):
                    if y not in label:
                        label[y] = comp
                        if len(label) > cap:
                            raise CapExceeded(f"component search exceeded the cap {cap}", estimate=len(label))
                        queue.append(y)
            comp += 1
        return label


# --- canonical representatives -------------------------------------------------

class CanonicalRepresentatives:
    """rep(alpha): lexicographically least states on the first k* vertices of a
    fixed vertex order, where k* is the least number of sites carrying alpha.

    The vertex order comes from `prefix(k)`; states are ordered as listed in
    the interaction.  With a connected-prefix order this picks a canonical
    point in each charge class on every connected region containing the prefix.
    """

    def __init__(self, space: ConfigSpace, prefix: Callable[[int], List], max_sites: int = 64):
        self.space = space
        self.prefix = prefix
        self.max_sites = max_sites
        self._levels: List[frozenset] = charges_by_size(space.interaction, 1, space.basis)
        self._cache: Dict[Charge, Configuration] = {}

    def level(self, k: int) -> frozenset:
        while len(self._levels) <= k:
            prev = self._levels[-1]
            cs = set(self.space.state_charge.values())
            self._levels.append(frozenset(tuple(a + b for a, b in zip(p, c)) for p in prev for c in cs))
        return self._levels[k]

    def min_sites(self, alpha: Charge) -> int:
        alpha = tuple(alpha)
        for k in range(self.max_sites + 1):
            if alpha in self.level(k):
                return k
        raise ValidationError(f"charge {alpha} is not realizable on {self.max_sites} sites")

    def lex_least(self, alpha: Charge, vertices: Sequence) -> Configuration:
        vs = list(vertices)
        rem = tuple(alpha)
        acc = {}
        for i, v in enumerate(vs):
            left = len(vs) - i - 1
            for s in self.space.interaction.states:
                r = tuple(a - b for a, b in zip(rem, self.space.state_charge[s]))
                if r in self.level(left):
                    if s != self.space.base:
                        acc[v] = s
                    rem = r
                    break
            else:
                raise ValidationError(f"charge {alpha} is not realizable on {len(vs)} sites")
        return Configuration(acc)

    def rep(self, alpha: Charge) -> Configuration:
        alpha = tuple(alpha)
        if alpha not in self._cache:
            k = self.min_sites(alpha)
            self._cache[alpha] = self.lex_least(alpha, self.prefix(k))
        return self._cache[alpha]


def lattice_prefix(lattice: PeriodicLattice, anchor: Optional[LatticeVertex] = None) -> Callable[[int], List]:
    anchor = anchor if anchor is not None else LatticeVertex(0, (0,) * lattice.rank)
    return lambda k: lattice.ordered_prefix(anchor, k)


def graph_prefix(g: MultiGraph, anchor: int = 0) -> Callable[[int], List]:
    from .multigraph import bfs_distances

    d = bfs_distances(g, anchor)
    order = sorted(d, key=lambda v: (d[v], v))

    def prefix(k):
        if k > len(order):
            raise InconclusiveError(f"graph has only {len(order)} vertices reachable from the anchor")
        return order[:k]

    return prefix


def default_representatives(space: ConfigSpace) -> CanonicalRepresentatives:
    amb = space.ambient
    if isinstance(amb, PeriodicLattice):
        return CanonicalRepresentatives(space, lattice_prefix(amb))
    if isinstance(amb, FiniteWindow):
        lat_prefix = lattice_prefix(amb.lattice)

        def prefix(k):
            vs = lat_prefix(k)
            if any(v not in amb for v in vs):
                raise InconclusiveError("the canonical prefix leaves the window")
            return vs

        return CanonicalRepresentatives(space, prefix)
    return CanonicalRepresentatives(space, graph_prefix(amb.graph))

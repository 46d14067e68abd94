"""Crystal lattices in block-coordinate presentation.

A lattice is a finite connected strictly symmetric seed graph together with a
translation vector in Z^d on every seed edge.  The realized infinite graph has
vertices (base, cell) and edges (seed_edge, cell):

    origin((e, c)) = (o(e), c),  target((e, c)) = (t(e), c + v(e)),
    inverse((e, c)) = (inv(e), c + v(e)).

The cell-0 copy of the seed vertices is the fundamental domain and the unit
vectors e_1..e_d are the free generators, so the block coordinate of a vertex
is just its cell.  Nothing infinite is ever materialized: every traversal is
an implicit BFS.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from .errors import InconclusiveError, ValidationError
from .linalg import generates_full_lattice
from .multigraph import Automorphism, MultiGraph, components, is_connected

Vec = Tuple[int, ...]


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def l1(a: Vec) -> int:
    return sum(abs(x) for x in a)


def unit(d: int, i: int, sign: int = 1) -> Vec:
    return tuple(sign if k == i else 0 for k in range(d))


class LatticeVertex(NamedTuple):
    base: int
    cell: Vec

    def to_json(self):
        return {"base": self.base, "cell": list(self.cell)}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["base"]), tuple(int(c) for c in data["cell"]))


class LatticeEdge(NamedTuple):
    seed_edge: int
    cell: Vec


@dataclass(frozen=True)
class PeriodicLattice:
    seed: MultiGraph
    translations: Tuple[Vec, ...]
    name: str = ""
    generators: Tuple[str, ...] = ()
    _steps: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        trans = tuple(tuple(int(x) for x in t) for t in self.translations)
        object.__setattr__(self, "translations", trans)
        if not self.generators:
            object.__setattr__(self, "generators", tuple(f"sigma{i + 1}" for i in range(self.rank)))
        self.validate()
        object.__setattr__(self, "_steps", frozenset(t for t in trans if any(t)))

    # --- structure ----------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.translations[0]) if self.translations else 0

    @property
    def n_base(self) -> int:
        return self.seed.n_vertices

    @property
    def fundamental_domain(self) -> List[LatticeVertex]:
        zero = (0,) * self.rank
        return [LatticeVertex(b, zero) for b in range(self.n_base)]

    def validate(self):
        s = self.seed
        if len(self.translations) != s.n_edges:
            raise ValidationError("one translation vector per seed edge is required")
        if s.n_edges == 0 or self.rank < 1:
            raise ValidationError("a crystal lattice needs rank d >= 1 and at least one edge")
        if any(len(t) != self.rank for t in self.translations):
            raise ValidationError("translation vectors have inconsistent dimensions")
        if not s.strictly_symmetric or any(s.inverse[e] == e for e in range(s.n_edges)):
            raise ValidationError("seed crystal must be strictly symmetric")
        if not is_connected(s):
            raise ValidationError("seed crystal must be connected")
        for e in range(s.n_edges):
            if self.translations[s.inverse[e]] != vneg(self.translations[e]):
                raise ValidationError(f"translation of inverse edge {s.inverse[e]} is not -v({e})")
        ok, index = generates_full_lattice(self.cycle_translations(), self.rank)
        if not ok:
            if index == 0:
                raise ValidationError("cycle translations have rank < d: the realized graph is disconnected")
            raise ValidationError(
                f"cycle translations generate an index-{index} sublattice: the realized graph is disconnected"
            )

    def cycle_translations(self) -> List[Vec]:
        """Translations of the fundamental cycles of a BFS spanning tree."""
        s = self.seed
        pot: Dict[int, Vec] = {0: (0,) * self.rank}
        tree: Set[int] = set()
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for e in s.out_edges(x):
                y = s.target[e]
                if y not in pot:
                    pot[y] = vadd(pot[x], self.translations[e])
                    tree.update((e, s.inverse[e]))
                    queue.append(y)
        out = []
        for e in range(s.n_edges):
            if e not in tree and e < s.inverse[e]:
                out.append(vsub(vadd(pot[s.origin[e]], self.translations[e]), pot[s.target[e]]))
        return out

    # --- the realized graph -------------------------------------------------
    def origin(self, le: LatticeEdge) -> LatticeVertex:
        return LatticeVertex(self.seed.origin[le.seed_edge], le.cell)

    def target(self, le: LatticeEdge) -> LatticeVertex:
        return LatticeVertex(self.seed.target[le.seed_edge], vadd(le.cell, self.translations[le.seed_edge]))

    def inverse(self, le: LatticeEdge) -> LatticeEdge:
        e = le.seed_edge
        return LatticeEdge(self.seed.inverse[e], vadd(le.cell, self.translations[e]))

    def out_edges(self, v: LatticeVertex) -> List[LatticeEdge]:
        return [LatticeEdge(e, v.cell) for e in self.seed.out_edges(v.base)]

    def neighbors(self, v: LatticeVertex) -> List[LatticeVertex]:
        return [self.target(le) for le in self.out_edges(v)]

    def contains_vertex(self, v) -> bool:
        return isinstance(v, tuple) and len(v) == 2 and 0 <= v[0] < self.n_base and len(v[1]) == self.rank

    def shift_vertex(self, v: LatticeVertex, shift: Vec) -> LatticeVertex:
        return LatticeVertex(v.base, vadd(v.cell, shift))

    def shift_edge(self, le: LatticeEdge, shift: Vec) -> LatticeEdge:
        return LatticeEdge(le.seed_edge, vadd(le.cell, shift))

    def edge_orbit_representatives(self) -> List[LatticeEdge]:
        zero = (0,) * self.rank
        return [LatticeEdge(e, zero) for e in range(self.seed.n_edges)]

    def distances_from(self, v: LatticeVertex, radius: int) -> Dict[LatticeVertex, int]:
        dist = {v: 0}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            if dist[x] == radius:
                continue
            for y in self.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def ball(self, v: LatticeVertex, radius: int) -> Set[LatticeVertex]:
        return set(self.distances_from(v, radius))

    def distance(self, v: LatticeVertex, w: LatticeVertex, limit: int = 10_000) -> int:
        if v == w:
            return 0
        dist = {v: 0}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            if dist[x] >= limit:
                break
            for y in self.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == w:
                        return dist[y]
                    queue.append(y)
        raise InconclusiveError(f"no path of length <= {limit} from {v} to {w}")

    def shortest_path(self, v: LatticeVertex, w: LatticeVertex, allowed=None) -> List[LatticeEdge]:
        """Edges of a shortest path (deterministic tie-breaking by seed edge id)."""
        prev: Dict[LatticeVertex, Optional[LatticeEdge]] = {v: None}
        queue = deque([v])
        while queue and w not in prev:
            x = queue.popleft()
            for le in self.out_edges(x):
                y = self.target(le)
                if y not in prev and (allowed is None or y in allowed):
                    prev[y] = le
                    queue.append(y)
        if w not in prev:
            raise InconclusiveError(f"{w} not reachable from {v} inside the allowed set")
        path = []
        x = w
        while prev[x] is not None:
            path.append(prev[x])
            x = self.origin(prev[x])
        return path[::-1]

    def ordered_prefix(self, anchor: LatticeVertex, k: int) -> List[LatticeVertex]:
        """First k vertices in the order (graph distance from anchor, base, cell).

        Every prefix of this order is connected.
        """
        out: List[LatticeVertex] = []
        seen = {anchor}
        layer = [anchor]
        while len(out) < k:
            layer.sort()
            out.extend(layer)
            nxt = []
            for x in layer:
                for y in self.neighbors(x):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            layer = nxt
        return out[:k]

    # --- block geometry -----------------------------------------------------
    @property
    def block_steps(self) -> frozenset:
        """Nonzero difference vectors of the block graph Z_S (closed under negation)."""
        return self._steps

    def block_cell_distances(self, cell: Vec, radius: int) -> Dict[Vec, int]:
        dist = {cell: 0}
        queue = deque([cell])
        steps = sorted(self._steps)
        while queue:
            c = queue.popleft()
            if dist[c] == radius:
                continue
            for s in steps:
                n = vadd(c, s)
                if n not in dist:
                    dist[n] = dist[c] + 1
                    queue.append(n)
        return dist

    def block_cell_distance(self, a: Vec, b: Vec) -> int:
        if a == b:
            return 0
        r = 1
        while True:
            d = self.block_cell_distances(a, r)
            if b in d:
                return d[b]
            r *= 2
            if r > 4096:
                raise InconclusiveError("block distance search exceeded radius 4096")

    def block_distance(self, v: LatticeVertex, w: LatticeVertex) -> int:
        return self.block_cell_distance(v.cell, w.cell)

    def cells_to_vertices(self, cells: Iterable[Vec]) -> List[LatticeVertex]:
        return sorted(LatticeVertex(b, c) for c in cells for b in range(self.n_base))

    def block_ball(self, v: LatticeVertex, radius: int) -> List[LatticeVertex]:
        return self.cells_to_vertices(self.block_cell_distances(v.cell, radius))

    def block_ball_cells(self, cell: Vec, radius: int) -> Set[Vec]:
        return set(self.block_cell_distances(cell, radius))

    def block_set_distance(self, a: Iterable[LatticeVertex], b: Iterable[LatticeVertex]) -> int:
        ca = {v.cell for v in a}
        cb = {v.cell for v in b}
        if ca & cb:
            return 0
        r = 1
        while True:
            for c in ca:
                d = self.block_cell_distances(c, r)
                hits = [d[x] for x in cb if x in d]
                if hits:
                    best = min(hits)
                    for c2 in ca:
                        d2 = self.block_cell_distances(c2, best)
                        best = min([best] + [d2[x] for x in cb if x in d2])
                    return best
            r *= 2

    def block_diameter(self, vertices: Iterable[LatticeVertex]) -> int:
        cells = sorted({v.cell for v in vertices})
        best = 0
        for a, b in itertools.combinations(cells, 2):
            best = max(best, self.block_cell_distance(a, b))
        return best

    def graph_diameter(self, vertices: Iterable[LatticeVertex]) -> int:
        vs = list(vertices)
        best = 0
        for a, b in itertools.combinations(vs, 2):
            best = max(best, self.distance(a, b))
        return best

    # --- finite realizations --------------------------------------------------
    def window(self, lo: Sequence[int], hi: Sequence[int]) -> "FiniteWindow":
        return FiniteWindow(self, tuple(lo), tuple(hi))

    def box_window(self, sizes: Sequence[int]) -> "FiniteWindow":
        """Window of the given cell sizes, roughly centered at the origin cell."""
        lo = tuple(-((n - 1) // 2) for n in sizes)
        hi = tuple(a + n - 1 for a, n in zip(lo, sizes))
        return FiniteWindow(self, lo, hi)

    def torus(self, sizes: Sequence[int]) -> Tuple[MultiGraph, List[Automorphism]]:
        """Periodic realization on (Z/N_1 x ... x Z/N_d) cells plus the generator shifts."""
        sizes = tuple(sizes)
        if len(sizes) != self.rank or min(sizes) < 1:
            raise ValidationError("one positive size per lattice direction is required")
        cells = list(itertools.product(*[range(n) for n in sizes]))
        cid = {c: i for i, c in enumerate(cells)}
        n, m = self.n_base, self.seed.n_edges

        def wrap(c):
            return tuple(x % s for x, s in zip(c, sizes))

        origin, target, inverse = [], [], []
        for c in cells:
            for e in range(m):
                origin.append(self.seed.origin[e] + n * cid[c])
                tc = wrap(vadd(c, self.translations[e]))
                target.append(self.seed.target[e] + n * cid[tc])
                inverse.append(self.seed.inverse[e] + m * cid[tc])
        g = MultiGraph(n * len(cells), origin, target, inverse, strictly_symmetric=True)
        autos = []
        for i in range(self.rank):
            sh = unit(self.rank, i)
            vp = [0] * g.n_vertices
            ep = [0] * g.n_edges
            for c in cells:
                c2 = cid[wrap(vadd(c, sh))]
                for b in range(n):
                    vp[b + n * cid[c]] = b + n * c2
                for e in range(m):
                    ep[e + m * cid[c]] = e + m * c2
            autos.append(Automorphism(tuple(vp), tuple(ep)))
        return g, autos

    # --- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "seed": self.seed.to_json(),
            "orbits": [{"edge": e, "translation": list(t)} for e, t in enumerate(self.translations)],
            "fundamental_domain": list(range(self.n_base)),
            "generators": list(self.generators),
        }

    @classmethod
    def from_json(cls, data) -> "PeriodicLattice":
        if isinstance(data, str):
            data = json.loads(data)
        if "torsion" in data and data["torsion"]:
            raise ValidationError("groups with torsion are not supported; present the lattice over its free part")
        try:
            seed = MultiGraph.from_json(data["seed"])
            d = int(data["rank"])
            trans: List[Optional[Vec]] = [None] * seed.n_edges
            for rec in data["orbits"]:
                trans[int(rec["edge"])] = tuple(int(x) for x in rec["translation"])
            if any(t is None for t in trans):
                raise ValidationError("every seed edge needs a translation")
            fd = data.get("fundamental_domain", list(range(seed.n_vertices)))
            if sorted(int(x) for x in fd) != list(range(seed.n_vertices)):
                raise ValidationError("fundamental_domain must list every seed vertex once")
            lat = cls(seed, tuple(trans), name=data.get("name", ""), generators=tuple(data.get("generators", ())))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed lattice JSON: {exc}") from exc
        if lat.rank != d:
            raise ValidationError(f"rank {d} does not match translation dimension {lat.rank}")
        if len(lat.generators) != d:
            raise ValidationError("one generator name per rank is required")
        return lat


class FiniteWindow:
    """All lattice vertices in a cell box and all edges with both endpoints inside."""

    def __init__(self, lattice: PeriodicLattice, lo: Vec, hi: Vec):
        if len(lo) != lattice.rank or len(hi) != lattice.rank or any(a > b for a, b in zip(lo, hi)):
            raise ValidationError("window box must give lo <= hi in every lattice direction")
        self.lattice = lattice
        self.lo, self.hi = lo, hi
        cells = list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]))
        self.cells = cells
        self.vertices: List[LatticeVertex] = sorted(LatticeVertex(b, c) for c in cells for b in range(lattice.n_base))
        self.index: Dict[LatticeVertex, int] = {v: i for i, v in enumerate(self.vertices)}
        edges = []
        for v in self.vertices:
            for le in lattice.out_edges(v):
                if lattice.target(le) in self.index:
                    edges.append(le)
        self.edges: List[LatticeEdge] = edges
        self.edge_index: Dict[LatticeEdge, int] = {le: i for i, le in enumerate(edges)}
        self.graph = MultiGraph(
            len(self.vertices),
            [self.index[lattice.origin(le)] for le in edges],
            [self.index[lattice.target(le)] for le in edges],
            [self.edge_index[lattice.inverse(le)] for le in edges],
            strictly_symmetric=True,
        )
        self._out: Dict[LatticeVertex, List[LatticeEdge]] = {v: [] for v in self.vertices}
        for le in edges:
            self._out[lattice.origin(le)].append(le)

    # ambient-graph protocol (same method names as PeriodicLattice)
    def origin(self, le):
        return self.lattice.origin(le)

    def target(self, le):
        return self.lattice.target(le)

    def inverse(self, le):
        return self.lattice.inverse(le)

    def out_edges(self, v):
        return self._out[v]

    def neighbors(self, v):
        return [self.lattice.target(le) for le in self._out[v]]

    def __contains__(self, v):
        return v in self.index

    def __len__(self):
        return len(self.vertices)

    def contains_cell(self, c: Vec) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, c, self.hi))

    def is_boundary_cell(self, c: Vec) -> bool:
        return any(x == a or x == b for a, x, b in zip(self.lo, c, self.hi))

    def interior_cells(self, margin: int) -> List[Vec]:
        return [c for c in self.cells if all(a + margin <= x <= b - margin for a, x, b in zip(self.lo, c, self.hi))]

    def center_cell(self) -> Vec:
        return tuple((a + b) // 2 for a, b in zip(self.lo, self.hi))

    def ordered_vertices(self, anchor: LatticeVertex) -> List[LatticeVertex]:
        """Window vertices ordered by (window-graph distance from anchor, base, cell)."""
        from .multigraph import bfs_distances

        d = bfs_distances(self.graph, self.index[anchor])
        reach = [v for v in self.vertices if self.index[v] in d]
        return sorted(reach, key=lambda v: (d[self.index[v]], v))

    def to_json(self):
        return {"lo": list(self.lo), "hi": list(self.hi), "vertices": len(self.vertices), "edges": len(self.edges)}


# --- builtins -------------------------------------------------------------------

def _from_translation_pairs(n: int, pairs: Sequence[Tuple[int, int, Vec]], name: str) -> PeriodicLattice:
    """Each (u, v, t) yields edge u->v with translation t and its inverse v->u with -t."""
    origin, target, inverse, trans = [], [], [], []
    for u, v, t in pairs:
        e = len(origin)
        origin += [u, v]
        target += [v, u]
        inverse += [e + 1, e]
        trans += [tuple(t), vneg(tuple(t))]
    seed = MultiGraph(n, origin, target, inverse, strictly_symmetric=True)
    return PeriodicLattice(seed, tuple(trans), name=name)


BUILTIN_NAMES = ("euclidean", "euclidean_nearest_n", "hexagonal", "triangular", "diamond")


def builtin(name: str, d: Optional[int] = None, n: Optional[int] = None) -> PeriodicLattice:
    if name == "euclidean":
        d = 1 if d is None else int(d)
        if d < 1:
            raise ValidationError("euclidean lattice needs d >= 1")
        return _from_translation_pairs(1, [(0, 0, unit(d, i)) for i in range(d)], f"euclidean({d})")
    if name == "euclidean_nearest_n":
        d = 2 if d is None else int(d)
        n = 2 if n is None else int(n)
        if d < 1 or n < 1:
            raise ValidationError("euclidean_nearest_n needs d >= 1 and n >= 1")
        vecs = [v for v in itertools.product(range(-n, n + 1), repeat=d) if 0 < l1(v) <= n]
        half = [v for v in vecs if v > vneg(v)]
        return _from_translation_pairs(1, [(0, 0, v) for v in sorted(half)], f"euclidean_nearest_n({d},{n})")
    if name == "hexagonal":
        return _from_translation_pairs(2, [(0, 1, (0, 0)), (0, 1, (1, 0)), (0, 1, (0, 1))], "hexagonal")
    if name == "triangular":
        return _from_translation_pairs(1, [(0, 0, (1, 0)), (0, 0, (0, 1)), (0, 0, (1, 1))], "triangular")
    if name == "diamond":
        return _from_translation_pairs(
            2, [(0, 1, (0, 0, 0)), (0, 1, (1, 0, 0)), (0, 1, (0, 1, 0)), (0, 1, (0, 0, 1))], "diamond"
        )
    raise ValidationError(f"unknown builtin lattice {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def parse_builtin(spec: str) -> PeriodicLattice:
    """'euclidean(2)', 'euclidean_nearest_n(2,2)', 'hexagonal', ..."""
    spec = spec.strip()
    if "(" in spec:
        name, args = spec.split("(", 1)
        vals = [int(a) for a in args.rstrip(")").split(",") if a.strip()]
        return builtin(name.strip(), *vals)
    return builtin(spec)


# --- classification -------------------------------------------------------------

def block_coordinate(lattice: PeriodicLattice, v: LatticeVertex) -> Vec:
    return v.cell


def fundamental_domain_connected(lattice: PeriodicLattice) -> bool:
    s = lattice.seed
    zero_pairs = [
        (s.origin[e], s.target[e]) for e in range(s.n_edges) if not any(lattice.translations[e]) and e < s.inverse[e]
    ]
    return is_connected(MultiGraph.from_pairs(s.n_vertices, zero_pairs))


def rank_criterion(seed: MultiGraph, d: int) -> bool:
    """d == 1 - |X0| + |E0|/2 certifies that some coordinate is essentially Euclidean."""
    return 2 * d == 2 - 2 * seed.n_vertices + seed.n_edges


@dataclass
class EEReport:
    essentially_euclidean: bool
    steps: List[Vec]
    fundamental_domain_connected: bool
    rank_criterion: bool
    counterexample: Optional[Tuple[Vec, Vec, int, int]] = None

    def to_json(self):
        return {
            "essentially_euclidean": self.essentially_euclidean,
            "block_steps": [list(s) for s in self.steps],
            "fundamental_domain_connected": self.fundamental_domain_connected,
            "rank_criterion_certifies_ee_coordinate": self.rank_criterion,
            "counterexample": None
            if self.counterexample is None
            else {
                "cells": [list(self.counterexample[0]), list(self.counterexample[1])],
                "block_graph_distance": self.counterexample[2],
                "euclidean_distance": self.counterexample[3],
            },
        }


def is_essentially_euclidean(lattice: PeriodicLattice) -> EEReport:
    d = lattice.rank
    units = {unit(d, i, s) for i in range(d) for s in (1, -1)}
    steps = lattice.block_steps
    fd = fundamental_domain_connected(lattice)
    ee = fd and set(steps) == units
    cex = None
    zero = (0,) * d
    extra = sorted(set(steps) - units)
    missing = sorted(units - set(steps))
    if extra:
        cex = (zero, extra[0], 1, l1(extra[0]))
    elif missing:
        cex = (zero, missing[0], lattice.block_cell_distance(zero, missing[0]), 1)
    return EEReport(ee, sorted(steps), fd, rank_criterion(lattice.seed, d), cex)


def maximal_abelian_cover(seed: MultiGraph) -> PeriodicLattice:
    if not seed.strictly_symmetric or any(seed.inverse[e] == e for e in range(seed.n_edges)):
        raise ValidationError("seed must be strictly symmetric")
    if not is_connected(seed):
        raise ValidationError("seed must be connected")
    d2 = 2 - 2 * seed.n_vertices + seed.n_edges
    if d2 <= 0:
        raise ValidationError("seed has no independent cycles (rank 0): its abelian cover is not a crystal lattice")
    d = d2 // 2
    tree: Set[int] = set()
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for e in seed.out_edges(x):
            y = seed.target[e]
            if y not in seen:
                seen.add(y)
                tree.update((e, seed.inverse[e]))
                queue.append(y)
    trans: List[Vec] = [(0,) * d] * seed.n_edges
    i = 0
    for e in range(seed.n_edges):
        if e in tree or e > seed.inverse[e]:
            continue
        trans[e] = unit(d, i)
        trans[seed.inverse[e]] = unit(d, i, -1)
        i += 1
    return PeriodicLattice(seed, tuple(trans), name="abelian_cover")


@dataclass
class Equivalence:
    lattice: PeriodicLattice
    C: int
    C_prime: int

    def to_json(self):
        return {"lattice": self.lattice.to_json(), "C": self.C, "C_prime": self.C_prime}


def essentially_euclidean_equivalent(lattice: PeriodicLattice) -> Equivalence:
    """Same vertex set; complete graph inside each cell copy plus all edges to
    the 2d neighbouring copies.  Constants are maxima over edge-orbit
    representatives: d_X <= C d_X' and d_X' <= C' d_X."""
    n, d = lattice.n_base, lattice.rank
    zero = (0,) * d
    pairs = [(x, y, zero) for x in range(n) for y in range(x + 1, n)]
    for i in range(d):
        for x in range(n):
            for y in range(n):
                pairs.append((x, y, unit(d, i)))
    other = _from_translation_pairs(n, pairs, f"ee_equivalent({lattice.name})")
    C = max(lattice.distance(other.origin(le), other.target(le)) for le in other.edge_orbit_representatives())
    Cp = max(other.distance(lattice.origin(le), lattice.target(le)) for le in lattice.edge_orbit_representatives())
    return Equivalence(other, max(C, 1), max(Cp, 1))


@dataclass
class ComplementReport:
    unbounded_components: int
    bounded_components: int

    @property
    def total(self):
        return self.unbounded_components + self.bounded_components


def complement_components(lattice: PeriodicLattice, window: FiniteWindow, ball: Iterable[LatticeVertex]) -> ComplementReport:
    ball = set(ball)
    for v in ball:
        if v not in window:
            raise InconclusiveError(f"ball vertex {v} lies outside the window")
        for c in lattice.block_ball_cells(v.cell, 1):
            if not window.contains_cell(c) or window.is_boundary_cell(c):
                raise InconclusiveError("the ball's 1-neighbourhood touches the window boundary")
    rest = [window.index[v] for v in window.vertices if v not in ball]
    comps = components(window.graph, rest)
    unb = sum(1 for comp in comps if any(window.is_boundary_cell(window.vertices[i].cell) for i in comp))
    return ComplementReport(unb, len(comps) - unb)

"""Finite symmetric directed multi-graphs.

Vertices and edges are dense integer ids.  Every edge has an origin, a target
and an inverse edge; the inverse is stored as an explicit permutation.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ValidationError

INFINITY = math.inf


@dataclass(frozen=True)
class MultiGraph:
    n_vertices: int
    origin: Tuple[int, ...]
    target: Tuple[int, ...]
    inverse: Tuple[int, ...]
    strictly_symmetric: bool = False
    _out: Tuple[Tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(self.origin))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "inverse", tuple(self.inverse))
        self.validate()
        out: List[List[int]] = [[] for _ in range(self.n_vertices)]
        for e, o in enumerate(self.origin):
            out[o].append(e)
        object.__setattr__(self, "_out", tuple(tuple(x) for x in out))

    @classmethod
    def from_pairs(cls, n_vertices: int, pairs: Iterable[Tuple[int, int]], strictly_symmetric=True):
        """Build from undirected pairs; each pair (u, v) yields edges u->v and v->u.

        A pair (u, u) yields two distinct loop edges inverse to each other.
        """
        origin, target, inverse = [], [], []
        for u, v in pairs:
            e = len(origin)
            origin += [u, v]
            target += [v, u]
            inverse += [e + 1, e]
        return cls(n_vertices, origin, target, inverse, strictly_symmetric)

    def validate(self):
        n, m = self.n_vertices, len(self.origin)
        if n < 0:
            raise ValidationError("negative vertex count")
        if len(self.target) != m or len(self.inverse) != m:
            raise ValidationError("origin/target/inverse arrays differ in length")
        for e in range(m):
            if not (0 <= self.origin[e] < n and 0 <= self.target[e] < n):
                raise ValidationError(f"edge {e} has an endpoint outside 0..{n - 1}")
            if not 0 <= self.inverse[e] < m:
                raise ValidationError(f"edge {e} has inverse {self.inverse[e]} out of range")
        if sorted(self.inverse) != list(range(m)):
            raise ValidationError("inversion is not a bijection")
        for e in range(m):
            b = self.inverse[e]
            if self.origin[b] != self.target[e] or self.target[b] != self.origin[e]:
                raise ValidationError(f"edge {e}: o(inv e) != t(e) or t(inv e) != o(e)")
            if self.inverse[b] != e:
                raise ValidationError(f"edge {e}: inversion is not an involution")
            if self.strictly_symmetric and b == e:
                raise ValidationError(f"edge {e} is its own inverse in a strictly symmetric graph")

    @property
    def n_edges(self) -> int:
        return len(self.origin)

    def out_edges(self, x: int) -> Tuple[int, ...]:
        self._check_vertex(x)
        return self._out[x]

    def neighbors(self, x: int) -> List[int]:
        return [self.target[e] for e in self.out_edges(x)]

    def _check_vertex(self, x):
        if not (isinstance(x, int) and 0 <= x < self.n_vertices):
            raise ValidationError(f"unknown vertex {x!r}")

    def is_path(self, edges: Sequence[int]) -> bool:
        return all(self.target[a] == self.origin[b] for a, b in zip(edges, edges[1:]))

    def induced(self, vertices: Iterable[int]) -> Tuple["MultiGraph", List[int], List[int]]:
        """Sub-multi-graph on `vertices`: (graph, vertex list, edge list) in old ids."""
        vs = sorted(set(vertices))
        vid = {v: i for i, v in enumerate(vs)}
        es = [e for e in range(self.n_edges) if self.origin[e] in vid and self.target[e] in vid]
        eid = {e: i for i, e in enumerate(es)}
        g = MultiGraph(
            len(vs),
            [vid[self.origin[e]] for e in es],
            [vid[self.target[e]] for e in es],
            [eid[self.inverse[e]] for e in es],
            self.strictly_symmetric,
        )
        return g, vs, es

    # --- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "edges": [
                {"id": e, "origin": self.origin[e], "target": self.target[e], "inverse": self.inverse[e]}
                for e in range(self.n_edges)
            ],
            "strictly_symmetric": self.strictly_symmetric,
        }

    @classmethod
    def from_json(cls, data) -> "MultiGraph":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            edges = sorted(data["edges"], key=lambda r: r["id"])
            if [r["id"] for r in edges] != list(range(len(edges))):
                raise ValidationError("edge ids must be 0..m-1")
            return cls(
                int(data["vertices"]),
                [int(r["origin"]) for r in edges],
                [int(r["target"]) for r in edges],
                [int(r["inverse"]) for r in edges],
                bool(data.get("strictly_symmetric", False)),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed graph JSON: {exc}") from exc


def bfs_distances(g: MultiGraph, source: int, allowed: Optional[set] = None) -> Dict[int, int]:
    if allowed is not None and source not in allowed:
        return {}
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for e in g.out_edges(x):
            y = g.target[e]
            if y not in dist and (allowed is None or y in allowed):
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def distance(g: MultiGraph, x: int, y: int):
    """Length of a shortest path from x to y, or INFINITY."""
    g._check_vertex(x)
    g._check_vertex(y)
    return bfs_distances(g, x).get(y, INFINITY)


def shortest_path(g: MultiGraph, x: int, y: int, allowed: Optional[set] = None) -> Optional[List[int]]:
    """Edge list of a shortest path from x to y inside `allowed` (all vertices if None)."""
    prev: Dict[int, Optional[int]] = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for e in g.out_edges(u):
            v = g.target[e]
            if v not in prev and (allowed is None or v in allowed):
                prev[v] = e
                queue.append(v)
    if y not in prev:
        return None
    path = []
    v = y
    while prev[v] is not None:
        e = prev[v]
        path.append(e)
        v = g.origin[e]
    return path[::-1]


def components(g: MultiGraph, vertices: Optional[Iterable[int]] = None) -> List[List[int]]:
    allowed = set(range(g.n_vertices)) if vertices is None else set(vertices)
    seen: set = set()
    out = []
    for v in sorted(allowed):
        if v in seen:
            continue
        comp = sorted(bfs_distances(g, v, allowed))
        seen.update(comp)
        out.append(comp)
    return out


def is_connected(g: MultiGraph, vertices: Optional[Iterable[int]] = None) -> bool:
    return len(components(g, vertices)) <= 1


def diameter(g: MultiGraph, vertices: Iterable[int]):
    vs = list(vertices)
    best = 0
    for v in vs:
        d = bfs_distances(g, v)
        for w in vs:
            best = max(best, d.get(w, INFINITY))
    return best


# --- morphisms, quotients, coverings ------------------------------------------

@dataclass(frozen=True)
class GraphMorphism:
    source: MultiGraph
    target: MultiGraph
    vertex_map: Tuple[int, ...]
    edge_map: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))
        object.__setattr__(self, "edge_map", tuple(self.edge_map))

    def violations(self) -> List[str]:
        s, t, u, ue = self.source, self.target, self.vertex_map, self.edge_map
        if len(u) != s.n_vertices or len(ue) != s.n_edges:
            return ["map sizes do not match the source graph"]
        out = []
        for e in range(s.n_edges):
            f = ue[e]
            if not 0 <= f < t.n_edges:
                out.append(f"edge {e} maps outside the target graph")
                continue
            if (u[s.origin[e]], u[s.target[e]]) != (t.origin[f], t.target[f]):
                out.append(f"edge {e}: incidence not preserved")
            if ue[s.inverse[e]] != t.inverse[f]:
                out.append(f"edge {e}: inversion not preserved")
        return out

    def is_morphism(self) -> bool:
        return not self.violations()


def identity_morphism(g: MultiGraph) -> GraphMorphism:
    return GraphMorphism(g, g, range(g.n_vertices), range(g.n_edges))


def is_covering(m: GraphMorphism) -> bool:
    """Surjective on vertices and edges, and bijective on every outgoing star."""
    if not m.is_morphism():
        return False
    s, t = m.source, m.target
    if set(m.vertex_map) != set(range(t.n_vertices)) or set(m.edge_map) != set(range(t.n_edges)):
        return False
    for x in range(s.n_vertices):
        image = [m.edge_map[e] for e in s.out_edges(x)]
        if sorted(image) != sorted(t.out_edges(m.vertex_map[x])):
            return False
    return True


@dataclass(frozen=True)
class Automorphism:
    vertex_perm: Tuple[int, ...]
    edge_perm: Tuple[int, ...]


def _orbits(n: int, perms: Sequence[Sequence[int]]) -> List[int]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in perms:
        for i in range(n):
            a, b = find(i), find(p[i])
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = sorted({find(i) for i in range(n)})
    rid = {r: k for k, r in enumerate(roots)}
    return [rid[find(i)] for i in range(n)]


def quotient(g: MultiGraph, generators: Sequence[Automorphism]) -> Tuple[MultiGraph, GraphMorphism, bool]:
    """Quotient by the group generated by `generators`.

    Returns (quotient graph, projection, action_is_free).  Freeness is decided
    by enumerating the generated permutation group on vertices, which is fine
    for the finite windows this is used on.
    """
    for k, a in enumerate(generators):
        m = GraphMorphism(g, g, a.vertex_perm, a.edge_perm)
        bad = m.violations()
        if bad or sorted(a.vertex_perm) != list(range(g.n_vertices)) or sorted(a.edge_perm) != list(range(g.n_edges)):
            raise ValidationError(f"generator {k} is not an automorphism: {bad[:3] or 'not bijective'}")
    vorb = _orbits(g.n_vertices, [a.vertex_perm for a in generators])
    eorb = _orbits(g.n_edges, [a.edge_perm for a in generators])
    n_e = max(eorb) + 1 if eorb else 0
    rep = {}
    for e in range(g.n_edges):
        rep.setdefault(eorb[e], e)
    qg = MultiGraph(
        max(vorb) + 1 if vorb else 0,
        [vorb[g.origin[rep[c]]] for c in range(n_e)],
        [vorb[g.target[rep[c]]] for c in range(n_e)],
        [eorb[g.inverse[rep[c]]] for c in range(n_e)],
        strictly_symmetric=all(eorb[g.inverse[rep[c]]] != c for c in range(n_e)),
    )
    proj = GraphMorphism(g, qg, vorb, eorb)
    return qg, proj, _is_free(g.n_vertices, [a.vertex_perm for a in generators])


def _is_free(n: int, perms: Sequence[Sequence[int]]) -> bool:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    gens = [tuple(p) for p in perms]
    while frontier:
        nxt = []
        for h in frontier:
            for p in gens:
                c = tuple(p[h[i]] for i in range(n))
                if c not in group:
                    group.add(c)
                    nxt.append(c)
        frontier = nxt
    return all(h == ident or all(h[i] != i for i in range(n)) for h in group)

"""Interactions (S, phi), conserved quantities, simplicity and irreducibility evidence."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CapExceeded, ValidationError
from .linalg import echelon_basis, integer_content, nullspace
from .multigraph import MultiGraph, is_connected

Pair = Tuple[str, str]
DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class Interaction:
    """States are string labels; `table` lists only the pairs that phi moves.

    Pairs absent from the table are fixed by phi.
    """

    states: Tuple[str, ...]
    base: str
    table: Tuple[Tuple[Pair, Pair], ...] = ()
    name: str = ""
    _map: Dict[Pair, Pair] = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        object.__setattr__(self, "states", states)
        if len(set(states)) != len(states) or not states:
            raise ValidationError("states must be a nonempty list of distinct labels")
        if self.base not in states:
            raise ValidationError(f"base state {self.base!r} is not among the states")
        m: Dict[Pair, Pair] = {}
        for a, b in self.table:
            a, b = tuple(a), tuple(b)
            for s in a + b:
                if s not in states:
                    raise ValidationError(f"unknown state {s!r} in the interaction table")
            if a in m and m[a] != b:
                raise ValidationError(f"pair {a} is assigned two different images")
            if a != b:
                m[a] = b
        object.__setattr__(self, "table", tuple(sorted(m.items())))
        object.__setattr__(self, "_map", m)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def index(self) -> Dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def phi(self, a: str, b: str) -> Pair:
        return self._map.get((a, b), (a, b))

    def phi_bar(self, a: str, b: str) -> Pair:
        c, d = self.phi(b, a)
        return d, c

    def pairs(self):
        return itertools.product(self.states, repeat=2)

    def moving_pairs(self) -> List[Pair]:
        return [p for p in self.pairs() if self.phi(*p) != p]

    def to_json(self) -> dict:
        out = {"states": list(self.states), "base": self.base, "phi": [{"in": list(a), "out": list(b)} for a, b in self.table]}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data) -> "Interaction":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            table = []
            for rec in data.get("phi", []):
                a, b = rec["in"], rec["out"]
                if len(a) != 2 or len(b) != 2:
                    raise ValidationError(f"phi entry {rec} must map a pair to a pair")
                table.append(((str(a[0]), str(a[1])), (str(b[0]), str(b[1]))))
            return cls(tuple(str(s) for s in data["states"]), str(data["base"]), tuple(table), name=data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed interaction JSON: {exc}") from exc


# --- builtins -------------------------------------------------------------------

def exclusion() -> Interaction:
    return Interaction(("0", "1"), "0", ((("1", "0"), ("0", "1")), (("0", "1"), ("1", "0"))), name="exclusion")


def multi_species_exclusion(species: int = 2) -> Interaction:
    labels = ["0"] + [chr(ord("A") + i) for i in range(species)]
    table = [((a, b), (b, a)) for a in labels for b in labels if a != b]
    return Interaction(tuple(labels), "0", tuple(table), name=f"exclusion_{species}_species")


def two_species_exclusion() -> Interaction:
    return multi_species_exclusion(2)


def identity_interaction(n: int = 2) -> Interaction:
    return Interaction(tuple(str(i) for i in range(n)), "0", (), name=f"identity_{n}")


def generalized_exclusion(kappa: int = 2) -> Interaction:
    """Up to kappa particles per site; one particle hops from origin to target."""
    table = []
    for a in range(1, kappa + 1):
        for b in range(kappa):
            table.append(((str(a), str(b)), (str(a - 1), str(b + 1))))
    return Interaction(tuple(str(i) for i in range(kappa + 1)), "0", tuple(table), name=f"generalized_exclusion_{kappa}")


BUILTINS = {
    "exclusion": exclusion,
    "two_species": two_species_exclusion,
    "identity": identity_interaction,
    "generalized_exclusion": generalized_exclusion,
}


def builtin(name: str, *args) -> Interaction:
    if name not in BUILTINS:
        raise ValidationError(f"unknown builtin interaction {name!r}; choose from {', '.join(BUILTINS)}")
    return BUILTINS[name](*args)


# --- validation -----------------------------------------------------------------

def violations(i: Interaction) -> List[Tuple[Pair, Pair, Pair]]:
    """Pairs p with phi(p) != p but phi_bar(phi(p)) != p, as (p, phi(p), phi_bar(phi(p)))."""
    out = []
    for p in i.pairs():
        q = i.phi(*p)
        if q != p:
            r = i.phi_bar(*q)
            if r != p:
                out.append((p, q, r))
    return out


def validate(i: Interaction) -> List[Tuple[Pair, Pair, Pair]]:
    """Empty list when (S, phi) is an interaction; raises nothing."""
    return violations(i)


def require_valid(i: Interaction) -> Interaction:
    bad = violations(i)
    if bad:
        lines = "; ".join(f"phi{p}={q} but phi_bar{q}={r}" for p, q, r in bad[:5])
        raise ValidationError(f"not an interaction: {lines}")
    return i


# --- conserved quantities -------------------------------------------------------

def conserved_basis(i: Interaction) -> List[Dict[str, Fraction]]:
    """Deterministic basis of Consv(S): RREF rows (first nonzero entry 1), states in given order."""
    idx = i.index
    n = i.n_states
    rows = []
    r = [0] * n
    r[idx[i.base]] = 1
    rows.append(r)
    for (a, b), (c, d) in i.table:
        r = [0] * n
        r[idx[a]] += 1
        r[idx[b]] += 1
        r[idx[c]] -= 1
        r[idx[d]] -= 1
        if any(r):
            rows.append(r)
    vecs = echelon_basis(nullspace(rows, n))
    return [{s: v[idx[s]] for s in i.states} for v in vecs]


def c_phi(i: Interaction) -> int:
    return len(conserved_basis(i))


def is_conserved(i: Interaction, xi: Dict[str, Fraction]) -> bool:
    if xi.get(i.base, 0) != 0:
        return False
    for (a, b) in i.pairs():
        c, d = i.phi(a, b)
        if xi[a] + xi[b] != xi[c] + xi[d]:
            return False
    return True


@dataclass
class SimplicityReport:
    simple: bool
    monoid: Optional[str]  # "N", "Z" or None
    c_phi: int
    integer_values: Optional[List[int]] = None
    note: str = ""

    def to_json(self):
        return {
            "simple": self.simple,
            "monoid": self.monoid,
            "c_phi": self.c_phi,
            "integer_values": self.integer_values,
            "note": self.note,
        }


def simplicity(i: Interaction) -> SimplicityReport:
    basis = conserved_basis(i)
    if len(basis) != 1:
        return SimplicityReport(False, None, len(basis), note=f"c_phi = {len(basis)} != 1")
    ints, _ = integer_content([basis[0][s] for s in i.states])
    nz = sorted({v for v in ints if v != 0})
    if any(v < 0 for v in nz) and any(v > 0 for v in nz):
        # a submonoid of Z containing elements of both signs is the subgroup gcd(values) Z = Z
        return SimplicityReport(True, "Z", 1, ints, "values of both signs generate the group Z")
    absvals = sorted(abs(v) for v in nz)
    if absvals[0] == 1:
        return SimplicityReport(True, "N", 1, ints, "one-signed values containing the unit generate N")
    return SimplicityReport(
        False,
        None,
        1,
        ints,
        f"near miss: the values {absvals} generate a numerical semigroup that is cofinite in N "
        "but is not isomorphic to N as a monoid",
    )


def is_simple(i: Interaction) -> bool:
    return simplicity(i).simple


def charge_of_state(i: Interaction, basis=None) -> Dict[str, Tuple[Fraction, ...]]:
    basis = conserved_basis(i) if basis is None else basis
    return {s: tuple(b[s] for b in basis) for s in i.states}


def charges_by_size(i: Interaction, kmax: int, basis=None) -> List[frozenset]:
    """M_0, ..., M_kmax: charge vectors realizable on k sites (nested increasing)."""
    cs = sorted(set(charge_of_state(i, basis).values()))
    zero = tuple(Fraction(0) for _ in (basis if basis is not None else conserved_basis(i)))
    levels = [frozenset([zero])]
    for _ in range(kmax):
        prev = levels[-1]
        levels.append(frozenset(tuple(a + b for a, b in zip(p, c)) for p in prev for c in cs))
    return levels


# --- irreducibility evidence ----------------------------------------------------

def path_locale(n: int) -> MultiGraph:
    return MultiGraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def cycle_locale(n: int) -> MultiGraph:
    return MultiGraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def default_locales(max_vertices: int = 4) -> List[Tuple[str, MultiGraph]]:
    out = []
    for n in range(2, max_vertices + 1):
        out.append((f"path_{n}", path_locale(n)))
        if n >= 3:
            out.append((f"cycle_{n}", cycle_locale(n)))
    return out


@dataclass
class LocaleVerdict:
    name: str
    n_configurations: int
    n_charge_classes: int
    n_components: int
    passed: bool
    witness: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None

    def to_json(self):
        return {
            "locale": self.name,
            "configurations": self.n_configurations,
            "charge_classes": self.n_charge_classes,
            "components": self.n_components,
            "verdict": "PASS" if self.passed else "FAIL",
            "witness": None if self.witness is None else [list(self.witness[0]), list(self.witness[1])],
        }


def locale_components(i: Interaction, g: MultiGraph) -> Dict[Tuple[str, ...], int]:
    """Component label of every configuration in S^V(g) under the transitions."""
    n = g.n_vertices
    configs = list(itertools.product(i.states, repeat=n))
    label: Dict[Tuple[str, ...], int] = {}
    comp = 0
    for c in configs:
        if c in label:
            continue
        label[c] = comp
        queue = deque([c])
        while queue:
            x = queue.popleft()
            for e in range(g.n_edges):
                o, t = g.origin[e], g.target[e]
                if o == t:
                    continue
                a, b = i.phi(x[o], x[t])
                if (a, b) != (x[o], x[t]):
                    y = list(x)
                    y[o], y[t] = a, b
                    y = tuple(y)
                    if y not in label:
                        label[y] = comp
                        queue.append(y)
        comp += 1
    return label


def irreducibility_evidence(
    i: Interaction, locales: Optional[Sequence[Tuple[str, MultiGraph]]] = None, cap: int = DEFAULT_CAP
) -> List[LocaleVerdict]:
    locales = default_locales() if locales is None else locales
    ch = charge_of_state(i)
    out = []
    for name, g in locales:
        if not is_connected(g):
            raise ValidationError(f"locale {name} is not connected")
        size = i.n_states ** g.n_vertices
        if size > cap:
            raise CapExceeded(f"locale {name} has {size} configurations (cap {cap})", estimate=size)
        label = locale_components(i, g)
        by_charge: Dict[tuple, Dict[int, Tuple[str, ...]]] = {}
        for c, comp in label.items():
            q = tuple(sum(vals) for vals in zip(*(ch[s] for s in c))) if c else ()
            by_charge.setdefault(q, {}).setdefault(comp, c)
        witness = None
        for q in sorted(by_charge):
            comps = by_charge[q]
            if len(comps) > 1:
                a, b = sorted(comps.values())[:2]
                witness = (a, b)
                break
        out.append(LocaleVerdict(name, len(label), len(by_charge), len(set(label.values())), witness is None, witness))
    return out


def evidence_passes(i: Interaction, locales=None, cap: int = DEFAULT_CAP) -> bool:
    return all(v.passed for v in irreducibility_evidence(i, locales, cap))

"""Exact linear algebra over Q (Fractions) and Z.

Everything here is dense-list or dict-of-rows based; matrices in this project
are small (conserved-quantity systems, rank checks) or extremely sparse
(configuration-graph incidence matrices).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Q = Fraction
SparseRow = Dict[int, Fraction]


def q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_q(x) -> str:
    x = q(x)
    return f"{x.numerator}/{x.denominator}"


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[q(v) for v in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column (free entry = 1)."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One solution of A x = b with free variables set to zero, or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def echelon_basis(vectors: Sequence[Sequence]) -> List[List[Fraction]]:
    """Canonical basis of a span: RREF rows (leading entry 1)."""
    if not vectors:
        return []
    return rref(vectors)[0]


def same_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    return echelon_basis(a) == echelon_basis(b)


# --- sparse elimination -------------------------------------------------------

def sparse_rref(rows: Iterable[SparseRow]) -> Dict[int, SparseRow]:
    """Row-reduce sparse rows; returns {pivot column: row with 1 at pivot}.

    Rows are fully reduced against earlier pivots as they arrive, then a final
    back-substitution pass makes the result reduced.
    """
    pivot_rows: Dict[int, SparseRow] = {}
    for row in rows:
        row = {c: q(v) for c, v in row.items() if v != 0}
        while row:
            hit = [c for c in row if c in pivot_rows]
            if not hit:
                break
            c = hit[0]
            f = row[c]
            for cc, vv in pivot_rows[c].items():
                nv = row.get(cc, 0) - f * vv
                if nv == 0:
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        if not row:
            continue
        pc = min(row)
        inv = 1 / row[pc]
        row = {c: v * inv for c, v in row.items()}
        pivot_rows[pc] = row
    # back substitution so that no pivot column appears in another pivot row
    for pc in sorted(pivot_rows, reverse=True):
        prow = pivot_rows[pc]
        for oc, orow in pivot_rows.items():
            if oc != pc and pc in orow:
                f = orow[pc]
                for cc, vv in prow.items():
                    nv = orow.get(cc, 0) - f * vv
                    if nv == 0:
                        orow.pop(cc, None)
                    else:
                        orow[cc] = nv
    return pivot_rows


def sparse_rank(rows: Iterable[SparseRow]) -> int:
    """Rank by forward elimination only (no back substitution).

    Integer entries stay integers while every pivot is +-1, which keeps
    incidence-like matrices cheap; anything else goes through Fraction.
    """
    pivot_rows: Dict[int, SparseRow] = {}
    for row in rows:
        row = {c: (v if isinstance(v, int) else q(v)) for c, v in row.items() if v != 0}
        while row:
            pc = min(row)
            if pc not in pivot_rows:
                lead = row[pc]
                if lead == 1:
                    pivot_rows[pc] = row
                elif lead == -1:
                    pivot_rows[pc] = {c: -v for c, v in row.items()}
                else:
                    inv = 1 / q(lead)
                    pivot_rows[pc] = {c: v * inv for c, v in row.items()}
                break
            f = row[pc]
            for cc, vv in pivot_rows[pc].items():
                nv = row.get(cc, 0) - f * vv
                if nv == 0:
                    row.pop(cc, None)
                else:
                    row[cc] = nv
    return len(pivot_rows)


def sparse_nullspace(rows: Iterable[SparseRow], ncols: int) -> List[SparseRow]:
    piv = sparse_rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    free_set = set(free)
    # column -> pivot rows that mention it
    uses: Dict[int, List[int]] = {}
    for pc, row in piv.items():
        for c in row:
            if c in free_set:
                uses.setdefault(c, []).append(pc)
    basis = []
    for fc in free:
        v = {fc: Fraction(1)}
        for pc in uses.get(fc, ()):
            v[pc] = -piv[pc][fc]
        basis.append(v)
    return basis


# --- integer lattices ---------------------------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Row-style HNF of the integer span of `rows` (nonzero rows only)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    out: List[List[int]] = []
    c = 0
    while m and c < ncols:
        nz = [r for r in m if r[c] != 0]
        rest = [r for r in m if r[c] == 0]
        if not nz:
            c += 1
            continue
        # Euclid on column c
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[c]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                k = r[c] // p[c]
                r2 = [a - k * b for a, b in zip(r, p)]
                if r2[c] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        p = nz[0]
        if p[c] < 0:
            p = [-a for a in p]
        for i, r in enumerate(out):
            k = r[c] // p[c]
            out[i] = [a - k * b for a, b in zip(r, p)]
        out.append(p)
        m = [r for r in rest if any(r)]
        c += 1
    return out


def generates_full_lattice(vectors: Sequence[Sequence[int]], d: int) -> Tuple[bool, int]:
    """Do the integer vectors generate Z^d?  Returns (flag, index or 0 if rank < d)."""
    h = hermite_normal_form(vectors, d)
    if len(h) < d:
        return False, 0
    index = 1
    for i, r in enumerate(h):
        lead = next(v for v in r if v != 0)
        index *= abs(lead)
    return index == 1, index


def integer_content(values: Iterable[Fraction]) -> Tuple[List[int], Fraction]:
    """Scale rationals to coprime integers: returns (ints, scale) with value = int * scale."""
    vals = [q(v) for v in values]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for i in ints:
        g = gcd(g, i)
    if g == 0:
        return ints, Fraction(1)
    return [i // g for i in ints], Fraction(g, den)

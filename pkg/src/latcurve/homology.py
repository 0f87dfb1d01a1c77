"""Sublevel cubical complexes of the weight function and their integer
homology.

The ambient complex is the unit-cube decomposition of R(0, bound); a cube
is (base, dirs) with dirs a bitmask of spanned axes, and it belongs to
the sublevel complex S_n iff every vertex has weight <= n.  Homology is
computed from sparse integer boundary matrices via Smith reduction;
U-map ranks (induced by S_n into S_{n+1}) come from the long exact
sequence of the pair, so only matrix ranks are ever needed.

Everything is computed inside the conductor rectangle R(0, c): for
n fixed, the inclusion of S_n cap R(0, c) into S_n is a homotopy
equivalence, so these finite complexes carry the full lattice homology.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import EulerMismatch, MarginTooSmall
from .lattice import Point, WeightGrid, leq, norm
from .snf import smith_invariants

Cube = tuple[Point, int]  # (base point, direction bitmask)


def cube_dim(cube: Cube) -> int:
    return bin(cube[1]).count("1")


def cube_vertices(cube: Cube):
    base, mask = cube
    dirs = [i for i in range(len(base)) if mask >> i & 1]
    for sub in range(1 << len(dirs)):
        v = list(base)
        for k, i in enumerate(dirs):
            if sub >> k & 1:
                v[i] += 1
        yield tuple(v)


@dataclass
class SublevelComplex:
    """All cubes of weight <= level inside R(0, bound)."""

    level: int
    r: int
    bound: Point
    cells: dict = field(repr=False)  # dim -> list of Cube, lexicographic

    def cell_set(self) -> set:
        return {c for cubes in self.cells.values() for c in cubes}

    def n_cells(self, k: int) -> int:
        return len(self.cells.get(k, ()))

    def is_subcomplex_of(self, other: "SublevelComplex") -> bool:
        mine = self.cell_set()
        theirs = other.cell_set()
        return mine <= theirs


def _cube_max_tables(values: np.ndarray, r: int) -> dict[int, np.ndarray]:
    """tables[mask] = max of w over the corners of the cube (base, mask),
    indexed by base; the array shape shrinks by one along each spanned
    axis."""
    tables = {0: values}
    for mask in range(1, 1 << r):
        low = mask & (mask - 1)
        axis = (mask ^ low).bit_length() - 1
        prev = tables[low]
        lo = tuple(slice(0, -1) if i == axis else slice(None) for i in range(r))
        hi = tuple(slice(1, None) if i == axis else slice(None) for i in range(r))
        tables[mask] = np.maximum(prev[lo], prev[hi])
    return tables


def sublevel_complex(w: WeightGrid, n: int, bound: Point | None = None) -> SublevelComplex:
    """The full subcomplex S_n on the vertices of weight <= n.

    ``bound`` defaults to the conductor rectangle when the grid knows its
    conductor (valid because the inclusion into the full S_n is a
    homotopy equivalence), else to the grid bound.
    """
    if bound is None:
        bound = w.conductor if w.conductor is not None else w.bound
    if not leq(bound, w.bound):
        raise MarginTooSmall(f"requested bound {bound} exceeds grid {w.bound}")
    r = w.r
    values = w.values[tuple(slice(0, b + 1) for b in bound)]
    tables = _cube_max_tables(values, r)
    cells: dict[int, list[Cube]] = {}
    for mask in range(1 << r):
        k = bin(mask).count("1")
        hits = np.argwhere(tables[mask] <= n)
        if hits.size:
            cells.setdefault(k, []).extend(
                (tuple(int(x) for x in row), mask) for row in hits
            )
    for k in cells:
        cells[k].sort()
    return SublevelComplex(level=n, r=r, bound=bound, cells=cells)


def boundary(cube: Cube):
    """Signed faces of a cube: alternating signs along the sorted spanned
    axes, upper face minus lower face."""
    base, mask = cube
    out = []
    sign = 1
    m = mask
    while m:
        low = m & (m - 1)
        axis = (m ^ low).bit_length() - 1
        rest = mask ^ (1 << axis)
        upper = tuple(b + 1 if i == axis else b for i, b in enumerate(base))
        out.append(((upper, rest), sign))
        out.append(((base, rest), -sign))
        sign = -sign
        m = low
    return out


def _chain_data(cells: dict, dropped: set | None = None):
    """Index maps and boundary columns for a (relative) chain complex."""
    index = {}
    for k, cubes in cells.items():
        for pos, c in enumerate(cubes):
            index[c] = (k, pos)
    cols = {}
    for k, cubes in cells.items():
        if k == 0:
            continue
        mats = []
        for c in cubes:
            col = {}
            for face, s in boundary(c):
                if dropped is not None and face in dropped:
                    continue
                fk, fpos = index[face]
                col[fpos] = col.get(fpos, 0) + s
            mats.append(col)
        cols[k] = mats
    return cols


def homology(cx: SublevelComplex):
    """[(rank, torsion list)] for k = 0..r of a sublevel complex."""
    cols = _chain_data(cx.cells)
    ranks = {}
    torsions = {}
    for k, mats in cols.items():
        rank, tors = smith_invariants(mats)
        ranks[k] = rank
        torsions[k] = tors
    out = []
    for k in range(cx.r + 1):
        nk = cx.n_cells(k)
        bk = nk - ranks.get(k, 0) - ranks.get(k + 1, 0)
        out.append((bk, torsions.get(k + 1, [])))
    return out


def relative_homology(cx: SublevelComplex, sub: SublevelComplex):
    """Homology of the relative chain complex of the pair (cx, sub)."""
    sub_cells = sub.cell_set()
    all_cells = cx.cell_set()
    if not sub_cells <= all_cells:
        raise ValueError("second complex is not a subcomplex of the first")
    rel = {}
    for k, cubes in cx.cells.items():
        keep = [c for c in cubes if c not in sub_cells]
        if keep:
            rel[k] = keep
    cols = _chain_data(rel, dropped=sub_cells)
    ranks = {}
    torsions = {}
    for k, mats in cols.items():
        rank, tors = smith_invariants(mats)
        ranks[k] = rank
        torsions[k] = tors
    out = []
    for k in range(cx.r + 1):
        nk = len(rel.get(k, ()))
        bk = nk - ranks.get(k, 0) - ranks.get(k + 1, 0)
        out.append((bk, torsions.get(k + 1, [])))
    return out


@dataclass
class HomologyReport:
    """Per-level homology of the weight filtration.

    ``table[n]`` lists (free rank, torsion) for k = 0..r-1; levels run
    from the minimal weight to the maximal weight on R(0, c), above which
    every S_n is contractible.  ``u_ranks[(k, n)]`` is the rank of the
    map H_k(S_n) -> H_k(S_{n+1}).
    """

    r: int
    n_min: int
    n_top: int
    table: dict = field(repr=False)
    u_ranks: dict = field(repr=False)

    def betti(self, k: int, n: int) -> int:
        if n < self.n_min or k >= self.r:
            return 0
        if n > self.n_top:
            return 1 if k == 0 else 0
        return self.table[n][k][0]

    def torsion(self, k: int, n: int):
        if self.n_min <= n <= self.n_top and k < self.r:
            return self.table[n][k][1]
        return []

    def total_rank(self, k: int) -> int:
        """Rank of the direct sum over all levels (finite for k >= 1;
        for k = 0 only the levels up to contractibility are counted)."""
        return sum(self.table[n][k][0] for n in self.table)

    def u_rank(self, k: int, n: int) -> int:
        if n >= self.n_top:
            return 1 if k == 0 else 0
        if n < self.n_min:
            return 0
        return self.u_ranks.get((k, n), 0)

    def rank_table(self):
        """Canonical comparable form: {(k, n): rank} with zeros dropped."""
        out = {}
        for n, row in self.table.items():
            for k, (rank, _) in enumerate(row):
                if rank:
                    out[(k, n)] = rank
        return out


def _u_ranks_from_betti(b_low, b_high, b_rel, r):
    """Ranks of H_k(X) -> H_k(Y) from absolute and relative Betti numbers
    via the long exact sequence of the pair (Y, X)."""
    out = [0] * (r + 2)
    for k in range(r, -1, -1):
        nxt = out[k + 1] if k + 1 <= r + 1 else 0
        rel = b_rel[k + 1] if k + 1 < len(b_rel) else 0
        hi = b_high[k + 1] if k + 1 < len(b_high) else 0
        out[k] = b_low[k] - rel + hi - nxt
    return out[: r + 1]


def min_weight(w: WeightGrid) -> int:
    """min w over R(0, c), which equals the global minimum."""
    if w.conductor is None:
        raise MarginTooSmall("weight grid has no conductor")
    sub = w.values[tuple(slice(0, ci + 1) for ci in w.conductor)]
    return int(sub.min())


def max_weight_conductor_box(w: WeightGrid) -> int:
    if w.conductor is None:
        raise MarginTooSmall("weight grid has no conductor")
    sub = w.values[tuple(slice(0, ci + 1) for ci in w.conductor)]
    return int(sub.max())


def lattice_homology(w: WeightGrid, threads: int | None = None) -> HomologyReport:
    """Homology of every sublevel complex plus U-map ranks.

    Levels are independent;  LATCURVE_THREADS (or ``threads``) > 1 runs
    them on a thread pool, results assembled deterministically after the
    join.
    """
    if threads is None:
        threads = int(os.environ.get("LATCURVE_THREADS", "1") or "1")
    n_min = min_weight(w)
    n_top = max_weight_conductor_box(w)
    levels = list(range(n_min, n_top + 1))
    complexes = {n: sublevel_complex(w, n) for n in levels}

    def absolute(n):
        return homology(complexes[n])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(zip(levels, pool.map(absolute, levels)))
    else:
        results = {n: absolute(n) for n in levels}
    # stabilization guard; also b_k = 0 for k >= r on every level
    top = results[n_top]
    if top[0][0] != 1 or any(rank for rank, _ in top[1:]):
        raise EulerMismatch(
            f"S_{n_top} is not contractible-like; weight data is inconsistent"
        )
    for n, res in results.items():
        if res[w.r][0] != 0 or res[w.r][1]:
            raise EulerMismatch(f"H_{w.r}(S_{n}) nonzero; impossible in R^{w.r}")
    u_ranks = {}
    for n in levels[:-1]:
        b_low = [rank for rank, _ in results[n]]
        b_high = [rank for rank, _ in results[n + 1]]
        rel = relative_homology(complexes[n + 1], complexes[n])
        b_rel = [rank for rank, _ in rel]
        ranks = _u_ranks_from_betti(b_low, b_high, b_rel, w.r)
        for k in range(w.r):
            u_ranks[(k, n)] = ranks[k]
    table = {n: [(res[k][0], res[k][1]) for k in range(w.r)] for n, res in results.items()}
    return HomologyReport(r=w.r, n_min=n_min, n_top=n_top, table=table, u_ranks=u_ranks)


def euler_characteristic(report: HomologyReport, w: WeightGrid) -> int:
    """Euler characteristic normalization validated against delta.

    eu = -min w + sum over levels of the reduced alternating Betti sum;
    a mismatch with delta = (|c| - w(c)) / 2 is a hard error.
    """
    eu = -report.n_min
    for n in report.table:
        row = report.table[n]
        eu += row[0][0] - 1
        for k in range(1, len(row)):
            eu += (-1) ** k * row[k][0]
    c = w.conductor
    if c is None:
        raise MarginTooSmall("weight grid has no conductor")
    d = (norm(c) - w.w(c)) // 2
    if eu != d:
        raise EulerMismatch(f"euler characteristic {eu} != delta {d}")
    return eu

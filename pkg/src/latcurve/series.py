"""Multivariate integer polynomials, rational series, and the translation
between subcurve Poincare series and the Hilbert grid.

A rational series is carried exactly as numerator polynomial plus a list
of denominator factors (1 - t^v); expansion on a rectangle is exact
integer arithmetic, each factor contributing one running-sum pass.

The reconstruction of the Hilbert series from the Poincare series of all
subcurves is

    H(t) = [ sum over nonempty J of (-1)^(|J|-1) t^(e_J) P_J(t_J) ]
           / prod_i (1 - t_i),

and the inverse direction recovers the Poincare coefficients as the
alternating sum p(l) = sum_J (-1)^(|J|+1) h(l + e_J).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSeries, MarginTooSmall
from .lattice import HilbertGrid, Point, Rectangle, leq

Subset = tuple[int, ...]  # sorted 1-based branch indices


@dataclass(frozen=True)
class MultiPoly:
    """Integer polynomial in r variables, sparse exponent -> coefficient."""

    r: int
    terms: tuple = field(default=())  # tuple of (exponent Point, coeff)

    @staticmethod
    def from_dict(r: int, d: dict[Point, int]) -> "MultiPoly":
        items = []
        for e, c in sorted(d.items()):
            if c == 0:
                continue
            if len(e) != r or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for r={r}")
            items.append((tuple(e), int(c)))
        return MultiPoly(r=r, terms=tuple(items))

    def as_dict(self) -> dict[Point, int]:
        return dict(self.terms)

    def embed(self, positions: Subset, r: int) -> "MultiPoly":
        """View a |J|-variable polynomial inside N^r at the given 1-based
        coordinate positions."""
        out = {}
        for e, c in self.terms:
            full = [0] * r
            for x, j in zip(e, positions):
                full[j - 1] = x
            out[tuple(full)] = c
        return MultiPoly.from_dict(r, out)


@dataclass(frozen=True)
class RationalSeries:
    """numerator / prod (1 - t^v) with each v a nonzero exponent vector."""

    numerator: MultiPoly
    denominator: tuple = ()  # tuple of Points

    def __post_init__(self):
        for v in self.denominator:
            if all(x == 0 for x in v) or any(x < 0 for x in v):
                raise ValueError(f"bad denominator exponent {v}")

    @property
    def r(self) -> int:
        return self.numerator.r

    def embed(self, positions: Subset, r: int) -> "RationalSeries":
        num = self.numerator.embed(positions, r)
        den = tuple(
            tuple(
                sum(x for x, j in zip(v, positions) if j - 1 == i)
                for i in range(r)
            )
            for v in self.denominator
        )
        return RationalSeries(numerator=num, denominator=den)


def poly(r: int, d: dict) -> MultiPoly:
    return MultiPoly.from_dict(r, {tuple(k): v for k, v in d.items()})


def geometric(r: int, *exps: Point) -> RationalSeries:
    """1 / prod (1 - t^v) for the given exponent vectors."""
    return RationalSeries(numerator=poly(r, {(0,) * r: 1}), denominator=tuple(exps))


def expand(series: RationalSeries, target: Rectangle | Point) -> np.ndarray:
    """Exact power-series coefficients of the series on R(0, hi).

    When a Rectangle with nonzero lo is given, the full box from the
    origin is computed and the sub-box view returned.
    """
    if isinstance(target, Rectangle):
        hi, lo = target.hi, target.lo
    else:
        hi, lo = tuple(target), (0,) * len(target)
    r = series.r
    shape = tuple(x + 1 for x in hi)
    a = np.zeros(shape, dtype=np.int64)
    for e, c in series.numerator.terms:
        if leq(e, hi):
            a[e] += c
    for v in series.denominator:
        if sum(1 for x in v if x) == 1:
            axis = next(i for i, x in enumerate(v) if x)
            k = v[axis]
            # multiply by sum_j t_axis^(j*k): strided running sum
            n = shape[axis]
            sl = [slice(None)] * r
            for pos in range(k, n):
                dst, src = list(sl), list(sl)
                dst[axis], src[axis] = pos, pos - k
                a[tuple(dst)] += a[tuple(src)]
        else:
            for idx in np.ndindex(shape):
                if all(i >= x for i, x in zip(idx, v)):
                    prev = tuple(i - x for i, x in zip(idx, v))
                    a[idx] += a[prev]
    if lo != (0,) * r:
        return a[tuple(slice(l, None) for l in lo)]
    return a


def all_nonempty_subsets(r: int):
    for size in range(1, r + 1):
        yield from itertools.combinations(range(1, r + 1), size)


def hilbert_from_poincare(
    subseries: dict[Subset, RationalSeries], bound: Point, r: int | None = None
) -> HilbertGrid:
    """Hilbert grid on R(0, bound) from the Poincare series of every
    nonempty branch subset.

    Raises InvalidSeries when the inputs are inconsistent (the resulting
    grid violates a Hilbert-function invariant).
    """
    table = {tuple(sorted(k)): v for k, v in subseries.items()}
    if r is None:
        r = len(max(table, key=len))
    missing = [J for J in all_nonempty_subsets(r) if J not in table]
    if missing:
        raise InvalidSeries(f"missing subcurve series for branch subsets {missing}")
    shape = tuple(b + 1 for b in bound)
    num = np.zeros(shape, dtype=np.int64)
    for J in all_nonempty_subsets(r):
        s = table[J]
        coeffs = expand(s.embed(J, r), bound)
        sign = -1 if len(J) % 2 == 0 else 1
        shift = tuple(1 if (i + 1) in J else 0 for i in range(r))
        dst = tuple(slice(x, None) for x in shift)
        src = tuple(slice(0, shape[i] - shift[i]) for i in range(r))
        num[dst] += sign * coeffs[src]
    # divide by prod (1 - t_i): cumulative sums
    for axis in range(r):
        np.cumsum(num, axis=axis, out=num)
    grid = HilbertGrid(r=r, bound=tuple(bound), values=num)
    try:
        grid.validate()
    except Exception as exc:
        raise InvalidSeries(f"series inputs produce an invalid Hilbert grid: {exc}")
    return grid


def poincare_from_hilbert(h: HilbertGrid, conductor: Point | None = None) -> MultiPoly:
    """Poincare coefficients p(l) = sum_J (-1)^(|J|+1) h(l+e_J) on
    R(0, bound - e)."""
    r = h.r
    if any(b < 1 for b in h.bound):
        raise MarginTooSmall("need at least one unit of margin in every axis")
    if conductor is not None and not leq(
        tuple(c + 1 for c in conductor), h.bound
    ):
        raise MarginTooSmall(
            f"support may be truncated: bound {h.bound} < conductor {conductor} + e"
        )
    # p = (-1)^(r+1) * (forward difference in every axis)
    diff = h.values.astype(np.int64)
    for axis in range(r):
        lo = tuple(slice(0, -1) if j == axis else slice(None) for j in range(r))
        hi = tuple(slice(1, None) if j == axis else slice(None) for j in range(r))
        diff = diff[hi] - diff[lo]
    out = {}
    for idx in np.argwhere(diff):
        p = tuple(int(x) for x in idx)
        out[p] = int(diff[p]) if r % 2 == 1 else -int(diff[p])
    return MultiPoly.from_dict(r, out)

"""Germ descriptors (declarative input) and the built model that bundles
the derived grids.

A descriptor names the germ by exactly one source:

* ``semigroup``: conductor plus the member list inside R(0, c),
* ``poincare``: a rational series for every nonempty branch subset,
* ``hilbert``: an explicit grid of Hilbert values,
* ``builtin``: a catalog name with parameters.

Descriptors round-trip through a small JSON schema (see README).  The
model owns the semigroup table, Hilbert grid and weight grid on a common
bound, can enlarge that bound on demand, and extracts subcurve models by
restriction to coordinate faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DescriptorError, MarginTooSmall
from .lattice import (
    HilbertGrid,
    Point,
    SemigroupTable,
    WeightGrid,
    delta as delta_of,
    extend_semigroup,
    gorenstein_symmetry,
    hilbert_from_semigroup,
    leq,
    ones,
    padd,
    pmax,
    restrict_to_subcurve,
    scale,
    semigroup_from_hilbert,
    semigroup_from_low_points,
    weight_from_hilbert,
)
from .series import MultiPoly, RationalSeries, hilbert_from_poincare

SCHEMA_VERSION = 1
_MAX_REBUILDS = 3


def _box_points(hi: Point):
    import itertools

    return itertools.product(*[range(x + 1) for x in hi])


@dataclass(frozen=True)
class GermDescriptor:
    """Declarative description of a reduced curve germ."""

    r: int
    kind: str  # semigroup | poincare | hilbert | builtin
    payload: object
    name: str | None = None
    plane: bool | None = None
    gorenstein: bool | None = None
    bound: Point | None = None

    def to_json_dict(self) -> dict:
        src: dict
        if self.kind == "semigroup":
            c, elements = self.payload
            src = {
                "kind": "semigroup",
                "conductor": list(c),
                "elements": [list(p) for p in elements],
            }
        elif self.kind == "poincare":
            series = {}
            for J, s in sorted(self.payload.items()):
                series[",".join(str(j) for j in J)] = {
                    "numerator": [
                        {"exp": list(e), "coeff": c} for e, c in s.numerator.terms
                    ],
                    "denominator": [list(v) for v in s.denominator],
                }
            src = {"kind": "poincare", "series": series}
        elif self.kind == "hilbert":
            bound, values = self.payload
            src = {
                "kind": "hilbert",
                "bound": list(bound),
                "values": np.asarray(values).reshape(-1).tolist(),
            }
        elif self.kind == "builtin":
            name, params = self.payload
            src = {"kind": "builtin", "name": name, "params": list(params)}
        else:
            raise DescriptorError(f"unknown source kind {self.kind!r}")
        return {
            "version": SCHEMA_VERSION,
            "germ": self.name,
            "r": self.r,
            "source": src,
            "flags": {"plane": self.plane, "gorenstein": self.gorenstein},
            "bound": list(self.bound) if self.bound else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"


def _expect(cond, msg):
    if not cond:
        raise DescriptorError(msg)


def descriptor_from_json_dict(doc: dict) -> GermDescriptor:
    _expect(isinstance(doc, dict), "descriptor must be a JSON object")
    _expect(doc.get("version") == SCHEMA_VERSION, "unsupported descriptor version")
    r = doc.get("r")
    _expect(isinstance(r, int) and r >= 1, "field 'r' must be a positive integer")
    src = doc.get("source")
    _expect(isinstance(src, dict) and "kind" in src, "missing source.kind")
    kind = src["kind"]
    flags = doc.get("flags") or {}
    bound = tuple(doc["bound"]) if doc.get("bound") else None
    name = doc.get("germ")
    if kind == "semigroup":
        _expect("conductor" in src and "elements" in src, "semigroup source needs conductor and elements")
        c = tuple(int(x) for x in src["conductor"])
        _expect(len(c) == r, "conductor length != r")
        elements = [tuple(int(x) for x in p) for p in src["elements"]]
        payload = (c, elements)
    elif kind == "poincare":
        series = {}
        _expect(isinstance(src.get("series"), dict), "poincare source needs 'series'")
        for key, body in src["series"].items():
            J = tuple(int(x) for x in key.split(","))
            terms = {
                tuple(t["exp"]): int(t["coeff"]) for t in body.get("numerator", [])
            }
            num = MultiPoly.from_dict(len(J), terms)
            den = tuple(tuple(int(x) for x in v) for v in body.get("denominator", []))
            series[J] = RationalSeries(numerator=num, denominator=den)
        payload = series
    elif kind == "hilbert":
        _expect("bound" in src and "values" in src, "hilbert source needs bound and values")
        b = tuple(int(x) for x in src["bound"])
        shape = tuple(x + 1 for x in b)
        values = np.asarray(src["values"], dtype=np.int64).reshape(shape)
        payload = (b, values)
    elif kind == "builtin":
        _expect("name" in src, "builtin source needs a name")
        payload = (str(src["name"]), tuple(src.get("params") or ()))
    else:
        raise DescriptorError(f"unknown source kind {kind!r}")
    return GermDescriptor(
        r=r,
        kind=kind,
        payload=payload,
        name=name,
        plane=flags.get("plane"),
        gorenstein=flags.get("gorenstein"),
        bound=bound,
    )


def descriptor_from_json(text: str) -> GermDescriptor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(
            f"descriptor parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        )
    return descriptor_from_json_dict(doc)


@dataclass
class GermModel:
    """All derived grids of one germ on a shared bound."""

    descriptor: GermDescriptor
    r: int
    semigroup: SemigroupTable
    hilbert: HilbertGrid
    weight: WeightGrid
    name: str | None = None
    _subcurves: dict = field(default_factory=dict, repr=False)
    _caches: dict = field(default_factory=dict, repr=False)

    # -- invariants ------------------------------------------------------

    @property
    def bound(self) -> Point:
        return self.hilbert.bound

    @property
    def conductor(self) -> Point:
        return self.semigroup.conductor

    @property
    def multiplicity(self) -> Point:
        return self.weight.multiplicity

    @property
    def delta(self) -> int:
        return delta_of(self.hilbert, self.conductor)

    @property
    def min_w(self) -> int:
        sub = self.weight.values[tuple(slice(0, c + 1) for c in self.conductor)]
        return int(sub.min())

    @property
    def max_w_conductor_box(self) -> int:
        sub = self.weight.values[tuple(slice(0, c + 1) for c in self.conductor)]
        return int(sub.max())

    @property
    def is_gorenstein(self) -> bool:
        return gorenstein_symmetry(self.weight, self.conductor)

    @property
    def plane(self) -> bool:
        return bool(self.descriptor.plane)

    # -- bound management ------------------------------------------------

    def default_bound(self) -> Point:
        c, m = self.conductor, self.multiplicity
        return padd(pmax(c, scale(2, m)), scale(2, ones(self.r)))

    def ensure_bound(self, requested: Point) -> "GermModel":
        """Grow the grids so the bound dominates ``requested``."""
        if leq(requested, self.bound):
            return self
        new_bound = pmax(self.bound, requested)
        table = extend_semigroup(self._low_table(), new_bound)
        h = hilbert_from_semigroup(table)
        w = weight_from_hilbert(h, semigroup=table)
        self.semigroup, self.hilbert, self.weight = table, h, w
        self._subcurves.clear()
        self._caches.clear()
        return self

    def _low_table(self) -> SemigroupTable:
        c = self.conductor
        return semigroup_from_low_points(self.r, c, self.semigroup.low_points())

    # -- subcurves ---------------------------------------------------------

    def subcurve(self, branches) -> "GermModel":
        """Model of the union of the given branches (1-based indices)."""
        J = tuple(sorted(set(branches)))
        if J == tuple(range(1, self.r + 1)):
            return self
        if J in self._subcurves:
            return self._subcurves[J]
        face_h = restrict_to_subcurve(self.hilbert, J)
        table = semigroup_from_hilbert(face_h)
        desc = GermDescriptor(
            r=len(J),
            kind="semigroup",
            payload=(table.conductor, table.low_points()),
            name=f"{self.name or 'germ'}|{','.join(map(str, J))}",
            plane=None,
            gorenstein=None,
        )
        sub = build_model(desc)
        self._subcurves[J] = sub
        return sub

    def branch(self, i: int) -> "GermModel":
        return self.subcurve((i,))

    def complement(self, i: int) -> "GermModel":
        """The union of every branch except the i-th."""
        return self.subcurve(tuple(j for j in range(1, self.r + 1) if j != i))

    def gorenstein_motivic_check(self) -> bool:
        """Functional equation of the motivic numerator.

        Gated: only meaningful for Gorenstein germs, so a germ whose
        weight table is not symmetric is rejected outright.
        """
        from .errors import InconsistentInput
        from .motivic import gorenstein_functional_check, motivic_coeff

        if not self.is_gorenstein:
            raise InconsistentInput(
                "precondition unmet: the germ is not Gorenstein "
                "(weight symmetry fails)"
            )
        outer = padd(self.conductor, ones(self.r))
        self.ensure_bound(padd(outer, ones(self.r)))
        coeffs = {}
        for p in _box_points(outer):
            coeffs[p] = motivic_coeff(self.hilbert, p)
        return gorenstein_functional_check(
            coeffs, self.conductor, self.delta, outer=outer
        )


def _resolve_bound(desc: GermDescriptor, canonical: Point, c: Point, extra: Point | None) -> Point:
    # user override wins but is never allowed below c + e; a programmatic
    # minimum (classifier probes) is always honored
    want = pmax(desc.bound, padd(c, ones(desc.r))) if desc.bound else canonical
    if extra is not None:
        want = pmax(want, extra)
    return want


def _build_from_semigroup(desc: GermDescriptor, bound: Point | None) -> GermModel:
    c, elements = desc.payload
    small = semigroup_from_low_points(desc.r, c, elements)
    m = small.multiplicity()
    canonical = padd(pmax(c, scale(2, m)), scale(2, ones(desc.r)))
    want = _resolve_bound(desc, canonical, c, bound)
    table = extend_semigroup(small, want)
    h = hilbert_from_semigroup(table)
    w = weight_from_hilbert(h, semigroup=table)
    return GermModel(
        descriptor=desc, r=desc.r, semigroup=table, hilbert=h, weight=w, name=desc.name
    )


def _build_from_hilbert(desc: GermDescriptor, bound: Point | None) -> GermModel:
    b, values = desc.payload
    h = HilbertGrid(r=desc.r, bound=b, values=np.asarray(values, dtype=np.int64))
    h.validate()
    table = semigroup_from_hilbert(h)
    # promote to the semigroup pipeline so the bound can grow on demand
    low = semigroup_from_low_points(desc.r, table.conductor, table.low_points())
    model = _build_from_semigroup(
        replace(
            desc,
            kind="semigroup",
            payload=(table.conductor, low.low_points()),
        ),
        bound=pmax(b, bound) if bound is not None else b,
    )
    # the source grid must agree with the rebuilt one where both exist
    common = tuple(slice(0, min(a, c) + 1) for a, c in zip(b, model.bound))
    if not np.array_equal(model.hilbert.values[common], h.values[common]):
        raise DescriptorError("hilbert grid is inconsistent with its own semigroup")
    model.descriptor = desc
    return model


def _build_from_poincare(desc: GermDescriptor, bound: Point | None) -> GermModel:
    """Expand the series on a growing grid until the detected conductor
    reaches a fixed point with three spare layers (a truncated grid can
    make a too-small candidate look stable, so one detection pass is
    never trusted)."""
    series = desc.payload
    guess = desc.bound or bound or (8,) * desc.r
    prev_c = None
    last_exc = None
    for _ in range(2 * _MAX_REBUILDS + 2):
        try:
            h = hilbert_from_poincare(series, guess, desc.r)
            table = semigroup_from_hilbert(h)
        except MarginTooSmall as exc:
            last_exc = exc
            prev_c = None
            guess = tuple(2 * g + 1 for g in guess)
            continue
        c, m = table.conductor, table.multiplicity()
        canonical = padd(pmax(c, scale(2, m)), scale(2, ones(desc.r)))
        want = pmax(
            _resolve_bound(desc, canonical, c, bound),
            padd(c, scale(3, ones(desc.r))),
        )
        if leq(want, guess) and c == prev_c:
            w = weight_from_hilbert(h, semigroup=table)
            return GermModel(
                descriptor=desc,
                r=desc.r,
                semigroup=table,
                hilbert=h,
                weight=w,
                name=desc.name,
            )
        prev_c = c
        guess = pmax(guess, want)
    raise MarginTooSmall(
        f"could not stabilize the conductor after repeated rebuilds: {last_exc}"
    )


def build_model(desc: GermDescriptor, bound: Point | None = None) -> GermModel:
    """Construct the grids for a descriptor (growing past margin errors)."""
    if desc.kind == "builtin":
        from . import catalog

        name, params = desc.payload
        entry = catalog.get_entry(name, *params)
        inner = replace(
            entry.descriptor,
            bound=desc.bound or entry.descriptor.bound,
            plane=desc.plane if desc.plane is not None else entry.descriptor.plane,
        )
        model = build_model(inner, bound=bound)
        model.descriptor = inner
        return model
    if desc.kind == "semigroup":
        return _build_from_semigroup(desc, bound)
    if desc.kind == "hilbert":
        return _build_from_hilbert(desc, bound)
    if desc.kind == "poincare":
        return _build_from_poincare(desc, bound)
    raise DescriptorError(f"unknown source kind {desc.kind!r}")

"""Finite dynamical models, covers, and the cover algebra.

A Model is a finite point set with a (possibly multivalued, possibly
partial) transition relation.  A Cover is a named finite family of point
subsets.  Joins, preimage covers and iterated joins implement the usual
open-cover calculus; all values are immutable and every operation is a
pure function of its inputs.

Covers produced by operations are normalised to maximal antichains:
duplicate subsets are merged (first name wins) and subsets strictly
contained in another element are dropped.  This keeps the join
idempotent, associative and commutative on the level of element sets and
never changes minimal subcover counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ModelMismatchError


@dataclass(frozen=True)
class Model:
    """Finite point set with a transition relation (successor sets)."""

    points: tuple
    transition: dict
    label: str = ""

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise ValueError("model needs at least one point")
        if len(set(points)) != len(points):
            raise ValueError("duplicate point identifiers")
        pointset = set(points)
        trans = {}
        for p in points:
            succ = frozenset(self.transition.get(p, ()))
            if not succ <= pointset:
                bad = sorted(map(repr, succ - pointset))
                raise ValueError(f"successors of {p!r} outside the point set: {bad}")
        # normalise: every point gets an entry
        for p in points:
            trans[p] = frozenset(self.transition.get(p, ()))
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "transition", trans)

    @property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def successors(self, p) -> frozenset:
        return self.transition[p]

    def is_total(self) -> bool:
        return all(self.transition[p] for p in self.points)

    def image(self, subset: Iterable) -> frozenset:
        """f(S): union of successor sets (existential image)."""
        out = set()
        for p in subset:
            out |= self.transition[p]
        return frozenset(out)

    def preimage(self, subset: Iterable) -> frozenset:
        """f^-1(S) existentially: points with some successor in S."""
        s = frozenset(subset)
        return frozenset(p for p in self.points if self.transition[p] & s)

    def preimage_universal(self, subset: Iterable) -> frozenset:
        """Points whose whole (nonempty) successor set lies inside S."""
        s = frozenset(subset)
        return frozenset(
            p for p in self.points if self.transition[p] and self.transition[p] <= s
        )

    def __eq__(self, other):
        return (
            isinstance(other, Model)
            and self.points == other.points
            and self.transition == other.transition
        )

    def __hash__(self):
        return hash(self.points)


@dataclass(frozen=True)
class Cover:
    """Named family of point subsets over a Model.

    The is_cover flag records whether the union equals the point set;
    preimage families of partial relations may legitimately fail to
    cover, and downstream entropy operations reject them.
    """

    model: Model
    elements: tuple

    def __post_init__(self):
        elems = []
        names = set()
        pointset = self.model.point_set
        for name, subset in self.elements:
            subset = frozenset(subset)
            if not subset:
                raise ValueError(f"cover element {name!r} is empty")
            if not subset <= pointset:
                raise ValueError(f"cover element {name!r} uses unknown points")
            if name in names:
                raise ValueError(f"duplicate cover element name {name!r}")
            names.add(name)
            elems.append((name, subset))
        object.__setattr__(self, "elements", tuple(elems))

    @cached_property
    def is_cover(self) -> bool:
        union = set()
        for _, s in self.elements:
            union |= s
        return union == set(self.model.points)

    def __len__(self):
        return len(self.elements)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.elements)

    @property
    def sets(self) -> tuple[frozenset, ...]:
        return tuple(s for _, s in self.elements)

    def element(self, name: str) -> frozenset:
        for n, s in self.elements:
            if n == name:
                return s
        raise KeyError(name)

    def set_family(self) -> frozenset:
        """Element sets as a frozenset, for equality up to names."""
        return frozenset(s for _, s in self.elements)


def cover(model: Model, spec) -> Cover:
    """Build a Cover from a mapping name -> points or a list of subsets."""
    if isinstance(spec, Mapping):
        pairs = [(str(k), v) for k, v in spec.items()]
    else:
        pairs = []
        for i, item in enumerate(spec):
            if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], str):
                pairs.append(item)
            else:
                pairs.append((f"U{i}", item))
    return Cover(model, tuple((n, frozenset(v)) for n, v in pairs))


def _normalise(candidates: list[tuple[str, frozenset]]) -> tuple[tuple[str, frozenset], ...]:
    """Drop duplicates (first name wins) and non-maximal subsets."""
    seen: dict[frozenset, str] = {}
    order: list[frozenset] = []
    for name, s in candidates:
        if s not in seen:
            seen[s] = name
            order.append(s)
    kept = []
    for s in order:
        if not any(s < t for t in order):
            kept.append((seen[s], s))
    return tuple(kept)


def join(a: Cover, b: Cover) -> Cover:
    """alpha v beta: all nonempty pairwise intersections, normalised."""
    if a.model != b.model:
        raise ModelMismatchError("covers live over different models")
    candidates = []
    for na, sa in a.elements:
        for nb, sb in b.elements:
            inter = sa & sb
            if inter:
                candidates.append((f"{na}∧{nb}", inter))
    return Cover(a.model, _normalise(candidates))


def preimage_cover(m: Model, a: Cover) -> Cover:
    """f^-1(alpha): existential preimages, empty ones discarded.

    The result may fail to cover the model for partial relations; the
    is_cover flag records this.
    """
    if m != a.model:
        raise ModelMismatchError("cover does not belong to the given model")
    candidates = []
    for name, s in a.elements:
        pre = m.preimage(s)
        if pre:
            candidates.append((f"pre({name})", pre))
    return Cover(m, _normalise(candidates))


def iterated_join(m: Model, a: Cover, n: int) -> Cover:
    """alpha v f^-1(alpha) v ... v f^-(n-1)(alpha)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    result = a
    pre = a
    for _ in range(n - 1):
        pre = preimage_cover(m, pre)
        result = join(result, pre)
    return result


def refines(a: Cover, b: Cover) -> bool:
    """True iff alpha < beta: every element of b lies in some element of a."""
    if a.model != b.model:
        raise ModelMismatchError("covers live over different models")
    return all(any(sb <= sa for sa in a.sets) for sb in b.sets)


def complement_cover(a: Cover) -> tuple[frozenset, ...]:
    """Complements of all elements, in order.  Generally not a cover."""
    x = a.model.point_set
    return tuple(x - s for s in a.sets)


@dataclass(frozen=True)
class PLIntervalSpec:
    """Piecewise-linear self-map of [0,1] plus a grid density.

    Piece i is x -> slopes[i]*x + intercepts[i] on
    [breakpoints[i], breakpoints[i+1]); the last piece also owns x = 1.
    All data is exact (Fractions).
    """

    breakpoints: tuple
    slopes: tuple
    intercepts: tuple
    resolution: int

    def __post_init__(self):
        bp = tuple(Fraction(x) for x in self.breakpoints)
        sl = tuple(Fraction(x) for x in self.slopes)
        ic = tuple(Fraction(x) for x in self.intercepts)
        if len(bp) < 2 or bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(bp[i] >= bp[i + 1] for i in range(len(bp) - 1)):
            raise ValueError("breakpoints must be strictly ascending")
        if len(sl) != len(bp) - 1 or len(ic) != len(bp) - 1:
            raise ValueError("one slope and intercept per piece")
        for i, (s, c) in enumerate(zip(sl, ic)):
            for x in (bp[i], bp[i + 1]):
                v = s * x + c
                if v < 0 or v > 1:
                    raise DomainError(f"piece {i} maps {x} to {v}, outside [0,1]")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "slopes", sl)
        object.__setattr__(self, "intercepts", ic)
        if not isinstance(self.resolution, int) or self.resolution < 1:
            raise ValueError("resolution must be a positive integer")

    def value(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        if x < 0 or x > 1:
            raise DomainError(f"{x} outside [0,1]")
        for i in range(len(self.slopes)):
            lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
            if lo <= x < hi or (x == 1 and hi == 1):
                return self.slopes[i] * x + self.intercepts[i]
        raise AssertionError("unreachable: pieces tile [0,1]")


def discretize_interval_map(spec: PLIntervalSpec) -> tuple[Model, Cover]:
    """Grid model of a PL interval map plus its two-cell window cover.

    Points are the cells [c/R, (c+1)/R); a cell's successors are all
    cells that intersect the image of its closed hull.  The returned
    cover consists of the overlapping windows {c, c+1}.
    """
    if spec.resolution < 4:
        raise ValueError("resolution must be at least 4")
    r = spec.resolution

    def cell_index(x: Fraction) -> int:
        return min(int(x * r), r - 1)

    transition: dict[int, set[int]] = {c: set() for c in range(r)}
    last = len(spec.slopes) - 1
    for c in range(r):
        lo_cell, hi_cell = Fraction(c, r), Fraction(c + 1, r)
        for i in range(len(spec.slopes)):
            a = max(lo_cell, spec.breakpoints[i])
            b = min(hi_cell, spec.breakpoints[i + 1])
            if a > b:
                continue
            if a == b and not (a < spec.breakpoints[i + 1] or (i == last and a == 1)):
                continue  # single-point overlap owned by the next piece
            va = spec.slopes[i] * a + spec.intercepts[i]
            vb = spec.slopes[i] * b + spec.intercepts[i]
            vlo, vhi = min(va, vb), max(va, vb)
            if vlo < 0 or vhi > 1:
                raise DomainError(f"image of cell {c} leaves [0,1]")
            transition[c].update(range(cell_index(vlo), cell_index(vhi) + 1))

    model = Model(points=tuple(range(r)), transition=transition, label="interval")
    windows = tuple((f"W{i}", frozenset({i, i + 1})) for i in range(r - 1))
    return model, Cover(model, windows)

"""Nerve complexes of covers, integer (co)homology, and the duality audits.

The nerve has one vertex per cover element and a p-simplex for every
(p+1)-fold family with nonempty common intersection.  Homology and
cohomology are computed over Z via Smith normal form; the complement
representation, purity and duality statements are implemented as audits
that report holds/fails rather than being assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import DimensionError, NonCoverError
from .intlinalg import IntMatrix, QuotientPresentation, quotient_presentation
from .models import Cover


@dataclass(frozen=True, order=True)
class Simplex:
    """Strictly ascending tuple of vertex (cover-element) indices."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        v = tuple(self.vertices)
        if any(v[i] >= v[i + 1] for i in range(len(v) - 1)):
            raise ValueError("vertices must be strictly ascending")
        if not v:
            raise ValueError("empty simplex")
        object.__setattr__(self, "vertices", v)

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def faces(self):
        """Codimension-one faces, in the order used by the boundary signs."""
        for i in range(len(self.vertices)):
            yield Simplex(self.vertices[:i] + self.vertices[i + 1 :])


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed collection of simplices, grouped by dimension."""

    simplices: tuple  # tuple of per-dimension sorted tuples of Simplex

    def __post_init__(self):
        levels = tuple(tuple(sorted(level)) for level in self.simplices)
        if not levels:
            raise ValueError("complex needs a vertex level (possibly empty)")
        if not levels[0] and len(levels) > 1:
            raise ValueError("higher simplices without vertices")
        present = {s.vertices for level in levels for s in level}
        for level in levels[1:]:
            for s in level:
                for f in s.faces():
                    if f.vertices not in present:
                        raise ValueError(f"complex not face-closed at {s}")
        for p, level in enumerate(levels):
            for s in level:
                if s.dimension != p:
                    raise ValueError("simplex stored at the wrong dimension")
        object.__setattr__(self, "simplices", levels)
        # chain-complex sanity: consecutive boundaries compose to zero
        for p in range(1, self.top_dimension + 1):
            if not self._boundary(p - 1).mul(self._boundary(p)).is_zero():
                raise AssertionError("boundary does not square to zero")

    @classmethod
    def from_maximal(cls, maximal) -> "SimplicialComplex":
        """Face closure of a list of maximal simplices (vertex index tuples)."""
        closed: set[tuple[int, ...]] = set()
        for vertices in maximal:
            v = tuple(sorted(set(vertices)))
            for k in range(1, len(v) + 1):
                closed.update(itertools.combinations(v, k))
        top = max(len(v) for v in closed) - 1
        levels = [[] for _ in range(top + 1)]
        for v in closed:
            levels[len(v) - 1].append(Simplex(v))
        return cls(tuple(tuple(sorted(level)) for level in levels))

    @property
    def top_dimension(self) -> int:
        return len(self.simplices) - 1

    def level(self, p: int) -> tuple[Simplex, ...]:
        if 0 <= p <= self.top_dimension:
            return self.simplices[p]
        return ()

    def size(self, p: int) -> int:
        return len(self.level(p))

    def index_of(self, p: int):
        return {s.vertices: i for i, s in enumerate(self.level(p))}

    def contains(self, vertices: tuple[int, ...]) -> bool:
        v = tuple(sorted(vertices))
        p = len(v) - 1
        return any(s.vertices == v for s in self.level(p))

    def _boundary(self, p: int) -> IntMatrix:
        """Boundary matrix for any p >= 0; empty shapes beyond the range."""
        cols = self.level(p)
        rows = self.level(p - 1) if p >= 1 else ()
        mat = IntMatrix(len(rows), len(cols))
        if p >= 1 and cols:
            row_index = {s.vertices: i for i, s in enumerate(rows)}
            for j, s in enumerate(cols):
                for i, face in enumerate(s.faces()):
                    mat.rows[row_index[face.vertices]][j] += (-1) ** i
        return mat


@dataclass(frozen=True)
class NerveComplex(SimplicialComplex):
    """Nerve of a cover: vertex i is the i-th cover element."""

    cover: Cover = None


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed face-incidence matrix of one chain degree."""

    p: int
    rows: tuple[Simplex, ...]
    cols: tuple[Simplex, ...]
    entries: IntMatrix


@dataclass(frozen=True)
class HomologyGroup:
    """Betti rank plus torsion divisors in divisibility order."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = [f"Z^{self.rank}" if self.rank != 1 else "Z"] if self.rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def build_nerve(a: Cover) -> NerveComplex:
    """Nerve of a true cover; flagged non-covers are rejected."""
    if not a.is_cover:
        raise NonCoverError("cannot build the nerve of a non-covering family")
    sets = a.sets
    levels = [[Simplex((i,)) for i in range(len(sets))]]
    frontier = [((i,), sets[i]) for i in range(len(sets))]
    while frontier:
        nxt = []
        for vertices, inter in frontier:
            for w in range(vertices[-1] + 1, len(sets)):
                bigger = inter & sets[w]
                if bigger:
                    nxt.append((vertices + (w,), bigger))
        if nxt:
            levels.append([Simplex(v) for v, _ in nxt])
        frontier = nxt
    return NerveComplex(simplices=tuple(tuple(sorted(l)) for l in levels), cover=a)


def raw_complex(maximal) -> SimplicialComplex:
    """Complex from a list of maximal simplices, bypassing any cover."""
    return SimplicialComplex.from_maximal(maximal)


def boundary_matrix(k: SimplicialComplex, p: int) -> BoundaryMatrix:
    """The boundary operator in degree p; p = 0 maps to the trivial group."""
    if p < 0 or p > k.top_dimension:
        raise DimensionError(f"p={p} outside 0..{k.top_dimension}")
    return BoundaryMatrix(p=p, rows=k.level(p - 1), cols=k.level(p), entries=k._boundary(p))


def coboundary_matrix(k: SimplicialComplex, p: int) -> IntMatrix:
    """delta^p : C^{p-1} -> C^p, the transpose of the boundary in degree p."""
    if p < 0 or p > k.top_dimension:
        raise DimensionError(f"p={p} outside 0..{k.top_dimension}")
    return k._boundary(p).transpose()


@lru_cache(maxsize=None)
def homology_presentation(k: SimplicialComplex, p: int) -> QuotientPresentation:
    """Cached quotient presentation of H_p(k; Z)."""
    return quotient_presentation(k._boundary(p), k._boundary(p + 1))


@lru_cache(maxsize=None)
def cohomology_presentation(k: SimplicialComplex, p: int) -> QuotientPresentation:
    """Cached presentation of H^p(k; Z) = ker(delta^{p+1}) / im(delta^p)."""
    d_out = k._boundary(p + 1).transpose()
    d_in = k._boundary(p).transpose()
    return quotient_presentation(d_out, d_in)


def homology(k: SimplicialComplex, p: int, coefficient_rank: int = 1) -> HomologyGroup:
    """H_p(k; Z^r): rank and torsion from Smith normal form."""
    if p < 0 or p > k.top_dimension:
        raise DimensionError(f"p={p} outside 0..{k.top_dimension}")
    pres = homology_presentation(k, p)
    return HomologyGroup(pres.rank * coefficient_rank, pres.torsion * coefficient_rank)


def cohomology(k: SimplicialComplex, p: int, coefficient_rank: int = 1) -> HomologyGroup:
    """H^p(k; Z^r), computed from transposed boundary matrices."""
    if p < 0 or p > k.top_dimension:
        raise DimensionError(f"p={p} outside 0..{k.top_dimension}")
    pres = cohomology_presentation(k, p)
    return HomologyGroup(pres.rank * coefficient_rank, pres.torsion * coefficient_rank)


def homology_table(k: SimplicialComplex) -> tuple[HomologyGroup, ...]:
    return tuple(homology(k, p) for p in range(k.top_dimension + 1))


@dataclass(frozen=True)
class ComplementRepresentation:
    """Co-simplex descriptor: complements of a simplex's cover elements.

    `proper` records the verified equivalence: the union of complements
    differs from the whole space iff the elements intersect, i.e. iff the
    vertex set really spans a simplex.
    """

    vertices: tuple[int, ...]
    complements: tuple[frozenset, ...]
    union: frozenset
    proper: bool


def complement_representation(vertices, a: Cover) -> ComplementRepresentation:
    """Complement (union) representation of a would-be simplex of nerve(a)."""
    if isinstance(vertices, Simplex):
        vertices = vertices.vertices
    v = tuple(sorted(vertices))
    x = a.model.point_set
    complements = tuple(x - a.sets[i] for i in v)
    union = frozenset().union(*complements) if complements else frozenset()
    return ComplementRepresentation(
        vertices=v, complements=complements, union=union, proper=union != x
    )


def partial_dimension(k: SimplicialComplex) -> int:
    """Top simplex dimension, the finite stand-in for the boundary-operator
    dimension of the underlying space at this cover."""
    return k.top_dimension


@dataclass(frozen=True)
class PurityReport:
    """Which simplices extend to a top-dimensional simplex."""

    top_dimension: int
    passing: tuple[Simplex, ...]
    failing: tuple[Simplex, ...]

    @property
    def holds(self) -> bool:
        return not self.failing


def purity_audit(k: SimplicialComplex) -> PurityReport:
    """Check that every p-simplex (p < top) is a face of a top simplex."""
    top_sets = [set(s.vertices) for s in k.level(k.top_dimension)]
    passing, failing = [], []
    for p in range(k.top_dimension):
        for s in k.level(p):
            sv = set(s.vertices)
            (passing if any(sv <= t for t in top_sets) else failing).append(s)
    return PurityReport(k.top_dimension, tuple(passing), tuple(failing))


@dataclass(frozen=True)
class DualityRow:
    p: int
    homology: HomologyGroup
    cohomology_dual: HomologyGroup  # H^{n-p}
    holds: bool


@dataclass(frozen=True)
class DualityReport:
    top_dimension: int
    rows: tuple[DualityRow, ...]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)


def duality_audit(k: SimplicialComplex) -> DualityReport:
    """Compare H_p with H^{n-p} in every degree; report HOLDS/FAILS.

    The isomorphism is only expected for sufficiently regular complexes,
    so this is an audit, never an assumption.
    """
    n = k.top_dimension
    rows = []
    for p in range(n + 1):
        hp = homology(k, p)
        co = cohomology(k, n - p)
        rows.append(DualityRow(p, hp, co, hp == co))
    return DualityReport(n, tuple(rows))

"""Orbit fibers, fiber nerves, fiber homology, and eigenchain analysis.

The fiber of a set U is the window of its iterated images and preimages.
Fiber nerves use the componentwise rule: a family spans a simplex iff its
fibers intersect slicewise in every coordinate of the window.  The
set-level axiom L(U) n L(V) = L(U n V) is audited, not assumed, because
componentwise intersection is generally strictly larger.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import WindowMismatchError
from .induced import ChainMap, SimplicialAssignment, TowerReport, induced_chain_map, refinement_assignment, tower_limit_complexes
from .models import Cover, Model, refines
from .nerve import HomologyGroup, NerveComplex, Simplex, SimplicialComplex, build_nerve, homology


@dataclass(frozen=True)
class OrbitFiber:
    """Windowed fiber of a point set: slices f^i(U) for i in -N..N.

    Forward slices iterate the image, backward slices iterate the
    preimage.  Slices may be empty; the fiber is 'alive' only when every
    slice is nonempty (a point of the product space needs a point in
    every coordinate).
    """

    model: Model
    center: frozenset
    window: int
    slices: tuple  # frozensets, index i stored at position i + window

    def slice(self, i: int) -> frozenset:
        if not -self.window <= i <= self.window:
            raise WindowMismatchError(f"slice {i} outside window {self.window}")
        return self.slices[i + self.window]

    @property
    def alive(self) -> bool:
        return all(self.slices)


def orbit_fiber(m: Model, u, window: int) -> OrbitFiber:
    """Fiber of a nonempty set: slice 0 = U, +/- slices via image/preimage."""
    u = frozenset(u)
    if not u:
        raise ValueError("the fiber of the empty set is represented by absence")
    if window < 0:
        raise ValueError("window must be >= 0")
    forward = [u]
    for _ in range(window):
        forward.append(m.image(forward[-1]))
    backward = [u]
    for _ in range(window):
        backward.append(m.preimage(backward[-1]))
    slices = tuple(backward[::-1][:-1] + forward)
    return OrbitFiber(model=m, center=u, window=window, slices=slices)


def fiber_intersect(a: OrbitFiber, b: OrbitFiber):
    """Slicewise intersection; None (empty marker) if any slice dies."""
    if a.window != b.window:
        raise WindowMismatchError("fibers have different windows")
    if a.model != b.model:
        raise WindowMismatchError("fibers live over different models")
    slices = tuple(x & y for x, y in zip(a.slices, b.slices))
    if not all(slices):
        return None
    return OrbitFiber(model=a.model, center=a.center & b.center, window=a.window, slices=slices)


@dataclass(frozen=True)
class FiberAxiomReport:
    """Componentwise L(U) n L(V) versus L(U n V), slice by slice."""

    center_left: frozenset
    center_right: frozenset
    window: int
    mismatches: tuple  # (slice index, componentwise, axiom side)

    @property
    def holds(self) -> bool:
        return not self.mismatches


def intersection_axiom_audit(m: Model, u, v, window: int) -> FiberAxiomReport:
    u, v = frozenset(u), frozenset(v)
    uv = u & v
    fu, fv = orbit_fiber(m, u, window), orbit_fiber(m, v, window)
    componentwise = tuple(x & y for x, y in zip(fu.slices, fv.slices))
    if uv:
        axiom = orbit_fiber(m, uv, window).slices
    else:
        axiom = tuple(frozenset() for _ in componentwise)
    mismatches = tuple(
        (i - window, componentwise[i], axiom[i])
        for i in range(2 * window + 1)
        if componentwise[i] != axiom[i]
    )
    return FiberAxiomReport(center_left=u, center_right=v, window=window, mismatches=mismatches)


@dataclass(frozen=True)
class FiberNerve(SimplicialComplex):
    """Nerve of the fibers of a cover with the all-slices rule."""

    cover: Cover = None
    window: int = 0


def build_fiber_nerve(a: Cover, m: Model, window: int) -> FiberNerve:
    """Simplices are families whose fibers intersect in every slice.

    window = 0 reproduces the ordinary nerve exactly; growing the window
    only removes simplices.
    """
    if m != a.model:
        raise WindowMismatchError("cover does not belong to the given model")
    fibers = [orbit_fiber(m, s, window) for s in a.sets]
    alive = {i for i, f in enumerate(fibers) if f.alive}
    levels = [[Simplex((i,)) for i in sorted(alive)]]
    frontier = [((i,), fibers[i].slices) for i in sorted(alive)]
    while frontier:
        nxt = []
        for vertices, slices in frontier:
            for w in range(vertices[-1] + 1, len(fibers)):
                if w not in alive:
                    continue
                joint = tuple(x & y for x, y in zip(slices, fibers[w].slices))
                if all(joint):
                    nxt.append((vertices + (w,), joint))
        if nxt:
            levels.append([Simplex(v) for v, _ in nxt])
        frontier = nxt
    return FiberNerve(
        simplices=tuple(tuple(sorted(l)) for l in levels), cover=a, window=window
    )


def fiber_homology(fn: FiberNerve, p: int, coefficient_rank: int = 1) -> HomologyGroup:
    """Same engine as ordinary homology, applied to the fiber nerve."""
    return homology(fn, p, coefficient_rank)


def fiber_tower(m: Model, covers: Sequence[Cover], window: int, p: int) -> TowerReport:
    """Finite-tower surrogate for the fiber homology limit group.

    Covers must form an ascending refinement chain; connecting maps are
    the first-containing-element refinement assignments, which send live
    fiber simplices to live fiber simplices.
    """
    covers = list(covers)
    if len(covers) < 2:
        raise ValueError("a tower needs at least two levels")
    for i in range(len(covers) - 1):
        if not refines(covers[i], covers[i + 1]):
            raise ValueError(f"level {i + 1} does not refine level {i}")
    complexes = [build_fiber_nerve(c, m, window) for c in covers]
    maps = []
    for i in range(len(covers) - 1):
        assign = refinement_assignment(covers[i + 1], covers[i])
        maps.append(induced_chain_map(assign, complexes[i + 1], complexes[i]))
    return tower_limit_complexes(complexes, maps, p)


@dataclass(frozen=True)
class EmbedReport:
    """Whether ordinary nerve simplices embed into the fiber nerve.

    The componentwise rule makes the fiber condition stricter, so the
    forward inclusion (nerve into fiber nerve) can fail; both directions
    are checked and counterexamples listed.
    """

    window: int
    forward_holds: bool  # every nerve simplex is a fiber simplex
    forward_counterexamples: tuple
    reverse_holds: bool  # every fiber simplex is a nerve simplex
    reverse_counterexamples: tuple
    nerve_sizes: tuple
    fiber_sizes: tuple


def embed_cech_chains(k: NerveComplex, fn: FiberNerve) -> EmbedReport:
    nerve_simplices = {s.vertices for level in k.simplices for s in level}
    fiber_simplices = {s.vertices for level in fn.simplices for s in level}
    fwd_missing = tuple(sorted(nerve_simplices - fiber_simplices))
    rev_missing = tuple(sorted(fiber_simplices - nerve_simplices))
    return EmbedReport(
        window=fn.window,
        forward_holds=not fwd_missing,
        forward_counterexamples=fwd_missing,
        reverse_holds=not rev_missing,
        reverse_counterexamples=rev_missing,
        nerve_sizes=tuple(len(l) for l in k.simplices),
        fiber_sizes=tuple(len(l) for l in fn.simplices),
    )


def decompose_eigenvalue(m: int) -> tuple[int, int]:
    """Split m > 2 into the deterministic unequal sum (1, m-1)."""
    if m <= 2:
        raise ValueError("values up to 2 are handled separately")
    return 1, m - 1


@dataclass(frozen=True)
class EigenchainWitness:
    """Branch certificate for the eigenvalue equation on a fiber vertex.

    Certified: `branches` are pairwise disjoint nonempty subsets of
    f^-1(f(U0)), each drawn from the cover's elements or their pairwise
    set-differences, and each mapping onto f(U0) -- the finite-model form
    of the recursive split of f over U0 into summands that replicate the
    fiber.  Refuted: exhaustive search found fewer than m such branches.
    """

    eigenvalue: int
    chain: tuple  # ((coefficient, vertex names), ...)
    branches: tuple
    status: str  # "certified" | "refuted"
    detail: str = ""


def _branch_candidates(a: Cover, t: frozenset, target: frozenset, m: Model):
    """Nonempty element/difference subsets of t mapping onto target."""
    base = []
    for _, s in a.elements:
        base.append(s)
    for _, s1 in a.elements:
        for _, s2 in a.elements:
            d = s1 - s2
            if d:
                base.append(d)
    seen = set()
    out = []
    for s in base:
        if s <= t and s not in seen and m.image(s) >= target:
            seen.add(s)
            out.append(s)
    return out


def _max_disjoint(candidates: list[frozenset], need: int) -> list[frozenset]:
    """Largest pairwise-disjoint subfamily (early exit once `need` found)."""
    best: list[frozenset] = []

    def search(idx: int, chosen: list[frozenset], used: frozenset):
        nonlocal best
        if len(chosen) > len(best):
            best = chosen[:]
            if len(best) >= need:
                return True
        if idx >= len(candidates):
            return False
        if len(chosen) + (len(candidates) - idx) <= len(best):
            return False
        c = candidates[idx]
        if not (c & used):
            if search(idx + 1, chosen + [c], used | c):
                return True
        return search(idx + 1, chosen, used)

    search(0, [], frozenset())
    return best


def eigenchain_analysis(m: Model, a: Cover, u0: str, mval: int) -> EigenchainWitness:
    """Search for an m-branch certificate over the element named u0.

    The eigenvalue equation forces the preimage of f(U0) to split into m
    disjoint pieces each carrying a full copy of the image; at desk scale
    the pieces are drawn from the cover's elements and their pairwise
    set-differences, and the finite search is complete, so the status is
    never inconclusive.
    """
    if mval < 0:
        raise ValueError("eigenvalue must be nonnegative")
    u0set = a.element(u0)  # raises KeyError when u0 is not in the cover
    chain = ((1, (u0,)),)
    target = m.image(u0set)
    t = m.preimage(target)
    if mval <= 1:
        branches = () if mval == 0 or not t else (t,)
        return EigenchainWitness(
            eigenvalue=mval,
            chain=chain,
            branches=branches,
            status="certified",
            detail="m in {0,1} is trivially certified",
        )
    candidates = _branch_candidates(a, t, target, m)
    found = _max_disjoint(candidates, mval)
    if len(found) >= mval:
        return EigenchainWitness(
            eigenvalue=mval,
            chain=chain,
            branches=tuple(found[:mval]),
            status="certified",
            detail=f"{mval} disjoint onto-branches inside the preimage",
        )
    return EigenchainWitness(
        eigenvalue=mval,
        chain=chain,
        branches=tuple(found),
        status="refuted",
        detail=(
            f"exhaustive search found only {len(found)} disjoint onto-branches "
            f"inside the preimage of the image of {u0!r}"
        ),
    )

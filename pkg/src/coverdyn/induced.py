"""Chain maps induced by dynamics and refinement, exact spectra, and
finite-tower limits.

A SimplicialAssignment is a vertex map between two covers' nerves; the
dynamics flavour sends each element to one containing its image, the
refinement flavour sends each finer element to one containing it.  Chain
maps are verified to commute with the boundary exactly.  Spectra are
computed from exact integer characteristic polynomials; only eigenvalue
moduli are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import AssignmentError, CarrierError, ModelMismatchError
from .intlinalg import (
    IntMatrix,
    QuotientPresentation,
    char_poly,
    det,
    poly_divides,
    poly_mul,
    restrict_to_kernel,
)
from .models import Cover, Model, refines
from .nerve import (
    HomologyGroup,
    NerveComplex,
    SimplicialComplex,
    build_nerve,
    cohomology_presentation,
    homology,
    homology_presentation,
)

EIGEN_ERROR_BOUND = 1e-9


@dataclass(frozen=True)
class SimplicialAssignment:
    """Vertex map between the nerves of two covers.

    direction 'dynamics': element U goes to an element containing f(U);
    direction 'refinement': each source element is inside its target.
    """

    source: Cover
    target: Cover
    vertex_map: tuple[int, ...]
    direction: str = "dynamics"

    def __post_init__(self):
        vm = tuple(self.vertex_map)
        if len(vm) != len(self.source):
            raise AssignmentError("vertex map must cover every source element")
        if any(not (0 <= j < len(self.target)) for j in vm):
            raise AssignmentError("vertex map target index out of range")
        object.__setattr__(self, "vertex_map", vm)

    @property
    def is_self_map(self) -> bool:
        return self.source == self.target


def carrier_assignment(m: Model, a: Cover, target: Cover | None = None) -> SimplicialAssignment:
    """Send each element U to the first target element containing f(U).

    With no explicit target this is the self-map case.  Raises
    CarrierError naming the first element without a carrier, in which
    case the caller should refine (join with the preimage cover) and
    retry.
    """
    if m != a.model:
        raise ModelMismatchError("cover does not belong to the given model")
    tgt = a if target is None else target
    if tgt.model != m:
        raise ModelMismatchError("target cover does not belong to the given model")
    vm = []
    for name, u in a.elements:
        img = m.image(u)
        for j, (_, v) in enumerate(tgt.elements):
            if img <= v:
                vm.append(j)
                break
        else:
            raise CarrierError(name)
    return SimplicialAssignment(a, tgt, tuple(vm), "dynamics")


def refinement_assignment(fine: Cover, coarse: Cover) -> SimplicialAssignment:
    """Send each fine element to the first coarse element containing it."""
    if fine.model != coarse.model:
        raise ModelMismatchError("covers live over different models")
    if not refines(coarse, fine):
        raise AssignmentError("first cover does not refine the second")
    vm = []
    for name, u in fine.elements:
        for j, (_, v) in enumerate(coarse.elements):
            if u <= v:
                vm.append(j)
                break
        else:  # unreachable given refines() above
            raise AssignmentError(f"element {name!r} has no containing coarse element")
    return SimplicialAssignment(fine, coarse, tuple(vm), "refinement")


def _permutation_sign(values: Sequence[int]) -> int:
    sign = 1
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class ChainMap:
    """Per-dimension integer matrices commuting exactly with boundaries."""

    source: SimplicialComplex
    target: SimplicialComplex
    matrices: tuple  # index p: IntMatrix of shape target.size(p) x source.size(p)
    assignment: SimplicialAssignment | None = None

    def matrix(self, p: int) -> IntMatrix:
        if 0 <= p < len(self.matrices):
            return self.matrices[p]
        return IntMatrix(self.target.size(p), self.source.size(p))

    @property
    def is_self_map(self) -> bool:
        return self.source == self.target


def induced_chain_map(
    s: SimplicialAssignment, src: SimplicialComplex, dst: SimplicialComplex
) -> ChainMap:
    """Chain map of a vertex assignment; degenerate images go to zero.

    Raises AssignmentError when some simplex's image vertex set is not a
    simplex of the target.  Boundary commutation is verified exactly.
    """
    vm = s.vertex_map
    mats = []
    for p in range(src.top_dimension + 1):
        mat = IntMatrix(dst.size(p), src.size(p))
        dst_index = dst.index_of(p)
        for j, simplex in enumerate(src.level(p)):
            mapped = [vm[v] for v in simplex.vertices]
            if len(set(mapped)) != len(mapped):
                continue  # degenerate image
            sign = _permutation_sign(mapped)
            key = tuple(sorted(mapped))
            if key not in dst_index:
                raise AssignmentError(
                    f"image {key} of simplex {simplex.vertices} is not a target simplex"
                )
            mat.rows[dst_index[key]][j] = sign
        mats.append(mat)
    for p in range(1, src.top_dimension + 1):
        left = dst._boundary(p).mul(mats[p])
        right = mats[p - 1].mul(src._boundary(p))
        if left != right:
            raise AssertionError("chain map does not commute with the boundary")
    return ChainMap(source=src, target=dst, matrices=tuple(mats), assignment=s)


def induced_on_presentation(
    mat: IntMatrix, src: QuotientPresentation, dst: QuotientPresentation
) -> tuple[IntMatrix, IntMatrix]:
    """Free-part matrix and torsion action of a chain-level map."""
    free = IntMatrix(dst.rank, src.rank)
    for j in range(src.rank):
        image = mat.mul_vec(src.free_generator(j))
        fc, _ = dst.coords(image)
        for i, v in enumerate(fc):
            free.rows[i][j] = v
    tors = IntMatrix(len(dst.torsion), len(src.torsion))
    for j in range(len(src.torsion)):
        image = mat.mul_vec(src.torsion_generator(j))
        fc, tc = dst.coords(image)
        if any(fc):
            raise AssertionError("torsion class mapped to infinite order")
        for i, v in enumerate(tc):
            tors.rows[i][j] = v
    return free, tors


@dataclass(frozen=True)
class HomologyMap:
    """Induced map on homology: free parts plus torsion actions per degree."""

    chain_map: ChainMap
    free: tuple  # IntMatrix per dimension
    torsion: tuple  # IntMatrix per dimension, entries mod target divisors
    torsion_divisors: tuple  # target divisors per dimension

    def free_matrix(self, p: int) -> IntMatrix:
        if 0 <= p < len(self.free):
            return self.free[p]
        return IntMatrix(0, 0)

    @property
    def dimensions(self) -> int:
        return len(self.free)


def induced_homology_map(c: ChainMap) -> HomologyMap:
    """Express the chain map on H_* free generators via SNF bases."""
    top = max(c.source.top_dimension, c.target.top_dimension)
    free, tors, divisors = [], [], []
    for p in range(top + 1):
        if p > c.source.top_dimension:
            dst_rank = homology_presentation(c.target, p).rank if p <= c.target.top_dimension else 0
            free.append(IntMatrix(dst_rank, 0))
            tors.append(IntMatrix(0, 0))
            divisors.append(())
            continue
        src_pres = homology_presentation(c.source, p)
        if p <= c.target.top_dimension:
            dst_pres = homology_presentation(c.target, p)
        else:
            # target has no cells here; source classes must die
            free.append(IntMatrix(0, src_pres.rank))
            tors.append(IntMatrix(0, len(src_pres.torsion)))
            divisors.append(())
            continue
        f, t = induced_on_presentation(c.matrix(p), src_pres, dst_pres)
        free.append(f)
        tors.append(t)
        divisors.append(dst_pres.torsion_divisors)
    return HomologyMap(chain_map=c, free=tuple(free), torsion=tuple(tors), torsion_divisors=tuple(divisors))


def _frac_poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while a and a[0] == 0:
        a.pop(0)
    while len(a) >= len(b):
        if a[0] != 0:
            f = a[0] / b[0]
            for i in range(len(b)):
                a[i] -= f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _squarefree_part(coeffs: Sequence[int]) -> tuple[int, ...]:
    """Monic square-free part of a monic integer polynomial.

    Multiple roots ruin the accuracy of numeric root finding; dividing
    out gcd(p, p') keeps every root simple without changing the set of
    moduli.
    """
    if len(coeffs) <= 2:
        return tuple(coeffs)
    p = [Fraction(c) for c in coeffs]
    n = len(coeffs) - 1
    dp = [Fraction(c * (n - i)) for i, c in enumerate(coeffs[:-1])]
    a, b = p, dp
    while b:
        a, b = b, _frac_poly_mod(a, b)
    g = [c / a[0] for c in a]
    # exact division p / g; the quotient of monic integer polys is integer
    rem = p[:]
    quot: list[Fraction] = []
    while len(rem) >= len(g):
        f = rem[0] / g[0]
        quot.append(f)
        for i in range(len(g)):
            rem[i] -= f * g[i]
        rem.pop(0)
    if any(rem) or any(c.denominator != 1 for c in quot):
        raise AssertionError("square-free decomposition failed")
    return tuple(int(c) for c in quot)


def _polish_roots(coeffs: Sequence[int]) -> list[complex]:
    """Roots of an exact integer polynomial, Newton-polished.

    Callers pass square-free polynomials, so Newton converges
    quadratically and the moduli are accurate to ~1e-15.
    """
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    raw = np.roots([float(c) for c in coeffs])
    out = []
    for z0 in raw:
        z = complex(z0)
        for _ in range(60):
            p = 0j
            dp = 0j
            for c in coeffs:
                dp = dp * z + p
                p = p * z + c
            if dp == 0:
                break
            step = p / dp
            z -= step
            if abs(step) <= 1e-16 * max(1.0, abs(z)):
                break
        out.append(z)
    return out


@dataclass(frozen=True)
class SpectralSummary:
    """Spectral radius data of a block-diagonal integer map."""

    blocks: tuple  # square IntMatrix per dimension
    char_polys: tuple  # per-block integer coefficient tuples
    char_poly: tuple  # product, highest degree first
    eigen_moduli: tuple  # descending floats
    rho: float
    log_rho: float
    error_bound: float = EIGEN_ERROR_BOUND


def spectral_summary(blocks: Sequence[IntMatrix]) -> SpectralSummary:
    """Exact characteristic polynomial and certified eigenvalue moduli.

    rho is the sup of root moduli; log_rho is -inf when the total rank is
    zero or every eigenvalue vanishes.  The Cauchy root bound is used as
    a cross-check on the numerically computed moduli.
    """
    blocks = tuple(blocks)
    for b in blocks:
        if b.m != b.n:
            raise ValueError("spectral blocks must be square")
    polys = tuple(char_poly(b) for b in blocks)
    total = (1,)
    for p in polys:
        total = poly_mul(total, p)
    moduli: list[float] = []
    for p in polys:
        moduli.extend(abs(z) for z in _polish_roots(_squarefree_part(p)))
    moduli.sort(reverse=True)
    rho = moduli[0] if moduli else 0.0
    if len(total) > 1:
        cauchy = 1.0 + max(abs(c) for c in total[1:])
        if rho > cauchy + EIGEN_ERROR_BOUND:
            raise AssertionError("eigenvalue modulus exceeds the Cauchy bound")
    log_rho = math.log(rho) if rho > 0 else float("-inf")
    return SpectralSummary(
        blocks=blocks,
        char_polys=polys,
        char_poly=total,
        eigen_moduli=tuple(moduli),
        rho=rho,
        log_rho=log_rho,
    )


@dataclass(frozen=True)
class EigenSupReport:
    """The restriction chain sup over H_*, Z_* and C_* of a self chain map."""

    sup_h: float
    sup_z: float
    sup_c: float
    divisibility_ok: bool

    @property
    def holds(self) -> bool:
        tol = EIGEN_ERROR_BOUND
        return self.sup_h <= self.sup_z + tol and self.sup_z <= self.sup_c + tol


def eigen_sup_chain(c: ChainMap, k: SimplicialComplex | None = None) -> EigenSupReport:
    """Verify sup|E_H| <= sup|E_Z| <= sup|E_C| for a self chain map.

    Restriction to Z_* uses the saturated SNF kernel basis; the quotient
    spectra are cross-checked by exact divisibility of characteristic
    polynomials.
    """
    if k is None:
        k = c.source
    if not c.is_self_map or c.source != k:
        raise AssignmentError("eigen-sup chain needs a chain self-map")
    hmap = induced_homology_map(c)
    c_blocks, z_blocks, h_blocks = [], [], []
    divisibility = True
    for p in range(k.top_dimension + 1):
        m_p = c.matrix(p)
        c_blocks.append(m_p)
        z_p = restrict_to_kernel(m_p, k._boundary(p))
        z_blocks.append(z_p)
        h_p = hmap.free_matrix(p)
        h_blocks.append(h_p)
        cp_c, cp_z, cp_h = char_poly(m_p), char_poly(z_p), char_poly(h_p)
        if not (poly_divides(cp_z, cp_c) and poly_divides(cp_h, cp_z)):
            divisibility = False
    sup_c = spectral_summary(c_blocks).rho
    sup_z = spectral_summary(z_blocks).rho
    sup_h = spectral_summary(h_blocks).rho
    return EigenSupReport(sup_h=sup_h, sup_z=sup_z, sup_c=sup_c, divisibility_ok=divisibility)


@dataclass(frozen=True)
class TowerLevel:
    group: HomologyGroup
    cogroup: HomologyGroup


@dataclass(frozen=True)
class TowerReport:
    """Stabilisation of H_p and H^p along a finite refinement tower.

    `connecting` holds free-part matrices H_p(level i+1) -> H_p(level i),
    `co_connecting` the transposed direction H^p(level i) -> H^p(level i+1).
    `stabilized` means the last two levels agree and the last connecting
    map is an isomorphism; the stabilized value stands in for the limit.
    """

    p: int
    levels: tuple
    connecting: tuple
    co_connecting: tuple
    stabilized: bool
    co_stabilized: bool
    limit: HomologyGroup | None
    co_limit: HomologyGroup | None


def _group_at(k: SimplicialComplex, p: int) -> HomologyGroup:
    if p <= k.top_dimension:
        return homology(k, p)
    return HomologyGroup(0, ())


def _cogroup_at(k: SimplicialComplex, p: int) -> HomologyGroup:
    if p <= k.top_dimension:
        pres = cohomology_presentation(k, p)
        return HomologyGroup(pres.rank, pres.torsion)
    return HomologyGroup(0, ())


def _free_iso(mat: IntMatrix, src: HomologyGroup, dst: HomologyGroup) -> bool:
    if src != dst:
        return False
    if mat.m != mat.n:
        return False
    if mat.m == 0:
        return True
    return abs(det(mat)) == 1


def tower_limit_complexes(complexes: Sequence[SimplicialComplex], maps: Sequence[ChainMap], p: int) -> TowerReport:
    """Stabilisation report for a chain of complexes and connecting maps.

    maps[i] must run complexes[i+1] -> complexes[i] (fine to coarse).
    """
    if len(maps) != len(complexes) - 1:
        raise ValueError("need exactly one connecting map per refinement step")
    levels = []
    for k in complexes:
        levels.append(TowerLevel(group=_group_at(k, p), cogroup=_cogroup_at(k, p)))
    connecting = []
    co_connecting = []
    for cm in maps:
        if p <= cm.source.top_dimension and p <= cm.target.top_dimension:
            src_pres = homology_presentation(cm.source, p)
            dst_pres = homology_presentation(cm.target, p)
            f, _ = induced_on_presentation(cm.matrix(p), src_pres, dst_pres)
            co_src = cohomology_presentation(cm.target, p)
            co_dst = cohomology_presentation(cm.source, p)
            cf, _ = induced_on_presentation(cm.matrix(p).transpose(), co_src, co_dst)
        else:  # one side has no cells in this degree
            src_rank = _group_at(cm.source, p).rank
            dst_rank = _group_at(cm.target, p).rank
            f = IntMatrix(dst_rank, src_rank)
            cf = IntMatrix(src_rank, dst_rank)
        connecting.append(f)
        co_connecting.append(cf)
    stabilized = (
        len(complexes) >= 2
        and levels[-1].group == levels[-2].group
        and _free_iso(connecting[-1], levels[-1].group, levels[-2].group)
    )
    co_stabilized = (
        len(complexes) >= 2
        and levels[-1].cogroup == levels[-2].cogroup
        and _free_iso(co_connecting[-1], levels[-2].cogroup, levels[-1].cogroup)
    )
    return TowerReport(
        p=p,
        levels=tuple(levels),
        connecting=tuple(connecting),
        co_connecting=tuple(co_connecting),
        stabilized=stabilized,
        co_stabilized=co_stabilized,
        limit=levels[-1].group if stabilized else None,
        co_limit=levels[-1].cogroup if co_stabilized else None,
    )


def tower_limit(covers: Sequence[Cover], p: int, assignments: Sequence[SimplicialAssignment] | None = None) -> TowerReport:
    """Tower report for an ascending chain of covers a1 < a2 < ...

    Each cover must refine its predecessor; connecting maps are the
    deterministic first-containing-element refinement assignments unless
    explicit ones are supplied.
    """
    covers = list(covers)
    if len(covers) < 2:
        raise ValueError("a tower needs at least two levels")
    for i in range(len(covers) - 1):
        if not refines(covers[i], covers[i + 1]):
            raise AssignmentError(f"level {i + 1} does not refine level {i}")
    if assignments is None:
        assignments = [
            refinement_assignment(covers[i + 1], covers[i]) for i in range(len(covers) - 1)
        ]
    complexes = [build_nerve(c) for c in covers]
    maps = [
        induced_chain_map(assignments[i], complexes[i + 1], complexes[i])
        for i in range(len(covers) - 1)
    ]
    return tower_limit_complexes(complexes, maps, p)

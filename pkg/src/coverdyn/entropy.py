"""Cover entropy via exact minimal subcovers, entropy of iterated joins,
the fiber-expansion factor L_d, and fiber entropy.

N(alpha) is found by branch and bound (greedy upper bound, covering lower
bounds, element-inclusion branching on the scarcest point) below the
exact-limit threshold, greedy-with-gap above it.  All subcover counts are
exact integers; only logarithms are floats.

Entropy estimates report min_n H_n/n over the computed range.  When the
sequence of preimage covers revisits an earlier element family the joins
are provably constant from that point on, so the limit is exactly zero
and is reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import NonCoverError
from .models import Cover, Model, join, preimage_cover


@dataclass(frozen=True)
class SubcoverResult:
    """Minimal (or greedily bounded) subcover of a cover."""

    size: int
    chosen: tuple[str, ...]
    method: str  # "exact" | "greedy"
    optimality_gap: int

    @property
    def certified(self) -> bool:
        return self.optimality_gap == 0


def _preprocess(universe: set, sets: list[tuple[str, frozenset]]):
    """Dedup, dominance removal, and forced-element extraction."""
    clipped = []
    seen = set()
    for name, s in sets:
        c = s & universe
        if c and c not in seen:
            seen.add(c)
            clipped.append((name, c))
    # dominance: drop sets strictly inside another kept set
    kept = [
        (name, c)
        for name, c in clipped
        if not any(c < other for _, other in clipped)
    ]
    forced: list[str] = []
    uncovered = set(universe)
    changed = True
    while changed:
        changed = False
        for point in sorted(uncovered, key=repr):
            holders = [(name, c) for name, c in kept if point in c]
            if len(holders) == 1:
                name, c = holders[0]
                forced.append(name)
                uncovered -= c
                kept = [(n, s) for n, s in kept if n != name]
                changed = True
                break
    kept = [(n, s & uncovered) for n, s in kept]
    kept = [(n, s) for n, s in kept if s]
    return forced, uncovered, kept


def _lower_bound(uncovered: set, sets: list[tuple[str, frozenset]]) -> int:
    if not uncovered:
        return 0
    max_size = max((len(s) for _, s in sets), default=0)
    if max_size == 0:
        return len(uncovered)  # uncoverable; force pruning
    ratio = -(-len(uncovered) // max_size)
    # independent points: no two picked points share a covering set
    remaining = set(uncovered)
    independent = 0
    while remaining:
        point = min(remaining, key=lambda p: (sum(1 for _, s in sets if p in s), repr(p)))
        independent += 1
        touched = set()
        for _, s in sets:
            if point in s:
                touched |= s
        remaining -= touched
        remaining.discard(point)
    return max(ratio, independent)


def _greedy(uncovered: set, sets: list[tuple[str, frozenset]]) -> list[str]:
    chosen = []
    left = set(uncovered)
    while left:
        best = None
        best_gain = 0
        for name, s in sets:
            gain = len(s & left)
            if gain > best_gain:
                best, best_gain = name, gain
        if best is None:
            raise NonCoverError("family does not cover the set")
        chosen.append(best)
        left -= dict(sets)[best]
    return chosen


def _branch_and_bound(uncovered: set, sets: list[tuple[str, frozenset]]) -> list[str]:
    best = _greedy(uncovered, sets)

    def recurse(left: frozenset, chosen: list[str], available: list[tuple[str, frozenset]]):
        nonlocal best
        if not left:
            if len(chosen) < len(best):
                best = chosen[:]
            return
        if len(chosen) + _lower_bound(set(left), available) >= len(best):
            return
        point = min(
            left, key=lambda p: (sum(1 for _, s in available if p in s), repr(p))
        )
        holders = [(n, s) for n, s in available if point in s]
        if not holders:
            return
        for name, s in holders:
            rest = [(n, t) for n, t in available if n != name]
            recurse(left - s, chosen + [name], rest)

    recurse(frozenset(uncovered), [], sets)
    return best


def _solve_cover(universe: set, sets: list[tuple[str, frozenset]], exact: bool):
    if not universe:
        return 0, (), "exact", 0
    union = set()
    for _, s in sets:
        union |= s
    if not universe <= union:
        raise NonCoverError("family does not cover the set")
    forced, uncovered, kept = _preprocess(universe, sets)
    if not uncovered:
        return len(forced), tuple(forced), "exact", 0
    if exact:
        chosen = _branch_and_bound(uncovered, kept)
        return len(forced) + len(chosen), tuple(forced + chosen), "exact", 0
    chosen = _greedy(uncovered, kept)
    gap = len(chosen) - _lower_bound(uncovered, kept)
    return len(forced) + len(chosen), tuple(forced + chosen), "greedy", gap


def minimal_subcover(a: Cover, exact_limit: int = 20) -> SubcoverResult:
    """N(alpha): smallest subfamily still covering the model."""
    if not a.is_cover:
        raise NonCoverError("minimal subcover of a non-covering family")
    exact = len(a) <= exact_limit
    size, chosen, method, gap = _solve_cover(
        set(a.model.points), list(a.elements), exact
    )
    return SubcoverResult(size=size, chosen=chosen, method=method, optimality_gap=gap)


def covering_number(a: Cover, subset, exact_limit: int = 20) -> int:
    """Minimal number of cover elements whose union contains `subset`.

    The exact/greedy decision looks at the clipped family: only elements
    meeting the subset count against the threshold.
    """
    subset = set(subset)
    if not subset:
        return 0
    relevant = [(n, s) for n, s in a.elements if s & subset]
    exact = len(relevant) <= exact_limit
    size, _, _, gap = _solve_cover(subset, relevant, exact)
    if gap:
        raise NonCoverError("covering number not certified at this size")
    return size


def cover_entropy(a: Cover, exact_limit: int = 20) -> float:
    """H(alpha) = log N(alpha) >= 0, zero iff one element suffices."""
    return math.log(minimal_subcover(a, exact_limit).size)


@dataclass(frozen=True)
class EntropySequence:
    """H_n of iterated joins and the certified entropy estimate.

    estimate is min_n H_n/n; when `stabilized_at` is set the joins repeat
    from that index on and the true limit is exactly zero.  `truncated`
    marks a join that outgrew the element cap, in which case downstream
    verdicts must be inconclusive.
    """

    h_values: tuple
    subcover_sizes: tuple
    per_n: tuple
    estimate: float
    stabilized_at: int | None
    truncated: bool
    exact: bool

    @property
    def decaying(self) -> bool:
        return self.stabilized_at is not None


def entropy_estimate(
    m: Model,
    a: Cover,
    n_max: int,
    exact_limit: int = 20,
    element_cap: int = 4096,
) -> EntropySequence:
    """H(join of alpha, f^-1 alpha, ..., f^-(n-1) alpha) for n = 1..n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if not a.is_cover:
        raise NonCoverError("entropy needs a true cover")
    if not m.is_total():
        raise NonCoverError(
            "transition is partial: preimage families would not stay covers"
        )
    sizes: list[int] = []
    h: list[float] = []
    exact = True
    truncated = False
    stabilized_at = None

    current = a
    pre = a
    seen_families = {a.set_family()}
    n = 1
    while n <= n_max:
        res = minimal_subcover(current, exact_limit)
        if not res.certified:
            exact = False
        sizes.append(res.size)
        h.append(math.log(res.size))
        if n == n_max:
            break
        pre = preimage_cover(m, pre)
        if not pre.is_cover:
            raise NonCoverError("preimage family stopped covering the model")
        family = pre.set_family()
        if family in seen_families:
            # the preimage covers cycle: every later join equals this one
            stabilized_at = n
            sizes.extend([res.size] * (n_max - n))
            h.extend([h[-1]] * (n_max - n))
            break
        seen_families.add(family)
        nxt = join(current, pre)
        if len(nxt) > element_cap:
            truncated = True
            break
        current = nxt
        n += 1

    per_n = tuple(v / (i + 1) for i, v in enumerate(h))
    if stabilized_at is not None and not truncated:
        estimate = 0.0
    else:
        estimate = min(per_n)
    return EntropySequence(
        h_values=tuple(h),
        subcover_sizes=tuple(sizes),
        per_n=per_n,
        estimate=estimate,
        stabilized_at=stabilized_at,
        truncated=truncated,
        exact=exact,
    )


@dataclass(frozen=True)
class TopologicalEntropyReport:
    """Sup of per-cover entropy estimates over the supplied covers."""

    estimate: float
    rows: tuple  # EntropySequence per cover, input order

    @property
    def truncated(self) -> bool:
        return any(r.truncated for r in self.rows)


def topological_entropy(
    m: Model,
    covers: Sequence[Cover],
    n_max: int,
    exact_limit: int = 20,
    element_cap: int = 4096,
) -> TopologicalEntropyReport:
    covers = list(covers)
    if not covers:
        raise ValueError("need at least one cover")
    rows = tuple(
        entropy_estimate(m, c, n_max, exact_limit, element_cap) for c in covers
    )
    return TopologicalEntropyReport(estimate=max(r.estimate for r in rows), rows=rows)


@dataclass(frozen=True)
class ExpansionReport:
    """The fiber-expansion factor L_d with its per-element counts.

    For each element U the backward count is the minimal number of cover
    elements needed to cover the full preimage of U (points whose whole
    successor set lands in U) and the forward count covers the image
    f(U).  L_d is the max over both directions, at least 1.
    """

    L_d: int
    log_L_d: float
    per_element: tuple  # (name, backward count, forward count)


def expansion_multiplicity(m: Model, a: Cover, exact_limit: int = 20) -> ExpansionReport:
    if m != a.model:
        raise NonCoverError("cover does not belong to the given model")
    rows = []
    worst = 1
    for name, u in a.elements:
        back = covering_number(a, m.preimage_universal(u), exact_limit)
        fwd = covering_number(a, m.image(u), exact_limit)
        worst = max(worst, back, fwd)
        rows.append((name, back, fwd))
    return ExpansionReport(L_d=worst, log_L_d=math.log(worst), per_element=tuple(rows))


FIBER_NOTE = (
    "fiber entropy adds log L_d to the cover entropy estimate exactly once: "
    "ent_fL(alpha) = ent(f, alpha) + log L_d"
)


@dataclass(frozen=True)
class FiberEntropyReport:
    """ent_fL(alpha) = ent(f, alpha) + log L_d, with both summands."""

    ent_f_alpha: float
    L_d: int
    log_L_d: float
    ent_fL_alpha: float
    sequence: EntropySequence
    expansion: ExpansionReport
    notes: tuple = (FIBER_NOTE,)


def fiber_entropy(
    m: Model,
    a: Cover,
    n_max: int,
    exact_limit: int = 20,
    element_cap: int = 4096,
) -> FiberEntropyReport:
    seq = entropy_estimate(m, a, n_max, exact_limit, element_cap)
    exp = expansion_multiplicity(m, a, exact_limit)
    return FiberEntropyReport(
        ent_f_alpha=seq.estimate,
        L_d=exp.L_d,
        log_L_d=exp.log_L_d,
        ent_fL_alpha=seq.estimate + exp.log_L_d,
        sequence=seq,
        expansion=exp,
    )

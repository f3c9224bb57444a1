"""Shared model builders and independent brute-force oracles."""

from __future__ import annotations

import itertools

import pytest

from coverdyn.models import Cover, Model, cover


def make_shift(k: int, depth: int):
    """Truncated one-sided shift plus its 1-cylinder cover."""
    digits = "0123456789"[:k]
    words = tuple("".join(w) for w in itertools.product(digits, repeat=depth))
    trans = {w: {w[1:] + d for d in digits} for w in words}
    m = Model(points=words, transition=trans, label=f"shift k={k} depth={depth}")
    cyl = cover(m, {f"[{d}]": {w for w in words if w[0] == d} for d in digits})
    return m, cyl


def make_circle(size: int, multiplier: int = 1, offset: int = 0, arcs: int = 4, length: int = 3):
    """Grid circle with x -> multiplier*x + offset and an arc cover."""
    trans = {p: {(multiplier * p + offset) % size} for p in range(size)}
    m = Model(points=tuple(range(size)), transition=trans, label="circle")
    step = size // arcs
    c = Cover(
        m,
        tuple(
            (f"A{j}", frozenset((step * j + i) % size for i in range(length)))
            for j in range(arcs)
        ),
    )
    return m, c


def make_exercise2(k: int):
    points = tuple(range(1, k + 1))
    m = Model(points=points, transition={p: {1} for p in points}, label="exercise2")
    return m, Cover(m, tuple((f"e{p}", frozenset({p})) for p in points))


def make_exercise1(k: int):
    points = tuple(range(1, k + 1))
    m = Model(points=points, transition={p: set(points) for p in points}, label="exercise1")
    return m, Cover(m, tuple((f"e{p}", frozenset({p})) for p in points))


def brute_nerve_simplices(c: Cover) -> set[tuple[int, ...]]:
    """All vertex subsets with nonempty common intersection, by enumeration."""
    out = set()
    n = len(c.sets)
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            inter = frozenset(c.model.points)
            for i in combo:
                inter &= c.sets[i]
            if inter:
                out.add(combo)
    return out


def brute_min_subcover(c: Cover) -> int:
    """Exhaustive minimal subcover size; exponential, for oracles only."""
    universe = set(c.model.points)
    sets = c.sets
    for r in range(1, len(sets) + 1):
        for combo in itertools.combinations(sets, r):
            union = set()
            for s in combo:
                union |= s
            if union == universe:
                return r
    raise AssertionError("not a cover")


def brute_covering_number(c: Cover, subset) -> int:
    subset = set(subset)
    if not subset:
        return 0
    for r in range(1, len(c.sets) + 1):
        for combo in itertools.combinations(c.sets, r):
            union = set()
            for s in combo:
                union |= s
            if subset <= union:
                return r
    raise AssertionError("subset not coverable")


def random_model_and_cover(rng, max_points: int = 12, max_elements: int = 8, total: bool = True):
    """Seeded random model plus a true cover (union forced to everything)."""
    n = rng.randint(2, max_points)
    points = tuple(range(n))
    trans = {}
    for p in points:
        if total:
            size = rng.randint(1, 3)
        else:
            size = rng.randint(0, 3)
        trans[p] = set(rng.sample(points, min(size, n)))
    m = Model(points=points, transition=trans, label="random")
    k = rng.randint(1, max_elements)
    elements = []
    for i in range(k):
        size = rng.randint(1, n)
        elements.append([f"U{i}", set(rng.sample(points, size))])
    covered = set().union(*(s for _, s in elements))
    for p in set(points) - covered:
        elements[rng.randrange(k)][1].add(p)
    return m, Cover(m, tuple((name, frozenset(s)) for name, s in elements))

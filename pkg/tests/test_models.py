import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverdyn.errors import DomainError, ModelMismatchError
from coverdyn.models import (
    Cover,
    Model,
    PLIntervalSpec,
    complement_cover,
    cover,
    discretize_interval_map,
    iterated_join,
    join,
    preimage_cover,
    refines,
)

from conftest import make_circle, make_exercise2, make_shift


def test_model_rejects_duplicates_and_stray_successors():
    with pytest.raises(ValueError):
        Model(points=(1, 1), transition={1: set()})
    with pytest.raises(ValueError):
        Model(points=(1, 2), transition={1: {3}})
    with pytest.raises(ValueError):
        Model(points=(), transition={})


def test_cover_validation():
    m = Model(points=(1, 2, 3), transition={p: {p} for p in (1, 2, 3)})
    with pytest.raises(ValueError):
        Cover(m, (("A", frozenset()),))
    with pytest.raises(ValueError):
        Cover(m, (("A", frozenset({1})), ("A", frozenset({2}))))
    partial = Cover(m, (("A", frozenset({1})),))
    assert not partial.is_cover
    full = Cover(m, (("A", frozenset({1, 2})), ("B", frozenset({3}))))
    assert full.is_cover


def test_join_with_trivial_cover_is_identity_on_sets():
    m = Model(points=(1, 2, 3), transition={p: {p} for p in (1, 2, 3)})
    alpha = cover(m, {"X": {1, 2, 3}})
    beta = cover(m, {"A": {1, 2}, "B": {2, 3}})
    assert join(alpha, beta).set_family() == beta.set_family()
    assert join(beta, alpha).set_family() == beta.set_family()


def test_join_pairwise_intersections():
    m = Model(points=(1, 2, 3), transition={p: {p} for p in (1, 2, 3)})
    a = cover(m, {"A": {1, 2}, "B": {2, 3}})
    b = cover(m, {"C": {1, 2, 3}})
    j = join(a, b)
    assert j.set_family() == frozenset({frozenset({1, 2}), frozenset({2, 3})})
    assert j.names == ("A∧C", "B∧C")


def test_join_of_shift_cylinders_gives_two_cylinders():
    m, cyl = make_shift(2, 3)
    joined = join(cyl, preimage_cover(m, cyl))
    # the four 2-cylinders of the full 2-shift
    expected = {
        frozenset(w for w in m.points if w[:2] == p) for p in ("00", "01", "10", "11")
    }
    assert joined.set_family() == frozenset(expected)
    assert len(joined) == 4


def test_join_model_mismatch():
    m1 = Model(points=(1,), transition={1: {1}})
    m2 = Model(points=(2,), transition={2: {2}})
    with pytest.raises(ModelMismatchError):
        join(cover(m1, {"A": {1}}), cover(m2, {"B": {2}}))


def test_preimage_identity_map():
    m, arcs = make_circle(8)
    pre = preimage_cover(m, arcs)
    assert pre.set_family() == arcs.set_family()


def test_preimage_exercise2_discards_empties():
    m, sing = make_exercise2(3)
    pre = preimage_cover(m, sing)
    assert pre.set_family() == frozenset({frozenset({1, 2, 3})})
    assert pre.is_cover


def test_preimage_shift_gives_second_coordinate_cylinders():
    m, cyl = make_shift(2, 2)
    pre = preimage_cover(m, cyl)
    # oracle: enumerate the words of length 2 directly
    expected = {
        frozenset(w for w in m.points if w[1] == d) for d in "01"
    }
    assert pre.set_family() == frozenset(expected)


def test_preimage_can_lose_covering():
    m = Model(points=(1, 2), transition={1: {1}, 2: set()})
    pre = preimage_cover(m, cover(m, {"A": {1}, "B": {2}}))
    assert not pre.is_cover


def test_iterated_join_base_case():
    m, arcs = make_circle(8)
    assert iterated_join(m, arcs, 1) is arcs
    with pytest.raises(ValueError):
        iterated_join(m, arcs, 0)


def test_iterated_join_shift_three_cylinders():
    m, cyl = make_shift(2, 3)
    third = iterated_join(m, cyl, 3)
    assert len(third) == 8
    assert all(len(s) == 1 for s in third.sets)


def test_iterated_join_exercise2_stabilizes():
    m, sing = make_exercise2(3)
    for n in (2, 3):
        assert iterated_join(m, sing, n).set_family() == sing.set_family()


def test_refines_order():
    m, cyl = make_shift(2, 3)
    two = join(cyl, preimage_cover(m, cyl))
    assert refines(cyl, cyl)
    trivial = cover(m, {"X": set(m.points)})
    assert refines(trivial, cyl)
    assert refines(cyl, two)
    assert not refines(two, cyl)


def test_complement_cover_values():
    m = Model(points=(1, 2, 3), transition={p: {p} for p in (1, 2, 3)})
    assert complement_cover(cover(m, {"X": {1, 2, 3}})) == (frozenset(),)
    assert complement_cover(cover(m, {"A": {1, 2}, "X": {1, 2, 3}}))[0] == frozenset({3})


def test_complement_cover_circle_arcs():
    m, _ = make_circle(8)
    arcs4 = cover(m, {f"A{j}": {(2 * j + i) % 8 for i in range(4)} for j in range(4)})
    comps = complement_cover(arcs4)
    assert all(len(c) == 4 for c in comps)
    # direct set complement oracle
    for (name, s), c in zip(arcs4.elements, comps):
        assert c == frozenset(range(8)) - s


def test_pl_spec_validation():
    with pytest.raises(ValueError):
        PLIntervalSpec(breakpoints=(0,), slopes=(), intercepts=(), resolution=8)
    with pytest.raises(DomainError):
        PLIntervalSpec(breakpoints=(0, 1), slopes=(2,), intercepts=(0,), resolution=8)
    spec = PLIntervalSpec(
        breakpoints=(0, "1/2", 1),
        slopes=("1/2", "1/2"),
        intercepts=(0, 0),
        resolution=8,
    )
    assert spec.value(Fraction(1, 2)) == Fraction(1, 4)


def test_discretize_identity_transitions():
    spec = PLIntervalSpec(breakpoints=(0, 1), slopes=(1,), intercepts=(0,), resolution=8)
    m, windows = discretize_interval_map(spec)
    for c in range(7):
        assert m.transition[c] == frozenset({c, c + 1})
    assert m.transition[7] == frozenset({7})
    assert windows.is_cover and len(windows) == 7


def test_discretize_halving_cell_images():
    spec = PLIntervalSpec(
        breakpoints=(0, 1), slopes=(Fraction(1, 2),), intercepts=(0,), resolution=16
    )
    m, _ = discretize_interval_map(spec)
    # interval arithmetic by hand: cell 8 = [1/2, 9/16) maps into [1/4, 9/32]
    assert m.transition[8] == frozenset({4})
    assert m.transition[9] == frozenset({4, 5})


def test_discretize_requires_resolution_four():
    spec = PLIntervalSpec(breakpoints=(0, 1), slopes=(1,), intercepts=(0,), resolution=2)
    with pytest.raises(ValueError):
        discretize_interval_map(spec)


# --- algebraic properties -------------------------------------------------

points_strategy = st.integers(min_value=0, max_value=5)


def _cover_strategy(with_model=True):
    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=1, max_value=5))
        pts = tuple(range(n))
        succ = {
            p: {draw(st.integers(min_value=0, max_value=n - 1))} for p in pts
        }
        m = Model(points=pts, transition=succ)
        k = draw(st.integers(min_value=1, max_value=4))
        elements = []
        for i in range(k):
            s = draw(st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=n))
            elements.append((f"U{i}", frozenset(s)))
        missing = set(pts) - set().union(*(s for _, s in elements))
        if missing:
            elements.append(("fill", frozenset(missing)))
        return m, Cover(m, tuple(elements))

    return build()


def _maximal_family(c: Cover) -> frozenset:
    sets = c.set_family()
    return frozenset(s for s in sets if not any(s < t for t in sets))


@given(_cover_strategy())
@settings(max_examples=60, deadline=None)
def test_join_idempotent_up_to_normalisation(mc):
    m, c = mc
    assert join(c, c).set_family() == _maximal_family(c)


@given(_cover_strategy(), _cover_strategy())
@settings(max_examples=60, deadline=None)
def test_join_commutative(mc1, mc2):
    m1, c1 = mc1
    m2, c2 = mc2
    if m1 != m2:
        return
    assert join(c1, c2).set_family() == join(c2, c1).set_family()


@given(_cover_strategy())
@settings(max_examples=60, deadline=None)
def test_join_refined_by_both_and_associative(mc):
    m, c = mc
    other = cover(m, {"X": set(m.points)})
    j = join(c, other)
    assert refines(c, j)
    assert refines(other, j)
    assert join(join(c, other), c).set_family() == join(c, join(other, c)).set_family()


@given(_cover_strategy())
@settings(max_examples=60, deadline=None)
def test_preimage_distributes_over_join_single_valued(mc):
    m, c = mc
    # single-valued total transitions by construction
    other = Cover(
        m,
        tuple(
            (f"V{p}", frozenset({p, (p + 1) % len(m.points)})) for p in m.points
        ),
    )
    lhs = preimage_cover(m, join(c, other)).set_family()
    rhs = join(preimage_cover(m, c), preimage_cover(m, other)).set_family()
    assert lhs == rhs


@given(_cover_strategy())
@settings(max_examples=60, deadline=None)
def test_preimage_of_total_single_valued_is_cover(mc):
    m, c = mc
    assert preimage_cover(m, c).is_cover


@given(_cover_strategy())
@settings(max_examples=30, deadline=None)
def test_refines_preorder(mc):
    m, c = mc
    assert refines(c, c)
    j = join(c, c)
    assert refines(c, j)
    jj = join(j, j)
    # transitivity along the chain c < j < jj
    assert refines(c, jj)

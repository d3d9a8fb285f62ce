from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linsys.core import (
    DuplicatePointInLine,
    EmptyLine,
    LinearSystem,
    PairSharesTwoPoints,
    are_isomorphic,
    cycle_system,
    degrees,
    fano,
    fano_minus_line,
    padded_fano_minus_line,
    is_intersecting,
    is_nu2_isomorphic,
    isomorphic_exact,
    pencil,
    prune_low_degree,
    remove_line,
    single_line,
    triangle,
    uniformity,
    validate,
)

from oracles import random_linear_system


def test_two_points_shared_is_rejected():
    with pytest.raises(PairSharesTwoPoints) as info:
        LinearSystem.from_lines([("a", "b", "c"), ("a", "b", "d")])
    assert set(info.value.shared) == {"a", "b"}


def test_duplicate_point_and_empty_line_rejected():
    with pytest.raises(DuplicatePointInLine):
        LinearSystem.from_lines([("a", "a")])
    with pytest.raises(EmptyLine):
        LinearSystem.from_lines([()])


def test_fano_valid_by_pair_scan():
    ls = fano()
    assert validate(ls).ok
    assert len(ls.points) == 7 and len(ls.lines) == 7
    for a, b in itertools.combinations(ls.line_sets, 2):
        assert len(a & b) == 1
    assert validate(single_line()).ok


def test_intersecting():
    assert is_intersecting(fano())
    assert not is_intersecting(LinearSystem.from_lines([("a", "b"), ("c", "d")]))
    assert is_intersecting(pencil(4))


def test_uniformity():
    assert uniformity(fano()) == 3
    assert uniformity(LinearSystem.from_lines([("a", "b"), ("b", "c", "d")])) is None
    assert uniformity(padded_fano_minus_line()) == 4


def test_degrees():
    prof = degrees(pencil(5))
    assert prof.degree["c"] == 5 and prof.max_degree == 5
    assert set(degrees(fano()).degree.values()) == {3}
    assert degrees(triangle()).max_degree == 2
    assert set(degrees(triangle()).degree.values()) == {2}


def test_prune_strips_padding():
    core = prune_low_degree(padded_fano_minus_line())
    assert isomorphic_exact(core, fano_minus_line()) is not None
    assert uniformity(core) == 3 and len(core.lines) == 6


def test_prune_fixpoint_and_single_line():
    assert prune_low_degree(fano()) == fano()
    empty = prune_low_degree(single_line())
    assert empty.points == frozenset() and empty.lines == ()


def test_isomorphism_examples():
    rng = random.Random(3)
    pts = sorted(fano().points)
    perm = pts[:]
    rng.shuffle(perm)
    mapping = dict(zip(pts, perm))
    relabeled = fano().relabel(mapping)
    ok, witness = are_isomorphic(fano(), relabeled)
    assert ok
    image = {frozenset(witness[p] for p in line) for line in fano().lines}
    assert image == set(relabeled.line_sets)
    assert not are_isomorphic(fano(), fano_minus_line())[0]


def test_nu2_isomorphism():
    assert is_nu2_isomorphic(padded_fano_minus_line(), fano_minus_line())
    assert is_nu2_isomorphic(fano(), fano())
    assert not is_nu2_isomorphic(fano(), triangle())


def test_all_fano_minus_line_choices_isomorphic():
    for i in range(7):
        assert isomorphic_exact(fano_minus_line(i), fano_minus_line(0)) is not None


def test_cycles_distinguish_lengths():
    assert isomorphic_exact(cycle_system(6), cycle_system(6)) is not None
    two_triangles = LinearSystem.from_lines(
        [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")]
    )
    assert isomorphic_exact(cycle_system(6), two_triangles) is None


def test_remove_line():
    ls = fano_minus_line()
    assert len(ls.lines) == 6 and len(ls.points) == 7
    gone = remove_line(single_line(), 0)
    assert gone.points == frozenset() and gone.lines == ()
    two = remove_line(triangle(), 0)
    assert len(two.lines) == 2 and len(two.line_sets[0] & two.line_sets[1]) == 1
    with pytest.raises(IndexError):
        remove_line(triangle(), 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_isomorphism_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    ls = random_linear_system(rng, max_points=10, max_lines=7)
    pts = sorted(ls.points)
    perm = pts[:]
    rng.shuffle(perm)
    other = LinearSystem.from_lines(
        [tuple(dict(zip(pts, perm))[p] for p in line) for line in reversed(ls.lines)]
    )
    witness = isomorphic_exact(ls, other)
    assert witness is not None
    assert {frozenset(witness[p] for p in l) for l in ls.lines} == set(other.line_sets)

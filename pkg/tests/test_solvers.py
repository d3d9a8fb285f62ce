from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linsys.core import (
    LinearSystem,
    fano,
    padded_fano_minus_line,
    is_intersecting,
    pencil,
    remove_line,
    single_line,
    triangle,
)
from linsys.solvers import (
    BudgetExceeded,
    NotIntersecting,
    greedy_transversal,
    is_transversal,
    is_two_packing,
    pairing_cover_bound,
    transversal_number,
    two_packing_number,
)

from oracles import brute_nu2, brute_tau, random_linear_system


def test_tau_examples():
    tau, w = transversal_number(pencil(5))
    assert tau == 1 and w.points == {"c"}
    assert transversal_number(triangle())[0] == 2
    assert transversal_number(fano())[0] == 3 == brute_tau(fano())
    assert transversal_number(padded_fano_minus_line())[0] == 3 == brute_tau(padded_fano_minus_line())


def test_nu2_examples():
    for k in (3, 4, 6):
        assert two_packing_number(pencil(k))[0] == 2
    assert two_packing_number(triangle())[0] == 3
    assert two_packing_number(fano())[0] == 4 == brute_nu2(fano())
    assert two_packing_number(padded_fano_minus_line())[0] == 4 == brute_nu2(padded_fano_minus_line())


def test_tiny_line_counts():
    assert two_packing_number(LinearSystem.empty())[0] == 0
    assert two_packing_number(single_line())[0] == 1
    assert transversal_number(LinearSystem.empty())[0] == 0


def test_greedy():
    assert len(greedy_transversal(pencil(4))) == 1
    g = greedy_transversal(fano())
    assert is_transversal(fano(), g) and 3 <= len(g) <= 4
    assert greedy_transversal(LinearSystem.empty()) == frozenset()


def test_pairing_cover_bound():
    bound, pts = pairing_cover_bound(padded_fano_minus_line())
    assert bound == 3 and is_transversal(padded_fano_minus_line(), pts)
    assert pairing_cover_bound(single_line())[0] == 1
    bound, _ = pairing_cover_bound(fano())
    assert bound == 4 and transversal_number(fano())[0] <= bound
    with pytest.raises(NotIntersecting):
        pairing_cover_bound(LinearSystem.from_lines([("a", "b"), ("c", "d")]))


def test_budget_exceeded_reports_interval():
    ls = fano()
    with pytest.raises(BudgetExceeded) as info:
        transversal_number(ls, budget=1)
    exc = info.value
    assert exc.lower <= brute_tau(ls) <= exc.upper
    assert is_transversal(ls, exc.witness)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_solvers_match_oracle(seed):
    ls = random_linear_system(random.Random(seed), 12, 9)
    tau, tw = transversal_number(ls)
    nu2, pw = two_packing_number(ls)
    assert tau == brute_tau(ls)
    assert nu2 == brute_nu2(ls)
    assert is_transversal(ls, tw.points) and len(tw.points) == tau
    assert is_two_packing(ls, pw.lines) and len(pw.lines) == nu2


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_line_removal_monotonicity(seed):
    ls = random_linear_system(random.Random(seed), 12, 9)
    if not ls.lines:
        return
    tau, nu2 = transversal_number(ls)[0], two_packing_number(ls)[0]
    for i in range(len(ls.lines)):
        smaller = remove_line(ls, i)
        assert transversal_number(smaller)[0] <= tau
        assert nu2 - 1 <= two_packing_number(smaller)[0] <= nu2


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_sandwich_under_standing_hypothesis(seed):
    ls = random_linear_system(random.Random(seed), 12, 9)
    tau, nu2 = transversal_number(ls)[0], two_packing_number(ls)[0]
    assert (nu2 + 1) // 2 <= tau
    if nu2 >= 2 and (len(ls.lines) > nu2 or is_intersecting(ls)):
        assert tau <= nu2 * (nu2 - 1) // 2


def test_sandwich_upper_fails_without_hypothesis():
    # one line: tau = 1 but nu2(nu2-1)/2 = 0; two disjoint lines: tau = 2 > 1
    assert transversal_number(single_line())[0] == 1
    two = LinearSystem.from_lines([("a", "b"), ("c", "d")])
    assert transversal_number(two)[0] == 2 and two_packing_number(two)[0] == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_intersecting_tau_within_pairing_bound(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 6)
    ls = pencil(k, rng.randint(2, 4)) if rng.random() < 0.3 else fano()
    if rng.random() < 0.5 and len(ls.lines) > 1:
        ls = remove_line(ls, rng.randrange(len(ls.lines)))
    if is_intersecting(ls):
        assert transversal_number(ls)[0] <= pairing_cover_bound(ls)[0]


def test_deterministic_witnesses():
    a = transversal_number(fano())[1].points, two_packing_number(fano())[1].lines
    b = transversal_number(fano())[1].points, two_packing_number(fano())[1].lines
    assert a == b

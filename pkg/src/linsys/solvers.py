"""Exact transversal and 2-packing numbers by branch and bound.

Both solvers count search nodes against a budget rather than wall-clock
time, so node counts and witnesses are reproducible. Points are tried in
identifier order and lines in index order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import LinearSystem, is_intersecting

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """The search ran out of nodes; ``lower``..``upper`` brackets the answer."""

    def __init__(self, what: str, lower: int, upper: int, witness: object = None):
        super().__init__(f"{what}: node budget exhausted, value in [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.witness = witness


class NotIntersecting(ValueError):
    pass


class SolverError(AssertionError):
    """A solver produced a witness that fails independent verification."""


@dataclass(frozen=True)
class TransversalWitness:
    points: frozenset[str]

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class PackingWitness:
    lines: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.lines)


def is_transversal(ls: LinearSystem, points) -> bool:
    pts = set(points)
    return all(pts.intersection(line) for line in ls.lines)


def is_two_packing(ls: LinearSystem, line_indices) -> bool:
    counts: dict[str, int] = {}
    for i in line_indices:
        for p in ls.lines[i]:
            counts[p] = counts.get(p, 0) + 1
            if counts[p] > 2:
                return False
    return True


def _points_of(ls: LinearSystem, mask: int) -> frozenset[str]:
    names = ls.sorted_points
    out = []
    while mask:
        low = mask & -mask
        out.append(names[low.bit_length() - 1])
        mask ^= low
    return frozenset(out)


def _greedy_mask(masks: list[int], npoints: int) -> int:
    uncovered = [m for m in masks]
    chosen = 0
    while uncovered:
        best, best_deg = -1, 0
        for p in range(npoints):
            bit = 1 << p
            d = sum(1 for m in uncovered if m & bit)
            if d > best_deg:
                best, best_deg = p, d
        bit = 1 << best
        chosen |= bit
        uncovered = [m for m in uncovered if not m & bit]
    return chosen


def greedy_transversal(ls: LinearSystem) -> frozenset[str]:
    """Repeatedly take a point on the most uncovered lines (ties: smallest id)."""
    return _points_of(ls, _greedy_mask(list(ls.line_masks), len(ls.points)))


def _disjoint_lower_bound(masks: list[int]) -> int:
    """Size of a greedily built family of pairwise disjoint lines."""
    used = 0
    count = 0
    for m in sorted(masks, key=lambda m: (m.bit_count(), m)):
        if not m & used:
            used |= m
            count += 1
    return count


def pairing_cover_bound(ls: LinearSystem) -> tuple[int, frozenset[str]]:
    """Cover an intersecting system by pairing up its lines.

    Each pair is hit by its common point; an odd line out is hit by its
    first point. Returns ``(ceil(|L|/2), transversal)``.
    """
    if not is_intersecting(ls):
        raise NotIntersecting("pairing cover needs an intersecting system")
    n = len(ls.lines)
    pts: set[str] = set()
    for i in range(0, n - 1, 2):
        pts.add(ls.meet(i, i + 1))
    if n % 2:
        pts.add(min(ls.lines[-1]))
    bound = (n + 1) // 2
    # shared meeting points can only shrink the set
    assert len(pts) <= bound and is_transversal(ls, pts)
    return bound, frozenset(pts)


def transversal_number(
    ls: LinearSystem, budget: int = DEFAULT_BUDGET
) -> tuple[int, TransversalWitness]:
    """Minimum transversal by iterative deepening between cheap bounds."""
    masks = list(ls.line_masks)
    if not masks:
        return 0, TransversalWitness(frozenset())
    npoints = len(ls.points)
    upper_mask = _greedy_mask(masks, npoints)
    upper = upper_mask.bit_count()
    lower = _disjoint_lower_bound(masks)
    nodes = 0

    def search(uncovered: list[int], k: int, chosen: int) -> int | None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("transversal", lower, upper, _points_of(ls, upper_mask))
        if not uncovered:
            return chosen
        if k == 0 or _disjoint_lower_bound(uncovered) > k:
            return None
        line = min(uncovered, key=lambda m: (m.bit_count(), m))
        rest = line
        while rest:
            bit = rest & -rest
            rest ^= bit
            found = search([m for m in uncovered if not m & bit], k - 1, chosen | bit)
            if found is not None:
                return found
        return None

    best_mask = upper_mask
    for k in range(lower, upper):
        found = search(masks, k, 0)
        if found is not None:
            best_mask = found
            break
        lower = k + 1
    witness = TransversalWitness(_points_of(ls, best_mask))
    if not is_transversal(ls, witness.points):
        raise SolverError("transversal witness misses a line")
    return witness.size, witness


def two_packing_number(
    ls: LinearSystem, budget: int = DEFAULT_BUDGET
) -> tuple[int, PackingWitness]:
    """Largest set of lines with no point on three of them."""
    masks = list(ls.line_masks)
    n = len(masks)
    # greedy incumbent
    once = twice = 0
    best: list[int] = []
    for i, m in enumerate(masks):
        if not m & twice:
            twice |= once & m
            once |= m
            best.append(i)
    nodes = 0
    current: list[int] = []

    def search(i: int, once: int, twice: int) -> None:
        nonlocal nodes, best
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("2-packing", len(best), n, tuple(best))
        if len(current) + (n - i) <= len(best):
            return
        if i == n:
            best = list(current)
            return
        m = masks[i]
        if not m & twice:
            current.append(i)
            search(i + 1, once | m, twice | (once & m))
            current.pop()
        search(i + 1, once, twice)

    search(0, 0, 0)
    witness = PackingWitness(tuple(best))
    if not is_two_packing(ls, witness.lines):
        raise SolverError("2-packing witness has a point on three lines")
    return witness.size, witness

"""Finite linear systems: data model, validation, degrees, pruning, isomorphism."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


class LinearSystemError(ValueError):
    """Base class for invalid linear-system input."""


class DuplicatePointInLine(LinearSystemError):
    def __init__(self, line: int, point: str):
        super().__init__(f"line {line} lists point {point!r} twice")
        self.line = line
        self.point = point


class PairSharesTwoPoints(LinearSystemError):
    def __init__(self, first: int, second: int, shared: tuple[str, str]):
        super().__init__(
            f"lines {first} and {second} share two points {shared[0]!r}, {shared[1]!r}"
        )
        self.lines = (first, second)
        self.shared = shared


class EmptyLine(LinearSystemError):
    def __init__(self, line: int):
        super().__init__(f"line {line} is empty")
        self.line = line


class UnknownPoint(LinearSystemError):
    def __init__(self, line: int, point: str):
        super().__init__(f"line {line} uses point {point!r} missing from the point set")
        self.line = line
        self.point = point


class DuplicateLine(LinearSystemError):
    def __init__(self, first: int, second: int):
        super().__init__(f"lines {first} and {second} are equal as sets")
        self.lines = (first, second)


class IsomorphismTimeout(RuntimeError):
    """The isomorphism search exhausted its node budget without a decision."""


@dataclass(frozen=True)
class ValidationResult:
    error: LinearSystemError | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class DegreeProfile:
    degree: dict[str, int]

    @property
    def max_degree(self) -> int:
        return max(self.degree.values(), default=0)

    def points_of_degree(self, d: int) -> list[str]:
        return sorted(p for p, k in self.degree.items() if k == d)


@dataclass(frozen=True, eq=True)
class LinearSystem:
    """A point set together with an ordered family of lines.

    Lines keep the order they were given in; their position is the stable
    line index used by witnesses and reports. Construction does not
    validate; use :meth:`from_lines` or :func:`validate`.
    """

    points: frozenset[str]
    lines: tuple[tuple[str, ...], ...]

    @classmethod
    def from_lines(
        cls, lines: Iterable[Iterable[str]], points: Iterable[str] | None = None
    ) -> LinearSystem:
        lines = tuple(tuple(str(p) for p in line) for line in lines)
        if points is None:
            pts = frozenset(p for line in lines for p in line)
        else:
            pts = frozenset(str(p) for p in points)
        ls = cls(pts, lines)
        result = validate(ls)
        if not result:
            raise result.error
        return ls

    @classmethod
    def empty(cls) -> LinearSystem:
        return cls(frozenset(), ())

    def __len__(self) -> int:
        return len(self.lines)

    @cached_property
    def sorted_points(self) -> tuple[str, ...]:
        return tuple(sorted(self.points))

    @cached_property
    def point_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.sorted_points)}

    @cached_property
    def line_masks(self) -> tuple[int, ...]:
        """Each line as a bitmask over :attr:`sorted_points`."""
        idx = self.point_index
        masks = []
        for line in self.lines:
            m = 0
            for p in line:
                m |= 1 << idx[p]
            masks.append(m)
        return tuple(masks)

    @cached_property
    def line_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(line) for line in self.lines)

    def lines_through(self, point: str) -> list[int]:
        return [i for i, s in enumerate(self.line_sets) if point in s]

    def meet(self, i: int, j: int) -> str | None:
        """The common point of lines ``i`` and ``j``, if any."""
        common = self.line_sets[i] & self.line_sets[j]
        return next(iter(common)) if common else None

    def relabel(self, mapping: dict[str, str]) -> LinearSystem:
        return LinearSystem(
            frozenset(mapping[p] for p in self.points),
            tuple(tuple(mapping[p] for p in line) for line in self.lines),
        )


def validate(ls: LinearSystem) -> ValidationResult:
    """Check the linear-system invariants, reporting the first violation."""
    seen_sets: dict[frozenset[str], int] = {}
    for i, line in enumerate(ls.lines):
        if not line:
            return ValidationResult(EmptyLine(i))
        seen: set[str] = set()
        for p in line:
            if p in seen:
                return ValidationResult(DuplicatePointInLine(i, p))
            if p not in ls.points:
                return ValidationResult(UnknownPoint(i, p))
            seen.add(p)
        key = frozenset(line)
        if key in seen_sets:
            return ValidationResult(DuplicateLine(seen_sets[key], i))
        seen_sets[key] = i
    sets = [frozenset(line) for line in ls.lines]
    for i, j in combinations(range(len(sets)), 2):
        common = sets[i] & sets[j]
        if len(common) >= 2:
            a, b = sorted(common)[:2]
            return ValidationResult(PairSharesTwoPoints(i, j, (a, b)))
    return ValidationResult()


def is_intersecting(ls: LinearSystem) -> bool:
    masks = ls.line_masks
    return all(
        (masks[i] & masks[j]).bit_count() == 1
        for i, j in combinations(range(len(masks)), 2)
    )


def uniformity(ls: LinearSystem) -> int | None:
    sizes = {len(line) for line in ls.lines}
    return sizes.pop() if len(sizes) == 1 else None


def degrees(ls: LinearSystem) -> DegreeProfile:
    counts = Counter(p for line in ls.lines for p in line)
    return DegreeProfile({p: counts.get(p, 0) for p in ls.points})


def prune_low_degree(ls: LinearSystem) -> LinearSystem:
    """Delete every point of degree 0 or 1, iterating to a fixpoint.

    Lines that lose all their points are dropped. The result is a core in
    the hypergraph sense: distinct lines may shrink to the same single
    point, so it need not pass :func:`validate`.
    """
    current = ls
    while True:
        deg = degrees(current)
        keep = {p for p, d in deg.degree.items() if d >= 2}
        if len(keep) == len(current.points):
            return current
        lines = tuple(
            kept
            for kept in (tuple(p for p in line if p in keep) for line in current.lines)
            if kept
        )
        current = LinearSystem(frozenset(keep), lines)


def remove_line(ls: LinearSystem, i: int) -> LinearSystem:
    """Drop line ``i`` and any point left on no line."""
    if not 0 <= i < len(ls.lines):
        raise IndexError(f"line index {i} out of range for {len(ls.lines)} lines")
    lines = ls.lines[:i] + ls.lines[i + 1 :]
    pts = frozenset(p for line in lines for p in line)
    return LinearSystem(pts, lines)


def _signature(ls: LinearSystem) -> tuple:
    deg = degrees(ls)
    return (
        len(ls.points),
        sorted(len(line) for line in ls.lines),
        sorted(deg.degree.values()),
    )


def _find_isomorphism(
    a: LinearSystem, b: LinearSystem, budget: int
) -> dict[str, str] | None:
    if _signature(a) != _signature(b):
        return None
    # multiset of lines, so repeated singleton lines in pruned cores still count
    mult_a = Counter(frozenset(l) for l in a.lines)
    mult_b = Counter(frozenset(l) for l in b.lines)
    if sorted(mult_a.values()) != sorted(mult_b.values()):
        return None

    deg_a = degrees(a).degree
    deg_b = degrees(b).degree
    # points ordered by degree (high first) then identifier
    order = sorted(a.points, key=lambda p: (-deg_a[p], p))
    targets = sorted(b.points, key=lambda p: (-deg_b[p], p))

    def pair_lines(ls: LinearSystem) -> dict[tuple[str, str], frozenset[int]]:
        out: dict[tuple[str, str], set[int]] = {}
        for idx, line in enumerate(ls.lines):
            for p, q in combinations(line, 2):
                out.setdefault((p, q), set()).add(idx)
                out.setdefault((q, p), set()).add(idx)
        return {k: frozenset(v) for k, v in out.items()}

    pa, pb = pair_lines(a), pair_lines(b)
    size_a = [len(l) for l in a.lines]
    size_b = [len(l) for l in b.lines]
    incid_a = {p: a.lines_through(p) for p in a.points}
    incid_b = {p: b.lines_through(p) for p in b.points}

    fwd: dict[str, str] = {}
    used: set[str] = set()
    lmap: dict[int, int] = {}
    lrev: dict[int, int] = {}
    nodes = 0

    def assign(p: str, q: str) -> list[int] | None:
        """Line pairs newly forced by p -> q, or None on conflict."""
        if deg_a[p] != deg_b[q]:
            return None
        if sorted(size_a[i] for i in incid_a[p]) != sorted(size_b[i] for i in incid_b[q]):
            return None
        added: list[int] = []
        for p2, q2 in fwd.items():
            la = pa.get((p, p2))
            lb = pb.get((q, q2))
            if (la is None) != (lb is None):
                break
            if la is None:
                continue
            (i,), (j,) = la, lb
            if lmap.get(i, j) != j or lrev.get(j, i) != i:
                break
            if i not in lmap:
                lmap[i] = j
                lrev[j] = i
                added.append(i)
        else:
            return added
        for i in added:
            del lrev[lmap.pop(i)]
        return None

    def full_check() -> bool:
        image = Counter(frozenset(fwd[p] for p in line) for line in a.lines)
        return image == mult_b

    def extend(k: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise IsomorphismTimeout(f"isomorphism search exceeded {budget} nodes")
        if k == len(order):
            return full_check()
        p = order[k]
        for q in targets:
            if q in used:
                continue
            added = assign(p, q)
            if added is None:
                continue
            fwd[p] = q
            used.add(q)
            if extend(k + 1):
                return True
            del fwd[p]
            used.discard(q)
            for i in added:
                del lrev[lmap.pop(i)]
        return False

    return dict(fwd) if extend(0) else None


def are_isomorphic(
    a: LinearSystem, b: LinearSystem, budget: int = 1_000_000
) -> tuple[bool, dict[str, str] | None]:
    """Decide isomorphism of the pruned cores of ``a`` and ``b``.

    Returns ``(True, bijection)`` mapping core points of ``a`` to core
    points of ``b``, or ``(False, None)``. Raises IsomorphismTimeout when
    the search needs more than ``budget`` nodes.
    """
    witness = _find_isomorphism(prune_low_degree(a), prune_low_degree(b), budget)
    return witness is not None, witness


def is_nu2_isomorphic(a: LinearSystem, b: LinearSystem, budget: int = 1_000_000) -> bool:
    # adding degree-1 points never changes the pruned core
    return are_isomorphic(a, b, budget)[0]


def isomorphic_exact(
    a: LinearSystem, b: LinearSystem, budget: int = 1_000_000
) -> dict[str, str] | None:
    """Plain hypergraph isomorphism without pruning."""
    return _find_isomorphism(a, b, budget)


# Reference instances

FANO_LINES: tuple[tuple[str, ...], ...] = (
    ("1", "2", "4"),
    ("2", "3", "5"),
    ("3", "4", "6"),
    ("4", "5", "7"),
    ("5", "6", "1"),
    ("6", "7", "2"),
    ("7", "1", "3"),
)


def fano() -> LinearSystem:
    return LinearSystem.from_lines(FANO_LINES)


def fano_minus_line(i: int = 0) -> LinearSystem:
    return remove_line(fano(), i)


def padded_fano_minus_line(i: int = 0) -> LinearSystem:
    """Fano plane minus line ``i`` with a fresh degree-1 point on each line."""
    core = fano_minus_line(i)
    return LinearSystem.from_lines(
        line + (f"x{k}",) for k, line in enumerate(core.lines)
    )


def pencil(k: int, r: int = 3) -> LinearSystem:
    """``k`` lines of size ``r`` through the common point ``c``."""
    return LinearSystem.from_lines(
        ("c",) + tuple(f"p{i}_{j}" for j in range(1, r)) for i in range(k)
    )


def triangle() -> LinearSystem:
    return LinearSystem.from_lines([("a", "b"), ("b", "c"), ("c", "a")])


def cycle_system(n: int) -> LinearSystem:
    """The ``n``-cycle as a 2-uniform system."""
    return LinearSystem.from_lines((f"v{i}", f"v{(i + 1) % n}") for i in range(n))


def single_line(points: Sequence[str] = ("a", "b", "c")) -> LinearSystem:
    return LinearSystem.from_lines([tuple(points)])

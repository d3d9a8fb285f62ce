"""Integer-lattice r-segment systems and exhaustive search for intersecting ones.

A segment is ``r`` consecutive lattice points ``base + k*dir`` with ``dir``
primitive. Systems are compared up to translation and the eight symmetries
of the square; canonical keys are the least sorted ``(dx, dy, bx, by)``
encoding over those eight maps after moving the bounding box corner to the
origin.

Search works in two parts. Systems whose segments all pass through one
point (pencils) all induce the same abstract system for a given line count,
so a single canonical pencil per size stands for the family. Every other
intersecting system contains three lines meeting pairwise in three distinct
points; those are generated by growing cliques of compatible segments from
their lexicographically first such triple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Sequence

from .core import LinearSystem, is_intersecting
from .solvers import DEFAULT_BUDGET, BudgetExceeded, transversal_number

Point = tuple[int, int]


class SegmentError(ValueError):
    pass


class NonPrimitiveDirection(SegmentError):
    pass


class LengthBelowTwo(SegmentError):
    pass


class CollinearDuplicate(SegmentError):
    def __init__(self, first: int, second: int):
        super().__init__(f"segments {first} and {second} lie on one Euclidean line")
        self.segments = (first, second)


class MixedLengths(SegmentError):
    pass


def normalize_direction(d: Point) -> Point:
    dx, dy = d
    return (dx, dy) if dx > 0 or (dx == 0 and dy > 0) else (-dx, -dy)


def is_primitive(v: Point) -> bool:
    return gcd(abs(v[0]), abs(v[1])) == 1


@dataclass(frozen=True)
class Segment:
    base: Point
    dir: Point
    length: int

    def check(self) -> None:
        if self.length < 2:
            raise LengthBelowTwo(f"segment length {self.length} is below 2")
        if not is_primitive(self.dir):
            raise NonPrimitiveDirection(f"direction {self.dir} is not primitive")

    def normalized(self) -> Segment:
        """Same point set with ``dir`` pointing lexicographically forward."""
        self.check()
        if normalize_direction(self.dir) == self.dir:
            return self
        end = self.end
        return Segment(end, (-self.dir[0], -self.dir[1]), self.length)

    @property
    def end(self) -> Point:
        k = self.length - 1
        return (self.base[0] + k * self.dir[0], self.base[1] + k * self.dir[1])

    @property
    def sort_key(self) -> tuple[Point, Point]:
        return (self.dir, self.base)

    def points(self) -> list[Point]:
        return segment_points(self)

    def same_line(self, other: Segment) -> bool:
        if normalize_direction(self.dir) != normalize_direction(other.dir):
            return False
        ox, oy = other.base[0] - self.base[0], other.base[1] - self.base[1]
        return ox * self.dir[1] - oy * self.dir[0] == 0


def segment_points(s: Segment) -> list[Point]:
    s.check()
    (bx, by), (dx, dy) = s.base, s.dir
    return [(bx + k * dx, by + k * dy) for k in range(s.length)]


def point_label(p: Point) -> str:
    return f"{p[0]},{p[1]}"


@dataclass(frozen=True)
class SegmentSystem:
    r: int
    segments: tuple[Segment, ...]

    @cached_property
    def linear_system(self) -> LinearSystem:
        lines = tuple(tuple(point_label(p) for p in s.points()) for s in self.segments)
        return LinearSystem(frozenset(p for line in lines for p in line), lines)

    @cached_property
    def point_sets(self) -> tuple[frozenset[Point], ...]:
        return tuple(frozenset(s.points()) for s in self.segments)

    @property
    def points(self) -> frozenset[Point]:
        return frozenset().union(*self.point_sets)

    def __len__(self) -> int:
        return len(self.segments)

    def sorted(self) -> SegmentSystem:
        return SegmentSystem(self.r, tuple(sorted(self.segments, key=lambda s: s.sort_key)))

    def without(self, i: int) -> SegmentSystem:
        if not 0 <= i < len(self.segments):
            raise IndexError(f"segment index {i} out of range")
        return SegmentSystem(self.r, self.segments[:i] + self.segments[i + 1 :])


def build(segs: Iterable[Segment], r: int | None = None) -> SegmentSystem:
    """Normalize and validate segments into a system; order is preserved."""
    segs = [s.normalized() for s in segs]
    lengths = {s.length for s in segs}
    if r is not None:
        lengths.add(r)
    if len(lengths) > 1:
        raise MixedLengths(f"segments have lengths {sorted(lengths)}")
    if not segs and r is None:
        raise MixedLengths("cannot infer r from an empty segment list")
    for i, j in combinations(range(len(segs)), 2):
        if segs[i].same_line(segs[j]):
            raise CollinearDuplicate(i, j)
    return SegmentSystem(lengths.pop(), tuple(segs))


def to_linear_system(ss: SegmentSystem) -> LinearSystem:
    return ss.linear_system


def is_intersecting_segment_system(ss: SegmentSystem) -> bool:
    sets = ss.point_sets
    return all(len(a & b) == 1 for a, b in combinations(sets, 2))


@dataclass(frozen=True)
class TriangleWitness:
    points: tuple[Point, Point, Point]
    lines: tuple[int, int, int]


def contains_triangle(ss: SegmentSystem) -> TriangleWitness | None:
    """Find three non-collinear system points, pairwise consecutive on system lines.

    The three lines are taken from the system (not merely the Euclidean
    lines through the points).
    """
    sets = ss.point_sets
    n = len(sets)
    meet: dict[tuple[int, int], Point] = {}
    for i, j in combinations(range(n), 2):
        common = sets[i] & sets[j]
        if len(common) == 1:
            meet[i, j] = next(iter(common))
    for i, j, k in combinations(range(n), 3):
        a, b, c = meet.get((i, j)), meet.get((i, k)), meet.get((j, k))
        if a is None or b is None or c is None or len({a, b, c}) < 3:
            continue
        # distinct pairwise meets of three distinct lines are never collinear
        if all(is_primitive((p[0] - q[0], p[1] - q[1])) for p, q in ((a, b), (a, c), (b, c))):
            return TriangleWitness((a, b, c), (i, j, k))
    return None


# Symmetries and canonical form

DIHEDRAL = (
    (1, 0, 0, 1),
    (0, -1, 1, 0),
    (-1, 0, 0, -1),
    (0, 1, -1, 0),
    (1, 0, 0, -1),
    (-1, 0, 0, 1),
    (0, 1, 1, 0),
    (0, -1, -1, 0),
)


def _apply(m: tuple[int, int, int, int], p: Point) -> Point:
    a, b, c, d = m
    return (a * p[0] + b * p[1], c * p[0] + d * p[1])


def transform(ss: SegmentSystem, m: tuple[int, int, int, int], shift: Point = (0, 0)) -> SegmentSystem:
    out = []
    for s in ss.segments:
        b = _apply(m, s.base)
        d = _apply(m, s.dir)
        out.append(Segment((b[0] + shift[0], b[1] + shift[1]), d, s.length).normalized())
    return SegmentSystem(ss.r, tuple(out))


CanonicalKey = tuple[tuple[int, int, int, int], ...]


def _key_from_rows(rows: list[tuple[int, int, int, int, int, int]]) -> CanonicalKey:
    """Rows are (dx, dy, bx, by, ex, ey); translate the box corner to the origin."""
    mx = min(min(r[2], r[4]) for r in rows)
    my = min(min(r[3], r[5]) for r in rows)
    return tuple(sorted((r[0], r[1], r[2] - mx, r[3] - my) for r in rows))


def _rows(segs: Iterable[Segment], m) -> list[tuple[int, int, int, int, int, int]]:
    rows = []
    for s in segs:
        b, e = _apply(m, s.base), _apply(m, s.end)
        d = normalize_direction(_apply(m, s.dir))
        lo, hi = (b, e) if b <= e else (e, b)
        rows.append((d[0], d[1], lo[0], lo[1], hi[0], hi[1]))
    return rows


def canonical_key(ss: SegmentSystem) -> CanonicalKey:
    if not ss.segments:
        return ()
    return min(_key_from_rows(_rows(ss.segments, m)) for m in DIHEDRAL)


def from_key(key: CanonicalKey, r: int, shift: Point = (0, 0)) -> SegmentSystem:
    return SegmentSystem(
        r,
        tuple(Segment((bx + shift[0], by + shift[1]), (dx, dy), r) for dx, dy, bx, by in key),
    )


def canonical_form(ss: SegmentSystem) -> SegmentSystem:
    """The canonical representative, bounding box corner at the origin."""
    return from_key(canonical_key(ss), ss.r)


# Search


def box_directions(r: int, box: int) -> list[Point]:
    """Normalized primitive directions of r-segments that fit in [-box, box]^2."""
    span = 2 * box
    out = []
    for dx in range(0, span + 1):
        for dy in range(-span, span + 1):
            d = (dx, dy)
            if d == (0, 0) or normalize_direction(d) != d or not is_primitive(d):
                continue
            if (r - 1) * dx <= span and (r - 1) * abs(dy) <= span:
                out.append(d)
    out.sort(key=lambda d: (max(abs(d[0]), abs(d[1])), d))
    return out


class _Universe:
    """All r-segments in the box, as point bitmasks with a compatibility graph."""

    def __init__(self, r: int, box: int):
        self.r, self.box = r, box
        width = 2 * box + 1
        segs = []
        for d in sorted(box_directions(r, box)):
            for bx in range(-box, box + 1):
                for by in range(-box, box + 1):
                    s = Segment((bx, by), d, r)
                    ex, ey = s.end
                    if -box <= ex <= box and -box <= ey <= box:
                        segs.append(s)
        self.segments = segs
        n = len(segs)
        self.masks = []
        for s in segs:
            m = 0
            for x, y in s.points():
                m |= 1 << ((x + box) * width + (y + box))
            self.masks.append(m)
        by_point: dict[int, int] = {}
        for i, m in enumerate(self.masks):
            rest = m
            while rest:
                bit = rest & -rest
                rest ^= bit
                by_point[bit] = by_point.get(bit, 0) | (1 << i)
        same_dir: dict[Point, int] = {}
        for i, s in enumerate(segs):
            same_dir[s.dir] = same_dir.get(s.dir, 0) | (1 << i)
        self.adj = [0] * n
        for i, m in enumerate(self.masks):
            nb = 0
            rest = m
            while rest:
                bit = rest & -rest
                rest ^= bit
                nb |= by_point[bit]
            # same direction and sharing a point means the same Euclidean line
            self.adj[i] = nb & ~same_dir[segs[i].dir]
        self.minx = [min(s.base[0], s.end[0]) for s in segs]
        self.miny = [min(s.base[1], s.end[1]) for s in segs]
        self.rows = [_rows([s], mtx)[0] for s in segs for mtx in DIHEDRAL]

    def key(self, clique: Sequence[int]) -> CanonicalKey:
        rows = self.rows
        return min(
            _key_from_rows([rows[8 * i + g] for i in clique]) for g in range(8)
        )

    def touches_corner(self, clique: Sequence[int]) -> bool:
        return (
            min(self.minx[i] for i in clique) == -self.box
            and min(self.miny[i] for i in clique) == -self.box
        )

    def is_anchor(self, i: int, j: int, k: int, lattice: bool) -> bool:
        """Three pairwise compatible segments meeting in three distinct points."""
        mi, mj, mk = self.masks[i], self.masks[j], self.masks[k]
        a = mi & mj
        if a & mk:
            return False
        if not lattice:
            return True
        b, c = mi & mk, mj & mk
        pts = [self._coords(x) for x in (a, b, c)]
        return all(
            is_primitive((p[0] - q[0], p[1] - q[1]))
            for p, q in ((pts[0], pts[1]), (pts[0], pts[2]), (pts[1], pts[2]))
        )

    def _coords(self, bit: int) -> Point:
        width = 2 * self.box + 1
        idx = bit.bit_length() - 1
        return (idx // width - self.box, idx % width - self.box)


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass
class SearchStats:
    nodes: int = 0
    complete: bool = True


def _grow(
    u: _Universe,
    max_lines: int | None,
    lattice: bool,
    shards: int,
    shard: int,
    budget: int | None,
    stats: SearchStats,
    best_only: bool = False,
) -> dict[CanonicalKey, int]:
    """Canonical keys of every non-pencil intersecting system, mapped to line count.

    With ``best_only`` the search keeps just the systems of the largest size
    seen so far and prunes branches that cannot reach it.
    """
    found: dict[CanonicalKey, int] = {}
    best = 0
    adj = u.adj
    cap = max_lines if max_lines is not None else 1 << 30
    if cap < 3:
        return found
    n = len(u.segments)

    def anchor_before(x: int, clique: tuple[int, ...], anchor: tuple[int, int, int]) -> bool:
        for a, b in combinations(clique, 2):
            t = tuple(sorted((a, b, x)))
            if t < anchor and u.is_anchor(*t, lattice):
                return True
        return False

    for i in range(n):
        if i % shards != shard:
            continue
        for j in _bits(adj[i] >> (i + 1) << (i + 1)):
            for k in _bits(adj[i] & adj[j] >> (j + 1) << (j + 1)):
                if not u.is_anchor(i, j, k, lattice):
                    continue
                anchor = (i, j, k)
                stack = [((i, j, k), adj[i] & adj[j] & adj[k], -1)]
                while stack:
                    clique, cand, last = stack.pop()
                    stats.nodes += 1
                    if budget is not None and stats.nodes > budget:
                        stats.complete = False
                        return found
                    size = len(clique)
                    if best_only and size + (cand >> (last + 1)).bit_count() < best:
                        continue
                    if u.touches_corner(clique):
                        if best_only and size > best:
                            best = size
                            found = {key: s for key, s in found.items() if s >= best}
                        if not best_only or size >= best:
                            found[u.key(clique)] = size
                    if size >= cap:
                        continue
                    for x in _bits(cand >> (last + 1) << (last + 1)):
                        if anchor_before(x, clique, anchor):
                            continue
                        stack.append((clique + (x,), cand & adj[x], x))
    return found


def pencil_capacity(r: int, box: int) -> tuple[int, Point, list[tuple[Point, int]]]:
    """Most segments through a single lattice point of the box.

    Returns the count, the first centre achieving it, and for each usable
    direction the offset of the centre along the segment.
    """
    best: tuple[int, Point, list] = (0, (0, 0), [])
    dirs = box_directions(r, box)
    # most central offset first
    offsets = sorted(range(r), key=lambda o: (abs(2 * o - (r - 1)), o))
    for cx in range(-box, box + 1):
        for cy in range(-box, box + 1):
            usable = []
            for d in dirs:
                for off in offsets:
                    bx, by = cx - off * d[0], cy - off * d[1]
                    ex, ey = bx + (r - 1) * d[0], by + (r - 1) * d[1]
                    if all(-box <= c <= box for c in (bx, by, ex, ey)):
                        usable.append((d, off))
                        break
            if len(usable) > best[0]:
                best = (len(usable), (cx, cy), usable)
    return best


def pencil_representative(r: int, box: int, k: int) -> SegmentSystem | None:
    """Canonical pencil of ``k`` r-segments in the box, or None if none fits."""
    count, (cx, cy), usable = pencil_capacity(r, box)
    if k > count or k < 1:
        return None
    segs = [
        Segment((cx - off * d[0], cy - off * d[1]), d, r) for d, off in usable[:k]
    ]
    return _place(canonical_form(SegmentSystem(r, tuple(segs))), box)


def _all_pencils(u: _Universe, max_lines: int | None, stats: SearchStats, budget: int | None) -> dict[CanonicalKey, int]:
    """Every pencil, by brute force over centres. Only viable in small boxes."""
    found: dict[CanonicalKey, int] = {}
    cap = max_lines if max_lines is not None else 1 << 30
    through: dict[int, int] = {}
    for i, m in enumerate(u.masks):
        for b in _bits(m):
            through[b] = through.get(b, 0) | (1 << i)
    for point in sorted(through):
        segs = through[point]
        stack = [((), segs, -1)]
        while stack:
            clique, cand, last = stack.pop()
            stats.nodes += 1
            if budget is not None and stats.nodes > budget:
                stats.complete = False
                return found
            if clique and u.touches_corner(clique):
                found[u.key(clique)] = len(clique)
            if len(clique) >= cap:
                continue
            for x in _bits(cand >> (last + 1) << (last + 1)):
                stack.append((clique + (x,), cand & u.adj[x], x))
    return found


def _place(ss: SegmentSystem, box: int) -> SegmentSystem:
    """Shift a corner-anchored canonical form into the [-box, box] frame."""
    return SegmentSystem(
        ss.r,
        tuple(Segment((s.base[0] - box, s.base[1] - box), s.dir, s.length) for s in ss.segments),
    )


@dataclass
class Enumeration:
    """Classes of intersecting systems found in one box, keyed canonically."""

    r: int
    box: int
    max_lines: int | None
    require_triangle: bool
    pencils: str
    classes: dict[CanonicalKey, int] = field(default_factory=dict)
    nodes: int = 0
    complete: bool = True
    pencil_keys: set[CanonicalKey] = field(default_factory=set)

    def systems(self) -> Iterator[SegmentSystem]:
        for key in sorted(self.classes):
            yield _place(from_key(key, self.r), self.box)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for size in self.classes.values():
            out[size] = out.get(size, 0) + 1
        return dict(sorted(out.items()))

    def merge(self, other: Enumeration) -> Enumeration:
        merged = Enumeration(
            self.r, self.box, self.max_lines, self.require_triangle, self.pencils,
            {**self.classes, **other.classes},
            self.nodes + other.nodes,
            self.complete and other.complete,
            self.pencil_keys | other.pencil_keys,
        )
        return merged

    def best_non_pencil(self) -> tuple[int, list[SegmentSystem]]:
        sizes = {k: s for k, s in self.classes.items() if k not in self.pencil_keys}
        best = max(sizes.values(), default=0)
        return best, [
            _place(from_key(k, self.r), self.box) for k in sorted(sizes) if sizes[k] == best
        ]


def enumerate_classes(
    r: int,
    max_lines: int | None,
    box: int,
    *,
    require_triangle: bool = False,
    pencils: str = "representative",
    shards: int = 1,
    shard: int = 0,
    budget: int | None = None,
) -> Enumeration:
    """All intersecting r-segment systems in ``[-box, box]^2`` up to symmetry.

    ``pencils="representative"`` keeps one pencil per line count (they all
    induce isomorphic linear systems); ``"all"`` lists every pencil class
    and is only practical for tiny boxes. Sharding splits the non-pencil
    search by the first segment of each anchor; pencil representatives are
    produced by shard 0.
    """
    if r < 2 or box < 1:
        raise ValueError("need r >= 2 and box >= 1")
    if pencils not in ("representative", "all", "none"):
        raise ValueError(f"unknown pencil mode {pencils!r}")
    if not 0 <= shard < shards:
        raise ValueError(f"shard {shard} outside 0..{shards - 1}")
    u = _Universe(r, box)
    stats = SearchStats()
    classes = _grow(u, max_lines, require_triangle, shards, shard, budget, stats)
    pencil_keys: set[CanonicalKey] = set()
    if not require_triangle and shard == 0:
        if pencils == "representative":
            cap, _, _ = pencil_capacity(r, box)
            top = cap if max_lines is None else min(cap, max_lines)
            for k in range(1, top + 1):
                key = canonical_key(pencil_representative(r, box, k))
                classes[key] = k
                pencil_keys.add(key)
        elif pencils == "all":
            found = _all_pencils(u, max_lines, stats, budget)
            classes.update(found)
            pencil_keys.update(found)
    return Enumeration(
        r, box, max_lines, require_triangle, pencils, classes, stats.nodes, stats.complete,
        pencil_keys,
    )


def enumerate_systems(
    r: int, max_lines: int | None, box: int, **kwargs
) -> Iterator[SegmentSystem]:
    """Stream the systems of :func:`enumerate_classes` in canonical order."""
    yield from enumerate_classes(r, max_lines, box, **kwargs).systems()


@dataclass
class SearchResult:
    r: int
    box: int
    require_triangle: bool
    best: int
    extremal: list[SegmentSystem]
    complete: bool
    nodes: int
    pencil_max: int

    @property
    def best_system(self) -> SegmentSystem | None:
        return self.extremal[0] if self.extremal else None


def max_lines_search(
    r: int,
    box: int,
    *,
    require_triangle: bool = False,
    budget: int | None = DEFAULT_BUDGET,
    shards: int = 1,
    shard: int = 0,
    max_lines: int | None = None,
) -> SearchResult:
    """Largest non-pencil intersecting r-segment systems in the box.

    Pencils are reported separately as ``pencil_max``: their size is set by
    the number of directions that fit, not by any incidence constraint.
    ``extremal`` lists every class attaining ``best`` in canonical order;
    with ``complete=False`` it is only the best found within the budget.
    """
    u = _Universe(r, box)
    stats = SearchStats()
    found = _grow(u, max_lines, require_triangle, shards, shard, budget, stats, best_only=True)
    best = max(found.values(), default=0)
    extremal = [
        _place(from_key(k, r), box) for k in sorted(found) if found[k] == best
    ]
    return SearchResult(
        r, box, require_triangle, best, extremal, stats.complete, stats.nodes,
        pencil_capacity(r, box)[0],
    )


@dataclass(frozen=True)
class ConjectureVerdict:
    status: str  # "holds", "violated" or "inconclusive"
    tau: int | None
    bound: int
    witness: frozenset[str] | None = None
    interval: tuple[int, int] | None = None

    @property
    def holds(self) -> bool | None:
        return None if self.status == "inconclusive" else self.status == "holds"


def conjecture_check(ss: SegmentSystem, budget: int = DEFAULT_BUDGET) -> ConjectureVerdict:
    """Test tau <= ceil(r/2) on an intersecting r-segment system with r >= 5."""
    if ss.r < 5:
        raise ValueError(f"the bound is stated for r >= 5, got r={ss.r}")
    if not is_intersecting(ss.linear_system):
        raise ValueError("system is not intersecting")
    bound = (ss.r + 1) // 2
    try:
        tau, w = transversal_number(ss.linear_system, budget)
    except BudgetExceeded as exc:
        if exc.lower > bound:
            return ConjectureVerdict("violated", None, bound, None, (exc.lower, exc.upper))
        if exc.upper <= bound:
            return ConjectureVerdict("holds", None, bound, exc.witness, (exc.lower, exc.upper))
        return ConjectureVerdict("inconclusive", None, bound, None, (exc.lower, exc.upper))
    return ConjectureVerdict("holds" if tau <= bound else "violated", tau, bound, w.points)


@dataclass
class Drawing:
    """Geometry for rendering: strokes between segment ends, disks at points."""

    strokes: list[tuple[Point, Point]]
    points: list[Point]
    highlight: set[Point] = field(default_factory=set)


def export_drawing(ss: SegmentSystem, transversal: Iterable[str] | None = None) -> Drawing:
    strokes = [(s.base, s.end) for s in ss.segments]
    pts = sorted(ss.points)
    hi: set[Point] = set()
    for label in transversal or ():
        x, y = label.split(",")
        hi.add((int(x), int(y)))
    return Drawing(strokes, pts, hi)

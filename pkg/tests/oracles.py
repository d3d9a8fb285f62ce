"""Brute-force reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import random
from collections import Counter

import networkx as nx

from linsys.core import LinearSystem


def brute_tau(ls: LinearSystem) -> int:
    """Smallest k such that some k points meet every line."""
    pts = ls.sorted_points
    lines = [set(l) for l in ls.lines]
    for k in range(len(pts) + 1):
        for combo in itertools.combinations(pts, k):
            chosen = set(combo)
            if all(line & chosen for line in lines):
                return k
    raise AssertionError("unreachable")


def brute_nu2(ls: LinearSystem) -> int:
    """Largest set of lines with no point lying on three of them."""
    n = len(ls.lines)
    for k in range(n, -1, -1):
        for combo in itertools.combinations(range(n), k):
            c = Counter(p for i in combo for p in ls.lines[i])
            if all(v <= 2 for v in c.values()):
                return k
    raise AssertionError("unreachable")


def brute_girth(g: nx.Graph) -> float:
    best = float("inf")
    for cycle in nx.simple_cycles(g.to_directed()):
        if len(cycle) >= 3:
            best = min(best, len(cycle))
    return best


def random_linear_system(rng: random.Random, max_points: int = 20, max_lines: int = 12) -> LinearSystem:
    """Random valid linear system by rejection: lines pairwise share at most one point."""
    npts = rng.randint(1, max_points)
    pts = [f"v{i}" for i in range(npts)]
    target = rng.randint(0, max_lines)
    lines: list[frozenset[str]] = []
    attempts = 0
    while len(lines) < target and attempts < 400:
        attempts += 1
        size = rng.randint(1, min(5, npts))
        cand = frozenset(rng.sample(pts, size))
        if cand in lines or any(len(cand & l) > 1 for l in lines):
            continue
        lines.append(cand)
    return LinearSystem.from_lines([sorted(l) for l in lines])


def random_planar_graph(rng: random.Random, n: int) -> nx.Graph:
    """Subgraph of a random triangulation grown by inserting vertices into faces."""
    g = nx.Graph([(0, 1), (1, 2), (0, 2)])
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        g.add_edges_from([(v, a), (v, b), (v, c)])
        faces += [(a, b, v), (b, c, v), (c, a, v)]
    edges = list(g.edges())
    drop = rng.sample(edges, rng.randint(0, len(edges) // 3))
    g.remove_edges_from(drop)
    return g

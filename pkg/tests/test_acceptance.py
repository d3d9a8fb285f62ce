"""Acceptance criteria 1-9. Each test records one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py`` for a plain listing.
"""

from __future__ import annotations

import contextlib
import io
import random
import sys
import time
from functools import cache
from pathlib import Path

import networkx as nx

from linsys.cli import main as cli_main
from linsys.core import (
    are_isomorphic,
    degrees,
    fano,
    padded_fano_minus_line,
    is_intersecting,
    uniformity,
)
from linsys.levi import (
    complete_bipartite,
    girth,
    heawood,
    is_planar,
    levi_graph,
    max_lines_int,
    petersen,
    planar_edge_bound,
    validate_certificate,
)
from linsys.segments import conjecture_check, enumerate_classes, max_lines_search
from linsys.solvers import transversal_number, two_packing_number

from oracles import brute_nu2, brute_tau, random_linear_system, random_planar_graph

RESULTS: list[str] = []


@contextlib.contextmanager
def criterion(n: int, title: str, limit: float | None = None):
    """Record PASS/FAIL for criterion ``n``; ``limit`` is a runtime cap in seconds."""
    start = time.perf_counter()
    info: dict[str, str] = {"detail": ""}
    ok = False
    try:
        yield info
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"runtime {elapsed:.2f}s exceeds {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {n}: {title} ({elapsed:.2f}s)"
        if info["detail"]:
            line += f" -- {info['detail']}"
        RESULTS.append(line)
        print(line)


@cache
def sweep(r: int, box: int, max_lines: int | None):
    """(segment system, tau, nu2) for every enumerated class."""
    res = enumerate_classes(r, max_lines, box)
    assert res.complete
    out = []
    for ss in res.systems():
        ls = ss.linear_system
        out.append((ss, transversal_number(ls)[0], two_packing_number(ls)[0]))
    return tuple(out)


SMALL_SWEEP = [(2, 4, 6), (3, 4, 6), (4, 4, 6)]


def test_criterion_1_fano_reference_values():
    with criterion(1, "Fano tau=3, nu2=4, Heawood Levi graph non-planar", limit=1.0) as info:
        ls = fano()
        tau, nu2 = transversal_number(ls)[0], two_packing_number(ls)[0]
        assert (tau, nu2) == (3, 4)
        assert (brute_tau(ls), brute_nu2(ls)) == (3, 4)
        g = levi_graph(ls)
        assert g.number_of_nodes() == 14 and g.number_of_edges() == 21
        assert girth(g) == 6
        bound = planar_edge_bound(14, 6)
        assert bound == 18 < g.number_of_edges()
        planar, cert = is_planar(g)
        assert not planar and validate_certificate(g, cert)
        info["detail"] = f"tau={tau} nu2={nu2} |V|=14 |E|=21 girth=6 bound={bound}"


def test_criterion_2_padded_fano_realization():
    with criterion(2, "padded Fano-minus-line system and its 4-segment realization", limit=30.0) as info:
        ls = padded_fano_minus_line()
        tau, nu2 = transversal_number(ls)[0], two_packing_number(ls)[0]
        assert uniformity(ls) == 4 and is_intersecting(ls)
        assert (tau, nu2, len(ls.lines)) == (3, 4, 6)
        assert len(ls.lines) <= max_lines_int(4) == (3 * 4 + 1) // 2 == 6
        assert tau <= 2 * (4 + 1) // 3 == 3
        res = max_lines_search(4, 6)
        assert res.best >= 6
        assert are_isomorphic(res.best_system.linear_system, ls)[0]
        info["detail"] = (
            f"search r=4 box=6 best={res.best}, {len(res.extremal)} extremal classes, "
            "all checked isomorphic"
        )
        for ss in res.extremal:
            assert are_isomorphic(ss.linear_system, ls)[0]


def test_criterion_3_sandwich_sweep():
    with criterion(3, "ceil(nu2/2) <= tau <= nu2(nu2-1)/2 sweep, r in {2,3,4}, box 4", limit=300.0) as info:
        checked = 0
        outside = []
        violations = []
        for r, box, m in SMALL_SWEEP:
            for ss, tau, nu2 in sweep(r, box, m):
                ok = (nu2 + 1) // 2 <= tau <= nu2 * (nu2 - 1) // 2
                if nu2 >= 2:
                    checked += 1
                    if not ok:
                        violations.append((r, ss.segments, tau, nu2))
                else:
                    outside.append((r, len(ss), tau, nu2, ok))
        # systems with |L| = nu2 = 1 sit outside the |L| > nu2 convention
        assert all(n == 1 and t == 1 and v == 1 for _, n, t, v, _ in outside)
        info["detail"] = (
            f"{checked} systems, {len(violations)} violations; "
            f"{len(outside)} single-segment systems excluded (tau=1 > 0 = upper bound)"
        )
        assert not violations, violations[:3]


def test_criterion_4_degree_one_point_sweep():
    with criterion(4, "degree-1 point and tau <= r-1, r in {3,4}, box 4") as info:
        checked = 0
        bad = []
        for r, box, m in SMALL_SWEEP[1:]:
            for ss, tau, _ in sweep(r, box, m):
                checked += 1
                if not degrees(ss.linear_system).points_of_degree(1) or tau > r - 1:
                    bad.append(ss.segments)
        info["detail"] = f"{checked} systems, {len(bad)} violations"
        assert not bad, bad[:3]


def test_criterion_5_r_at_least_nu2_sweep():
    with criterion(5, "nu2 >= 3 implies r >= nu2, r in {2,3,4} box 4 and r=5 box 5") as info:
        checked = 0
        bad = []
        outside = 0
        for r, box, m in SMALL_SWEEP + [(5, 5, None)]:
            for ss, _, nu2 in sweep(r, box, m):
                if nu2 < 3:
                    continue
                if len(ss) <= nu2:
                    # |L| = nu2: outside the |L| > nu2 convention
                    outside += 1
                    continue
                checked += 1
                if r < nu2:
                    bad.append((r, nu2, ss.segments))
        info["detail"] = (
            f"{checked} systems with nu2 >= 3, {len(bad)} violations; "
            f"{outside} with |L| = nu2 set aside (incl. the r=2 triangle)"
        )
        assert not bad, bad[:3]


def test_criterion_6_conjecture_r5():
    with criterion(6, "tau <= 3 for intersecting 5-segment systems, box 5") as info:
        res = enumerate_classes(5, None, 5)
        counterexamples = []
        inconclusive = 0
        worst = 0
        n = 0
        for ss in res.systems():
            n += 1
            v = conjecture_check(ss)
            if v.status == "inconclusive":
                inconclusive += 1
            elif not v.holds:
                counterexamples.append(ss)
                print("COUNTEREXAMPLE", v.tau, ss.segments)
            else:
                worst = max(worst, v.tau or 0)
        info["detail"] = (
            f"{n} classes (search complete={res.complete}), max tau={worst}, "
            f"{len(counterexamples)} counterexamples, {inconclusive} inconclusive"
        )
        assert res.complete and not counterexamples and not inconclusive


def test_criterion_7_planarity_certificates():
    with criterion(7, "planarity verdicts with validated certificates") as info:
        cases = [
            ("K4", nx.complete_graph(4), True),
            ("K5", nx.complete_graph(5), False),
            ("K3,3", complete_bipartite(3, 3), False),
            ("Petersen", petersen(), False),
            ("Heawood", heawood(), False),
        ]
        rng = random.Random(20240607)
        for k in range(10):
            cases.append((f"random{k}", random_planar_graph(rng, rng.randint(4, 30)), True))
        for name, g, expected in cases:
            planar, cert = is_planar(g)
            assert planar is expected, name
            assert validate_certificate(g, cert), name
        info["detail"] = f"{len(cases)} graphs, all certificates valid"


def test_criterion_8_solver_oracle_equivalence():
    with criterion(8, "branch and bound tau, nu2 equal brute force on 200 random systems") as info:
        rng = random.Random(8)
        agree = 0
        for _ in range(200):
            ls = random_linear_system(rng, 20, 12)
            if (transversal_number(ls)[0], two_packing_number(ls)[0]) == (brute_tau(ls), brute_nu2(ls)):
                agree += 1
        info["detail"] = f"{agree}/200 agree"
        assert agree == 200


def _search_bytes(tmp: Path, extra: list[str]) -> tuple[bytes, dict[str, bytes]]:
    out_dir = tmp / ("_".join(extra) or "single")
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["search", "--r", "3", "--box", "3", "--list", "--out", str(out_dir), *extra])
    assert code == 0
    files = {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}
    return buf.getvalue().encode(), files


def test_criterion_9_shard_determinism(tmp_path):
    with criterion(9, "search --shards 4 output byte-identical to one shard, r=3 box 3") as info:
        single = _search_bytes(tmp_path, [])
        sharded = _search_bytes(tmp_path, ["--shards", "4"])
        parallel = _search_bytes(tmp_path, ["--shards", "4", "--jobs", "4"])
        assert single == sharded == parallel
        info["detail"] = f"{len(single[0])} bytes of output, {len(single[1])} extremal files identical"


if __name__ == "__main__":
    import tempfile

    tests = [
        test_criterion_1_fano_reference_values,
        test_criterion_2_padded_fano_realization,
        test_criterion_3_sandwich_sweep,
        test_criterion_4_degree_one_point_sweep,
        test_criterion_5_r_at_least_nu2_sweep,
        test_criterion_6_conjecture_r5,
        test_criterion_7_planarity_certificates,
        test_criterion_8_solver_oracle_equivalence,
    ]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    with tempfile.TemporaryDirectory() as d:
        try:
            test_criterion_9_shard_determinism(Path(d))
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)

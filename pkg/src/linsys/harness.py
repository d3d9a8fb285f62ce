"""Check bounds and structural statements about linear systems on concrete instances.

Each check states its hypotheses (``applicable``) and its conclusion
(``holds``). Statements that need a straight-line realization run as hard
checks only when the instance was built from lattice segments; when the
Levi graph merely passes the planarity test they run in advisory mode.
All bound arithmetic is integer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from . import solvers
from .core import LinearSystem, are_isomorphic, degrees, is_intersecting, uniformity
from .levi import levi_planarity_of, max_lines_int
from .segments import (
    SegmentSystem,
    build,
    contains_triangle,
    is_intersecting_segment_system,
)


class Evidence(enum.IntEnum):
    """How much is known about a straight-line realization, weakest first."""

    UNKNOWN = 0
    NECESSARY = 1  # Levi graph is planar
    REALIZED = 2


def ceil_half(n: int) -> int:
    return (n + 1) // 2


@dataclass
class CheckRecord:
    id: str
    statement: str
    applicable: bool
    holds: bool | None = None
    advisory: bool = False
    details: dict = field(default_factory=dict)
    witness: object = None
    note: str = ""

    @property
    def violated(self) -> bool:
        return self.applicable and not self.advisory and self.holds is False

    @property
    def inconclusive(self) -> bool:
        return self.applicable and self.holds is None

    @property
    def status(self) -> str:
        if not self.applicable:
            return "n/a"
        if self.holds is None:
            return "inconclusive"
        if self.advisory:
            return "advisory-holds" if self.holds else "advisory-fails"
        return "holds" if self.holds else "VIOLATED"


@dataclass
class TheoremReport:
    checks: list[CheckRecord]
    notes: list[str] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return any(c.violated for c in self.checks)

    @property
    def violations(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.violated]

    def by_id(self, check_id: str) -> CheckRecord:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)


class Instance:
    """A system plus lazily computed invariants shared by all checks."""

    def __init__(
        self,
        ls: LinearSystem,
        evidence: Evidence = Evidence.UNKNOWN,
        segments: SegmentSystem | None = None,
        budget: int = solvers.DEFAULT_BUDGET,
    ):
        self.ls = ls
        self.segments = segments
        self.evidence = Evidence.REALIZED if segments is not None else evidence
        self.budget = budget

    @classmethod
    def from_segments(cls, ss: SegmentSystem, budget: int = solvers.DEFAULT_BUDGET) -> Instance:
        return cls(ss.linear_system, Evidence.REALIZED, ss, budget)

    @classmethod
    def with_levi_evidence(cls, ls: LinearSystem, budget: int = solvers.DEFAULT_BUDGET) -> Instance:
        planar = levi_planarity_of(ls).planar
        return cls(ls, Evidence.NECESSARY if planar else Evidence.UNKNOWN, None, budget)

    @cached_property
    def tau_result(self):
        try:
            tau, w = solvers.transversal_number(self.ls, self.budget)
            return tau, w.points
        except solvers.BudgetExceeded as exc:
            return None, (exc.lower, exc.upper)

    @cached_property
    def nu2_result(self):
        try:
            nu2, w = solvers.two_packing_number(self.ls, self.budget)
            return nu2, w.lines
        except solvers.BudgetExceeded as exc:
            return None, (exc.lower, exc.upper)

    @property
    def tau(self) -> int | None:
        return self.tau_result[0]

    @property
    def nu2(self) -> int | None:
        return self.nu2_result[0]

    @cached_property
    def delta(self) -> int:
        return degrees(self.ls).max_degree

    @cached_property
    def intersecting(self) -> bool:
        return is_intersecting(self.ls)

    @cached_property
    def r(self) -> int | None:
        return uniformity(self.ls)

    @property
    def nlines(self) -> int:
        return len(self.ls.lines)

    def straight(self) -> tuple[bool, bool]:
        """(hypothesis met, advisory only)."""
        return self.evidence >= Evidence.NECESSARY, self.evidence < Evidence.REALIZED

    def standing(self) -> bool:
        """nu2 >= 2 and either more lines than nu2 or pairwise intersecting."""
        return self.nu2 >= 2 and (self.nlines > self.nu2 or self.intersecting)


def _inconclusive(cid: str, statement: str, inst: Instance) -> CheckRecord:
    return CheckRecord(
        cid, statement, True, None,
        details={"tau": inst.tau_result, "nu2": inst.nu2_result},
        note="solver budget exhausted",
    )


def _needs_solvers(inst: Instance) -> bool:
    return inst.tau is None or inst.nu2 is None


def _witness(inst: Instance) -> dict:
    return {"transversal": sorted(inst.tau_result[1]), "packing": list(inst.nu2_result[1])}


def check_sandwich(inst: Instance) -> CheckRecord:
    stmt = "ceil(nu2/2) <= tau <= nu2(nu2-1)/2"
    cid = "tau-nu2-sandwich"
    if _needs_solvers(inst):
        return _inconclusive(cid, stmt, inst)
    tau, nu2 = inst.tau, inst.nu2
    lo, hi = ceil_half(nu2), nu2 * (nu2 - 1) // 2
    details = {"tau": tau, "nu2": nu2, "lower": lo, "upper": hi}
    if not inst.standing():
        return CheckRecord(
            cid, stmt, False, details=details,
            note="needs nu2 >= 2 and (|L| > nu2 or intersecting)",
        )
    holds = lo <= tau <= hi
    return CheckRecord(cid, stmt, True, holds, details=details,
                       witness=None if holds else _witness(inst))


def check_max_degree_two(inst: Instance) -> CheckRecord:
    stmt = "Delta = 2 implies tau <= nu2 - 1 (and tau = ceil(nu2/2) if intersecting)"
    cid = "max-degree-two"
    if inst.delta != 2:
        return CheckRecord(cid, stmt, False, details={"delta": inst.delta})
    if _needs_solvers(inst):
        return _inconclusive(cid, stmt, inst)
    tau, nu2 = inst.tau, inst.nu2
    holds = tau <= nu2 - 1
    if inst.intersecting:
        holds = holds and tau == ceil_half(nu2)
    return CheckRecord(
        cid, stmt, True, holds,
        details={"tau": tau, "nu2": nu2, "intersecting": inst.intersecting},
        witness=None if holds else _witness(inst),
    )


def check_lines_equal_nu2(inst: Instance) -> CheckRecord:
    stmt = "|L| = nu2 iff Delta <= 2"
    cid = "lines-equal-nu2"
    if inst.nu2 is None:
        return _inconclusive(cid, stmt, inst)
    holds = (inst.nlines == inst.nu2) == (inst.delta <= 2)
    return CheckRecord(
        cid, stmt, True, holds,
        details={"lines": inst.nlines, "nu2": inst.nu2, "delta": inst.delta},
    )


def _straight_record(cid: str, stmt: str, inst: Instance, extra: bool, details: dict,
                     conclusion: Callable[[], bool], note: str = "") -> CheckRecord:
    met, advisory = inst.straight()
    if not (met and extra):
        reason = note or ("no straight-line evidence" if not met else "hypotheses not met")
        return CheckRecord(cid, stmt, False, details=details, note=reason)
    holds = conclusion()
    return CheckRecord(cid, stmt, True, holds, advisory=advisory, details=details,
                       witness=None if holds else _witness(inst), note=note)


def check_small_nu2(inst: Instance) -> CheckRecord:
    stmt = "straight line system with nu2 in {2,3,4} has tau <= nu2 - 1"
    cid = "small-nu2"
    if _needs_solvers(inst):
        return _inconclusive(cid, stmt, inst)
    extra = inst.nu2 in (2, 3, 4) and inst.standing()
    return _straight_record(
        cid, stmt, inst, extra, {"tau": inst.tau, "nu2": inst.nu2},
        lambda: inst.tau <= inst.nu2 - 1,
    )


def check_uniform_r_at_least_nu2(inst: Instance) -> CheckRecord:
    stmt = "intersecting r-uniform straight line system with r >= nu2 has tau <= nu2 - 1"
    cid = "uniform-r-at-least-nu2"
    if _needs_solvers(inst):
        return _inconclusive(cid, stmt, inst)
    r = inst.r
    extra = inst.intersecting and r is not None and r >= inst.nu2 and inst.standing()
    return _straight_record(
        cid, stmt, inst, extra, {"tau": inst.tau, "nu2": inst.nu2, "r": r},
        lambda: inst.tau <= inst.nu2 - 1,
    )


def _nu2_uniform(inst: Instance) -> bool:
    return inst.intersecting and inst.r is not None and inst.r == inst.nu2 and inst.nu2 >= 3


def check_line_count(inst: Instance, cid: str = "line-count") -> CheckRecord:
    stmt = "intersecting nu2-uniform straight line system, nu2 >= 3: |L| <= (3 nu2 + 1)/2"
    if inst.nu2 is None:
        return _inconclusive(cid, stmt, inst)
    extra = _nu2_uniform(inst)
    bound = max_lines_int(inst.nu2) if inst.nu2 >= 3 else None
    return _straight_record(
        cid, stmt, inst, extra, {"lines": inst.nlines, "nu2": inst.nu2, "bound": bound},
        lambda: inst.nlines <= bound,
    )


def check_two_thirds_tau(inst: Instance, cid: str = "two-thirds-tau") -> CheckRecord:
    stmt = "intersecting nu2-uniform straight line system, nu2 >= 3: tau <= 2(nu2 + 1)/3"
    if _needs_solvers(inst):
        return _inconclusive(cid, stmt, inst)
    extra = _nu2_uniform(inst)
    bound = 2 * (inst.nu2 + 1) // 3
    rec = _straight_record(
        cid, stmt, inst, extra, {"tau": inst.tau, "nu2": inst.nu2, "bound": bound},
        lambda: inst.tau <= bound,
    )
    if inst.r is not None and inst.r > inst.nu2:
        rec.note = "stated 'with r >= nu2' but nu2-uniformity forces r = nu2; r > nu2 not covered"
    return rec


def check_high_degree_tau(inst: Instance, cid: str = "high-degree-tau") -> CheckRecord:
    stmt = "nu2-uniform intersecting, |L| > nu2, Delta >= floor(nu2/2) + 2: tau = ceil(nu2/2)"
    if _needs_solvers(inst):
        return _inconclusive(cid, stmt, inst)
    nu2 = inst.nu2
    extra = (
        _nu2_uniform(inst)
        and inst.nlines > nu2
        and inst.delta >= nu2 // 2 + 2
    )
    return _straight_record(
        cid, stmt, inst, extra,
        {"tau": inst.tau, "nu2": nu2, "delta": inst.delta, "lines": inst.nlines},
        lambda: inst.tau == ceil_half(nu2),
    )


# Segment-system checks


def check_degree_one_point(inst: Instance) -> CheckRecord:
    stmt = "intersecting r-segment system, r >= 3: has a point of degree 1 and tau <= r - 1"
    cid = "degree-one-point"
    ss = inst.segments
    if ss is None or ss.r < 3 or not inst.intersecting:
        return CheckRecord(cid, stmt, False)
    if inst.tau is None:
        return _inconclusive(cid, stmt, inst)
    ones = degrees(inst.ls).points_of_degree(1)
    holds = bool(ones) and inst.tau <= ss.r - 1
    return CheckRecord(
        cid, stmt, True, holds,
        details={"degree_one_points": len(ones), "tau": inst.tau, "r": ss.r},
        witness=ones[0] if ones else None,
    )


def check_line_removal_closure(inst: Instance) -> CheckRecord:
    stmt = "removing any line of an intersecting r-segment system leaves one"
    cid = "line-removal-closure"
    ss = inst.segments
    if ss is None or not inst.intersecting:
        return CheckRecord(cid, stmt, False)
    for i in range(len(ss)):
        sub = build(ss.without(i).segments, ss.r)
        if not is_intersecting_segment_system(sub):
            return CheckRecord(cid, stmt, True, False, witness={"removed": i})
    return CheckRecord(cid, stmt, True, True, details={"lines": len(ss)})


def check_r_at_least_nu2(inst: Instance) -> CheckRecord:
    stmt = "intersecting r-segment system with nu2 >= 3 has r >= nu2"
    cid = "r-at-least-nu2"
    ss = inst.segments
    if ss is None or not inst.intersecting:
        return CheckRecord(cid, stmt, False)
    if inst.nu2 is None:
        return _inconclusive(cid, stmt, inst)
    details = {"r": ss.r, "nu2": inst.nu2}
    if inst.nu2 < 3:
        return CheckRecord(cid, stmt, False, details=details)
    if inst.nlines <= inst.nu2:
        return CheckRecord(
            cid, stmt, False, details=details,
            note="outside the |L| > nu2 convention; the r = 2 lattice triangle "
            "(|L| = nu2 = 3) would otherwise contradict it",
        )
    return CheckRecord(cid, stmt, True, ss.r >= inst.nu2, details=details)


def check_half_r_tau(inst: Instance, budget: int | None = None) -> CheckRecord:
    stmt = "intersecting r-segment system, r >= 5: tau <= ceil(r/2) (conjectured)"
    cid = "half-r-tau"
    ss = inst.segments
    if ss is None or ss.r < 5 or not inst.intersecting:
        return CheckRecord(cid, stmt, False)
    bound = ceil_half(ss.r)
    tau, extra = inst.tau_result
    if tau is None:
        lo, hi = extra
        if lo > bound:
            return CheckRecord(cid, stmt, True, False, details={"interval": extra, "bound": bound})
        if hi <= bound:
            return CheckRecord(cid, stmt, True, True, details={"interval": extra, "bound": bound})
        return _inconclusive(cid, stmt, inst)
    holds = tau <= bound
    rec = CheckRecord(
        cid, stmt, True, holds, details={"tau": tau, "bound": bound},
        witness=None if holds else {"segments": ss, "transversal": sorted(extra)},
    )
    if not holds:
        rec.note = "COUNTEREXAMPLE to the conjectured bound"
    return rec


def check_five_segment_triangle(inst: Instance) -> list[CheckRecord]:
    stmt_lines = "intersecting 5-segment system with a triangle has at most 6 lines"
    stmt_nu2 = "intersecting 5-segment system with a triangle has nu2 = 4"
    ss = inst.segments
    if ss is None or ss.r != 5 or not inst.intersecting or contains_triangle(ss) is None:
        return [
            CheckRecord("five-segment-triangle-lines", stmt_lines, False),
            CheckRecord("five-segment-triangle-nu2", stmt_nu2, False),
        ]
    lines = CheckRecord(
        "five-segment-triangle-lines", stmt_lines, True, len(ss) <= 6,
        details={"lines": len(ss)},
    )
    if inst.nu2 is None:
        nu2 = _inconclusive("five-segment-triangle-nu2", stmt_nu2, inst)
    else:
        nu2 = CheckRecord(
            "five-segment-triangle-nu2", stmt_nu2, True, inst.nu2 == 4, advisory=True,
            details={"nu2": inst.nu2, "lines": len(ss)},
            note="cited without proof; fails on small instances under the system-line triangle reading",
        )
    return [lines, nu2]


def representability_note(inst: Instance) -> CheckRecord:
    stmt = "r = nu2 - 1 systems can be isomorphic to an intersecting r-segment system"
    applicable = inst.nu2 is not None and inst.r is not None and inst.r == inst.nu2 - 1 and inst.nu2 >= 3
    return CheckRecord(
        "representability-note", stmt, False,
        details={"r": inst.r, "nu2": inst.nu2, "hypotheses_met": applicable},
        note="existence claim only; not checkable on an instance",
    )


def check_nu2_isomorphic_line_count(
    system: LinearSystem, reference: LinearSystem, reference_evidence: Evidence = Evidence.REALIZED
) -> CheckRecord:
    """If ``system`` and an intersecting nu2-uniform straight ``reference`` share a
    pruned core, they have equally many lines, at most (3 nu2 + 1)/2."""
    stmt = "nu2-isomorphic to an intersecting nu2-uniform straight system: same |L|, bounded"
    cid = "nu2-isomorphic-line-count"
    ref = Instance(reference, reference_evidence)
    if ref.nu2 is None:
        return _inconclusive(cid, stmt, ref)
    iso, _ = are_isomorphic(system, reference)
    met, advisory = ref.straight()
    if not (iso and met and _nu2_uniform(ref)):
        return CheckRecord(cid, stmt, False, details={"isomorphic_cores": iso})
    r = uniformity(system)
    bound = max_lines_int(ref.nu2)
    holds = len(system.lines) == len(reference.lines) <= bound
    note = "" if r is None or r + 1 >= ref.nu2 else "r + 1 >= nu2 side condition not met"
    return CheckRecord(
        cid, stmt, True, holds, advisory=advisory,
        details={"lines": len(system.lines), "reference_lines": len(reference.lines), "bound": bound},
        note=note,
    )


ABSTRACT_CHECKS: dict[str, Callable[[Instance], CheckRecord]] = {
    "tau-nu2-sandwich": check_sandwich,
    "max-degree-two": check_max_degree_two,
    "lines-equal-nu2": check_lines_equal_nu2,
    "small-nu2": check_small_nu2,
    "uniform-r-at-least-nu2": check_uniform_r_at_least_nu2,
    "line-count": check_line_count,
    "two-thirds-tau": check_two_thirds_tau,
    "high-degree-tau": check_high_degree_tau,
    "representability-note": representability_note,
}

SEGMENT_CHECKS: dict[str, Callable[[Instance], object]] = {
    "degree-one-point": check_degree_one_point,
    "line-removal-closure": check_line_removal_closure,
    "r-at-least-nu2": check_r_at_least_nu2,
    "segment-line-count": lambda inst: check_line_count(inst, "segment-line-count"),
    "segment-two-thirds-tau": lambda inst: check_two_thirds_tau(inst, "segment-two-thirds-tau"),
    "segment-high-degree-tau": lambda inst: check_high_degree_tau(inst, "segment-high-degree-tau"),
    "half-r-tau": check_half_r_tau,
    "five-segment-triangle": check_five_segment_triangle,
}

ALIASES = {"eq1": "tau-nu2-sandwich"}

ALL_CHECK_IDS = list(ABSTRACT_CHECKS) + list(SEGMENT_CHECKS)


def resolve_ids(spec: str | None) -> list[str] | None:
    """Parse a ``--theorems`` value; ``None`` or ``all`` selects everything."""
    if spec is None or spec == "all":
        return None
    out = []
    for raw in spec.split(","):
        name = ALIASES.get(raw.strip(), raw.strip())
        if name not in ABSTRACT_CHECKS and name not in SEGMENT_CHECKS:
            raise KeyError(f"unknown check {raw!r}")
        out.append(name)
    return out


def run_checks(inst: Instance, only: list[str] | None = None) -> TheoremReport:
    checks: list[CheckRecord] = []
    table = dict(ABSTRACT_CHECKS)
    if inst.segments is not None:
        table.update(SEGMENT_CHECKS)
    for cid, fn in table.items():
        if only is not None and cid not in only:
            continue
        out = fn(inst)
        checks.extend(out if isinstance(out, list) else [out])
    notes = []
    if inst.evidence == Evidence.NECESSARY:
        notes.append("straight-line statements are advisory: Levi graph planar, no realization given")
    return TheoremReport(checks, notes)


def check_segment_family(ss: SegmentSystem, budget: int = solvers.DEFAULT_BUDGET,
                         only: list[str] | None = None) -> TheoremReport:
    return run_checks(Instance.from_segments(ss, budget), only)


def check_linear_system(ls: LinearSystem, evidence: Evidence | None = None,
                        budget: int = solvers.DEFAULT_BUDGET,
                        only: list[str] | None = None) -> TheoremReport:
    if evidence is None:
        inst = Instance.with_levi_evidence(ls, budget)
    else:
        inst = Instance(ls, evidence, None, budget)
    return run_checks(inst, only)

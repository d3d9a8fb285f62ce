"""Text formats (``linsys 1``, ``segsys 1``), report rendering and SVG export."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from fractions import Fraction

from .core import DuplicatePointInLine, LinearSystem, validate
from .segments import Drawing, Segment, SegmentError, SegmentSystem, build


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class BadHeader(ParseError):
    pass


class EmptyLineRecord(ParseError):
    pass


class MissingR(ParseError):
    pass


class BadRecord(ParseError):
    pass


def _records(text: str):
    """Yield (lineno, tokens) for non-blank lines with comments stripped."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = body.split()
        if toks:
            yield lineno, toks


def sniff_format(text: str) -> str | None:
    for _, toks in _records(text):
        head = " ".join(toks)
        return {"linsys 1": "linsys", "segsys 1": "segsys"}.get(head)
    return None


def parse_linsys(text: str) -> LinearSystem:
    recs = _records(text)
    first = next(recs, None)
    if first is None or first[1] != ["linsys", "1"]:
        raise BadHeader("expected header 'linsys 1'", first[0] if first else 1)
    lines = []
    for lineno, toks in recs:
        if toks[0] != "line":
            raise BadRecord(f"unknown record {toks[0]!r}", lineno)
        pts = toks[1:]
        if not pts:
            raise EmptyLineRecord("line record without points", lineno)
        seen = set()
        for p in pts:
            if p in seen:
                err = DuplicatePointInLine(len(lines), p)
                err.lineno = lineno
                raise err
            seen.add(p)
        lines.append(tuple(pts))
    ls = LinearSystem(frozenset(p for l in lines for p in l), tuple(lines))
    result = validate(ls)
    if not result:
        raise result.error
    return ls


def serialize_linsys(ls: LinearSystem) -> str:
    """Canonical text: tokens sorted within each line, lines sorted."""
    rows = sorted(sorted(line) for line in ls.lines)
    return "linsys 1\n" + "".join("line " + " ".join(row) + "\n" for row in rows)


def canonical_linsys(ls: LinearSystem) -> LinearSystem:
    return parse_linsys(serialize_linsys(ls))


def parse_segsys(text: str) -> SegmentSystem:
    recs = _records(text)
    first = next(recs, None)
    if first is None or first[1] != ["segsys", "1"]:
        raise BadHeader("expected header 'segsys 1'", first[0] if first else 1)
    r = None
    segs: list[Segment] = []
    linenos: list[int] = []
    last = first[0]
    for lineno, toks in recs:
        last = lineno
        kind = toks[0]
        try:
            if kind == "r" and len(toks) == 2:
                if r is not None:
                    raise BadRecord("r given twice", lineno)
                r = int(toks[1])
                if r < 2:
                    raise BadRecord(f"r must be at least 2, got {r}", lineno)
            elif kind == "seg" and len(toks) == 5:
                if r is None:
                    raise MissingR("seg record before r", lineno)
                x, y, dx, dy = (int(t) for t in toks[1:])
                seg = Segment((x, y), (dx, dy), r)
                seg.check()
                segs.append(seg)
                linenos.append(lineno)
            else:
                raise BadRecord(f"malformed record {' '.join(toks)!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            if isinstance(exc, SegmentError):
                exc.lineno = lineno
                raise
            raise BadRecord(str(exc), lineno) from exc
    if r is None:
        raise MissingR("no 'r' record", last)
    try:
        return build(segs, r)
    except SegmentError as exc:
        pair = getattr(exc, "segments", None)
        if pair is not None:
            exc.lineno = linenos[pair[1]]
        raise


def serialize_segsys(ss: SegmentSystem) -> str:
    """Canonical text: segments sorted by (dir, base)."""
    rows = sorted((s.normalized() for s in ss.segments), key=lambda s: s.sort_key)
    body = "".join(
        f"seg {s.base[0]} {s.base[1]} {s.dir[0]} {s.dir[1]}\n" for s in rows
    )
    return f"segsys 1\nr {ss.r}\n" + body


# Rendering

UNIT = 40
MARGIN = 20
DISK_RADIUS = 4


def render_svg(drawing: Drawing) -> str:
    xs = [p[0] for p in drawing.points] or [0]
    ys = [p[1] for p in drawing.points] or [0]
    x0, y1 = min(xs), max(ys)
    width = UNIT * (max(xs) - x0) + 2 * MARGIN
    height = UNIT * (y1 - min(ys)) + 2 * MARGIN

    def px(p):
        return MARGIN + UNIT * (p[0] - x0), MARGIN + UNIT * (y1 - p[1])

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=str(width),
        height=str(height),
        viewBox=f"0 0 {width} {height}",
    )
    strokes = ET.SubElement(svg, "g", id="segments", stroke="black", fill="none")
    strokes.set("stroke-width", "2")
    for a, b in drawing.strokes:
        (xa, ya), (xb, yb) = px(a), px(b)
        ET.SubElement(strokes, "line", x1=str(xa), y1=str(ya), x2=str(xb), y2=str(yb))
    disks = ET.SubElement(svg, "g", id="points", fill="black")
    for p in drawing.points:
        cx, cy = px(p)
        attrs = {"cx": str(cx), "cy": str(cy), "r": str(DISK_RADIUS)}
        if p in drawing.highlight:
            attrs.update({"fill": "red", "class": "transversal"})
        ET.SubElement(disks, "circle", attrs)
    ET.indent(svg)
    body = ET.tostring(svg, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n' + body + "\n"


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple, set, frozenset)):
        return " ".join(str(x) for x in sorted(v, key=str))
    return str(v)


def machine_lines(pairs: list[tuple[str, object]]) -> str:
    return "".join(f"{k}\t{fmt_value(v)}\n" for k, v in pairs)


def human_lines(pairs: list[tuple[str, object]]) -> str:
    width = max((len(k) for k, _ in pairs), default=0)
    return "".join(f"{k.ljust(width)}  {fmt_value(v)}\n" for k, v in pairs)


def render_report(report, machine: bool = False) -> str:
    out = []
    for c in report.checks:
        if machine:
            out.append(f"check\t{c.id}\t{c.status}\n")
            if c.violated:
                out.append(f"counterexample\t{c.id}\t{c.witness}\n")
        else:
            detail = ", ".join(f"{k}={fmt_value(v)}" for k, v in c.details.items())
            line = f"[{c.status}] {c.id}: {c.statement}"
            if detail:
                line += f" ({detail})"
            if c.note:
                line += f" -- {c.note}"
            out.append(line + "\n")
            if c.violated and c.witness is not None:
                out.append(f"    counterexample: {c.witness}\n")
    for n in report.notes:
        out.append(("note\t" if machine else "note: ") + n + "\n")
    verdict = "violated" if report.violated else "ok"
    out.append(("verdict\t" if machine else "verdict: ") + verdict + "\n")
    return "".join(out)

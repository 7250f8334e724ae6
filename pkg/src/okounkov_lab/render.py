"""CSV tables with manifest headers, and deterministic SVG drawings."""

from __future__ import annotations

import csv
import decimal
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .geometry import Polytope
from .tables import ConvergenceTable, format_rational

GENERATOR = f"okounkov-lab {__version__}"
DECIMAL_DIGITS = 15


@dataclass(frozen=True)
class RunManifest:
    command: str
    input_sha256: str
    caps: dict
    seed: int = 0
    version: str = __version__

    def header_lines(self) -> list[str]:
        caps = " ".join(f"{k}={_cap_text(v)}" for k, v in sorted(self.caps.items()))
        return [
            f"# command: {self.command}",
            f"# input_sha256: {self.input_sha256}",
            f"# caps: {caps}",
            f"# seed: {self.seed}",
            f"# version: {self.version}",
        ]


def _cap_text(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_cap_text(x) for x in v)
    return str(v)


def decimal_text(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        value = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
    return format(value, "f")


def index_text(index) -> str:
    if isinstance(index, tuple):
        return ";".join(index_text(x) for x in index)
    return str(index)


@dataclass
class CsvTable:
    name: str
    header: list[str]
    rows: list[list[str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def render(self, manifest: RunManifest) -> str:
        buf = io.StringIO()
        for line in manifest.header_lines():
            buf.write(line + "\n")
        buf.write(f"# table: {self.name}\n")
        for note in self.notes:
            buf.write(f"# {note}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()


def rational_columns(value: Fraction, target: Fraction | None) -> list[str]:
    value = Fraction(value)
    if target is None:
        return [format_rational(value), decimal_text(value), "", ""]
    target = Fraction(target)
    return [format_rational(value), decimal_text(value), format_rational(target),
            format_rational(abs(value - target))]


def convergence_csv(table: ConvergenceTable, index_name: str = "m", name: str | None = None) -> CsvTable:
    out = CsvTable(name or table.label, [index_name, "value", "decimal", "target", "residual"])
    for i, v in table.rows:
        out.rows.append([index_text(i)] + rational_columns(v, table.target))
    return out


# ---------------------------------------------------------------------------
# SVG

SIZE = 400
MARGIN = 40


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _frame(xs, ys):
    lo_x, hi_x = min(xs + [Fraction(0)]), max(xs + [Fraction(1)])
    lo_y, hi_y = min(ys + [Fraction(0)]), max(ys + [Fraction(1)])
    span = max(hi_x - lo_x, hi_y - lo_y)
    scale = Fraction(SIZE - 2 * MARGIN) / span

    def to_px(x, y):
        return (float(MARGIN + (Fraction(x) - lo_x) * scale), float(SIZE - MARGIN - (Fraction(y) - lo_y) * scale))

    return to_px


def _open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<!-- generator: {GENERATOR} -->",
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]


def _axes(to_px) -> list[str]:
    ox, oy = to_px(0, 0)
    return [
        f'<line x1="{_fmt(ox)}" y1="{_fmt(oy)}" x2="{SIZE - MARGIN // 2}" y2="{_fmt(oy)}" stroke="gray"/>',
        f'<line x1="{_fmt(ox)}" y1="{_fmt(oy)}" x2="{_fmt(ox)}" y2="{MARGIN // 2}" stroke="gray"/>',
    ]


def polygon_svg(body: Polytope, title: str) -> str:
    """Filled 2-D polytope with every vertex labelled by its exact coordinates."""
    if body.dim != 2:
        raise ValueError("only 2-dimensional bodies can be drawn")
    verts = list(body.vertices)
    to_px = _frame([v[0] for v in verts], [v[1] for v in verts])
    ordered = _ccw(verts)
    lines = _open(title) + _axes(to_px)
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (to_px(*v) for v in ordered))
    if len(ordered) >= 3:
        lines.append(f'<polygon points="{pts}" fill="#9ecae1" stroke="#08519c" stroke-width="2"/>')
    elif len(ordered) == 2:
        lines.append(f'<polyline points="{pts}" fill="none" stroke="#08519c" stroke-width="2"/>')
    for v in ordered:
        x, y = to_px(*v)
        label = f"({index_text(v[0])}, {index_text(v[1])})"
        lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#08519c"/>')
        lines.append(f'<text x="{_fmt(x + 5)}" y="{_fmt(y - 5)}" font-size="11">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _ccw(verts):
    if len(verts) < 3:
        return sorted(verts)
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)

    def key(v):
        # exact angular order: half-plane, then cross product against a fixed ray
        dx, dy = v[0] - cx, v[1] - cy
        half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
        return half, _PseudoAngle(dx, dy)

    return sorted(verts, key=key)


class _PseudoAngle:
    __slots__ = ("dx", "dy")

    def __init__(self, dx, dy):
        self.dx, self.dy = dx, dy

    def __lt__(self, other):
        return self.dx * other.dy - self.dy * other.dx > 0

    def __eq__(self, other):
        return self.dx * other.dy - self.dy * other.dx == 0


def staircase_svg(ideals: Sequence[tuple[str, Sequence[Sequence[int]]]], title: str) -> str:
    """Staircases of monomial ideals in two variables, one path per (label, generators)."""
    colors = ["#08519c", "#cb181d", "#238b45", "#6a51a3"]
    all_gens = [tuple(g) for _, gens in ideals for g in gens]
    if any(len(g) != 2 for g in all_gens):
        raise ValueError("staircases need ideals in two variables")
    top = max([g[0] for g in all_gens] + [g[1] for g in all_gens] + [1]) + 1
    to_px = _frame([Fraction(0), Fraction(top)], [Fraction(0), Fraction(top)])
    lines = _open(title) + _axes(to_px)
    for n, (label, gens) in enumerate(ideals):
        color = colors[n % len(colors)]
        gens = sorted(tuple(g) for g in gens)
        if not gens:
            continue
        path = [(gens[0][0], top)]
        for i, g in enumerate(gens):
            path.append(g)
            nxt = gens[i + 1][0] if i + 1 < len(gens) else top
            path.append((nxt, g[1]))
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (to_px(*p) for p in path))
        lines.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for g in gens:
            x, y = to_px(*g)
            lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{color}"/>')
        lines.append(f'<text x="{MARGIN}" y="{14 + 14 * n}" font-size="12" fill="{color}">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

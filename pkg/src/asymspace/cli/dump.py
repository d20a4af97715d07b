"""Planar geometry dumps: unit balls and ball families as CSV and SVG."""
from __future__ import annotations

import os
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import cmp_to_key
from xml.sax.saxutils import escape

from ..geometry import Ball, PolyAsymNorm, is_t1
from ..ratlp import polytope_vertices, to_rat
from .io import write_atomic


class UnsupportedDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Polygon:
    label: str
    vertices: tuple  # exact, counter-clockwise
    clipped: bool = False


def decimal_str(x, digits: int) -> str:
    """x rounded half-to-even to ``digits`` places, in plain decimal notation."""
    x = to_rat(x)
    scaled = round(x * 10**digits)
    return format(Decimal(scaled).scaleb(-digits), "f")


def _ccw(points: list[tuple]) -> list[tuple]:
    """Sort the vertices of a convex polygon counter-clockwise, exactly."""
    if len(points) < 3:
        return list(points)
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)

    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(p, q):
        u, v = (p[0] - cx, p[1] - cy), (q[0] - cx, q[1] - cy)
        hu, hv = half(u), half(v)
        if hu != hv:
            return hu - hv
        cross = u[0] * v[1] - u[1] * v[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=cmp_to_key(cmp))


def _require_plane(dim: int) -> None:
    if dim != 2:
        raise UnsupportedDimensionError(f"geometry dumps need dimension 2, got {dim}")


def _box_rows(lo: Fraction, hi: Fraction):
    rows = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return rows, [hi, -lo, hi, -lo]


def unit_ball_polygon(p: PolyAsymNorm, clip: Fraction = Fraction(4)) -> Polygon:
    _require_plane(p.dim)
    rows, bounds = list(p.generators), [Fraction(1)] * len(p.generators)
    clipped = not is_t1(p)
    if clipped:
        br, bb = _box_rows(-clip, clip)
        rows, bounds = rows + br, bounds + bb
    return Polygon(p.name or "unit ball", tuple(_ccw(polytope_vertices(rows, bounds))), clipped)


def ball_polygons(balls: list[Ball], labels: list[str] | None = None) -> list[Polygon]:
    """One polygon per ball; unbounded balls are cut to a box around all of them."""
    if not balls:
        return []
    _require_plane(balls[0].norm.dim)
    bounded = is_t1(balls[0].norm)
    reach = max(abs(c) for b in balls for c in b.center) + 2 * max(b.radius for b in balls) + 1
    out = []
    for i, b in enumerate(balls):
        rows, bounds = [], []
        for r, v in b.constraints():
            rows.append(r)
            bounds.append(v)
        if not bounded:
            br, bb = _box_rows(-reach, reach)
            rows, bounds = rows + br, bounds + bb
        label = labels[i] if labels else f"ball {i}"
        out.append(Polygon(label, tuple(_ccw(polytope_vertices(rows, bounds))), not bounded))
    return out


def write_csv(path: str, poly: Polygon, digits: int) -> None:
    lines = ["x,y"] + [f"{decimal_str(x, digits)},{decimal_str(y, digits)}" for x, y in poly.vertices]
    write_atomic(path, "\n".join(lines) + "\n")


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")


def render_svg(polys: list[Polygon], digits: int, note: str | None = None, mark=None, size: int = 480) -> str:
    pts = [v for p in polys for v in p.vertices] + ([tuple(mark)] if mark is not None else [])
    xs, ys = [v[0] for v in pts] or [0], [v[1] for v in pts] or [0]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, Fraction(1))
    pad = span / 10
    scale = Fraction(size) / (span + 2 * pad)

    def sx(x):
        return decimal_str((x - lo_x + pad) * scale, digits)

    def sy(y):  # flip so y grows upwards
        return decimal_str((hi_y + pad - y) * scale, digits)

    h = decimal_str((hi_y - lo_y + 2 * pad) * scale, 0)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{h}" viewBox="0 0 {size} {h}">']
    for i, p in enumerate(polys):
        coords = " ".join(f"{sx(x)},{sy(y)}" for x, y in p.vertices)
        color = _COLORS[i % len(_COLORS)]
        dash = ' stroke-dasharray="4 3"' if p.clipped else ""
        parts.append(
            f'  <polygon points="{coords}" fill="{color}" fill-opacity="0.15" stroke="{color}"{dash}>'
            f"<title>{escape(p.label)}</title></polygon>"
        )
    if mark is not None:
        parts.append(f'  <circle cx="{sx(mark[0])}" cy="{sy(mark[1])}" r="4" fill="black"/>')
    if note:
        parts.append(f'  <text x="8" y="18" font-family="sans-serif" font-size="14">{escape(note)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _slug(label: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in label).strip("_") or "poly"


def dump_geometry(out_dir: str, norm: PolyAsymNorm, balls=None, labels=None, common=None, digits: int = 6):
    """Write unit_ball.csv/.svg and, given balls, one CSV per ball plus family.svg.

    ``common`` is the common point of the balls, or None for an empty
    intersection, which is then annotated in the overlay.
    """
    _require_plane(norm.dim)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    unit = unit_ball_polygon(norm)
    path = os.path.join(out_dir, "unit_ball.csv")
    write_csv(path, unit, digits)
    written.append(path)
    path = os.path.join(out_dir, "unit_ball.svg")
    write_atomic(path, render_svg([unit], digits, note=unit.label))
    written.append(path)
    if balls:
        polys = []
        for poly in ball_polygons(list(balls), labels):  # coinciding balls share one polygon
            same = next((k for k, p in enumerate(polys) if set(p.vertices) == set(poly.vertices)), None)
            if same is None:
                polys.append(poly)
            else:
                old = polys[same]
                polys[same] = Polygon(f"{old.label} + {poly.label}", old.vertices, old.clipped)
        for i, poly in enumerate(polys):
            path = os.path.join(out_dir, f"ball_{i:02d}_{_slug(poly.label)}.csv")
            write_csv(path, poly, digits)
            written.append(path)
        if common is None:
            note = "empty intersection"
        else:
            note = "common point (" + ", ".join(decimal_str(c, digits) for c in common) + ")"
        path = os.path.join(out_dir, "family.svg")
        write_atomic(path, render_svg(polys, digits, note=note, mark=common))
        written.append(path)
    return written


__all__ = [
    "Polygon",
    "UnsupportedDimensionError",
    "ball_polygons",
    "decimal_str",
    "dump_geometry",
    "render_svg",
    "unit_ball_polygon",
    "write_csv",
]

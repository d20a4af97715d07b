"""Convex-hull membership and brute-force vertex enumeration (exact)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .linalg import DimensionError, as_vec, check_dims, dot, lincomb, neg, rank, solve_linear, unit
from .simplex import INFEASIBLE, UNBOUNDED, LPOutcome, feasible, maximize


@dataclass(frozen=True)
class HullMembership:
    inside: bool
    multipliers: tuple | None = None  # convex weights, one per generator
    separator: tuple | None = None  # c with c.point > threshold >= c.g for every generator
    threshold: Fraction | None = None
    outcome: LPOutcome | None = None


def hull_membership(point: Sequence, generators: Sequence[Sequence], backend=None) -> HullMembership:
    """Decide whether ``point`` lies in conv(generators).

    Inside: convex multipliers reproducing the point exactly.  Outside: a
    functional ``c`` and threshold ``t`` with ``c.point > t >= c.g`` for all
    generators, read off the Farkas certificate of the multiplier system.
    """
    if not generators:
        raise ValueError("hull of an empty generator list")
    point = as_vec(point)
    gens = [as_vec(g) for g in generators]
    n = check_dims(point, *gens)
    m = len(gens)
    eq = [((Fraction(1),) * m, 1)]
    for k in range(n):
        eq.append((tuple(g[k] for g in gens), point[k]))
    out = feasible(m, eq=eq, nonneg=range(m), backend=backend)
    if out.status != INFEASIBLE:
        lam = out.point
        assert all(v >= 0 for v in lam) and sum(lam) == 1
        assert lincomb(lam, gens, n) == point
        return HullMembership(True, multipliers=lam, outcome=out)
    # w0 * 1 + w . g_i = bound multiplier_i >= 0 and w0 + w . point < 0
    w0, *w = out.eq_certificate
    c = neg(w)
    thr = w0
    assert dot(c, point) > thr and all(dot(c, g) <= thr for g in gens)
    return HullMembership(False, separator=c, threshold=thr, outcome=out)


def separation_gap(point: Sequence, generators: Sequence[Sequence], backend=None) -> Fraction:
    """max over c in [-1,1]^n of c.point - max_i c.g_i (> 0 iff outside the hull)."""
    point = as_vec(point)
    gens = [as_vec(g) for g in generators]
    n = check_dims(point, *gens)
    # variables (c_1..c_n, tau): maximize c.point - tau, c.g_i <= tau, |c_k| <= 1
    le = [(tuple(g) + (Fraction(-1),), 0) for g in gens]
    for k in range(n):
        e = unit(n + 1, k)
        le.append((e, 1))
        le.append((neg(e), 1))
    out = maximize(n + 1, tuple(point) + (Fraction(-1),), le=le, backend=backend)
    return out.value


def is_bounded(rows: Sequence[Sequence], backend=None) -> bool:
    """True when {x : rows . x <= 0} is {0}, i.e. every {rows . x <= b} is bounded."""
    rows = [as_vec(r) for r in rows]
    n = check_dims(*rows)
    le = [(r, 0) for r in rows]
    for k in range(n):
        for s in (1, -1):
            obj = tuple(Fraction(s) * v for v in unit(n, k))
            if maximize(n, obj, le=le, backend=backend).status == UNBOUNDED:
                return False
    return True


def polytope_vertices(rows: Sequence[Sequence], bounds: Sequence) -> list[tuple]:
    """Vertices of {x : rows . x <= bounds} by enumerating n-subsets of tight rows.

    Exponential in general; intended for the low-dimensional polytopes that
    appear as unit balls and dual sets here.
    """
    rows = [as_vec(r) for r in rows]
    bounds = as_vec(bounds)
    if len(rows) != len(bounds):
        raise DimensionError("rows and bounds differ in length")
    n = check_dims(*rows)
    found = []
    seen = set()
    for subset in combinations(range(len(rows)), n):
        sub = [rows[i] for i in subset]
        if rank(sub) < n:
            continue
        x = solve_linear(sub, [bounds[i] for i in subset])
        if x is None or x in seen:
            continue
        if all(dot(r, x) <= b for r, b in zip(rows, bounds)):
            seen.add(x)
            found.append(x)
    return found


def extreme_points(points: Sequence[Sequence]) -> list[tuple]:
    """Drop points that are convex combinations of the others (and duplicates)."""
    pts = []
    for p in map(as_vec, points):
        if p not in pts:
            pts.append(p)
    keep = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        if not others or not hull_membership(p, others).inside:
            keep.append(p)
    return keep

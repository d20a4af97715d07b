"""Reference computations that share no code with the package.

Slow and exhaustive by design: used only to cross-check the solver and the
geometry on small instances.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def gauss_solve(rows, rhs):
    """Unique solution of a square system, or None when singular."""
    n = len(rows)
    m = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] / m[col][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def vertices(rows, bounds):
    """All vertices of {x : rows . x <= bounds} by trying every n-subset of rows."""
    n = len(rows[0])
    out = set()
    for sub in combinations(range(len(rows)), n):
        x = gauss_solve([rows[i] for i in sub], [bounds[i] for i in sub])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(r, x)) <= b for r, b in zip(rows, bounds)):
            out.add(x)
    return out


def lp_max_by_vertices(c, rows, bounds):
    """max c.x over a bounded polytope; None when it is empty."""
    vs = vertices(rows, bounds)
    if not vs:
        return None
    return max(sum(a * v for a, v in zip(c, x)) for x in vs)


def poly_norm(gens, x):
    return max(sum(Fraction(a) * Fraction(v) for a, v in zip(g, x)) for g in gens)


def convex_hull_2d(points):
    """Andrew's monotone chain; returns the strict hull vertices counter-clockwise."""
    pts = sorted(set((Fraction(x), Fraction(y)) for x, y in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]
